#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qsr/layout.hpp"
#include "qsr/metrics.hpp"
#include "qsr/qstate.hpp"
#include "qsr/sampling.hpp"

namespace qsr {
namespace {

const Labels kC{"C"};

PureState qubits(std::initializer_list<Index> bits, std::vector<std::string> names) {
  std::vector<Subsystem> subs;
  for (const auto& n : names) subs.push_back({n, 2});
  std::vector<Index> d(bits);
  return PureState::basis(SystemLayout(subs), d);
}

TEST(Layout, TensorDimensionAndIndex) {
  const SystemLayout c{{"C", 2}};
  const SystemLayout b{{"B", 3}};
  EXPECT_EQ(concat(c, b).total_dim(), 6);

  const Index zero = 0, one = 1;
  const auto psi = tensor(PureState::basis(c, std::span(&zero, 1)),
                          PureState::basis(b, std::span(&one, 1)));
  EXPECT_EQ(psi.amplitudes()[1], Complex(1.0));
  EXPECT_NEAR(psi.amplitudes().norm(), 1.0, 1e-15);
}

TEST(Layout, DuplicateLabelsRejected) {
  EXPECT_THROW((SystemLayout{{"C", 2}, {"C", 2}}), LayoutError);
  EXPECT_THROW((SystemLayout{{"C", 0}}), LayoutError);
  EXPECT_THROW(concat(SystemLayout{{"C", 2}}, SystemLayout{{"C", 3}}), LayoutError);
}

TEST(Layout, SplitSubsystem) {
  const SystemLayout l{{"C", 8}, {"F", 2}};
  const std::array<Index, 3> d{2, 2, 2};
  const auto s = split_subsystem(l, "C", d);
  ASSERT_EQ(s.size(), 4u);
  EXPECT_EQ(s[0].label, "C1");
  EXPECT_EQ(s[2].dim, 2);
  EXPECT_EQ(s[3].label, "F");

  const std::array<Index, 3> degenerate{1, 4, 1};
  EXPECT_EQ(split_subsystem(SystemLayout{{"C", 4}}, "C", degenerate).total_dim(), 4);

  EXPECT_THROW(split_subsystem(SystemLayout{{"C", 6}}, "C", d), DimensionError);
}

TEST(Layout, SplitThenMergeIsBitExact) {
  SeededStream s(3);
  const auto psi = random_pure_state(SystemLayout{{"C", 8}, {"R", 3}}, s);
  const std::array<Subsystem, 3> f{{{"x", 2}, {"y", 2}, {"z", 2}}};
  const auto split = split_subsystem(psi, "C", f);
  const Labels xyz{"x", "y", "z"};
  const auto back = merge_subsystems(split, xyz, "C");
  EXPECT_EQ(back.layout(), psi.layout());
  EXPECT_TRUE(back.amplitudes() == psi.amplitudes());
}

TEST(Layout, ParseSpec) {
  const auto l = parse_layout_spec("C=2,A=3");
  EXPECT_EQ(to_string(l), "[C:2, A:3]");
  EXPECT_THROW(parse_layout_spec("C=2,A"), LayoutError);
  EXPECT_THROW(parse_layout_spec("C=x"), LayoutError);
}

TEST(Layout, PermutationMapMatchesDigits) {
  const SystemLayout l{{"X", 2}, {"Y", 3}, {"Z", 2}};
  const Labels order{"Z", "X", "Y"};
  const auto map = permutation_map(l, order);
  const auto r = l.reordered(order);
  for (Index i = 0; i < r.total_dim(); ++i) {
    const auto dn = digits_of(r, i);
    const auto d_old = digits_of(l, map[i]);
    EXPECT_EQ(dn[0], d_old[2]);
    EXPECT_EQ(dn[1], d_old[0]);
    EXPECT_EQ(dn[2], d_old[1]);
  }
}

TEST(QState, MaximallyMixedComposition) {
  const auto p4 = tensor(maximally_mixed(2, "X"), maximally_mixed(2, "Y"));
  EXPECT_TRUE(p4.matrix().isApprox(Matrix::Identity(4, 4) * 0.25, 1e-15));
}

TEST(QState, PartialTraceExamples) {
  const auto bell = maximally_entangled(2, "C", "A");
  EXPECT_TRUE(partial_trace(bell, kC).matrix().isApprox(maximally_mixed(2).matrix(), 1e-15));

  const auto ket = qubits({0, 1}, {"P", "Q"});
  const Labels p{"P"};
  const auto m = partial_trace(DensityOperator(ket), p).matrix();
  EXPECT_NEAR(std::abs(m(0, 0) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(m(1, 1)), 0.0, 1e-15);
}

TEST(QState, PartialTraceAgreesWithIndexLoop) {
  SeededStream s(11);
  const SystemLayout l{{"X", 2}, {"Y", 3}, {"Z", 2}};
  for (int trial = 0; trial < 20; ++trial) {
    const auto psi = random_pure_state(l, s);
    for (const auto& keep : std::vector<std::vector<int>>{{0}, {1}, {2}, {0, 2}, {1, 2}}) {
      Labels names;
      for (int k : keep) names.push_back(l[k].label);
      const auto got = partial_trace(psi, names).matrix();
      const auto want = oracle::partial_trace(psi.amplitudes(), {2, 3, 2}, keep);
      EXPECT_LT((got - want).norm(), 1e-12);
      EXPECT_NEAR(got.trace().real(), 1.0, 1e-12);
      EXPECT_GE(Eigen::SelfAdjointEigenSolver<Matrix>(got).eigenvalues().minCoeff(), -1e-12);
    }
  }
}

TEST(QState, DensityPartialTraceAgreesWithPure) {
  SeededStream s(12);
  const auto psi = random_pure_state(SystemLayout{{"X", 2}, {"Y", 2}, {"Z", 3}}, s);
  const Labels keep{"X", "Z"};
  const auto a = partial_trace(psi, keep).matrix();
  const auto b = partial_trace(DensityOperator(psi), keep).matrix();
  EXPECT_LT((a - b).norm(), 1e-12);
}

TEST(QState, SchmidtSymmetry) {
  SeededStream s(13);
  for (int trial = 0; trial < 20; ++trial) {
    const auto psi = random_pure_state(SystemLayout{{"X", 2}, {"Y", 4}}, s);
    const Labels x{"X"}, y{"Y"};
    auto ex = clamped_spectrum(partial_trace(psi, x).matrix());
    auto ey = clamped_spectrum(partial_trace(psi, y).matrix());
    EXPECT_NEAR(ex[0], ey[2], 1e-9);
    EXPECT_NEAR(ex[1], ey[3], 1e-9);
    EXPECT_NEAR(ey[0], 0.0, 1e-9);
  }
}

TEST(QState, TensorThenTraceReturnsFactor) {
  SeededStream s(14);
  const auto a = random_density(SystemLayout{{"X", 3}}, 2, s);
  const auto b = random_density(SystemLayout{{"Y", 2}}, 2, s);
  const Labels x{"X"};
  EXPECT_LT((partial_trace(tensor(a, b), x).matrix() - a.matrix()).norm(), 1e-12);
}

TEST(QState, ApplyBitFlip) {
  const auto psi = qubits({0, 0}, {"P", "Q"});
  Matrix x(2, 2);
  x << 0, 1, 1, 0;
  const Labels q{"Q"};
  const auto out = apply(LinearMap::unitary(SystemLayout{{"Q", 2}}, x), psi, q);
  EXPECT_EQ(out.layout(), psi.layout());
  EXPECT_EQ(out.amplitudes()[1], Complex(1.0));

  const auto same = apply(LinearMap::identity(SystemLayout{{"Q", 2}}), psi, q);
  EXPECT_EQ(trace_distance(same, psi), 0.0);
}

TEST(QState, ApplyInPlaceKeepsPosition) {
  SeededStream s(15);
  const auto psi = random_pure_state(SystemLayout{{"P", 2}, {"Q", 3}, {"R", 2}}, s);
  const auto u = haar_unitary(SystemLayout{{"U", 3}}, s);
  const Labels q{"Q"};
  const auto out = apply(u, psi, q);
  EXPECT_EQ(out.layout(), psi.layout());
  const Labels pr{"P", "R"};
  EXPECT_LT((partial_trace(out, pr).matrix() - partial_trace(psi, pr).matrix()).norm(), 1e-12);
}

TEST(QState, InPlaceMapMayChangeDimension) {
  SeededStream s(18);
  const auto psi = random_pure_state(SystemLayout{{"P", 2}, {"Q", 2}, {"R", 3}}, s);
  const LinearMap v(SystemLayout{{"Q", 2}}, SystemLayout{{"Q", 5}}, haar_isometry_matrix(5, 2, s),
                    MapKind::kIsometry);
  const Labels q{"Q"}, pr{"P", "R"};
  const auto out = apply(v, psi, q);
  EXPECT_EQ(out.layout(), (SystemLayout{{"P", 2}, {"Q", 5}, {"R", 3}}));
  EXPECT_LT((partial_trace(out, pr).matrix() - partial_trace(psi, pr).matrix()).norm(), 1e-12);
}

TEST(QState, IsometryPreservesOtherMarginal) {
  SeededStream s(16);
  const auto bell = maximally_entangled(2, "X", "Y");
  const LinearMap v(SystemLayout{{"Y", 2}}, SystemLayout{{"T", 3}},
                    haar_isometry_matrix(3, 2, s), MapKind::kIsometry);
  const Labels y{"Y"}, x{"X"};
  const auto out = apply(v, bell, y);
  EXPECT_EQ(out.layout(), (SystemLayout{{"X", 2}, {"T", 3}}));
  EXPECT_NEAR(out.amplitudes().norm(), 1.0, 1e-10);
  EXPECT_LT((partial_trace(out, x).matrix() - partial_trace(bell, x).matrix()).norm(), 1e-12);
}

TEST(QState, ApplyRejectsNonIsometryOnPureState) {
  const auto psi = qubits({0}, {"Q"});
  const LinearMap m(SystemLayout{{"Q", 2}}, SystemLayout{{"Q", 2}}, Matrix::Ones(2, 2));
  const Labels q{"Q"};
  EXPECT_THROW(apply(m, psi, q), InvariantError);
  EXPECT_NO_THROW(apply(m, psi.raw(), q));
}

TEST(QState, DensityApplyMatchesPure) {
  SeededStream s(17);
  const auto psi = random_pure_state(SystemLayout{{"P", 2}, {"Q", 2}}, s);
  const auto u = haar_unitary(SystemLayout{{"Q", 2}}, s);
  const Labels q{"Q"};
  const auto a = DensityOperator(apply(u, psi, q)).matrix();
  const auto b = apply(u, DensityOperator(psi), q).matrix();
  EXPECT_LT((a - b).norm(), 1e-12);
}

TEST(QState, PurifyExamples) {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 1.0;
  const auto pure = purify(DensityOperator(SystemLayout{{"X", 2}}, d), "E");
  EXPECT_EQ(pure.layout().dim("E"), 1);

  const auto mixed = purify(maximally_mixed(2, "X"), "E");
  const Labels x{"X"};
  EXPECT_LT((partial_trace(mixed, x).matrix() - maximally_mixed(2).matrix()).norm(), 1e-12);
  const Labels e{"E"};
  EXPECT_EQ(mixed.layout().dim("E"), 2);
  EXPECT_LT((partial_trace(mixed, e).matrix() - maximally_mixed(2, "E").matrix()).norm(), 1e-12);

  d << 0.9, 0, 0, 0.1;
  const auto p = purify(DensityOperator(SystemLayout{{"X", 2}}, d), "E");
  const auto m = partial_trace(p, x).matrix();
  EXPECT_NEAR(m(0, 0).real(), 0.9, 1e-12);
  EXPECT_NEAR(m(1, 1).real(), 0.1, 1e-12);
}

TEST(QState, MaximallyEntangledEdgeCases) {
  const auto one = maximally_entangled(1, "X", "Y");
  EXPECT_EQ(one.layout().total_dim(), 1);
  EXPECT_NEAR(std::abs(one.amplitudes()[0]), 1.0, 1e-15);
  for (Index d : {2, 3, 4}) EXPECT_NEAR(purity(maximally_mixed(d)), 1.0 / d, 1e-15);
  const auto bell = maximally_entangled(2, "X", "Y");
  const Labels y{"Y"};
  EXPECT_LT((partial_trace(bell, y).matrix() - maximally_mixed(2).matrix()).norm(), 1e-15);
}

TEST(QState, ValidationErrors) {
  EXPECT_THROW(PureState(SystemLayout{{"X", 2}}, Vector::Ones(2)), InvariantError);
  EXPECT_THROW(PureState(SystemLayout{{"X", 2}}, Vector::Ones(3)), DimensionError);
  EXPECT_THROW(DensityOperator(SystemLayout{{"X", 2}}, Matrix::Identity(2, 2)), InvariantError);
  EXPECT_THROW(PureState::normalized({SystemLayout{{"X", 2}}, Vector::Zero(2)}),
               DegenerateInputError);
}

}  // namespace
}  // namespace qsr
