#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qsr/metrics.hpp"
#include "qsr/presets.hpp"
#include "qsr/sampling.hpp"

namespace qsr {
namespace {

const SystemLayout kFourQubits{{"C", 2}, {"A", 2}, {"B", 2}, {"R", 2}};

DensityOperator diag2(double p) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = p;
  m(1, 1) = 1 - p;
  return DensityOperator(SystemLayout{{"X", 2}}, m);
}

TEST(Metrics, TraceDistanceExamples) {
  const Index zero = 0, one = 1;
  const SystemLayout q{{"X", 2}};
  const DensityOperator r0(PureState::basis(q, std::span(&zero, 1)));
  const DensityOperator r1(PureState::basis(q, std::span(&one, 1)));
  EXPECT_NEAR(trace_distance(r0, r1), 2.0, 1e-12);
  EXPECT_NEAR(trace_distance(r0, r0), 0.0, 1e-15);
}

TEST(Metrics, PureDistanceRoutesAgree) {
  SeededStream s(21);
  const SystemLayout l{{"X", 3}, {"Y", 2}};
  for (int trial = 0; trial < 50; ++trial) {
    const auto mu = random_pure_state(l, s);
    const auto nu = random_pure_state(l, s);
    const double want = oracle::pure_distance(mu.amplitudes(), nu.amplitudes());
    EXPECT_NEAR(trace_distance(DensityOperator(mu), DensityOperator(nu)), want, 1e-9);
    EXPECT_NEAR(trace_distance(mu, nu), want, 1e-9);
  }
}

TEST(Metrics, RawVectorDistanceMatchesProjectors) {
  SeededStream s(22);
  for (int trial = 0; trial < 50; ++trial) {
    Vector x = ginibre(5, 1, s).col(0) * 0.4;
    Vector y = ginibre(5, 1, s).col(0) * 0.3;
    const Matrix px = x * x.adjoint();
    const Matrix py = y * y.adjoint();
    EXPECT_NEAR(trace_distance(x, y), oracle::trace_distance(px, py), 1e-10);
  }
  const Vector x = Vector::Unit(3, 0);
  EXPECT_NEAR(trace_distance(x, Vector::Zero(3)), 1.0, 1e-15);
}

TEST(Metrics, TriangleInequality) {
  SeededStream s(23);
  const SystemLayout l{{"X", 4}};
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = random_density(l, 2, s);
    const auto b = random_density(l, 3, s);
    const auto c = random_density(l, 4, s);
    EXPECT_LE(trace_distance(a, c), trace_distance(a, b) + trace_distance(b, c) + 1e-9);
  }
}

TEST(Metrics, TraceNormOfHermitianDifference) {
  SeededStream s(24);
  const auto a = random_density(SystemLayout{{"X", 4}}, 4, s);
  const auto b = random_density(SystemLayout{{"X", 4}}, 1, s);
  EXPECT_NEAR(trace_norm(a.matrix() - b.matrix()), oracle::trace_distance(a.matrix(), b.matrix()),
              1e-10);
}

TEST(Metrics, PurityAndEntropy) {
  EXPECT_NEAR(purity(maximally_mixed(3)), 1.0 / 3, 1e-15);
  EXPECT_NEAR(purity(diag2(1.0)), 1.0, 1e-15);
  EXPECT_NEAR(purity(diag2(0.9)), 0.82, 1e-15);

  EXPECT_NEAR(von_neumann_entropy(diag2(1.0)), 0.0, 1e-12);
  EXPECT_NEAR(von_neumann_entropy(maximally_mixed(4)), 2.0, 1e-12);
  EXPECT_NEAR(von_neumann_entropy(diag2(0.9)), oracle::binary_entropy(0.9), 1e-12);
  EXPECT_NEAR(von_neumann_entropy(diag2(0.9)), 0.468996, 1e-5);
}

TEST(Metrics, ShannonEntropyZeroConvention) {
  RealVector p(3);
  p << 0.5, 0.5, 0.0;
  EXPECT_NEAR(shannon_entropy(p), 1.0, 1e-15);
}

TEST(Metrics, MutualInformationExamples) {
  const Labels c{"C"}, a{"A"}, b{"B"}, r{"R"};
  const auto bell = *make_preset("bell-CA");
  EXPECT_NEAR(mutual_information(bell, c, a), 2.0, 1e-9);
  const auto ghz = *make_preset("ghz-CBR");
  EXPECT_NEAR(conditional_mutual_information(ghz, c, r, b), 1.0, 1e-9);
}

TEST(Metrics, OverlappingGroupsRejected) {
  const auto psi = *make_preset("product");
  const Labels c{"C"}, ca{"C", "A"}, x{"X"};
  EXPECT_THROW(mutual_information(psi, c, ca), LayoutError);
  EXPECT_THROW(marginal_entropy(psi, x), LayoutError);
}

TEST(Metrics, EntropyIdentitiesOnRandomStates) {
  SeededStream s(25);
  const Labels c{"C"}, a{"A"}, b{"B"}, r{"R"};
  const std::vector<Labels> groups{c, a, b, r};
  for (int trial = 0; trial < 200; ++trial) {
    const auto psi = random_pure_state(kFourQubits, s);
    EXPECT_NEAR(conditional_mutual_information(psi, c, r, b),
                conditional_mutual_information(psi, c, r, a), 1e-9);
    for (std::size_t x = 0; x < 4; ++x) {
      for (std::size_t y = 0; y < 4; ++y) {
        for (std::size_t z = 0; z < 4; ++z) {
          if (x == y || y == z || x == z) continue;
          EXPECT_GE(conditional_mutual_information(psi, groups[x], groups[y], groups[z]), -1e-9);
        }
      }
    }
    const Labels ca{"C", "A"}, br{"B", "R"}, cab{"C", "A", "B"};
    EXPECT_NEAR(marginal_entropy(psi, ca), marginal_entropy(psi, br), 1e-9);
    EXPECT_NEAR(marginal_entropy(psi, cab), marginal_entropy(psi, r), 1e-9);
  }
}

TEST(Metrics, PresetRates) {
  const RoleAssignment roles{{"C"}, {"A"}, {"B"}, {"R"}};
  auto check = [&](const char* name, double q, double e1, double e2) {
    const auto rates = resource_rates(*make_preset(name), roles);
    EXPECT_NEAR(rates.qubits, q, 1e-9) << name;
    EXPECT_NEAR(rates.ebits_consumed, e1, 1e-9) << name;
    EXPECT_NEAR(rates.ebits_distilled, e2, 1e-9) << name;
    EXPECT_NEAR(rates.net_ebits, rates.ebits_consumed - rates.ebits_distilled, 1e-12);
  };
  check("bell-CA", 0, 1, 0);
  check("bell-CR", 1, 0, 0);
  check("bell-CB", 0, 0, 1);
  check("product", 0, 0, 0);
}

TEST(Metrics, RateSwapUnderRoleExchange) {
  SeededStream s(26);
  const RoleAssignment roles{{"C"}, {"A"}, {"B"}, {"R"}};
  for (int trial = 0; trial < 50; ++trial) {
    const auto psi = random_pure_state(kFourQubits, s);
    const auto x = resource_rates(psi, roles);
    const auto y = resource_rates(psi, roles.swapped_ab());
    EXPECT_NEAR(x.qubits, y.qubits, 1e-9);
    EXPECT_NEAR(x.ebits_consumed, y.ebits_distilled, 1e-9);
    EXPECT_NEAR(x.ebits_distilled, y.ebits_consumed, 1e-9);
  }
}

TEST(Metrics, RolesWithGroups) {
  SeededStream s(27);
  const SystemLayout l{{"X", 2}, {"Y", 2}, {"Z", 2}, {"W", 2}, {"V", 2}};
  const auto psi = random_pure_state(l, s);
  const auto roles = parse_roles("C=X,A=Y+Z,B=W,R=V");
  EXPECT_EQ(roles.a, (Labels{"Y", "Z"}));
  const auto rates = resource_rates(psi, roles);
  EXPECT_NEAR(rates.qubits,
              conditional_mutual_information(psi, roles.c, roles.r, roles.b) / 2, 1e-12);
  EXPECT_THROW(parse_roles("C=X,A=Y").validate(l), LayoutError);
  EXPECT_THROW(parse_roles("Q=X"), LayoutError);
  EXPECT_THROW(resource_rates(psi, parse_roles("C=X,A=Y,B=W,R=V")), LayoutError);
}

}  // namespace
}  // namespace qsr
