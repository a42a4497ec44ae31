#include "qsr/typical.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "qsr/metrics.hpp"

namespace qsr {
namespace {

// Slack on the typicality window so that strings sitting exactly on the
// boundary are classified the same way regardless of summation order.
constexpr double kWindowSlack = 1e-9;

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  if (a > std::numeric_limits<std::uint64_t>::max() - b) {
    throw GuardError("typical subspace rank exceeds 2^64");
  }
  return a + b;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  if (p > std::numeric_limits<std::uint64_t>::max()) {
    throw GuardError("type-class size exceeds 2^64");
  }
  return static_cast<std::uint64_t>(p);
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    if (r > std::numeric_limits<std::uint64_t>::max()) {
      throw GuardError("binomial coefficient exceeds 2^64");
    }
  }
  return static_cast<std::uint64_t>(r);
}

std::uint64_t multinomial(std::span<const int> counts) {
  std::uint64_t m = 1;
  int total = 0;
  for (int c : counts) {
    total += c;
    m = checked_mul(m, binomial(total, c));
  }
  return m;
}

// Calls fn(counts) for every composition of n into k nonnegative parts.
template <typename Fn>
void for_each_type(int n, int k, Fn&& fn) {
  std::vector<int> counts(static_cast<std::size_t>(k), 0);
  auto rec = [&](auto&& self, int pos, int remaining) -> void {
    if (pos == k - 1) {
      counts[static_cast<std::size_t>(pos)] = remaining;
      fn(std::span<const int>(counts));
      return;
    }
    for (int c = remaining; c >= 0; --c) {
      counts[static_cast<std::size_t>(pos)] = c;
      self(self, pos + 1, remaining - c);
    }
  };
  rec(rec, 0, n);
}

Index checked_pow(Index base, int n) {
  Index r = 1;
  for (int i = 0; i < n; ++i) {
    if (r > std::numeric_limits<Index>::max() / std::max<Index>(base, 1)) {
      throw GuardError("tensor power dimension overflows");
    }
    r *= base;
  }
  return r;
}

}  // namespace

void TypicalSpec::validate() const {
  if (n < 1) throw DimensionError("typical spec needs n >= 1");
  if (!(delta > 0.0)) throw DimensionError("typical spec needs delta > 0");
  if (!(t > 1.0)) throw DimensionError("typical spec needs t > 1");
}

double TypicalProjector::log2_product(std::span<const int> counts) const {
  double l = 0.0;
  for (std::size_t j = 0; j < counts.size(); ++j) {
    if (counts[j] == 0) continue;
    const double lambda = eigenvalues(static_cast<Index>(j));
    if (lambda <= 0.0) return -std::numeric_limits<double>::infinity();
    l += counts[j] * std::log2(lambda);
  }
  return l;
}

bool TypicalProjector::is_typical(std::span<const int> counts) const {
  const double l = log2_product(counts);
  const double n = spec.n;
  return l >= -n * (entropy + spec.delta) - kWindowSlack &&
         l <= -n * (entropy - spec.delta) + kWindowSlack;
}

TypicalProjector typical_stats(const Matrix& rho, const TypicalSpec& spec) {
  spec.validate();
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho);
  const Index d = rho.rows();
  TypicalProjector proj;
  proj.spec = spec;
  proj.eigenvalues.resize(d);
  proj.eigenvectors.resize(d, d);
  for (Index j = 0; j < d; ++j) {  // descending
    const double ev = es.eigenvalues()(d - 1 - j);
    proj.eigenvalues(j) = ev < kTolerances.eigen_clamp ? 0.0 : std::min(ev, 1.0);
    proj.eigenvectors.col(j) = es.eigenvectors().col(d - 1 - j);
  }
  proj.entropy = shannon_entropy(proj.eigenvalues);

  const double log_n_factorial = std::lgamma(spec.n + 1.0);
  for_each_type(spec.n, static_cast<int>(d), [&](std::span<const int> counts) {
    if (!proj.is_typical(counts)) return;
    proj.typical_types.emplace_back(counts.begin(), counts.end());
    proj.rank = checked_add(proj.rank, multinomial(counts));
    double log_w = log_n_factorial;
    for (std::size_t j = 0; j < counts.size(); ++j) {
      log_w -= std::lgamma(counts[j] + 1.0);
      if (counts[j] > 0) log_w += counts[j] * std::log(proj.eigenvalues(static_cast<Index>(j)));
    }
    proj.weight += std::exp(log_w);
  });
  proj.weight = std::min(proj.weight, 1.0);
  return proj;
}

TypicalProjector typical_stats(const DensityOperator& rho, const TypicalSpec& spec) {
  return typical_stats(rho.matrix(), spec);
}

std::vector<int> string_type(Index index, Index base_dim, int n) {
  std::vector<int> counts(static_cast<std::size_t>(base_dim), 0);
  for (int i = 0; i < n; ++i) {
    ++counts[static_cast<std::size_t>(index % base_dim)];
    index /= base_dim;
  }
  return counts;
}

Matrix materialize_projector(const TypicalProjector& projector, Index max_dim) {
  const Index d = projector.base_dim();
  const int n = projector.spec.n;
  const Index total = checked_pow(d, n);
  if (total > max_dim) {
    std::ostringstream msg;
    msg << "projector of side " << total << " exceeds the materialization limit " << max_dim;
    throw GuardError(msg.str());
  }
  Matrix q = Matrix::Identity(1, 1);
  for (int i = 0; i < n; ++i) {
    Matrix next(q.rows() * d, q.cols() * d);
    for (Index a = 0; a < q.rows(); ++a) {
      for (Index b = 0; b < q.cols(); ++b) {
        next.block(a * d, b * d, d, d) = q(a, b) * projector.eigenvectors;
      }
    }
    q = std::move(next);
  }
  RealVector mask(total);
  for (Index s = 0; s < total; ++s) {
    mask(s) = projector.is_typical(string_type(s, d, n)) ? 1.0 : 0.0;
  }
  return q * mask.asDiagonal() * q.adjoint();
}

RawState apply_projections(const RawState& psi, std::span<const ProjectionStep> steps) {
  RawState state = psi;
  for (const auto& step : steps) {
    const auto& proj = *step.projector;
    const int n = static_cast<int>(step.copies.size());
    if (n != proj.spec.n) {
      throw DimensionError("projection step has " + std::to_string(n) +
                           " copies but the projector was built for n = " +
                           std::to_string(proj.spec.n));
    }
    const Index d = proj.base_dim();

    auto rotate = [&](const Matrix& m) {
      for (const auto& group : step.copies) {
        auto layout = state.layout.select(group).reordered(group);
        if (layout.total_dim() != d) {
          throw DimensionError("copy group dimension does not match the projector");
        }
        LinearMap map(layout, layout, m, MapKind::kUnitary);
        state = apply(map, state, group);
      }
    };

    // to the eigenbasis, drop atypical strings, and back
    rotate(proj.eigenvectors.adjoint());
    const auto original = state.layout.labels();
    Labels order;
    for (const auto& group : step.copies) order.insert(order.end(), group.begin(), group.end());
    const auto rest = state.layout.complement(order);
    for (const auto& l : rest.labels()) order.push_back(l);
    state = permute(state, order);
    const Index strings = checked_pow(d, n);
    const Index dr = rest.total_dim();
    for (Index s = 0; s < strings; ++s) {
      // string_type reads digits least significant first; the count is the same
      if (!proj.is_typical(string_type(s, d, n))) state.amplitudes.segment(s * dr, dr).setZero();
    }
    state = permute(state, original);
    rotate(proj.eigenvectors);
  }
  return state;
}

ProjectionResult project_typical(const PureState& psi, std::span<const ProjectionStep> steps) {
  RawState projected = apply_projections(psi.raw(), steps);
  const double p = projected.amplitudes.squaredNorm();
  if (p <= 0.0) throw DegenerateInputError("typical projection annihilated the state");
  return {PureState::normalized(std::move(projected)), p};
}

}  // namespace qsr
