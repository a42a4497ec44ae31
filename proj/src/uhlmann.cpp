#include "qsr/uhlmann.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qsr/metrics.hpp"

namespace qsr {
namespace {

struct Aligned {
  PureState state;
  SystemLayout shared;
  SystemLayout rest;
};

Aligned shared_first(const PureState& psi, std::span<const std::string> shared) {
  const auto rest = psi.layout().complement(shared);
  Labels order(shared.begin(), shared.end());
  for (const auto& l : rest.labels()) order.push_back(l);
  auto permuted = permute(psi, order);
  auto shared_layout = permuted.layout().select(shared);
  return {std::move(permuted), std::move(shared_layout), rest};
}

}  // namespace

Matrix orthonormal_completion(const Matrix& basis, Index count) {
  const Index n = basis.rows();
  Matrix out(n, count);
  Index found = 0;
  for (Index j = 0; j < n && found < count; ++j) {
    Vector v = Vector::Unit(n, j);
    for (int pass = 0; pass < 2; ++pass) {
      if (basis.cols() > 0) v -= basis * (basis.adjoint() * v);
      if (found > 0) v -= out.leftCols(found) * (out.leftCols(found).adjoint() * v);
    }
    const double norm = v.norm();
    if (norm > 1e-6) out.col(found++) = v / norm;
  }
  if (found != count) throw InvariantError("orthonormal completion ran out of directions");
  return out;
}

Matrix cross_operator(const PureState& mu, const PureState& nu,
                      std::span<const std::string> shared) {
  const auto m = shared_first(mu, shared);
  const auto v = shared_first(nu, shared);
  for (std::size_t i = 0; i < shared.size(); ++i) {
    if (m.shared[i].dim != v.shared[i].dim) {
      throw DimensionError("shared subsystem '" + shared[i] + "' has different dimensions");
    }
  }
  const Index da = m.shared.total_dim();
  const Index db = m.rest.total_dim();
  const Index dc = v.rest.total_dim();
  if (db > dc) {
    std::ostringstream msg;
    msg << "cannot embed d_B = " << db << " into d_C = " << dc
        << "; pre-embed the smaller purifying system";
    throw DimensionError(msg.str());
  }
  Eigen::Map<const Matrix> mu_m(m.state.amplitudes().data(), db, da);
  Eigen::Map<const Matrix> nu_m(v.state.amplitudes().data(), dc, da);
  return nu_m * mu_m.adjoint();
}

UhlmannResult uhlmann_isometry(const PureState& mu, const PureState& nu,
                               std::span<const std::string> shared) {
  const Matrix x = cross_operator(mu, nu, shared);
  const auto m = shared_first(mu, shared);
  const auto v = shared_first(nu, shared);
  const Index db = x.cols();

  Eigen::JacobiSVD<Matrix> svd(x, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sigma = svd.singularValues();
  Index rank = 0;
  while (rank < sigma.size() && sigma(rank) > kTolerances.eigen_clamp) ++rank;

  const Matrix p_range = svd.matrixU().leftCols(rank);
  const Matrix q_range = svd.matrixV().leftCols(rank);
  Matrix k = p_range * q_range.adjoint();
  if (rank < db) {
    const Matrix p_null = orthonormal_completion(p_range, db - rank);
    const Matrix q_null = orthonormal_completion(q_range, db - rank);
    k += p_null * q_null.adjoint();
  }

  // image of mu under I (x) K, in [shared, C] order
  const Index da = m.shared.total_dim();
  Eigen::Map<const Matrix> mu_m(m.state.amplitudes().data(), db, da);
  Matrix image = k * mu_m;
  Vector image_vec = Eigen::Map<Vector>(image.data(), image.size());
  Complex overlap = v.state.amplitudes().dot(image_vec);
  if (std::abs(overlap) > 0.0) {
    const Complex phase = std::conj(overlap) / std::abs(overlap);
    k *= phase;
    image_vec *= phase;
    overlap *= phase;
  }

  const auto mu_a = partial_trace(m.state, shared);
  const auto nu_a = partial_trace(v.state, shared);

  UhlmannResult result{LinearMap(m.rest, v.rest, std::move(k), MapKind::kIsometry),
                       std::clamp(overlap.real(), 0.0, 1.0), trace_distance(mu_a, nu_a),
                       trace_distance(image_vec, v.state.amplitudes())};
  return result;
}

}  // namespace qsr
