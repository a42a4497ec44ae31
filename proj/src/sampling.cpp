#include "qsr/sampling.hpp"

#include <cmath>
#include <numbers>

namespace qsr {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

SeededStream::SeededStream(std::uint64_t seed, std::uint64_t stream_index)
    : seed_(seed),
      stream_index_(stream_index),
      engine_(splitmix64(splitmix64(seed) ^ splitmix64(~stream_index))) {}

SeededStream SeededStream::substream(std::uint64_t index) const {
  return SeededStream(splitmix64(seed_ ^ splitmix64(stream_index_ + 1)), index);
}

double SeededStream::uniform() {
  // 53 random bits, shifted off zero so log() below is finite
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double SeededStream::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double r = std::sqrt(-2.0 * std::log(uniform()));
  const double theta = 2.0 * std::numbers::pi * uniform();
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

Complex SeededStream::complex_gaussian() {
  const double re = gaussian();
  const double im = gaussian();
  return Complex(re, im) * (1.0 / std::numbers::sqrt2);
}

Matrix ginibre(Index rows, Index cols, SeededStream& stream) {
  Matrix g(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) g(i, j) = stream.complex_gaussian();
  }
  return g;
}

Matrix haar_unitary_matrix(Index d, SeededStream& stream) {
  if (d < 1) throw DimensionError("Haar unitary needs d >= 1");
  const Matrix g = ginibre(d, d, stream);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(d, d);
  const auto& r = qr.matrixQR();
  for (Index j = 0; j < d; ++j) {
    const Complex diag = r(j, j);
    const double mag = std::abs(diag);
    if (mag > 0.0) q.col(j) *= diag / mag;
  }
  return q;
}

LinearMap haar_unitary(const SystemLayout& layout, SeededStream& stream) {
  return LinearMap::unitary(layout, haar_unitary_matrix(layout.total_dim(), stream));
}

Matrix haar_isometry_matrix(Index rows, Index cols, SeededStream& stream) {
  if (cols > rows) throw DimensionError("isometry needs rows >= cols");
  return haar_unitary_matrix(rows, stream).leftCols(cols);
}

PureState random_pure_state(const SystemLayout& layout, SeededStream& stream) {
  Vector v(layout.total_dim());
  for (Index i = 0; i < v.size(); ++i) v(i) = stream.complex_gaussian();
  return PureState::normalized({layout, std::move(v)});
}

DensityOperator random_density(const SystemLayout& layout, Index rank,
                               SeededStream& stream) {
  const Index d = layout.total_dim();
  if (rank < 1 || rank > d) {
    throw DimensionError("density rank " + std::to_string(rank) +
                         " outside [1, " + std::to_string(d) + "]");
  }
  const Matrix g = ginibre(d, rank, stream);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  rho = (0.5 * (rho + rho.adjoint())).eval();
  return DensityOperator(layout, std::move(rho));
}

}  // namespace qsr
