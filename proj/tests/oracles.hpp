// Independent reference computations for the tests. Deliberately naive:
// explicit index loops and textbook formulas, no shared code with the library
// beyond the plain Eigen types.

#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline std::vector<long> digits(long index, const std::vector<long>& dims) {
  std::vector<long> d(dims.size());
  for (long k = static_cast<long>(dims.size()) - 1; k >= 0; --k) {
    d[k] = index % dims[k];
    index /= dims[k];
  }
  return d;
}

inline long index_of(const std::vector<long>& d, const std::vector<long>& dims) {
  long idx = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) idx = idx * dims[k] + d[k];
  return idx;
}

/// rho_keep[i, j] = sum over traced digits of psi[i, t] psi[j, t]^*.
inline Matrix partial_trace(const Vector& psi, const std::vector<long>& dims,
                            const std::vector<int>& keep) {
  std::vector<long> kdims;
  for (int k : keep) kdims.push_back(dims[k]);
  long dk = 1;
  for (long d : kdims) dk *= d;
  Matrix out = Matrix::Zero(dk, dk);
  const long total = psi.size();
  for (long i = 0; i < total; ++i) {
    const auto di = digits(i, dims);
    for (long j = 0; j < total; ++j) {
      const auto dj = digits(j, dims);
      bool same = true;
      for (std::size_t k = 0; k < dims.size() && same; ++k) {
        bool kept = false;
        for (int q : keep) kept = kept || q == static_cast<int>(k);
        if (!kept && di[k] != dj[k]) same = false;
      }
      if (!same) continue;
      std::vector<long> ki, kj;
      for (int q : keep) {
        ki.push_back(di[q]);
        kj.push_back(dj[q]);
      }
      out(index_of(ki, kdims), index_of(kj, kdims)) += psi[i] * std::conj(psi[j]);
    }
  }
  return out;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (long i = 0; i < a.rows(); ++i)
    for (long j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Matrix sqrtm_psd(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  Eigen::VectorXd ev = es.eigenvalues();
  for (auto& x : ev) x = x > 1e-14 ? std::sqrt(x) : 0.0;
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

/// F(rho, sigma) = || sqrt(rho) sqrt(sigma) ||_1
inline double fidelity(const Matrix& rho, const Matrix& sigma) {
  Eigen::JacobiSVD<Matrix> svd(sqrtm_psd(rho) * sqrtm_psd(sigma));
  return svd.singularValues().sum();
}

/// Trace distance of two unit vectors from their overlap.
inline double pure_distance(const Vector& a, const Vector& b) {
  const double ov = std::abs(a.dot(b));
  return 2.0 * std::sqrt(std::max(0.0, 1.0 - ov * ov));
}

/// Trace distance of two Hermitian operators from eigenvalues of the difference.
inline double trace_distance(const Matrix& a, const Matrix& b) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a - b);
  return es.eigenvalues().cwiseAbs().sum();
}

inline double binary_entropy(double p) {
  return -p * std::log2(p) - (1 - p) * std::log2(1 - p);
}

struct Enumerated {
  std::uint64_t rank = 0;
  double weight = 0.0;
};

/// Walks every one of d^n eigenvalue strings.
inline Enumerated enumerate_typical(const std::vector<double>& spectrum, int n, double delta) {
  double s = 0.0;
  for (double p : spectrum)
    if (p > 0) s -= p * std::log2(p);
  const long d = static_cast<long>(spectrum.size());
  long total = 1;
  for (int i = 0; i < n; ++i) total *= d;
  Enumerated e;
  std::vector<long> dims(n, d);
  for (long idx = 0; idx < total; ++idx) {
    double prob = 1.0;
    for (long k : digits(idx, dims)) prob *= spectrum[k];
    if (prob <= 0) continue;
    const double lp = std::log2(prob);
    if (lp >= -n * (s + delta) - 1e-9 && lp <= -n * (s - delta) + 1e-9) {
      ++e.rank;
      e.weight += prob;
    }
  }
  return e;
}

}  // namespace oracle
