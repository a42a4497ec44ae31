#include "qsr/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <unsupported/Eigen/KroneckerProduct>

namespace qsr {
namespace {

// Full PSD checks need an eigendecomposition; above this side length only
// hermiticity and trace are verified on construction.
constexpr Index kMaxEigenCheckedDim = 512;

void require_dim(const SystemLayout& layout, Index n, const char* what) {
  if (layout.total_dim() != n) {
    std::ostringstream msg;
    msg << what << " has length " << n << " but layout " << to_string(layout)
        << " has total dimension " << layout.total_dim();
    throw DimensionError(msg.str());
  }
}

Vector gather(const Vector& v, const std::vector<Index>& map) {
  Vector out(v.size());
  for (Index i = 0; i < v.size(); ++i) out(i) = v(map[static_cast<std::size_t>(i)]);
  return out;
}

Matrix gather(const Matrix& m, const std::vector<Index>& map) {
  const Index n = m.rows();
  Matrix out(n, n);
  for (Index j = 0; j < n; ++j) {
    const Index oj = map[static_cast<std::size_t>(j)];
    for (Index i = 0; i < n; ++i) out(i, j) = m(map[static_cast<std::size_t>(i)], oj);
  }
  return out;
}

bool is_identity_order(const SystemLayout& layout, std::span<const std::string> order) {
  if (order.size() != layout.size()) return false;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (layout[i].label != order[i]) return false;
  }
  return true;
}

Labels concat_labels(std::span<const std::string> a, const Labels& b) {
  Labels out(a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

// Labels of the layout after `map` replaced `targets`.
Labels output_order(const SystemLayout& layout, const LinearMap& map,
                    std::span<const std::string> targets) {
  const auto in_labels = map.input_layout().labels();
  const auto out_labels = map.output_layout().labels();
  const bool same_labels = in_labels == out_labels;
  Labels order;
  bool emitted = false;
  for (const auto& s : layout.subsystems()) {
    const auto it = std::find(targets.begin(), targets.end(), s.label);
    if (it == targets.end()) {
      order.push_back(s.label);
    } else if (same_labels) {
      order.push_back(s.label);
    } else if (!emitted) {
      order.insert(order.end(), out_labels.begin(), out_labels.end());
      emitted = true;
    }
  }
  return order;
}

// Layout that replaces the targets: in-place maps keep the target labels.
SystemLayout replacement_layout(const LinearMap& map,
                                std::span<const std::string> targets) {
  if (map.input_layout().labels() != map.output_layout().labels()) {
    return map.output_layout();
  }
  std::vector<Subsystem> subs;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    subs.push_back({targets[i], map.output_layout()[i].dim});
  }
  return SystemLayout(std::move(subs));
}

void check_targets(const SystemLayout& layout, const LinearMap& map,
                   std::span<const std::string> targets) {
  const auto& in = map.input_layout();
  if (targets.size() != in.size()) {
    throw DimensionError("map expects " + std::to_string(in.size()) +
                         " target subsystems, got " + std::to_string(targets.size()));
  }
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (layout.dim(targets[i]) != in[i].dim) {
      std::ostringstream msg;
      msg << "target '" << targets[i] << "' has dimension " << layout.dim(targets[i])
          << " but map input '" << in[i].label << "' expects " << in[i].dim;
      throw DimensionError(msg.str());
    }
  }
  (void)layout.select(targets);  // rejects duplicates
}

}  // namespace

// ---------------------------------------------------------------- PureState

PureState::PureState(SystemLayout layout, Vector amplitudes)
    : layout_(std::move(layout)), amplitudes_(std::move(amplitudes)) {
  require_dim(layout_, amplitudes_.size(), "amplitude vector");
  const double norm = amplitudes_.norm();
  if (std::abs(norm - 1.0) > kTolerances.invariant) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "pure state norm is " << norm << ", expected 1";
    throw InvariantError(msg.str());
  }
}

PureState PureState::normalized(RawState raw) {
  const double norm = raw.amplitudes.norm();
  if (norm == 0.0 || !std::isfinite(norm)) {
    throw DegenerateInputError("cannot normalize a zero amplitude vector");
  }
  raw.amplitudes /= norm;
  return PureState(std::move(raw.layout), std::move(raw.amplitudes));
}

PureState PureState::basis(SystemLayout layout, std::span<const Index> digits) {
  if (digits.size() != layout.size()) {
    throw DimensionError("basis state needs one digit per subsystem");
  }
  Index index = 0;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (digits[i] < 0 || digits[i] >= layout[i].dim) {
      throw DimensionError("basis digit out of range for '" + layout[i].label + "'");
    }
    index = index * layout[i].dim + digits[i];
  }
  Vector v = Vector::Zero(layout.total_dim());
  v(index) = 1.0;
  return PureState(std::move(layout), std::move(v));
}

// ---------------------------------------------------------- DensityOperator

DensityOperator::DensityOperator(SystemLayout layout, Matrix matrix)
    : layout_(std::move(layout)), matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols()) {
    throw DimensionError("density matrix must be square");
  }
  require_dim(layout_, matrix_.rows(), "density matrix");
  const double tol = kTolerances.invariant;
  if ((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > tol) {
    throw InvariantError("density matrix is not Hermitian");
  }
  if (std::abs(matrix_.trace() - Complex(1.0)) > tol) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "density matrix trace is " << matrix_.trace().real() << ", expected 1";
    throw InvariantError(msg.str());
  }
  if (matrix_.rows() <= kMaxEigenCheckedDim) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(matrix_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -tol) {
      throw InvariantError("density matrix has a negative eigenvalue");
    }
  }
}

DensityOperator::DensityOperator(const PureState& psi)
    : DensityOperator(psi.layout(), psi.amplitudes() * psi.amplitudes().adjoint()) {}

// ---------------------------------------------------------------- LinearMap

LinearMap::LinearMap(SystemLayout input, SystemLayout output, Matrix matrix, MapKind kind)
    : input_(std::move(input)), output_(std::move(output)), matrix_(std::move(matrix)),
      kind_(kind) {
  if (matrix_.rows() != output_.total_dim() || matrix_.cols() != input_.total_dim()) {
    std::ostringstream msg;
    msg << "map matrix is " << matrix_.rows() << "x" << matrix_.cols() << " but layouts "
        << to_string(input_) << " -> " << to_string(output_) << " need "
        << output_.total_dim() << "x" << input_.total_dim();
    throw DimensionError(msg.str());
  }
  if (kind_ == MapKind::kUnitary) {
    if (matrix_.rows() != matrix_.cols() || !is_unitary(matrix_)) {
      throw InvariantError("map flagged unitary fails U^dagger U = U U^dagger = I");
    }
  } else if (kind_ == MapKind::kIsometry) {
    if (matrix_.rows() < matrix_.cols() || !is_isometry(matrix_)) {
      throw InvariantError("map flagged isometry fails M^dagger M = I");
    }
  }
}

LinearMap LinearMap::unitary(const SystemLayout& layout, Matrix matrix) {
  return LinearMap(layout, layout, std::move(matrix), MapKind::kUnitary);
}

LinearMap LinearMap::identity(const SystemLayout& layout) {
  return unitary(layout, Matrix::Identity(layout.total_dim(), layout.total_dim()));
}

LinearMap LinearMap::adjoint() const {
  const MapKind k = kind_ == MapKind::kUnitary ? MapKind::kUnitary : MapKind::kGeneral;
  return LinearMap(output_, input_, matrix_.adjoint(), k);
}

bool is_unitary(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  const Matrix id = Matrix::Identity(m.rows(), m.cols());
  return (m.adjoint() * m - id).cwiseAbs().maxCoeff() <= tol &&
         (m * m.adjoint() - id).cwiseAbs().maxCoeff() <= tol;
}

bool is_isometry(const Matrix& m, double tol) {
  if (m.rows() < m.cols()) return false;
  const Matrix id = Matrix::Identity(m.cols(), m.cols());
  return (m.adjoint() * m - id).cwiseAbs().maxCoeff() <= tol;
}

// ------------------------------------------------------------------ tensor

Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

PureState tensor(const PureState& a, const PureState& b) {
  return PureState(concat(a.layout(), b.layout()), kron(a.amplitudes(), b.amplitudes()));
}

RawState tensor(const RawState& a, const RawState& b) {
  return {concat(a.layout, b.layout), kron(a.amplitudes, b.amplitudes)};
}

DensityOperator tensor(const DensityOperator& a, const DensityOperator& b) {
  auto layout = concat(a.layout(), b.layout());
  Matrix m = Eigen::kroneckerProduct(a.matrix(), b.matrix()).eval();
  return DensityOperator(std::move(layout), std::move(m));
}

// ----------------------------------------------------------------- permute

RawState permute(const RawState& psi, std::span<const std::string> order) {
  if (is_identity_order(psi.layout, order)) return psi;
  const auto map = permutation_map(psi.layout, order);
  return {psi.layout.reordered(order), gather(psi.amplitudes, map)};
}

PureState permute(const PureState& psi, std::span<const std::string> order) {
  auto raw = permute(psi.raw(), order);
  return PureState(std::move(raw.layout), std::move(raw.amplitudes));
}

DensityOperator permute(const DensityOperator& rho, std::span<const std::string> order) {
  if (is_identity_order(rho.layout(), order)) return rho;
  const auto map = permutation_map(rho.layout(), order);
  return DensityOperator(rho.layout().reordered(order), gather(rho.matrix(), map));
}

// ----------------------------------------------------------- partial trace

Matrix partial_trace_matrix(const RawState& psi, std::span<const std::string> keep) {
  const auto kept = psi.layout.select(keep);
  const auto rest = psi.layout.complement(keep);
  const auto order = concat_labels(kept.labels(), rest.labels());
  const auto permuted = permute(psi, order);
  const Index dk = kept.total_dim();
  const Index dr = rest.total_dim();
  Eigen::Map<const Matrix> r(permuted.amplitudes.data(), dr, dk);
  return r.transpose() * r.conjugate();
}

DensityOperator partial_trace(const PureState& psi, std::span<const std::string> keep) {
  Matrix m = partial_trace_matrix(psi.raw(), keep);
  // symmetrize away rounding so the Hermitian invariant holds exactly
  m = (0.5 * (m + m.adjoint())).eval();
  return DensityOperator(psi.layout().select(keep), std::move(m));
}

DensityOperator partial_trace(const DensityOperator& rho,
                              std::span<const std::string> keep) {
  const auto kept = rho.layout().select(keep);
  const auto rest = rho.layout().complement(keep);
  const auto map =
      permutation_map(rho.layout(), concat_labels(kept.labels(), rest.labels()));
  const Index dk = kept.total_dim();
  const Index dr = rest.total_dim();
  const auto& m = rho.matrix();
  Matrix out = Matrix::Zero(dk, dk);
  for (Index b = 0; b < dk; ++b) {
    for (Index a = 0; a < dk; ++a) {
      Complex sum = 0.0;
      for (Index r = 0; r < dr; ++r) {
        sum += m(map[static_cast<std::size_t>(a * dr + r)],
                 map[static_cast<std::size_t>(b * dr + r)]);
      }
      out(a, b) = sum;
    }
  }
  out = (0.5 * (out + out.adjoint())).eval();
  return DensityOperator(kept, std::move(out));
}

// ------------------------------------------------------------------- apply

RawState apply(const LinearMap& map, const RawState& psi,
               std::span<const std::string> targets) {
  check_targets(psi.layout, map, targets);
  const auto rest = psi.layout.complement(targets);
  const auto permuted = permute(psi, concat_labels(targets, rest.labels()));
  const Index dr = rest.total_dim();
  const Index din = map.input_layout().total_dim();
  const Index dout = map.output_layout().total_dim();
  Eigen::Map<const Matrix> r(permuted.amplitudes.data(), dr, din);
  Matrix out = r * map.matrix().transpose();
  RawState result{concat(replacement_layout(map, targets), rest),
                  Eigen::Map<Vector>(out.data(), dr * dout)};
  return permute(result, output_order(psi.layout, map, targets));
}

PureState apply(const LinearMap& map, const PureState& psi,
                std::span<const std::string> targets) {
  if (!map.preserves_norm()) {
    throw InvariantError("apply on a PureState needs an isometry or unitary map");
  }
  auto raw = apply(map, psi.raw(), targets);
  return PureState(std::move(raw.layout), std::move(raw.amplitudes));
}

DensityOperator apply(const LinearMap& map, const DensityOperator& rho,
                      std::span<const std::string> targets) {
  if (!map.preserves_norm()) {
    throw InvariantError("apply on a DensityOperator needs an isometry or unitary map");
  }
  check_targets(rho.layout(), map, targets);
  const auto rest = rho.layout().complement(targets);
  const auto permuted = permute(rho, concat_labels(targets, rest.labels()));
  const Matrix k = Eigen::kroneckerProduct(
      map.matrix(), Matrix::Identity(rest.total_dim(), rest.total_dim()));
  Matrix out = k * permuted.matrix() * k.adjoint();
  out = (0.5 * (out + out.adjoint())).eval();
  DensityOperator result(concat(replacement_layout(map, targets), rest),
                         std::move(out));
  return permute(result, output_order(rho.layout(), map, targets));
}

// ----------------------------------------------------------------- purify

PureState purify(const DensityOperator& rho, std::string purifier_label) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix());
  const auto& evals = es.eigenvalues();
  std::vector<Index> support;
  for (Index i = evals.size(); i-- > 0;) {  // descending
    if (evals(i) > kTolerances.eigen_clamp) support.push_back(i);
  }
  const Index rank = static_cast<Index>(support.size());
  const Index d = rho.layout().total_dim();
  Vector psi = Vector::Zero(d * rank);
  for (Index k = 0; k < rank; ++k) {
    const Index col = support[static_cast<std::size_t>(k)];
    const double w = std::sqrt(evals(col));
    for (Index x = 0; x < d; ++x) psi(x * rank + k) = w * es.eigenvectors()(x, col);
  }
  auto layout = concat(rho.layout(), SystemLayout{{std::move(purifier_label), rank}});
  return PureState::normalized({std::move(layout), std::move(psi)});
}

// ------------------------------------------------------- standard states

PureState maximally_entangled(Index d, std::string first, std::string second) {
  if (d < 1) throw DimensionError("maximally entangled state needs d >= 1");
  Vector v = Vector::Zero(d * d);
  const double amp = 1.0 / std::sqrt(static_cast<double>(d));
  for (Index i = 0; i < d; ++i) v(i * d + i) = amp;
  return PureState(SystemLayout{{std::move(first), d}, {std::move(second), d}},
                   std::move(v));
}

DensityOperator maximally_mixed(Index d, std::string label) {
  if (d < 1) throw DimensionError("maximally mixed state needs d >= 1");
  return DensityOperator(SystemLayout{{std::move(label), d}},
                         Matrix::Identity(d, d) / static_cast<double>(d));
}

// ------------------------------------------------------------- relabeling

PureState relabel(const PureState& psi, SystemLayout layout) {
  require_dim(layout, psi.amplitudes().size(), "relabeled amplitude vector");
  return PureState(std::move(layout), psi.amplitudes());
}

DensityOperator relabel(const DensityOperator& rho, SystemLayout layout) {
  require_dim(layout, rho.matrix().rows(), "relabeled density matrix");
  return DensityOperator(std::move(layout), rho.matrix());
}

PureState split_subsystem(const PureState& psi, std::string_view label,
                          std::span<const Subsystem> factors) {
  return relabel(psi, split_subsystem(psi.layout(), label, factors));
}

PureState merge_subsystems(const PureState& psi, std::span<const std::string> labels,
                           std::string merged_label) {
  return relabel(psi, merge_subsystems(psi.layout(), labels, std::move(merged_label)));
}

}  // namespace qsr
