// Multipartite state algebra: pure states, density operators and linear maps
// over labeled layouts, with tensor products, partial traces, subsystem-local
// map application and purification.

#pragma once

#include <span>
#include <string>
#include <string_view>

#include "qsr/common.hpp"
#include "qsr/layout.hpp"

namespace qsr {

/// Amplitude vector over a layout with no normalization requirement.
/// Used for intermediate results such as the image of a co-isometry.
struct RawState {
  SystemLayout layout;
  Vector amplitudes;
};

/// Unit-norm amplitude vector over a layout.
class PureState {
 public:
  PureState(SystemLayout layout, Vector amplitudes);
  /// Normalizes `raw`; throws DegenerateInputError on a zero vector.
  static PureState normalized(RawState raw);
  /// Computational basis vector with the given digits.
  static PureState basis(SystemLayout layout, std::span<const Index> digits);

  const SystemLayout& layout() const { return layout_; }
  const Vector& amplitudes() const { return amplitudes_; }
  RawState raw() const { return {layout_, amplitudes_}; }

 private:
  SystemLayout layout_;
  Vector amplitudes_;
};

/// Hermitian, positive semidefinite, unit-trace operator over a layout.
class DensityOperator {
 public:
  DensityOperator(SystemLayout layout, Matrix matrix);
  /// |psi><psi|
  explicit DensityOperator(const PureState& psi);

  const SystemLayout& layout() const { return layout_; }
  const Matrix& matrix() const { return matrix_; }

 private:
  SystemLayout layout_;
  Matrix matrix_;
};

enum class MapKind { kGeneral, kIsometry, kUnitary };

/// Matrix of shape (output dim x input dim) between two layouts.
class LinearMap {
 public:
  LinearMap(SystemLayout input, SystemLayout output, Matrix matrix,
            MapKind kind = MapKind::kGeneral);
  /// Unitary on a single-subsystem layout.
  static LinearMap unitary(const SystemLayout& layout, Matrix matrix);
  static LinearMap identity(const SystemLayout& layout);

  const SystemLayout& input_layout() const { return input_; }
  const SystemLayout& output_layout() const { return output_; }
  const Matrix& matrix() const { return matrix_; }
  MapKind kind() const { return kind_; }
  bool preserves_norm() const { return kind_ != MapKind::kGeneral; }

  /// Conjugate transpose with swapped layouts. The adjoint of a proper
  /// isometry is a contraction and is flagged kGeneral.
  LinearMap adjoint() const;

 private:
  SystemLayout input_;
  SystemLayout output_;
  Matrix matrix_;
  MapKind kind_;
};

PureState tensor(const PureState& a, const PureState& b);
DensityOperator tensor(const DensityOperator& a, const DensityOperator& b);
RawState tensor(const RawState& a, const RawState& b);

/// Reduced state on `keep`; kept labels stay in their original order.
DensityOperator partial_trace(const PureState& psi, std::span<const std::string> keep);
DensityOperator partial_trace(const DensityOperator& rho,
                              std::span<const std::string> keep);
/// Same as above without the unit-trace check (subnormalized inputs).
Matrix partial_trace_matrix(const RawState& psi, std::span<const std::string> keep);

/// Reorder subsystems to exactly `order`.
PureState permute(const PureState& psi, std::span<const std::string> order);
DensityOperator permute(const DensityOperator& rho, std::span<const std::string> order);
RawState permute(const RawState& psi, std::span<const std::string> order);

/// Apply `map` to the subsystems `targets` (matched to map.input_layout in
/// order). When the output layout has the same labels as the input, the
/// subsystems keep their positions; otherwise the outputs are inserted where
/// the first target was and the remaining subsystems keep their order.
PureState apply(const LinearMap& map, const PureState& psi,
                std::span<const std::string> targets);
DensityOperator apply(const LinearMap& map, const DensityOperator& rho,
                      std::span<const std::string> targets);
/// No norm contract: any map, including adjoints of isometries.
RawState apply(const LinearMap& map, const RawState& psi,
               std::span<const std::string> targets);

/// Purification with a purifying subsystem of dimension rank(rho) appended last.
PureState purify(const DensityOperator& rho, std::string purifier_label);

/// (1/sqrt d) sum_i |i>|i> on [first:d, second:d].
PureState maximally_entangled(Index d, std::string first = "X", std::string second = "Y");
DensityOperator maximally_mixed(Index d, std::string label = "X");

/// Reinterpret the state under a new layout of the same total dimension.
PureState relabel(const PureState& psi, SystemLayout layout);
DensityOperator relabel(const DensityOperator& rho, SystemLayout layout);

/// Split / merge on the state's layout (pure reinterpretation of the data).
PureState split_subsystem(const PureState& psi, std::string_view label,
                          std::span<const Subsystem> factors);
PureState merge_subsystems(const PureState& psi, std::span<const std::string> labels,
                           std::string merged_label);

/// Kronecker product of the two vectors (a most significant).
Vector kron(const Vector& a, const Vector& b);

bool is_unitary(const Matrix& m, double tol = kTolerances.invariant);
bool is_isometry(const Matrix& m, double tol = kTolerances.invariant);

}  // namespace qsr
