// Distances, entropies and the redistribution resource rates.
// All entropies are in bits.

#pragma once

#include <span>
#include <string>

#include "qsr/common.hpp"
#include "qsr/qstate.hpp"

namespace qsr {

/// Sum of singular values.
double trace_norm(const Matrix& m);
/// ||rho - sigma||_1 (ranges over [0, 2]).
double trace_distance(const DensityOperator& rho, const DensityOperator& sigma);
/// || |x><x| - |y><y| ||_1 for vectors of any norm, without forming projectors.
double trace_distance(const Vector& x, const Vector& y);
double trace_distance(const PureState& x, const PureState& y);

double purity(const DensityOperator& rho);
double purity(const Matrix& rho);

/// Eigenvalues of a Hermitian matrix clamped to [0, 1], ascending.
RealVector clamped_spectrum(const Matrix& rho);

double von_neumann_entropy(const DensityOperator& rho);
double von_neumann_entropy(const Matrix& rho);
/// -sum p log2 p with 0 log 0 = 0.
double shannon_entropy(const RealVector& probabilities);

/// S of the marginal of a pure state on `labels` (0 for the empty set).
double marginal_entropy(const PureState& psi, std::span<const std::string> labels);

double mutual_information(const PureState& psi, std::span<const std::string> x,
                          std::span<const std::string> y);
double conditional_mutual_information(const PureState& psi, std::span<const std::string> x,
                                      std::span<const std::string> y,
                                      std::span<const std::string> z);

/// Which labels of a state play the roles C (transferred), A (Alice's side
/// information), B (Bob's side information) and R (reference).
struct RoleAssignment {
  Labels c, a, b, r;

  /// Throws LayoutError unless the four groups are non-empty, disjoint and
  /// cover `layout` exactly.
  void validate(const SystemLayout& layout) const;
  RoleAssignment swapped_ab() const { return {c, b, a, r}; }
};

/// Parse "C=X,A=Y+Z,B=W,R=V".
RoleAssignment parse_roles(std::string_view text);

struct ResourceRates {
  double qubits = 0.0;           ///< Q  = I(C;R|B)/2
  double ebits_consumed = 0.0;   ///< E1 = I(A;C)/2
  double ebits_distilled = 0.0;  ///< E2 = I(B;C)/2
  double net_ebits = 0.0;        ///< E  = E1 - E2
};

ResourceRates resource_rates(const PureState& psi, const RoleAssignment& roles);

}  // namespace qsr
