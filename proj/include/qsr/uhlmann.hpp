// Isometries that align two purifications with close marginals.
//
// Given |mu> on A(x)B and |nu> on A(x)C, the polar factor of the cross
// operator X = Tr_A |nu><mu| is the isometry K: B -> C maximizing
// |<nu|(I(x)K)|mu>|. Its overlap is the fidelity of mu_A and nu_A, which
// gives ||K.mu - nu||_1 <= 2 sqrt(||mu_A - nu_A||_1).

#pragma once

#include <span>
#include <string>

#include "qsr/qstate.hpp"

namespace qsr {

/// X[c, b] = sum_a <a,c|nu> <a,b|mu>^*, so Tr(K^dagger X) = <nu|(I(x)K)|mu>.
/// B and C are the complements of `shared` in each layout (in layout order).
/// Throws DimensionError if shared dims differ or d_B > d_C.
Matrix cross_operator(const PureState& mu, const PureState& nu,
                      std::span<const std::string> shared);

struct UhlmannResult {
  LinearMap isometry;       ///< B -> C
  double achieved_overlap;  ///< <nu|(I(x)K)|mu>, real and nonnegative
  double epsilon_in;        ///< ||mu_A - nu_A||_1
  double distance_out;      ///< ||K.mu - nu||_1
};

/// Polar isometry of the cross operator. Directions in the kernel of X are
/// completed by Gram-Schmidt over the standard basis, so the result is
/// deterministic.
UhlmannResult uhlmann_isometry(const PureState& mu, const PureState& nu,
                               std::span<const std::string> shared);

/// Columns orthonormal to `basis` and to each other, taken from the standard
/// basis in index order.
Matrix orthonormal_completion(const Matrix& basis, Index count);

}  // namespace qsr
