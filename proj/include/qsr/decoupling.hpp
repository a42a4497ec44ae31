// Generalized decoupling: the (alpha, beta) bounds, measured residuals for a
// given unitary on C = C1 C2 C3, Haar-average Monte Carlo checks, and random
// search for one unitary that decouples two inputs at once.

#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "qsr/common.hpp"
#include "qsr/qstate.hpp"
#include "qsr/sampling.hpp"

namespace qsr {

/// Factorization d_C = d1 * d2 * d3 of the transferred system.
struct CutPartition {
  Index d1 = 1;
  Index d2 = 1;
  Index d3 = 1;

  Index total() const { return d1 * d2 * d3; }
  /// Throws DimensionError unless every factor is >= 1 and total() == d_c.
  void validate(Index d_c) const;
  /// Parse "d1,d2,d3".
  static CutPartition parse(std::string_view text);

  friend bool operator==(const CutPartition&, const CutPartition&) = default;
};

/// Every ordered factorization of d into three positive factors.
std::vector<CutPartition> all_partitions(Index d);

/// Which C-factor survives the partial trace: kC1 traces C2 C3, kC2 traces C1 C3.
enum class KeptFactor { kC1, kC2 };

/// A state on C (x) side, held as a purification so residuals can be computed
/// from an amplitude vector instead of a d_C d_side square matrix.
class DecouplingSource {
 public:
  /// rho over [..., c_label, ...]; every other subsystem is the side system.
  static DecouplingSource from_density(const DensityOperator& rho,
                                       std::string_view c_label);
  /// Marginal of psi on c_label + side; the remaining subsystems are traced.
  static DecouplingSource from_pure(const PureState& psi, std::string_view c_label,
                                    std::span<const std::string> side);

  Index c_dim() const { return c_dim_; }
  Index side_dim() const { return side_dim_; }
  Index traced_dim() const { return traced_dim_; }
  /// Tr(rho_{C side}^2)
  double purity() const { return purity_; }
  /// Reduced state on the side system.
  const Matrix& side_marginal() const { return side_marginal_; }
  /// Amplitudes ordered as [C, side, traced].
  const Vector& amplitudes() const { return amplitudes_; }

 private:
  DecouplingSource(Vector amplitudes, Index c_dim, Index side_dim, Index traced_dim);

  Vector amplitudes_;
  Index c_dim_;
  Index side_dim_;
  Index traced_dim_;
  double purity_;
  Matrix side_marginal_;
};

struct DecouplingBounds {
  double alpha = 0.0;  ///< omega, kept C1: d_C d_F Tr(omega^2) / d_{C2C3}^2
  double beta = 0.0;   ///< psi, kept C2:   d_C d_E Tr(psi^2)   / d_{C1C3}^2
};

/// d_C d_side Tr(rho^2) / d_traced_C^2 for the given kept factor.
double decoupling_bound(const DecouplingSource& source, const CutPartition& p,
                        KeptFactor keep);
DecouplingBounds bounds(const DecouplingSource& omega, const DecouplingSource& psi,
                        const CutPartition& p);
DecouplingBounds bounds(const DensityOperator& omega, std::string_view omega_c,
                        const DensityOperator& psi, std::string_view psi_c,
                        const CutPartition& p);

/// ||Tr_{traced C factors}[U rho U^dagger] - pi_kept (x) rho_side||_1.
double residual(const DecouplingSource& source, const Matrix& u, const CutPartition& p,
                KeptFactor keep);
double residual(const DensityOperator& rho, std::string_view c_label, const LinearMap& u,
                const CutPartition& p, KeptFactor keep);

/// Reduced operator Tr_{traced C factors}[U rho U^dagger] on [kept, side].
Matrix decoupled_marginal(const DecouplingSource& source, const Matrix& u,
                          const CutPartition& p, KeptFactor keep);

/// A condition eps^2 <= threshold that is vacuous when threshold >= 4,
/// the largest possible squared trace distance.
bool residual_accepted(double eps, double threshold);

struct HaarAverageReport {
  std::size_t samples = 0;
  double mean_squared_residual = 0.0;
  double standard_error = 0.0;
  double bound = 0.0;
  bool pass = false;  ///< mean <= bound + 3 standard errors
  /// Fraction of draws with eps^2 <= 2 * bound.
  double acceptance_frequency = 0.0;
};

/// Monte Carlo estimate of the Haar average of residual^2. Sample i uses
/// stream.substream(i), so results do not depend on the worker count.
HaarAverageReport haar_average_check(const DecouplingSource& source, const CutPartition& p,
                                     KeptFactor keep, std::size_t samples,
                                     const SeededStream& stream);

struct DecouplingResiduals {
  double eps1 = 0.0;  ///< omega residual, kept C1
  double eps2 = 0.0;  ///< psi residual, kept C2
  bool accepted1 = false;
  bool accepted2 = false;
  bool accepted = false;
};

struct SimultaneousUnitary {
  Matrix unitary;
  DecouplingResiduals residuals;
  int iterations_used = 0;
  int chosen_draw = 0;  ///< substream index of the returned unitary
  double objective = 0.0;  ///< max(eps1^2 / 2 alpha, eps2^2 / 2 beta)
  DecouplingBounds bounds;
};

inline constexpr int kDefaultSearchBudget = 64;

/// Draws Haar unitaries (draw i from stream.substream(i)) until both residual
/// conditions hold; otherwise returns the draw with the smallest objective,
/// earliest first on ties, with accepted = false.
SimultaneousUnitary find_simultaneous_unitary(const DecouplingSource& omega,
                                              const DecouplingSource& psi,
                                              const CutPartition& p, int max_iters,
                                              const SeededStream& stream);

}  // namespace qsr
