// Redistribution of n copies: typical projection, register allocation and
// a full one-shot protocol run on the projected state.

#pragma once

#include <cstdint>

#include "qsr/metrics.hpp"
#include "qsr/protocol.hpp"
#include "qsr/typical.hpp"

namespace qsr {

/// Register sizes for C^typ = C1 C2 C3 at n copies.
///
/// d1 and d2 are the largest powers of two not above the targets
/// 2^{n[I(B;C) - 6 t delta]/2} and 2^{n[I(A;C) - 6 t delta]/2} (at least 1);
/// d3 is the smallest integer with d1 d2 d3 >= rank. The slack eta solves
/// log2 d3 = n[I(C;R|B) + 12 t delta + 2 eta]/2 and is feasible when it lies
/// in [-t delta, t delta]; at small n it usually does not.
struct IidAllocation {
  Index d1 = 1, d2 = 1, d3 = 1;
  double target_log2_d1 = 0.0;
  double target_log2_d2 = 0.0;
  double eta_slack = 0.0;
  Index padding = 0;  ///< d1 d2 d3 - rank
  bool feasible = false;

  CutPartition partition() const { return {d1, d2, d3}; }
};

IidAllocation allocate_partition(std::uint64_t typical_rank, const ResourceRates& rates,
                                 const TypicalSpec& spec);

struct IidOptions {
  /// Largest amplitude vector the driver may materialize.
  Index max_entries = Index{1} << 20;
  int search_budget = kDefaultSearchBudget;
};

struct IidRecord {
  TypicalSpec spec;
  ResourceRates target_rates;
  SystemLayout compressed_layout;  ///< single-copy [C, A, B, R] after support compression
  double success_probability = 0.0;  ///< weight of the typical projection on C^n
  double typical_distance = 0.0;     ///< ||Psi - Omega||_1
  std::uint64_t typical_rank = 0;
  IidAllocation allocation;
  double gamma1 = 0.0, gamma2 = 0.0, eta1 = 0.0, eta2 = 0.0;
  double measured_eps1 = 0.0, measured_eps2 = 0.0;
  bool search_accepted = false;
  double distance_to_target = 0.0;
  double measured_bound = 0.0;
  double analytic_bound = 0.0;  ///< Delta1 + Delta2 of the one-shot run
  /// 4 (||Psi - Omega||_1 + (2 * 2^{-n(2 eta + 3 t delta)})^{1/4}); the measured
  /// typical distance stands in for the unspecified e^{-c delta^2 n} term.
  double asymptotic_bound = 0.0;
  double qubits_per_copy = 0.0;
  double consumed_per_copy = 0.0;
  double distilled_per_copy = 0.0;
  Index largest_vector = 0;
};

/// Restrict each of C, A, B, R of a canonical state to the support of its
/// marginal. Local isometries only, so every entropy is unchanged.
PureState compress_supports(const PureState& phi_canonical);

/// Amplitude count of phi^{(x)n}, after support compression.
Index iid_state_entries(const PureState& phi, const RoleAssignment& roles, int n);

IidRecord iid_experiment(const PureState& phi, const RoleAssignment& roles,
                         const TypicalSpec& spec, const SeededStream& stream,
                         const IidOptions& options = {});

/// n copies of a canonical state, labeled C#i, A#i, B#i, R#i for i = 1..n (copy-major).
PureState tensor_power(const PureState& phi_canonical, int n);

}  // namespace qsr
