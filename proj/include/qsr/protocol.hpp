// One-shot state redistribution: encoder/decoder construction and the
// forward (Alice -> Bob) and reverse (Bob -> Alice) runs.
//
// Systems, after canonicalizing the input to [C, A, B, R]:
//   C = C1 C2 C3         cut of the transferred system
//   A2 (dim d2), B1 (dim d1)   halves of the consumed / distilled ebits
//   C'', A''             Alice's copies of C, A in the initial state
//   C', B'               Bob's copies of C, B in the final state
//
// Forward run:
//   initial  = Phi[C2 A2] (x) phi[C'' A'' B R]      (Alice: A2 C'' A'', Bob: C2 B)
//   Alice applies W^dagger on A2 C'' A'' -> C1 C3 A, sends C3,
//   Bob applies V on C2 C3 B -> B1 C' B'
//   target   = Phi[C1 B1] (x) phi[C' A B' R]
//
// W^dagger is applied as a plain contraction: whatever part of the initial
// state lies outside the range of W is dropped, and the lost weight shows up
// in distance_to_target (the output is never renormalized before comparison).

#pragma once

#include "qsr/decoupling.hpp"
#include "qsr/metrics.hpp"
#include "qsr/qstate.hpp"
#include "qsr/sampling.hpp"
#include "qsr/uhlmann.hpp"

namespace qsr {

namespace labels {
inline const std::string kC = "C", kA = "A", kB = "B", kR = "R";
inline const std::string kC1 = "C1", kC2 = "C2", kC3 = "C3";
inline const std::string kA2 = "A2", kB1 = "B1";
inline const std::string kCPrime = "C'", kCDoublePrime = "C''";
inline const std::string kADoublePrime = "A''", kBPrime = "B'";
}  // namespace labels

/// Roles of a state already in canonical [C, A, B, R] form.
RoleAssignment canonical_roles();

/// Reorders and merges the role groups into a [C, A, B, R] layout.
PureState canonicalize(const PureState& phi, const RoleAssignment& roles);

/// Reference states and gamma_i = 2 ||phi - reference_i||_1 (in [0, 4]).
struct ReferencePair {
  PureState hat;    ///< decouples C2 from BR
  PureState check;  ///< decouples C1 from AR
  double gamma1 = 0.0;
  double gamma2 = 0.0;
};

/// All three states must share a layout.
ReferencePair make_references(const PureState& phi, PureState hat, PureState check);

struct EtaBounds {
  double eta1 = 0.0;
  double eta2 = 0.0;
};

/// eta1 = 2 (2 d_C d_BR Tr(hat_CBR^2) / d_{C1C3}^2)^(1/4),
/// eta2 = 2 (2 d_C d_AR Tr(check_CAR^2) / d_{C2C3}^2)^(1/4).
/// References must be in canonical [C, A, B, R] form.
EtaBounds eta_bounds(const ReferencePair& refs, const CutPartition& p);

struct ProtocolPlan {
  RoleAssignment roles;
  PureState phi;  ///< canonical [C, A, B, R]
  CutPartition partition;
  LinearMap unitary;  ///< on C
  LinearMap encoder;  ///< W: [C1, C3, A] -> [A2, C'', A'']
  LinearMap decoder;  ///< V: [C2, C3, B] -> [B1, C', B']
  double gamma1 = 0.0, gamma2 = 0.0;
  double eta1 = 0.0, eta2 = 0.0;
  double delta1 = 0.0, delta2 = 0.0;  ///< gamma_i + eta_i
  /// Decoupling residuals of the chosen unitary: 1 is C2 vs BR on the hat
  /// reference (feeds W), 2 is C1 vs AR on the check reference (feeds V).
  double measured_eps1 = 0.0, measured_eps2 = 0.0;
  bool search_accepted = false;
  int search_iterations = 0;
  double encoder_alignment = 0.0;  ///< ||(W U).hat - Phi (x) hat''||_1
  double decoder_alignment = 0.0;  ///< ||(V U).check - Phi (x) check'||_1

  double analytic_bound() const { return delta1 + delta2; }
  double measured_bound() const;
};

ProtocolPlan build_plan(const PureState& phi, const RoleAssignment& roles,
                        const CutPartition& p, const ReferencePair& refs,
                        int search_budget, const SeededStream& stream);
/// References equal to phi.
ProtocolPlan build_plan(const PureState& phi, const RoleAssignment& roles,
                        const CutPartition& p, int search_budget,
                        const SeededStream& stream);

/// Phi[C2 A2] (x) phi[C'' A'' B R] for canonical phi.
PureState initial_state(const PureState& phi_canonical, const CutPartition& p);
/// Phi[C1 B1] (x) phi[C' A B' R] for canonical phi.
PureState final_state(const PureState& phi_canonical, const CutPartition& p);

struct ResourceLedger {
  double qubits_sent = 0.0;
  double ebits_consumed = 0.0;
  double ebits_distilled = 0.0;
};

enum class Direction { kForward, kReverse };

struct ProtocolReport {
  Direction direction = Direction::kForward;
  PureState final_state;  ///< normalized output
  double retained_weight = 1.0;  ///< squared norm of the output before normalizing
  double distance_to_target = 0.0;
  double analytic_bound = 0.0;  ///< Delta1 + Delta2
  double measured_bound = 0.0;  ///< gamma1 + gamma2 + 2 sqrt(eps1) + 2 sqrt(eps2)
  ResourceLedger ledger;
};

ProtocolReport run_forward(const PureState& phi, const ProtocolPlan& plan);
/// Applies V^dagger, returns C3 to Alice, applies W; compares with the
/// initial state of the plan's phi.
ProtocolReport run_reverse(const ProtocolPlan& plan, const PureState& upsilon_final);

}  // namespace qsr
