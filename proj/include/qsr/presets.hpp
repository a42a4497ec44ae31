// Named example states.
//
//   product    |0000> on C, A, B, R (all qubits)
//   bell-CA    Phi[C A] (x) |0>_B |0>_R       rates (Q, E1, E2) = (0, 1, 0)
//   bell-CB    Phi[C B] (x) |0>_A |0>_R       rates (0, 0, 1)
//   bell-CR    Phi[C R] (x) |0>_A |0>_B       rates (1, 0, 0)
//   ghz-CBR    GHZ on C, B, R (x) |0>_A
//   w-CABR     W state over C, A, B, R
//   partial-CR sqrt(0.8)|00> + sqrt(0.2)|11> on C, R (x) |0>_A |0>_B
//   random     seeded Haar-random pure state on four qubits
//   pi-CF      C:8, F:2 maximally entangled with a purifier P:16, so the
//              C F marginal is pi_C (x) pi_F

#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "qsr/qstate.hpp"

namespace qsr {

std::vector<std::string_view> preset_names();
std::optional<PureState> make_preset(std::string_view name, std::uint64_t seed = 0);

}  // namespace qsr
