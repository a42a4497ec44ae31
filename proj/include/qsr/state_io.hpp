// JSON state files:
//
//   {"format": "qsr-state/1",
//    "subsystems": [{"label": "C", "dim": 2}, ...],
//    "amplitudes": [[re, im], ...]}
//
// Amplitudes are listed in mixed-radix order, first subsystem most significant.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "qsr/qstate.hpp"

namespace qsr {

inline constexpr std::string_view kStateFormat = "qsr-state/1";

/// Malformed state text; the message names the offending position or field.
class FormatError : public Error {
 public:
  using Error::Error;
};

nlohmann::json state_to_json(const PureState& psi);
PureState state_from_json(const nlohmann::json& j);

std::string write_state(const PureState& psi);
PureState read_state(std::string_view text);

PureState load_state_file(const std::filesystem::path& path);
void save_state_file(const PureState& psi, const std::filesystem::path& path);

/// FNV-1a of the serialized state, as 16 hex digits.
std::string state_digest(const PureState& psi);

}  // namespace qsr
