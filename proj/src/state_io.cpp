#include "qsr/state_io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace qsr {

using nlohmann::json;

json state_to_json(const PureState& psi) {
  json subsystems = json::array();
  for (const auto& s : psi.layout().subsystems()) {
    subsystems.push_back({{"label", s.label}, {"dim", s.dim}});
  }
  json amplitudes = json::array();
  for (Index i = 0; i < psi.amplitudes().size(); ++i) {
    amplitudes.push_back({psi.amplitudes()(i).real(), psi.amplitudes()(i).imag()});
  }
  return {{"format", kStateFormat}, {"subsystems", subsystems}, {"amplitudes", amplitudes}};
}

PureState state_from_json(const json& j) {
  if (!j.is_object()) throw FormatError("state: top level must be an object");
  if (j.contains("format") && j["format"] != kStateFormat) {
    throw FormatError("state: unsupported format " + j["format"].dump() + ", expected \"" +
                      std::string(kStateFormat) + "\"");
  }
  if (!j.contains("subsystems") || !j["subsystems"].is_array()) {
    throw FormatError("state: missing array field /subsystems");
  }
  if (!j.contains("amplitudes") || !j["amplitudes"].is_array()) {
    throw FormatError("state: missing array field /amplitudes");
  }
  std::vector<Subsystem> subs;
  const auto& js = j["subsystems"];
  for (std::size_t i = 0; i < js.size(); ++i) {
    const auto& s = js[i];
    const std::string where = "/subsystems/" + std::to_string(i);
    if (!s.is_object() || !s.contains("label") || !s["label"].is_string() ||
        !s.contains("dim") || !s["dim"].is_number_integer()) {
      throw FormatError("state: " + where + " must be {\"label\": string, \"dim\": integer}");
    }
    subs.push_back({s["label"].get<std::string>(), s["dim"].get<Index>()});
  }
  SystemLayout layout;
  try {
    layout = SystemLayout(std::move(subs));
  } catch (const LayoutError& e) {
    throw FormatError(std::string("state: /subsystems: ") + e.what());
  }

  const auto& ja = j["amplitudes"];
  if (static_cast<Index>(ja.size()) != layout.total_dim()) {
    throw FormatError("state: /amplitudes has " + std::to_string(ja.size()) +
                      " entries but the layout needs " + std::to_string(layout.total_dim()));
  }
  Vector v(layout.total_dim());
  for (std::size_t i = 0; i < ja.size(); ++i) {
    const auto& a = ja[i];
    if (!a.is_array() || a.size() != 2 || !a[0].is_number() || !a[1].is_number()) {
      throw FormatError("state: /amplitudes/" + std::to_string(i) +
                        " must be a [real, imaginary] pair");
    }
    v(static_cast<Index>(i)) = Complex(a[0].get<double>(), a[1].get<double>());
  }
  try {
    return PureState(std::move(layout), std::move(v));
  } catch (const InvariantError& e) {
    throw FormatError(std::string("state: /amplitudes: ") + e.what());
  }
}

std::string write_state(const PureState& psi) { return state_to_json(psi).dump() + "\n"; }

PureState read_state(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError("state: parse error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  return state_from_json(j);
}

PureState load_state_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open state file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return read_state(buf.str());
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void save_state_file(const PureState& psi, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write state file '" + path.string() + "'");
  out << write_state(psi);
}

std::string state_digest(const PureState& psi) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : write_state(psi)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

}  // namespace qsr
