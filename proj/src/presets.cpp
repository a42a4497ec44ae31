#include "qsr/presets.hpp"

#include <array>
#include <cmath>

#include "qsr/sampling.hpp"

namespace qsr {
namespace {

const SystemLayout& four_qubits() {
  static const SystemLayout layout{{"C", 2}, {"A", 2}, {"B", 2}, {"R", 2}};
  return layout;
}

// Superposition of computational basis strings over [C, A, B, R].
PureState superpose(std::initializer_list<std::pair<std::array<Index, 4>, double>> terms) {
  Vector v = Vector::Zero(16);
  for (const auto& [bits, amp] : terms) {
    v(bits[0] * 8 + bits[1] * 4 + bits[2] * 2 + bits[3]) += amp;
  }
  return PureState::normalized({four_qubits(), std::move(v)});
}

}  // namespace

std::vector<std::string_view> preset_names() {
  return {"product", "bell-CA", "bell-CB", "bell-CR", "ghz-CBR",
          "w-CABR",  "partial-CR", "random", "pi-CF"};
}

std::optional<PureState> make_preset(std::string_view name, std::uint64_t seed) {
  if (name == "product") return superpose({{{0, 0, 0, 0}, 1.0}});
  if (name == "bell-CA") return superpose({{{0, 0, 0, 0}, 1.0}, {{1, 1, 0, 0}, 1.0}});
  if (name == "bell-CB") return superpose({{{0, 0, 0, 0}, 1.0}, {{1, 0, 1, 0}, 1.0}});
  if (name == "bell-CR") return superpose({{{0, 0, 0, 0}, 1.0}, {{1, 0, 0, 1}, 1.0}});
  if (name == "ghz-CBR") return superpose({{{0, 0, 0, 0}, 1.0}, {{1, 0, 1, 1}, 1.0}});
  if (name == "w-CABR") {
    return superpose({{{1, 0, 0, 0}, 1.0}, {{0, 1, 0, 0}, 1.0},
                      {{0, 0, 1, 0}, 1.0}, {{0, 0, 0, 1}, 1.0}});
  }
  if (name == "partial-CR") {
    return superpose({{{0, 0, 0, 0}, std::sqrt(0.8)}, {{1, 0, 0, 1}, std::sqrt(0.2)}});
  }
  if (name == "random") {
    SeededStream stream(seed);
    return random_pure_state(four_qubits(), stream);
  }
  if (name == "pi-CF") {
    auto phi = maximally_entangled(16, "CF", "P");
    return relabel(phi, SystemLayout{{"C", 8}, {"F", 2}, {"P", 16}});
  }
  return std::nullopt;
}

}  // namespace qsr
