// Reproducible randomness: Haar unitaries, random states, seeded streams.
//
// Draws are a fixed function of (seed, stream_index) on every platform:
// the engine is std::mt19937_64 (bit-exact by the standard), seeded through
// SplitMix64, and Gaussians come from a hand-written Box-Muller transform
// rather than std::normal_distribution, whose output is library-specific.

#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "qsr/common.hpp"
#include "qsr/qstate.hpp"

namespace qsr {

/// Identifies the generator algorithm in reports and archived files.
inline constexpr std::string_view kGeneratorVersion = "splitmix64+mt19937_64+box-muller/1";

std::uint64_t splitmix64(std::uint64_t x);

class SeededStream {
 public:
  explicit SeededStream(std::uint64_t seed, std::uint64_t stream_index = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_index() const { return stream_index_; }

  /// Independent child stream; children of distinct parents or with distinct
  /// indices never share a seed schedule.
  SeededStream substream(std::uint64_t index) const;

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform in (0, 1).
  double uniform();
  double gaussian();
  /// Circularly symmetric complex Gaussian with E|z|^2 = 1.
  Complex complex_gaussian();

 private:
  std::uint64_t seed_;
  std::uint64_t stream_index_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// d x d matrix of i.i.d. complex Gaussians.
Matrix ginibre(Index rows, Index cols, SeededStream& stream);

/// Haar-distributed unitary: QR of a Ginibre matrix with the phases of R's
/// diagonal moved into Q.
Matrix haar_unitary_matrix(Index d, SeededStream& stream);
LinearMap haar_unitary(const SystemLayout& layout, SeededStream& stream);
/// First `cols` columns of a Haar unitary of side `rows`.
Matrix haar_isometry_matrix(Index rows, Index cols, SeededStream& stream);

PureState random_pure_state(const SystemLayout& layout, SeededStream& stream);
/// G G^dagger / Tr, with G a (dim x rank) Ginibre matrix.
DensityOperator random_density(const SystemLayout& layout, Index rank,
                               SeededStream& stream);

}  // namespace qsr
