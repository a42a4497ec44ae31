// Typical subspaces of tensor powers rho^{(x)n}.
//
// A string of eigen-indices (i_1 ... i_n) is typical when its eigenvalue
// product lies in [2^{-n(S+delta)}, 2^{-n(S-delta)}]. Typicality depends only
// on the type (how often each eigen-index occurs), so rank and weight are
// sums over type classes and never touch a d^n-dimensional object.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qsr/common.hpp"
#include "qsr/qstate.hpp"

namespace qsr {

struct TypicalSpec {
  int n = 1;
  double delta = 0.1;
  double t = 1.5;

  /// n >= 1, delta > 0, t > 1.
  void validate() const;
};

struct TypicalProjector {
  RealVector eigenvalues;  ///< of the single-copy state, descending, clamped
  Matrix eigenvectors;     ///< columns match `eigenvalues`
  TypicalSpec spec;
  double entropy = 0.0;    ///< bits
  /// Type classes (count of each eigen-index) that are typical.
  std::vector<std::vector<int>> typical_types;
  std::uint64_t rank = 0;
  double weight = 0.0;

  /// log2 of the eigenvalue product of a string with these counts
  /// (-inf if it uses a zero eigenvalue).
  double log2_product(std::span<const int> counts) const;
  bool is_typical(std::span<const int> counts) const;
  Index base_dim() const { return eigenvalues.size(); }
};

TypicalProjector typical_stats(const Matrix& rho, const TypicalSpec& spec);
TypicalProjector typical_stats(const DensityOperator& rho, const TypicalSpec& spec);

/// Counts of each eigen-index in string number `index` of base_dim^n strings
/// (first copy most significant).
std::vector<int> string_type(Index index, Index base_dim, int n);

/// Dense projector on (C^d)^{(x)n}; refuses above `max_dim` rows.
Matrix materialize_projector(const TypicalProjector& projector, Index max_dim = 4096);

/// One projector in a projection sequence: `copies[i]` are the labels that
/// make up copy i of the projected system, in the projector's basis order.
struct ProjectionStep {
  std::vector<Labels> copies;
  const TypicalProjector* projector = nullptr;
};

/// Applies the steps in order (first step acts first). No renormalization.
RawState apply_projections(const RawState& psi, std::span<const ProjectionStep> steps);

struct ProjectionResult {
  PureState state;  ///< normalized
  double success_probability;
};

/// Throws DegenerateInputError if the projected vector vanishes.
ProjectionResult project_typical(const PureState& psi, std::span<const ProjectionStep> steps);

}  // namespace qsr
