// Ordered, labeled subsystem layouts and the mixed-radix index algebra.
//
// Index convention: the first-listed subsystem is the most significant
// digit. For a layout [X:dx, Y:dy] the basis vector |x>|y> sits at x*dy + y.

#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qsr/common.hpp"

namespace qsr {

struct Subsystem {
  std::string label;
  Index dim = 1;

  friend bool operator==(const Subsystem&, const Subsystem&) = default;
};

using Labels = std::vector<std::string>;

class SystemLayout {
 public:
  SystemLayout() = default;
  SystemLayout(std::initializer_list<Subsystem> subsystems);
  explicit SystemLayout(std::vector<Subsystem> subsystems);

  const std::vector<Subsystem>& subsystems() const { return subsystems_; }
  std::size_t size() const { return subsystems_.size(); }
  bool empty() const { return subsystems_.empty(); }
  const Subsystem& operator[](std::size_t i) const { return subsystems_[i]; }

  /// Product of all subsystem dimensions (1 for the empty layout).
  Index total_dim() const { return total_dim_; }

  bool contains(std::string_view label) const;
  /// Position of `label`; throws LayoutError if absent.
  std::size_t position(std::string_view label) const;
  Index dim(std::string_view label) const;
  /// Product of the dimensions of the given labels.
  Index dim_of(std::span<const std::string> labels) const;
  Labels labels() const;

  /// Sub-layout of the given labels, in this layout's order.
  SystemLayout select(std::span<const std::string> labels) const;
  /// Sub-layout of everything not in `labels`, in this layout's order.
  SystemLayout complement(std::span<const std::string> labels) const;
  /// Same subsystems, in exactly the order given (must be a permutation).
  SystemLayout reordered(std::span<const std::string> order) const;
  /// Copy with one label renamed.
  SystemLayout renamed(std::string_view from, std::string to) const;

  friend bool operator==(const SystemLayout& a, const SystemLayout& b) {
    return a.subsystems_ == b.subsystems_;
  }

 private:
  void validate();

  std::vector<Subsystem> subsystems_;
  Index total_dim_ = 1;
};

/// Concatenation a ++ b; throws LayoutError on duplicate labels.
SystemLayout concat(const SystemLayout& a, const SystemLayout& b);

/// Replace `label` in place by `label1`, `label2`, ... with the given dims.
/// Amplitude data is untouched: the factorization is a reinterpretation.
SystemLayout split_subsystem(const SystemLayout& layout, std::string_view label,
                             std::span<const Index> dims);
/// Replace `label` in place by factors with explicit labels.
SystemLayout split_subsystem(const SystemLayout& layout, std::string_view label,
                             std::span<const Subsystem> factors);

/// Inverse of split: the listed labels must be adjacent and in order.
SystemLayout merge_subsystems(const SystemLayout& layout,
                              std::span<const std::string> labels,
                              std::string merged_label);

/// For each basis index of `layout.reordered(order)`, the index of the same
/// basis vector in `layout`.
std::vector<Index> permutation_map(const SystemLayout& layout,
                                   std::span<const std::string> order);

/// Digits of `index` in the mixed radix of `layout`.
std::vector<Index> digits_of(const SystemLayout& layout, Index index);

/// Parse "C=2,A=2" style dimension lists.
SystemLayout parse_layout_spec(std::string_view text);

/// "[C:2, A:3]"
std::string to_string(const SystemLayout& layout);

}  // namespace qsr
