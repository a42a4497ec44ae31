#include "qsr/layout.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <unordered_set>

namespace qsr {

SystemLayout::SystemLayout(std::initializer_list<Subsystem> subsystems)
    : subsystems_(subsystems) {
  validate();
}

SystemLayout::SystemLayout(std::vector<Subsystem> subsystems)
    : subsystems_(std::move(subsystems)) {
  validate();
}

void SystemLayout::validate() {
  std::unordered_set<std::string> seen;
  total_dim_ = 1;
  for (const auto& s : subsystems_) {
    if (s.label.empty()) throw LayoutError("subsystem label must be non-empty");
    if (s.dim < 1) {
      throw LayoutError("subsystem '" + s.label + "' has dimension < 1");
    }
    if (!seen.insert(s.label).second) {
      throw LayoutError("duplicate subsystem label '" + s.label + "'");
    }
    total_dim_ *= s.dim;
  }
}

bool SystemLayout::contains(std::string_view label) const {
  return std::any_of(subsystems_.begin(), subsystems_.end(),
                     [&](const Subsystem& s) { return s.label == label; });
}

std::size_t SystemLayout::position(std::string_view label) const {
  for (std::size_t i = 0; i < subsystems_.size(); ++i) {
    if (subsystems_[i].label == label) return i;
  }
  throw LayoutError("unknown subsystem label '" + std::string(label) + "' in " +
                    to_string(*this));
}

Index SystemLayout::dim(std::string_view label) const {
  return subsystems_[position(label)].dim;
}

Index SystemLayout::dim_of(std::span<const std::string> labels) const {
  Index d = 1;
  for (const auto& l : labels) d *= dim(l);
  return d;
}

Labels SystemLayout::labels() const {
  Labels out;
  out.reserve(subsystems_.size());
  for (const auto& s : subsystems_) out.push_back(s.label);
  return out;
}

SystemLayout SystemLayout::select(std::span<const std::string> labels) const {
  for (const auto& l : labels) (void)position(l);
  std::vector<Subsystem> out;
  for (const auto& s : subsystems_) {
    if (std::find(labels.begin(), labels.end(), s.label) != labels.end()) {
      out.push_back(s);
    }
  }
  if (out.size() != labels.size()) {
    throw LayoutError("label list contains duplicates");
  }
  return SystemLayout(std::move(out));
}

SystemLayout SystemLayout::complement(std::span<const std::string> labels) const {
  for (const auto& l : labels) (void)position(l);
  std::vector<Subsystem> out;
  for (const auto& s : subsystems_) {
    if (std::find(labels.begin(), labels.end(), s.label) == labels.end()) {
      out.push_back(s);
    }
  }
  return SystemLayout(std::move(out));
}

SystemLayout SystemLayout::reordered(std::span<const std::string> order) const {
  if (order.size() != subsystems_.size()) {
    throw LayoutError("reorder must list every subsystem of " + to_string(*this));
  }
  std::vector<Subsystem> out;
  out.reserve(order.size());
  for (const auto& l : order) out.push_back(subsystems_[position(l)]);
  return SystemLayout(std::move(out));
}

SystemLayout SystemLayout::renamed(std::string_view from, std::string to) const {
  auto subs = subsystems_;
  subs[position(from)].label = std::move(to);
  return SystemLayout(std::move(subs));
}

SystemLayout concat(const SystemLayout& a, const SystemLayout& b) {
  auto subs = a.subsystems();
  subs.insert(subs.end(), b.subsystems().begin(), b.subsystems().end());
  return SystemLayout(std::move(subs));
}

SystemLayout split_subsystem(const SystemLayout& layout, std::string_view label,
                             std::span<const Index> dims) {
  std::vector<Subsystem> factors;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    factors.push_back({std::string(label) + std::to_string(i + 1), dims[i]});
  }
  return split_subsystem(layout, label, factors);
}

SystemLayout split_subsystem(const SystemLayout& layout, std::string_view label,
                             std::span<const Subsystem> factors) {
  const auto pos = layout.position(label);
  Index product = 1;
  for (const auto& f : factors) product *= f.dim;
  if (product != layout[pos].dim) {
    std::ostringstream msg;
    msg << "cannot split '" << label << "' of dimension " << layout[pos].dim
        << " into factors with product " << product;
    throw DimensionError(msg.str());
  }
  auto subs = layout.subsystems();
  subs.erase(subs.begin() + static_cast<std::ptrdiff_t>(pos));
  subs.insert(subs.begin() + static_cast<std::ptrdiff_t>(pos), factors.begin(),
              factors.end());
  return SystemLayout(std::move(subs));
}

SystemLayout merge_subsystems(const SystemLayout& layout,
                              std::span<const std::string> labels,
                              std::string merged_label) {
  if (labels.empty()) throw LayoutError("merge needs at least one label");
  const auto first = layout.position(labels.front());
  Index dim = 1;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (layout.position(labels[i]) != first + i) {
      throw LayoutError("merged labels must be adjacent and in layout order");
    }
    dim *= layout[first + i].dim;
  }
  auto subs = layout.subsystems();
  subs.erase(subs.begin() + static_cast<std::ptrdiff_t>(first),
             subs.begin() + static_cast<std::ptrdiff_t>(first + labels.size()));
  subs.insert(subs.begin() + static_cast<std::ptrdiff_t>(first),
              Subsystem{std::move(merged_label), dim});
  return SystemLayout(std::move(subs));
}

std::vector<Index> permutation_map(const SystemLayout& layout,
                                   std::span<const std::string> order) {
  const auto target = layout.reordered(order);
  const std::size_t k = layout.size();

  std::vector<Index> old_stride(k);
  Index s = 1;
  for (std::size_t i = k; i-- > 0;) {
    old_stride[i] = s;
    s *= layout[i].dim;
  }
  // stride in the old layout of each subsystem, listed in new order
  std::vector<Index> stride(k), dims(k);
  for (std::size_t i = 0; i < k; ++i) {
    stride[i] = old_stride[layout.position(order[i])];
    dims[i] = target[i].dim;
  }

  const Index total = layout.total_dim();
  std::vector<Index> map(static_cast<std::size_t>(total));
  std::vector<Index> digit(k, 0);
  Index old_index = 0;
  for (Index n = 0; n < total; ++n) {
    map[static_cast<std::size_t>(n)] = old_index;
    // odometer increment, last subsystem fastest
    for (std::size_t i = k; i-- > 0;) {
      if (++digit[i] < dims[i]) {
        old_index += stride[i];
        break;
      }
      old_index -= stride[i] * (dims[i] - 1);
      digit[i] = 0;
    }
  }
  return map;
}

std::vector<Index> digits_of(const SystemLayout& layout, Index index) {
  std::vector<Index> d(layout.size());
  for (std::size_t i = layout.size(); i-- > 0;) {
    d[i] = index % layout[i].dim;
    index /= layout[i].dim;
  }
  return d;
}

SystemLayout parse_layout_spec(std::string_view text) {
  std::vector<Subsystem> subs;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find(',', start);
    if (end == std::string_view::npos) end = text.size();
    const auto item = text.substr(start, end - start);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw LayoutError("expected LABEL=DIM, got '" + std::string(item) + "'");
    }
    Index dim = 0;
    const auto num = item.substr(eq + 1);
    auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), dim);
    if (ec != std::errc() || ptr != num.data() + num.size()) {
      throw LayoutError("bad dimension in '" + std::string(item) + "'");
    }
    subs.push_back({std::string(item.substr(0, eq)), dim});
    start = end + 1;
  }
  return SystemLayout(std::move(subs));
}

std::string to_string(const SystemLayout& layout) {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < layout.size(); ++i) {
    if (i) out << ", ";
    out << layout[i].label << ':' << layout[i].dim;
  }
  out << ']';
  return out.str();
}

}  // namespace qsr
