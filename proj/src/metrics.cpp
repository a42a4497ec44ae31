#include "qsr/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace qsr {
namespace {

Labels join(std::span<const std::string> a, std::span<const std::string> b) {
  Labels out(a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

void require_disjoint(std::initializer_list<std::span<const std::string>> sets) {
  std::set<std::string> seen;
  for (const auto& s : sets) {
    for (const auto& l : s) {
      if (!seen.insert(l).second) {
        throw LayoutError("label '" + l + "' appears in more than one argument set");
      }
    }
  }
}

}  // namespace

double trace_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::BDCSVD<Matrix> svd(m);
  return svd.singularValues().sum();
}

double trace_distance(const DensityOperator& rho, const DensityOperator& sigma) {
  if (!(rho.layout() == sigma.layout())) {
    throw LayoutError("trace distance needs operators over the same layout");
  }
  const Matrix diff = rho.matrix() - sigma.matrix();
  Eigen::SelfAdjointEigenSolver<Matrix> es(diff, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

double trace_distance(const Vector& x, const Vector& y) {
  if (x.size() != y.size()) throw DimensionError("trace distance: length mismatch");
  // The nonzero eigenvalues of |x><x| - |y><y| have opposite signs and their
  // absolute sum is sqrt((|x|^2+|y|^2)^2 - 4|<x|y>|^2). The first factor of
  // (s - 2|o|)(s + 2|o|) equals min_theta |x - e^{i theta} y|^2, which is
  // computed directly to avoid cancellation for nearly equal states.
  const Complex overlap = y.dot(x);  // <y|x>
  const double abs_overlap = std::abs(overlap);
  const Complex phase = abs_overlap > 0.0 ? overlap / abs_overlap : Complex(1.0);
  const double near = (x - phase * y).squaredNorm();
  const double far = x.squaredNorm() + y.squaredNorm() + 2.0 * abs_overlap;
  return std::sqrt(std::max(0.0, near * far));
}

double trace_distance(const PureState& x, const PureState& y) {
  if (!(x.layout() == y.layout())) {
    throw LayoutError("trace distance needs states over the same layout");
  }
  return trace_distance(x.amplitudes(), y.amplitudes());
}

double purity(const Matrix& rho) { return rho.cwiseAbs2().sum(); }

double purity(const DensityOperator& rho) { return purity(rho.matrix()); }

RealVector clamped_spectrum(const Matrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
  RealVector ev = es.eigenvalues();
  for (Index i = 0; i < ev.size(); ++i) {
    ev(i) = ev(i) < kTolerances.eigen_clamp ? 0.0 : std::min(ev(i), 1.0);
  }
  return ev;
}

double shannon_entropy(const RealVector& p) {
  double h = 0.0;
  for (Index i = 0; i < p.size(); ++i) {
    if (p(i) > 0.0) h -= p(i) * std::log2(p(i));
  }
  return h;
}

double von_neumann_entropy(const Matrix& rho) {
  return shannon_entropy(clamped_spectrum(rho));
}

double von_neumann_entropy(const DensityOperator& rho) {
  return von_neumann_entropy(rho.matrix());
}

double marginal_entropy(const PureState& psi, std::span<const std::string> labels) {
  if (labels.empty()) return 0.0;
  return von_neumann_entropy(partial_trace_matrix(psi.raw(), labels));
}

double mutual_information(const PureState& psi, std::span<const std::string> x,
                          std::span<const std::string> y) {
  require_disjoint({x, y});
  return marginal_entropy(psi, x) + marginal_entropy(psi, y) -
         marginal_entropy(psi, join(x, y));
}

double conditional_mutual_information(const PureState& psi, std::span<const std::string> x,
                                      std::span<const std::string> y,
                                      std::span<const std::string> z) {
  require_disjoint({x, y, z});
  const auto xz = join(x, z);
  const auto yz = join(y, z);
  const auto xyz = join(xz, y);
  return marginal_entropy(psi, xz) + marginal_entropy(psi, yz) -
         marginal_entropy(psi, z) - marginal_entropy(psi, xyz);
}

void RoleAssignment::validate(const SystemLayout& layout) const {
  const std::pair<const char*, const Labels*> groups[] = {
      {"C", &c}, {"A", &a}, {"B", &b}, {"R", &r}};
  std::set<std::string> seen;
  for (const auto& [name, labels] : groups) {
    if (labels->empty()) throw LayoutError(std::string("missing role ") + name);
    for (const auto& l : *labels) {
      (void)layout.position(l);
      if (!seen.insert(l).second) {
        throw LayoutError("label '" + l + "' is assigned to more than one role");
      }
    }
  }
  if (seen.size() != layout.size()) {
    throw LayoutError("roles must cover every subsystem of " + to_string(layout));
  }
}

RoleAssignment parse_roles(std::string_view text) {
  RoleAssignment roles;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find(',', start);
    if (end == std::string_view::npos) end = text.size();
    const auto item = text.substr(start, end - start);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw LayoutError("expected ROLE=LABEL[+LABEL...], got '" + std::string(item) + "'");
    }
    const auto role = item.substr(0, eq);
    Labels* target = role == "C"   ? &roles.c
                     : role == "A" ? &roles.a
                     : role == "B" ? &roles.b
                     : role == "R" ? &roles.r
                                   : nullptr;
    if (!target) throw LayoutError("unknown role '" + std::string(role) + "'");
    auto rest = item.substr(eq + 1);
    std::size_t s = 0;
    while (s <= rest.size()) {
      auto e = rest.find('+', s);
      if (e == std::string_view::npos) e = rest.size();
      if (e == s) throw LayoutError("empty label in role '" + std::string(role) + "'");
      target->emplace_back(rest.substr(s, e - s));
      s = e + 1;
    }
    start = end + 1;
  }
  return roles;
}

ResourceRates resource_rates(const PureState& psi, const RoleAssignment& roles) {
  roles.validate(psi.layout());
  ResourceRates rates;
  rates.qubits = 0.5 * conditional_mutual_information(psi, roles.c, roles.r, roles.b);
  rates.ebits_consumed = 0.5 * mutual_information(psi, roles.a, roles.c);
  rates.ebits_distilled = 0.5 * mutual_information(psi, roles.b, roles.c);
  rates.net_ebits = rates.ebits_consumed - rates.ebits_distilled;
  return rates;
}

}  // namespace qsr
