#include "qsr/iid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace qsr {
namespace {

using namespace labels;

const std::string kRoles[] = {kC, kA, kB, kR};

std::string copy_label(const std::string& role, int i) {
  return role + "#" + std::to_string(i + 1);
}

Index power_of_two_floor(double log2_target) {
  if (!(log2_target >= 1.0)) return 1;
  return Index{1} << static_cast<int>(std::floor(log2_target));
}

void check_guard(Index entries, Index limit, const std::string& what) {
  if (entries > limit) {
    std::ostringstream msg;
    msg << what << " needs " << entries << " amplitudes, above the limit of " << limit;
    throw GuardError(msg.str());
  }
}

Index checked_product(Index a, Index b) {
  if (b != 0 && a > std::numeric_limits<Index>::max() / b) {
    throw GuardError("materialized dimension overflows");
  }
  return a * b;
}

// Moves the C^n part of a canonical n-copy state into the typical subspace
// coordinates of C, zero padded to `embedded_dim`; A^n, B^n, R^n are merged.
PureState embed_typical(const PureState& psi, const TypicalProjector& proj_c, int n,
                        Index embedded_dim) {
  RawState state = psi.raw();
  const Index d = proj_c.base_dim();
  const SystemLayout single{{kC, d}};
  const LinearMap to_eigenbasis(single, single, proj_c.eigenvectors.adjoint(),
                                MapKind::kUnitary);
  for (int i = 0; i < n; ++i) {
    const std::string label = copy_label(kC, i);
    const SystemLayout copy{{label, d}};
    state = apply(LinearMap(copy, copy, to_eigenbasis.matrix(), MapKind::kUnitary), state,
                  Labels{label});
  }
  Labels order;
  for (const auto& role : kRoles) {
    for (int i = 0; i < n; ++i) order.push_back(copy_label(role, i));
  }
  state = permute(state, order);

  const Index strings = state.layout.dim_of(std::span(order).first(static_cast<std::size_t>(n)));
  const Index rest = state.amplitudes.size() / strings;
  Vector embedded = Vector::Zero(embedded_dim * rest);
  Index next = 0;
  for (Index s = 0; s < strings; ++s) {
    if (!proj_c.is_typical(string_type(s, d, n))) continue;
    embedded.segment(next * rest, rest) = state.amplitudes.segment(s * rest, rest);
    ++next;
  }
  if (next > embedded_dim) throw DimensionError("typical rank exceeds the embedding");

  std::vector<Subsystem> merged{{kC, embedded_dim}};
  for (const auto& role : {kA, kB, kR}) {
    Labels group;
    for (int i = 0; i < n; ++i) group.push_back(copy_label(role, i));
    merged.push_back({role, state.layout.dim_of(group)});
  }
  return PureState::normalized({SystemLayout(std::move(merged)), std::move(embedded)});
}

}  // namespace

IidAllocation allocate_partition(std::uint64_t typical_rank, const ResourceRates& rates,
                                 const TypicalSpec& spec) {
  spec.validate();
  if (typical_rank < 1) throw DimensionError("typical rank must be >= 1");
  const double n = spec.n;
  const double td = spec.t * spec.delta;
  IidAllocation a;
  // I(B;C) = 2 E2 and I(A;C) = 2 E1
  a.target_log2_d1 = n * (2.0 * rates.ebits_distilled - 6.0 * td) / 2.0;
  a.target_log2_d2 = n * (2.0 * rates.ebits_consumed - 6.0 * td) / 2.0;
  a.d1 = power_of_two_floor(a.target_log2_d1);
  a.d2 = power_of_two_floor(a.target_log2_d2);
  const auto d12 = static_cast<std::uint64_t>(a.d1 * a.d2);
  a.d3 = static_cast<Index>((typical_rank + d12 - 1) / d12);
  a.padding = a.d1 * a.d2 * a.d3 - static_cast<Index>(typical_rank);
  a.eta_slack = std::log2(static_cast<double>(a.d3)) / n - rates.qubits - 6.0 * td;
  a.feasible = std::abs(a.eta_slack) <= td + 1e-12;
  return a;
}

PureState compress_supports(const PureState& phi) {
  RawState state = phi.raw();
  for (const auto& role : kRoles) {
    const Labels keep{role};
    Eigen::SelfAdjointEigenSolver<Matrix> es(partial_trace_matrix(state, keep));
    const Index d = es.eigenvalues().size();
    std::vector<Index> support;
    for (Index j = d; j-- > 0;) {
      if (es.eigenvalues()(j) > kTolerances.eigen_clamp) support.push_back(j);
    }
    Matrix basis(d, static_cast<Index>(support.size()));
    for (std::size_t k = 0; k < support.size(); ++k) {
      basis.col(static_cast<Index>(k)) = es.eigenvectors().col(support[k]);
    }
    const LinearMap restrict(SystemLayout{{role, d}},
                             SystemLayout{{role + "'", basis.cols()}}, basis.adjoint());
    state = apply(restrict, state, keep);
    state.layout = state.layout.renamed(role + "'", role);
  }
  return PureState::normalized(std::move(state));
}

PureState tensor_power(const PureState& phi, int n) {
  if (n < 1) throw DimensionError("tensor power needs n >= 1");
  auto copy = [&](int i) {
    std::vector<Subsystem> subs;
    for (const auto& s : phi.layout().subsystems()) subs.push_back({copy_label(s.label, i), s.dim});
    return relabel(phi, SystemLayout(std::move(subs)));
  };
  PureState out = copy(0);
  for (int i = 1; i < n; ++i) out = tensor(out, copy(i));
  return out;
}

Index iid_state_entries(const PureState& phi, const RoleAssignment& roles, int n) {
  const auto compressed = compress_supports(canonicalize(phi, roles));
  Index entries = 1;
  for (int i = 0; i < n; ++i) {
    entries = checked_product(entries, compressed.layout().total_dim());
  }
  return entries;
}

IidRecord iid_experiment(const PureState& phi, const RoleAssignment& roles,
                         const TypicalSpec& spec, const SeededStream& stream,
                         const IidOptions& options) {
  spec.validate();
  const int n = spec.n;
  const auto phi_c = compress_supports(canonicalize(phi, roles));
  const auto& single = phi_c.layout();

  IidRecord rec;
  rec.spec = spec;
  rec.compressed_layout = single;
  rec.target_rates = resource_rates(phi_c, canonical_roles());

  Index entries = 1;
  for (int i = 0; i < n; ++i) entries = checked_product(entries, single.total_dim());
  check_guard(entries, options.max_entries, "the n-copy state");

  const PureState psi = tensor_power(phi_c, n);

  auto projector = [&](const Labels& group) {
    return typical_stats(partial_trace_matrix(phi_c.raw(), group), spec);
  };
  const auto proj_c = projector({kC});
  const auto proj_a = projector({kA});
  const auto proj_b = projector({kB});
  const auto proj_ar = projector({kA, kR});
  const auto proj_br = projector({kB, kR});

  auto step = [&](std::initializer_list<std::string> roles_in_copy,
                  const TypicalProjector& proj) {
    ProjectionStep s{{}, &proj};
    for (int i = 0; i < n; ++i) {
      Labels group;
      for (const auto& r : roles_in_copy) group.push_back(copy_label(r, i));
      s.copies.push_back(std::move(group));
    }
    return s;
  };
  const auto step_c = step({kC}, proj_c);
  const ProjectionStep omega_steps[] = {step_c};
  const ProjectionStep hat_steps[] = {step_c, step({kA}, proj_a), step({kB, kR}, proj_br)};
  const ProjectionStep check_steps[] = {step_c, step({kB}, proj_b), step({kA, kR}, proj_ar)};

  const auto omega = project_typical(psi, omega_steps);
  const auto omega_hat = project_typical(psi, hat_steps);
  const auto omega_check = project_typical(psi, check_steps);
  rec.success_probability = omega.success_probability;
  rec.typical_distance = trace_distance(psi, omega.state);
  rec.typical_rank = proj_c.rank;

  rec.allocation = allocate_partition(proj_c.rank, rec.target_rates, spec);
  const auto p = rec.allocation.partition();
  const Index embedded_dim = p.total();

  Index c_power = 1;
  for (int i = 0; i < n; ++i) c_power *= single.dim(kC);
  const Index side = entries / c_power;  // (d_A d_B d_R)^n
  const Index ebit_dim = std::max(p.d1, p.d2);
  const Index upsilon =
      checked_product(checked_product(ebit_dim * ebit_dim, embedded_dim), side);
  check_guard(upsilon, options.max_entries, "the protocol register");
  rec.largest_vector = std::max(entries, upsilon);

  const auto omega_e = embed_typical(omega.state, proj_c, n, embedded_dim);
  const auto hat_e = embed_typical(omega_hat.state, proj_c, n, embedded_dim);
  const auto check_e = embed_typical(omega_check.state, proj_c, n, embedded_dim);

  const auto refs = make_references(omega_e, hat_e, check_e);
  const auto plan =
      build_plan(omega_e, canonical_roles(), p, refs, options.search_budget, stream);
  const auto report = run_forward(omega_e, plan);

  rec.gamma1 = plan.gamma1;
  rec.gamma2 = plan.gamma2;
  rec.eta1 = plan.eta1;
  rec.eta2 = plan.eta2;
  rec.measured_eps1 = plan.measured_eps1;
  rec.measured_eps2 = plan.measured_eps2;
  rec.search_accepted = plan.search_accepted;
  rec.distance_to_target = report.distance_to_target;
  rec.measured_bound = report.measured_bound;
  rec.analytic_bound = report.analytic_bound;
  const double td = spec.t * spec.delta;
  rec.asymptotic_bound =
      4.0 * (rec.typical_distance +
             std::pow(2.0 * std::exp2(-n * (2.0 * rec.allocation.eta_slack + 3.0 * td)), 0.25));
  rec.qubits_per_copy = report.ledger.qubits_sent / n;
  rec.consumed_per_copy = report.ledger.ebits_consumed / n;
  rec.distilled_per_copy = report.ledger.ebits_distilled / n;
  return rec;
}

}  // namespace qsr
