#include "qsr/protocol.hpp"

#include <cmath>

namespace qsr {
namespace {

using namespace labels;

std::vector<Subsystem> cut_factors(const CutPartition& p) {
  return {{kC1, p.d1}, {kC2, p.d2}, {kC3, p.d3}};
}

Index role_dim(const PureState& phi, const std::string& label) {
  return phi.layout().dim(label);
}

// phi with C, A, B renamed; R unchanged.
PureState renamed(const PureState& phi, const std::string& c, const std::string& a,
                  const std::string& b) {
  return relabel(phi, SystemLayout{{c, role_dim(phi, kC)},
                                   {a, role_dim(phi, kA)},
                                   {b, role_dim(phi, kB)},
                                   {kR, role_dim(phi, kR)}});
}

PureState rotate_and_cut(const PureState& phi, const LinearMap& u, const CutPartition& p) {
  const Labels c{kC};
  const auto factors = cut_factors(p);
  return split_subsystem(apply(u, phi, c), kC, factors);
}

double purity_of_marginal(const PureState& psi, const Labels& keep) {
  return purity(partial_trace_matrix(psi.raw(), keep));
}

PureState normalized_or_throw(RawState raw) {
  if (raw.amplitudes.squaredNorm() == 0.0) {
    throw DegenerateInputError("protocol output has zero weight");
  }
  return PureState::normalized(std::move(raw));
}

}  // namespace

RoleAssignment canonical_roles() { return {{kC}, {kA}, {kB}, {kR}}; }

PureState canonicalize(const PureState& phi, const RoleAssignment& roles) {
  roles.validate(phi.layout());
  Labels order;
  for (const Labels* g : {&roles.c, &roles.a, &roles.b, &roles.r}) {
    order.insert(order.end(), g->begin(), g->end());
  }
  const auto& l = phi.layout();
  SystemLayout canonical{{kC, l.dim_of(roles.c)},
                         {kA, l.dim_of(roles.a)},
                         {kB, l.dim_of(roles.b)},
                         {kR, l.dim_of(roles.r)}};
  return relabel(permute(phi, order), std::move(canonical));
}

ReferencePair make_references(const PureState& phi, PureState hat, PureState check) {
  if (!(hat.layout() == phi.layout()) || !(check.layout() == phi.layout())) {
    throw LayoutError("reference states must share the layout of phi");
  }
  const double g1 = 2.0 * trace_distance(phi, hat);
  const double g2 = 2.0 * trace_distance(phi, check);
  return {std::move(hat), std::move(check), g1, g2};
}

EtaBounds eta_bounds(const ReferencePair& refs, const CutPartition& p) {
  const auto& l = refs.hat.layout();
  const double dc = static_cast<double>(l.dim(kC));
  p.validate(l.dim(kC));
  // Tr(hat_CBR^2) = Tr(hat_A^2) for a pure reference
  const double hat_purity = purity_of_marginal(refs.hat, {kA});
  const double check_purity = purity_of_marginal(refs.check, {kB});
  const double d_br = static_cast<double>(l.dim(kB) * l.dim(kR));
  const double d_ar = static_cast<double>(l.dim(kA) * l.dim(kR));
  const double d13 = static_cast<double>(p.d1 * p.d3);
  const double d23 = static_cast<double>(p.d2 * p.d3);
  return {2.0 * std::pow(2.0 * dc * d_br * hat_purity / (d13 * d13), 0.25),
          2.0 * std::pow(2.0 * dc * d_ar * check_purity / (d23 * d23), 0.25)};
}

double ProtocolPlan::measured_bound() const {
  return gamma1 + gamma2 + 2.0 * std::sqrt(measured_eps1) + 2.0 * std::sqrt(measured_eps2);
}

PureState initial_state(const PureState& phi, const CutPartition& p) {
  return tensor(maximally_entangled(p.d2, kC2, kA2),
                renamed(phi, kCDoublePrime, kADoublePrime, kB));
}

PureState final_state(const PureState& phi, const CutPartition& p) {
  return tensor(maximally_entangled(p.d1, kC1, kB1), renamed(phi, kCPrime, kA, kBPrime));
}

ProtocolPlan build_plan(const PureState& phi, const RoleAssignment& roles,
                        const CutPartition& p, const ReferencePair& refs_in,
                        int search_budget, const SeededStream& stream) {
  auto phi_c = canonicalize(phi, roles);
  ReferencePair refs{canonicalize(refs_in.hat, roles), canonicalize(refs_in.check, roles),
                     refs_in.gamma1, refs_in.gamma2};
  const Index dc = phi_c.layout().dim(kC);
  p.validate(dc);

  const auto hat_source = DecouplingSource::from_pure(refs.hat, kC, Labels{kB, kR});
  const auto check_source = DecouplingSource::from_pure(refs.check, kC, Labels{kA, kR});
  const auto search =
      find_simultaneous_unitary(check_source, hat_source, p, search_budget, stream);
  auto u = LinearMap::unitary(SystemLayout{{kC, dc}}, search.unitary);

  const auto hat_cut = rotate_and_cut(refs.hat, u, p);
  const auto nu_w = tensor(maximally_entangled(p.d2, kC2, kA2),
                           renamed(refs.hat, kCDoublePrime, kADoublePrime, kB));
  auto w = uhlmann_isometry(hat_cut, nu_w, Labels{kC2, kB, kR});

  const auto check_cut = rotate_and_cut(refs.check, u, p);
  const auto nu_v = tensor(maximally_entangled(p.d1, kC1, kB1),
                           renamed(refs.check, kCPrime, kA, kBPrime));
  auto v = uhlmann_isometry(check_cut, nu_v, Labels{kC1, kA, kR});

  const auto eta = eta_bounds(refs, p);
  return ProtocolPlan{
      .roles = roles,
      .phi = std::move(phi_c),
      .partition = p,
      .unitary = std::move(u),
      .encoder = std::move(w.isometry),
      .decoder = std::move(v.isometry),
      .gamma1 = refs.gamma1,
      .gamma2 = refs.gamma2,
      .eta1 = eta.eta1,
      .eta2 = eta.eta2,
      .delta1 = refs.gamma1 + eta.eta1,
      .delta2 = refs.gamma2 + eta.eta2,
      .measured_eps1 = search.residuals.eps2,
      .measured_eps2 = search.residuals.eps1,
      .search_accepted = search.residuals.accepted,
      .search_iterations = search.iterations_used,
      .encoder_alignment = w.distance_out,
      .decoder_alignment = v.distance_out,
  };
}

ProtocolPlan build_plan(const PureState& phi, const RoleAssignment& roles,
                        const CutPartition& p, int search_budget,
                        const SeededStream& stream) {
  return build_plan(phi, roles, p, make_references(phi, phi, phi), search_budget, stream);
}

ProtocolReport run_forward(const PureState& phi, const ProtocolPlan& plan) {
  const auto phi_c = canonicalize(phi, plan.roles);
  if (!(phi_c.layout() == plan.phi.layout())) {
    throw LayoutError("state layout " + to_string(phi_c.layout()) +
                      " does not match the plan's " + to_string(plan.phi.layout()));
  }
  const auto& p = plan.partition;
  RawState x = initial_state(phi_c, p).raw();
  x = apply(plan.encoder.adjoint(), x, Labels{kA2, kCDoublePrime, kADoublePrime});
  // C3 now travels to Bob
  x = apply(plan.decoder, x, Labels{kC2, kC3, kB});
  x = permute(x, Labels{kC1, kB1, kCPrime, kA, kBPrime, kR});

  const auto target = final_state(phi_c, p);
  const double distance = trace_distance(x.amplitudes, target.amplitudes());
  const double weight = x.amplitudes.squaredNorm();
  return ProtocolReport{
      .direction = Direction::kForward,
      .final_state = normalized_or_throw(std::move(x)),
      .retained_weight = weight,
      .distance_to_target = distance,
      .analytic_bound = plan.analytic_bound(),
      .measured_bound = plan.measured_bound(),
      .ledger = {std::log2(static_cast<double>(p.d3)), std::log2(static_cast<double>(p.d2)),
                 std::log2(static_cast<double>(p.d1))},
  };
}

ProtocolReport run_reverse(const ProtocolPlan& plan, const PureState& upsilon_final) {
  const auto& p = plan.partition;
  const auto expected = final_state(plan.phi, p).layout();
  if (!(upsilon_final.layout() == expected)) {
    throw LayoutError("reverse run expects layout " + to_string(expected) + ", got " +
                      to_string(upsilon_final.layout()));
  }
  RawState y = upsilon_final.raw();
  y = apply(plan.decoder.adjoint(), y, Labels{kB1, kCPrime, kBPrime});
  // C3 now travels back to Alice
  y = apply(plan.encoder, y, Labels{kC1, kC3, kA});
  y = permute(y, Labels{kC2, kA2, kCDoublePrime, kADoublePrime, kB, kR});

  const auto target = initial_state(plan.phi, p);
  const double distance = trace_distance(y.amplitudes, target.amplitudes());
  const double weight = y.amplitudes.squaredNorm();
  return ProtocolReport{
      .direction = Direction::kReverse,
      .final_state = normalized_or_throw(std::move(y)),
      .retained_weight = weight,
      .distance_to_target = distance,
      .analytic_bound = plan.analytic_bound(),
      .measured_bound = plan.measured_bound(),
      .ledger = {std::log2(static_cast<double>(p.d3)), std::log2(static_cast<double>(p.d1)),
                 std::log2(static_cast<double>(p.d2))},
  };
}

}  // namespace qsr
