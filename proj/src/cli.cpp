#include "qsr/cli.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>

#include <CLI11.hpp>
#include <json.hpp>

#include "qsr/decoupling.hpp"
#include "qsr/iid.hpp"
#include "qsr/metrics.hpp"
#include "qsr/presets.hpp"
#include "qsr/protocol.hpp"
#include "qsr/sampling.hpp"
#include "qsr/state_io.hpp"

namespace qsr::cli {
namespace {

using nlohmann::json;

constexpr const char* kReportFormat = "qsr-report/1";
constexpr double kBoundSlack = 1e-8;

/// Raised when a command's own invariant check fails after printing its record.
struct CheckFailed {
  int code;
};

class PhaseTimer {
 public:
  template <typename Fn>
  auto time(const std::string& phase, Fn&& fn) {
    const auto start = std::chrono::steady_clock::now();
    auto result = fn();
    const auto end = std::chrono::steady_clock::now();
    timings_[phase] = std::chrono::duration<double, std::milli>(end - start).count();
    return result;
  }
  json to_json() const { return timings_; }

 private:
  std::map<std::string, double> timings_;
};

struct StateInput {
  std::string source;
  PureState state;
};

StateInput resolve_state(const std::string& value, std::uint64_t seed) {
  if (std::filesystem::exists(value)) return {value, load_state_file(value)};
  if (auto preset = make_preset(value, seed)) return {"preset:" + value, std::move(*preset)};
  throw FormatError("'" + value + "' is neither a readable state file nor a preset");
}

json state_echo(const StateInput& in) {
  json subs = json::array();
  for (const auto& s : in.state.layout().subsystems()) subs.push_back({s.label, s.dim});
  return {{"source", in.source}, {"digest", state_digest(in.state)}, {"subsystems", subs}};
}

json base_record(const std::string& command, json flags, std::uint64_t seed) {
  return {{"command", command},
          {"format", kReportFormat},
          {"inputs",
           {{"flags", std::move(flags)},
            {"seed", seed},
            {"generator", std::string(kGeneratorVersion)},
            {"state_format", std::string(kStateFormat)}}}};
}

json partition_json(const CutPartition& p) { return json::array({p.d1, p.d2, p.d3}); }

json roles_json(const RoleAssignment& r) {
  return {{"C", r.c}, {"A", r.a}, {"B", r.b}, {"R", r.r}};
}

RoleAssignment roles_or_default(const std::string& text) {
  return text.empty() ? canonical_roles() : parse_roles(text);
}

Labels split_labels(const std::string& text) {
  Labels out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find(',', start);
    if (end == std::string::npos) end = text.size();
    if (end > start) out.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

void emit(std::ostream& out, const json& record) { out << record.dump() << '\n'; }

// ------------------------------------------------------------------ rates

struct RatesArgs {
  std::string state;
  std::string roles;
  std::uint64_t seed = 0;
};

int cmd_rates(const RatesArgs& a, std::ostream& out) {
  PhaseTimer timer;
  const auto input = resolve_state(a.state, a.seed);
  const auto roles = roles_or_default(a.roles);
  const auto phi = canonicalize(input.state, roles);
  const auto rates = timer.time("rates", [&] { return resource_rates(phi, canonical_roles()); });

  json entropies;
  for (const auto& group : std::vector<Labels>{
           {"C"}, {"A"}, {"B"}, {"R"}, {"C", "A"}, {"C", "B"}, {"C", "R"}}) {
    std::string key = "S(";
    for (const auto& l : group) key += l;
    entropies[key + ")"] = marginal_entropy(phi, group);
  }

  auto rec = base_record("rates", {{"state", a.state}, {"roles", roles_json(roles)}}, a.seed);
  rec["inputs"]["state"] = state_echo(input);
  rec["results"] = {
      {"Q", rates.qubits},
      {"E1", rates.ebits_consumed},
      {"E2", rates.ebits_distilled},
      {"E", rates.net_ebits},
      {"I(A;C)", 2.0 * rates.ebits_consumed},
      {"I(B;C)", 2.0 * rates.ebits_distilled},
      {"I(C;R|B)", 2.0 * rates.qubits},
      {"entropies", entropies},
  };
  rec["timings_ms"] = timer.to_json();
  emit(out, rec);
  const double tol = -kTolerances.derived;
  if (rates.qubits < tol || rates.ebits_consumed < tol || rates.ebits_distilled < tol) {
    throw CheckFailed{kInvariant};
  }
  return kOk;
}

// --------------------------------------------------------------- decouple

struct DecoupleArgs {
  std::string state = "pi-CF";
  std::string c = "C";
  std::string f = "F";
  std::string e;
  std::string partition;
  std::size_t samples = 2000;
  int max_iters = kDefaultSearchBudget;
  std::uint64_t seed = 0;
};

json haar_json(const HaarAverageReport& r) {
  return {{"samples", r.samples},
          {"mean_squared_residual", r.mean_squared_residual},
          {"standard_error", r.standard_error},
          {"bound", r.bound},
          {"pass", r.pass},
          {"acceptance_frequency", r.acceptance_frequency}};
}

int cmd_decouple(const DecoupleArgs& a, std::ostream& out) {
  PhaseTimer timer;
  const auto input = resolve_state(a.state, a.seed);
  const auto p = CutPartition::parse(a.partition);
  const auto f = split_labels(a.f);
  const auto e = a.e.empty() ? f : split_labels(a.e);
  const auto omega = DecouplingSource::from_pure(input.state, a.c, f);
  const auto psi = DecouplingSource::from_pure(input.state, a.c, e);
  p.validate(omega.c_dim());

  const SeededStream stream(a.seed);
  const auto b = bounds(omega, psi, p);
  const auto check1 = timer.time("haar_omega", [&] {
    return haar_average_check(omega, p, KeptFactor::kC1, a.samples, stream.substream(0));
  });
  const auto check2 = timer.time("haar_psi", [&] {
    return haar_average_check(psi, p, KeptFactor::kC2, a.samples, stream.substream(1));
  });
  const auto search = timer.time("search", [&] {
    return find_simultaneous_unitary(omega, psi, p, a.max_iters, stream.substream(2));
  });

  auto rec = base_record("decouple",
                         {{"state", a.state},
                          {"c", a.c},
                          {"f", f},
                          {"e", e},
                          {"partition", partition_json(p)},
                          {"samples", a.samples},
                          {"max_iters", a.max_iters}},
                         a.seed);
  rec["inputs"]["state"] = state_echo(input);
  rec["results"] = {
      {"alpha", b.alpha},
      {"beta", b.beta},
      {"omega_check", haar_json(check1)},
      {"psi_check", haar_json(check2)},
      {"search",
       {{"eps1", search.residuals.eps1},
        {"eps2", search.residuals.eps2},
        {"accepted1", search.residuals.accepted1},
        {"accepted2", search.residuals.accepted2},
        {"accepted", search.residuals.accepted},
        {"iterations_used", search.iterations_used},
        {"chosen_draw", search.chosen_draw},
        {"objective", search.objective}}},
      {"pass", check1.pass && check2.pass},
  };
  rec["timings_ms"] = timer.to_json();
  emit(out, rec);
  if (!(check1.pass && check2.pass)) throw CheckFailed{kInvariant};
  return kOk;
}

// --------------------------------------------------------------- protocol

struct ProtocolArgs {
  std::string state;
  std::string roles;
  std::string partition;
  std::uint64_t seed = 0;
  int search_budget = kDefaultSearchBudget;
  bool reverse = false;
};

json ledger_json(const ResourceLedger& l) {
  return {{"qubits_sent", l.qubits_sent},
          {"ebits_consumed", l.ebits_consumed},
          {"ebits_distilled", l.ebits_distilled}};
}

json report_json(const ProtocolReport& r) {
  return {{"direction", r.direction == Direction::kForward ? "forward" : "reverse"},
          {"distance_to_target", r.distance_to_target},
          {"retained_weight", r.retained_weight},
          {"analytic_bound", r.analytic_bound},
          {"measured_bound", r.measured_bound},
          {"ledger", ledger_json(r.ledger)}};
}

bool within_bounds(const ProtocolReport& r) {
  const double d = r.distance_to_target;
  return d <= std::min(2.0, r.measured_bound) + kBoundSlack &&
         d <= std::min(2.0, r.analytic_bound) + kBoundSlack;
}

int cmd_protocol(const ProtocolArgs& a, std::ostream& out) {
  PhaseTimer timer;
  const auto input = resolve_state(a.state, a.seed);
  const auto roles = roles_or_default(a.roles);
  const auto p = CutPartition::parse(a.partition);
  const SeededStream stream(a.seed);
  const auto plan = timer.time("build_plan", [&] {
    return build_plan(input.state, roles, p, a.search_budget, stream);
  });
  const auto forward = timer.time("forward", [&] { return run_forward(input.state, plan); });

  auto rec = base_record("protocol",
                         {{"state", a.state},
                          {"roles", roles_json(roles)},
                          {"partition", partition_json(p)},
                          {"search_budget", a.search_budget},
                          {"reverse", a.reverse}},
                         a.seed);
  rec["inputs"]["state"] = state_echo(input);
  rec["results"] = {
      {"plan",
       {{"gamma1", plan.gamma1},
        {"gamma2", plan.gamma2},
        {"eta1", plan.eta1},
        {"eta2", plan.eta2},
        {"delta1", plan.delta1},
        {"delta2", plan.delta2},
        {"measured_eps1", plan.measured_eps1},
        {"measured_eps2", plan.measured_eps2},
        {"search_accepted", plan.search_accepted},
        {"search_iterations", plan.search_iterations},
        {"encoder_alignment", plan.encoder_alignment},
        {"decoder_alignment", plan.decoder_alignment}}},
      {"forward", report_json(forward)},
  };
  bool ok = within_bounds(forward);
  if (a.reverse) {
    const auto reverse = timer.time(
        "reverse", [&] { return run_reverse(plan, final_state(plan.phi, plan.partition)); });
    rec["results"]["reverse"] = report_json(reverse);
    ok = ok && within_bounds(reverse);
  }
  rec["results"]["within_bounds"] = ok;
  rec["timings_ms"] = timer.to_json();
  emit(out, rec);
  if (!ok) throw CheckFailed{kInvariant};
  return kOk;
}

// -------------------------------------------------------------------- iid

struct IidArgs {
  std::string state;
  std::string roles;
  int n = 2;
  double delta = 0.1;
  double t = 1.5;
  std::uint64_t seed = 0;
  std::string sweep;
  Index max_entries = Index{1} << 20;
  int search_budget = kDefaultSearchBudget;
  bool require_feasible = false;
};

json iid_json(const IidRecord& r) {
  const auto& al = r.allocation;
  json layout = json::array();
  for (const auto& s : r.compressed_layout.subsystems()) layout.push_back({s.label, s.dim});
  return {{"n", r.spec.n},
          {"compressed_layout", layout},
          {"target_rates",
           {{"Q", r.target_rates.qubits},
            {"E1", r.target_rates.ebits_consumed},
            {"E2", r.target_rates.ebits_distilled}}},
          {"success_probability", r.success_probability},
          {"typical_distance", r.typical_distance},
          {"typical_rank", r.typical_rank},
          {"allocation",
           {{"d1", al.d1},
            {"d2", al.d2},
            {"d3", al.d3},
            {"target_log2_d1", al.target_log2_d1},
            {"target_log2_d2", al.target_log2_d2},
            {"eta_slack", al.eta_slack},
            {"padding", al.padding},
            {"feasible", al.feasible},
            {"embedding", "power-of-two d1,d2; zero-padded C^typ"}}},
          {"gamma1", r.gamma1},
          {"gamma2", r.gamma2},
          {"eta1", r.eta1},
          {"eta2", r.eta2},
          {"measured_eps1", r.measured_eps1},
          {"measured_eps2", r.measured_eps2},
          {"search_accepted", r.search_accepted},
          {"distance_to_target", r.distance_to_target},
          {"measured_bound", r.measured_bound},
          {"analytic_bound", r.analytic_bound},
          {"asymptotic_bound", r.asymptotic_bound},
          {"per_copy",
           {{"qubits", r.qubits_per_copy},
            {"ebits_consumed", r.consumed_per_copy},
            {"ebits_distilled", r.distilled_per_copy}}},
          {"largest_vector", r.largest_vector}};
}

std::pair<int, int> parse_sweep(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) throw FormatError("--sweep expects n1..n2");
  try {
    const int lo = std::stoi(text.substr(0, dots));
    const int hi = std::stoi(text.substr(dots + 2));
    if (lo < 1 || hi < lo) throw FormatError("--sweep needs 1 <= n1 <= n2");
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw FormatError("--sweep expects integers n1..n2, got '" + text + "'");
  }
}

int cmd_iid(const IidArgs& a, std::ostream& out) {
  const auto input = resolve_state(a.state, a.seed);
  const auto roles = roles_or_default(a.roles);
  const IidOptions options{a.max_entries, a.search_budget};
  const SeededStream stream(a.seed);

  auto check = [&](const IidRecord& r) -> int {
    if (r.distance_to_target > std::min(2.0, r.measured_bound) + kBoundSlack) return kInvariant;
    if (a.require_feasible && !r.allocation.feasible) return kInfeasible;
    return kOk;
  };

  if (!a.sweep.empty()) {
    const auto [lo, hi] = parse_sweep(a.sweep);
    out << "n,delta,t,success_probability,typical_distance,typical_rank,d1,d2,d3,eta_slack,"
           "feasible,distance_to_target,measured_bound,asymptotic_bound,qubits_per_copy,"
           "consumed_per_copy,distilled_per_copy,Q,E1,E2\n";
    int code = kOk;
    for (int n = lo; n <= hi; ++n) {
      const auto r = iid_experiment(input.state, roles, {n, a.delta, a.t},
                                    stream.substream(static_cast<std::uint64_t>(n)), options);
      json row = json::array({n, a.delta, a.t, r.success_probability, r.typical_distance,
                              r.typical_rank, r.allocation.d1, r.allocation.d2, r.allocation.d3,
                              r.allocation.eta_slack, r.allocation.feasible ? 1 : 0,
                              r.distance_to_target, r.measured_bound, r.asymptotic_bound,
                              r.qubits_per_copy, r.consumed_per_copy, r.distilled_per_copy,
                              r.target_rates.qubits, r.target_rates.ebits_consumed,
                              r.target_rates.ebits_distilled});
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i].dump();
      out << '\n';
      code = std::max<int>(code, check(r));
    }
    if (code != kOk) throw CheckFailed{code};
    return kOk;
  }

  PhaseTimer timer;
  const auto r = timer.time("iid_experiment", [&] {
    return iid_experiment(input.state, roles, {a.n, a.delta, a.t}, stream, options);
  });
  auto rec = base_record("iid",
                         {{"state", a.state},
                          {"roles", roles_json(roles)},
                          {"n", a.n},
                          {"delta", a.delta},
                          {"t", a.t},
                          {"max_entries", a.max_entries},
                          {"search_budget", a.search_budget}},
                         a.seed);
  rec["inputs"]["state"] = state_echo(input);
  rec["results"] = iid_json(r);
  rec["timings_ms"] = timer.to_json();
  emit(out, rec);
  if (const int code = check(r); code != kOk) throw CheckFailed{code};
  return kOk;
}

// ----------------------------------------------------------- sample-state

struct SampleArgs {
  std::string dims;
  std::uint64_t seed = 0;
  std::string out_path;
};

int cmd_sample_state(const SampleArgs& a, std::ostream& out) {
  const auto layout = parse_layout_spec(a.dims);
  SeededStream stream(a.seed);
  const auto psi = random_pure_state(layout, stream);
  if (a.out_path.empty()) {
    out << write_state(psi);
  } else {
    save_state_file(psi, a.out_path);
  }
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"One-shot quantum state redistribution experiments", "qsr"};
  app.require_subcommand(1);

  RatesArgs rates;
  auto* c_rates = app.add_subcommand("rates", "Resource rates Q, E1, E2 of a state");
  c_rates->add_option("--state", rates.state, "State file or preset")->required();
  c_rates->add_option("--roles", rates.roles, "C=..,A=..,B=..,R=.. (default: labels C,A,B,R)");
  c_rates->add_option("--seed", rates.seed, "Seed for the random preset");

  DecoupleArgs dec;
  auto* c_dec = app.add_subcommand("decouple", "Decoupling bounds, Haar averages and search");
  c_dec->add_option("--state", dec.state, "State file or preset")->capture_default_str();
  c_dec->add_option("--c", dec.c, "Label of the C system")->capture_default_str();
  c_dec->add_option("--f", dec.f, "Side labels F of omega_CF")->capture_default_str();
  c_dec->add_option("--e", dec.e, "Side labels E of psi_CE (default: F)");
  c_dec->add_option("--partition", dec.partition, "d1,d2,d3")->required();
  c_dec->add_option("--samples", dec.samples, "Haar samples")->capture_default_str();
  c_dec->add_option("--max-iters", dec.max_iters, "Search budget")->capture_default_str();
  c_dec->add_option("--seed", dec.seed)->capture_default_str();

  ProtocolArgs proto;
  auto* c_proto = app.add_subcommand("protocol", "Build and run the one-shot protocol");
  c_proto->add_option("--state", proto.state, "State file or preset")->required();
  c_proto->add_option("--roles", proto.roles, "C=..,A=..,B=..,R=..");
  c_proto->add_option("--partition", proto.partition, "d1,d2,d3")->required();
  c_proto->add_option("--seed", proto.seed)->capture_default_str();
  c_proto->add_option("--search-budget", proto.search_budget)->capture_default_str();
  c_proto->add_flag("--reverse", proto.reverse, "Also run the reverse redistribution");

  IidArgs iid;
  auto* c_iid = app.add_subcommand("iid", "Typical-subspace redistribution of n copies");
  c_iid->add_option("--state", iid.state, "State file or preset")->required();
  c_iid->add_option("--roles", iid.roles, "C=..,A=..,B=..,R=..");
  c_iid->add_option("--n", iid.n, "Number of copies")->capture_default_str();
  c_iid->add_option("--delta", iid.delta)->capture_default_str();
  c_iid->add_option("--t", iid.t)->capture_default_str();
  c_iid->add_option("--seed", iid.seed)->capture_default_str();
  c_iid->add_option("--sweep", iid.sweep, "n1..n2: CSV rows for each n");
  c_iid->add_option("--max-entries", iid.max_entries, "Materialization guard")
      ->capture_default_str();
  c_iid->add_option("--search-budget", iid.search_budget)->capture_default_str();
  c_iid->add_flag("--require-feasible", iid.require_feasible,
                  "Exit 2 when the allocation slack falls outside [-t delta, t delta]");

  SampleArgs sample;
  auto* c_sample = app.add_subcommand("sample-state", "Write a seeded random pure state");
  c_sample->add_option("--dims", sample.dims, "LABEL=DIM,...")->required();
  c_sample->add_option("--seed", sample.seed)->capture_default_str();
  c_sample->add_option("--out", sample.out_path, "Output file (default: stdout)");

  auto* c_presets = app.add_subcommand("presets", "List the named preset states");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (*c_rates) return cmd_rates(rates, out);
    if (*c_dec) return cmd_decouple(dec, out);
    if (*c_proto) return cmd_protocol(proto, out);
    if (*c_iid) return cmd_iid(iid, out);
    if (*c_sample) return cmd_sample_state(sample, out);
    if (*c_presets) {
      for (auto name : preset_names()) out << name << '\n';
      return kOk;
    }
  } catch (const CheckFailed& f) {
    err << "qsr: requested invariant check failed\n";
    return f.code;
  } catch (const GuardError& e) {
    err << "qsr: " << e.what() << '\n';
    return kInfeasible;
  } catch (const InvariantError& e) {
    err << "qsr: " << e.what() << '\n';
    return kInvariant;
  } catch (const Error& e) {
    err << "qsr: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace qsr::cli
