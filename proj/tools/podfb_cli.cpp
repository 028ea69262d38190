#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "podfb/podfb.hpp"

using namespace podfb;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitCheck = 3;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

nlohmann::json read_json(const std::string& path) {
  try {
    return nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
}

std::string units(const Rational& micros) { return to_units_string(micros); }

std::vector<Policy> parse_policies(const std::string& list) {
  std::vector<Policy> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(parse_policy(item));
  if (out.empty()) throw InputError("empty policy list");
  return out;
}

BicoreSelection parse_selection(const std::string& s) {
  if (s == "raise-first") return BicoreSelection::RaiseFirst;
  if (s == "leximin") return BicoreSelection::Leximin;
  throw InputError("unknown bicore selection '" + s + "'");
}

struct RunFlags {
  std::string policy = "core";
  std::string init = "values";
  std::uint64_t seed = 1;
  std::int64_t epsilon = -1;
  int max_rounds = 20;
  bool sequential = false;
  std::string selection = "raise-first";

  DynamicsConfig config(std::size_t agents) const {
    DynamicsConfig cfg;
    cfg.max_rounds = max_rounds;
    cfg.simultaneous = !sequential;
    cfg.bicore_selection = parse_selection(selection);
    if (epsilon >= 0) cfg.epsilon.assign(agents, Money{epsilon});
    return cfg;
  }

  InitialTargets initial() const {
    if (init == "values") return InitialTargets::from_values();
    if (init == "random") return InitialTargets::random(seed);
    throw InputError("unknown --init '" + init + "'");
  }
};

void add_run_flags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("--policy", f.policy, "vcg, core or bicore")->capture_default_str();
  cmd->add_option("--init", f.init, "initial bids: values or random")->capture_default_str();
  cmd->add_option("--seed", f.seed, "seed for random initial bids")->capture_default_str();
  cmd->add_option("--epsilon", f.epsilon, "bid step in micro-units for every agent (default: value/10)");
  cmd->add_option("--max-rounds", f.max_rounds, "round cap")->capture_default_str();
  cmd->add_flag("--sequential", f.sequential, "update agents one at a time instead of simultaneously");
  cmd->add_option("--bicore-selection", f.selection, "raise-first or leximin")->capture_default_str();
}

void print_feedback(const AuctionInstance& inst, const Coalitions& co, const FeedbackVector& fv) {
  const auto st = co.statuses();
  std::cout << "optimal value: " << units(to_rational(co.optimum())) << "\n";
  for (std::size_t i = 0; i < inst.size(); ++i)
    std::cout << inst.agent(i).id << "  " << to_string(st[i]) << "  discount " << units(fv.discounts[i]) << "  raise "
              << units(fv.raises[i]) << "\n";
  std::cout << "seller payoff: " << units(fv.seller_payoff) << "\n";
}

int cmd_feedback(const std::string& path, const std::string& policy_name, const std::string& selection,
                 const std::string& out, bool json) {
  const auto inst = instance_from_json(read_json(path));
  const Policy policy = parse_policy(policy_name);
  const Coalitions co{inst};
  const auto fv = policy_feedback(co, policy, parse_selection(selection));
  if (!is_valid_feedback(co, fv)) {
    std::cerr << "internal check failed: feedback is not valid\n";
    return kExitCheck;
  }
  const auto doc = feedback_json(inst, co, fv, to_string(policy));
  if (json) std::cout << doc.dump(2) << "\n";
  else print_feedback(inst, co, fv);
  if (!out.empty()) write_file(out, doc.dump(2) + "\n");
  return 0;
}

int cmd_simulate(const std::string& path, const std::string& params_path, std::uint64_t index, const RunFlags& f,
                 const std::string& out, bool csv) {
  if (path.empty() == params_path.empty()) throw InputError("give either an instance file or --params");
  const auto inst =
      path.empty() ? generate_instance(params_from_json(read_json(params_path)), index) : instance_from_json(read_json(path));
  const auto trace = run(inst, parse_policy(f.policy), f.config(inst.size()), f.initial());
  const std::string doc = trace_json(inst, trace).dump(2) + "\n";
  const std::string table = trace_csv(inst, trace);
  if (!out.empty()) {
    write_file(out + ".json", doc);
    write_file(out + ".csv", table);
    std::cout << to_string(trace.policy) << ": " << to_string(trace.outcome) << " after " << trace.num_rounds()
              << " rounds, efficiency " << fixed2(trace.efficiency.get_d()) << "%\n";
  } else {
    std::cout << (csv ? table : doc);
  }
  return 0;
}

int cmd_batch(const std::string& params_path, std::size_t instances, const std::string& policies, const RunFlags& f,
              std::optional<std::uint64_t> seed, unsigned jobs, bool pooled, const std::string& out) {
  BatchSpec spec;
  spec.params = params_from_json(read_json(params_path));
  if (seed) spec.params.seed = *seed;
  spec.instances = instances;
  spec.stratify_bidders = !pooled;
  spec.policies = parse_policies(policies);
  spec.config = f.config(0);
  if (f.epsilon >= 0) throw InputError("batch uses per-agent default epsilon; --epsilon is not supported");
  spec.init = f.initial().kind;
  spec.jobs = jobs;
  BatchReport report;
  try {
    report = run_batch(spec);
  } catch (const BatchError& e) {
    std::cerr << "error: " << e.what() << " (params seed " << spec.params.seed << ")\n";
    return kExitCheck;
  }
  const std::string csv = report_csv(report);
  std::cout << csv;
  if (!out.empty()) {
    write_file(out + ".csv", csv);
    write_file(out + ".json", report_json(report).dump(2) + "\n");
  }
  return 0;
}

int cmd_generate(const std::string& params_path, std::uint64_t index, std::size_t count, const std::string& out) {
  const auto params = params_from_json(read_json(params_path));
  if (count == 1) {
    const std::string text = serialize(generate_instance(params, index)) + "\n";
    if (out.empty()) std::cout << text;
    else write_file(out, text);
    return 0;
  }
  auto all = nlohmann::json::array();
  for (std::size_t k = 0; k < count; ++k) all.push_back(to_json(generate_instance(params, index + k)));
  if (out.empty()) std::cout << all.dump(2) << "\n";
  else write_file(out, all.dump(2) + "\n");
  return 0;
}

int cmd_verify(std::size_t instances, std::uint64_t seed, std::size_t samples) {
  CheckReport solver, bicore, relations, validity;
  std::size_t lattice_points = 0, converse = 0;
  std::vector<std::string> lattice;
  for (std::size_t k = 0; k < instances; ++k) {
    CounterRng rng{seed, k};
    const auto inst = random_oracle_instance(rng);
    const Coalitions co{inst};
    solver.merge(check_solver_oracle(inst, rng));
    bicore.merge(check_bicore_oracle(co, rng));
    relations.merge(check_relationships(co, rng));
    validity.merge(check_policy_validity(co));

    const auto ai = random_assignment_instance(rng);
    const auto rep = verify_lattice_and_extremes(ai, samples, rng);
    lattice_points += rep.samples;
    converse += rep.converse_extension_failures.size();
    for (const auto& v : rep.violations) lattice.push_back("instance " + std::to_string(k) + ": " + v);
  }
  bool ok = true;
  auto line = [&](const char* name, std::size_t points, const std::vector<std::string>& failures) {
    std::cout << (failures.empty() ? "ok    " : "FAIL  ") << name << ": " << points << " checks, " << failures.size()
              << " failures\n";
    for (std::size_t i = 0; i < failures.size() && i < 5; ++i) std::cout << "      " << failures[i] << "\n";
    ok = ok && failures.empty();
  };
  line("solver vs brute force", solver.points, solver.failures);
  line("bicore LP vs oracle", bicore.points, bicore.failures);
  line("bicore/core relationships", relations.points, relations.failures);
  line("policy validity", validity.points, validity.failures);
  line("assignment duals", lattice_points, lattice);
  std::cout << "note  bicore points without a price extension: " << converse << "\n";
  return ok ? 0 : kExitCheck;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Feedback policies and bidding dynamics for video pod auctions"};
  app.require_subcommand(1);

  std::string path, out, params_path, policy = "core", selection = "raise-first", policies = "vcg,core,bicore";
  bool json = false, csv = false, pooled = false;
  std::uint64_t index = 0;
  std::size_t count = 1, instances = 1000, samples = 10;
  unsigned jobs = 1;
  std::uint64_t verify_seed = 1;
  std::size_t verify_instances = 50;
  std::optional<std::uint64_t> batch_seed;
  RunFlags run_flags, batch_flags;
  batch_flags.init = "random";

  auto* fb = app.add_subcommand("feedback", "print the feedback a policy gives on one instance");
  fb->add_option("instance", path, "instance JSON")->required();
  fb->add_option("--policy", policy, "vcg, core or bicore")->capture_default_str();
  fb->add_option("--bicore-selection", selection, "raise-first or leximin")->capture_default_str();
  fb->add_flag("--json", json, "print JSON instead of a table");
  fb->add_option("--out", out, "also write the JSON document here");

  auto* sim = app.add_subcommand("simulate", "run the bidding dynamics on one instance");
  sim->add_option("instance", path, "instance JSON");
  sim->add_option("--params", params_path, "generate the instance from these params instead");
  sim->add_option("--index", index, "instance index in the generated stream")->capture_default_str();
  add_run_flags(sim, run_flags);
  sim->add_flag("--csv", csv, "print the per-round bid table instead of the JSON trace");
  sim->add_option("--out", out, "write <out>.json and <out>.csv");

  auto* batch = app.add_subcommand("batch", "run every policy on a generated population and aggregate");
  batch->add_option("params", params_path, "generator params JSON")->required();
  batch->add_option("--instances", instances, "instances per bidder count")->capture_default_str();
  batch->add_option("--policies", policies, "comma-separated policies")->capture_default_str();
  batch->add_option("--seed", batch_seed, "override the params seed");
  batch->add_option("--init", batch_flags.init, "initial bids: values or random")->capture_default_str();
  batch->add_option("--max-rounds", batch_flags.max_rounds, "round cap")->capture_default_str();
  batch->add_flag("--sequential", batch_flags.sequential, "update agents one at a time");
  batch->add_option("--bicore-selection", batch_flags.selection, "raise-first or leximin")->capture_default_str();
  batch->add_option("--jobs", jobs, "worker threads")->capture_default_str();
  batch->add_flag("--pooled", pooled, "draw bidder counts from the params range instead of stratifying");
  batch->add_option("--out", out, "write <out>.csv and <out>.json");

  auto* gen = app.add_subcommand("generate", "emit generated instances");
  gen->add_option("params", params_path, "generator params JSON")->required();
  gen->add_option("--index", index, "first instance index")->capture_default_str();
  gen->add_option("--count", count, "number of instances")->capture_default_str();
  gen->add_option("--out", out, "output file");

  auto* ver = app.add_subcommand("verify", "run the solver, bicore and assignment oracle suites");
  ver->add_option("--instances", verify_instances, "random instances per suite")->capture_default_str();
  ver->add_option("--seed", verify_seed, "seed")->capture_default_str();
  ver->add_option("--samples", samples, "sampled dual optima per assignment instance")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (*fb) return cmd_feedback(path, policy, selection, out, json);
    if (*sim) return cmd_simulate(path, params_path, index, run_flags, out, csv);
    if (*batch) return cmd_batch(params_path, instances, policies, batch_flags, batch_seed, jobs, pooled, out);
    if (*gen) return cmd_generate(params_path, index, count, out);
    if (*ver) return cmd_verify(verify_instances, verify_seed, samples);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitCheck;
  }
  return 0;
}
