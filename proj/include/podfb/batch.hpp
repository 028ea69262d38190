#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "podfb/dynamics.hpp"
#include "podfb/generator.hpp"

namespace podfb {

inline constexpr int kReportVersion = 1;

struct BatchSpec {
  GeneratorParams params;
  /// Instances per bidder count when stratified, otherwise in total.
  std::size_t instances = 1000;
  /// Run `instances` for each bidder count in the params range separately.
  bool stratify_bidders = true;
  std::vector<Policy> policies{Policy::Vcg, Policy::Core, Policy::Bicore};
  DynamicsConfig config;
  InitialTargets::Kind init = InitialTargets::Kind::Random;
  unsigned jobs = 1;
};

/// Identifies one contributing trace for replay.
struct TraceSummary {
  int bidders = 0; // stratum (bidders fixed in params), or 0 when not stratified
  std::uint64_t index = 0;
  std::uint64_t init_seed = 0;
  Policy policy = Policy::Vcg;
  std::size_t agents = 0;
  Termination outcome = Termination::MaxRounds;
  int rounds = 0;
  Rational efficiency;
};

struct Estimate {
  double mean = 0;
  double se = 0;
};

struct BatchRow {
  Policy policy = Policy::Vcg;
  std::size_t bidders = 0;
  std::size_t count = 0;
  Estimate rounds;
  Estimate efficiency;
  double converged_pct = 0;
  double cycled_pct = 0;
  double max_rounds_pct = 0;
  std::optional<Estimate> cycle_efficiency;
};

struct BatchReport {
  BatchSpec spec;
  std::vector<BatchRow> rows;
  std::vector<TraceSummary> traces;

  const BatchRow* row(Policy p, std::size_t bidders) const {
    for (const auto& r : rows)
      if (r.policy == p && r.bidders == bidders) return &r;
    return nullptr;
  }
};

class BatchError : public std::runtime_error {
public:
  BatchError(std::uint64_t index, int bidders, const std::string& what)
    : std::runtime_error("instance " + std::to_string(index) + (bidders ? " (bidders " + std::to_string(bidders) + ")" : "") +
                         " failed: " + what),
      index_(index),
      bidders_(bidders) {}
  std::uint64_t index() const { return index_; }
  int bidders() const { return bidders_; }

private:
  std::uint64_t index_;
  int bidders_;
};

/// Seed of the random initial targets for an instance; independent of the instance stream.
inline std::uint64_t init_seed_for(std::uint64_t seed, std::uint64_t index) {
  return CounterRng{seed ^ 0x696e697469616c73ULL, index}.next();
}

namespace detail {

// Mean and standard error (sample standard deviation / sqrt N) from exact sums.
inline Estimate estimate(const std::vector<Rational>& xs) {
  Estimate e;
  if (xs.empty()) return e;
  Rational sum = 0, sq = 0;
  for (const auto& x : xs) {
    sum += x;
    sq += x * x;
  }
  const Rational n = static_cast<long>(xs.size());
  const Rational mean = sum / n;
  e.mean = mean.get_d();
  if (xs.size() > 1) {
    const Rational var = (sq - n * mean * mean) / (n - 1);
    e.se = std::sqrt(var.get_d() / static_cast<double>(xs.size()));
  }
  return e;
}

inline double pct(std::size_t k, std::size_t n) { return n ? Rational(Rational(static_cast<long>(k)) * 100 / static_cast<long>(n)).get_d() : 0.0; }

} // namespace detail

inline BatchRow aggregate(Policy policy, std::size_t bidders, const std::vector<const TraceSummary*>& traces) {
  BatchRow row;
  row.policy = policy;
  row.bidders = bidders;
  row.count = traces.size();
  std::vector<Rational> rounds, eff, cycle_eff;
  std::size_t conv = 0, cyc = 0, cap = 0;
  for (const auto* t : traces) {
    rounds.emplace_back(t->rounds);
    eff.push_back(t->efficiency);
    switch (t->outcome) {
      case Termination::Converged: ++conv; break;
      case Termination::Cycled:
        ++cyc;
        cycle_eff.push_back(t->efficiency);
        break;
      case Termination::MaxRounds: ++cap; break;
    }
  }
  row.rounds = detail::estimate(rounds);
  row.efficiency = detail::estimate(eff);
  row.converged_pct = detail::pct(conv, row.count);
  row.cycled_pct = detail::pct(cyc, row.count);
  row.max_rounds_pct = detail::pct(cap, row.count);
  if (!cycle_eff.empty()) row.cycle_efficiency = detail::estimate(cycle_eff);
  return row;
}

/// Generates the instances, runs every policy on each, and aggregates per (policy, bidder count).
/// Results do not depend on the number of jobs.
inline BatchReport run_batch(const BatchSpec& spec) {
  spec.params.validate();
  struct Job {
    int stratum;
    std::uint64_t index;
  };
  std::vector<Job> jobs;
  if (spec.stratify_bidders) {
    for (int b = spec.params.min_bidders; b <= spec.params.max_bidders; ++b)
      for (std::uint64_t k = 0; k < spec.instances; ++k) jobs.push_back({b, k});
  } else {
    for (std::uint64_t k = 0; k < spec.instances; ++k) jobs.push_back({0, k});
  }

  const std::size_t per_job = spec.policies.size();
  std::vector<TraceSummary> results(jobs.size() * per_job);
  std::atomic<std::size_t> next{0};
  std::mutex fail_mutex;
  std::optional<BatchError> failure;

  auto worker = [&] {
    while (true) {
      const std::size_t j = next.fetch_add(1);
      if (j >= jobs.size()) return;
      {
        std::lock_guard lock(fail_mutex);
        if (failure) return;
      }
      const Job job = jobs[j];
      try {
        const GeneratorParams params = job.stratum ? spec.params.with_bidders(job.stratum) : spec.params;
        const AuctionInstance inst = generate_instance(params, job.index);
        const std::uint64_t seed = init_seed_for(spec.params.seed, job.index);
        InitialTargets init;
        init.kind = spec.init;
        init.seed = seed;
        for (std::size_t p = 0; p < per_job; ++p) {
          const auto trace = run(inst, spec.policies[p], spec.config, init);
          results[j * per_job + p] = {job.stratum, job.index, seed, spec.policies[p], inst.size(),
                                      trace.outcome, trace.num_rounds(), trace.efficiency};
        }
      } catch (const std::exception& e) {
        std::lock_guard lock(fail_mutex);
        if (!failure || job.index < failure->index()) failure.emplace(job.index, job.stratum, e.what());
      }
    }
  };
  const unsigned n = std::max(1u, spec.jobs);
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) throw *failure;

  BatchReport report;
  report.spec = spec;
  report.traces = std::move(results);
  for (Policy p : spec.policies) {
    std::vector<std::size_t> counts;
    for (const auto& t : report.traces)
      if (std::find(counts.begin(), counts.end(), t.agents) == counts.end()) counts.push_back(t.agents);
    std::sort(counts.begin(), counts.end());
    for (std::size_t c : counts) {
      std::vector<const TraceSummary*> group;
      for (const auto& t : report.traces)
        if (t.policy == p && t.agents == c) group.push_back(&t);
      report.rows.push_back(aggregate(p, c, group));
    }
  }
  return report;
}

inline std::string fixed2(double x) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(2);
  os << x;
  return os.str();
}

/// One line per (policy, bidders), with the columns of the simulation table plus replay data.
inline std::string report_csv(const BatchReport& r) {
  std::ostringstream os;
  os << "version,policy,bidders,instances,avg_rounds,avg_rounds_se,avg_eff,avg_eff_se,conv_pct,cycle_pct,"
        "max_rounds_pct,avg_cycle_eff,avg_cycle_eff_se,seed\n";
  for (const auto& row : r.rows) {
    os << kReportVersion << ',' << to_string(row.policy) << ',' << row.bidders << ',' << row.count << ','
       << fixed2(row.rounds.mean) << ',' << fixed2(row.rounds.se) << ',' << fixed2(row.efficiency.mean) << ','
       << fixed2(row.efficiency.se) << ',' << fixed2(row.converged_pct) << ',' << fixed2(row.cycled_pct) << ','
       << fixed2(row.max_rounds_pct) << ',';
    if (row.cycle_efficiency) os << fixed2(row.cycle_efficiency->mean) << ',' << fixed2(row.cycle_efficiency->se);
    else os << "n/a,n/a";
    os << ',' << r.spec.params.seed << '\n';
  }
  return os.str();
}

inline nlohmann::json report_json(const BatchReport& r) {
  auto rows = nlohmann::json::array();
  for (const auto& row : r.rows) {
    nlohmann::json j{{"policy", to_string(row.policy)},
                     {"bidders", row.bidders},
                     {"instances", row.count},
                     {"avg_rounds", row.rounds.mean},
                     {"avg_rounds_se", row.rounds.se},
                     {"avg_eff", row.efficiency.mean},
                     {"avg_eff_se", row.efficiency.se},
                     {"conv_pct", row.converged_pct},
                     {"cycle_pct", row.cycled_pct},
                     {"max_rounds_pct", row.max_rounds_pct}};
    if (row.cycle_efficiency) {
      j["avg_cycle_eff"] = row.cycle_efficiency->mean;
      j["avg_cycle_eff_se"] = row.cycle_efficiency->se;
    } else {
      j["avg_cycle_eff"] = nullptr;
      j["avg_cycle_eff_se"] = nullptr;
    }
    rows.push_back(std::move(j));
  }
  auto traces = nlohmann::json::array();
  for (const auto& t : r.traces)
    traces.push_back({{"stratum_bidders", t.bidders},
                      {"index", t.index},
                      {"init_seed", t.init_seed},
                      {"policy", to_string(t.policy)},
                      {"bidders", t.agents},
                      {"outcome", to_string(t.outcome)},
                      {"rounds", t.rounds},
                      {"efficiency", t.efficiency.get_str()}});
  return {{"version", kReportVersion},
          {"params", to_json(r.spec.params)},
          {"instances", r.spec.instances},
          {"stratify_bidders", r.spec.stratify_bidders},
          {"max_rounds", r.spec.config.max_rounds},
          {"rows", rows},
          {"traces", traces}};
}

} // namespace podfb
