#include "plurality/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

#include "plurality/balance.hpp"
#include "plurality/error.hpp"
#include "plurality/rng.hpp"
#include "plurality/shuffle.hpp"
#include "plurality/smoothing.hpp"

namespace plurality {

Protocol parse_protocol(std::string_view name) {
  if (name == "shuffle") return Protocol::shuffle;
  if (name == "balance") return Protocol::balance;
  fail(ErrorCode::invalid_argument, "unknown protocol '" + std::string(name) + "'");
}

std::string_view to_string(Protocol protocol) {
  return protocol == Protocol::shuffle ? "shuffle" : "balance";
}

void validate(const ExperimentSpec& spec) {
  require(!spec.sizes.empty(), "sweep needs at least one size");
  require(spec.k >= 1, "k must be at least 1");
  require(spec.replicas >= 1, "need at least one replica");
  require(spec.T >= 1, "T must be at least 1");
  require(spec.c > 0, "c must be positive");
  if (!spec.counts.empty()) {
    require(spec.counts.size() == spec.k, "counts must list k entries");
    const auto total = std::accumulate(spec.counts.begin(), spec.counts.end(), std::uint64_t{0});
    for (std::size_t n : spec.sizes)
      require(total == n, "counts must sum to every swept n; use alpha for multi-size sweeps");
    plurality_of(spec.counts);
  } else {
    require(spec.alpha > 0 && spec.alpha <= 1, "α must lie in (0, 1]");
  }
  if (spec.epsilon) require(*spec.epsilon > 0, "ε must be positive");
  require(spec.matching_probability > 0 && spec.matching_probability <= 1,
          "matching probability must lie in (0, 1]");
}

std::uint64_t replica_seed(std::uint64_t master, std::size_t point, std::uint64_t replica) {
  return derive_seed(master, {point, replica});
}

std::shared_ptr<const Graph> graph_for(const ExperimentSpec& spec, std::size_t point, std::size_t n) {
  return std::make_shared<const Graph>(
      build_graph(spec.graph, n, spec.degree, derive_seed(spec.seed, {stream::graph, point})));
}

PatternSpec pattern_for(const ExperimentSpec& spec, std::shared_ptr<const Graph> graph,
                        std::uint64_t pattern_seed) {
  std::vector<Matching> matchings;
  if (spec.model == Model::balancing_circuit)
    matchings = standard_circuit_matchings(spec.graph, *graph);
  return make_pattern(spec.model, std::move(graph), pattern_seed, spec.matching_probability,
                      std::move(matchings));
}

namespace {

std::uint64_t default_balance_horizon(std::size_t n) {
  return static_cast<std::uint64_t>(std::ceil(64.0 * static_cast<double>(n) * std::log2(static_cast<double>(n))));
}

std::uint64_t mixing_horizon(std::size_t n) { return 1000 + 200ULL * n * n; }

RunRecord run_replica(const ExperimentSpec& spec, const SweepPoint& point,
                      const std::shared_ptr<const Graph>& graph, std::uint64_t seed) {
  const PatternSpec pattern = pattern_for(spec, graph, derive_seed(seed, {stream::pattern}));
  const auto assignment = assign_opinions(point.counts, seed);
  const double alpha = initial_bias(point.counts);
  if (spec.protocol == Protocol::shuffle) {
    shuffle::Config cfg;
    cfg.T = spec.T;
    cfg.c = spec.c;
    cfg.k = spec.k;
    cfg.t_mix = point.t_mix;
    cfg.assignment = assignment;
    cfg.gamma = shuffle::required_gamma(point.n, alpha, spec.T, spec.c, max_active_degree(pattern));
    return shuffle::run(cfg, pattern, seed).record;
  }
  balance::Config cfg;
  cfg.k = spec.k;
  cfg.g = spec.g ? *spec.g : balance::default_target_discrepancy(spec.model, *graph);
  cfg.gamma = balance::required_gamma(cfg.g, alpha, point.n);
  cfg.assignment = assignment;
  cfg.horizon = spec.horizon ? *spec.horizon : default_balance_horizon(point.n);
  RunRecord rec = balance::run(cfg, pattern, seed).record;
  rec.t_mix = point.t_mix;
  return rec;
}

}  // namespace

SweepResult run_sweep(const ExperimentSpec& spec) {
  validate(spec);
  SweepResult result;
  std::vector<std::shared_ptr<const Graph>> graphs;
  for (std::size_t p = 0; p < spec.sizes.size(); ++p) {
    const std::size_t n = spec.sizes[p];
    SweepPoint point;
    point.n = n;
    point.counts = spec.counts.empty() ? counts_from_alpha(n, spec.k, spec.alpha) : spec.counts;
    plurality_of(point.counts);
    auto graph = graph_for(spec, p, n);
    const PatternSpec probe = pattern_for(spec, graph, derive_seed(spec.seed, {stream::pattern, p}));
    const double eps = spec.epsilon ? *spec.epsilon : default_epsilon(n);
    const MixingEstimate mix = estimate_mixing_time(probe, eps, mixing_horizon(n), spec.mixing_trials);
    point.t_mix = mix.t_mix;
    point.t_mix_estimated = mix.estimated;
    point.spectral_gap = spectral_gap(*graph);
    point.degree = graph->max_degree();
    if (spec.model == Model::random_matching) point.pmin = empirical_pmin(probe, 10000).pmin;
    result.points.push_back(point);
    graphs.push_back(std::move(graph));
  }

  struct Job {
    std::size_t point;
    std::uint64_t replica;
  };
  std::vector<Job> jobs;
  result.records.resize(spec.sizes.size());
  for (std::size_t p = 0; p < spec.sizes.size(); ++p) {
    result.records[p].resize(spec.replicas);
    for (std::uint64_t r = 0; r < spec.replicas; ++r) jobs.push_back({p, r});
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < jobs.size();) {
      const Job& job = jobs[i];
      const SweepPoint& point = result.points[job.point];
      const std::uint64_t seed = replica_seed(spec.seed, job.point, job.replica);
      RunRecord rec;
      try {
        rec = run_replica(spec, point, graphs[job.point], seed);
      } catch (const std::exception& e) {
        rec.seed = seed;
        rec.n = point.n;
        rec.k = spec.k;
        rec.model = std::string(to_string(spec.model));
        rec.protocol = std::string(to_string(spec.protocol));
        rec.t_mix = point.t_mix;
        rec.error = e.what();
      }
      result.records[job.point][job.replica] = std::move(rec);
    }
  };
  unsigned threads = spec.threads ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, jobs.size()));
  std::vector<std::jthread> pool;
  for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  pool.clear();
  return result;
}

namespace {

std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

}  // namespace

void write_csv(std::ostream& out, const SweepResult& result) {
  out << kCsvHeader << '\n';
  for (const auto& point_records : result.records)
    for (const RunRecord& r : point_records) {
      out << r.seed << ',' << r.n << ',' << r.k << ',' << format_real(r.alpha) << ',' << r.gamma
          << ',' << r.model << ',' << r.protocol << ',' << r.t_mix << ',' << r.rounds << ',';
      if (r.consensus_round)
        out << *r.consensus_round;
      else
        out << "NA";
      out << ',' << (r.all_correct ? 1 : 0) << ',' << r.memory_bits << '\n';
    }
}

std::vector<RunRecord> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader)
    fail(ErrorCode::io_error, "CSV header does not match the run output format");
  std::vector<RunRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() != 12) fail(ErrorCode::io_error, "CSV row with " + std::to_string(f.size()) + " fields");
    try {
      RunRecord r;
      r.seed = std::stoull(f[0]);
      r.n = std::stoull(f[1]);
      r.k = std::stoull(f[2]);
      r.alpha = std::stod(f[3]);
      r.gamma = std::stoull(f[4]);
      r.model = f[5];
      r.protocol = f[6];
      r.t_mix = std::stoull(f[7]);
      r.rounds = std::stoull(f[8]);
      if (f[9] != "NA") r.consensus_round = std::stoull(f[9]);
      r.all_correct = f[10] == "1";
      r.memory_bits = std::stoull(f[11]);
      out.push_back(std::move(r));
    } catch (const std::logic_error&) {
      fail(ErrorCode::io_error, "malformed CSV row: " + line);
    }
  }
  return out;
}

namespace {

std::optional<double> median(std::vector<double> xs) {
  if (xs.empty()) return std::nullopt;
  std::sort(xs.begin(), xs.end());
  const std::size_t m = xs.size() / 2;
  return xs.size() % 2 ? xs[m] : 0.5 * (xs[m - 1] + xs[m]);
}

}  // namespace

nlohmann::json summary_json(const SweepResult& result) {
  nlohmann::json points = nlohmann::json::array();
  for (std::size_t p = 0; p < result.points.size(); ++p) {
    const SweepPoint& pt = result.points[p];
    const auto& recs = result.records[p];
    std::uint64_t correct = 0, failures = 0;
    std::vector<double> consensus;
    for (const RunRecord& r : recs) {
      if (!r.error.empty()) ++failures;
      if (r.all_correct) ++correct;
      if (r.consensus_round) consensus.push_back(static_cast<double>(*r.consensus_round));
    }
    nlohmann::json entry = {
        {"n", pt.n},
        {"counts", pt.counts},
        {"t_mix", pt.t_mix},
        {"t_mix_estimated", pt.t_mix_estimated},
        {"spectral_gap", pt.spectral_gap},
        {"replicas", recs.size()},
        {"failures", failures},
        {"success_fraction", recs.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(recs.size())},
    };
    auto med = median(consensus);
    entry["median_consensus_round"] = med ? nlohmann::json(*med) : nlohmann::json(nullptr);
    points.push_back(std::move(entry));
  }
  return {{"points", points}};
}

double predicted_time(Model model, std::size_t n, std::uint64_t T, double gap,
                      std::uint32_t degree, double pmin) {
  require(gap > 0, "spectral gap must be positive");
  const double base = static_cast<double>(T) * std::log2(static_cast<double>(n)) / gap;
  switch (model) {
    case Model::diffusion: return base;
    case Model::random_matching:
      require(pmin > 0 && degree > 0, "random matching form needs p_min > 0 and d > 0");
      return base / (static_cast<double>(degree) * pmin);
    case Model::balancing_circuit: return base * static_cast<double>(degree);
    case Model::sequential: return base * static_cast<double>(n);
  }
  return base;
}

ScalingReport scaling_report(const std::vector<RunRecord>& records, Model model, std::uint64_t T,
                             const std::function<GraphInfo(std::size_t)>& info) {
  std::map<std::size_t, std::vector<const RunRecord*>> by_size;
  const std::string name(to_string(model));
  for (const RunRecord& r : records)
    if (r.model == name) by_size[r.n].push_back(&r);
  if (by_size.size() < 3)
    fail(ErrorCode::invalid_argument, "scaling report needs records for at least 3 sizes, got " +
                                          std::to_string(by_size.size()));
  ScalingReport report;
  report.model = model;
  double lo = std::numeric_limits<double>::infinity(), hi = 0;
  for (const auto& [n, recs] : by_size) {
    ScalingRow row;
    row.n = n;
    row.runs = recs.size();
    std::vector<double> consensus;
    for (const RunRecord* r : recs)
      if (r->consensus_round) consensus.push_back(static_cast<double>(*r->consensus_round));
    row.reached = consensus.size();
    const GraphInfo gi = info(n);
    row.predicted = predicted_time(model, n, T, gi.spectral_gap, gi.degree, gi.pmin);
    row.measured = median(consensus).value_or(std::numeric_limits<double>::quiet_NaN());
    row.ratio = std::isnan(row.measured) ? 0.0 : row.measured / row.predicted;
    if (row.ratio > 0) {
      lo = std::min(lo, row.ratio);
      hi = std::max(hi, row.ratio);
    }
    report.rows.push_back(row);
  }
  report.spread = hi > 0 ? hi / lo : 0.0;
  return report;
}

nlohmann::json to_json(const ScalingReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const ScalingRow& r : report.rows) {
    rows.push_back({{"n", r.n},
                    {"measured", std::isnan(r.measured) ? nlohmann::json(nullptr) : nlohmann::json(r.measured)},
                    {"predicted", r.predicted},
                    {"ratio", r.ratio},
                    {"runs", r.runs},
                    {"reached", r.reached}});
  }
  return {{"model", std::string(to_string(report.model))}, {"rows", rows}, {"spread", report.spread}};
}

namespace {

using analysis::StatTestReport;

StatTestReport labelled(StatTestReport r, const std::string& label) {
  r.statistic += "[" + label + "]";
  return r;
}

std::vector<StatTestReport> marginal_suite(std::uint64_t seed, std::uint64_t samples) {
  std::vector<StatTestReport> out;
  const std::pair<GraphKind, std::size_t> graphs[] = {{GraphKind::complete, 4}, {GraphKind::cycle, 6}};
  for (auto [kind, n] : graphs)
    for (Model model : {Model::diffusion, Model::random_matching}) {
      auto g = std::make_shared<const Graph>(build_graph(kind, n));
      auto spec = make_pattern(model, g, derive_seed(seed, {n, static_cast<std::uint64_t>(model)}));
      const auto t_mix = estimate_mixing_time(spec, default_epsilon(n), 100000, 16).t_mix;
      const std::uint64_t gamma = 2ULL * max_active_degree(spec);
      out.push_back(labelled(analysis::marginal_equality_test(spec, gamma, t_mix, samples, seed),
                             std::string(to_string(kind)) + std::to_string(n) + "/" +
                                 std::string(to_string(model)) + "/t=" + std::to_string(t_mix)));
    }
  return out;
}

std::vector<StatTestReport> association_suite(std::uint64_t seed, std::uint64_t samples) {
  std::vector<StatTestReport> out;
  auto k4 = std::make_shared<const Graph>(build_graph(GraphKind::complete, 4));
  auto spec = make_pattern(Model::diffusion, k4, seed);
  const std::uint64_t gamma = 2ULL * max_active_degree(spec);
  const auto g = static_cast<std::uint32_t>(gamma);
  const std::vector<std::vector<std::uint32_t>> token_sets = {
      {0, 1}, {0, g}, {0, 1, 2}, {0, g, 2 * g}};
  const std::vector<std::vector<NodeId>> node_sets = {{0}, {0, 1}};
  for (const auto& B : token_sets)
    for (const auto& D : node_sets)
      out.push_back(labelled(analysis::negative_association_test(spec, gamma, B, D, 5, samples, seed),
                             "K4/|B|=" + std::to_string(B.size()) + "/|D|=" + std::to_string(D.size()) +
                                 (B[1] == 1 ? "/same-node" : "/spread")));
  auto k2 = std::make_shared<const Graph>(build_graph(GraphKind::complete, 2));
  auto spec2 = make_pattern(Model::diffusion, k2, seed);
  out.push_back(labelled(analysis::negative_association_test(spec2, 2, {0, 1}, {0}, 1, samples, seed),
                         "K2/|B|=2/|D|=1"));
  return out;
}

std::vector<StatTestReport> chernoff_suite(std::uint64_t seed, std::uint64_t samples) {
  std::vector<StatTestReport> out;
  auto k4 = std::make_shared<const Graph>(build_graph(GraphKind::complete, 4));
  auto spec = make_pattern(Model::diffusion, k4, seed);
  const std::uint64_t gamma = 2ULL * max_active_degree(spec);
  const auto t_mix = estimate_mixing_time(spec, default_epsilon(4), 1000).t_mix;
  for (double delta : {0.5, 1.0, 2.0})
    out.push_back(labelled(analysis::chernoff_tail_check(spec, gamma, {0, 1, 2, 3}, 0, 5, t_mix,
                                                         delta, samples, seed),
                           "K4/|B|=4/T=5/delta=" + format_real(delta)));
  return out;
}

}  // namespace

std::vector<analysis::StatTestReport> run_verification(const std::string& suite, std::uint64_t seed,
                                                       std::uint64_t samples) {
  std::vector<StatTestReport> out;
  auto append = [&](std::vector<StatTestReport> part) {
    out.insert(out.end(), part.begin(), part.end());
  };
  const bool all = suite == "all";
  if (all || suite == "marginal") append(marginal_suite(seed, samples));
  if (all || suite == "negative-association") append(association_suite(seed, samples));
  if (all || suite == "chernoff") append(chernoff_suite(seed, samples));
  if (out.empty()) fail(ErrorCode::invalid_argument, "unknown verification suite '" + suite + "'");
  return out;
}

}  // namespace plurality
