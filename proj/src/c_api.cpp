#include "plurality/plurality.h"

#include <cstring>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "plurality/balance.hpp"
#include "plurality/error.hpp"
#include "plurality/harness.hpp"
#include "plurality/shuffle.hpp"
#include "plurality/smoothing.hpp"

struct plc_graph {
  std::shared_ptr<const plurality::Graph> graph;
  std::optional<plurality::GraphKind> kind;
};

struct plc_pattern {
  plurality::PatternSpec spec;
};

struct plc_sweep {
  plurality::SweepResult result;
};

namespace {

thread_local std::string last_error;

plc_status to_status(plurality::ErrorCode code) {
  using plurality::ErrorCode;
  switch (code) {
    case ErrorCode::invalid_argument: return PLC_ERR_INVALID_ARGUMENT;
    case ErrorCode::generation_failure: return PLC_ERR_GENERATION_FAILURE;
    case ErrorCode::disconnected_graph: return PLC_ERR_DISCONNECTED_GRAPH;
    case ErrorCode::horizon_exhausted: return PLC_ERR_HORIZON_EXHAUSTED;
    case ErrorCode::threshold_inversion: return PLC_ERR_THRESHOLD_INVERSION;
    case ErrorCode::io_error: return PLC_ERR_IO;
  }
  return PLC_ERR_INTERNAL;
}

template <class F>
plc_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return PLC_OK;
  } catch (const plurality::Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::exception& e) {
    last_error = e.what();
    return PLC_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown exception";
    return PLC_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  plurality::require(p != nullptr, std::string(what) + " must not be null");
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

plurality::ExperimentSpec to_spec(const plc_experiment_config& cfg) {
  using namespace plurality;
  need(cfg.protocol, "protocol");
  need(cfg.graph, "graph");
  need(cfg.model, "model");
  ExperimentSpec spec;
  spec.protocol = parse_protocol(cfg.protocol);
  spec.graph = parse_graph_kind(cfg.graph);
  if (cfg.size_count > 0) {
    need(cfg.sizes, "sizes");
    spec.sizes.assign(cfg.sizes, cfg.sizes + cfg.size_count);
  }
  spec.degree = cfg.degree;
  spec.model = parse_model(cfg.model);
  spec.k = cfg.k;
  if (cfg.count_len > 0) {
    need(cfg.counts, "counts");
    spec.counts.assign(cfg.counts, cfg.counts + cfg.count_len);
  }
  spec.alpha = cfg.alpha;
  spec.T = cfg.T;
  if (cfg.g > 0) spec.g = cfg.g;
  spec.c = cfg.c;
  if (cfg.epsilon > 0) spec.epsilon = cfg.epsilon;
  spec.matching_probability = cfg.matching_probability;
  spec.replicas = cfg.replicas;
  spec.seed = cfg.seed;
  if (cfg.horizon > 0) spec.horizon = cfg.horizon;
  spec.mixing_trials = cfg.mixing_trials;
  spec.threads = cfg.threads;
  return spec;
}

std::ofstream open_for_write(const char* path) {
  std::ofstream out(path);
  if (!out) plurality::fail(plurality::ErrorCode::io_error, std::string("cannot open ") + path);
  return out;
}

}  // namespace

extern "C" {

const char* plc_last_error(void) { return last_error.c_str(); }

const char* plc_version(void) { return "1.0.0"; }

void plc_string_free(char* s) { delete[] s; }

plc_status plc_graph_build(const char* kind, size_t n, size_t degree, uint64_t seed,
                           plc_graph** out) {
  return guarded([&] {
    need(kind, "kind");
    need(out, "out");
    const auto k = plurality::parse_graph_kind(kind);
    auto g = std::make_shared<const plurality::Graph>(plurality::build_graph(k, n, degree, seed));
    *out = new plc_graph{std::move(g), k};
  });
}

plc_status plc_graph_read(const char* path, plc_graph** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    std::ifstream in(path);
    if (!in) plurality::fail(plurality::ErrorCode::io_error, std::string("cannot open ") + path);
    auto g = std::make_shared<const plurality::Graph>(plurality::read_edge_list(in));
    *out = new plc_graph{std::move(g), std::nullopt};
  });
}

plc_status plc_graph_write(const plc_graph* graph, const char* path) {
  return guarded([&] {
    need(graph, "graph");
    need(path, "path");
    auto out = open_for_write(path);
    plurality::write_edge_list(out, *graph->graph);
  });
}

size_t plc_graph_node_count(const plc_graph* graph) { return graph ? graph->graph->node_count() : 0; }

size_t plc_graph_edge_count(const plc_graph* graph) { return graph ? graph->graph->edge_count() : 0; }

plc_status plc_graph_spectral_gap(const plc_graph* graph, double* out) {
  return guarded([&] {
    need(graph, "graph");
    need(out, "out");
    *out = plurality::spectral_gap(*graph->graph);
  });
}

void plc_graph_free(plc_graph* graph) { delete graph; }

plc_status plc_pattern_create(const plc_graph* graph, const char* model, uint64_t seed,
                              double matching_probability, plc_pattern** out) {
  return guarded([&] {
    need(graph, "graph");
    need(model, "model");
    need(out, "out");
    const auto m = plurality::parse_model(model);
    std::vector<plurality::Matching> matchings;
    if (m == plurality::Model::balancing_circuit) {
      plurality::require(graph->kind.has_value(),
                         "graph was loaded from a file; use plc_pattern_create_circuit");
      matchings = plurality::standard_circuit_matchings(*graph->kind, *graph->graph);
    }
    *out = new plc_pattern{plurality::make_pattern(m, graph->graph, seed, matching_probability,
                                                   std::move(matchings))};
  });
}

plc_status plc_pattern_create_circuit(const plc_graph* graph, const char* const* matching_paths,
                                      size_t count, plc_pattern** out) {
  return guarded([&] {
    need(graph, "graph");
    need(out, "out");
    plurality::require(count > 0, "at least one matching file is required");
    need(matching_paths, "matching_paths");
    std::vector<plurality::Matching> matchings;
    for (size_t i = 0; i < count; ++i) {
      need(matching_paths[i], "matching path");
      std::ifstream in(matching_paths[i]);
      if (!in)
        plurality::fail(plurality::ErrorCode::io_error, std::string("cannot open ") + matching_paths[i]);
      matchings.push_back(plurality::read_matching(in, *graph->graph));
    }
    *out = new plc_pattern{plurality::make_pattern(plurality::Model::balancing_circuit, graph->graph,
                                                   0, 1.0, std::move(matchings))};
  });
}

plc_status plc_pattern_max_active_degree(const plc_pattern* pattern, uint32_t* out) {
  return guarded([&] {
    need(pattern, "pattern");
    need(out, "out");
    *out = plurality::max_active_degree(pattern->spec);
  });
}

plc_status plc_pattern_active_edges(const plc_pattern* pattern, uint64_t round, uint32_t* pairs,
                                    size_t capacity, size_t* count) {
  return guarded([&] {
    need(pattern, "pattern");
    need(count, "count");
    const auto active = plurality::generate(pattern->spec, round);
    *count = active.active.size();
    plurality::require(capacity >= active.active.size(), "pair buffer too small");
    if (!active.active.empty()) need(pairs, "pairs");
    for (size_t i = 0; i < active.active.size(); ++i) {
      pairs[2 * i] = active.active[i].u;
      pairs[2 * i + 1] = active.active[i].v;
    }
  });
}

plc_status plc_pattern_empirical_pmin(const plc_pattern* pattern, uint64_t samples, double* out) {
  return guarded([&] {
    need(pattern, "pattern");
    need(out, "out");
    *out = plurality::empirical_pmin(pattern->spec, samples).pmin;
  });
}

void plc_pattern_free(plc_pattern* pattern) { delete pattern; }

plc_status plc_mixing_time(const plc_pattern* pattern, double epsilon, uint64_t horizon,
                           uint64_t trials, plc_mixing_result* out) {
  return guarded([&] {
    need(pattern, "pattern");
    need(out, "out");
    const double eps = epsilon > 0 ? epsilon : plurality::default_epsilon(pattern->spec.node_count());
    const auto est = plurality::estimate_mixing_time(pattern->spec, eps, horizon, trials);
    *out = {est.t_mix, est.estimated ? 1 : 0, est.windows, est.worst_discrepancy};
  });
}

plc_status plc_window_discrepancy(const plc_pattern* pattern, uint64_t t1, uint64_t t2, double* out) {
  return guarded([&] {
    need(pattern, "pattern");
    need(out, "out");
    *out = plurality::window_discrepancy(plurality::window_product(pattern->spec, t1, t2));
  });
}

plc_status plc_shuffle_required_gamma(size_t n, double alpha, uint64_t T, double c, uint32_t delta,
                                      uint64_t* out) {
  return guarded([&] {
    need(out, "out");
    *out = plurality::shuffle::required_gamma(n, alpha, T, c, delta);
  });
}

plc_status plc_shuffle_memory_bits(size_t n, size_t k, double alpha, uint64_t T, uint64_t t_mix,
                                   uint64_t* out) {
  return guarded([&] {
    need(out, "out");
    *out = plurality::shuffle::memory_bits(n, k, alpha, T, t_mix);
  });
}

plc_status plc_balance_required_gamma(uint64_t g, double alpha, size_t n, uint64_t* out) {
  return guarded([&] {
    need(out, "out");
    *out = plurality::balance::required_gamma(g, alpha, n);
  });
}

plc_status plc_balance_memory_bits(size_t k, uint64_t gamma, uint64_t* out) {
  return guarded([&] {
    need(out, "out");
    *out = plurality::balance::memory_bits(k, gamma);
  });
}

void plc_experiment_config_init(plc_experiment_config* cfg) {
  if (!cfg) return;
  static const size_t default_sizes[] = {16};
  *cfg = plc_experiment_config{};
  cfg->protocol = "balance";
  cfg->graph = "complete";
  cfg->sizes = default_sizes;
  cfg->size_count = 1;
  cfg->degree = 3;
  cfg->model = "diffusion";
  cfg->k = 2;
  cfg->alpha = 0.25;
  cfg->T = 1;
  cfg->c = 12.0;
  cfg->matching_probability = 1.0;
  cfg->replicas = 10;
  cfg->seed = 1;
  cfg->mixing_trials = 16;
}

plc_status plc_sweep_run(const plc_experiment_config* cfg, plc_sweep** out) {
  return guarded([&] {
    need(cfg, "cfg");
    need(out, "out");
    *out = new plc_sweep{plurality::run_sweep(to_spec(*cfg))};
  });
}

size_t plc_sweep_record_count(const plc_sweep* sweep) {
  if (!sweep) return 0;
  size_t total = 0;
  for (const auto& recs : sweep->result.records) total += recs.size();
  return total;
}

plc_status plc_sweep_record(const plc_sweep* sweep, size_t index, plc_run_record* out) {
  return guarded([&] {
    need(sweep, "sweep");
    need(out, "out");
    for (const auto& recs : sweep->result.records) {
      if (index >= recs.size()) {
        index -= recs.size();
        continue;
      }
      const plurality::RunRecord& r = recs[index];
      *out = {r.seed,
              r.n,
              r.k,
              r.alpha,
              r.gamma,
              r.t_mix,
              r.rounds,
              r.consensus_round ? 1 : 0,
              r.consensus_round.value_or(0),
              r.all_correct ? 1 : 0,
              r.memory_bits,
              r.error.empty() ? 0 : 1};
      return;
    }
    plurality::fail(plurality::ErrorCode::invalid_argument, "record index out of range");
  });
}

plc_status plc_sweep_write_csv(const plc_sweep* sweep, const char* path) {
  return guarded([&] {
    need(sweep, "sweep");
    if (path == nullptr || std::strcmp(path, "-") == 0) {
      plurality::write_csv(std::cout, sweep->result);
      std::cout.flush();
      return;
    }
    auto out = open_for_write(path);
    plurality::write_csv(out, sweep->result);
  });
}

plc_status plc_sweep_summary_json(const plc_sweep* sweep, char** out_json) {
  return guarded([&] {
    need(sweep, "sweep");
    need(out_json, "out_json");
    *out_json = dup_string(plurality::summary_json(sweep->result).dump(2));
  });
}

void plc_sweep_free(plc_sweep* sweep) { delete sweep; }

plc_status plc_scaling_report(const char* csv_path, const plc_experiment_config* cfg,
                              char** out_json) {
  return guarded([&] {
    using namespace plurality;
    need(csv_path, "csv_path");
    need(cfg, "cfg");
    need(out_json, "out_json");
    std::ifstream in(csv_path);
    if (!in) fail(ErrorCode::io_error, std::string("cannot open ") + csv_path);
    const auto records = read_csv(in);
    ExperimentSpec spec = to_spec(*cfg);
    auto info = [&](std::size_t n) {
      // Graphs are rebuilt with the sweep's per-point seed.
      std::size_t point = 0;
      auto it = std::find(spec.sizes.begin(), spec.sizes.end(), n);
      if (it != spec.sizes.end()) point = static_cast<std::size_t>(it - spec.sizes.begin());
      auto graph = graph_for(spec, point, n);
      GraphInfo gi;
      gi.spectral_gap = spectral_gap(*graph);
      gi.degree = graph->max_degree();
      if (spec.model == Model::random_matching)
        gi.pmin = empirical_pmin(pattern_for(spec, graph, derive_seed(spec.seed, {stream::pattern, point})),
                                 10000)
                      .pmin;
      return gi;
    };
    auto report = scaling_report(records, spec.model, spec.T, info);
    *out_json = dup_string(to_json(report).dump(2));
  });
}

plc_status plc_verify(const char* suite, uint64_t seed, uint64_t samples, int* all_pass,
                      char** out_json) {
  return guarded([&] {
    need(suite, "suite");
    need(all_pass, "all_pass");
    need(out_json, "out_json");
    const auto reports = plurality::run_verification(suite, seed, samples);
    nlohmann::json arr = nlohmann::json::array();
    bool ok = true;
    for (const auto& r : reports) {
      arr.push_back(plurality::analysis::to_json(r));
      ok = ok && r.pass;
    }
    *all_pass = ok ? 1 : 0;
    *out_json = dup_string(arr.dump(2));
  });
}

}  // extern "C"
