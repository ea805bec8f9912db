// Command-line driver. Talks to the simulator only through the C interface.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "plurality/plurality.h"

namespace {

struct Options {
  std::string protocol = "balance";
  std::string model = "diffusion";
  std::string graph = "complete";
  std::vector<std::size_t> sizes{16};
  std::size_t degree = 3;
  std::size_t k = 2;
  std::vector<std::uint64_t> counts;
  double alpha = 0.25;
  std::uint64_t T = 1;
  std::uint64_t g = 0;
  double c = 12.0;
  double epsilon = 0.0;
  double matching_probability = 1.0;
  std::uint64_t replicas = 10;
  std::uint64_t seed = 1;
  std::uint64_t horizon = 0;
  std::uint64_t mixing_trials = 16;
  unsigned threads = 0;
  std::string out;
  std::string summary;
  std::string csv;
  std::string suite = "all";
  std::uint64_t samples = 100000;
};

int report_error(plc_status status) {
  std::fprintf(stderr, "error: %s\n", plc_last_error());
  return static_cast<int>(status);
}

plc_experiment_config to_config(const Options& o) {
  plc_experiment_config cfg;
  plc_experiment_config_init(&cfg);
  cfg.protocol = o.protocol.c_str();
  cfg.graph = o.graph.c_str();
  cfg.sizes = o.sizes.data();
  cfg.size_count = o.sizes.size();
  cfg.degree = o.degree;
  cfg.model = o.model.c_str();
  cfg.k = o.counts.empty() ? o.k : o.counts.size();
  cfg.counts = o.counts.empty() ? nullptr : o.counts.data();
  cfg.count_len = o.counts.size();
  cfg.alpha = o.alpha;
  cfg.T = o.T;
  cfg.g = o.g;
  cfg.c = o.c;
  cfg.epsilon = o.epsilon;
  cfg.matching_probability = o.matching_probability;
  cfg.replicas = o.replicas;
  cfg.seed = o.seed;
  cfg.horizon = o.horizon;
  cfg.mixing_trials = o.mixing_trials;
  cfg.threads = o.threads;
  return cfg;
}

bool emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text << '\n';
    return true;
  }
  std::ofstream out(path);
  if (!out) return false;
  out << text << '\n';
  return static_cast<bool>(out);
}

int emit_owned(char* json, const std::string& path) {
  const bool ok = emit(json, path);
  plc_string_free(json);
  if (!ok) {
    std::fprintf(stderr, "error: cannot write %s\n", path.c_str());
    return PLC_ERR_IO;
  }
  return 0;
}

int cmd_run(const Options& o) {
  const plc_experiment_config cfg = to_config(o);
  plc_sweep* sweep = nullptr;
  if (plc_status s = plc_sweep_run(&cfg, &sweep); s != PLC_OK) return report_error(s);
  int rc = 0;
  if (plc_status s = plc_sweep_write_csv(sweep, o.out.empty() ? nullptr : o.out.c_str()); s != PLC_OK) {
    rc = report_error(s);
  } else {
    char* json = nullptr;
    if (plc_status s2 = plc_sweep_summary_json(sweep, &json); s2 != PLC_OK) {
      rc = report_error(s2);
    } else if (o.summary.empty()) {
      std::cerr << json << '\n';
      plc_string_free(json);
    } else {
      rc = emit_owned(json, o.summary);
    }
  }
  plc_sweep_free(sweep);
  return rc;
}

int cmd_mixing(const Options& o) {
  std::string json = "[";
  for (std::size_t i = 0; i < o.sizes.size(); ++i) {
    plc_graph* graph = nullptr;
    if (plc_status s = plc_graph_build(o.graph.c_str(), o.sizes[i], o.degree, o.seed, &graph); s != PLC_OK)
      return report_error(s);
    plc_pattern* pattern = nullptr;
    plc_status s = plc_pattern_create(graph, o.model.c_str(), o.seed, o.matching_probability, &pattern);
    plc_mixing_result res{};
    double gap = 0;
    if (s == PLC_OK) {
      const std::uint64_t horizon = o.horizon ? o.horizon : 1000 + 200 * o.sizes[i] * o.sizes[i];
      s = plc_mixing_time(pattern, o.epsilon, horizon, o.mixing_trials, &res);
    }
    if (s == PLC_OK) s = plc_graph_spectral_gap(graph, &gap);
    plc_pattern_free(pattern);
    plc_graph_free(graph);
    if (s != PLC_OK) return report_error(s);
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "%s\n  {\"n\": %zu, \"t_mix\": %llu, \"estimated\": %s, \"windows\": %llu, "
                  "\"worst_discrepancy\": %.6g, \"spectral_gap\": %.10g}",
                  i ? "," : "", o.sizes[i], static_cast<unsigned long long>(res.t_mix),
                  res.estimated ? "true" : "false", static_cast<unsigned long long>(res.windows),
                  res.worst_discrepancy, gap);
    json += buf;
  }
  json += "\n]";
  if (!emit(json, o.out)) {
    std::fprintf(stderr, "error: cannot write %s\n", o.out.c_str());
    return PLC_ERR_IO;
  }
  return 0;
}

int cmd_verify(const Options& o) {
  int all_pass = 0;
  char* json = nullptr;
  if (plc_status s = plc_verify(o.suite.c_str(), o.seed, o.samples, &all_pass, &json); s != PLC_OK)
    return report_error(s);
  if (int rc = emit_owned(json, o.out); rc != 0) return rc;
  return all_pass ? 0 : 1;
}

int cmd_report(const Options& o) {
  const plc_experiment_config cfg = to_config(o);
  char* json = nullptr;
  if (plc_status s = plc_scaling_report(o.csv.c_str(), &cfg, &json); s != PLC_OK) return report_error(s);
  return emit_owned(json, o.out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Plurality consensus simulator"};
  app.set_config("--config", "", "Key-value config file; command-line flags override its keys");
  app.require_subcommand(1);
  app.fallthrough();

  Options o;
  app.add_option("--protocol", o.protocol, "shuffle | balance")->capture_default_str();
  app.add_option("--model", o.model, "diffusion | random_matching | balancing_circuit | sequential")
      ->capture_default_str();
  app.add_option("--graph", o.graph, "complete | cycle | hypercube | random_regular | torus")
      ->capture_default_str();
  app.add_option("--n", o.sizes, "Graph sizes to sweep")->capture_default_str()->delimiter(',');
  app.add_option("--d", o.degree, "Degree of random regular graphs")->capture_default_str();
  app.add_option("--k", o.k, "Number of opinions")->capture_default_str();
  app.add_option("--counts", o.counts, "Opinion counts, largest first")->delimiter(',');
  app.add_option("--alpha", o.alpha, "Initial bias when counts are not given")->capture_default_str();
  app.add_option("--T", o.T, "Shuffle phase length multiplier")->capture_default_str();
  app.add_option("--g", o.g, "Balance target discrepancy (0: model default)")->capture_default_str();
  app.add_option("--c", o.c, "Shuffle constant")->capture_default_str();
  app.add_option("--epsilon", o.epsilon, "Smoothing threshold (0: n^-5)")->capture_default_str();
  app.add_option("--p", o.matching_probability, "Edge probability for random matchings")
      ->capture_default_str();
  app.add_option("--replicas", o.replicas, "Runs per sweep point")->capture_default_str();
  app.add_option("--seed", o.seed, "Master seed")->capture_default_str();
  app.add_option("--horizon", o.horizon, "Round limit (0: default)")->capture_default_str();
  app.add_option("--mixing-trials", o.mixing_trials, "Window starts sampled for randomized models")
      ->capture_default_str();
  app.add_option("--threads", o.threads, "Worker threads (0: all cores)")->capture_default_str();
  app.add_option("--out", o.out, "Output path (default stdout)");

  auto* run = app.add_subcommand("run", "Run a seeded sweep and write CSV rows");
  run->add_option("--summary", o.summary, "JSON summary path (default stderr)");
  auto* mixing = app.add_subcommand("mixing", "Estimate the mixing time of a pattern");
  auto* verify = app.add_subcommand("verify", "Run the statistical verification suites");
  verify->add_option("--suite", o.suite, "marginal | negative-association | chernoff | all")
      ->capture_default_str();
  verify->add_option("--samples", o.samples, "Monte Carlo samples")->capture_default_str();
  auto* report = app.add_subcommand("report", "Scaling report over a sweep CSV");
  report->add_option("--csv", o.csv, "CSV written by `run`")->required();

  CLI11_PARSE(app, argc, argv);

  if (*run) return cmd_run(o);
  if (*mixing) return cmd_mixing(o);
  if (*verify) return cmd_verify(o);
  if (*report) return cmd_report(o);
  return 0;
}
