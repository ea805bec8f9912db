#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "plurality/analysis.hpp"
#include "plurality/comm_patterns.hpp"
#include "plurality/graph.hpp"
#include "plurality/opinions.hpp"

namespace plurality {

enum class Protocol { shuffle, balance };

Protocol parse_protocol(std::string_view name);
std::string_view to_string(Protocol protocol);

struct ExperimentSpec {
  Protocol protocol = Protocol::balance;
  GraphKind graph = GraphKind::complete;
  std::vector<std::size_t> sizes{16};
  std::size_t degree = 3;  // random_regular only
  Model model = Model::diffusion;
  std::size_t k = 2;
  OpinionCounts counts;  // used as-is when sizes has one entry summing to it
  double alpha = 0.25;   // used when counts is empty
  std::uint64_t T = 1;
  std::optional<std::uint64_t> g;       // balance; model default when unset
  double c = 12.0;
  std::optional<double> epsilon;        // default n^-5
  double matching_probability = 1.0;
  std::uint64_t replicas = 10;
  std::uint64_t seed = 1;
  std::optional<std::uint64_t> horizon;  // balance; default 64·n·log₂n
  std::uint64_t mixing_trials = 16;
  unsigned threads = 0;                  // 0: hardware concurrency
};

void validate(const ExperimentSpec& spec);

/// Seed of replica r at sweep point p: pure function of the master seed.
std::uint64_t replica_seed(std::uint64_t master, std::size_t point, std::uint64_t replica);

struct SweepPoint {
  std::size_t n = 0;
  OpinionCounts counts;
  std::uint64_t t_mix = 0;
  bool t_mix_estimated = false;
  double spectral_gap = 0;
  double pmin = 1.0;
  std::uint32_t degree = 0;
};

struct SweepResult {
  std::vector<SweepPoint> points;
  /// Sorted by (point, replica).
  std::vector<std::vector<RunRecord>> records;
};

/// Runs every (size × replica). Replica failures land in RunRecord::error.
SweepResult run_sweep(const ExperimentSpec& spec);

/// Pattern of one sweep point; randomized models draw their rounds from
/// `pattern_seed`.
PatternSpec pattern_for(const ExperimentSpec& spec, std::shared_ptr<const Graph> graph,
                        std::uint64_t pattern_seed);
std::shared_ptr<const Graph> graph_for(const ExperimentSpec& spec, std::size_t point,
                                       std::size_t n);

inline constexpr const char* kCsvHeader =
    "seed,n,k,alpha,gamma,model,protocol,t_mix,rounds,consensus_round,all_correct,"
    "memory_bits";

void write_csv(std::ostream& out, const SweepResult& result);
std::vector<RunRecord> read_csv(std::istream& in);
nlohmann::json summary_json(const SweepResult& result);

struct ScalingRow {
  std::size_t n = 0;
  double measured = 0;   // median consensus round
  double predicted = 0;  // model's bound form
  double ratio = 0;      // measured / predicted
  std::uint64_t runs = 0;
  std::uint64_t reached = 0;
};

struct ScalingReport {
  Model model = Model::diffusion;
  std::vector<ScalingRow> rows;
  double spread = 0;  // max ratio / min ratio over rows with ratio > 0
};

/// Bound form of the consensus time: diffusion T·log n/(1−λ₂); random
/// matching T/(d·p_min)·log n/(1−λ₂); balancing circuit T·d·log n/(1−λ₂);
/// sequential T·n·log n/(1−λ₂). Logarithms base 2.
double predicted_time(Model model, std::size_t n, std::uint64_t T, double gap,
                      std::uint32_t degree, double pmin);

struct GraphInfo {
  double spectral_gap = 0;
  std::uint32_t degree = 0;
  double pmin = 1.0;
};

/// Groups records of `model` by n; needs ≥ 3 distinct sizes.
ScalingReport scaling_report(const std::vector<RunRecord>& records, Model model,
                             std::uint64_t T,
                             const std::function<GraphInfo(std::size_t)>& info);

nlohmann::json to_json(const ScalingReport& report);

/// Named analysis suites: "marginal", "negative-association", "chernoff",
/// "all".
std::vector<analysis::StatTestReport> run_verification(const std::string& suite,
                                                       std::uint64_t seed,
                                                       std::uint64_t samples);

}  // namespace plurality
