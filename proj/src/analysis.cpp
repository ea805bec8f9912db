#include "plurality/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "plurality/error.hpp"

namespace plurality::analysis {

void walk_step(WalkEnsemble& ensemble, const TransitionMatrix& P, Rng& rng) {
  const std::size_t n = P.size();
  std::uniform_int_distribution<std::int64_t> pick(0, P.denominator() - 1);
  for (NodeId& pos : ensemble.positions) {
    std::int64_t r = pick(rng);
    for (NodeId v = 0; v < n; ++v) {
      r -= P.numerator(pos, v);
      if (r < 0) {
        pos = v;
        break;
      }
    }
  }
  ++ensemble.steps;
}

std::vector<NodeId> initial_placement(std::size_t n, std::uint64_t gamma) {
  std::vector<NodeId> out(n * gamma);
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = static_cast<NodeId>(j / gamma);
  return out;
}

TokenShuffle::TokenShuffle(std::size_t n, std::uint64_t gamma)
    : gamma_(gamma), held_(n), position_(initial_placement(n, gamma)) {
  for (std::uint32_t j = 0; j < position_.size(); ++j) held_[position_[j]].push_back(j);
}

void TokenShuffle::step(const TransitionMatrix& P, Rng& rng) {
  const std::size_t n = held_.size();
  require(P.size() == n, "transition matrix size differs from node count");
  const auto denom = static_cast<std::uint64_t>(P.denominator());
  std::vector<std::vector<std::uint32_t>> next(n);
  for (std::size_t u = 0; u < n; ++u) {
    auto& tokens = held_[u];
    std::shuffle(tokens.begin(), tokens.end(), rng);
    std::size_t cursor = 0;
    for (std::size_t v = 0; v < n; ++v) {
      if (v == u) continue;
      const auto num = static_cast<std::uint64_t>(P.numerator(static_cast<NodeId>(u), static_cast<NodeId>(v)));
      if (num == 0) continue;
      require(num * tokens.size() % denom == 0, "slot size P[u,v]·γ is not integral");
      const std::size_t slot = num * tokens.size() / denom;
      for (std::size_t i = 0; i < slot; ++i, ++cursor) {
        next[v].push_back(tokens[cursor]);
        position_[tokens[cursor]] = static_cast<NodeId>(v);
      }
    }
    for (; cursor < tokens.size(); ++cursor) next[u].push_back(tokens[cursor]);
  }
  held_ = std::move(next);
}

nlohmann::json to_json(const StatTestReport& r) {
  return {{"statistic", r.statistic}, {"samples", r.samples}, {"observed", r.observed},
          {"bound", r.bound},         {"slack", r.slack},     {"verdict", r.pass ? "PASS" : "FAIL"}};
}

namespace {

std::vector<TransitionMatrix> pattern_matrices(const PatternSpec& spec, std::uint64_t rounds) {
  const std::uint32_t delta = max_active_degree(spec);
  std::vector<TransitionMatrix> out;
  out.reserve(rounds);
  for (std::uint64_t t = 1; t <= rounds; ++t)
    out.push_back(transition_from_active(generate(spec, t), spec.node_count(), delta));
  return out;
}

double binomial_sigma(double p, std::uint64_t samples) {
  return std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
}

// Absorbs floating error in exactly computed reference values.
constexpr double kFloatTolerance = 1e-9;

}  // namespace

StatTestReport marginal_equality_test(const PatternSpec& spec, std::uint64_t gamma,
                                      std::uint64_t t, std::uint64_t samples,
                                      std::uint64_t seed, double tolerance) {
  require(samples >= 1, "need at least one sample");
  const std::size_t n = spec.node_count();
  const auto matrices = pattern_matrices(spec, t);
  std::vector<std::uint64_t> shuffle_hist(n, 0), walk_hist(n, 0);
  for (std::uint64_t s = 0; s < samples; ++s) {
    TokenShuffle shuffle(n, gamma);
    Rng shuffle_rng(derive_seed(seed, {stream::protocol, s}));
    for (const auto& P : matrices) shuffle.step(P, shuffle_rng);
    ++shuffle_hist[shuffle.position(0)];

    // Token 0 alone: tokens of 𝒲 are independent.
    WalkEnsemble walk{{0}, 0};
    Rng walk_rng(derive_seed(seed, {stream::walk, s}));
    for (const auto& P : matrices) walk_step(walk, P, walk_rng);
    ++walk_hist[walk.positions[0]];
  }
  double tv = 0;
  for (std::size_t v = 0; v < n; ++v)
    tv += std::abs(static_cast<double>(shuffle_hist[v]) - static_cast<double>(walk_hist[v]));
  tv /= 2.0 * static_cast<double>(samples);
  return {"marginal_tv", samples, tv, tolerance, 0.0, tv <= tolerance};
}

StatTestReport negative_association_test(const PatternSpec& spec, std::uint64_t gamma,
                                         const std::vector<std::uint32_t>& tokens,
                                         const std::vector<NodeId>& nodes, std::uint64_t t,
                                         std::uint64_t samples, std::uint64_t seed) {
  require(tokens.size() >= 2, "negative association needs |B| >= 2");
  require(samples >= 1, "need at least one sample");
  const std::size_t n = spec.node_count();
  for (auto j : tokens) require(j < n * gamma, "token id out of range");
  std::vector<char> in_set(n, 0);
  for (NodeId v : nodes) {
    require(v < n, "node id out of range");
    in_set[v] = 1;
  }

  const auto matrices = pattern_matrices(spec, t);
  std::uint64_t joint_hits = 0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    TokenShuffle shuffle(n, gamma);
    Rng rng(derive_seed(seed, {stream::protocol, s}));
    for (const auto& P : matrices) shuffle.step(P, rng);
    joint_hits += std::all_of(tokens.begin(), tokens.end(),
                              [&](std::uint32_t j) { return in_set[shuffle.position(j)] != 0; });
  }

  // 𝒲 marginals are rows of the window product.
  Eigen::MatrixXd prod = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  if (t > 0) prod = window_product(spec, 1, t).product;
  double product = 1.0;
  for (std::uint32_t j : tokens) {
    const auto start = static_cast<Eigen::Index>(j / gamma);
    double marginal = 0;
    for (NodeId v : nodes) marginal += prod(start, v);
    product *= marginal;
  }

  const double joint = static_cast<double>(joint_hits) / static_cast<double>(samples);
  const double slack = 3.0 * binomial_sigma(joint, samples) + kFloatTolerance;
  return {"negative_association", samples, joint, product, slack, joint <= product + slack};
}

double chernoff_mean(std::size_t n, std::size_t set_size, std::uint64_t T) {
  const double nd = static_cast<double>(n);
  return (1.0 / nd + std::pow(nd, -5.0)) * static_cast<double>(set_size) * static_cast<double>(T);
}

StatTestReport chernoff_tail_check(const PatternSpec& spec, std::uint64_t gamma,
                                   const std::vector<std::uint32_t>& tokens, NodeId u,
                                   std::uint64_t T, std::uint64_t t_mix, double delta,
                                   std::uint64_t samples, std::uint64_t seed) {
  require(delta > 0, "δ must be positive");
  require(T >= 1 && t_mix >= 1 && samples >= 1, "T, t_mix and samples must be positive");
  const std::size_t n = spec.node_count();
  require(u < n, "node id out of range");
  for (auto j : tokens) require(j < n * gamma, "token id out of range");

  const double mu = chernoff_mean(n, tokens.size(), T);
  const double threshold = (1.0 + delta) * mu;
  const auto matrices = pattern_matrices(spec, T * t_mix);

  std::uint64_t tail_hits = 0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    TokenShuffle shuffle(n, gamma);
    Rng rng(derive_seed(seed, {stream::protocol, s}));
    std::uint64_t x = 0;
    for (std::uint64_t step = 1; step <= matrices.size(); ++step) {
      shuffle.step(matrices[step - 1], rng);
      if (step % t_mix != 0) continue;
      for (std::uint32_t j : tokens) x += shuffle.position(j) == u;
    }
    tail_hits += static_cast<double>(x) >= threshold;
  }

  const double observed = static_cast<double>(tail_hits) / static_cast<double>(samples);
  const double bound = std::exp(-delta * delta * mu / 3.0);
  const double slack = 3.0 * binomial_sigma(observed, samples);
  return {"chernoff_tail", samples, observed, bound, slack, observed <= bound + slack};
}

CounterThresholds counter_thresholds(std::size_t n, const OpinionCounts& counts,
                                     std::uint64_t updates, std::uint64_t gamma, double c) {
  require(!counts.empty(), "no opinions");
  require(std::is_sorted(counts.begin(), counts.end(), std::greater<>()),
          "counts must be sorted descending");
  require(counts.size() == 1 || counts[0] > counts[1], "need n1 > n2");
  require(c >= 12.0, "the separation argument needs c >= 12");
  require(n >= 2 && updates >= 1 && gamma >= 1, "n, updates and γ must be positive");

  const double nd = static_cast<double>(n);
  const double p = 1.0 / nd + std::pow(nd, -5.0);
  const double log_n = std::log2(nd);
  const double volume = static_cast<double>(updates) * static_cast<double>(gamma);
  const double n1 = static_cast<double>(counts[0]);
  const double n2 = counts.size() > 1 ? static_cast<double>(counts[1]) : 0.0;
  const double others = nd - n1;

  CounterThresholds th;
  th.updates = updates;
  th.lower = p * volume * n2 + std::sqrt(c * volume * log_n * n2 / nd);
  th.upper = volume - p * volume * others - std::sqrt(c * volume * log_n * others / nd);
  if (th.upper <= th.lower)
    fail(ErrorCode::threshold_inversion, "counter thresholds inverted: lower " +
                                             std::to_string(th.lower) + " >= upper " +
                                             std::to_string(th.upper));
  return th;
}

}  // namespace plurality::analysis
