#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "plurality/comm_patterns.hpp"
#include "plurality/opinions.hpp"
#include "plurality/rng.hpp"
#include "plurality/smoothing.hpp"

namespace plurality::analysis {

/// Positions of independently walking tokens (process 𝒲).
struct WalkEnsemble {
  std::vector<NodeId> positions;
  std::uint64_t steps = 0;
};

/// Every token moves to v with probability P[current, v].
void walk_step(WalkEnsemble& ensemble, const TransitionMatrix& P, Rng& rng);

/// Token-level shuffle process 𝒮: each token keeps its identity so single
/// tokens and token sets can be followed.
class TokenShuffle {
 public:
  /// γ tokens per node; token j starts on node j / γ.
  TokenShuffle(std::size_t n, std::uint64_t gamma);

  void step(const TransitionMatrix& P, Rng& rng);

  NodeId position(std::uint32_t token) const { return position_[token]; }
  const std::vector<NodeId>& positions() const { return position_; }
  std::uint64_t gamma() const { return gamma_; }

 private:
  std::uint64_t gamma_;
  std::vector<std::vector<std::uint32_t>> held_;
  std::vector<NodeId> position_;
};

/// Initial placement shared by 𝒮 and 𝒲: token j on node j / γ.
std::vector<NodeId> initial_placement(std::size_t n, std::uint64_t gamma);

struct StatTestReport {
  std::string statistic;
  std::uint64_t samples = 0;
  double observed = 0;
  double bound = 0;
  double slack = 0;
  bool pass = false;  // observed <= bound + slack
};

nlohmann::json to_json(const StatTestReport& report);

/// TV distance between the empirical location laws of token 0 under 𝒮 and
/// 𝒲 after t rounds of the (fixed) pattern. PASS iff TV ≤ tolerance.
StatTestReport marginal_equality_test(const PatternSpec& spec, std::uint64_t gamma,
                                      std::uint64_t t, std::uint64_t samples,
                                      std::uint64_t seed, double tolerance = 0.02);

/// Pr[all tokens of B in D after t rounds] under 𝒮 against the product of
/// the exact 𝒲 marginals (rows of the window product). PASS iff
/// joint ≤ product + 3σ, σ the binomial standard error of the joint.
StatTestReport negative_association_test(const PatternSpec& spec, std::uint64_t gamma,
                                         const std::vector<std::uint32_t>& tokens,
                                         const std::vector<NodeId>& nodes, std::uint64_t t,
                                         std::uint64_t samples, std::uint64_t seed);

/// μ = (1/n + 1/n⁵)·|B|·T.
double chernoff_mean(std::size_t n, std::size_t set_size, std::uint64_t T);

/// X = Σ_{s ≤ T} Σ_{j∈B} 1[token j on u at round s·t_mix] under 𝒮.
/// PASS iff Pr[X ≥ (1+δ)μ] ≤ exp(−δ²μ/3) + 3σ.
StatTestReport chernoff_tail_check(const PatternSpec& spec, std::uint64_t gamma,
                                   const std::vector<std::uint32_t>& tokens, NodeId u,
                                   std::uint64_t T, std::uint64_t t_mix, double delta,
                                   std::uint64_t samples, std::uint64_t seed);

struct CounterThresholds {
  double lower = 0;  // ℓ_⊥: counters of non-plurality nodes stay below
  double upper = 0;  // ℓ_⊤: counters of plurality nodes stay above
  std::uint64_t updates = 0;
};

/// Separation thresholds for counters after `updates` update parts
/// (c·T updates in a full run). With p = 1/n + 1/n⁵:
///   μ_i = p·updates·γ·n_i,  μ' = p·updates·γ·(n − n₁)
///   ℓ_⊥ = μ₂ + √(c·updates·log₂n·γ·n₂/n)
///   ℓ_⊤ = updates·γ − μ' − √(c·updates·log₂n·γ·(n − n₁)/n)
/// `counts` must be sorted descending with n₁ > n₂. Throws
/// threshold_inversion when ℓ_⊤ ≤ ℓ_⊥.
CounterThresholds counter_thresholds(std::size_t n, const OpinionCounts& counts,
                                     std::uint64_t updates, std::uint64_t gamma, double c);

}  // namespace plurality::analysis
