#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "plurality/comm_patterns.hpp"
#include "plurality/opinions.hpp"
#include "plurality/rng.hpp"
#include "plurality/smoothing.hpp"

namespace plurality::balance {

struct NodeState {
  std::vector<std::uint64_t> load;  // one entry per opinion
  Opinion plurality_guess = 0;
};

struct Config {
  std::uint64_t gamma = 0;
  std::uint64_t g = 1;
  std::size_t k = 1;
  std::vector<Opinion> assignment;
  std::uint64_t horizon = 0;
};

/// ⌈3g/α⌉; throws invalid_argument when the result exceeds n⁵.
std::uint64_t required_gamma(std::uint64_t g, double alpha, std::size_t n);

/// Target discrepancy used when none is configured: 1 for matching-based
/// models, ⌈√(d·log₂n)⌉ for diffusion.
std::uint64_t default_target_discrepancy(Model model, const Graph& g);

/// Floor part of the vertex-based balancer for one node and dimension.
struct RoundingSplit {
  std::uint64_t per_neighbor = 0;  // ⌊load·P[u,v]⌋
  std::uint64_t keep = 0;          // ⌊load·P[u,u]⌋
  std::uint64_t excess = 0;        // load − d·per_neighbor − keep
};

RoundingSplit vertex_based_rounding(std::uint64_t load, std::uint32_t active_degree,
                                    std::uint32_t delta);

std::vector<NodeState> initial_states(const Config& cfg);

/// One round of the balancer on every dimension. Each active neighbor gets
/// at most one excess token, with probability equal to the fractional
/// part of load·P[u,v]; unplaced excess stays put. `P` must be the
/// transition matrix of `active`.
void step(std::vector<NodeState>& states, const TransitionMatrix& P,
          const ActiveEdgeSet& active, Rng& rng);

/// argmax of the load vector, smaller label on ties.
Opinion plurality_guess(const NodeState& state);

/// max − min over nodes of each dimension.
std::vector<std::uint64_t> discrepancies(const std::vector<NodeState>& states,
                                         std::size_t k);

struct Outcome {
  RunRecord record;
  bool reached_target = false;           // disc ≤ g in every dimension
  std::optional<std::uint64_t> tau;      // round at which that happened
  bool implication_held = true;          // reached ⇒ every guess correct
};

/// Steps until every dimension has discrepancy ≤ g or the horizon is hit.
Outcome run(const Config& cfg, const PatternSpec& spec, std::uint64_t seed);

/// k·⌈log₂(γ+1)⌉.
std::uint64_t memory_bits(std::size_t k, std::uint64_t gamma);

}  // namespace plurality::balance
