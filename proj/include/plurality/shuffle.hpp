#pragma once

#include <cstdint>
#include <vector>

#include "plurality/comm_patterns.hpp"
#include "plurality/opinions.hpp"
#include "plurality/rng.hpp"
#include "plurality/smoothing.hpp"

namespace plurality::shuffle {

/// Per-node state. Tokens are stored as a count per label.
struct NodeState {
  Opinion opinion = 0;
  std::vector<std::uint64_t> tokens;
  std::uint64_t counter = 0;
  Opinion dom = 0;
  std::uint64_t est = 0;
  Opinion plurality_guess = 0;
};

struct Config {
  std::uint64_t gamma = 0;
  std::uint64_t T = 1;
  std::uint64_t t_mix = 1;
  double c = 12.0;
  std::size_t k = 1;
  std::vector<Opinion> assignment;
};

/// ⌈c·log₂n/(α²T)⌉ rounded up to a multiple of 2Δ (at least 2Δ).
std::uint64_t required_gamma(std::size_t n, double alpha, std::uint64_t T, double c,
                             std::uint32_t delta);

/// Every node holds γ tokens of its own label, counter 0, (dom, est) =
/// (opinion, 0) and guesses its own opinion.
std::vector<NodeState> initial_states(const Config& cfg);

/// Shuffle part: each node splits a uniformly random permutation of its
/// tokens into slots of size P[u,v]·γ and sends slot v to v. Throws
/// invalid_argument when some slot size is not integral.
void shuffle_step(std::vector<NodeState>& states, const TransitionMatrix& P, Rng& rng);

/// Broadcast part: simultaneous max-est adoption over N_t(u) ∪ {u}; ties go
/// to the smaller dom, then the smaller node id.
void broadcast_step(std::vector<NodeState>& states, const ActiveEdgeSet& active);

/// Update part (rounds t ≡ 0 mod t_mix).
void update_step(std::vector<NodeState>& states);

/// Number of rounds executed by run(): (⌈c·T⌉ + 1)·t_mix.
std::uint64_t run_length(const Config& cfg);

struct Outcome {
  RunRecord record;
  std::vector<std::uint64_t> counters;  // final c_u
  std::uint64_t updates = 0;            // update parts executed
  /// Counters right after update number ⌈c·T⌉ (the last one whose
  /// broadcast completes inside the run).
  std::vector<std::uint64_t> counters_at_check;
};

Outcome run(const Config& cfg, const PatternSpec& spec, std::uint64_t seed);

/// (12·log₂n/(α²T) + 4)·log₂k + 4·log₂(12·log₂n/α²) + log₂(T·t_mix), rounded up.
std::uint64_t memory_bits(std::size_t n, std::size_t k, double alpha, std::uint64_t T,
                          std::uint64_t t_mix);

}  // namespace plurality::shuffle
