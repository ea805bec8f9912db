#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace plurality {

/// Opinion labels are 0-based internally; opinion i corresponds to the
/// (i+1)-th entry of a counts list.
using Opinion = std::uint32_t;

using OpinionCounts = std::vector<std::uint64_t>;

/// Opinion with the strictly largest count. Throws invalid_argument when
/// the maximum is shared.
Opinion plurality_of(const OpinionCounts& counts);

/// α = (n₁ − n₂)/n with n₁ ≥ n₂ the two largest counts (n₂ = 0 when k = 1).
double initial_bias(const OpinionCounts& counts);

/// Counts with the requested k whose bias is as close to `alpha` as the
/// integers allow while keeping n₁ > n₂ ≥ … ≥ n_k.
OpinionCounts counts_from_alpha(std::size_t n, std::size_t k, double alpha);

/// Per-node opinions realizing `counts`, placed by a seeded shuffle.
std::vector<Opinion> assign_opinions(const OpinionCounts& counts, std::uint64_t seed);

OpinionCounts count_opinions(const std::vector<Opinion>& assignment, std::size_t k);

/// One replica's outcome. Field order follows the CSV columns.
struct RunRecord {
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::size_t k = 0;
  double alpha = 0;
  std::uint64_t gamma = 0;
  std::string model;
  std::string protocol;
  std::uint64_t t_mix = 0;
  std::uint64_t rounds = 0;
  /// First round after which every guess is correct through the last
  /// executed round; empty when the run ended with a wrong guess.
  std::optional<std::uint64_t> consensus_round;
  bool all_correct = false;
  std::uint64_t memory_bits = 0;
  std::string error;  // set when the replica failed
};

/// Tracks the all-correct flag per round and yields the consensus round.
class ConsensusTracker {
 public:
  void observe(std::uint64_t round, bool all_correct) {
    if (!all_correct) {
      since_.reset();
    } else if (!since_) {
      since_ = round;
    }
  }
  std::optional<std::uint64_t> consensus_round() const { return since_; }

 private:
  std::optional<std::uint64_t> since_;
};

}  // namespace plurality
