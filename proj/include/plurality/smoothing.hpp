#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

#include "plurality/comm_patterns.hpp"

namespace plurality {

using BigRational = boost::multiprecision::cpp_rational;

/// P_t with exact entries: integer numerators over the common denominator
/// 2Δ. Off-diagonal active entries have numerator 1, diagonal entries
/// 2Δ - d_t(u).
class TransitionMatrix {
 public:
  TransitionMatrix(std::size_t n, std::uint32_t delta);

  std::size_t size() const noexcept { return n_; }
  std::uint32_t delta() const noexcept { return delta_; }
  std::int64_t denominator() const noexcept { return 2 * static_cast<std::int64_t>(delta_); }
  std::int64_t numerator(NodeId u, NodeId v) const { return num_[u * n_ + v]; }
  double operator()(NodeId u, NodeId v) const {
    return static_cast<double>(numerator(u, v)) / static_cast<double>(denominator());
  }
  BigRational exact(NodeId u, NodeId v) const;

  Eigen::MatrixXd to_dense() const;

 private:
  friend TransitionMatrix transition_from_active(const ActiveEdgeSet&, std::size_t,
                                                 std::uint32_t);
  std::size_t n_;
  std::uint32_t delta_;
  std::vector<std::int64_t> num_;
};

/// Throws invalid_argument if some node's active degree exceeds Δ.
TransitionMatrix transition_from_active(const ActiveEdgeSet& active, std::size_t n,
                                        std::uint32_t delta);

/// Product P_start · … · P_end (row-vector convention), floating point.
struct WindowProduct {
  std::uint64_t start = 1;
  std::uint64_t end = 1;
  Eigen::MatrixXd product;
};

using ExactMatrix = std::vector<std::vector<BigRational>>;

/// In-place right multiplication `prod := prod · P`, where P is the
/// transition matrix of `active` with bound Δ. Cost O(n·(n + |active|)).
void multiply_by_transition(Eigen::MatrixXd& prod, const ActiveEdgeSet& active,
                            std::uint32_t delta);

WindowProduct window_product(const PatternSpec& spec, std::uint64_t start,
                             std::uint64_t end);
ExactMatrix exact_window_product(const PatternSpec& spec, std::uint64_t start,
                                 std::uint64_t end);
ExactMatrix exact_product(const std::vector<TransitionMatrix>& factors);

/// max over column pairs of ½‖col_a − col_b‖₁, i.e. the largest disc(x·Π)
/// over x ∈ [0,1]^n.
double window_discrepancy(const Eigen::MatrixXd& product);
double window_discrepancy(const WindowProduct& w);
BigRational window_discrepancy(const ExactMatrix& product);

/// Whether [t1, t2] (inclusive, t2 - t1 + 1 factors) is ε-smoothing.
bool is_smoothing(const PatternSpec& spec, std::uint64_t t1, std::uint64_t t2,
                  double epsilon);

/// ε used when none is given: n^{-5}.
double default_epsilon(std::size_t n);

struct MixingEstimate {
  std::uint64_t t_mix = 1;       // number of factors in the window
  bool estimated = false;        // true for randomized patterns
  std::uint64_t windows = 0;     // windows evaluated
  double worst_discrepancy = 0;  // largest discrepancy at length t_mix
};

/// Smallest window length such that every evaluated window is ε-smoothing.
/// Deterministic models check every distinct window start (one for
/// diffusion, d for a circuit of d matchings) whose window fits in
/// [1, horizon]. Randomized models sample `trials` starts in [1, horizon]
/// and report an estimate. Throws horizon_exhausted when no length up to
/// the horizon works.
MixingEstimate estimate_mixing_time(const PatternSpec& spec, double epsilon,
                                    std::uint64_t horizon, std::uint64_t trials = 16);

}  // namespace plurality
