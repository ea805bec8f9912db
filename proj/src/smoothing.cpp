#include "plurality/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "plurality/error.hpp"
#include "plurality/rng.hpp"

namespace plurality {

TransitionMatrix::TransitionMatrix(std::size_t n, std::uint32_t delta)
    : n_(n), delta_(delta), num_(n * n, 0) {
  require(delta >= 1, "Δ must be at least 1");
  for (std::size_t u = 0; u < n; ++u) num_[u * n + u] = denominator();
}

BigRational TransitionMatrix::exact(NodeId u, NodeId v) const {
  return BigRational(numerator(u, v), denominator());
}

Eigen::MatrixXd TransitionMatrix::to_dense() const {
  const auto n = static_cast<Eigen::Index>(n_);
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index u = 0; u < n; ++u)
    for (Eigen::Index v = 0; v < n; ++v)
      m(u, v) = (*this)(static_cast<NodeId>(u), static_cast<NodeId>(v));
  return m;
}

TransitionMatrix transition_from_active(const ActiveEdgeSet& active, std::size_t n,
                                        std::uint32_t delta) {
  TransitionMatrix P(n, delta);
  std::vector<std::uint32_t> active_degree(n, 0);
  for (const Edge& e : active.active) {
    require(e.u < n && e.v < n && e.u != e.v, "active edge out of range");
    P.num_[e.u * n + e.v] = 1;
    P.num_[e.v * n + e.u] = 1;
    ++active_degree[e.u];
    ++active_degree[e.v];
  }
  for (std::size_t u = 0; u < n; ++u) {
    if (active_degree[u] > delta)
      fail(ErrorCode::invalid_argument, "Δ = " + std::to_string(delta) +
                                            " is below the active degree " +
                                            std::to_string(active_degree[u]) + " of node " +
                                            std::to_string(u));
    P.num_[u * n + u] = P.denominator() - active_degree[u];
  }
  return P;
}

void multiply_by_transition(Eigen::MatrixXd& prod, const ActiveEdgeSet& active,
                            std::uint32_t delta) {
  if (active.active.empty()) return;
  const double w = 1.0 / (2.0 * delta);
  // Only columns of nodes touched by an active edge change.
  std::vector<Eigen::Index> touched;
  touched.reserve(active.active.size() * 2);
  for (const Edge& e : active.active) {
    touched.push_back(e.u);
    touched.push_back(e.v);
  }
  std::sort(touched.begin(), touched.end());
  touched.erase(std::unique(touched.begin(), touched.end()), touched.end());

  Eigen::MatrixXd old(prod.rows(), static_cast<Eigen::Index>(touched.size()));
  std::vector<Eigen::Index> slot(static_cast<std::size_t>(prod.cols()), -1);
  for (std::size_t i = 0; i < touched.size(); ++i) {
    old.col(static_cast<Eigen::Index>(i)) = prod.col(touched[i]);
    slot[static_cast<std::size_t>(touched[i])] = static_cast<Eigen::Index>(i);
  }
  // (Π·P)[:, v] = Π[:, v]·(1 − d(v)/(2Δ)) + Σ_{w ∈ N_t(v)} Π[:, w]/(2Δ)
  for (const Edge& e : active.active) {
    const auto cu = old.col(slot[e.u]);
    const auto cv = old.col(slot[e.v]);
    prod.col(e.u) += w * (cv - cu);
    prod.col(e.v) += w * (cu - cv);
  }
}

WindowProduct window_product(const PatternSpec& spec, std::uint64_t start, std::uint64_t end) {
  require(start >= 1 && start <= end, "window needs 1 <= start <= end");
  const auto n = static_cast<Eigen::Index>(spec.node_count());
  const std::uint32_t delta = max_active_degree(spec);
  WindowProduct w{start, end, Eigen::MatrixXd::Identity(n, n)};
  for (std::uint64_t t = start; t <= end; ++t)
    multiply_by_transition(w.product, generate(spec, t), delta);
  return w;
}

ExactMatrix exact_product(const std::vector<TransitionMatrix>& factors) {
  require(!factors.empty(), "empty product");
  const std::size_t n = factors.front().size();
  ExactMatrix prod(n, std::vector<BigRational>(n, BigRational(0)));
  for (std::size_t i = 0; i < n; ++i) prod[i][i] = 1;
  for (const TransitionMatrix& P : factors) {
    require(P.size() == n, "factor dimensions differ");
    ExactMatrix next(n, std::vector<BigRational>(n, BigRational(0)));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t m = 0; m < n; ++m) {
        if (prod[i][m] == 0) continue;
        for (std::size_t j = 0; j < n; ++j) {
          auto num = P.numerator(static_cast<NodeId>(m), static_cast<NodeId>(j));
          if (num != 0) next[i][j] += prod[i][m] * P.exact(static_cast<NodeId>(m), static_cast<NodeId>(j));
        }
      }
    prod = std::move(next);
  }
  return prod;
}

ExactMatrix exact_window_product(const PatternSpec& spec, std::uint64_t start, std::uint64_t end) {
  require(start >= 1 && start <= end, "window needs 1 <= start <= end");
  const std::uint32_t delta = max_active_degree(spec);
  std::vector<TransitionMatrix> factors;
  for (std::uint64_t t = start; t <= end; ++t)
    factors.push_back(transition_from_active(generate(spec, t), spec.node_count(), delta));
  return exact_product(factors);
}

double window_discrepancy(const Eigen::MatrixXd& product) {
  double best = 0.0;
  const Eigen::Index n = product.cols();
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = a + 1; b < n; ++b)
      best = std::max(best, 0.5 * (product.col(a) - product.col(b)).lpNorm<1>());
  return best;
}

double window_discrepancy(const WindowProduct& w) { return window_discrepancy(w.product); }

BigRational window_discrepancy(const ExactMatrix& product) {
  BigRational best = 0;
  const std::size_t n = product.size();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      BigRational sum = 0;
      for (std::size_t i = 0; i < n; ++i) sum += abs(product[i][a] - product[i][b]);
      sum /= 2;
      if (sum > best) best = sum;
    }
  return best;
}

bool is_smoothing(const PatternSpec& spec, std::uint64_t t1, std::uint64_t t2, double epsilon) {
  return window_discrepancy(window_product(spec, t1, t2)) <= epsilon;
}

double default_epsilon(std::size_t n) { return std::pow(static_cast<double>(n), -5.0); }

namespace {

struct ScanResult {
  bool hit = false;
  std::uint64_t length = 0;
  double discrepancy = 1.0;
};

// Extends the window one factor at a time until the discrepancy drops to ε.
// Discrepancy never increases as the window grows, so the first hit is the
// smallest smoothing length for this start.
ScanResult scan_window(const PatternSpec& spec, std::uint64_t start, std::uint64_t max_length,
                       double epsilon, std::uint32_t delta) {
  const auto n = static_cast<Eigen::Index>(spec.node_count());
  Eigen::MatrixXd prod = Eigen::MatrixXd::Identity(n, n);
  ScanResult r;
  for (std::uint64_t len = 1; len <= max_length; ++len) {
    multiply_by_transition(prod, generate(spec, start + len - 1), delta);
    r.discrepancy = window_discrepancy(prod);
    if (r.discrepancy <= epsilon) {
      r.hit = true;
      r.length = len;
      return r;
    }
  }
  return r;
}

}  // namespace

MixingEstimate estimate_mixing_time(const PatternSpec& spec, double epsilon,
                                    std::uint64_t horizon, std::uint64_t trials) {
  require(horizon >= 1, "horizon must be at least 1");
  require(epsilon > 0, "ε must be positive");
  const std::uint32_t delta = max_active_degree(spec);

  std::vector<std::uint64_t> starts;
  MixingEstimate est;
  if (spec.model == Model::diffusion) {
    starts = {1};
  } else if (spec.model == Model::balancing_circuit) {
    const auto period = static_cast<std::uint64_t>(spec.matchings.size());
    for (std::uint64_t s = 1; s <= std::min(period, horizon); ++s) starts.push_back(s);
  } else {
    require(trials >= 1, "randomized patterns need at least one trial");
    est.estimated = true;
    Rng rng(derive_seed(spec.seed, {stream::mixing}));
    std::uniform_int_distribution<std::uint64_t> offset(1, horizon);
    for (std::uint64_t i = 0; i < trials; ++i) starts.push_back(offset(rng));
  }

  for (std::uint64_t start : starts) {
    // Deterministic windows must fit inside [1, horizon]; sampled windows
    // may run past their start by up to `horizon` factors.
    const std::uint64_t max_length = est.estimated ? horizon : horizon - start + 1;
    ScanResult r = scan_window(spec, start, max_length, epsilon, delta);
    if (!r.hit)
      fail(ErrorCode::horizon_exhausted,
           "no ε-smoothing window up to the horizon (start " + std::to_string(start) +
               ", best discrepancy " + std::to_string(r.discrepancy) + ")");
    est.t_mix = std::max(est.t_mix, r.length);
    ++est.windows;
  }
  // Worst discrepancy at the chosen length, for the report.
  for (std::uint64_t start : starts) {
    auto w = window_product(spec, start, start + est.t_mix - 1);
    est.worst_discrepancy = std::max(est.worst_discrepancy, window_discrepancy(w));
  }
  return est;
}

}  // namespace plurality
