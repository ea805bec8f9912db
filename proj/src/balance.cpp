#include "plurality/balance.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include "plurality/error.hpp"

namespace plurality::balance {

std::uint64_t required_gamma(std::uint64_t g, double alpha, std::size_t n) {
  require(g >= 1, "target discrepancy g must be at least 1");
  require(alpha > 0.0 && alpha <= 1.0, "α must lie in (0, 1]");
  const double raw = 3.0 * static_cast<double>(g) / alpha;
  const auto gamma = static_cast<std::uint64_t>(std::ceil(raw - 1e-9));
  const long double cap = std::pow(static_cast<long double>(n), 5.0L);
  if (static_cast<long double>(gamma) > cap)
    fail(ErrorCode::invalid_argument,
         "γ = " + std::to_string(gamma) + " exceeds n^5; the balancing guarantee does not apply");
  return gamma;
}

std::uint64_t default_target_discrepancy(Model model, const Graph& g) {
  if (model != Model::diffusion) return 1;
  const double d = g.max_degree();
  return static_cast<std::uint64_t>(std::ceil(std::sqrt(d * std::log2(static_cast<double>(g.node_count())))));
}

RoundingSplit vertex_based_rounding(std::uint64_t load, std::uint32_t active_degree,
                                    std::uint32_t delta) {
  require(active_degree <= delta, "active degree exceeds Δ");
  const std::uint64_t denom = 2ULL * delta;
  RoundingSplit s;
  s.per_neighbor = load / denom;
  s.keep = static_cast<std::uint64_t>(static_cast<unsigned __int128>(load) * (denom - active_degree) / denom);
  s.excess = load - s.per_neighbor * active_degree - s.keep;
  return s;
}

std::vector<NodeState> initial_states(const Config& cfg) {
  require(cfg.k >= 1 && cfg.gamma >= 1, "k and γ must be positive");
  std::vector<NodeState> states(cfg.assignment.size());
  for (std::size_t u = 0; u < states.size(); ++u) {
    require(cfg.assignment[u] < cfg.k, "opinion label out of range");
    states[u].load.assign(cfg.k, 0);
    states[u].load[cfg.assignment[u]] = cfg.gamma;
    states[u].plurality_guess = cfg.assignment[u];
  }
  return states;
}

void step(std::vector<NodeState>& states, const TransitionMatrix& P,
          const ActiveEdgeSet& active, Rng& rng) {
  const std::size_t n = states.size();
  require(P.size() == n, "transition matrix size differs from node count");
  if (n == 0) return;
  const std::size_t k = states.front().load.size();
  const std::uint32_t delta = P.delta();
  const std::uint64_t denom = 2ULL * delta;

  std::vector<std::vector<NodeId>> neighbors(n);
  for (const Edge& e : active.active) {
    neighbors[e.u].push_back(e.v);
    neighbors[e.v].push_back(e.u);
  }

  std::vector<std::vector<std::uint64_t>> next(n, std::vector<std::uint64_t>(k, 0));
  std::vector<std::size_t> order;
  std::uniform_int_distribution<std::uint64_t> offset(0, denom - 1);
  for (std::size_t u = 0; u < n; ++u) {
    const auto& nbrs = neighbors[u];
    const auto d = static_cast<std::uint32_t>(nbrs.size());
    for (std::size_t i = 0; i < k; ++i) {
      const std::uint64_t load = states[u].load[i];
      if (load == 0) continue;
      const RoundingSplit split = vertex_based_rounding(load, d, delta);
      for (NodeId v : nbrs) next[v][i] += split.per_neighbor;
      next[u][i] += split.keep;
      if (split.excess == 0) continue;

      // Systematic sampling in units of 1/(2Δ): every neighbor has weight
      // r = load mod 2Δ, u has the remaining weight, and the weights add up
      // to excess·2Δ. Points offset + j·2Δ (j < excess) select items, so
      // each item is chosen with probability weight/(2Δ) and at most once.
      const std::uint64_t r = load % denom;
      const std::uint64_t self_weight = (denom - (r * d) % denom) % denom;
      order.resize(d + 1);
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::shuffle(order.begin(), order.end(), rng);
      const std::uint64_t start = offset(rng);
      std::uint64_t pos = 0, placed = 0;
      for (std::size_t item : order) {
        const std::uint64_t w = item == d ? self_weight : r;
        const std::uint64_t first = pos <= start ? start : start + (pos - start + denom - 1) / denom * denom;
        if (w > 0 && first < pos + w && first < split.excess * denom) {
          ++placed;
          ++next[item == d ? u : nbrs[item]][i];
        }
        pos += w;
      }
      if (placed != split.excess)
        fail(ErrorCode::invalid_argument, "excess placement lost tokens");
    }
  }
  for (std::size_t u = 0; u < n; ++u) {
    states[u].load = std::move(next[u]);
    states[u].plurality_guess = plurality_guess(states[u]);
  }
}

Opinion plurality_guess(const NodeState& state) {
  return static_cast<Opinion>(std::max_element(state.load.begin(), state.load.end()) -
                              state.load.begin());
}

std::vector<std::uint64_t> discrepancies(const std::vector<NodeState>& states, std::size_t k) {
  std::vector<std::uint64_t> out(k, 0);
  if (states.empty()) return out;
  for (std::size_t i = 0; i < k; ++i) {
    auto [lo, hi] = std::minmax_element(states.begin(), states.end(),
                                        [i](const NodeState& a, const NodeState& b) {
                                          return a.load[i] < b.load[i];
                                        });
    out[i] = hi->load[i] - lo->load[i];
  }
  return out;
}

Outcome run(const Config& cfg, const PatternSpec& spec, std::uint64_t seed) {
  const std::size_t n = spec.node_count();
  require(cfg.assignment.size() == n, "assignment size differs from node count");
  require(cfg.g >= 1, "target discrepancy g must be at least 1");
  const std::uint32_t delta = max_active_degree(spec);
  const OpinionCounts counts = count_opinions(cfg.assignment, cfg.k);
  const Opinion winner = plurality_of(counts);

  auto states = initial_states(cfg);
  Rng rng(derive_seed(seed, {stream::protocol}));
  ConsensusTracker tracker;
  Outcome out;

  auto everyone_correct = [&] {
    return std::all_of(states.begin(), states.end(),
                       [&](const NodeState& s) { return s.plurality_guess == winner; });
  };
  auto balanced = [&] {
    auto disc = discrepancies(states, cfg.k);
    return std::all_of(disc.begin(), disc.end(), [&](std::uint64_t x) { return x <= cfg.g; });
  };

  std::uint64_t t = 0;
  for (;; ++t) {
    if (t > 0) {
      const ActiveEdgeSet active = generate(spec, t);
      step(states, transition_from_active(active, n, delta), active, rng);
    }
    const bool correct = everyone_correct();
    tracker.observe(t, correct);
    if (balanced()) {
      out.reached_target = true;
      out.tau = t;
      out.implication_held = correct;
      break;
    }
    if (t >= cfg.horizon) break;
  }

  RunRecord& rec = out.record;
  rec.seed = seed;
  rec.n = n;
  rec.k = cfg.k;
  rec.alpha = initial_bias(counts);
  rec.gamma = cfg.gamma;
  rec.model = std::string(to_string(spec.model));
  rec.protocol = "balance";
  rec.rounds = t;
  rec.consensus_round = tracker.consensus_round();
  rec.all_correct = everyone_correct();
  rec.memory_bits = memory_bits(cfg.k, cfg.gamma);
  return out;
}

std::uint64_t memory_bits(std::size_t k, std::uint64_t gamma) {
  require(gamma >= 1, "γ must be at least 1");
  return k * static_cast<std::uint64_t>(std::bit_width(gamma));
}

}  // namespace plurality::balance
