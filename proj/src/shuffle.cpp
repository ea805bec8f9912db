#include "plurality/shuffle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "plurality/error.hpp"

namespace plurality::shuffle {

std::uint64_t required_gamma(std::size_t n, double alpha, std::uint64_t T, double c,
                             std::uint32_t delta) {
  require(n >= 2, "n must be at least 2");
  require(alpha > 0.0 && alpha <= 1.0, "α must lie in (0, 1]");
  require(T >= 1 && c > 0.0 && delta >= 1, "T, c and Δ must be positive");
  const double raw = c * std::log2(static_cast<double>(n)) / (alpha * alpha * static_cast<double>(T));
  // 1e-9 absorbs rounding noise on exact products such as 12·4.
  const auto tokens = static_cast<std::uint64_t>(std::ceil(raw - 1e-9));
  const std::uint64_t unit = 2ULL * delta;
  return std::max(unit, (tokens + unit - 1) / unit * unit);
}

std::vector<NodeState> initial_states(const Config& cfg) {
  require(cfg.k >= 1, "k must be at least 1");
  require(cfg.gamma >= 1, "γ must be at least 1");
  std::vector<NodeState> states(cfg.assignment.size());
  for (std::size_t u = 0; u < states.size(); ++u) {
    const Opinion o = cfg.assignment[u];
    require(o < cfg.k, "opinion label out of range");
    NodeState& s = states[u];
    s.opinion = o;
    s.tokens.assign(cfg.k, 0);
    s.tokens[o] = cfg.gamma;
    s.dom = o;
    s.plurality_guess = o;
  }
  return states;
}

namespace {

// Removes one uniformly chosen token from `pool` and returns its label.
Opinion draw_token(std::vector<std::uint64_t>& pool, std::uint64_t remaining, Rng& rng) {
  std::uint64_t r = std::uniform_int_distribution<std::uint64_t>(0, remaining - 1)(rng);
  for (std::size_t label = 0;; ++label) {
    if (r < pool[label]) {
      --pool[label];
      return static_cast<Opinion>(label);
    }
    r -= pool[label];
  }
}

}  // namespace

void shuffle_step(std::vector<NodeState>& states, const TransitionMatrix& P, Rng& rng) {
  const std::size_t n = states.size();
  require(P.size() == n, "transition matrix size differs from node count");
  if (n == 0) return;
  const std::size_t k = states.front().tokens.size();
  const std::int64_t denom = P.denominator();

  std::vector<std::vector<std::uint64_t>> incoming(n, std::vector<std::uint64_t>(k, 0));
  for (std::size_t u = 0; u < n; ++u) {
    std::vector<std::uint64_t>& pool = states[u].tokens;
    std::uint64_t remaining = std::accumulate(pool.begin(), pool.end(), std::uint64_t{0});
    const std::uint64_t gamma = remaining;
    // Drawing the neighbor slots without replacement and leaving the rest
    // behind is a uniform permutation split into slots.
    for (std::size_t v = 0; v < n; ++v) {
      if (v == u) continue;
      const std::int64_t num = P.numerator(static_cast<NodeId>(u), static_cast<NodeId>(v));
      if (num == 0) continue;
      const auto scaled = static_cast<std::uint64_t>(num) * gamma;
      if (scaled % static_cast<std::uint64_t>(denom) != 0)
        fail(ErrorCode::invalid_argument, "slot size P[u,v]·γ is not integral (γ = " +
                                              std::to_string(gamma) + ", 2Δ = " +
                                              std::to_string(denom) + ")");
      const std::uint64_t slot = scaled / static_cast<std::uint64_t>(denom);
      for (std::uint64_t i = 0; i < slot; ++i, --remaining)
        ++incoming[v][draw_token(pool, remaining, rng)];
    }
  }
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t label = 0; label < k; ++label) states[u].tokens[label] += incoming[u][label];
}

void broadcast_step(std::vector<NodeState>& states, const ActiveEdgeSet& active) {
  const std::size_t n = states.size();
  std::vector<std::size_t> best(n);
  std::iota(best.begin(), best.end(), std::size_t{0});
  auto better = [&](std::size_t a, std::size_t b) {
    const NodeState& x = states[a];
    const NodeState& y = states[b];
    if (x.est != y.est) return x.est > y.est;
    if (x.dom != y.dom) return x.dom < y.dom;
    return a < b;
  };
  for (const Edge& e : active.active) {
    if (better(e.v, best[e.u])) best[e.u] = e.v;
    if (better(e.u, best[e.v])) best[e.v] = e.u;
  }
  std::vector<std::pair<Opinion, std::uint64_t>> adopted(n);
  for (std::size_t u = 0; u < n; ++u) adopted[u] = {states[best[u]].dom, states[best[u]].est};
  for (std::size_t u = 0; u < n; ++u) std::tie(states[u].dom, states[u].est) = adopted[u];
}

void update_step(std::vector<NodeState>& states) {
  for (NodeState& s : states) {
    s.counter += s.tokens[s.opinion];
    s.plurality_guess = s.dom;
    s.dom = s.opinion;
    s.est = s.counter;
  }
}

std::uint64_t run_length(const Config& cfg) {
  const auto updates = static_cast<std::uint64_t>(std::ceil(cfg.c * static_cast<double>(cfg.T)));
  return (updates + 1) * cfg.t_mix;
}

Outcome run(const Config& cfg, const PatternSpec& spec, std::uint64_t seed) {
  const std::size_t n = spec.node_count();
  require(cfg.assignment.size() == n, "assignment size differs from node count");
  require(cfg.t_mix >= 1 && cfg.T >= 1 && cfg.c > 0, "t_mix, T and c must be positive");
  const std::uint32_t delta = max_active_degree(spec);
  require(cfg.gamma % (2ULL * delta) == 0, "γ must be a multiple of 2Δ");

  const OpinionCounts counts = count_opinions(cfg.assignment, cfg.k);
  const Opinion winner = plurality_of(counts);
  const auto check_after = static_cast<std::uint64_t>(std::ceil(cfg.c * static_cast<double>(cfg.T)));

  auto states = initial_states(cfg);
  Rng rng(derive_seed(seed, {stream::protocol}));
  ConsensusTracker tracker;
  auto everyone_correct = [&] {
    return std::all_of(states.begin(), states.end(),
                       [&](const NodeState& s) { return s.plurality_guess == winner; });
  };
  tracker.observe(0, everyone_correct());

  Outcome out;
  const std::uint64_t rounds = run_length(cfg);
  for (std::uint64_t t = 1; t <= rounds; ++t) {
    const ActiveEdgeSet active = generate(spec, t);
    shuffle_step(states, transition_from_active(active, n, delta), rng);
    broadcast_step(states, active);
    if (t % cfg.t_mix == 0) {
      update_step(states);
      if (++out.updates == check_after)
        for (const NodeState& s : states) out.counters_at_check.push_back(s.counter);
    }
    tracker.observe(t, everyone_correct());
  }

  for (const NodeState& s : states) out.counters.push_back(s.counter);
  RunRecord& rec = out.record;
  rec.seed = seed;
  rec.n = n;
  rec.k = cfg.k;
  rec.alpha = initial_bias(counts);
  rec.gamma = cfg.gamma;
  rec.model = std::string(to_string(spec.model));
  rec.protocol = "shuffle";
  rec.t_mix = cfg.t_mix;
  rec.rounds = rounds;
  rec.consensus_round = tracker.consensus_round();
  rec.all_correct = everyone_correct();
  rec.memory_bits = memory_bits(n, cfg.k, rec.alpha, cfg.T, cfg.t_mix);
  return out;
}

std::uint64_t memory_bits(std::size_t n, std::size_t k, double alpha, std::uint64_t T,
                          std::uint64_t t_mix) {
  require(n >= 2 && k >= 1 && alpha > 0 && T >= 1 && t_mix >= 1,
          "memory formula needs positive parameters");
  const double log_n = std::log2(static_cast<double>(n));
  const double a2 = alpha * alpha;
  const double tokens = 12.0 * log_n / (a2 * static_cast<double>(T)) + 4.0;
  const double bits = tokens * std::log2(static_cast<double>(k)) +
                      4.0 * std::log2(12.0 * log_n / a2) +
                      std::log2(static_cast<double>(T) * static_cast<double>(t_mix));
  return static_cast<std::uint64_t>(std::ceil(bits));
}

}  // namespace plurality::shuffle
