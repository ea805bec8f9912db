#include "plurality/comm_patterns.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <numeric>
#include <string>

#include "plurality/error.hpp"
#include "plurality/rng.hpp"

namespace plurality {

Model parse_model(std::string_view name) {
  if (name == "diffusion") return Model::diffusion;
  if (name == "random_matching" || name == "random-matching") return Model::random_matching;
  if (name == "balancing_circuit" || name == "balancing-circuit") return Model::balancing_circuit;
  if (name == "sequential") return Model::sequential;
  fail(ErrorCode::invalid_argument, "unknown model '" + std::string(name) + "'");
}

std::string_view to_string(Model model) {
  switch (model) {
    case Model::diffusion: return "diffusion";
    case Model::random_matching: return "random_matching";
    case Model::balancing_circuit: return "balancing_circuit";
    case Model::sequential: return "sequential";
  }
  return "?";
}

bool is_randomized(Model model) {
  return model == Model::random_matching || model == Model::sequential;
}

bool is_perfect_matching(const Graph& g, const Matching& m) {
  std::vector<char> covered(g.node_count(), 0);
  for (const Edge& e : m) {
    if (!g.has_edge(e.u, e.v) || covered[e.u] || covered[e.v]) return false;
    covered[e.u] = covered[e.v] = 1;
  }
  return std::all_of(covered.begin(), covered.end(), [](char c) { return c != 0; });
}

void validate(const PatternSpec& spec) {
  require(spec.graph != nullptr, "pattern needs a graph");
  require(spec.graph->edge_count() > 0, "pattern needs a graph with at least one edge");
  switch (spec.model) {
    case Model::random_matching:
      require(spec.matching_probability > 0.0 && spec.matching_probability <= 1.0,
              "matching probability must lie in (0, 1]");
      break;
    case Model::balancing_circuit:
      require(spec.graph->node_count() % 2 == 0, "balancing circuit needs even n");
      require(!spec.matchings.empty(), "balancing circuit needs at least one matching");
      for (const Matching& m : spec.matchings)
        require(is_perfect_matching(*spec.graph, m),
                "balancing circuit matching is not a perfect matching of the graph");
      break;
    default:
      break;
  }
}

PatternSpec make_pattern(Model model, std::shared_ptr<const Graph> graph, std::uint64_t seed,
                         double matching_probability, std::vector<Matching> matchings) {
  PatternSpec spec;
  spec.model = model;
  spec.graph = std::move(graph);
  spec.seed = seed;
  spec.matching_probability = matching_probability;
  for (Matching& m : matchings) {
    for (Edge& e : m) e = make_edge(e.u, e.v);
    std::sort(m.begin(), m.end());
  }
  spec.matchings = std::move(matchings);
  validate(spec);
  return spec;
}

ActiveEdgeSet generate(const PatternSpec& spec, std::uint64_t t) {
  require(t >= 1, "rounds start at t = 1");
  const Graph& g = *spec.graph;
  ActiveEdgeSet out;
  out.round = t;
  switch (spec.model) {
    case Model::diffusion:
      out.active.assign(g.edges().begin(), g.edges().end());
      break;
    case Model::balancing_circuit:
      out.active = spec.matchings[t % spec.matchings.size()];
      break;
    case Model::sequential: {
      Rng rng(derive_seed(spec.seed, {stream::pattern, t}));
      std::uniform_int_distribution<std::size_t> pick(0, g.edge_count() - 1);
      out.active.push_back(g.edges()[pick(rng)]);
      break;
    }
    case Model::random_matching: {
      Rng rng(derive_seed(spec.seed, {stream::pattern, t}));
      std::vector<std::size_t> order(g.edge_count());
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::shuffle(order.begin(), order.end(), rng);
      std::bernoulli_distribution accept(spec.matching_probability);
      std::vector<char> matched(g.node_count(), 0);
      for (std::size_t idx : order) {
        const Edge& e = g.edges()[idx];
        if (matched[e.u] || matched[e.v]) continue;
        if (!accept(rng)) continue;
        matched[e.u] = matched[e.v] = 1;
        out.active.push_back(e);
      }
      std::sort(out.active.begin(), out.active.end());
      break;
    }
  }
  return out;
}

std::uint32_t max_active_degree(const PatternSpec& spec) {
  if (spec.model == Model::diffusion) return spec.graph->max_degree();
  return 1;
}

PminEstimate empirical_pmin(const PatternSpec& spec, std::uint64_t samples) {
  require(spec.model == Model::random_matching, "p_min is defined for random_matching only");
  require(samples > 0, "p_min needs at least one sample");
  const Graph& g = *spec.graph;
  std::vector<std::uint64_t> hits(g.edge_count(), 0);
  for (std::uint64_t t = 1; t <= samples; ++t) {
    for (const Edge& e : generate(spec, t).active) {
      auto it = std::lower_bound(g.edges().begin(), g.edges().end(), e);
      ++hits[static_cast<std::size_t>(it - g.edges().begin())];
    }
  }
  auto least = *std::min_element(hits.begin(), hits.end());
  return {static_cast<double>(least) / static_cast<double>(samples), samples};
}

std::vector<Matching> standard_circuit_matchings(GraphKind kind, const Graph& g) {
  const std::size_t n = g.node_count();
  require(n % 2 == 0, "balancing circuit needs even n");
  std::vector<Matching> out;
  switch (kind) {
    case GraphKind::complete: {
      // Round-robin 1-factorization: node n-1 is the pivot.
      const auto m = static_cast<NodeId>(n - 1);
      for (NodeId r = 0; r < m; ++r) {
        Matching match{make_edge(m, r)};
        for (NodeId i = 1; i < n / 2; ++i)
          match.push_back(make_edge((r + i) % m, (r + m - i) % m));
        out.push_back(std::move(match));
      }
      break;
    }
    case GraphKind::cycle: {
      Matching even, odd;
      for (NodeId i = 0; i < n; i += 2) {
        even.push_back(make_edge(i, i + 1));
        odd.push_back(make_edge(i + 1, static_cast<NodeId>((i + 2) % n)));
      }
      out = {even, odd};
      break;
    }
    case GraphKind::hypercube:
      for (std::size_t bit = 1; bit < n; bit <<= 1) {
        Matching match;
        for (NodeId u = 0; u < n; ++u)
          if ((u & bit) == 0) match.push_back({u, static_cast<NodeId>(u | bit)});
        out.push_back(std::move(match));
      }
      break;
    case GraphKind::torus: {
      auto side = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
      require(side * side == n && side % 2 == 0, "torus circuit needs an even side length");
      auto id = [side](std::size_t r, std::size_t c) { return static_cast<NodeId>(r * side + c); };
      for (std::size_t parity = 0; parity < 2; ++parity) {
        Matching horizontal, vertical;
        for (std::size_t r = 0; r < side; ++r)
          for (std::size_t c = parity; c < side; c += 2) {
            horizontal.push_back(make_edge(id(r, c), id(r, (c + 1) % side)));
            vertical.push_back(make_edge(id(c, r), id((c + 1) % side, r)));
          }
        out.push_back(std::move(horizontal));
        out.push_back(std::move(vertical));
      }
      break;
    }
    case GraphKind::random_regular:
      fail(ErrorCode::invalid_argument,
           "no standard matching decomposition for random_regular; load matchings from files");
  }
  for (Matching& m : out) {
    std::sort(m.begin(), m.end());
    require(is_perfect_matching(g, m), "graph does not match its family's numbering");
  }
  return out;
}

Matching read_matching(std::istream& in, const Graph& g) {
  Graph m = read_edge_list(in);
  require(m.node_count() == g.node_count(), "matching file node count differs from graph");
  Matching match(m.edges().begin(), m.edges().end());
  require(is_perfect_matching(g, match), "matching file is not a perfect matching of the graph");
  return match;
}

}  // namespace plurality
