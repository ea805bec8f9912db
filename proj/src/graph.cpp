#include "plurality/graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <queue>
#include <set>
#include <string>

#include <Eigen/Eigenvalues>

#include "plurality/error.hpp"
#include "plurality/rng.hpp"

namespace plurality {

GraphKind parse_graph_kind(std::string_view name) {
  if (name == "complete" || name == "clique") return GraphKind::complete;
  if (name == "cycle") return GraphKind::cycle;
  if (name == "hypercube") return GraphKind::hypercube;
  if (name == "random_regular" || name == "random-regular") return GraphKind::random_regular;
  if (name == "torus") return GraphKind::torus;
  fail(ErrorCode::invalid_argument, "unknown graph kind '" + std::string(name) + "'");
}

std::string_view to_string(GraphKind kind) {
  switch (kind) {
    case GraphKind::complete: return "complete";
    case GraphKind::cycle: return "cycle";
    case GraphKind::hypercube: return "hypercube";
    case GraphKind::random_regular: return "random_regular";
    case GraphKind::torus: return "torus";
  }
  return "?";
}

Graph::Graph(std::size_t n, std::vector<Edge> edges) : n_(n), adjacency_(n) {
  for (Edge& e : edges) {
    require(e.u != e.v, "self-loop on node " + std::to_string(e.u));
    require(e.u < n && e.v < n, "edge endpoint out of range");
    e = make_edge(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end());
  require(std::adjacent_find(edges.begin(), edges.end()) == edges.end(), "duplicate edge");
  edges_ = std::move(edges);
  for (const Edge& e : edges_) {
    adjacency_[e.u].push_back(e.v);
    adjacency_[e.v].push_back(e.u);
  }
  for (auto& adj : adjacency_) {
    std::sort(adj.begin(), adj.end());
    max_degree_ = std::max(max_degree_, static_cast<std::uint32_t>(adj.size()));
  }
}

bool Graph::is_regular() const noexcept {
  return std::all_of(adjacency_.begin(), adjacency_.end(),
                     [&](const auto& adj) { return adj.size() == max_degree_; });
}

bool Graph::is_connected() const {
  if (n_ == 0) return true;
  std::vector<char> seen(n_, 0);
  std::queue<NodeId> frontier;
  frontier.push(0);
  seen[0] = 1;
  std::size_t reached = 1;
  while (!frontier.empty()) {
    NodeId u = frontier.front();
    frontier.pop();
    for (NodeId v : adjacency_[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        ++reached;
        frontier.push(v);
      }
    }
  }
  return reached == n_;
}

bool Graph::has_edge(NodeId a, NodeId b) const {
  if (a >= n_ || b >= n_) return false;
  const auto& adj = adjacency_[a];
  return std::binary_search(adj.begin(), adj.end(), b);
}

namespace {

Graph complete_graph(std::size_t n) {
  std::vector<Edge> edges;
  edges.reserve(n * (n - 1) / 2);
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v) edges.push_back({u, v});
  return Graph(n, std::move(edges));
}

Graph cycle_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u) edges.push_back(make_edge(u, static_cast<NodeId>((u + 1) % n)));
  return Graph(n, std::move(edges));
}

Graph hypercube_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u)
    for (std::size_t bit = 1; bit < n; bit <<= 1) {
      NodeId v = u ^ static_cast<NodeId>(bit);
      if (u < v) edges.push_back({u, v});
    }
  return Graph(n, std::move(edges));
}

Graph torus_graph(std::size_t side) {
  std::vector<Edge> edges;
  auto id = [side](std::size_t r, std::size_t c) { return static_cast<NodeId>(r * side + c); };
  for (std::size_t r = 0; r < side; ++r)
    for (std::size_t c = 0; c < side; ++c) {
      edges.push_back(make_edge(id(r, c), id(r, (c + 1) % side)));
      edges.push_back(make_edge(id(r, c), id((r + 1) % side, c)));
    }
  return Graph(side * side, std::move(edges));
}

constexpr int kMaxPairingAttempts = 100000;

Graph random_regular_graph(std::size_t n, std::size_t d, std::uint64_t seed) {
  Rng rng(derive_seed(seed, {stream::graph}));
  std::vector<NodeId> points(n * d);
  for (std::size_t i = 0; i < points.size(); ++i) points[i] = static_cast<NodeId>(i / d);

  for (int attempt = 0; attempt < kMaxPairingAttempts; ++attempt) {
    std::shuffle(points.begin(), points.end(), rng);
    std::set<Edge> edges;
    bool simple = true;
    for (std::size_t i = 0; i < points.size() && simple; i += 2) {
      NodeId a = points[i], b = points[i + 1];
      if (a == b || !edges.insert(make_edge(a, b)).second) simple = false;
    }
    if (!simple) continue;
    Graph g(n, std::vector<Edge>(edges.begin(), edges.end()));
    if (g.is_connected()) return g;
  }
  fail(ErrorCode::generation_failure,
       "random_regular: no simple connected pairing after " +
           std::to_string(kMaxPairingAttempts) + " attempts");
}

}  // namespace

Graph build_graph(GraphKind kind, std::size_t n, std::size_t degree, std::uint64_t seed) {
  require(n >= 2, "graph needs n >= 2");
  switch (kind) {
    case GraphKind::complete:
      return complete_graph(n);
    case GraphKind::cycle:
      require(n >= 3, "cycle needs n >= 3");
      return cycle_graph(n);
    case GraphKind::hypercube:
      require(std::has_single_bit(n), "hypercube needs n to be a power of two");
      return hypercube_graph(n);
    case GraphKind::random_regular:
      require(degree >= 1 && degree < n, "random_regular needs 1 <= d < n");
      require((n * degree) % 2 == 0, "random_regular needs n*d even");
      require(degree >= 2 || n == 2, "random_regular with d = 1 is disconnected for n > 2");
      return random_regular_graph(n, degree, seed);
    case GraphKind::torus: {
      auto side = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
      require(side * side == n && side >= 3, "torus needs n = s*s with s >= 3");
      return torus_graph(side);
    }
  }
  fail(ErrorCode::invalid_argument, "unknown graph kind");
}

std::vector<double> lazy_diffusion_spectrum(const Graph& g) {
  const auto n = static_cast<Eigen::Index>(g.node_count());
  const double denom = 2.0 * g.max_degree();
  Eigen::MatrixXd P = Eigen::MatrixXd::Identity(n, n);
  if (g.max_degree() > 0) {
    for (const Edge& e : g.edges()) {
      P(e.u, e.v) = P(e.v, e.u) = 1.0 / denom;
      P(e.u, e.u) -= 1.0 / denom;
      P(e.v, e.v) -= 1.0 / denom;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(P, Eigen::EigenvaluesOnly);
  std::vector<double> values(solver.eigenvalues().data(),
                             solver.eigenvalues().data() + solver.eigenvalues().size());
  std::sort(values.begin(), values.end(), std::greater<>());
  return values;
}

double spectral_gap(const Graph& g) {
  if (!g.is_connected() || g.node_count() < 2)
    fail(ErrorCode::disconnected_graph, "spectral gap of a disconnected graph is 0");
  auto values = lazy_diffusion_spectrum(g);
  return 1.0 - values[1];
}

void write_edge_list(std::ostream& out, const Graph& g) {
  out << g.node_count() << ' ' << g.edge_count() << '\n';
  for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

Graph read_edge_list(std::istream& in) {
  std::size_t n = 0, m = 0;
  if (!(in >> n >> m)) fail(ErrorCode::io_error, "edge list: missing 'n m' header");
  std::vector<Edge> edges;
  edges.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    long long u = -1, v = -1;
    if (!(in >> u >> v)) fail(ErrorCode::io_error, "edge list: expected " + std::to_string(m) + " edges");
    require(u >= 0 && v >= 0, "edge list: negative node id");
    edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v)});
  }
  return Graph(n, std::move(edges));
}

}  // namespace plurality
