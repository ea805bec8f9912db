#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

namespace plurality {

using NodeId = std::uint32_t;

/// Unordered node pair stored canonically with u < v.
struct Edge {
  NodeId u = 0;
  NodeId v = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

inline Edge make_edge(NodeId a, NodeId b) { return a < b ? Edge{a, b} : Edge{b, a}; }

enum class GraphKind { complete, cycle, hypercube, random_regular, torus };

GraphKind parse_graph_kind(std::string_view name);
std::string_view to_string(GraphKind kind);

/// Simple undirected graph. Edges are kept sorted and unique; degrees and
/// adjacency lists are derived once at construction.
class Graph {
 public:
  Graph() = default;
  /// Throws Error(invalid_argument) on self-loops, duplicates or ids >= n.
  Graph(std::size_t n, std::vector<Edge> edges);

  std::size_t node_count() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  std::span<const Edge> edges() const noexcept { return edges_; }
  std::uint32_t degree(NodeId u) const { return static_cast<std::uint32_t>(adjacency_[u].size()); }
  std::span<const NodeId> neighbors(NodeId u) const { return adjacency_[u]; }
  std::uint32_t max_degree() const noexcept { return max_degree_; }
  bool is_regular() const noexcept;
  bool is_connected() const;
  bool has_edge(NodeId a, NodeId b) const;

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<NodeId>> adjacency_;
  std::uint32_t max_degree_ = 0;
};

/// Builds a connected member of the requested family. `degree` is only
/// read for random_regular; `seed` only for random_regular.
///
/// Families: complete (n >= 2), cycle (n >= 3), hypercube (n a power of
/// two), random_regular (n*d even, 1 <= d < n; pairing model with
/// rejection, retried until simple and connected), torus (n = s*s with
/// s >= 3, 4-regular wrap-around grid with node id r*s + c).
Graph build_graph(GraphKind kind, std::size_t n, std::size_t degree = 0,
                  std::uint64_t seed = 0);

/// Spectrum of the lazy diffusion matrix I - D/(2Δ) + A/(2Δ), sorted
/// descending. Δ is the maximum degree.
std::vector<double> lazy_diffusion_spectrum(const Graph& g);

/// 1 - λ₂ of the lazy diffusion matrix. Throws disconnected_graph.
double spectral_gap(const Graph& g);

/// Edge-list text format: "n m" then m lines "u v", 0-based.
void write_edge_list(std::ostream& out, const Graph& g);
Graph read_edge_list(std::istream& in);

}  // namespace plurality
