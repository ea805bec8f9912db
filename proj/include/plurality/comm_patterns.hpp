#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string_view>
#include <vector>

#include "plurality/graph.hpp"

namespace plurality {

enum class Model { diffusion, random_matching, balancing_circuit, sequential };

Model parse_model(std::string_view name);
std::string_view to_string(Model model);
bool is_randomized(Model model);

using Matching = std::vector<Edge>;

/// Active edges of one round. Self-loops are implicit and never stored.
struct ActiveEdgeSet {
  std::uint64_t round = 0;
  std::vector<Edge> active;
};

/// A communication pattern (M_t). Rounds are regenerated on demand from
/// (seed, t), so rounds can be requested in any order.
struct PatternSpec {
  Model model = Model::diffusion;
  std::shared_ptr<const Graph> graph;
  std::vector<Matching> matchings;     // balancing_circuit only
  double matching_probability = 1.0;   // random_matching only
  std::uint64_t seed = 0;

  std::size_t node_count() const { return graph->node_count(); }
};

/// Builds and validates a pattern. Balancing circuits need a non-empty list
/// of perfect matchings of `graph`.
PatternSpec make_pattern(Model model, std::shared_ptr<const Graph> graph,
                         std::uint64_t seed, double matching_probability = 1.0,
                         std::vector<Matching> matchings = {});

/// Throws invalid_argument when the pattern breaks its invariants.
void validate(const PatternSpec& spec);

/// Active edges at round t (t >= 1).
ActiveEdgeSet generate(const PatternSpec& spec, std::uint64_t t);

/// A-priori bound Δ on the active degree for the model.
std::uint32_t max_active_degree(const PatternSpec& spec);

struct PminEstimate {
  double pmin = 0.0;
  std::uint64_t samples = 0;
};

/// Minimum per-edge activation frequency over rounds 1..samples.
/// random_matching only.
PminEstimate empirical_pmin(const PatternSpec& spec, std::uint64_t samples);

/// Perfect-matching decomposition used for balancing circuits on the
/// families where one is known from the node numbering: complete (even n,
/// round-robin 1-factorization), cycle (even n), hypercube (dimension
/// classes), torus (even side). Throws invalid_argument otherwise.
std::vector<Matching> standard_circuit_matchings(GraphKind kind, const Graph& g);

bool is_perfect_matching(const Graph& g, const Matching& m);

/// Reads one matching in edge-list format and checks it is a perfect
/// matching of `g`.
Matching read_matching(std::istream& in, const Graph& g);

}  // namespace plurality
