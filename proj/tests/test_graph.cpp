#include <doctest.h>

#include <sstream>

#include "plurality/error.hpp"
#include "plurality/graph.hpp"

using namespace plurality;

TEST_CASE("complete graph on four nodes") {
  const Graph g = build_graph(GraphKind::complete, 4);
  CHECK(g.edge_count() == 6);
  for (NodeId u = 0; u < 4; ++u) CHECK(g.degree(u) == 3);
  CHECK(g.is_regular());
  CHECK(g.is_connected());
}

TEST_CASE("cycle on five nodes") {
  const Graph g = build_graph(GraphKind::cycle, 5);
  CHECK(g.edge_count() == 5);
  for (NodeId u = 0; u < 5; ++u) CHECK(g.degree(u) == 2);
  CHECK(g.has_edge(4, 0));
}

TEST_CASE("random regular graph is simple, regular and connected") {
  const Graph g = build_graph(GraphKind::random_regular, 8, 3, 1);
  std::size_t sum = 0;
  for (NodeId u = 0; u < 8; ++u) sum += g.degree(u);
  CHECK(sum == 24);
  CHECK(g.is_regular());
  CHECK(g.is_connected());
  CHECK(g.edge_count() == 12);
  CHECK(build_graph(GraphKind::random_regular, 8, 3, 1).edges().size() == 12);
}

TEST_CASE("random regular generation is seed-deterministic") {
  const Graph a = build_graph(GraphKind::random_regular, 20, 4, 7);
  const Graph b = build_graph(GraphKind::random_regular, 20, 4, 7);
  CHECK(std::equal(a.edges().begin(), a.edges().end(), b.edges().begin(), b.edges().end()));
}

TEST_CASE("hypercube and torus") {
  const Graph h = build_graph(GraphKind::hypercube, 16);
  CHECK(h.edge_count() == 32);
  CHECK(h.max_degree() == 4);
  const Graph t = build_graph(GraphKind::torus, 16);
  CHECK(t.edge_count() == 32);
  CHECK(t.is_regular());
  CHECK(t.max_degree() == 4);
}

TEST_CASE("invalid parameters are rejected") {
  CHECK_THROWS_AS(build_graph(GraphKind::hypercube, 6), Error);
  CHECK_THROWS_AS(build_graph(GraphKind::torus, 10), Error);
  CHECK_THROWS_AS(build_graph(GraphKind::cycle, 2), Error);
  CHECK_THROWS_AS(build_graph(GraphKind::random_regular, 7, 3, 1), Error);
  CHECK_THROWS_AS(Graph(3, {Edge{1, 1}}), Error);
  CHECK_THROWS_AS(Graph(3, {Edge{0, 1}, Edge{0, 1}}), Error);
  CHECK_THROWS_AS(Graph(3, {Edge{0, 3}}), Error);
}

// Adjacency spectra: K_4 {3,−1,−1,−1}, C_4 {2,0,0,−2}; the lazy matrix is
// I − D/(2Δ) + A/(2Δ), so λ₂ = 1 − (d − μ₂)/(2Δ).
TEST_CASE("spectral gap of small graphs") {
  CHECK(spectral_gap(build_graph(GraphKind::complete, 4)) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(spectral_gap(build_graph(GraphKind::cycle, 4)) == doctest::Approx(0.5).epsilon(1e-12));
  // K_2: P = [[1/2,1/2],[1/2,1/2]], eigenvalues {1, 0}.
  CHECK(spectral_gap(build_graph(GraphKind::complete, 2)) == doctest::Approx(1.0).epsilon(1e-12));
  const auto spec = lazy_diffusion_spectrum(build_graph(GraphKind::complete, 4));
  REQUIRE(spec.size() == 4);
  CHECK(spec[0] == doctest::Approx(1.0));
  CHECK(spec[1] == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("disconnected graph has no spectral gap") {
  const Graph g(4, {Edge{0, 1}, Edge{2, 3}});
  CHECK_FALSE(g.is_connected());
  try {
    spectral_gap(g);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::disconnected_graph);
  }
}

TEST_CASE("edge list round trip") {
  const Graph g = build_graph(GraphKind::random_regular, 10, 3, 4);
  std::stringstream ss;
  write_edge_list(ss, g);
  const Graph back = read_edge_list(ss);
  CHECK(back.node_count() == 10);
  CHECK(std::equal(g.edges().begin(), g.edges().end(), back.edges().begin(), back.edges().end()));
}

TEST_CASE("malformed edge list") {
  std::stringstream ss("3 2\n0 1\n");
  try {
    read_edge_list(ss);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK((e.code() == ErrorCode::io_error || e.code() == ErrorCode::invalid_argument));
  }
}
