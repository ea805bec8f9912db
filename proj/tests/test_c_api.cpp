#include <doctest.h>

#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "plurality/plurality.h"

TEST_CASE("graph handles") {
  plc_graph* g = nullptr;
  REQUIRE(plc_graph_build("complete", 4, 0, 0, &g) == PLC_OK);
  CHECK(plc_graph_node_count(g) == 4);
  CHECK(plc_graph_edge_count(g) == 6);
  double gap = 0;
  CHECK(plc_graph_spectral_gap(g, &gap) == PLC_OK);
  CHECK(gap == doctest::Approx(2.0 / 3.0));
  plc_graph_free(g);
}

TEST_CASE("errors map to status codes") {
  plc_graph* g = nullptr;
  CHECK(plc_graph_build("hypercube", 6, 0, 0, &g) == PLC_ERR_INVALID_ARGUMENT);
  CHECK(g == nullptr);
  CHECK(std::strlen(plc_last_error()) > 0);
  CHECK(plc_graph_build("blob", 6, 0, 0, &g) == PLC_ERR_INVALID_ARGUMENT);
  CHECK(plc_graph_build(nullptr, 6, 0, 0, &g) == PLC_ERR_INVALID_ARGUMENT);
  CHECK(plc_graph_read("/nonexistent/graph.txt", &g) == PLC_ERR_IO);
}

TEST_CASE("patterns and mixing time") {
  plc_graph* g = nullptr;
  REQUIRE(plc_graph_build("complete", 4, 0, 0, &g) == PLC_OK);
  plc_pattern* p = nullptr;
  REQUIRE(plc_pattern_create(g, "diffusion", 0, 1.0, &p) == PLC_OK);
  uint32_t delta = 0;
  CHECK(plc_pattern_max_active_degree(p, &delta) == PLC_OK);
  CHECK(delta == 3);

  size_t count = 0;
  CHECK(plc_pattern_active_edges(p, 1, nullptr, 0, &count) == PLC_ERR_INVALID_ARGUMENT);
  CHECK(count == 6);
  std::vector<uint32_t> pairs(2 * count);
  CHECK(plc_pattern_active_edges(p, 1, pairs.data(), count, &count) == PLC_OK);
  CHECK(pairs[0] == 0);
  CHECK(pairs[1] == 1);

  plc_mixing_result res{};
  CHECK(plc_mixing_time(p, 0.01, 100, 16, &res) == PLC_OK);
  CHECK(res.t_mix == 5);
  CHECK(res.estimated == 0);
  CHECK(plc_mixing_time(p, 1e-12, 3, 16, &res) == PLC_ERR_HORIZON_EXHAUSTED);

  double disc = 0;
  CHECK(plc_window_discrepancy(p, 1, 1, &disc) == PLC_OK);
  CHECK(disc == doctest::Approx(1.0 / 3.0));

  double pmin = 0;
  CHECK(plc_pattern_empirical_pmin(p, 10, &pmin) == PLC_ERR_INVALID_ARGUMENT);
  plc_pattern_free(p);

  REQUIRE(plc_pattern_create(g, "balancing_circuit", 0, 1.0, &p) == PLC_OK);
  CHECK(plc_pattern_max_active_degree(p, &delta) == PLC_OK);
  CHECK(delta == 1);
  plc_pattern_free(p);
  plc_graph_free(g);
}

TEST_CASE("circuit from matching files") {
  plc_graph* g = nullptr;
  REQUIRE(plc_graph_build("cycle", 4, 0, 0, &g) == PLC_OK);
  const std::string a = "c_api_matching_a.txt", b = "c_api_matching_b.txt";
  FILE* fa = std::fopen(a.c_str(), "w");
  std::fputs("4 2\n0 1\n2 3\n", fa);
  std::fclose(fa);
  FILE* fb = std::fopen(b.c_str(), "w");
  std::fputs("4 2\n1 2\n0 3\n", fb);
  std::fclose(fb);
  const char* paths[] = {a.c_str(), b.c_str()};
  plc_pattern* p = nullptr;
  REQUIRE(plc_pattern_create_circuit(g, paths, 2, &p) == PLC_OK);
  uint32_t pairs[4];
  size_t count = 0;
  CHECK(plc_pattern_active_edges(p, 2, pairs, 2, &count) == PLC_OK);
  CHECK(count == 2);
  CHECK(pairs[0] == 0);
  CHECK(pairs[1] == 1);
  plc_pattern_free(p);
  plc_graph_free(g);
  std::remove(a.c_str());
  std::remove(b.c_str());
}

TEST_CASE("closed forms") {
  uint64_t v = 0;
  CHECK(plc_shuffle_required_gamma(16, 1.0, 1, 12, 1, &v) == PLC_OK);
  CHECK(v == 48);
  CHECK(plc_shuffle_memory_bits(16, 2, 1.0, 12, 5, &v) == PLC_OK);
  CHECK(v == 37);
  CHECK(plc_balance_required_gamma(2, 0.125, 16, &v) == PLC_OK);
  CHECK(v == 48);
  CHECK(plc_balance_memory_bits(4, 48, &v) == PLC_OK);
  CHECK(v == 24);
}

TEST_CASE("sweep through the C interface") {
  plc_experiment_config cfg;
  plc_experiment_config_init(&cfg);
  const size_t sizes[] = {8, 16};
  cfg.sizes = sizes;
  cfg.size_count = 2;
  cfg.model = "sequential";
  cfg.replicas = 2;
  plc_sweep* sweep = nullptr;
  REQUIRE(plc_sweep_run(&cfg, &sweep) == PLC_OK);
  CHECK(plc_sweep_record_count(sweep) == 4);
  plc_run_record rec{};
  CHECK(plc_sweep_record(sweep, 3, &rec) == PLC_OK);
  CHECK(rec.n == 16);
  CHECK(rec.failed == 0);
  CHECK(plc_sweep_record(sweep, 4, &rec) == PLC_ERR_INVALID_ARGUMENT);
  char* json = nullptr;
  CHECK(plc_sweep_summary_json(sweep, &json) == PLC_OK);
  CHECK(std::string(json).find("success_fraction") != std::string::npos);
  plc_string_free(json);
  plc_sweep_free(sweep);

  cfg.protocol = "vote";
  CHECK(plc_sweep_run(&cfg, &sweep) == PLC_ERR_INVALID_ARGUMENT);
}

TEST_CASE("verification through the C interface") {
  int pass = 0;
  char* json = nullptr;
  REQUIRE(plc_verify("chernoff", 1, 2000, &pass, &json) == PLC_OK);
  CHECK(pass == 1);
  CHECK(std::string(json).find("chernoff_tail") != std::string::npos);
  plc_string_free(json);
  CHECK(plc_verify("nope", 1, 10, &pass, &json) == PLC_ERR_INVALID_ARGUMENT);
}
