// Independent reference computations used to freeze expected values.
// Nothing here calls into the library's algorithms.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace oracle {

using Rational = boost::multiprecision::cpp_rational;
using Matrix = std::vector<std::vector<Rational>>;

/// max over x ∈ {0,1}^n of (max_j (xΠ)_j − min_j (xΠ)_j).
inline Rational brute_force_discrepancy(const Matrix& pi) {
  const std::size_t n = pi.size();
  Rational best = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<Rational> y(n, Rational(0));
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1)
        for (std::size_t j = 0; j < n; ++j) y[j] += pi[i][j];
    const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
    best = std::max(best, Rational(*hi - *lo));
  }
  return best;
}

/// Lazy transition matrix from an explicit edge list, built from the
/// defining formula.
inline Matrix lazy_matrix(std::size_t n, const std::vector<std::pair<int, int>>& active, int delta) {
  Matrix p(n, std::vector<Rational>(n, Rational(0)));
  std::vector<int> deg(n, 0);
  for (auto [a, b] : active) {
    p[a][b] = Rational(1, 2 * delta);
    p[b][a] = Rational(1, 2 * delta);
    ++deg[a];
    ++deg[b];
  }
  for (std::size_t u = 0; u < n; ++u) p[u][u] = 1 - Rational(deg[u], 2 * delta);
  return p;
}

inline Matrix multiply(const Matrix& a, const Matrix& b) {
  const std::size_t n = a.size();
  Matrix c(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      if (a[i][k] != 0)
        for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

/// Exact per-edge activation probabilities of the greedy random matching
/// (uniform edge order, Bernoulli(p) acceptance when both ends are free),
/// by enumerating every order and every acceptance pattern.
inline std::vector<double> greedy_matching_edge_probabilities(
    std::size_t n, std::vector<std::pair<int, int>> edges, double p) {
  const std::size_t m = edges.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> prob(m, 0.0);
  double orders = 0;
  do {
    orders += 1;
    for (std::uint64_t coins = 0; coins < (std::uint64_t{1} << m); ++coins) {
      double weight = 1.0;
      for (std::size_t i = 0; i < m; ++i) weight *= (coins >> i & 1) ? p : 1.0 - p;
      if (weight == 0) continue;
      std::vector<bool> used(n, false);
      for (std::size_t i = 0; i < m; ++i) {
        const auto [a, b] = edges[order[i]];
        if (used[a] || used[b] || !(coins >> i & 1)) continue;
        used[a] = used[b] = true;
        prob[order[i]] += weight;
      }
    }
  } while (std::next_permutation(order.begin(), order.end()));
  for (double& x : prob) x /= orders;
  return prob;
}

/// Bits of the shuffle protocol's state, evaluated term by term with
/// natural logarithms.
inline std::uint64_t shuffle_memory_bits(double n, double k, double alpha, double T, double t_mix) {
  const long double ln2 = std::log(2.0L);
  const long double lg_n = std::log(static_cast<long double>(n)) / ln2;
  const long double lg_k = std::log(static_cast<long double>(k)) / ln2;
  const long double a2 = static_cast<long double>(alpha) * alpha;
  const long double tokens = 12.0L * lg_n / (a2 * T) + 4.0L;
  const long double counter = 4.0L * std::log(12.0L * lg_n / a2) / ln2;
  const long double clock = std::log(static_cast<long double>(T) * t_mix) / ln2;
  return static_cast<std::uint64_t>(std::ceil(tokens * lg_k + counter + clock));
}

/// k times the number of binary digits of γ.
inline std::uint64_t balance_memory_bits(std::uint64_t k, std::uint64_t gamma) {
  std::uint64_t digits = 0;
  for (std::uint64_t g = gamma; g > 0; g /= 2) ++digits;
  return k * digits;
}

struct Thresholds {
  double lower;
  double upper;
};

/// Counter separation thresholds written in the c²·T form.
inline Thresholds counter_thresholds(double n, double n1, double n2, double T, double gamma,
                                     double c) {
  const double p = 1.0 / n + 1.0 / (n * n * n * n * n);
  const double mu2 = p * c * T * gamma * n2;
  const double mu_rest = p * c * T * gamma * (n - n1);
  const double lg = std::log(n) / std::log(2.0);
  return {mu2 + std::sqrt(c * c * lg * T * gamma * n2 / n),
          T * gamma * c - mu_rest - std::sqrt(c * c * lg * T * gamma * (n - n1) / n)};
}

/// Exact Pr[every token of B is in D after one round] on K_2 with γ tokens
/// per node and Δ = 1, enumerating every arrangement of both nodes' tokens.
/// Token j starts on node j / γ; each node sends the first γ/2 tokens of a
/// uniform permutation across the edge.
inline Rational k2_shuffle_joint(std::uint32_t gamma, const std::vector<std::uint32_t>& B,
                                 const std::vector<int>& D) {
  std::vector<std::uint32_t> a(gamma), b(gamma);
  std::iota(a.begin(), a.end(), 0u);
  std::iota(b.begin(), b.end(), gamma);
  std::uint64_t hits = 0, total = 0;
  do {
    do {
      std::map<std::uint32_t, int> where;
      for (std::uint32_t i = 0; i < gamma; ++i) {
        where[a[i]] = i < gamma / 2 ? 1 : 0;
        where[b[i]] = i < gamma / 2 ? 0 : 1;
      }
      bool all = true;
      for (auto j : B) all = all && std::find(D.begin(), D.end(), where[j]) != D.end();
      hits += all;
      ++total;
    } while (std::next_permutation(b.begin(), b.end()));
  } while (std::next_permutation(a.begin(), a.end()));
  return Rational(hits, total);
}

}  // namespace oracle
