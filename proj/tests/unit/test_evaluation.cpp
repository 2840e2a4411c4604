#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "causnet/evaluation.hpp"
#include "causnet/systems.hpp"
#include "test_support.hpp"

using namespace causnet;

namespace {

AdjacencyNetwork random_network(Index k, double density, std::mt19937_64& rng) {
  std::bernoulli_distribution on(density);
  auto net = AdjacencyNetwork::empty(k);
  for (Index i = 0; i < k; ++i)
    for (Index j = 0; j < k; ++j)
      if (i != j && on(rng)) net.set_edge(i, j, true);
  return net;
}

AdjacencyNetwork complement(const AdjacencyNetwork& a) {
  auto net = AdjacencyNetwork::empty(a.k());
  for (Index i = 0; i < a.k(); ++i)
    for (Index j = 0; j < a.k(); ++j)
      if (i != j) net.set_edge(i, j, !a.edge(i, j));
  return net;
}

// Pearson correlation of the two off-diagonal indicator vectors.
double indicator_correlation(const AdjacencyNetwork& a, const AdjacencyNetwork& b) {
  std::vector<double> x, y;
  for (Index i = 0; i < a.k(); ++i)
    for (Index j = 0; j < a.k(); ++j)
      if (i != j) x.push_back(a.edge(i, j)), y.push_back(b.edge(i, j));
  return testsupport::pearson(x, y);
}

}  // namespace

TEST_CASE("worked TE example: eight edges on the five-node chain") {
  const auto truth = chain_coupling(5);
  auto est = truth;
  est.set_edge(0, 2, true);
  est.set_edge(4, 1, true);
  const auto c = confusion(truth, est);
  CHECK(c.tp == 6);
  CHECK(c.fp == 2);
  CHECK(c.fn == 0);
  CHECK(c.tn == 12);
  const auto r = indices(c);
  CHECK(r.sens == 1.0);
  CHECK(r.spec == doctest::Approx(12.0 / 14.0));
  CHECK(r.spec == doctest::Approx(0.857).epsilon(1e-3));
  CHECK(r.mcc == doctest::Approx((6.0 * 12 - 2.0 * 0) / std::sqrt(8.0 * 6 * 14 * 12)));
  CHECK(r.mcc == doctest::Approx(0.80).epsilon(0.01));
  CHECK(r.fm == doctest::Approx(12.0 / 14.0));
  CHECK(r.prec == doctest::Approx(0.75));
  CHECK(r.hd == 2);
}

TEST_CASE("degenerate cases") {
  const auto truth = chain_coupling(5);
  const auto perfect = indices(confusion(truth, truth));
  CHECK(perfect.mcc == 1.0);
  CHECK(perfect.fm == 1.0);
  CHECK(perfect.hd == 0);

  const auto empty = indices(confusion(truth, AdjacencyNetwork::empty(5)));
  CHECK(empty.sens == 0.0);
  CHECK(empty.prec == 0.0);
  CHECK(empty.fm == 0.0);
  CHECK(empty.mcc == 0.0);
  CHECK(empty.spec == 1.0);

  const auto c = confusion(truth, complement(truth));
  CHECK(c.tp == 0);
  CHECK(c.tn == 0);
  CHECK(indices(c).mcc == -1.0);

  const auto none = indices(ConfusionCounts{});
  CHECK(none.sens == 0.0);
  CHECK(none.spec == 0.0);
  CHECK(none.mcc == 0.0);
  CHECK_THROWS_AS(confusion(truth, AdjacencyNetwork::empty(4)), Error);
}

TEST_CASE("MCC equals the Pearson correlation of the edge indicators") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const Index k = 3 + trial % 4;
    const auto a = random_network(k, 0.4, rng), b = random_network(k, 0.5, rng);
    const auto c = confusion(a, b);
    CHECK(c.total() == k * (k - 1));
    const double rho = indicator_correlation(a, b);
    if (std::isnan(rho)) CHECK(indices(c).mcc == 0.0);
    else CHECK(indices(c).mcc == doctest::Approx(rho).epsilon(1e-12));
  }
}

TEST_CASE("indices are invariant under relabelling the nodes") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const Index k = 6;
    const auto a = random_network(k, 0.3, rng), b = random_network(k, 0.3, rng);
    std::vector<Index> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    auto pa = AdjacencyNetwork::empty(k), pb = AdjacencyNetwork::empty(k);
    for (Index i = 0; i < k; ++i)
      for (Index j = 0; j < k; ++j) {
        if (i == j) continue;
        pa.set_edge(perm[i], perm[j], a.edge(i, j));
        pb.set_edge(perm[i], perm[j], b.edge(i, j));
      }
    const auto c1 = confusion(a, b), c2 = confusion(pa, pb);
    CHECK(c1.tp == c2.tp);
    CHECK(c1.fp == c2.fp);
    CHECK(c1.fn == c2.fn);
    CHECK(c1.tn == c2.tn);
  }
}

TEST_CASE("ordinal ranking") {
  CHECK(rank_measures({0.9, 0.5, 0.7}, 1) == std::vector<int>{1, 3, 2});

  std::set<std::vector<int>> seen;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    auto r = rank_measures({0.4, 0.4, 0.4, 0.4}, seed);
    seen.insert(r);
    std::sort(r.begin(), r.end());
    CHECK(r == std::vector<int>{1, 2, 3, 4});
  }
  CHECK(seen.size() > 1);
  CHECK(rank_measures({0.4, 0.4, 0.4, 0.4}, 5) == rank_measures({0.4, 0.4, 0.4, 0.4}, 5));

  bool orders[2] = {false, false};
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto r = rank_measures({0.2, 0.9, 0.5, 0.9}, seed);
    CHECK(std::min(r[1], r[3]) == 1);
    CHECK(std::max(r[1], r[3]) == 2);
    CHECK(r[2] == 3);
    CHECK(r[0] == 4);
    orders[r[1] == 1] = true;
  }
  CHECK((orders[0] && orders[1]));
}

TEST_CASE("score index") {
  const auto always_first = score({{1, 2, 3}, {1, 3, 2}}, {"a", "b", "c"});
  CHECK(always_first.score[0] == 1.0);
  CHECK(always_first.mean_rank[1] == 2.5);
  const auto last = score({{3, 1, 2}, {3, 2, 1}}, {"a", "b", "c"});
  CHECK(last.score[0] == 0.0);
  const auto alt = score({{1, 2}, {2, 1}}, {"a", "b"});
  CHECK(alt.mean_rank[0] == 1.5);
  CHECK(alt.score[0] == 0.5);
  CHECK(score({{1}}, {"solo"}).score[0] == 1.0);

  // Scores depend on the measures, not the order they are listed in.
  const auto fwd = score({{1, 2, 3}, {2, 1, 3}}, {"a", "b", "c"});
  const auto rev = score({{3, 2, 1}, {3, 1, 2}}, {"c", "b", "a"});
  CHECK(fwd.score[0] == rev.score[2]);
  CHECK(fwd.score[2] == rev.score[0]);

  const auto overall = overall_scores({always_first, last});
  CHECK(overall[0] == 0.5);
  CHECK_THROWS_AS(overall_scores({always_first, alt}), Error);
}
