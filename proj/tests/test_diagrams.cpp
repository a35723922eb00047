#include <catch_amalgamated.hpp>

#include <set>

#include "support.hpp"
#include "utl/diagrams.hpp"
#include "utl/scalars.hpp"

using namespace utl;
using utl::testing::make_state;
using utl::testing::random_diagram;

namespace {

Diagram gen(int n, int j) { return generator_diagram(n, j); }
Diagram omega(int n, int k = 1) { return translation_diagram(n, k); }

/// Product of a list of diagrams with accumulated loop bookkeeping.
Product chain(const std::vector<Diagram>& ds) {
  Product acc{ds.front(), 0, 0};
  for (std::size_t i = 1; i < ds.size(); ++i) {
    Product p = multiply_raw(acc.diagram, ds[i]);
    acc.diagram = p.diagram;
    acc.contractible += p.contractible;
    acc.noncontractible += p.noncontractible;
  }
  return acc;
}

}  // namespace

TEST_CASE("link state counts are binomial") {
  for (int n = 1; n <= 12; ++n)
    for (int d = n % 2; d <= n; d += 2) {
      const auto& ls = link_states(n, d);
      CHECK(mpz_class(long(ls.size())) == binomial(n, (n - d) / 2));
      std::set<LinkState> uniq(ls.begin(), ls.end());
      CHECK(uniq.size() == ls.size());
      CHECK(std::is_sorted(ls.begin(), ls.end()));
      for (const auto& s : ls) {
        CHECK(valid_link_state(n, s));
        CHECK(s.defects(n) == d);
      }
    }
  CHECK(link_states(5, 1).size() == 10);
  CHECK(link_states(5, 3).size() == 5);
  REQUIRE(link_states(6, 6).size() == 1);
  CHECK(link_states(6, 6)[0] == all_defects(6));
  CHECK(link_states(4, 1).empty());
}

TEST_CASE("malformed link states are rejected") {
  // crossing arcs
  CHECK_FALSE(valid_link_state(4, make_state(4, {{0, 2}, {1, 3}})));
  // overarched defect
  CHECK_FALSE(valid_link_state(3, make_state(3, {{0, 2}})));
  // the same arc drawn through the seam leaves the defect outside
  CHECK(valid_link_state(3, make_state(3, {}, {{0, 2}})));
  // seam flag on one end only
  LinkState bad = make_state(4, {{0, 1}});
  bad.v[0] = std::int8_t(1 | LinkState::kSeamBit);
  CHECK_FALSE(valid_link_state(4, bad));
}

TEST_CASE("parity follows the seam-arc convention") {
  CHECK(link_parity(5, all_defects(5)) == 1);
  // B_{5,1} element: defect at node 1, arcs (2,3) and (4,0) through the seam
  LinkState w = make_state(5, {{2, 3}}, {{0, 4}});
  REQUIRE(valid_link_state(5, w));
  CHECK(link_parity(5, w) == 0);
  CHECK(link_parity(4, make_state(4, {}, {{0, 3}, {1, 2}})) == 1);
  int wrapped = 0;
  for (const auto& s : link_states(5, 1)) wrapped += s.seam_arcs(5) > 0;
  CHECK(wrapped == 5);
}

TEST_CASE("generators have the expected shape") {
  Diagram id = identity_diagram(4);
  CHECK(id.d == 4);
  CHECK(id.mid == 0);
  Diagram e1 = gen(4, 1);
  CHECK(e1.d == 2);
  CHECK(e1.mid == 0);
  CHECK(e1.bottom == make_state(4, {{0, 1}}));
  CHECK(e1.top == e1.bottom);
  Diagram e0 = gen(4, 0);
  CHECK(e0.bottom == make_state(4, {}, {{0, 3}}));
  CHECK(omega(4).mid == 1);
  CHECK_THROWS_AS(gen(4, 4), InvalidInput);
  Product p = multiply_raw(omega(4, 1), omega(4, -1));
  CHECK(p.diagram == id);
  CHECK(p.contractible == 0);
  CHECK(p.noncontractible == 0);
}

TEST_CASE("displayed six-node product") {
  const int n = 6;
  Diagram c1 = make_diagram(n, make_state(n, {{0, 5}, {1, 2}, {3, 4}}),
                            make_state(n, {{0, 1}, {3, 4}}, {{2, 5}}), 1);
  Diagram c2 = make_diagram(n, make_state(n, {{2, 5}, {3, 4}}),
                            make_state(n, {{2, 3}}, {{0, 5}}), 0);
  CHECK(is_even(c1));
  CHECK_FALSE(is_even(c2));
  Product p = multiply_raw(c1, c2);
  Diagram expect = make_diagram(n, make_state(n, {{0, 5}, {1, 2}, {3, 4}}),
                                make_state(n, {{1, 4}, {2, 3}}, {{0, 5}}), 2);
  CHECK(p.diagram == expect);
  CHECK(p.contractible == 1);
  // one winding loop is created by the wrapped top arc of c1 meeting an arc of c2
  CHECK(p.noncontractible == 1);
  CHECK_FALSE(is_even(p.diagram));
}

TEST_CASE("basic loop bookkeeping") {
  for (int n = 2; n <= 8; ++n)
    for (int j = 0; j < n; ++j) {
      Product p = multiply_raw(gen(n, j), gen(n, j));
      CHECK(p.diagram == gen(n, j));
      CHECK(p.contractible == 1);
      CHECK(p.noncontractible == 0);
    }
  Product p = chain({gen(2, 0), omega(2), gen(2, 0)});
  Diagram e0_loop = gen(2, 0);
  e0_loop.mid = 1;
  CHECK(p.diagram == e0_loop);
  CHECK(p.contractible == 0);
  CHECK(p.noncontractible == 1);
}

TEST_CASE("defining relations hold diagrammatically") {
  for (int n = 3; n <= 8; ++n) {
    for (int j = 0; j < n; ++j) {
      for (int s : {-1, 1}) {
        int k = ((j + s) % n + n) % n;
        Product p = chain({gen(n, j), gen(n, k), gen(n, j)});
        CHECK(p.diagram == gen(n, j));
        CHECK(p.contractible == 0);
        CHECK(p.noncontractible == 0);
      }
      for (int k = 0; k < n; ++k) {
        int dist = std::min((j - k + n) % n, (k - j + n) % n);
        if (dist < 2) continue;
        CHECK(multiply_raw(gen(n, j), gen(n, k)).diagram ==
              multiply_raw(gen(n, k), gen(n, j)).diagram);
      }
      Product conj = chain({omega(n), gen(n, j), omega(n, -1)});
      CHECK(conj.diagram == gen(n, (j - 1 + n) % n));
      CHECK(conj.contractible == 0);
    }
    // Omega^2 e_1 = e_{n-1} ... e_2 e_1
    std::vector<Diagram> w;
    for (int j = n - 1; j >= 1; --j) w.push_back(gen(n, j));
    Product lhs = multiply_raw(omega(n, 2), gen(n, 1));
    Product rhs = chain(w);
    CHECK(lhs.diagram == rhs.diagram);
    CHECK(rhs.contractible == 0);
  }
}

TEST_CASE("flip is an anti-involution") {
  CHECK(flip(omega(5)) == omega(5, -1));
  for (int j = 0; j < 5; ++j) CHECK(flip(gen(5, j)) == gen(5, j));
  std::mt19937_64 rng(11);
  for (int it = 0; it < 100; ++it) {
    Diagram D = random_diagram(rng, 2 + int(rng() % 7));
    CHECK(flip(flip(D)) == D);
  }
  for (int n = 2; n <= 8; ++n) {
    std::vector<Diagram> gens{identity_diagram(n), omega(n), omega(n, -1)};
    for (int j = 0; j < n; ++j) gens.push_back(gen(n, j));
    for (const auto& a : gens)
      for (const auto& b : gens) {
        Product p = multiply_raw(a, b);
        Product q = multiply_raw(flip(b), flip(a));
        CHECK(flip(p.diagram) == q.diagram);
        CHECK(p.contractible == q.contractible);
        CHECK(p.noncontractible == q.noncontractible);
      }
  }
  for (int it = 0; it < 200; ++it) {
    int n = 2 + int(rng() % 7);
    Diagram a = random_diagram(rng, n), b = random_diagram(rng, n);
    Product p = multiply_raw(a, b);
    Product q = multiply_raw(flip(b), flip(a));
    CHECK(flip(p.diagram) == q.diagram);
    CHECK(p.contractible == q.contractible);
    CHECK(p.noncontractible == q.noncontractible);
  }
}

TEST_CASE("stacking is associative") {
  std::mt19937_64 rng(5);
  for (int it = 0; it < 200; ++it) {
    int n = 1 + int(rng() % 6);
    Diagram a = random_diagram(rng, n), b = random_diagram(rng, n), c = random_diagram(rng, n);
    Product ab = multiply_raw(a, b);
    Product l = multiply_raw(ab.diagram, c);
    Product bc = multiply_raw(b, c);
    Product r = multiply_raw(a, bc.diagram);
    CHECK(l.diagram == r.diagram);
    CHECK(ab.contractible + l.contractible == bc.contractible + r.contractible);
    CHECK(ab.noncontractible + l.noncontractible == bc.noncontractible + r.noncontractible);
  }
}

TEST_CASE("even diagrams are closed under products") {
  std::mt19937_64 rng(17);
  for (int n = 2; n <= 6; ++n) {
    std::vector<Diagram> even{identity_diagram(n), omega(n, 2), omega(n, -2)};
    for (int j = 0; j < n; ++j) even.push_back(gen(n, j));
    for (const auto& a : even) {
      CHECK(is_even(a));
      for (const auto& b : even) CHECK(is_even(multiply_raw(a, b).diagram));
    }
    CHECK_FALSE(is_even(omega(n)));
    int found = 0;
    while (found < 50) {
      Diagram a = random_diagram(rng, n), b = random_diagram(rng, n);
      if (!is_even(a) || !is_even(b)) continue;
      ++found;
      CHECK(is_even(multiply_raw(a, b).diagram));
    }
  }
}

TEST_CASE("canonical form round trips") {
  std::mt19937_64 rng(23);
  for (int it = 0; it < 300; ++it) {
    Diagram D = random_diagram(rng, 1 + int(rng() % 9));
    CHECK(from_connectivity(to_connectivity(D), D.loops()) == D);
    CHECK(diagram_from_json(diagram_to_json(D)) == D);
  }
  CHECK(diagram_art(generator_diagram(4, 0)) == "top    A||A\nbottom A||A\ntwist  0\n");
}
