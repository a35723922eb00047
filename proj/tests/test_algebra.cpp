#include <catch_amalgamated.hpp>

#include <set>

#include "support.hpp"
#include "utl/algebra.hpp"

using namespace utl;
using utl::testing::make_state;

namespace {

using A = Algebra<Rational>;
using El = Element<Rational>;

A make(Kind k, int n, std::uint64_t seed = 1) {
  Variant v(k, n);
  return A(v, sample_env<Rational>(seed, v));
}

El E_word(const A& a) {
  std::vector<int> js;
  for (int j = 0; j < a.n(); j += 2) js.push_back(j);
  return a.word(js);
}

El F_word(const A& a) {
  std::vector<int> js;
  for (int j = 1; j < a.n(); j += 2) js.push_back(j);
  return a.word(js);
}

/// e_0 (e_{n-1} ... e_1 e_0)^p
El unwinding_word(const A& a, int p) {
  std::vector<int> js{0};
  for (int r = 0; r < p; ++r)
    for (int j = a.n() - 1; j >= 0; --j) js.push_back(j);
  return a.word(js);
}

bool relations_hold(const A& a) {
  const int n = a.n();
  const Rational beta = a.env().beta();
  bool ok = true;
  for (int j = 0; j < n; ++j) {
    ok &= equal(a.mul(a.e(j), a.e(j)), beta * a.e(j));
    ok &= equal(a.word({j, j + 1, j}), a.e(j));
    ok &= equal(a.word({j, j - 1, j}), a.e(j));
    for (int i = 0; i < n; ++i) {
      int dist = std::min((i - j + n) % n, (j - i + n) % n);
      if (dist > 1) ok &= equal(a.word({i, j}), a.word({j, i}));
    }
    if (!is_periodic(a.kind())) {
      ok &= equal(a.mul(a.mul(a.omega(1), a.e(j)), a.omega(-1)), a.e(j - 1));
    }
  }
  if (!is_periodic(a.kind())) {
    ok &= equal(a.mul(a.omega(1), a.omega(-1)), a.id());
    ok &= equal(a.mul(a.omega(-1), a.omega(1)), a.id());
    std::vector<int> desc;
    for (int j = n - 1; j >= 1; --j) desc.push_back(j);
    ok &= equal(a.mul(a.omega(2), a.e(1)), a.word(desc));
  }
  return ok;
}

}  // namespace

TEST_CASE("dimension closed forms match enumeration") {
  for (int n = 1; n <= 10; ++n)
    for (Kind k : {Kind::uaTL, Kind::upTL, Kind::uaTL1, Kind::upTL1, Kind::uaTL2, Kind::upTL2}) {
      bool odd_kind = k == Kind::uaTL || k == Kind::upTL;
      if ((n % 2 == 1) != odd_kind) continue;
      if (n == 1 && k == Kind::upTL) continue;
      Variant v(k, n);
      CHECK(mpz_class(long(basis_enumerate(v).size())) == dimension_closed_form(v));
    }
  CHECK(basis_enumerate(Variant(Kind::uaTL, 3)).size() == 12);
  CHECK(basis_enumerate(Variant(Kind::upTL, 3)).size() == 10);
  CHECK(basis_enumerate(Variant(Kind::uaTL1, 2)).size() == 6);
  CHECK(dimension_closed_form(Variant(Kind::uaTL, 5)) == 180);
  CHECK(dimension_closed_form(Variant(Kind::upTL, 5)) == 176);
  CHECK(dimension_closed_form(Variant(Kind::upTL1, 4)) == 53);
  CHECK(dimension_closed_form(Variant(Kind::uaTL2, 6)) == 600);
  int d3 = 0, d1 = 0;
  for (const auto& D : basis_enumerate(Variant(Kind::uaTL, 3))) (D.d == 3 ? d3 : d1)++;
  CHECK(d3 == 3);
  CHECK(d1 == 9);
  CHECK_THROWS_AS(basis_enumerate(Variant(Kind::aTL, 3)), InvalidInput);
  CHECK_THROWS_AS(Variant(Kind::uaTL, 4), InvalidInput);
}

TEST_CASE("reduction examples") {
  A ua = make(Kind::uaTL, 5);
  auto r = ua.reduce(translation_diagram(5, 5));
  REQUIRE(r);
  CHECK(r->first == ua.env().gamma);
  CHECK(r->second == identity_diagram(5));
  auto neg = ua.reduce(translation_diagram(5, -1));
  REQUIRE(neg);
  CHECK(neg->first == 1 / ua.env().gamma);
  CHECK(neg->second == translation_diagram(5, 4));

  A up1 = make(Kind::upTL1, 4);
  Diagram loops{4, 0, make_state(4, {{0, 1}, {2, 3}}), make_state(4, {{0, 1}, {2, 3}}), 2};
  auto rl = up1.reduce(loops);
  REQUIRE(rl);
  CHECK(rl->first == up1.env().alpha * up1.env().alpha);
  CHECK(rl->second.mid == 0);

  A ua2 = make(Kind::uaTL2, 4);
  for (const auto& b : link_states(4, 0))
    CHECK_FALSE(ua2.reduce(Diagram{4, 0, b, b, 0}).has_value());
}

TEST_CASE("reduction is idempotent on bases") {
  for (Kind k : {Kind::uaTL, Kind::upTL, Kind::uaTL1, Kind::upTL1, Kind::uaTL2, Kind::upTL2})
    for (int n = 2; n <= 8; ++n) {
      bool odd_kind = k == Kind::uaTL || k == Kind::upTL;
      if ((n % 2 == 1) != odd_kind) continue;
      if (n > 6 && (k == Kind::uaTL1 || k == Kind::upTL1)) continue;
      for (const auto& D : basis_enumerate(Variant(k, n))) {
        Reduced r = reduce_diagram(k, D);
        CHECK_FALSE(r.zero);
        CHECK(r.diagram == D);
        CHECK(r.gamma_exp == 0);
        CHECK(r.alpha_exp == 0);
      }
    }
}

TEST_CASE("defining and quotient relations") {
  for (int n = 3; n <= 8; ++n) {
    std::vector<Kind> kinds = n % 2 ? std::vector<Kind>{Kind::uaTL, Kind::upTL}
                                    : std::vector<Kind>{Kind::uaTL1, Kind::upTL1, Kind::uaTL2,
                                                        Kind::upTL2};
    kinds.push_back(Kind::aTL);
    kinds.push_back(Kind::pTL);
    for (Kind k : kinds) {
      A a = make(k, n, 3);
      INFO(kind_name(k) << " n=" << n);
      CHECK(relations_hold(a));
    }
    if (n % 2 == 1) {
      A ua = make(Kind::uaTL, n, 3), up = make(Kind::upTL, n, 3);
      Rational g = ua.env().gamma;
      CHECK(equal(ua.omega(n), g * ua.id()));
      CHECK(equal(unwinding_word(ua, n - 2), g * g * ua.e(0)));
      CHECK(equal(unwinding_word(up, n - 2), up.env().gamma * up.env().gamma * up.e(0)));
    } else {
      A ua1 = make(Kind::uaTL1, n, 3), up1 = make(Kind::upTL1, n, 3);
      Rational al = ua1.env().alpha;
      El E = E_word(ua1);
      CHECK(equal(ua1.mul(ua1.mul(E, ua1.omega(1)), E), al * E));
      CHECK(equal(ua1.omega(n), ua1.id()));
      El Ep = E_word(up1);
      Rational al2 = up1.env().alpha * up1.env().alpha;
      CHECK(equal(up1.mul(up1.mul(Ep, F_word(up1)), Ep), al2 * Ep));
      CHECK(equal(unwinding_word(up1, (n - 2) / 2), up1.e(0)));
      A ua2 = make(Kind::uaTL2, n, 3), up2 = make(Kind::upTL2, n, 3);
      CHECK(E_word(ua2).is_zero());
      CHECK(E_word(up2).is_zero());
      CHECK(equal(ua2.omega(n), ua2.env().gamma * ua2.id()));
      CHECK(equal(unwinding_word(up2, (n - 2) / 2), up2.env().gamma * up2.e(0)));
    }
  }
}

TEST_CASE("multiplication is associative in every quotient") {
  std::mt19937_64 rng(9);
  for (Kind k : {Kind::uaTL, Kind::upTL, Kind::uaTL1, Kind::upTL1, Kind::uaTL2, Kind::upTL2}) {
    for (int it = 0; it < 100; ++it) {
      bool odd_kind = k == Kind::uaTL || k == Kind::upTL;
      int n = odd_kind ? (rng() % 2 ? 3 : 5) : 2 * (1 + int(rng() % 3));
      A a = make(k, n, 4);
      auto rand_word = [&] {
        El w = a.id();
        int len = 1 + int(rng() % 5);
        for (int i = 0; i < len; ++i) {
          int g = int(rng() % (n + 2));
          if (g < n)
            w = a.mul(w, a.e(g));
          else if (!is_periodic(k))
            w = a.mul(w, a.omega(g == n ? 1 : -1));
        }
        Rational c(long(rng() % 7) - 3, 1 + long(rng() % 4));
        c.canonicalize();
        return a.id() + c * w;
      };
      El x = rand_word(), y = rand_word(), z = rand_word();
      CHECK(equal(a.mul(x, a.mul(y, z)), a.mul(a.mul(x, y), z)));
    }
  }
}

TEST_CASE("planar generators stay planar") {
  for (int n = 1; n <= 6; ++n) {
    A tl = make(Kind::TL, n);
    std::set<Diagram> seen{identity_diagram(n)};
    std::vector<Diagram> frontier{identity_diagram(n)};
    while (!frontier.empty()) {
      std::vector<Diagram> next;
      for (const auto& D : frontier)
        for (int j = 1; j < n; ++j) {
          Product p = multiply_raw(D, generator_diagram(n, j));
          CHECK(is_planar(p.diagram));
          CHECK(p.noncontractible == 0);
          if (seen.insert(p.diagram).second) next.push_back(p.diagram);
        }
      frontier = next;
    }
    CHECK(mpz_class(long(seen.size())) == binomial(2 * n, n) / (n + 1));
    CHECK(seen.size() == basis_enumerate(Variant(Kind::TL, n)).size());
  }
}

TEST_CASE("displayed products in the quotients") {
  A up1 = make(Kind::upTL1, 4, 5);
  El E = E_word(up1);
  Rational al = up1.env().alpha;
  CHECK(equal(up1.mul(up1.mul(E, F_word(up1)), E), al * al * E));
  A ua = make(Kind::uaTL, 5, 5);
  Rational g = ua.env().gamma;
  CHECK(equal(unwinding_word(ua, 3), g * g * ua.e(0)));
  CHECK(equal(ua.mul(ua.id(), ua.e(2)), ua.e(2)));
}

TEST_CASE("sandwich pairing reproduces products") {
  std::mt19937_64 rng(13);
  for (Kind k : {Kind::uaTL, Kind::upTL, Kind::uaTL1, Kind::upTL1, Kind::uaTL2, Kind::upTL2}) {
    for (int n : {2, 3, 4, 5, 6}) {
      bool odd_kind = k == Kind::uaTL || k == Kind::upTL;
      if ((n % 2 == 1) != odd_kind) continue;
      A a = make(k, n, 2);
      auto basis = basis_enumerate(a.variant());
      for (int it = 0; it < 60; ++it) {
        const Diagram& x = basis[rng() % basis.size()];
        std::vector<const Diagram*> same;
        for (const auto& y : basis)
          if (y.d == x.d) same.push_back(&y);
        const Diagram& y = *same[rng() % same.size()];
        MiddleValue<Rational> psi = psi_bilinear(x.top, y.bottom, a);
        El prod = a.mul(a.element(x), a.element(y));
        if (psi.zero) {
          // the product lives in lower sectors only
          for (const auto& [D, c] : prod.terms) CHECK(D.d < x.d);
          continue;
        }
        El expect = a.element(Diagram{n, x.d, x.bottom, y.top, x.mid + psi.power + y.mid}, psi.coeff);
        CHECK(equal(prod, expect));
      }
    }
  }
}

TEST_CASE("displayed pairings") {
  // n = 10, d = 0: one contractible loop and three winding loops
  LinkState v10 = make_state(10, {{3, 4}, {5, 6}}, {{0, 9}, {1, 8}, {2, 7}});
  LinkState w10 = make_state(10, {{0, 9}, {1, 8}, {4, 7}, {2, 3}, {5, 6}});
  A ua1 = make(Kind::uaTL1, 10, 6), up1 = make(Kind::upTL1, 10, 6);
  Rational al = ua1.env().alpha, be = ua1.env().beta();
  MiddleValue<Rational> p = psi_bilinear(w10, v10, ua1);
  REQUIRE_FALSE(p.zero);
  CHECK(p.coeff == al * al * al * be);
  CHECK(p.power == 0);
  MiddleValue<Rational> pp = psi_bilinear(w10, v10, up1);
  REQUIRE_FALSE(pp.zero);
  CHECK(pp.coeff == up1.env().alpha * up1.env().alpha * up1.env().beta());
  CHECK(pp.power == 1);

  // n = 12, d = 2: the defects of one state meet arcs of the other
  LinkState v12 = make_state(12, {{0, 1}, {5, 6}, {7, 8}, {4, 9}}, {{2, 11}});
  LinkState w12 = make_state(12, {{3, 4}, {7, 8}, {9, 10}, {2, 5}}, {{0, 11}});
  CHECK(psi_bilinear(w12, v12, make(Kind::upTL1, 12, 6)).zero);
  CHECK(psi_bilinear(w12, v12, make(Kind::upTL2, 12, 6)).zero);

  // n = 13, d = 3: two contractible loops and a full turn of the three defects
  LinkState v13 = make_state(13, {{5, 6}}, {{0, 12}, {1, 11}, {2, 10}, {3, 9}});
  LinkState w13 = make_state(13, {{3, 4}, {5, 6}, {2, 7}, {1, 8}}, {{0, 12}});
  A ua = make(Kind::uaTL, 13, 6), up = make(Kind::upTL, 13, 6);
  MiddleValue<Rational> q = psi_bilinear(w13, v13, ua);
  REQUIRE_FALSE(q.zero);
  CHECK(q.coeff == ua.env().beta() * ua.env().beta() * ua.env().gamma);
  CHECK(q.power == 0);
  MiddleValue<Rational> qp = psi_bilinear(w13, v13, up);
  REQUIRE_FALSE(qp.zero);
  CHECK(qp.coeff == up.env().beta() * up.env().beta());
  CHECK(qp.power == 3);
}
