#include <catch_amalgamated.hpp>

#include "utl/projectors.hpp"

using namespace utl;

namespace {

std::vector<Variant> variants(int nmax) {
  std::vector<Variant> out;
  for (Kind k : {Kind::uaTL, Kind::upTL, Kind::uaTL1, Kind::upTL1, Kind::uaTL2, Kind::upTL2}) {
    bool odd = k == Kind::uaTL || k == Kind::upTL;
    for (int n = odd ? 3 : 2; n <= nmax; n += 2) out.push_back(Variant(k, n));
  }
  return out;
}

}  // namespace

TEST_CASE("solver agrees with the closed forms over the rationals") {
  for (Variant v : variants(10)) {
    if (is_affine_uncoiled(v.kind)) continue;
    for (std::uint64_t seed : {3u, 11u}) {
      auto env = sample_env<Rational>(seed, v);
      auto s = gamma_solve(v, env);
      INFO(kind_name(v.kind) << " n=" << v.n);
      CHECK(gamma_distance(s, gamma_closed_form(v, env)) == 0);
      CHECK(max_residual(gamma_residuals(s, env)) == 0);
    }
  }
}

TEST_CASE("affine tables in every sector") {
  for (Variant v : variants(8)) {
    if (!is_affine_uncoiled(v.kind)) continue;
    for (int r = 0; r < v.n; ++r) {
      auto env = sample_env<Cyclo>(5, v, r);
      auto s = gamma_solve(v, env);
      INFO(kind_name(v.kind) << " n=" << v.n << " r=" << r);
      CHECK(gamma_distance(s, gamma_closed_form(v, env)) == 0);
      CHECK(max_residual(gamma_residuals(s, env)) == 0);
    }
  }
}

TEST_CASE("the unsigned affine reading fails the recursion") {
  Variant v(Kind::uaTL2, 4);
  auto env = sample_env<Cyclo>(5, v, 1);
  auto u = gamma_closed_form(v, env, AffineReading::Unsigned);
  CHECK(gamma_distance(u, gamma_solve(v, env)) != 0);
  CHECK(max_residual(gamma_residuals(u, env)) > 0);
}

TEST_CASE("perturbed tables leave residuals") {
  for (Variant v : {Variant(Kind::upTL, 5), Variant(Kind::upTL1, 6), Variant(Kind::upTL2, 4)}) {
    auto env = sample_env<Rational>(2, v);
    auto t = gamma_solve(v, env);
    auto it = t.entries.end();
    --it;
    it->second += Rational(1, 7);
    CHECK(max_residual(gamma_residuals(t, env)) > 0);
  }
}

TEST_CASE("complex backend matches the exact tables") {
  for (Variant v : variants(9)) {
    if (is_affine_uncoiled(v.kind)) continue;
    auto re = sample_env<Rational>(4, v);
    ParamEnv<Complex> ce;
    ce.s = re.s.get_d();
    ce.alpha = re.alpha.get_d();
    ce.gamma = re.gamma.get_d();
    auto a = gamma_solve(v, re);
    auto b = gamma_solve(v, ce);
    REQUIRE(a.entries.size() == b.entries.size());
    for (const auto& [key, x] : a.entries)
      CHECK(std::abs(b.entries.at(key) - x.get_d()) <= 1e-9 * std::max(1.0, std::abs(x.get_d())));
    CHECK(max_residual(gamma_residuals(b, ce)) < 1e-9);
  }
}

TEST_CASE("quasi-periodicity in l") {
  Variant v(Kind::upTL2, 8);
  auto env = sample_env<Rational>(6, v);
  auto t = gamma_solve(v, env);
  for (int k = 1; k <= recursion_kmax(8); ++k) {
    int M2 = 8 - 2 * k;
    for (int l2 = 0; l2 < M2; l2 += 2) CHECK(t.value(k, l2 + M2) * t.ghat == t.value(k, l2));
  }
  Variant w(Kind::upTL, 7);
  auto ew = sample_env<Rational>(6, w);
  auto u = gamma_solve(w, ew);
  // half-integer offsets are read from the upper integer branch
  CHECK(u.value(1, 1) == u.ghat * u.get(1, 6));
}

TEST_CASE("kernel against its root sum") {
  for (int n : {4, 6, 8}) {
    Variant v(Kind::upTL2, n);
    auto env = sample_env<Rational>(8, v);
    double q = env.q().get_d(), g = gamma_hat(v.kind, env).get_d();
    for (int k = 1; k <= recursion_kmax(n); ++k) {
      int M = (n - 2 * k) / 2;
      for (int l = -(M - 1); l <= M - 1; ++l) {
        double exact = kernel_J(v, k, 2 * l, env).get_d();
        CHECK(std::abs(kernel_J_roots(n, M, Complex(g, 0), l, q) - exact) <= 1e-9 * std::max(1.0, std::abs(exact)));
      }
    }
  }
  Variant odd(Kind::upTL, 7);
  auto env = sample_env<Rational>(8, odd);
  double g = gamma_hat(odd.kind, env).get_d();
  for (int l = -2; l <= 2; ++l) {
    double exact = kernel_J(odd, 1, 2 * l, env).get_d();
    CHECK(std::abs(kernel_J_roots(7, 5, Complex(g * g, 0), l, env.q().get_d()) - exact) <= 1e-9 * std::max(1.0, std::abs(exact)));
  }
}

TEST_CASE("table input validation") {
  CHECK_THROWS_AS(require_projector_variant(Variant(Kind::aTL, 4)), InvalidInput);
  CHECK_THROWS_AS(Variant(Kind::uaTL, 4), InvalidInput);
  Variant v(Kind::upTL2, 4);
  auto env = sample_env<Rational>(1, v);
  CHECK_THROWS_AS(kernel_J(v, 0, 0, env), InvalidInput);
  CHECK_THROWS_AS(kernel_J(v, 1, 1, env), InvalidInput);
  Variant a(Kind::uaTL2, 4);
  auto bad = sample_env<Rational>(1, a);
  bad.gamma += 1;
  CHECK_THROWS_AS(gamma_solve(a, bad), InvalidInput);
  auto tj = gamma_solve(v, env).to_json();
  CHECK(tj["variant"] == "upTL2");
  CHECK(tj["entries"].size() == 3);
}
