#include <catch_amalgamated.hpp>

#include "utl/scalars.hpp"

using namespace utl;

namespace {

ParamEnv<Rational> env_at_s(Rational s) {
  ParamEnv<Rational> e;
  s.canonicalize();
  e.s = s;
  return e;
}

/// Classical binomial through Pascal's rule, independent of GMP's mpz_bin.
mpz_class pascal(long a, long b) {
  std::vector<mpz_class> row{1};
  for (long i = 1; i <= a; ++i) {
    std::vector<mpz_class> next(i + 1, 1);
    for (long j = 1; j < i; ++j) next[j] = row[j - 1] + row[j];
    row = next;
  }
  return (b < 0 || b > a) ? mpz_class(0) : row[b];
}

}  // namespace

TEST_CASE("q-numbers at a rational point") {
  ParamEnv<Rational> e = env_at_s(Rational(3, 2));
  CHECK(qnum(0, e) == 0);
  CHECK(qnum(1, e) == 1);
  CHECK(qnum(2, e) == -e.beta());
  for (int k = 1; k <= 12; ++k) CHECK(qnum(-k, e) == -qnum(k, e));
  CHECK(qnum(3, env_at_s(Rational(1))) == 3);
  ParamEnv<Rational> s4 = env_at_s(Rational(2));  // q = 4
  CHECK(qnum(3, s4) == Rational(16) + 1 + Rational(1, 16));
}

TEST_CASE("q-number at q = 2 equals 21/4") {
  // s^2 = 2 has no rational solution, so use the defining quotient with q = 2
  Rational q = 2, qi = Rational(1, 2);
  Rational direct = (q * q * q - qi * qi * qi) / (q - qi);
  CHECK(direct == Rational(21, 4));
  // s = sqrt(2) = zeta_8 + zeta_8^{-1} lives in the cyclotomic backend
  ParamEnv<Cyclo> ce;
  ce.s = Cyclo::zeta(8, 1) + Cyclo::zeta(8, -1);
  REQUIRE(ce.q() == Cyclo(2));
  CHECK(qnum(3, ce) == Cyclo(Rational(21, 4)));
}

TEST_CASE("q-number identities") {
  for (Rational s : {Rational(3, 2), Rational(-5, 3), Rational(7, 4)}) {
    ParamEnv<Rational> e = env_at_s(s);
    const int n = 7;
    Rational q = e.q();
    for (int j = 1; j <= 2 * n; ++j)
      for (int k = 1; j + k <= 2 * n; ++k)
        CHECK(qnum(j + k, e) == qnum(j, e) * power(q, k) + power(q, -j) * qnum(k, e));
    for (int k = 1; k <= 2 * n - 1; ++k)
      CHECK(qnum(2, e) * qnum(k, e) == qnum(k + 1, e) + qnum(k - 1, e));
  }
}

TEST_CASE("q-binomials") {
  ParamEnv<Rational> e = env_at_s(Rational(5, 3));
  for (int k = 0; k <= 6; ++k) {
    CHECK(qbinom(k, 0, e) == 1);
    for (int t = 0; t <= k; ++t) CHECK(qbinom(k, t, e) == qbinom(k, k - t, e));
  }
  CHECK(qbinom(2, 1, e) == qnum(2, e));
  CHECK_THROWS_AS(qbinom(3, 4, e), InvalidInput);
  // q = 1 limit
  ParamEnv<Rational> one = env_at_s(Rational(1));
  for (int k = 0; k <= 8; ++k)
    for (int t = 0; t <= k; ++t) CHECK(qbinom(k, t, one) == Rational(pascal(k, t)));
  CHECK(qbinom(4, 2, one) == 6);
}

TEST_CASE("q-binomials are Laurent polynomial values") {
  std::mt19937_64 rng(3);
  for (int it = 0; it < 20; ++it) {
    long a = 2 + long(rng() % 9), b = 1 + long(rng() % 7);
    if (a == b) continue;
    ParamEnv<Rational> e = env_at_s(Rational(a, b));
    Rational q = e.q();
    for (int k = 1; k <= 8; ++k)
      for (int t = 0; t <= k; ++t) {
        // [k choose t] times q^{t(k-t)} is a polynomial in q^2 with integer coefficients
        Rational v = qbinom(k, t, e) * power(q, long(t) * (k - t));
        // evaluate the Gaussian binomial in x = q^2 via the recurrence
        Rational x = q * q;
        std::vector<std::vector<Rational>> g(k + 1, std::vector<Rational>(k + 1, 0));
        for (int i = 0; i <= k; ++i) {
          g[i][0] = 1;
          for (int j = 1; j <= i; ++j)
            g[i][j] = g[i - 1][j - 1] + (j <= i - 1 ? power(x, j) * g[i - 1][j] : Rational(0));
        }
        CHECK(v == g[k][t]);
      }
  }
}

TEST_CASE("defect-weighted binomial sum") {
  for (long n = 1; n <= 40; ++n) {
    mpz_class direct = 0;
    for (long d = n % 2 == 0 ? 2 : 1; d <= n; d += 2) {
      mpz_class c = pascal(n, (n - d) / 2);
      direct += d * c * c;
    }
    CHECK(defect_weighted_sum(n) == direct);
    CHECK(defect_weighted_closed_form(n) == direct);
  }
}

TEST_CASE("sampled environments") {
  ParamEnv<Rational> a = sample_env<Rational>(7, Variant(Kind::uaTL, 5));
  ParamEnv<Rational> b = sample_env<Rational>(7, Variant(Kind::uaTL, 5));
  CHECK(a.gamma == power(a.omega, 5));
  CHECK(a.s == b.s);
  CHECK(a.omega == b.omega);
  CHECK(a.alpha == b.alpha);
  CHECK(a.s != 1);
  CHECK(a.s != -1);
  CHECK(a.s != 0);
  for (std::uint64_t seed = 0; seed < 200; ++seed)
    for (Kind k : {Kind::upTL1, Kind::uaTL2}) {
      ParamEnv<Rational> e = sample_env<Rational>(seed, Variant(k, 4));
      CHECK(e.s * e.s != 1);
      for (const Rational& g : guarded_denominators(k, 4, e)) CHECK(g != 0);
    }
  ParamEnv<Rational> s1 = a;
  s1.s = 1;
  CHECK_THROWS_AS(validate_env(Kind::uaTL, 5, s1), NonGenericError);
  CHECK(json(rational_string(Rational(-6, 14))) == json("-3/7"));
  CHECK(ScalarTraits<Complex>::to_json(Complex(1.5, -2)) == json{{"re", 1.5}, {"im", -2.0}});
  CHECK(ScalarTraits<Complex>::equal(Complex(1e6, 0), Complex(1e6 + 1e-4, 0)));
  CHECK_FALSE(ScalarTraits<Complex>::equal(Complex(1, 0), Complex(1 + 1e-7, 0)));
}

TEST_CASE("cyclotomic field arithmetic") {
  for (int N : {1, 2, 3, 4, 5, 6, 8, 10, 12, 14}) {
    Cyclo z = Cyclo::zeta(N, 1);
    CHECK(power(z, N) == Cyclo(1));
    Cyclo sum = 0;
    for (int k = 0; k < N; ++k) sum += power(z, k);
    CHECK(sum == (N == 1 ? Cyclo(1) : Cyclo(0)));
    Cyclo x = Cyclo(Rational(3, 2)) + Cyclo(Rational(-2, 5)) * z + power(z, 2);
    if (!x.is_zero()) CHECK(x * x.inverse() == Cyclo(1));
    CHECK(Cyclo::zeta(N, -1) * z == Cyclo(1));
  }
  CHECK_THROWS_AS(Cyclo::zeta(3, 1) + Cyclo::zeta(5, 1), InvalidInput);
}
