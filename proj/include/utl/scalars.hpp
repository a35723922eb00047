#pragma once

#include <gmpxx.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"

#include "utl/cyclotomic.hpp"
#include "utl/errors.hpp"
#include "utl/variant.hpp"

namespace utl {

using Rational = mpq_class;
using Complex = std::complex<double>;
using json = nlohmann::json;

enum class Backend { ExactRational, ExactCyclotomic, ComplexFloat };

inline const char* backend_name(Backend b) {
  switch (b) {
    case Backend::ExactRational: return "exact-rational";
    case Backend::ExactCyclotomic: return "exact-cyclotomic";
    case Backend::ComplexFloat: return "complex-float";
  }
  return "?";
}

/// Canonical "p/q" text of a rational (integers print without denominator).
inline std::string rational_string(const Rational& r) {
  Rational c = r;
  c.canonicalize();
  return c.get_str();
}

inline Rational parse_rational(const std::string& s) {
  Rational r;
  if (s.empty() || r.set_str(s, 10) != 0)
    throw InvalidInput("not a rational number: '" + s + "'");
  if (r.get_den() == 0) throw InvalidInput("zero denominator in '" + s + "'");
  r.canonicalize();
  return r;
}

template <class F>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static constexpr Backend backend = Backend::ExactRational;
  static constexpr bool exact = true;
  static Rational from_rational(const Rational& r) { return r; }
  static bool is_zero(const Rational& a) { return sgn(a) == 0; }
  static bool equal(const Rational& a, const Rational& b) { return a == b; }
  static json to_json(const Rational& a) { return rational_string(a); }
  /// e^{2 pi i j/m}; only +-1 are rational.
  static Rational unit_root(long j, long m, int) {
    long t = ((2 * j) % (2 * m) + 2 * m) % (2 * m);
    if (t == 0) return 1;
    if (2 * t == 2 * m) return -1;
    throw InvalidInput("root of unity is not rational; use the cyclotomic backend");
  }
};

template <>
struct ScalarTraits<Cyclo> {
  static constexpr Backend backend = Backend::ExactCyclotomic;
  static constexpr bool exact = true;
  static Cyclo from_rational(const Rational& r) { return Cyclo(r); }
  static bool is_zero(const Cyclo& a) { return a.is_zero(); }
  static bool equal(const Cyclo& a, const Cyclo& b) { return a == b; }
  static json to_json(const Cyclo& a) {
    if (a.is_rational()) return rational_string(a.rational_part());
    json c = json::array();
    for (const auto& x : a.coeffs()) c.push_back(rational_string(x));
    return json{{"zeta", a.order()}, {"coeffs", c}};
  }
  static Cyclo unit_root(long j, long m, int order) {
    if (order % m != 0) throw InvalidInput("cyclotomic order must be a multiple of m");
    return Cyclo::zeta(order, j * (order / m));
  }
};

template <>
struct ScalarTraits<Complex> {
  static constexpr Backend backend = Backend::ComplexFloat;
  static constexpr bool exact = false;
  static constexpr double tol = 1e-9;
  static Complex from_rational(const Rational& r) { return Complex(r.get_d(), 0.0); }
  static bool is_zero(const Complex& a) { return a == Complex(0.0, 0.0); }
  static bool equal(const Complex& a, const Complex& b) {
    double scale = std::max({1.0, std::abs(a), std::abs(b)});
    return std::abs(a - b) <= tol * scale;
  }
  static json to_json(const Complex& a) { return json{{"re", a.real()}, {"im", a.imag()}}; }
  static Complex unit_root(long j, long m, int) {
    return std::polar(1.0, 2.0 * std::numbers::pi * double(j) / double(m));
  }
};

template <class F>
bool is_zero(const F& a) { return ScalarTraits<F>::is_zero(a); }

template <class F>
bool scalar_equal(const F& a, const F& b) { return ScalarTraits<F>::equal(a, b); }

template <class F>
F from_rational(const Rational& r) { return ScalarTraits<F>::from_rational(r); }

template <class F>
F checked_inverse(const F& a, const char* what) {
  if (ScalarTraits<F>::is_zero(a))
    throw NonGenericError(std::string("vanishing denominator: ") + what);
  return F(1) / a;
}

/// a^e for any integer e (negative powers invert a).
template <class F>
F power(const F& a, long e) {
  if (e < 0) return power(checked_inverse(a, "negative power of zero"), -e);
  F r(1), b = a;
  while (e > 0) {
    if (e & 1) r *= b;
    e >>= 1;
    if (e) b *= b;
  }
  return r;
}

/// Parameter point. beta and q are derived from s = q^{1/2}; for affine kinds
/// gamma = omega^n.
template <class F>
struct ParamEnv {
  Backend backend = ScalarTraits<F>::backend;
  F s = F(2);
  F alpha = F(0);
  F gamma = F(1);
  F omega = F(1);
  F z = F(1);
  std::uint64_t rng_seed = 0;
  int r = -1;           // sector label for affine kinds (informational in rational mode)
  int cyclo_order = 0;  // order N of Q(zeta_N) when the cyclotomic backend is active

  F q() const { return s * s; }
  F beta() const {
    F qq = q();
    return -(qq + F(1) / qq);
  }
};

template <class F>
F qpow_half(const ParamEnv<F>& env, long e) { return power(env.s, e); }

/// q^e
template <class F>
F qpow(const ParamEnv<F>& env, long e) { return power(env.s, 2 * e); }

/// [k] = (q^k - q^{-k})/(q - q^{-1})
template <class F>
F qnum(long k, const ParamEnv<F>& env) {
  if (k == 0) return F(0);
  if (k < 0) return -qnum(-k, env);
  // sum_{j=0}^{k-1} q^{k-1-2j}
  F q = env.q(), qi = F(1) / q, q2 = q * q;
  F t = power(qi, k - 1), acc = F(0);
  for (long j = 0; j < k; ++j) {
    acc += t;
    t *= q2;
  }
  return acc;
}

template <class F>
F qfact(long k, const ParamEnv<F>& env) {
  if (k < 0) throw InvalidInput("q-factorial of a negative integer");
  F r(1);
  for (long j = 2; j <= k; ++j) r *= qnum(j, env);
  return r;
}

template <class F>
F qbinom(long kappa, long tau, const ParamEnv<F>& env) {
  if (tau < 0 || tau > kappa) throw InvalidInput("q-binomial index out of range");
  return qfact(kappa, env) /
         (qfact(tau, env) * qfact(kappa - tau, env));
}

/// Ordinary binomial coefficient as a big integer (zero outside the range).
inline mpz_class binomial(long a, long b) {
  if (b < 0 || a < 0 || b > a) return 0;
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(a), static_cast<unsigned long>(b));
  return r;
}

/// D(n) = sum over d = n mod 2, 1 <= d <= n, of d * C(n, (n-d)/2)^2.
inline mpz_class defect_weighted_sum(long n) {
  mpz_class acc = 0;
  for (long d = (n % 2 == 0 ? 2 : 1); d <= n; d += 2) {
    mpz_class c = binomial(n, (n - d) / 2);
    acc += d * c * c;
  }
  return acc;
}

inline mpz_class defect_weighted_closed_form(long n) {
  mpz_class c = binomial(n - 1, n % 2 == 1 ? (n - 1) / 2 : n / 2);
  return n * c * c;
}

template <class F>
json env_to_json(const ParamEnv<F>& env) {
  using T = ScalarTraits<F>;
  json j{{"backend", backend_name(env.backend)},
         {"s", T::to_json(env.s)},
         {"q", T::to_json(env.q())},
         {"beta", T::to_json(env.beta())},
         {"alpha", T::to_json(env.alpha)},
         {"gamma", T::to_json(env.gamma)},
         {"omega", T::to_json(env.omega)},
         {"z", T::to_json(env.z)},
         {"seed", env.rng_seed}};
  if (env.r >= 0) j["r"] = env.r;
  if (env.cyclo_order > 0) j["cyclo_order"] = env.cyclo_order;
  return j;
}

/// The value gamma-hat entering the projector recurrences.
template <class F>
F gamma_hat(Kind kind, const ParamEnv<F>& env) {
  return is_starred(kind) ? F(1) : env.gamma;
}

/// Every denominator the projector formulas divide by, evaluated at env.
template <class F>
std::vector<F> guarded_denominators(Kind kind, int n, const ParamEnv<F>& env) {
  std::vector<F> g;
  F q = env.q();
  g.push_back(env.s);
  g.push_back(q - F(1) / q);
  for (long j = 1; j <= 2 * n; ++j) g.push_back(qnum(j, env));
  if (!is_uncoiled(kind)) return g;
  F gh = gamma_hat(kind, env);
  g.push_back(gh);
  for (int k = 0; 2 * k < n; ++k) {
    long two_m = n - 2 * k;  // 2 m_k
    F qnm = power(env.s, long(n) * two_m);  // q^{n m_k}
    for (int a = -1; a <= 1; a += 2)
      for (int b = -1; b <= 1; b += 2) {
        g.push_back(power(gh, a) * power(qnm, b) - F(1));
        if (n % 2 == 1) g.push_back(power(env.gamma, 2 * a) * power(qnm, 2 * b) - F(1));
      }
    if (is_affine_uncoiled(kind)) {
      F q2m = power(env.s, 2 * two_m);  // q^{2 m_k}
      g.push_back(env.omega * env.omega * q2m - F(1));
      g.push_back(env.omega * env.omega / q2m - F(1));
    }
  }
  if (is_starred(kind)) {
    F h = qnum(n / 2, env), full = qnum(n, env);
    g.push_back(env.alpha * env.alpha * h * h - full * full);
    g.push_back(env.alpha * h - full);
    g.push_back(env.alpha * h + full);
  }
  if (is_affine_uncoiled(kind)) g.push_back(env.omega);
  return g;
}

namespace detail {

/// Portable draw of a small integer in [lo, hi].
inline long draw(std::mt19937_64& rng, long lo, long hi) {
  return lo + long(rng() % std::uint64_t(hi - lo + 1));
}

inline Rational draw_rational(std::mt19937_64& rng, long num_max, long den_max,
                              bool avoid_unit) {
  for (;;) {
    long p = draw(rng, -num_max, num_max);
    long d = draw(rng, 1, den_max);
    if (p == 0) continue;
    Rational r(p, d);
    r.canonicalize();
    if (avoid_unit && (r == 1 || r == -1)) continue;
    return r;
  }
}

}  // namespace detail

/// Rational parameter draws before they are lifted into a field.
struct RawDraw {
  Rational s, alpha, gamma, rho, z;
};

inline RawDraw draw_parameters(std::mt19937_64& rng) {
  RawDraw d;
  for (;;) {
    long a = detail::draw(rng, 2, 9), b = detail::draw(rng, 1, 7);
    if (a == b) continue;
    d.s = Rational(a, b);
    d.s.canonicalize();
    if (d.s != 1) break;
  }
  d.alpha = detail::draw_rational(rng, 9, 6, false);
  d.gamma = detail::draw_rational(rng, 9, 5, true);
  d.rho = detail::draw_rational(rng, 7, 5, true);
  d.z = detail::draw_rational(rng, 9, 7, true);
  return d;
}

/// Lifts a rational draw into the field F for the given kind and sector r.
/// Affine kinds take omega = rho * e^{2 pi i r/n} (unit modulus for uaTL1),
/// gamma = omega^n.
template <class F>
ParamEnv<F> lift_parameters(const RawDraw& d, Kind kind, int n, int r, int cyclo_order,
                            std::uint64_t seed) {
  using T = ScalarTraits<F>;
  ParamEnv<F> env;
  env.s = T::from_rational(d.s);
  env.alpha = T::from_rational(d.alpha);
  env.gamma = T::from_rational(d.gamma);
  env.z = T::from_rational(d.z);
  env.rng_seed = seed;
  env.cyclo_order = cyclo_order;
  if (is_affine_uncoiled(kind)) {
    int rr = r < 0 ? 0 : r;
    env.r = rr;
    F root = T::unit_root(rr, n, cyclo_order);
    env.omega = kind == Kind::uaTL1 ? root : T::from_rational(d.rho) * root;
    env.gamma = power(env.omega, n);
  } else if (is_starred(kind)) {
    env.gamma = F(1);
  }
  return env;
}

/// Deterministic generic parameter point for (kind, n). Resamples until no
/// guarded denominator vanishes.
template <class F = Rational>
ParamEnv<F> sample_env(std::uint64_t seed, Variant v, int r = -1, int cyclo_order = 0) {
  v.validate();
  if constexpr (std::is_same_v<F, Cyclo>) {
    if (cyclo_order <= 0) cyclo_order = 2 * v.n;
  }
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    RawDraw d = draw_parameters(rng);
    ParamEnv<F> env = lift_parameters<F>(d, v.kind, v.n, r, cyclo_order, seed);
    bool ok = true;
    for (const F& g : guarded_denominators(v.kind, v.n, env))
      if (ScalarTraits<F>::is_zero(g)) { ok = false; break; }
    if (ok) return env;
  }
  throw NonGenericError("non-generic parameter space");
}

/// Checks the invariants of a user-supplied environment.
template <class F>
void validate_env(Kind kind, int n, const ParamEnv<F>& env) {
  if constexpr (std::is_same_v<F, Rational>) {
    if (env.s == 0 || env.s == 1 || env.s == -1)
      throw NonGenericError("s must avoid 0, 1 and -1");
  }
  if (is_affine_uncoiled(kind) && !scalar_equal(env.gamma, power(env.omega, n)))
    throw InvalidInput("affine kinds require gamma = omega^n");
  for (const F& g : guarded_denominators(kind, n, env))
    if (ScalarTraits<F>::is_zero(g)) throw NonGenericError("guarded denominator vanishes");
}

}  // namespace utl
