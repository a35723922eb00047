#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "utl/algebra.hpp"
#include "utl/projectors.hpp"
#include "utl/reps.hpp"
#include "utl/scalars.hpp"
#include "utl/variant.hpp"

namespace utl {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

struct VerifyConfig {
  int max_n = 0;  ///< caps every size range when positive
  std::uint64_t seed = 7;
  bool inject_gamma_fault = false;  ///< perturbs one solver entry, every criterion using it must fail

  int cap(int n) const { return max_n > 0 ? std::min(n, max_n) : n; }
};

/// Legal (kind, n) pairs of the uncoiled projector kinds with n <= nmax.
inline std::vector<Variant> uncoiled_variants(int nmax, bool periodic, bool affine) {
  std::vector<Variant> out;
  for (Kind k : {Kind::uaTL, Kind::upTL, Kind::uaTL1, Kind::upTL1, Kind::uaTL2, Kind::upTL2}) {
    if (is_affine_uncoiled(k) ? !affine : !periodic) continue;
    bool odd = k == Kind::uaTL || k == Kind::upTL;
    for (int n = odd ? 3 : 2; n <= nmax; n += 2) out.push_back(Variant(k, n));
  }
  return out;
}

namespace detail {

class Tally {
 public:
  void check(bool ok, const std::string& what) {
    ++total_;
    if (!ok && failures_.size() < 6) failures_.push_back(what);
    if (!ok) ++failed_;
  }
  bool pass() const { return failed_ == 0; }
  std::string summary() const {
    std::ostringstream os;
    os << (total_ - failed_) << "/" << total_ << " checks";
    for (const auto& f : failures_) os << "; failed: " << f;
    return os.str();
  }

 private:
  long total_ = 0, failed_ = 0;
  std::vector<std::string> failures_;
};

inline std::string label(Variant v) {
  return std::string(kind_name(v.kind)) + " n=" + std::to_string(v.n);
}

template <class F>
void perturb(GammaTable<F>& t) {
  for (auto& [key, val] : t.entries)
    if (key.first >= 1) {
      val += F(1);
      return;
    }
  t.entries.begin()->second += F(1);
}

template <class F>
GammaTable<F> solved(Variant v, const ParamEnv<F>& env, const VerifyConfig& cfg) {
  GammaTable<F> t = gamma_solve(v, env);
  if (cfg.inject_gamma_fault) perturb(t);
  return t;
}

/// Defining relations of the generators, with the translation relations in the affine kinds.
template <class F>
bool generator_relations_hold(const Algebra<F>& a) {
  const int n = a.n();
  const F beta = a.env().beta();
  bool ok = true;
  for (int j = 0; j < n && ok; ++j) {
    ok = ok && equal(a.mul(a.e(j), a.e(j)), beta * a.e(j));
    ok = ok && equal(a.word({j, j + 1, j}), a.e(j)) && equal(a.word({j, j - 1, j}), a.e(j));
    for (int i = 0; i < n; ++i) {
      int dist = std::min((i - j + n) % n, (j - i + n) % n);
      if (dist > 1) ok = ok && equal(a.word({i, j}), a.word({j, i}));
    }
    if (!is_periodic(a.kind())) ok = ok && equal(a.mul(a.mul(a.omega(1), a.e(j)), a.omega(-1)), a.e(j - 1));
  }
  if (!is_periodic(a.kind())) {
    ok = ok && equal(a.mul(a.omega(1), a.omega(-1)), a.id());
    std::vector<int> desc;
    for (int j = n - 1; j >= 1; --j) desc.push_back(j);
    ok = ok && equal(a.mul(a.omega(2), a.e(1)), a.word(desc));
  }
  return ok;
}

template <class F>
bool annihilated(const Algebra<F>& A, const Element<F>& Q) {
  for (int j = 0; j < A.n(); ++j)
    if (!A.mul(A.e(j), Q).is_zero() || !A.mul(Q, A.e(j)).is_zero()) return false;
  if (is_affine_uncoiled(A.kind())) {
    Element<F> wQ = A.env().omega * Q;
    if (!equal(A.mul(A.omega(1), Q), wQ) || !equal(A.mul(Q, A.omega(1)), wQ)) return false;
  }
  return true;
}

/// Reduction window of the standard modules of an uncoiled kind at d > 0.
template <class F>
std::pair<int, F> module_window(Kind kind, int d, const ParamEnv<F>& env) {
  switch (kind) {
    case Kind::upTL: return {2 * d, env.gamma * env.gamma};
    case Kind::uaTL1:
    case Kind::upTL1: return {d, F(1)};
    default: return {d, env.gamma};
  }
}

}  // namespace detail

// ------------------------------------------------------------ criteria

inline CriterionResult criterion_dimensions(const VerifyConfig& cfg) {
  detail::Tally t;
  for (Variant v : uncoiled_variants(cfg.cap(10), true, true))
    t.check(mpz_class(long(basis_enumerate(v).size())) == dimension_closed_form(v), detail::label(v));
  t.check(basis_enumerate(Variant(Kind::uaTL, 5)).size() == 180, "uaTL n=5 is 180");
  t.check(dimension_closed_form(Variant(Kind::upTL1, 4)) == 53, "upTL1 n=4 is 53");
  return {1, "dimensions", t.pass(), t.summary(), 0};
}

inline CriterionResult criterion_relations(const VerifyConfig& cfg) {
  detail::Tally t;
  for (int n = 3; n <= cfg.cap(8); ++n) {
    for (Kind k : {Kind::aTL, Kind::pTL}) {
      Variant v(k, n);
      Algebra<Rational> A(v, sample_env<Rational>(cfg.seed, v));
      t.check(detail::generator_relations_hold(A), detail::label(v));
    }
    for (Variant v : uncoiled_variants(n, true, true)) {
      if (v.n != n) continue;
      ParamEnv<Rational> env = sample_env<Rational>(cfg.seed, v);
      Algebra<Rational> A(v, env);
      t.check(detail::generator_relations_hold(A), detail::label(v));
      Algebra<Rational> P(Variant(is_affine_uncoiled(v.kind) ? Kind::aTL : Kind::pTL, n), env);
      for (const auto& r : quotient_relations(P, v.kind))
        t.check(A.embed(r).is_zero(), detail::label(v) + " quotient relation");
    }
  }
  return {2, "defining and quotient relations", t.pass(), t.summary(), 0};
}

inline CriterionResult criterion_wenzl_jones(const VerifyConfig& cfg) {
  detail::Tally t;
  ParamEnv<Rational> env = sample_env<Rational>(cfg.seed, Variant(Kind::TL, 2));
  for (int m = 1; m <= cfg.cap(8); ++m) {
    const int n = m + 1;
    Algebra<Rational> T(Variant(Kind::TL, n), env);
    Element<Rational> P = wenzl_jones_P(m, n, 0, env);
    std::string tag = "m=" + std::to_string(m);
    t.check(equal(T.mul(P, P), P), tag + " idempotent");
    for (int j = 1; j < m; ++j)
      t.check(T.mul(T.e(j), P).is_zero() && T.mul(P, T.e(j)).is_zero(), tag + " annihilation");
    Element<Rational> Pm1 = wenzl_jones_P(m - 1, n, 0, env);
    Rational c = -qnum(m + 1, env) / qnum(m, env);
    t.check(equal(T.mul(T.mul(T.e(m), P), T.e(m)), c * T.mul(Pm1, T.e(m))), tag + " e_m P_m e_m");
    // both alternative recursions inside TL_m
    Algebra<Rational> Tm(Variant(Kind::TL, std::max(m, 2)), env);
    if (m >= 2) {
      Element<Rational> Pm = wenzl_jones_P(m, m, 0, env);
      Element<Rational> right = wenzl_jones_P(m - 1, m, 1, env), left = wenzl_jones_P(m - 1, m, 0, env);
      Element<Rational> s1 = Tm.id(), s2 = Tm.id();
      for (int j = 1; j <= m - 1; ++j) {
        std::vector<int> up, down;
        for (int i = 1; i <= j; ++i) up.push_back(i);
        for (int i = m - 1; i >= j; --i) down.push_back(i);
        s1 += (qnum(m - j, env) / qnum(m, env)) * Tm.word(up);
        s2 += (qnum(j, env) / qnum(m, env)) * Tm.word(down);
      }
      t.check(equal(Tm.mul(right, s1), Pm), tag + " first alternative recursion");
      t.check(equal(Tm.mul(left, s2), Pm), tag + " second alternative recursion");
    }
  }
  return {3, "Wenzl-Jones projectors", t.pass(), t.summary(), 0};
}

namespace detail {

template <class F>
void gamma_case(Variant v, const ParamEnv<F>& env, const VerifyConfig& cfg, Tally& eq, Tally& res,
                const std::string& tag) {
  GammaTable<F> s = solved(v, env, cfg);
  GammaTable<F> c = gamma_closed_form(v, env);
  eq.check(gamma_distance(s, c) == 0, tag);
  res.check(max_residual(gamma_residuals(s, env)) == 0, tag + " solver");
  res.check(max_residual(gamma_residuals(c, env)) == 0, tag + " closed form");
}

}  // namespace detail

/// Criteria 4 and 5 share their tables.
inline std::pair<CriterionResult, CriterionResult> criteria_gamma(const VerifyConfig& cfg) {
  detail::Tally eq, res;
  const int nmax = cfg.cap(14);
  for (Variant v : uncoiled_variants(nmax, true, true))
    for (std::uint64_t k = 0; k < 3; ++k) {
      std::uint64_t seed = cfg.seed + k;
      std::string tag = detail::label(v) + " seed " + std::to_string(seed);
      if (!is_affine_uncoiled(v.kind)) {
        detail::gamma_case(v, sample_env<Rational>(seed, v), cfg, eq, res, tag);
        continue;
      }
      for (int r = 0; r < v.n; ++r)
        detail::gamma_case(v, sample_env<Cyclo>(seed, v, r), cfg, eq, res, tag + " r=" + std::to_string(r));
    }
  // the closed-form kernel against its root sum
  {
    Variant v(Kind::upTL2, 6);
    ParamEnv<Rational> env = sample_env<Rational>(cfg.seed, v);
    const int M = 2;
    for (int l = -(M - 1); l <= M - 1; ++l) {
      double exact = kernel_J(v, 1, 2 * l, env).get_d();
      Complex root = kernel_J_roots(6, M, Complex(gamma_hat(v.kind, env).get_d(), 0), l, env.q().get_d());
      eq.check(std::abs(root - exact) <= 1e-9 * std::max(1.0, std::abs(exact)), "kernel root sum");
    }
  }
  return {{4, "Gamma solver equals closed form", eq.pass(), eq.summary(), 0},
          {5, "Gamma recursion residuals", res.pass(), res.summary(), 0}};
}

namespace detail {

/// Displayed small projectors, compared entry by entry.
inline void displayed_coefficients(const VerifyConfig& cfg, Tally& t) {
  {
    Variant v(Kind::upTL1, 2);
    auto env = sample_env<Rational>(cfg.seed, v);
    Rational b = env.beta(), a = env.alpha;
    t.check(solved(v, env, cfg).get(1, 0) == b / (a * a - b * b), "Q_2 coefficient");
  }
  {
    Variant v(Kind::upTL, 3);
    auto env = sample_env<Rational>(cfg.seed, v);
    Rational b = env.beta(), g = env.gamma;
    Rational want = -(b * b - 1) / (g * g + 1 / (g * g) + b * (b * b - 3));
    t.check(solved(v, env, cfg).get(1, 0) == want, "Q_3 coefficient");
  }
  {
    Variant v(Kind::upTL1, 4);
    auto env = sample_env<Rational>(cfg.seed, v);
    Rational b = env.beta(), a = env.alpha, b2 = b * b;
    GammaTable<Rational> tb = solved(v, env, cfg);
    t.check(tb.get(1, 0) == -(b2 - 2) / (b * (b2 - 4)), "Q_4 starred Z_1 coefficient");
    Rational w = b2 - 2;
    t.check(tb.get(2, 0) == -((b2 - 2) / (b2 - 4)) / (a * a - w * w), "Q_4 starred Z_2 coefficient");
  }
  {
    Variant v(Kind::upTL2, 4);
    auto env = sample_env<Rational>(cfg.seed, v);
    Rational b = env.beta(), g = env.gamma, b2 = b * b;
    Rational want = b * (b2 - 2) / (g + 1 / g - b2 * b2 + 4 * b2 - 2);
    t.check(solved(v, env, cfg).get(1, 0) == want, "Q_4 double-starred coefficient");
  }
  // Q_{3,r}: the displayed sum runs over omega^{+j} Omega^j, ours over omega^{-j}
  Variant v(Kind::uaTL, 3);
  for (int r = 0; r < 3; ++r) {
    auto env = sample_env<Cyclo>(cfg.seed, v, r);
    GammaTable<Cyclo> tb = solved(v, env, cfg);
    Cyclo wi = Cyclo(1) / env.omega;
    std::string tag = "Q_{3," + std::to_string(r) + "}";
    for (int l2 = 0; l2 < 3; ++l2)
      t.check(tb.get(0, l2) == power(wi, l2) / Cyclo(3), tag + " leading terms");
    Cyclo want = Cyclo(Rational(-1, 3)) / (wi * wi + env.omega * env.omega + Cyclo(env.beta()));
    t.check(tb.get(1, 0) == want, tag + " Z_1 coefficient");
    Algebra<Cyclo> A(v, env);
    Element<Cyclo> Q = build_projector_Q(A, tb);
    t.check(equal(A.mul(Q, Q), Q) && annihilated(A, Q), tag + " projector");
  }
}

/// Affine sectors with a rational omega.
inline std::vector<int> rational_sectors(Variant v) {
  if (!is_affine_uncoiled(v.kind)) return {-1};
  if (v.n % 2 == 0) return {0, v.n / 2};
  return {0};
}

}  // namespace detail

inline CriterionResult criterion_projectors(const VerifyConfig& cfg) {
  detail::Tally t;
  std::vector<Variant> vs = uncoiled_variants(cfg.cap(7), true, false);
  for (Variant v : uncoiled_variants(cfg.cap(6), false, true)) vs.push_back(v);
  for (Variant v : vs)
    for (int r : detail::rational_sectors(v)) {
      ParamEnv<Rational> env = sample_env<Rational>(cfg.seed, v, r);
      std::string tag = detail::label(v) + (r >= 0 ? " r=" + std::to_string(r) : "");
      Algebra<Rational> A(v, env);
      GammaTable<Rational> tb = detail::solved(v, env, cfg);
      Element<Rational> Q = build_projector_Q(A, tb);
      t.check(detail::annihilated(A, Q), tag + " annihilation");
      t.check(equal(A.mul(Q, Q), Q), tag + " idempotent");
      if (v.n <= 5) {
        t.check(equal(build_projector_Q(A, gamma_closed_form(v, env)), Q), tag + " closed form");
        std::size_t rank = 0, dim = 0;
        Element<Rational> X = projector_oracle(A, &rank, &dim);
        t.check(rank + 1 == dim, tag + " oracle rank");
        t.check(equal(X, Q), tag + " oracle");
      }
    }
  detail::displayed_coefficients(cfg, t);
  return {6, "projector verification", t.pass(), t.summary(), 0};
}

inline CriterionResult criterion_e0Z(const VerifyConfig& cfg) {
  detail::Tally t;
  for (Variant v : uncoiled_variants(cfg.cap(7), true, true)) {
    auto env = sample_env<Rational>(cfg.seed, v);
    for (const RelationCheck& c : check_e0Z(v, env))
      t.check(c.zero, detail::label(v) + " " + c.name + " k=" + std::to_string(c.k) +
                          " l2=" + std::to_string(c.l2));
  }
  return {7, "e0 Z expansion", t.pass(), t.summary(), 0};
}

inline CriterionResult criterion_central(const VerifyConfig& cfg) {
  detail::Tally t;
  const Rational zs[] = {Rational(2, 5), Rational(-7, 3)};
  for (int n = 2; n <= cfg.cap(6); ++n) {
    Variant v(Kind::aTL, n);
    ParamEnv<Rational> env = sample_env<Rational>(cfg.seed, v);
    Algebra<Rational> A(v, env);
    std::vector<std::pair<Central, int>> which{
        {Central::F, 0}, {Central::Fbar, 0}, {Central::OmegaN, 0}, {Central::OmegaMinusN, 0}};
    for (int k2 = 1; n * k2 <= 24; ++k2)
      if (n % 2 == 0 || k2 % 2 == 0) which.push_back({Central::H, k2});
    for (auto [c, k2] : which) {
      Element<Rational> el = build_central(A, c, k2);
      for (int d = n % 2; d <= n; d += 2)
        for (const Rational& z : zs) {
          StandardModule<Rational> W(n, d, z, env);
          t.check(matrix_of(el, W) == central_eigenvalue(c, W, env, k2) * Matrix<Rational>::identity(W.dim()),
                  std::string(central_name(c)) + " n=" + std::to_string(n) + " k2=" + std::to_string(k2) +
                      " d=" + std::to_string(d));
        }
    }
    if (n <= 5) {
      Element<Rational> G = build_central(A, Central::G);
      bool even = true;
      for (const auto& kv : G.terms) even = even && is_even(kv.first);
      t.check(even, "G periodic n=" + std::to_string(n));
      for (int j = 0; j < n; ++j)
        t.check(equal(A.mul(G, A.e(j)), A.mul(A.e(j), G)), "G central n=" + std::to_string(n));
      for (int d = n % 2; d <= n; d += 2) {
        StandardModule<Rational> W(n, d, zs[0], env);
        t.check(matrix_of(G, W) == central_eigenvalue(Central::G, W, env) * Matrix<Rational>::identity(W.dim()),
                "G scalar n=" + std::to_string(n));
      }
    }
  }
  return {8, "central elements", t.pass(), t.summary(), 0};
}

inline CriterionResult criterion_modules(const VerifyConfig& cfg) {
  detail::Tally t;
  for (int n = 2; n <= cfg.cap(6); ++n) {
    Variant v(Kind::aTL, n);
    Algebra<Rational> A(v, sample_env<Rational>(cfg.seed, v));
    for (int d = n % 2; d <= n; d += 2)
      for (Rational z : {Rational(3, 5), Rational(-4, 7)})
        t.check(sign_conjugation_holds(A, d, z), "sign conjugation n=" + std::to_string(n));
  }
  for (Variant v : uncoiled_variants(cfg.cap(6), true, true))
    for (int r : detail::rational_sectors(v)) {
      ParamEnv<Rational> env = sample_env<Rational>(cfg.seed, v, r);
      Algebra<Rational> A(v, env);
      Element<Rational> Q = build_projector_Q(A, detail::solved(v, env, cfg));
      const int n = v.n;
      std::string tag = detail::label(v) + (r >= 0 ? " r=" + std::to_string(r) : "");
      for (int d = n % 2; d <= n; d += 2) {
        if (d == 0 && !is_starred(v.kind)) continue;
        auto [W, g] = detail::module_window(v.kind, d, env);
        SectorMatrix<Rational> S = sector_matrix(Q, d, W, g, env.alpha, env.beta());
        if (d < n) {
          t.check(S.is_zero(), tag + " d=" + std::to_string(d));
          continue;
        }
        std::vector<Rational> p;
        for (const auto& M : S.coeffs) p.push_back(M(0, 0));
        if (!is_affine_uncoiled(v.kind)) {
          bool ok = p[0] == 1;
          for (std::size_t i = 1; i < p.size(); ++i) ok = ok && p[i] == 0;
          t.check(ok, tag + " top sector");
          continue;
        }
        // on W_{n,n,z} with z^n = gamma the action is 1 at z = omega and 0 at the other roots
        const Rational& w = env.omega;
        bool ok = true;
        for (int i = 0; i < W; ++i) {
          Rational prev = i == 0 ? g * p[std::size_t(W - 1)] : p[std::size_t(i - 1)];
          ok = ok && prev == w * p[std::size_t(i)];
        }
        Rational at = 0;
        for (int i = 0; i < W; ++i) at += p[std::size_t(i)] * power(w, i);
        t.check(ok && at == 1, tag + " top sector");
      }
    }
  return {9, "module isomorphisms and projector action", t.pass(), t.summary(), 0};
}

inline CriterionResult criterion_appendix_and_float(const VerifyConfig& cfg) {
  detail::Tally t;
  for (long n = 1; n <= 40; ++n)
    t.check(defect_weighted_sum(n) == defect_weighted_closed_form(n), "D(" + std::to_string(n) + ")");
  for (Variant pv : uncoiled_variants(cfg.cap(5), true, false)) {
    const int n = pv.n;
    ParamEnv<Rational> re = sample_env<Rational>(cfg.seed, pv);
    ParamEnv<Complex> pe;
    pe.s = Complex(re.s.get_d(), 0);
    pe.alpha = Complex(re.alpha.get_d(), 0);
    pe.gamma = Complex(re.gamma.get_d(), 0);
    Algebra<Complex> P(pv, pe);
    Element<Complex> Qn = build_projector_Q(P, detail::solved(pv, pe, cfg));
    Variant av(affine_partner(pv.kind), n);
    Element<Complex> sum(av);
    Complex base = std::pow(pe.gamma, 1.0 / n);
    for (int r = 0; r < n; ++r) {
      ParamEnv<Complex> ae = pe;
      ae.r = r;
      ae.omega = base * std::polar(1.0, 2 * std::numbers::pi * r / n);
      ae.gamma = pe.gamma;
      Algebra<Complex> A(av, ae);
      sum += build_projector_Q(A, detail::solved(av, ae, cfg));
    }
    Algebra<Complex> A0(av, pe);
    Element<Complex> diff = A0.embed(Qn);
    diff -= sum;
    double scale = std::max(1.0, max_abs(Qn));
    t.check(max_abs(diff) <= 1e-9 * scale, detail::label(pv) + " sector sum");
  }
  return {10, "appendix identity and sector sum", t.pass(), t.summary(), 0};
}

/// Runs every criterion in order; on_result is called as each one finishes.
inline std::vector<CriterionResult> run_acceptance(const VerifyConfig& cfg,
                                                   const std::function<void(const CriterionResult&)>& on_result = {}) {
  std::vector<CriterionResult> out;
  auto timed = [&](auto&& fn) {
    auto t0 = std::chrono::steady_clock::now();
    auto r = fn();
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return std::make_pair(r, s);
  };
  auto push = [&](CriterionResult r, double s) {
    r.seconds = s;
    out.push_back(r);
    if (on_result) on_result(out.back());
  };
  auto guarded = [&](int id, const char* name, auto&& fn) {
    try {
      auto [r, s] = timed(fn);
      push(r, s);
    } catch (const std::exception& e) {
      push({id, name, false, std::string("exception: ") + e.what(), 0}, 0);
    }
  };
  guarded(1, "dimensions", [&] { return criterion_dimensions(cfg); });
  guarded(2, "defining and quotient relations", [&] { return criterion_relations(cfg); });
  guarded(3, "Wenzl-Jones projectors", [&] { return criterion_wenzl_jones(cfg); });
  try {
    auto [rs, s] = timed([&] { return criteria_gamma(cfg); });
    push(rs.first, s);
    push(rs.second, 0);
  } catch (const std::exception& e) {
    push({4, "Gamma solver equals closed form", false, std::string("exception: ") + e.what(), 0}, 0);
    push({5, "Gamma recursion residuals", false, std::string("exception: ") + e.what(), 0}, 0);
  }
  guarded(6, "projector verification", [&] { return criterion_projectors(cfg); });
  guarded(7, "e0 Z expansion", [&] { return criterion_e0Z(cfg); });
  guarded(8, "central elements", [&] { return criterion_central(cfg); });
  guarded(9, "module isomorphisms and projector action", [&] { return criterion_modules(cfg); });
  guarded(10, "appendix identity and sector sum", [&] { return criterion_appendix_and_float(cfg); });
  return out;
}

}  // namespace utl
