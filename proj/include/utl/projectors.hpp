#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "utl/algebra.hpp"
#include "utl/errors.hpp"
#include "utl/linalg.hpp"
#include "utl/scalars.hpp"
#include "utl/variant.hpp"

namespace utl {

// ------------------------------------------------------------ Wenzl-Jones

/// P_m on strands offset..offset+m-1 of TL_n, by the recursion
/// P_m = P_{m-1} + [m-1]/[m] P_{m-1} e_{m-1} P_{m-1}.
template <class F>
Element<F> wenzl_jones_P(int m, int n, int offset, const ParamEnv<F>& env) {
  if (m < 0 || offset < 0 || offset + m > n) throw InvalidInput("strand window out of range");
  Algebra<F> T(Variant(Kind::TL, n), env);
  Element<F> P = T.id();
  for (int j = 2; j <= m; ++j) {
    Element<F> e = T.e(offset + j - 1);
    F c = qnum(j - 1, env) / qnum(j, env);
    P = P + c * T.mul(T.mul(P, e), P);
  }
  return P;
}

// ------------------------------------------------------------ coefficients

/// The f^i_{k,l} coefficients at a fixed n; half-integer l is passed as l2 = 2l.
template <class F>
class FCoeffs {
 public:
  FCoeffs(int n, const ParamEnv<F>& env) : n_(n), off_(4 * n + 8) {
    for (int j = -off_; j <= off_; ++j) q_.push_back(qnum(j, env));
    den_ = F(1) / (qn(n - 1) * qn(n));
  }
  const F& qn(int j) const {
    if (j < -off_ || j > off_) throw InvalidInput("q-number index out of range");
    return q_[std::size_t(j + off_)];
  }
  F f1(int k) const { return -qn(n_ - k) * qn(k) * qn(2 * n_) * den_ / qn(n_); }
  F f2(int k) const { return qn(n_ - k) * qn(k) * den_; }
  F f3a(int k, int l2) const { return qn(n_ - k) * qn(n_ - k - l2 - 1) * den_; }
  F f3b(int k, int l2) const { return qn(k + l2) * qn(k + 1) * den_; }
  F f4a(int k, int l2) const { return qn(n_ - k - 1) * qn(k + l2) * den_; }
  F f4b(int k, int l2) const { return qn(n_ - k - l2 + 1) * qn(k) * den_; }
  F f5(int k, int l2) const { return qn(n_ - k - l2) * qn(k + l2) * den_; }
  F f3(int k, int l2) const { return f3a(k, l2) + f3b(k, l2); }
  F f4(int k, int l2) const { return f4a(k, l2) + f4b(k, l2); }

 private:
  int n_, off_;
  std::vector<F> q_;
  F den_;
};

// ------------------------------------------------------------ Gamma tables

inline void require_projector_variant(Variant v) {
  v.validate();
  if (!is_uncoiled(v.kind)) throw InvalidInput("projectors are defined for the uncoiled kinds");
  bool odd = v.kind == Kind::uaTL || v.kind == Kind::upTL;
  if (odd && (v.n % 2 == 0 || v.n < 3)) throw InvalidInput("this kind needs odd n >= 3");
  if (!odd && (v.n % 2 == 1 || v.n < 2)) throw InvalidInput("this kind needs even n >= 2");
}

/// Largest k constrained by the recursion in l.
inline int recursion_kmax(int n) { return n % 2 == 1 ? (n - 1) / 2 : (n - 2) / 2; }

/// Stored indices l2 = 2l at level k.
inline std::vector<int> gamma_grid(Kind kind, int n, int k) {
  std::vector<int> g;
  if (2 * k == n) {
    if (is_starred(kind)) g.push_back(0);
    return g;
  }
  int M2 = n - 2 * k;
  if (kind == Kind::upTL) {
    for (int l2 = 0; l2 < 2 * M2; l2 += 2) g.push_back(l2);
  } else if (is_periodic(kind)) {
    for (int l2 = 0; l2 < M2; l2 += 2) g.push_back(l2);
  } else {
    for (int l2 = 0; l2 < M2; ++l2) g.push_back(l2);
  }
  return g;
}

template <class F>
struct GammaTable {
  Variant variant{Kind::upTL2, 2};
  int r = -1;
  F ghat = F(1);
  std::map<std::pair<int, int>, F> entries;

  F get(int k, int l2) const {
    auto it = entries.find({k, l2});
    return it == entries.end() ? F(0) : it->second;
  }

  /// Gamma_{k,l} for any l, through Gamma_{k,l+m_k} = ghat^{-1} Gamma_{k,l}.
  F value(int k, int l2) const {
    const int n = variant.n;
    if (k < 0 || 2 * k > n) return F(0);
    if (2 * k == n) {
      if (l2 != 0) throw InvalidInput("Gamma at d = 0 exists for l = 0 only");
      return get(k, 0);
    }
    int M2 = n - 2 * k;
    long q = floor_div(l2, M2);
    int red = int(l2 - q * M2);
    F f = power(ghat, -q);
    if (variant.kind == Kind::upTL && red % 2 == 1) return f * ghat * get(k, red + M2);
    return f * get(k, red);
  }

  nlohmann::json to_json() const {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& [key, v] : entries)
      rows.push_back({{"k", key.first}, {"l2", key.second}, {"value", ScalarTraits<F>::to_json(v)}});
    nlohmann::json j{{"variant", std::string(kind_name(variant.kind))}, {"n", variant.n},
                     {"entries", rows}};
    if (is_affine_uncoiled(variant.kind)) j["r"] = r;
    return j;
  }
};

template <class F>
GammaTable<F> gamma_initial(Variant v, const ParamEnv<F>& env) {
  require_projector_variant(v);
  GammaTable<F> t;
  t.variant = v;
  t.r = env.r;
  t.ghat = gamma_hat(v.kind, env);
  const int n = v.n;
  for (int l2 : gamma_grid(v.kind, n, 0)) {
    if (is_affine_uncoiled(v.kind))
      t.entries[{0, l2}] = power(env.omega, -l2) / F(n);
    else
      t.entries[{0, l2}] = l2 == 0 ? F(1) : F(0);
  }
  return t;
}

/// One term c X_{k,l} of an expansion, with l2 = 2l.
template <class F>
struct XTerm {
  int k, l2;
  F c;
};

/// e_0 Z_{k,l} written in the X_{k',l'}; at the top levels of the starred kinds
/// the d = 0 sector replaces the generic coefficients.
template <class F>
std::vector<XTerm<F>> e0Z_expansion(Kind kind, int n, int k, int l2, const FCoeffs<F>& f,
                                    const F& alpha) {
  std::vector<XTerm<F>> out;
  const int h = n / 2;
  F nn = f.qn(n) * f.qn(n - 1);
  if (is_starred(kind) && 2 * k == n) {
    out.push_back({h, 0, (alpha * alpha * f.qn(h) * f.qn(h) - f.qn(n) * f.qn(n)) / nn});
    return out;
  }
  if (is_starred(kind) && k == h - 1) {
    if (k >= 1) out.push_back({k, l2, f.f1(k) + F(2) * f.f2(k)});
    F top = l2 == 0 ? F(f.qn(h) * f.qn(h) * f.qn(2) / nn) : F(alpha * f.qn(h) * f.qn(h) / nn);
    out.push_back({h, 0, top});
    return out;
  }
  const int M2 = n - 2 * k;
  auto push = [&](int kk, int ll, F c) {
    if (n - 2 * kk >= 0) out.push_back({kk, ll, std::move(c)});
  };
  if (k >= 1) {
    push(k, l2, f.f1(k));
    push(k, l2 - 2, f.f2(k));
    push(k, l2 + 2, f.f2(k));
  }
  push(k + 1, l2, (l2 == M2 - 1 ? F(0) : f.f3a(k, l2)) + f.f3b(k, l2));
  if (l2 != 0) push(k + 1, l2 - 2, f.f4a(k, l2) + (l2 == 1 ? F(0) : f.f4b(k, l2)));
  if (l2 != 0 && l2 != 1 && l2 != M2 - 1) push(k + 2, l2 - 2, f.f5(k, l2));
  return out;
}

/// Source indices l2 of Z at level k in the half-integer presentation.
inline std::vector<int> source_grid(Kind kind, int n, int k) {
  if (2 * k == n) return is_starred(kind) ? std::vector<int>{0} : std::vector<int>{};
  std::vector<int> g;
  for (int l2 = 0; l2 < n - 2 * k; ++l2) g.push_back(l2);
  return g;
}

/// Coefficients of the X_{k,l} (k >= 1, l reduced mod m_k) in e_0 times the
/// part of the projector carried by levels kmin..kmax.
template <class F>
std::map<std::pair<int, int>, F> collect_x(const GammaTable<F>& t, const FCoeffs<F>& f,
                                           const F& alpha, int kmin, int kmax) {
  const int n = t.variant.n;
  std::map<std::pair<int, int>, F> out;
  for (int k = std::max(kmin, 0); k <= kmax && 2 * k <= n; ++k)
    for (int l2 : source_grid(t.variant.kind, n, k)) {
      F w = t.value(k, l2);
      if (ScalarTraits<F>::is_zero(w)) continue;
      for (const XTerm<F>& x : e0Z_expansion(t.variant.kind, n, k, l2, f, alpha)) {
        if (x.k == 0) continue;
        if (2 * x.k == n) {
          out[{x.k, 0}] += w * x.c;
          continue;
        }
        int M2 = n - 2 * x.k;
        long q = floor_div(x.l2, M2);
        out[{x.k, int(x.l2 - q * M2)}] += w * x.c * power(t.ghat, q);
      }
    }
  return out;
}

/// Closed-form kernel J on a chain of length M with twist g, at integer offset l.
template <class F>
F chain_kernel(int n, int M, const F& g, int l, const ParamEnv<F>& env) {
  if (l <= -M || l >= M) throw InvalidInput("kernel offset out of range");
  F q = env.q();
  F qn = power(q, n);
  F pre = F(-1) / (qn - F(1) / qn);
  F acc = F(0);
  for (int sigma = -1; sigma <= 1; sigma += 2) {
    F qM = power(q, long(sigma) * n * M);
    F num = power(q, long(sigma) * n * (l >= 0 ? l : -l));
    F den = l >= 0 ? F(qM / g - F(1)) : F(g * qM - F(1));
    acc += F(sigma) * num / den;
  }
  return pre * acc;
}

/// J_k(l) with l2 = 2l; even n uses the chain (m_k, ghat), odd n the chain (2 m_k, ghat^2).
template <class F>
F kernel_J(Variant v, int k, int l2, const ParamEnv<F>& env) {
  require_projector_variant(v);
  const int n = v.n;
  if (k < 1 || k > recursion_kmax(n)) throw InvalidInput("kernel level out of range");
  if (l2 % 2 != 0) throw InvalidInput("kernel offsets are integers");
  F gh = gamma_hat(v.kind, env);
  int M2 = n - 2 * k;
  if (n % 2 == 0) return chain_kernel(n, M2 / 2, gh, l2 / 2, env);
  return chain_kernel(n, M2, F(gh * gh), l2 / 2, env);
}

/// Floating root sum for the same kernel: (1/M) sum_s y_s^l / (y_s + 1/y_s - q^n - q^-n).
inline Complex kernel_J_roots(int n, int M, Complex g, int l, double q) {
  using std::pow;
  Complex base = std::pow(g, 1.0 / M);
  double c = pow(q, n) + pow(q, -n);
  Complex acc = 0;
  for (int s = 0; s < M; ++s) {
    Complex y = base * std::polar(1.0, 2 * M_PI * s / M);
    acc += std::pow(y, l) / (y + 1.0 / y - c);
  }
  return acc / double(M);
}

/// Solves the recursion level by level with the kernel J.
template <class F>
GammaTable<F> gamma_solve(Variant v, const ParamEnv<F>& env) {
  require_projector_variant(v);
  validate_env(v.kind, v.n, env);
  const int n = v.n;
  GammaTable<F> t = gamma_initial(v, env);
  FCoeffs<F> f(n, env);
  const F gh = t.ghat;
  const bool periodic_even = is_periodic(v.kind) && n % 2 == 0;
  for (int k = 1; k <= recursion_kmax(n); ++k) {
    const int M2 = n - 2 * k;
    std::vector<F> R(std::size_t(M2), F(0));
    auto low = collect_x(t, f, env.alpha, k - 2, k - 1);
    for (int l2 = 0; l2 < M2; ++l2) R[std::size_t(l2)] = low[{k, l2}];
    F scale = F(-1) / f.f2(k);
    // chain positions p map to (l2, c) with Gamma(p) = c * Gamma_{k, l2}
    struct Slot { int l2; F c; };
    std::vector<std::vector<Slot>> chains;
    F g;
    if (n % 2 == 0) {
      g = gh;
      for (int par = 0; par < 2; ++par) {
        if (par == 1 && periodic_even) break;
        std::vector<Slot> ch;
        for (int l2 = par; l2 < M2; l2 += 2) ch.push_back({l2, F(1)});
        chains.push_back(ch);
      }
    } else {
      g = gh * gh;
      std::vector<Slot> ch;
      for (int p = 0; p < M2; ++p) {
        if (2 * p < M2)
          ch.push_back({2 * p, F(1)});
        else
          ch.push_back({2 * p - M2, F(1) / gh});
      }
      chains.push_back(ch);
    }
    for (const auto& ch : chains) {
      const int M = int(ch.size());
      std::vector<F> J(std::size_t(2 * M - 1));
      for (int l = -(M - 1); l <= M - 1; ++l) J[std::size_t(l + M - 1)] = chain_kernel(n, M, g, l, env);
      for (int p = 0; p < M; ++p) {
        F acc = F(0);
        for (int pp = 0; pp < M; ++pp)
          acc += J[std::size_t(pp - p + M - 1)] * ch[std::size_t(pp)].c * R[std::size_t(ch[std::size_t(pp)].l2)];
        F val = scale * acc;
        if (v.kind == Kind::upTL)
          t.entries[{k, 2 * p}] = val;
        else
          t.entries[{k, ch[std::size_t(p)].l2}] = val / ch[std::size_t(p)].c;
      }
    }
  }
  if (is_starred(v.kind)) {
    const int h = n / 2;
    F rest = collect_x(t, f, env.alpha, 0, h - 1)[{h, 0}];
    F a = e0Z_expansion(v.kind, n, h, 0, f, env.alpha).front().c;
    t.entries[{h, 0}] = -rest / a;
  }
  return t;
}

/// Residual of the recursion in l at every (k, l2), written out term by term;
/// the d = 0 condition of the starred kinds is keyed by k = n/2.
template <class F>
std::vector<std::pair<std::pair<int, int>, F>> gamma_residuals(const GammaTable<F>& t,
                                                               const ParamEnv<F>& env) {
  const int n = t.variant.n;
  FCoeffs<F> f(n, env);
  auto G = [&](int kk, int ll) { return t.value(kk, ll); };
  std::vector<std::pair<std::pair<int, int>, F>> out;
  for (int k = 1; k <= recursion_kmax(n); ++k) {
    const int M2 = n - 2 * k;
    for (int l2 = 0; l2 < M2; ++l2) {
      F acc = f.f1(k) * G(k, l2) + f.f2(k) * (G(k, l2 - 2) + G(k, l2 + 2));
      acc += f.f3(k - 1, l2) * G(k - 1, l2) + f.f4(k - 1, l2 + 2) * G(k - 1, l2 + 2);
      if (k >= 2) acc += f.f5(k - 2, l2 + 2) * G(k - 2, l2 + 2);
      if (l2 == 0) {
        acc += f.f3(k - 1, M2) * G(k - 1, -2);
        if (k >= 2) acc += f.f5(k - 2, M2 + 2) * G(k - 2, -2);
      }
      // for m_k = 1/2 the l = 1/2 term lands on l = 0 one period further on
      if (M2 == 1 && l2 == 0) acc += t.ghat * f.f3b(k - 1, M2 + 1) * G(k - 1, -1);
      if (M2 > 1 && l2 == 1) acc += f.f3b(k - 1, M2 + 1) * G(k - 1, -1);
      if (l2 == M2 - 1) acc += f.f4a(k - 1, 1) * G(k - 1, M2 + 3);
      out.push_back({{k, l2}, acc});
    }
  }
  if (is_starred(t.variant.kind)) {
    const int h = n / 2;
    F nn = f.qn(n) * f.qn(n - 1);
    F acc = (env.alpha * env.alpha * f.qn(h) * f.qn(h) - f.qn(n) * f.qn(n)) / nn * G(h, 0) +
            f.qn(h) * f.qn(h) / nn * (f.qn(2) * G(h - 1, 0) + env.alpha * G(h - 1, 1));
    if (h >= 2) acc += f.f5(h - 2, 2) * G(h - 2, 2);
    out.push_back({{h, 0}, acc});
  }
  return out;
}

/// Largest residual magnitude (exact backends report 0 or 1).
template <class F>
double max_residual(const std::vector<std::pair<std::pair<int, int>, F>>& res) {
  double worst = 0;
  for (const auto& kv : res) {
    if constexpr (ScalarTraits<F>::exact) {
      if (!ScalarTraits<F>::is_zero(kv.second)) worst = 1;
    } else {
      worst = std::max(worst, std::abs(kv.second));
    }
  }
  return worst;
}

// ------------------------------------------------------------ closed forms

/// Readings of the affine closed form; Printed keeps sigma in the denominator exponent.
enum class AffineReading { Printed, Unsigned };

namespace detail {

template <class F>
F qfactorial(int k, const FCoeffs<F>& f) {
  F r = F(1);
  for (int j = 1; j <= k; ++j) r *= f.qn(j);
  return r;
}

template <class F>
F qbinomial(int a, int b, const FCoeffs<F>& f) {
  if (b < 0 || b > a) return F(0);
  return qfactorial(a, f) / (qfactorial(b, f) * qfactorial(a - b, f));
}

template <class F>
F rising(int start, int len, const FCoeffs<F>& f) {
  F r = F(1);
  for (int j = 0; j < len; ++j) r *= f.qn(start + j);
  return r;
}

template <class F>
F closed_prefactor(int k, const FCoeffs<F>& f, const ParamEnv<F>& env) {
  F q = env.q();
  F fk = qfactorial(k - 1, f);
  return F(1) / (power(F(q - F(1) / q), 2 * k - 1) * f.qn(k) * fk * fk);
}

/// Closed form for the periodic kinds with integer l = l2/2 (upTL: 0 <= l < 2 m_k).
template <class F>
F closed_periodic(Kind kind, int n, int k, int l2, const FCoeffs<F>& f, const ParamEnv<F>& env) {
  const int M2 = n - 2 * k;
  const F gh = gamma_hat(kind, env);
  const bool upper = kind == Kind::upTL && l2 > M2;
  F acc = F(0);
  for (int sigma = -1; sigma <= 1; sigma += 2)
    for (int kap = 0; kap <= k - 1; ++kap)
      for (int tau = 0; tau <= kap; ++tau) {
        int mk2 = n - 2 * (k - kap);  // 2 m_{k-kappa}
        F den;
        if (kind == Kind::upTL)
          den = env.gamma * env.gamma * power(env.s, 2L * sigma * n * mk2) - F(1);
        else
          den = gh * power(env.s, long(sigma) * n * mk2) - F(1);
        long qexp = upper ? long(sigma) * n * (l2 + 2 * kap + 2 * tau) : long(sigma) * n * (l2 + 2 * tau);
        F num = power(env.s, qexp);
        F prod = upper ? rising(2 * M2 - l2, kap - tau, f) * rising(l2 - M2, tau, f)
                       : rising(M2 - l2, kap - tau, f) * rising(l2, tau, f);
        F term = F(sigma) * num / den * qbinomial(k - 1, kap, f) * qbinomial(kap, tau, f) * prod /
                 rising(n - k, kap, f);
        acc += kap % 2 == 0 ? term : F(-term);
      }
  return closed_prefactor(k, f, env) * acc;
}

template <class F>
F closed_affine(int n, int k, int l2, const FCoeffs<F>& f, const ParamEnv<F>& env, AffineReading rd) {
  const int M2 = n - 2 * k;
  F w2 = env.omega * env.omega;
  F acc = F(0);
  for (int sigma = -1; sigma <= 1; sigma += 2)
    for (int kap = 0; kap <= k - 1; ++kap)
      for (int tau = 0; tau <= kap; ++tau) {
        int mk2 = n - 2 * (k - kap);
        long dexp = rd == AffineReading::Printed ? 2L * sigma * mk2 : 2L * mk2;
        F den = w2 * power(env.s, dexp) - F(1);
        F num = power(env.s, long(sigma) * (2L * l2 * (k - kap) + 2L * n * tau));
        F term = F(sigma) * num / den * qbinomial(k - 1, kap, f) * qbinomial(kap, tau, f) *
                 rising(M2 - l2, kap - tau, f) * rising(l2, tau, f) / rising(n - k, kap, f);
        acc += kap % 2 == 0 ? term : F(-term);
      }
  return power(env.omega, -l2) / F(n) * closed_prefactor(k, f, env) * acc;
}

template <class F>
F closed_top(Kind kind, int n, const FCoeffs<F>& f, const ParamEnv<F>& env) {
  const int h = n / 2;
  F q = env.q();
  F fh = qfactorial(h - 1, f);
  F base = F(1) / (power(F(q - F(1) / q), n - 2) * fh * fh);
  if (kind == Kind::upTL1)
    return -base * f.qn(n) * f.qn(h) / (env.alpha * env.alpha * f.qn(h) * f.qn(h) - f.qn(n) * f.qn(n));
  if (scalar_equal(env.omega, F(1))) return -base / F(2) * f.qn(h) / (env.alpha * f.qn(h) - f.qn(n));
  if (scalar_equal(env.omega, F(-1))) return base / F(2) * f.qn(h) / (env.alpha * f.qn(h) + f.qn(n));
  return F(0);
}

}  // namespace detail

/// Gamma from the closed-form expressions.
template <class F>
GammaTable<F> gamma_closed_form(Variant v, const ParamEnv<F>& env,
                                AffineReading rd = AffineReading::Printed) {
  require_projector_variant(v);
  validate_env(v.kind, v.n, env);
  const int n = v.n;
  GammaTable<F> t = gamma_initial(v, env);
  FCoeffs<F> f(n, env);
  for (int k = 1; k <= recursion_kmax(n); ++k)
    for (int l2 : gamma_grid(v.kind, n, k)) {
      if (is_affine_uncoiled(v.kind))
        t.entries[{k, l2}] = detail::closed_affine(n, k, l2, f, env, rd);
      else
        t.entries[{k, l2}] = detail::closed_periodic(v.kind, n, k, l2, f, env);
    }
  if (is_starred(v.kind)) t.entries[{n / 2, 0}] = detail::closed_top(v.kind, n, f, env);
  return t;
}

/// Largest deviation between two tables (0 or 1 for exact backends).
template <class F>
double gamma_distance(const GammaTable<F>& a, const GammaTable<F>& b) {
  double worst = 0;
  auto one = [&](const F& x, const F& y) {
    if constexpr (ScalarTraits<F>::exact) {
      if (!ScalarTraits<F>::equal(x, y)) worst = 1;
    } else {
      worst = std::max(worst, std::abs(x - y) / std::max(1.0, std::abs(y)));
    }
  };
  for (const auto& [key, x] : a.entries) one(x, b.get(key.first, key.second));
  for (const auto& [key, y] : b.entries) one(a.get(key.first, key.second), y);
  return worst;
}

// ------------------------------------------------------------ sandwiches

/// v_k: k arcs through the seam joining i and n-1-i, defects in the middle.
inline LinkState seam_state(int n, int k) {
  if (n < 1 || n > kMaxNodes || k < 0 || 2 * k > n) throw InvalidInput("seam state out of range");
  LinkState ls = all_defects(n);
  for (int i = 0; i < k; ++i) {
    ls.v[i] = std::int8_t((n - 1 - i) | LinkState::kSeamBit);
    ls.v[n - 1 - i] = std::int8_t(i | LinkState::kSeamBit);
  }
  return ls;
}

/// u_k: the arc (0,1), then k-1 seam arcs joining i and n+1-i.
inline LinkState shifted_seam_state(int n, int k) {
  if (n < 2 || n > kMaxNodes || k < 1 || 2 * k > n) throw InvalidInput("seam state out of range");
  LinkState ls = all_defects(n);
  ls.v[0] = 1;
  ls.v[1] = 0;
  for (int i = 2; i <= k; ++i) {
    ls.v[i] = std::int8_t((n + 1 - i) | LinkState::kSeamBit);
    ls.v[n + 1 - i] = std::int8_t(i | LinkState::kSeamBit);
  }
  return ls;
}

/// The elements Z, X, Y of an uncoiled algebra, with the Wenzl-Jones factors cached.
template <class F>
class Sandwich {
 public:
  explicit Sandwich(const Algebra<F>& A)
      : A_(A),
        Pn_(A.embed(wenzl_jones_P(A.n(), A.n(), 0, A.env()))),
        Pn2_(A.embed(wenzl_jones_P(A.n() - 2, A.n(), 1, A.env()))),
        Pn1_(A.embed(wenzl_jones_P(A.n() - 1, A.n(), 1, A.env()))) {}

  const Algebra<F>& algebra() const { return A_; }
  const Element<F>& P() const { return Pn_; }

  Element<F> core(const LinkState& bottom, const LinkState& top, int mid) const {
    int n = A_.n(), d = bottom.defects(n);
    return A_.element(Diagram{n, d, bottom, top, d == 0 ? 0 : mid});
  }

  Element<F> Z(int k, int l2) const {
    LinkState v = seam_state(A_.n(), k);
    return A_.mul(A_.mul(Pn_, core(v, v, l2)), Pn_);
  }
  Element<F> X(int k, int l2) const {
    LinkState v = seam_state(A_.n(), k);
    return A_.mul(A_.mul(Pn2_, core(v, v, l2)), Pn_);
  }
  Element<F> Y(int k, int l2) const {
    const int n = A_.n();
    Element<F> c = core(shifted_seam_state(n, k), seam_state(n, k), l2 - 1);
    return A_.mul(A_.mul(A_.e(0), A_.mul(Pn1_, c)), Pn_);
  }

 private:
  const Algebra<F>& A_;
  Element<F> Pn_, Pn2_, Pn1_;
};

/// Sum of Gamma_{k,l} Z_{k,l} over the stored grid.
template <class F>
Element<F> build_projector_Q(const Algebra<F>& A, const GammaTable<F>& t) {
  if (A.variant() != t.variant) throw InvalidInput("table and algebra disagree");
  Sandwich<F> S(A);
  Element<F> Q = A.zero();
  for (const auto& [key, g] : t.entries) {
    if (ScalarTraits<F>::is_zero(g)) continue;
    Q += g * S.Z(key.first, key.second);
  }
  return Q;
}

/// Projector from the annihilation conditions alone: e_j X = 0 for all j,
/// Omega X = omega X in the affine kinds, normalised by X^2 = X.
template <class F>
Element<F> projector_oracle(const Algebra<F>& A, std::size_t* rank_out = nullptr,
                            std::size_t* dim_out = nullptr) {
  const Variant v = A.variant();
  const int n = v.n;
  std::vector<Diagram> basis = basis_enumerate(v);
  std::unordered_map<Diagram, std::size_t, DiagramHash> col;
  for (std::size_t i = 0; i < basis.size(); ++i) col[basis[i]] = i;
  std::map<std::pair<int, Diagram>, std::size_t> row_of;
  std::vector<std::vector<std::pair<std::size_t, F>>> rows;
  auto add = [&](int tag, const Element<F>& img, std::size_t c) {
    for (const auto& [D, x] : img.terms) {
      auto key = std::make_pair(tag, D);
      auto it = row_of.find(key);
      if (it == row_of.end()) {
        it = row_of.emplace(key, rows.size()).first;
        rows.emplace_back();
      }
      rows[it->second].push_back({c, x});
    }
  };
  for (std::size_t c = 0; c < basis.size(); ++c) {
    Element<F> b = A.element(basis[c]);
    for (int j = 0; j < n; ++j) add(j, A.mul(A.e(j), b), c);
    if (is_affine_uncoiled(v.kind)) add(n, A.mul(A.omega(1), b) - A.env().omega * b, c);
  }
  Matrix<F> M(rows.size(), basis.size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (const auto& [c, x] : rows[r]) M(r, c) += x;
  auto ker = nullspace(M);
  if (rank_out) *rank_out = basis.size() - ker.size();
  if (dim_out) *dim_out = basis.size();
  if (ker.size() != 1) throw NonGenericError("annihilator is not one-dimensional");
  Element<F> X = A.zero();
  for (std::size_t c = 0; c < basis.size(); ++c) X.add_term(basis[c], ker[0][c]);
  Element<F> X2 = A.mul(X, X);
  const auto& [D0, x0] = *X.terms.begin();
  F lambda = X2.coeff(D0) / x0;
  if (ScalarTraits<F>::is_zero(lambda)) throw NonGenericError("annihilator squares to zero");
  if (!equal(X2, lambda * X)) throw VerificationFailure("annihilator is not an eigenvector of itself");
  return (F(1) / lambda) * X;
}

// ------------------------------------------------------------ e0 Z relations

struct RelationCheck {
  std::string name;
  int k = 0, l2 = 0;
  bool zero = false;
  std::size_t terms = 0;
};

/// Checks the action of e_0 on every Z_{k,l} against its expansion in X and Y.
/// Periodic kinds are checked in their affine partner, where half-integer l exists.
template <class F>
std::vector<RelationCheck> check_e0Z(Variant v, const ParamEnv<F>& env) {
  require_projector_variant(v);
  const Variant av(affine_partner(v.kind), v.n);
  const int n = v.n;
  ParamEnv<F> e = env;
  if (!is_affine_uncoiled(v.kind)) {
    // any omega works for the relations, which never see it
    e.omega = F(1);
    e.gamma = is_starred(v.kind) ? F(1) : env.gamma;
  }
  Algebra<F> A(av, e);
  Sandwich<F> S(A);
  FCoeffs<F> f(n, e);
  std::vector<RelationCheck> out;
  auto record = [&](std::string name, int k, int l2, const Element<F>& res) {
    RelationCheck c{std::move(name), k, l2, false, res.size()};
    if constexpr (ScalarTraits<F>::exact) {
      c.zero = res.is_zero();
    } else {
      c.zero = max_abs(res) < 1e-8;
    }
    out.push_back(c);
  };
  auto X = [&](int k, int l2) {
    if (n - 2 * k < 0) return A.zero();
    return S.X(k, l2);
  };
  const Element<F> e0 = A.e(0);
  const bool star = is_starred(v.kind);
  auto qn = [&](int j) { return f.qn(j); };

  // k = 0
  for (int l2 = 0; l2 < n; ++l2) {
    Element<F> lhs = A.mul(e0, S.Z(0, l2));
    Element<F> rhs = (qn(n - l2 - 1) / qn(n - 1)) * X(1, l2) + (qn(l2) / qn(n)) * S.Y(1, l2);
    record("e0Z0", 0, l2, lhs - rhs);
  }
  // every level through the shared expansion
  const int top = star ? n / 2 : recursion_kmax(n);
  for (int k = 0; k <= top; ++k)
    for (int l2 : source_grid(av.kind, n, k)) {
      Element<F> rhs = A.zero();
      for (const XTerm<F>& x : e0Z_expansion(av.kind, n, k, l2, f, e.alpha))
        if (x.k >= 1) rhs += x.c * X(x.k, x.l2);
      record("e0Z", k, l2, A.mul(e0, S.Z(k, l2)) - rhs);
    }
  return out;
}

}  // namespace utl
