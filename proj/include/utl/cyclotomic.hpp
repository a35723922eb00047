#pragma once

#include <gmpxx.h>

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "utl/errors.hpp"

namespace utl {

/// Arithmetic data of Q(zeta_N): the cyclotomic polynomial Phi_N.
struct CycloContext {
  int order = 1;
  int degree = 1;
  std::vector<mpz_class> phi;  // monic, phi[degree] == 1
};

namespace detail {

inline std::vector<mpz_class> poly_exact_div(std::vector<mpz_class> num,
                                             const std::vector<mpz_class>& den) {
  // den is monic
  int dn = int(den.size()) - 1;
  int nn = int(num.size()) - 1;
  std::vector<mpz_class> quo(std::max(nn - dn + 1, 1), 0);
  for (int i = nn; i >= dn; --i) {
    mpz_class c = num[i];
    quo[i - dn] = c;
    if (c == 0) continue;
    for (int j = 0; j <= dn; ++j) num[i - dn + j] -= c * den[j];
  }
  return quo;
}

inline std::vector<mpz_class> cyclotomic_poly(int N) {
  static std::map<int, std::vector<mpz_class>> cache;
  static std::mutex mu;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(N);
    if (it != cache.end()) return it->second;
  }
  std::vector<mpz_class> p(N + 1, 0);
  p[0] = -1;
  p[N] = 1;
  for (int d = 1; d < N; ++d)
    if (N % d == 0) p = poly_exact_div(p, cyclotomic_poly(d));
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(N, p);
  return p;
}

}  // namespace detail

inline std::shared_ptr<const CycloContext> cyclo_context(int N) {
  if (N < 1) throw InvalidInput("cyclotomic order must be positive");
  static std::map<int, std::shared_ptr<const CycloContext>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(N);
  if (it != cache.end()) return it->second;
  auto ctx = std::make_shared<CycloContext>();
  ctx->order = N;
  ctx->phi = detail::cyclotomic_poly(N);
  ctx->degree = int(ctx->phi.size()) - 1;
  cache.emplace(N, ctx);
  return ctx;
}

/// Exact element of the cyclotomic field Q(zeta_N), stored as a polynomial in
/// zeta of degree below phi(N). Elements without a context are plain rationals
/// and combine with any field.
class Cyclo {
 public:
  Cyclo() = default;
  Cyclo(long v) : c_{mpq_class(v)} { trim(); }
  Cyclo(const mpq_class& v) : c_{v} { trim(); }

  /// zeta_N^k
  static Cyclo zeta(int N, long k) {
    auto ctx = cyclo_context(N);
    long e = ((k % N) + N) % N;
    std::vector<mpq_class> v(e + 1, 0);
    v[e] = 1;
    Cyclo r;
    r.ctx_ = ctx;
    r.c_ = std::move(v);
    r.reduce();
    return r;
  }

  const std::vector<mpq_class>& coeffs() const { return c_; }
  int order() const { return ctx_ ? ctx_->order : 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_rational() const { return c_.size() <= 1; }
  mpq_class rational_part() const { return c_.empty() ? mpq_class(0) : c_[0]; }

  friend Cyclo operator+(const Cyclo& a, const Cyclo& b) {
    Cyclo r;
    r.ctx_ = join(a, b);
    r.c_.assign(std::max(a.c_.size(), b.c_.size()), 0);
    for (std::size_t i = 0; i < a.c_.size(); ++i) r.c_[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) r.c_[i] += b.c_[i];
    r.trim();
    return r;
  }
  friend Cyclo operator-(const Cyclo& a, const Cyclo& b) { return a + (-b); }
  Cyclo operator-() const {
    Cyclo r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
  }
  friend Cyclo operator*(const Cyclo& a, const Cyclo& b) {
    Cyclo r;
    r.ctx_ = join(a, b);
    if (a.c_.empty() || b.c_.empty()) return r;
    r.c_.assign(a.c_.size() + b.c_.size() - 1, 0);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i] == 0) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
    }
    r.reduce();
    return r;
  }
  friend Cyclo operator/(const Cyclo& a, const Cyclo& b) { return a * b.inverse(); }
  Cyclo& operator+=(const Cyclo& o) { return *this = *this + o; }
  Cyclo& operator-=(const Cyclo& o) { return *this = *this - o; }
  Cyclo& operator*=(const Cyclo& o) { return *this = *this * o; }
  Cyclo& operator/=(const Cyclo& o) { return *this = *this / o; }

  friend bool operator==(const Cyclo& a, const Cyclo& b) { return a.c_ == b.c_; }
  friend bool operator!=(const Cyclo& a, const Cyclo& b) { return !(a == b); }

  Cyclo inverse() const {
    if (c_.empty()) throw NonGenericError("division by zero in Q(zeta)");
    if (c_.size() == 1) return Cyclo(mpq_class(1) / c_[0]).with_ctx(ctx_);
    // extended Euclid on (phi, a) over Q[x]
    using P = std::vector<mpq_class>;
    P r0(ctx_->phi.begin(), ctx_->phi.end()), r1 = c_;
    P s0{0}, s1{1};
    auto deg = [](const P& p) { return int(p.size()) - 1; };
    auto strip = [](P& p) {
      while (!p.empty() && p.back() == 0) p.pop_back();
    };
    strip(r0);
    strip(r1);
    while (!(r1.size() == 1)) {
      P q(std::max(deg(r0) - deg(r1) + 1, 1), 0), rem = r0;
      for (int i = deg(rem); i >= deg(r1); --i) {
        if (rem[i] == 0) continue;
        mpq_class f = rem[i] / r1.back();
        q[i - deg(r1)] = f;
        for (int j = 0; j <= deg(r1); ++j) rem[i - deg(r1) + j] -= f * r1[j];
      }
      strip(rem);
      P s2 = s0;
      P qs(q.size() + s1.size() - 1, 0);
      for (std::size_t i = 0; i < q.size(); ++i)
        for (std::size_t j = 0; j < s1.size(); ++j) qs[i + j] += q[i] * s1[j];
      if (s2.size() < qs.size()) s2.resize(qs.size(), 0);
      for (std::size_t i = 0; i < qs.size(); ++i) s2[i] -= qs[i];
      strip(s2);
      r0 = std::move(r1);
      r1 = std::move(rem);
      s0 = std::move(s1);
      s1 = std::move(s2);
      if (r1.empty()) throw NonGenericError("non-invertible element of Q(zeta)");
    }
    Cyclo r;
    r.ctx_ = ctx_;
    r.c_ = s1;
    mpq_class inv = mpq_class(1) / r1[0];
    for (auto& x : r.c_) x *= inv;
    r.reduce();
    return r;
  }

 private:
  std::shared_ptr<const CycloContext> ctx_;
  std::vector<mpq_class> c_;

  Cyclo with_ctx(std::shared_ptr<const CycloContext> c) const {
    Cyclo r = *this;
    r.ctx_ = std::move(c);
    return r;
  }

  static std::shared_ptr<const CycloContext> join(const Cyclo& a, const Cyclo& b) {
    if (!a.ctx_) return b.ctx_;
    if (!b.ctx_) return a.ctx_;
    if (a.ctx_->order != b.ctx_->order)
      throw InvalidInput("mixing cyclotomic fields of different orders");
    return a.ctx_;
  }

  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }

  void reduce() {
    trim();
    if (!ctx_) return;
    int dg = ctx_->degree;
    for (int i = int(c_.size()) - 1; i >= dg; --i) {
      if (c_[i] == 0) continue;
      mpq_class f = c_[i];
      for (int j = 0; j <= dg; ++j) c_[i - dg + j] -= f * ctx_->phi[j];
    }
    if (int(c_.size()) > dg) c_.resize(dg);
    trim();
  }
};

}  // namespace utl
