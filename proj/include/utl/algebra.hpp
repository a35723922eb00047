#pragma once

#include <algorithm>
#include <cstdlib>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "json.hpp"

#include "utl/diagrams.hpp"
#include "utl/errors.hpp"
#include "utl/scalars.hpp"
#include "utl/variant.hpp"

namespace utl {

/// Upper bound on the number of terms of any element, read from UTL_MAX_TERMS.
inline std::size_t max_terms() {
  static const std::size_t cap = [] {
    const char* s = std::getenv("UTL_MAX_TERMS");
    if (!s || !*s) return std::size_t(5'000'000);
    char* end = nullptr;
    unsigned long long v = std::strtoull(s, &end, 10);
    return (end && *end == 0 && v > 0) ? std::size_t(v) : std::size_t(5'000'000);
  }();
  return cap;
}

/// Finite linear combination of reduced diagrams.
template <class F>
struct Element {
  Variant variant;
  std::unordered_map<Diagram, F, DiagramHash> terms;

  Element() = default;
  explicit Element(Variant v) : variant(v) {}

  bool is_zero() const { return terms.empty(); }
  std::size_t size() const { return terms.size(); }

  void add_term(const Diagram& D, const F& c) {
    if (ScalarTraits<F>::is_zero(c)) return;
    auto [it, inserted] = terms.try_emplace(D, c);
    if (!inserted) {
      it->second += c;
      if (ScalarTraits<F>::is_zero(it->second)) terms.erase(it);
    }
    if (terms.size() > max_terms()) throw ResourceError("element exceeds UTL_MAX_TERMS");
  }

  F coeff(const Diagram& D) const {
    auto it = terms.find(D);
    return it == terms.end() ? F(0) : it->second;
  }

  /// Terms in the canonical diagram order.
  std::vector<std::pair<Diagram, F>> sorted() const {
    std::vector<std::pair<Diagram, F>> v(terms.begin(), terms.end());
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return v;
  }

  /// Drops entries that compare equal to zero under the backend tolerance.
  void prune() {
    for (auto it = terms.begin(); it != terms.end();) {
      if (ScalarTraits<F>::equal(it->second, F(0)))
        it = terms.erase(it);
      else
        ++it;
    }
  }

  Element& operator+=(const Element& o) {
    check_same(o);
    for (const auto& [D, c] : o.terms) add_term(D, c);
    return *this;
  }
  Element& operator-=(const Element& o) {
    check_same(o);
    for (const auto& [D, c] : o.terms) add_term(D, -c);
    return *this;
  }
  Element& operator*=(const F& s) {
    if (ScalarTraits<F>::is_zero(s)) {
      terms.clear();
      return *this;
    }
    for (auto& kv : terms) kv.second *= s;
    return *this;
  }
  friend Element operator+(Element a, const Element& b) { return a += b; }
  friend Element operator-(Element a, const Element& b) { return a -= b; }
  friend Element operator*(const F& s, Element a) { return a *= s; }

  void check_same(const Element& o) const {
    if (variant != o.variant) throw InvalidInput("elements of different algebras");
  }
};

/// Term-by-term equality under the backend's scalar equality.
template <class F>
bool equal(const Element<F>& a, const Element<F>& b) {
  if (a.variant != b.variant) return false;
  for (const auto& [D, c] : a.terms)
    if (!ScalarTraits<F>::equal(c, b.coeff(D))) return false;
  for (const auto& [D, c] : b.terms)
    if (!a.terms.count(D) && !ScalarTraits<F>::equal(c, F(0))) return false;
  return true;
}

/// Largest coefficient modulus; float backend only.
inline double max_abs(const Element<Complex>& a) {
  double m = 0;
  for (const auto& kv : a.terms) m = std::max(m, std::abs(kv.second));
  return m;
}

/// Outcome of reducing one diagram: the representative and the exponents of
/// gamma and alpha it picked up, or zero.
struct Reduced {
  bool zero = false;
  Diagram diagram;
  int gamma_exp = 0;
  int alpha_exp = 0;
};

inline long floor_div(long a, long b) {
  long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

/// Brings a diagram into the canonical window of the given algebra.
inline Reduced reduce_diagram(Kind kind, const Diagram& D) {
  Reduced r{false, D, 0, 0};
  const int n = D.n, d = D.d;
  auto window = [&](int W, int g) {
    long qd = floor_div(D.mid, W);
    r.diagram.mid = int(D.mid - qd * W);
    r.gamma_exp = int(qd * g);
  };
  auto only_identity_at_full = [&] {
    if (d == n && D.mid != 0)
      throw InvalidInput("twisted diagram with n through-lines in a periodic quotient");
  };
  switch (kind) {
    case Kind::TL:
    case Kind::aTL:
    case Kind::pTL:
      return r;
    case Kind::uaTL:
      window(d, 1);
      return r;
    case Kind::upTL:
      only_identity_at_full();
      window(2 * d, 2);
      return r;
    case Kind::uaTL1:
      if (d == 0) {
        r.alpha_exp = D.mid;
        r.diagram.mid = 0;
      } else {
        window(d, 0);
      }
      return r;
    case Kind::upTL1:
      if (d == 0) {
        r.alpha_exp = 2 * (D.mid / 2);
        r.diagram.mid = D.mid % 2;
      } else {
        only_identity_at_full();
        window(d, 0);
      }
      return r;
    case Kind::uaTL2:
      if (d == 0) {
        r.zero = true;
        return r;
      }
      window(d, 1);
      return r;
    case Kind::upTL2:
      if (d == 0) {
        r.zero = true;
        return r;
      }
      only_identity_at_full();
      window(d, 1);
      return r;
  }
  return r;
}

/// Lazily filled table of a^e for small integer e of either sign.
template <class F>
class PowerCache {
 public:
  explicit PowerCache(F base) : base_(std::move(base)) {}
  const F& operator()(int e) {
    std::vector<F>& side = e >= 0 ? pos_ : neg_;
    std::size_t idx = std::size_t(e >= 0 ? e : -e);
    if (side.empty()) side.push_back(F(1));
    while (side.size() <= idx) {
      if (e >= 0)
        side.push_back(side.back() * base_);
      else
        side.push_back(side.back() / base_);
    }
    return side[idx];
  }

 private:
  F base_;
  std::vector<F> pos_, neg_;
};

/// An algebra at a fixed parameter point.
template <class F>
class Algebra {
 public:
  Algebra(Variant v, ParamEnv<F> env) : v_(v), env_(std::move(env)) {
    v_.validate();
    if (v_.n > kMaxNodes) throw InvalidInput("diagram algebras limited to n <= 32");
  }

  const Variant& variant() const { return v_; }
  Kind kind() const { return v_.kind; }
  int n() const { return v_.n; }
  const ParamEnv<F>& env() const { return env_; }

  /// Scalar factor and representative of a diagram, or nullopt for zero.
  std::optional<std::pair<F, Diagram>> reduce(const Diagram& D) const {
    check_size(D);
    Reduced r = reduce_diagram(v_.kind, D);
    if (r.zero) return std::nullopt;
    F c = power(env_.gamma, r.gamma_exp) * power(env_.alpha, r.alpha_exp);
    return std::make_pair(c, r.diagram);
  }

  Element<F> zero() const { return Element<F>(v_); }

  Element<F> element(const Diagram& D, const F& c = F(1)) const {
    Element<F> e(v_);
    if (auto r = reduce(D)) e.add_term(r->second, c * r->first);
    return e;
  }

  Element<F> id() const { return element(identity_diagram(v_.n)); }
  Element<F> e(int j) const { return element(generator_diagram(v_.n, ((j % v_.n) + v_.n) % v_.n)); }
  Element<F> omega(int k = 1) const { return element(translation_diagram(v_.n, k)); }

  /// Product of generators e_j listed left to right.
  Element<F> word(const std::vector<int>& js) const {
    Element<F> r = id();
    for (int j : js) r = mul(r, e(j));
    return r;
  }

  Element<F> mul(const Element<F>& a, const Element<F>& b) const {
    if (a.variant != v_ || b.variant != v_) throw InvalidInput("element from another algebra");
    Element<F> out(v_);
    if (a.is_zero() || b.is_zero()) return out;
    PowerCache<F> beta(env_.beta()), gamma(env_.gamma), alpha(env_.alpha);
    out.terms.reserve(std::min<std::size_t>(a.size() * b.size(), 1u << 20));
    for (const auto& [Da, ca] : a.terms) {
      for (const auto& [Db, cb] : b.terms) {
        Product p = multiply_raw(Da, Db);
        Reduced r = reduce_diagram(v_.kind, p.diagram);
        if (r.zero) continue;
        F c = ca * cb;
        if (p.contractible) c *= beta(p.contractible);
        if (r.gamma_exp) c *= gamma(r.gamma_exp);
        if (r.alpha_exp) c *= alpha(r.alpha_exp);
        out.add_term(r.diagram, c);
      }
    }
    return out;
  }

  /// Re-reduces an element of another algebra on the same diagrams.
  Element<F> embed(const Element<F>& a) const {
    if (a.variant.n != v_.n) throw InvalidInput("size mismatch");
    Element<F> out(v_);
    for (const auto& [D, c] : a.terms)
      if (auto r = reduce(D)) out.add_term(r->second, c * r->first);
    return out;
  }

  /// Vertical reflection extended linearly.
  Element<F> flip(const Element<F>& a) const {
    Element<F> out(v_);
    for (const auto& [D, c] : a.terms) {
      Diagram f = utl::flip(D);
      if (auto r = reduce(f)) out.add_term(r->second, c * r->first);
    }
    return out;
  }

 private:
  Variant v_;
  ParamEnv<F> env_;

  void check_size(const Diagram& D) const {
    if (D.n != v_.n) throw InvalidInput("diagram size does not match the algebra");
  }
};

// ------------------------------------------------------------ bases

/// Sandwich basis of a finite variant, in canonical order.
inline std::vector<Diagram> basis_enumerate(Variant v) {
  v.validate();
  const int n = v.n;
  const Kind kind = v.kind;
  if (kind == Kind::aTL || kind == Kind::pTL)
    throw InvalidInput("infinite-dimensional algebra has no finite basis");
  if (n > 16) throw ResourceError("basis enumeration limited to n <= 16");
  std::vector<Diagram> out;
  auto add_sector = [&](int d, int lo, int hi, bool even_only) {
    const auto& ls = link_states(n, d);
    for (const auto& b : ls)
      for (const auto& t : ls)
        for (int m = lo; m < hi; ++m) {
          Diagram D{n, d, b, t, m};
          if (even_only && !is_even(D)) continue;
          out.push_back(D);
        }
  };
  for (int d = n; d >= 0; d -= 2) {
    switch (kind) {
      case Kind::TL:
        for (const auto& b : link_states(n, d))
          for (const auto& t : link_states(n, d))
            if (b.seam_arcs(n) == 0 && t.seam_arcs(n) == 0) out.push_back(Diagram{n, d, b, t, 0});
        break;
      case Kind::uaTL:
      case Kind::uaTL2:
        if (d > 0) add_sector(d, 0, d, false);
        break;
      case Kind::uaTL1:
        add_sector(d, 0, d > 0 ? d : 1, false);
        break;
      case Kind::upTL:
        if (d == n)
          out.push_back(identity_diagram(n));
        else
          add_sector(d, 0, 2 * d, true);
        break;
      case Kind::upTL1:
        if (d == n)
          out.push_back(identity_diagram(n));
        else
          add_sector(d, 0, d > 0 ? d : 2, true);
        break;
      case Kind::upTL2:
        if (d == n)
          out.push_back(identity_diagram(n));
        else if (d > 0)
          add_sector(d, 0, d, true);
        break;
      default:
        break;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Closed-form dimension of a finite variant.
inline mpz_class dimension_closed_form(Variant v) {
  v.validate();
  const long n = v.n;
  switch (v.kind) {
    case Kind::uaTL: {
      mpz_class c = binomial(n - 1, (n - 1) / 2);
      return n * c * c;
    }
    case Kind::upTL: {
      mpz_class c = binomial(n - 1, (n - 1) / 2);
      return n * c * c - (n - 1);
    }
    case Kind::uaTL1: {
      mpz_class c = binomial(n - 1, n / 2);
      return (n + 4) * c * c;
    }
    case Kind::upTL1: {
      mpz_class c = binomial(n - 1, n / 2);
      return (n / 2 + 4) * c * c - (n / 2 - 1);
    }
    case Kind::uaTL2: {
      mpz_class c = binomial(n - 1, n / 2);
      return n * c * c;
    }
    case Kind::upTL2: {
      mpz_class c = binomial(n - 1, n / 2);
      return (n / 2) * c * c - (n / 2 - 1);
    }
    case Kind::TL:
      return binomial(2 * n, n) / (n + 1);
    default:
      throw InvalidInput("infinite-dimensional algebra has no closed-form dimension");
  }
}

// ------------------------------------------------------------ sandwich form

/// Value of the bilinear form in the middle algebra: coeff * Omega_d^power
/// (d > 0) or coeff * f^power (d = 0); zero when defects are lost.
template <class F>
struct MiddleValue {
  bool zero = true;
  F coeff = F(0);
  int power = 0;
};

/// The sandwich pairing of a top link state t with a bottom link state w.
template <class F>
MiddleValue<F> psi_bilinear(const LinkState& t, const LinkState& w, const Algebra<F>& A) {
  const int n = A.n();
  int d = t.defects(n);
  if (w.defects(n) != d) throw InvalidInput("link states with different defect counts");
  Product p = multiply_raw(Diagram{n, d, t, t, 0}, Diagram{n, d, w, w, 0});
  MiddleValue<F> out;
  if (p.diagram.d != d) return out;
  Reduced r = reduce_diagram(A.kind(), p.diagram);
  if (r.zero) return out;
  out.zero = false;
  out.coeff = power(A.env().beta(), p.contractible) * power(A.env().gamma, r.gamma_exp) *
              power(A.env().alpha, r.alpha_exp);
  out.power = r.diagram.mid;
  return out;
}

// ------------------------------------------------------------ JSON

template <class F>
nlohmann::json element_to_json(const Element<F>& a) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [D, c] : a.sorted())
    terms.push_back({{"diagram", diagram_to_json(D)}, {"coeff", ScalarTraits<F>::to_json(c)}});
  return {{"variant", std::string(kind_name(a.variant.kind))}, {"n", a.variant.n}, {"terms", terms}};
}

}  // namespace utl
