#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "utl/algebra.hpp"
#include "utl/diagrams.hpp"
#include "utl/errors.hpp"
#include "utl/linalg.hpp"
#include "utl/scalars.hpp"

namespace utl {

/// Position of a link state in the sorted basis B_{n,d}.
inline std::size_t state_index(int n, int d, const LinkState& s) {
  const auto& ls = link_states(n, d);
  auto it = std::lower_bound(ls.begin(), ls.end(), s);
  if (it == ls.end() || !(*it == s)) throw InvalidInput("link state not in the module basis");
  return std::size_t(it - ls.begin());
}

/// Combinatorial outcome of a diagram acting on a link state.
struct ActResult {
  bool zero = true;
  LinkState state;
  int twist = 0;          ///< z exponent (d > 0) or winding loop count (d = 0)
  int contractible = 0;
};

/// w drawn above D; the new state is read off D's bottom.
inline ActResult act_diagram(const Diagram& D, const LinkState& w) {
  const int n = D.n;
  const int d = w.defects(n);
  Product p = multiply_raw(D, Diagram{n, d, w, w, 0});
  ActResult r;
  if (p.diagram.d != d) return r;
  r.zero = false;
  r.state = p.diagram.bottom;
  r.twist = p.diagram.mid;
  r.contractible = p.contractible;
  return r;
}

/// W_{n,d,z}. For d = 0 the winding loop weight defaults to z + 1/z.
template <class F>
struct StandardModule {
  int n = 0, d = 0;
  F z = F(1);
  F alpha = F(2);
  F beta = F(0);

  StandardModule() = default;
  StandardModule(int n_, int d_, F z_, const ParamEnv<F>& env) : n(n_), d(d_), z(std::move(z_)) {
    if (n < 1 || n > kMaxNodes) throw InvalidInput("module size out of range");
    if (d < 0 || d > n || (n - d) % 2 != 0) throw InvalidInput("defect number must satisfy d = n mod 2");
    if (ScalarTraits<F>::is_zero(z)) throw InvalidInput("twist z must be invertible");
    alpha = z + F(1) / z;
    beta = env.beta();
  }

  const std::vector<LinkState>& basis() const { return link_states(n, d); }
  std::size_t dim() const { return basis().size(); }

  /// Scalar weight of one combinatorial action.
  F weight(const ActResult& r) const {
    F c = power(beta, r.contractible);
    if (d > 0)
      c *= power(z, r.twist);
    else
      c *= power(alpha, r.twist);
    return c;
  }

  nlohmann::json descriptor() const {
    return {{"n", n}, {"d", d}, {"z", ScalarTraits<F>::to_json(z)}};
  }
};

template <class F>
struct ModuleVector {
  const StandardModule<F>* module = nullptr;
  std::map<LinkState, F> coeffs;

  void add(const LinkState& s, const F& c) {
    if (ScalarTraits<F>::is_zero(c)) return;
    auto [it, ins] = coeffs.try_emplace(s, c);
    if (!ins) {
      it->second += c;
      if (ScalarTraits<F>::is_zero(it->second)) coeffs.erase(it);
    }
  }
};

template <class F>
ModuleVector<F> basis_vector(const StandardModule<F>& m, const LinkState& s) {
  state_index(m.n, m.d, s);
  ModuleVector<F> v{&m, {}};
  v.add(s, F(1));
  return v;
}

template <class F>
ModuleVector<F> act(const Diagram& D, const ModuleVector<F>& v) {
  if (!v.module || D.n != v.module->n) throw InvalidInput("size mismatch between diagram and module");
  ModuleVector<F> out{v.module, {}};
  for (const auto& [w, c] : v.coeffs) {
    ActResult r = act_diagram(D, w);
    if (!r.zero) out.add(r.state, c * v.module->weight(r));
  }
  return out;
}

template <class F>
ModuleVector<F> act(const Element<F>& a, const ModuleVector<F>& v) {
  if (!v.module || a.variant.n != v.module->n) throw InvalidInput("size mismatch between element and module");
  ModuleVector<F> out{v.module, {}};
  for (const auto& [D, ca] : a.terms)
    for (const auto& [w, c] : v.coeffs) {
      ActResult r = act_diagram(D, w);
      if (!r.zero) out.add(r.state, ca * c * v.module->weight(r));
    }
  return out;
}

/// Column j is the image of basis state j.
template <class F>
Matrix<F> matrix_of(const Element<F>& a, const StandardModule<F>& m) {
  if (a.variant.n != m.n) throw InvalidInput("size mismatch between element and module");
  const auto& B = m.basis();
  Matrix<F> M(B.size(), B.size());
  for (const auto& [D, c] : a.terms)
    for (std::size_t j = 0; j < B.size(); ++j) {
      ActResult r = act_diagram(D, B[j]);
      if (!r.zero) M(state_index(m.n, m.d, r.state), j) += c * m.weight(r);
    }
  return M;
}

/// Action on the whole family W_{n,d,z} with z^W = g at once: the matrix
/// sum_i z^i M_i with entries in F[z]/(z^W - g). For d = 0 there is one
/// coefficient and winding loops weigh alpha.
template <class F>
struct SectorMatrix {
  int W = 1;
  std::vector<Matrix<F>> coeffs;

  bool is_zero() const {
    for (const auto& M : coeffs)
      if (!M.is_zero()) return false;
    return true;
  }
};

template <class F>
SectorMatrix<F> sector_matrix(const Element<F>& a, int d, int W, const F& g, const F& alpha,
                              const F& beta) {
  const int n = a.variant.n;
  const auto& B = link_states(n, d);
  SectorMatrix<F> S;
  S.W = d > 0 ? W : 1;
  S.coeffs.assign(std::size_t(S.W), Matrix<F>(B.size(), B.size()));
  for (const auto& [D, c] : a.terms)
    for (std::size_t j = 0; j < B.size(); ++j) {
      ActResult r = act_diagram(D, B[j]);
      if (r.zero) continue;
      F w = c * power(beta, r.contractible);
      int slot = 0;
      if (d > 0) {
        long q = floor_div(r.twist, S.W);
        slot = int(r.twist - q * S.W);
        w *= power(g, q);
      } else {
        w *= power(alpha, r.twist);
      }
      S.coeffs[std::size_t(slot)](state_index(n, d, r.state), j) += w;
    }
  return S;
}

/// (-1)^{sigma_v} for every basis state.
inline std::vector<int> parity_signs(int n, int d) {
  std::vector<int> s;
  for (const auto& v : link_states(n, d)) s.push_back(link_parity(n, v) ? -1 : 1);
  return s;
}

/// Diagonal sign change carries every e_j on W_{n,d,z} to e_j on W_{n,d,-z}.
template <class F>
bool sign_conjugation_holds(const Algebra<F>& A, int d, const F& z) {
  const int n = A.n();
  StandardModule<F> plus(n, d, z, A.env()), minus(n, d, -z, A.env());
  std::vector<int> sg = parity_signs(n, d);
  for (int j = 0; j < n; ++j) {
    Matrix<F> M = matrix_of(A.e(j), plus), N = matrix_of(A.e(j), minus);
    for (std::size_t r = 0; r < M.rows; ++r)
      for (std::size_t c = 0; c < M.cols; ++c)
        if (!ScalarTraits<F>::equal(F(sg[r] * sg[c]) * M(r, c), N(r, c))) return false;
  }
  return true;
}

// ------------------------------------------------------------ central elements

enum class Central { F, Fbar, G, H, OmegaN, OmegaMinusN };

inline const char* central_name(Central c) {
  switch (c) {
    case Central::F: return "F";
    case Central::Fbar: return "Fbar";
    case Central::G: return "G";
    case Central::H: return "H";
    case Central::OmegaN: return "OmegaN";
    case Central::OmegaMinusN: return "OmegaMinusN";
  }
  return "?";
}

inline Central parse_central(const std::string& s) {
  for (Central c : {Central::F, Central::Fbar, Central::G, Central::H, Central::OmegaN,
                    Central::OmegaMinusN})
    if (s == central_name(c)) return c;
  throw InvalidInput("unknown central element '" + s + "'");
}

/// Diagram of one resolution of the n crossings of the braid transfer matrix.
/// Bit i of mask set means face i pairs (bottom,right) and (left,top).
inline Diagram face_diagram(int n, std::uint32_t mask) {
  Connectivity c;
  c.n = n;
  auto a_face = [&](int i) { return ((mask >> i) & 1u) != 0; };
  for (int i = 0; i < n; ++i) {
    // from bottom i: a goes right, b goes left; then the neighbouring face decides
    {
      bool right = a_face(i);
      int j = right ? (i + 1) % n : (i + n - 1) % n;
      long lift = right ? (i == n - 1) : -(i == 0);
      // entering j from the left (moving right) or from the right (moving left)
      bool to_top = right ? a_face(j) : !a_face(j);
      c.to[std::size_t(i)] = std::int8_t(to_top ? n + j : j);
      c.shift[std::size_t(i)] = std::int32_t(lift);
    }
    {
      bool left = a_face(i);
      int j = left ? (i + n - 1) % n : (i + 1) % n;
      long lift = left ? -(i == 0) : (i == n - 1);
      bool to_bottom = left ? a_face(j) : !a_face(j);
      c.to[std::size_t(n + i)] = std::int8_t(to_bottom ? j : n + j);
      c.shift[std::size_t(n + i)] = std::int32_t(lift);
    }
  }
  return from_connectivity(c, 0);
}

/// F (or F-bar) expanded over the 2^n face resolutions, in aTL.
template <class F>
Element<F> braid_transfer(const Algebra<F>& A, bool bar) {
  const int n = A.n();
  if (A.kind() != Kind::aTL) throw InvalidInput("central elements live in aTL");
  if (n < 1 || n > 8) throw ResourceError("transfer matrices limited to n <= 8");
  Element<F> out = A.zero();
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    int na = __builtin_popcount(mask), nb = n - na;
    out += A.element(face_diagram(n, mask), power(A.env().s, bar ? nb - na : na - nb));
  }
  return out;
}

/// 2 T_m(x/2) through U'_m = x U'_{m-1} - U'_{m-2}.
template <class F>
Element<F> chebyshev_renormalized(const Algebra<F>& A, const Element<F>& x, int m) {
  Element<F> prev = F(2) * A.id(), cur = x;
  if (m == 0) return prev;
  for (int j = 2; j <= m; ++j) {
    Element<F> next = A.mul(x, cur) - prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

/// Central element of aTL. k2 = 2k is used only for H.
template <class F>
Element<F> build_central(const Algebra<F>& A, Central which, int k2 = 0) {
  const int n = A.n();
  if (A.kind() != Kind::aTL) throw InvalidInput("central elements live in aTL");
  if (n < 2) throw InvalidInput("central elements need n >= 2");
  if (n > 8) throw ResourceError("central elements limited to n <= 8");
  const ParamEnv<F>& env = A.env();
  switch (which) {
    case Central::F: return braid_transfer(A, false);
    case Central::Fbar: return braid_transfer(A, true);
    case Central::OmegaN: return A.omega(n);
    case Central::OmegaMinusN: return A.omega(-n);
    case Central::G: {
      Element<F> f = braid_transfer(A, false), fb = braid_transfer(A, true);
      F c = qpow(env, n) + qpow(env, -n);
      return A.mul(f, f) + A.mul(fb, fb) - c * A.mul(f, fb);
    }
    case Central::H: {
      if (k2 < 1) throw InvalidInput("H(k) needs k > 0");
      if (n % 2 == 1 && k2 % 2 != 0) throw InvalidInput("H(k) needs integer k for odd n");
      int m = n * k2;  // 2nk
      if (m > 24) throw ResourceError("H(k) limited to 2nk <= 24");
      Element<F> f = braid_transfer(A, false);
      Element<F> h = chebyshev_renormalized(A, f, m);
      long e = long(n) * m;  // 2 n^2 k, the exponent of s in q^{n^2 k}
      h -= power(env.s, e) * A.omega(m);
      h -= power(env.s, -e) * A.omega(-m);
      return h;
    }
  }
  throw InvalidInput("unknown central element");
}

/// Predicted scalar of a central element on W_{n,d,z}.
template <class F>
F central_eigenvalue(Central which, const StandardModule<F>& m, const ParamEnv<F>& env, int k2 = 0) {
  const int n = m.n, d = m.d;
  const F& z = m.z;
  F sd = power(env.s, d);  // q^{d/2}
  F f = z * sd + F(1) / (z * sd);
  F fb = z / sd + sd / z;
  switch (which) {
    case Central::F: return f;
    case Central::Fbar: return fb;
    case Central::OmegaN: return power(z, d);
    case Central::OmegaMinusN: return power(z, -d);
    case Central::G: return f * f + fb * fb - (qpow(env, n) + qpow(env, -n)) * f * fb;
    case Central::H: {
      // h_k(z) = z^{2nk} q^{nkd} + z^{-2nk} q^{-nkd} - q^{n^2 k} z^{2dk} - q^{-n^2 k} z^{-2dk}
      long m2 = long(n) * k2;       // 2nk
      long a = long(d) * m2;        // exponent of s in q^{nkd}
      long b = long(n) * m2;        // exponent of s in q^{n^2 k}
      long c = long(d) * k2;        // 2dk
      return power(z, m2) * power(env.s, a) + power(z, -m2) * power(env.s, -a) -
             power(env.s, b) * power(z, c) - power(env.s, -b) * power(z, -c);
    }
  }
  throw InvalidInput("unknown central element");
}

// ------------------------------------------------------------ quotient relations

/// The defining quotient relations of an uncoiled variant, written as elements
/// of the parent aTL or pTL that vanish in the quotient.
template <class F>
std::vector<Element<F>> quotient_relations(const Algebra<F>& P, Kind kind) {
  const int n = P.n();
  const ParamEnv<F>& env = P.env();
  bool affine = is_affine_uncoiled(kind);
  if (P.kind() != (affine ? Kind::aTL : Kind::pTL)) throw InvalidInput("wrong parent algebra");
  if (!is_uncoiled(kind)) throw InvalidInput("not an uncoiled variant");
  std::vector<Element<F>> rel;
  std::vector<int> evens, odds, sweep;
  for (int j = 0; j < n; j += 2) evens.push_back(j);
  for (int j = 1; j < n; j += 2) odds.push_back(j);
  for (int j = n - 1; j >= 0; --j) sweep.push_back(j);
  auto unwinding = [&](int reps) {
    std::vector<int> w{0};
    for (int r = 0; r < reps; ++r) w.insert(w.end(), sweep.begin(), sweep.end());
    return P.word(w);
  };
  Element<F> E = P.word(evens);
  switch (kind) {
    case Kind::uaTL: rel.push_back(P.omega(n) - env.gamma * P.id()); break;
    case Kind::upTL: rel.push_back(unwinding(n - 2) - env.gamma * env.gamma * P.e(0)); break;
    case Kind::uaTL1:
      rel.push_back(P.mul(P.mul(E, P.omega(1)), E) - env.alpha * E);
      rel.push_back(P.omega(n) - P.id());
      break;
    case Kind::upTL1:
      rel.push_back(P.mul(P.mul(E, P.word(odds)), E) - env.alpha * env.alpha * E);
      rel.push_back(unwinding((n - 2) / 2) - P.e(0));
      break;
    case Kind::uaTL2:
      rel.push_back(E);
      rel.push_back(P.omega(n) - env.gamma * P.id());
      break;
    case Kind::upTL2:
      rel.push_back(E);
      rel.push_back(unwinding((n - 2) / 2) - env.gamma * P.e(0));
      break;
    default: break;
  }
  return rel;
}

}  // namespace utl
