#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <map>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "utl/errors.hpp"

namespace utl {

inline constexpr int kMaxNodes = 32;

/// One row of an annular diagram. Node i holds -1 for a defect, otherwise
/// its partner j, plus kSeamBit when the arc passes through the seam between
/// node n-1 and node 0.
struct LinkState {
  static constexpr std::int8_t kDefect = -1;
  static constexpr std::int8_t kSeamBit = 64;

  std::array<std::int8_t, kMaxNodes> v{};

  static bool is_defect(std::int8_t x) { return x < 0; }
  static int partner(std::int8_t x) { return x & 63; }
  static bool seam(std::int8_t x) { return x >= 0 && (x & kSeamBit); }

  int defects(int n) const {
    int c = 0;
    for (int i = 0; i < n; ++i) c += v[i] < 0;
    return c;
  }
  int seam_arcs(int n) const {
    int c = 0;
    for (int i = 0; i < n; ++i) c += seam(v[i]);
    return c / 2;
  }
  /// Defect positions in increasing order.
  std::vector<int> defect_positions(int n) const {
    std::vector<int> p;
    for (int i = 0; i < n; ++i)
      if (v[i] < 0) p.push_back(i);
    return p;
  }
  /// True if node i is the right end of its arc in the universal cover.
  bool is_closer(int i) const {
    int j = partner(v[i]);
    return seam(v[i]) ? j > i : j < i;
  }

  friend bool operator==(const LinkState& a, const LinkState& b) { return a.v == b.v; }
  friend bool operator!=(const LinkState& a, const LinkState& b) { return !(a == b); }
  friend bool operator<(const LinkState& a, const LinkState& b) { return a.v < b.v; }
};

namespace detail {

/// Matches every closer with the nearest free opener to its left on the
/// universal cover. Nodes not in the closer mask are openers or defects.
inline LinkState match_closers(int n, std::uint32_t closers) {
  LinkState ls;
  ls.v.fill(0);
  for (int i = 0; i < n; ++i) ls.v[i] = LinkState::kDefect;
  std::array<bool, kMaxNodes> used{};
  // process closers left to right so nested openers are consumed first
  for (int b = 0; b < n; ++b) {
    if (!(closers >> b & 1u)) continue;
    int depth = 0;
    bool found = false;
    for (int x = b - 1; x > b - n; --x) {
      int pos = ((x % n) + n) % n;
      if (closers >> pos & 1u) {
        ++depth;
      } else if (depth == 0) {
        if (used[pos]) continue;
        used[pos] = true;
        bool wrap = x < 0;
        ls.v[b] = std::int8_t(pos | (wrap ? LinkState::kSeamBit : 0));
        ls.v[pos] = std::int8_t(b | (wrap ? LinkState::kSeamBit : 0));
        found = true;
        break;
      } else {
        --depth;
      }
    }
    if (!found) return LinkState{};  // caller rejects
  }
  return ls;
}

}  // namespace detail

/// Checks that a row is a well-formed annular link state.
inline bool valid_link_state(int n, const LinkState& ls) {
  if (n < 1 || n > kMaxNodes) return false;
  std::uint32_t closers = 0;
  for (int i = 0; i < n; ++i) {
    std::int8_t x = ls.v[i];
    if (x == LinkState::kDefect) continue;
    if (x < 0) return false;
    int j = LinkState::partner(x);
    if (j >= n || j == i) return false;
    if (ls.v[j] != std::int8_t(i | (x & LinkState::kSeamBit))) return false;
    if (ls.is_closer(i)) closers |= 1u << i;
  }
  for (int i = n; i < kMaxNodes; ++i)
    if (ls.v[i] != 0) return false;
  int arcs = std::popcount(closers);
  if (2 * arcs + ls.defects(n) != n) return false;
  return detail::match_closers(n, closers) == ls;
}

/// All annular link states on n nodes with d defects, sorted.
inline std::vector<LinkState> enumerate_link_states(int n, int d) {
  if (n < 1 || n > kMaxNodes) throw InvalidInput("link states need 1 <= n <= 32");
  std::vector<LinkState> out;
  if (d < 0 || d > n || (n - d) % 2 != 0) return out;
  if (n > 24) throw ResourceError("link state enumeration limited to n <= 24");
  int m = (n - d) / 2;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) != m) continue;
    LinkState ls = detail::match_closers(n, mask);
    if (valid_link_state(n, ls)) out.push_back(ls);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Cached variant of enumerate_link_states.
inline const std::vector<LinkState>& link_states(int n, int d) {
  static std::map<std::pair<int, int>, std::vector<LinkState>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(n, d);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, enumerate_link_states(n, d)).first;
  return it->second;
}

/// 0 if the number of seam arcs is odd, 1 if it is even.
inline int link_parity(int n, const LinkState& ls) { return ls.seam_arcs(n) % 2 == 1 ? 0 : 1; }

/// Annular diagram. For d > 0, mid is the twist: bottom defect number i
/// (counted from the seam, extended periodically) is joined to top defect
/// number i + mid. For d = 0, mid counts the non-contractible loops.
struct Diagram {
  int n = 0;
  int d = 0;
  LinkState bottom;
  LinkState top;
  int mid = 0;

  int loops() const { return d == 0 ? mid : 0; }

  friend bool operator==(const Diagram& a, const Diagram& b) {
    return a.n == b.n && a.d == b.d && a.mid == b.mid && a.bottom == b.bottom && a.top == b.top;
  }
  friend bool operator!=(const Diagram& a, const Diagram& b) { return !(a == b); }
  /// Higher defect count first, then bottom, top and mid.
  friend bool operator<(const Diagram& a, const Diagram& b) {
    if (a.n != b.n) return a.n < b.n;
    if (a.d != b.d) return a.d > b.d;
    if (a.bottom != b.bottom) return a.bottom < b.bottom;
    if (a.top != b.top) return a.top < b.top;
    return a.mid < b.mid;
  }
};

struct DiagramHash {
  std::size_t operator()(const Diagram& D) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](std::uint64_t x) {
      h ^= x;
      h *= 1099511628211ull;
    };
    mix(std::uint64_t(D.n));
    mix(std::uint64_t(D.d));
    mix(std::uint64_t(std::uint32_t(D.mid)));
    for (int i = 0; i < D.n; ++i) mix(std::uint8_t(D.bottom.v[i]));
    for (int i = 0; i < D.n; ++i) mix(std::uint8_t(D.top.v[i]) + 256u);
    return std::size_t(h);
  }
};

inline Diagram make_diagram(int n, const LinkState& bottom, const LinkState& top, int mid) {
  if (!valid_link_state(n, bottom) || !valid_link_state(n, top))
    throw InvalidInput("malformed link state");
  int d = bottom.defects(n);
  if (top.defects(n) != d) throw InvalidInput("bottom and top defect counts differ");
  if (d == 0 && mid < 0) throw InvalidInput("negative loop count");
  return Diagram{n, d, bottom, top, mid};
}

inline LinkState all_defects(int n) {
  LinkState ls;
  for (int i = 0; i < n; ++i) ls.v[i] = LinkState::kDefect;
  return ls;
}

inline Diagram identity_diagram(int n) { return Diagram{n, n, all_defects(n), all_defects(n), 0}; }

/// Omega^k: every strand shifted by k positions.
inline Diagram translation_diagram(int n, int k) {
  return Diagram{n, n, all_defects(n), all_defects(n), k};
}

/// e_j for 0 <= j < n joins nodes j-1 and j; e_0 joins n-1 and 0 through the seam.
inline Diagram generator_diagram(int n, int j) {
  if (n < 2 || j < 0 || j >= n) throw InvalidInput("generator index out of range");
  LinkState ls = all_defects(n);
  if (j == 0) {
    if (n == 2) {
      ls.v[0] = std::int8_t(1 | LinkState::kSeamBit);
      ls.v[1] = std::int8_t(0 | LinkState::kSeamBit);
    } else {
      ls.v[0] = std::int8_t((n - 1) | LinkState::kSeamBit);
      ls.v[n - 1] = std::int8_t(0 | LinkState::kSeamBit);
    }
  } else {
    ls.v[j - 1] = std::int8_t(j);
    ls.v[j] = std::int8_t(j - 1);
  }
  return Diagram{n, n - 2, ls, ls, 0};
}

/// Vertical reflection.
inline Diagram flip(const Diagram& D) {
  return Diagram{D.n, D.d, D.top, D.bottom, D.d > 0 ? -D.mid : D.mid};
}

/// Endpoint connectivity on the universal cover. Endpoints 0..n-1 are the
/// bottom nodes, n..2n-1 the top nodes; end[e] = (f, s) means the lift of e
/// in the fundamental domain joins f in the domain shifted by s.
struct Connectivity {
  int n = 0;
  std::array<std::int8_t, 2 * kMaxNodes> to{};
  std::array<std::int32_t, 2 * kMaxNodes> shift{};
};

inline Connectivity to_connectivity(const Diagram& D) {
  Connectivity c;
  int n = D.n;
  c.n = n;
  auto row = [&](const LinkState& ls, int base) {
    for (int i = 0; i < n; ++i) {
      std::int8_t x = ls.v[i];
      if (x < 0) continue;
      int j = LinkState::partner(x);
      c.to[base + i] = std::int8_t(base + j);
      c.shift[base + i] = LinkState::seam(x) ? (i < j ? -1 : 1) : 0;
    }
  };
  row(D.bottom, 0);
  row(D.top, n);
  if (D.d > 0) {
    int d = D.d;
    std::array<int, kMaxNodes> pb{}, pt{};
    int a = 0, b = 0;
    for (int i = 0; i < n; ++i) {
      if (D.bottom.v[i] < 0) pb[a++] = i;
      if (D.top.v[i] < 0) pt[b++] = i;
    }
    for (int i = 0; i < d; ++i) {
      long idx = long(i) + D.mid;
      long k = idx >= 0 ? idx / d : -((-idx + d - 1) / d);
      int jj = int(idx - k * d);
      c.to[pb[i]] = std::int8_t(n + pt[jj]);
      c.shift[pb[i]] = std::int32_t(k);
      c.to[n + pt[jj]] = std::int8_t(pb[i]);
      c.shift[n + pt[jj]] = std::int32_t(-k);
    }
  }
  return c;
}

/// Rebuilds a diagram from a connectivity; loops is used when there are no
/// through-lines.
inline Diagram from_connectivity(const Connectivity& c, int loops) {
  int n = c.n;
  Diagram D;
  D.n = n;
  D.bottom.v.fill(0);
  D.top.v.fill(0);
  int d = 0;
  for (int e = 0; e < 2 * n; ++e) {
    int f = c.to[e];
    bool same_row = (e < n) == (f < n);
    LinkState& ls = e < n ? D.bottom : D.top;
    int i = e < n ? e : e - n;
    if (same_row) {
      int j = f < n ? f : f - n;
      ls.v[i] = std::int8_t(j | (c.shift[e] != 0 ? LinkState::kSeamBit : 0));
    } else {
      ls.v[i] = LinkState::kDefect;
      if (e < n) ++d;
    }
  }
  D.d = d;
  if (d == 0) {
    D.mid = loops;
    return D;
  }
  int p0 = 0;
  while (D.bottom.v[p0] >= 0) ++p0;
  int tpos = c.to[p0] - n;
  int jj = 0;
  for (int i = 0; i < tpos; ++i) jj += D.top.v[i] < 0;
  D.mid = jj + d * c.shift[p0];
  return D;
}

/// Result of stacking two diagrams.
struct Product {
  Diagram diagram;
  int contractible = 0;  // closed loops bounding a disc
  int noncontractible = 0;  // new loops winding around the cylinder
};

/// a * b places b on top of a. Closed loops are counted but not evaluated;
/// for a result without through-lines the loops of both factors are carried.
inline Product multiply_raw(const Diagram& a, const Diagram& b) {
  if (a.n != b.n) throw InvalidInput("diagram sizes differ");
  int n = a.n;
  Connectivity ca = to_connectivity(a), cb = to_connectivity(b), r;
  r.n = n;
  std::array<bool, kMaxNodes> seen{};
  // side 1: endpoint of a; side 2: endpoint of b. Middle node j is top j of a
  // and bottom j of b.
  auto walk = [&](int side, int e, long lift, int& out_e, long& out_lift) {
    for (;;) {
      if (side == 1) {
        int f = ca.to[e];
        lift += ca.shift[e];
        if (f < n) {
          out_e = f;
          out_lift = lift;
          return;
        }
        seen[f - n] = true;
        side = 2;
        e = f - n;
      } else {
        int f = cb.to[e];
        lift += cb.shift[e];
        if (f >= n) {
          out_e = f;
          out_lift = lift;
          return;
        }
        seen[f] = true;
        side = 1;
        e = n + f;
      }
    }
  };
  for (int i = 0; i < n; ++i) {
    int f;
    long s;
    walk(1, i, 0, f, s);
    r.to[i] = std::int8_t(f);
    r.shift[i] = std::int32_t(s);
    walk(2, n + i, 0, f, s);
    r.to[n + i] = std::int8_t(f);
    r.shift[n + i] = std::int32_t(s);
  }
  Product p;
  for (int j = 0; j < n; ++j) {
    if (seen[j]) continue;
    long lift = 0;
    int cur = j;
    do {
      seen[cur] = true;
      int f = cb.to[cur];
      lift += cb.shift[cur];
      seen[f] = true;
      int g = ca.to[n + f];
      lift += ca.shift[n + f];
      cur = g - n;
    } while (cur != j);
    if (lift == 0)
      ++p.contractible;
    else
      ++p.noncontractible;
  }
  int loops = a.loops() + b.loops() + p.noncontractible;
  p.diagram = from_connectivity(r, loops);
  return p;
}

/// Total number of seam crossings of the canonical drawing.
inline long seam_crossings(const Diagram& D) {
  long total = D.bottom.seam_arcs(D.n) + D.top.seam_arcs(D.n);
  if (D.d == 0) return total + D.mid;
  Connectivity c = to_connectivity(D);
  for (int i = 0; i < D.n; ++i)
    if (D.bottom.v[i] < 0) total += std::abs(c.shift[i]);
  return total;
}

inline bool is_even(const Diagram& D) { return seam_crossings(D) % 2 == 0; }

/// Planar diagrams: no seam arcs, no twist, no winding loops.
inline bool is_planar(const Diagram& D) {
  return D.bottom.seam_arcs(D.n) == 0 && D.top.seam_arcs(D.n) == 0 && D.mid == 0;
}

// ---------------------------------------------------------------- JSON

inline nlohmann::json link_state_to_json(int n, const LinkState& ls) {
  nlohmann::json a = nlohmann::json::array();
  for (int i = 0; i < n; ++i) {
    if (ls.v[i] < 0)
      a.push_back("D");
    else
      a.push_back({{"p", LinkState::partner(ls.v[i])}, {"seam", LinkState::seam(ls.v[i])}});
  }
  return a;
}

inline LinkState link_state_from_json(int n, const nlohmann::json& j) {
  if (!j.is_array() || int(j.size()) != n) throw InvalidInput("link state must be an array of n nodes");
  LinkState ls;
  for (int i = 0; i < n; ++i) {
    const auto& x = j[i];
    if (x.is_string() && x.get<std::string>() == "D") {
      ls.v[i] = LinkState::kDefect;
    } else if (x.is_object() && x.contains("p") && x.contains("seam")) {
      int p = x["p"].get<int>();
      if (p < 0 || p >= n) throw InvalidInput("partner out of range");
      ls.v[i] = std::int8_t(p | (x["seam"].get<bool>() ? LinkState::kSeamBit : 0));
    } else {
      throw InvalidInput("bad link state node");
    }
  }
  if (!valid_link_state(n, ls)) throw InvalidInput("malformed link state");
  return ls;
}

inline nlohmann::json diagram_to_json(const Diagram& D) {
  return {{"n", D.n},
          {"d", D.d},
          {"bottom", link_state_to_json(D.n, D.bottom)},
          {"top", link_state_to_json(D.n, D.top)},
          {"mid", D.mid}};
}

inline Diagram diagram_from_json(const nlohmann::json& j) {
  int n = j.at("n").get<int>();
  if (n < 1 || n > kMaxNodes) throw InvalidInput("diagram size out of range");
  Diagram D = make_diagram(n, link_state_from_json(n, j.at("bottom")),
                           link_state_from_json(n, j.at("top")), j.at("mid").get<int>());
  if (j.contains("d") && j["d"].get<int>() != D.d) throw InvalidInput("defect count mismatch");
  return D;
}

/// One row as text: '|' for defects, a letter per arc, upper case through the seam.
inline std::string link_state_art(int n, const LinkState& ls) {
  std::string s(n, '|');
  char next = 0;
  for (int i = 0; i < n; ++i) {
    if (ls.v[i] < 0) continue;
    int j = LinkState::partner(ls.v[i]);
    if (j < i) continue;
    char base = LinkState::seam(ls.v[i]) ? 'A' : 'a';
    char ch = char(base + next % 26);
    ++next;
    s[i] = s[j] = ch;
  }
  return s;
}

inline std::string diagram_art(const Diagram& D) {
  std::string out = "top    " + link_state_art(D.n, D.top) + "\n";
  out += "bottom " + link_state_art(D.n, D.bottom) + "\n";
  out += (D.d > 0 ? "twist  " : "loops  ") + std::to_string(D.mid) + "\n";
  return out;
}

}  // namespace utl
