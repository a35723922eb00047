#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "utl/diagrams.hpp"
#include "utl/scalars.hpp"

namespace utl::testing {

/// a/b in lowest terms.
inline Rational rat(long a, long b = 1) {
  Rational r(a, b);
  r.canonicalize();
  return r;
}

/// Uniformly chosen sector, link states and twist.
inline Diagram random_diagram(std::mt19937_64& rng, int n, int max_twist = 5) {
  std::vector<int> ds;
  for (int d = n % 2; d <= n; d += 2) ds.push_back(d);
  int d = ds[rng() % ds.size()];
  const auto& ls = link_states(n, d);
  const LinkState& b = ls[rng() % ls.size()];
  const LinkState& t = ls[rng() % ls.size()];
  int mid = d > 0 ? int(rng() % (2 * max_twist + 1)) - max_twist : int(rng() % 3);
  return Diagram{n, d, b, t, mid};
}

inline LinkState make_state(int n, std::initializer_list<std::pair<int, int>> arcs,
                            std::initializer_list<std::pair<int, int>> seam_arcs = {}) {
  LinkState ls = all_defects(n);
  for (auto [i, j] : arcs) {
    ls.v[i] = std::int8_t(j);
    ls.v[j] = std::int8_t(i);
  }
  for (auto [i, j] : seam_arcs) {
    ls.v[i] = std::int8_t(j | LinkState::kSeamBit);
    ls.v[j] = std::int8_t(i | LinkState::kSeamBit);
  }
  return ls;
}

}  // namespace utl::testing
