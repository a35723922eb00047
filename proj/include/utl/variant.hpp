#pragma once

#include <string>
#include <string_view>

#include "utl/errors.hpp"

namespace utl {

/// The algebra families. TL is the ordinary (planar) Temperley-Lieb algebra.
enum class Kind { TL, aTL, pTL, uaTL, upTL, uaTL1, upTL1, uaTL2, upTL2 };

inline std::string_view kind_name(Kind k) {
  switch (k) {
    case Kind::TL: return "TL";
    case Kind::aTL: return "aTL";
    case Kind::pTL: return "pTL";
    case Kind::uaTL: return "uaTL";
    case Kind::upTL: return "upTL";
    case Kind::uaTL1: return "uaTL1";
    case Kind::upTL1: return "upTL1";
    case Kind::uaTL2: return "uaTL2";
    case Kind::upTL2: return "upTL2";
  }
  return "?";
}

/// Accepts both the canonical spelling and the lower-case CLI spelling.
inline Kind parse_kind(std::string_view s) {
  static constexpr Kind all[] = {Kind::TL,    Kind::aTL,   Kind::pTL,
                                 Kind::uaTL,  Kind::upTL,  Kind::uaTL1,
                                 Kind::upTL1, Kind::uaTL2, Kind::upTL2};
  for (Kind k : all) {
    std::string_view name = kind_name(k);
    if (name.size() != s.size()) continue;
    bool same = true;
    for (std::size_t i = 0; i < s.size(); ++i) {
      char a = name[i], b = s[i];
      if (a >= 'A' && a <= 'Z') a = char(a - 'A' + 'a');
      if (b >= 'A' && b <= 'Z') b = char(b - 'A' + 'a');
      if (a != b) { same = false; break; }
    }
    if (same) return k;
  }
  throw InvalidInput("unknown algebra kind '" + std::string(s) + "'");
}

constexpr bool is_uncoiled(Kind k) {
  return k != Kind::TL && k != Kind::aTL && k != Kind::pTL;
}

/// Periodic kinds contain only even connectivities and no power of Omega.
constexpr bool is_periodic(Kind k) {
  return k == Kind::pTL || k == Kind::upTL || k == Kind::upTL1 ||
         k == Kind::upTL2 || k == Kind::TL;
}

constexpr bool is_affine_uncoiled(Kind k) {
  return k == Kind::uaTL || k == Kind::uaTL1 || k == Kind::uaTL2;
}

/// The loop-weight quotients (non-contractible loops evaluated to alpha).
constexpr bool is_starred(Kind k) { return k == Kind::uaTL1 || k == Kind::upTL1; }

/// Quotients in which every diagram without through-lines vanishes.
constexpr bool is_double_starred(Kind k) {
  return k == Kind::uaTL2 || k == Kind::upTL2;
}

/// Affine counterpart used when a periodic projector is viewed in the larger algebra.
constexpr Kind affine_partner(Kind k) {
  switch (k) {
    case Kind::upTL: return Kind::uaTL;
    case Kind::upTL1: return Kind::uaTL1;
    case Kind::upTL2: return Kind::uaTL2;
    case Kind::pTL: return Kind::aTL;
    default: return k;
  }
}

struct Variant {
  Kind kind = Kind::aTL;
  int n = 1;

  Variant() = default;
  Variant(Kind k, int size) : kind(k), n(size) { validate(); }

  void validate() const {
    if (n < 1) throw InvalidInput("size n must be positive");
    if ((kind == Kind::uaTL || kind == Kind::upTL) && n % 2 == 0)
      throw InvalidInput(std::string(kind_name(kind)) + " requires odd n");
    if ((kind == Kind::uaTL1 || kind == Kind::upTL1 || kind == Kind::uaTL2 ||
         kind == Kind::upTL2) &&
        n % 2 != 0)
      throw InvalidInput(std::string(kind_name(kind)) + " requires even n");
  }

  bool operator==(const Variant& o) const { return kind == o.kind && n == o.n; }
  bool operator!=(const Variant& o) const { return !(*this == o); }
};

}  // namespace utl
