#pragma once
// Symbolic layer over a complete DVR such as k[[t]]: closed rule tables over
// the alphabet R (free), K (fraction field), T(k) = R/m^k and E = E(R/m).

#include <cctype>
#include <map>
#include <string>
#include <vector>

#include "cosupp/finring.hpp"

namespace cosupp::dvr {

// Spec R = {(0) ⊂ m}; sets are bitmasks over these two points.
enum Point : unsigned { zero = 1, max = 2 };
using PointSet = unsigned;
inline constexpr PointSet kSpec = zero | max;

inline std::string format(PointSet s) {
  std::string out = "{";
  if (s & zero) out += "(0)";
  if (s & max) out += std::string(s & zero ? "," : "") + "m";
  return out + "}";
}

inline std::vector<std::string> point_names(PointSet s) {
  std::vector<std::string> v;
  if (s & zero) v.emplace_back("zero");
  if (s & max) v.emplace_back("max");
  return v;
}

/// Minimal and maximal elements under specialization (0) ⊂ m.
inline PointSet minimal(PointSet s) { return (s & zero) ? zero : s; }
inline PointSet maximal(PointSet s) { return (s & max) ? max : s; }
/// U(m): primes contained in m.
inline PointSet up_to(Point p) { return p == max ? kSpec : zero; }
inline bool strict_subset(PointSet a, PointSet b) { return (a & ~b) == 0 && a != b; }

/// A formal sum of alphabet symbols with multiplicities.
struct Object {
  unsigned free = 0, frac = 0, env = 0;
  std::map<unsigned, unsigned> tors;  // exponent -> multiplicity

  bool is_zero() const {
    if (free || frac || env) return false;
    for (const auto& [k, n] : tors)
      if (n) return false;
    return true;
  }
  bool operator==(const Object&) const = default;
};

inline Object free_obj() { return Object{1, 0, 0, {}}; }
inline Object frac_obj() { return Object{0, 1, 0, {}}; }
inline Object env_obj() { return Object{0, 0, 1, {}}; }
inline Object tors_obj(unsigned k) {
  if (k == 0) throw InputError("torsion exponent must be at least 1");
  return Object{0, 0, 0, {{k, 1}}};
}

inline std::string to_string(const Object& o) {
  std::vector<std::string> terms;
  auto term = [&](unsigned n, const std::string& s) {
    if (n == 1) terms.push_back(s);
    else if (n > 1) terms.push_back(std::to_string(n) + "*" + s);
  };
  term(o.free, "R");
  term(o.frac, "K");
  for (const auto& [k, n] : o.tors) term(n, "T(" + std::to_string(k) + ")");
  term(o.env, "E");
  if (terms.empty()) return "0";
  std::string out = terms[0];
  for (std::size_t i = 1; i < terms.size(); ++i) out += " + " + terms[i];
  return out;
}

/// Parses "R + 2*E + T(3) + K"; "0" is the zero object.
inline Object parse(const std::string& text) {
  Object o;
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  auto number = [&]() -> unsigned {
    std::size_t start = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    if (start == i) throw InputError("expected a number at position " + std::to_string(start) + " in '" + text + "'");
    if (i - start > 6) throw InputError("number too large in '" + text + "'");
    return static_cast<unsigned>(std::stoul(text.substr(start, i - start)));
  };
  bool first = true;
  for (;;) {
    skip();
    if (!first) {
      if (i == text.size()) break;
      if (text[i] != '+') throw InputError("expected '+' at position " + std::to_string(i) + " in '" + text + "'");
      ++i;
      skip();
    }
    first = false;
    unsigned mult = 1;
    if (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      mult = number();
      skip();
      if (i < text.size() && text[i] == '*') {
        ++i;
        skip();
      } else if (mult == 0 && (i == text.size() || text[i] == '+')) {
        continue;  // literal "0"
      } else {
        throw InputError("expected '*' after multiplicity in '" + text + "'");
      }
    }
    if (i == text.size()) throw InputError("dangling '+' in '" + text + "'");
    char c = text[i++];
    switch (c) {
      case 'R': o.free += mult; break;
      case 'K': o.frac += mult; break;
      case 'E': o.env += mult; break;
      case 'T': {
        skip();
        if (i == text.size() || text[i] != '(') throw InputError("expected '(' after T in '" + text + "'");
        ++i;
        skip();
        unsigned k = number();
        skip();
        if (i == text.size() || text[i] != ')') throw InputError("expected ')' in '" + text + "'");
        ++i;
        if (k == 0) throw InputError("torsion exponent must be at least 1");
        o.tors[k] += mult;
        break;
      }
      default: throw InputError(std::string("unknown symbol '") + c + "' in '" + text + "'");
    }
  }
  for (auto it = o.tors.begin(); it != o.tors.end();) it = it->second ? std::next(it) : o.tors.erase(it);
  return o;
}

enum class Kind { Supp, supp, coSupp, cosupp, Ass, Coass };

inline const char* kind_name(Kind k) {
  switch (k) {
    case Kind::Supp: return "Supp";
    case Kind::supp: return "supp";
    case Kind::coSupp: return "coSupp";
    case Kind::cosupp: return "cosupp";
    case Kind::Ass: return "Ass";
    case Kind::Coass: return "Coass";
  }
  return "?";
}

inline Kind parse_kind(const std::string& s) {
  for (auto k : {Kind::Supp, Kind::supp, Kind::coSupp, Kind::cosupp, Kind::Ass, Kind::Coass})
    if (s == kind_name(k)) return k;
  throw InputError("unknown DVR set kind '" + s + "' (expected Supp, supp, coSupp, cosupp, Ass or Coass)");
}

enum class Symbol { free, frac, tors, env };

/// Per-generator rule table.
inline PointSet table(Symbol s, Kind k) {
  switch (k) {
    case Kind::Supp:
    case Kind::supp:
      switch (s) {
        case Symbol::free: return kSpec;
        case Symbol::frac: return zero;
        case Symbol::tors:
        case Symbol::env: return max;
      }
      break;
    case Kind::cosupp:
      switch (s) {
        case Symbol::free: return max;
        case Symbol::frac: return zero;
        case Symbol::tors: return max;
        case Symbol::env: return up_to(Point::max);
      }
      break;
    case Kind::coSupp:
      switch (s) {
        case Symbol::free:
        case Symbol::tors: return max;
        case Symbol::env:
        case Symbol::frac: return kSpec;
      }
      break;
    case Kind::Ass:
      switch (s) {
        case Symbol::free:
        case Symbol::frac: return zero;
        case Symbol::tors:
        case Symbol::env: return max;
      }
      break;
    case Kind::Coass:
      switch (s) {
        case Symbol::free:
        case Symbol::tors: return max;
        case Symbol::env:
        case Symbol::frac: return zero;
      }
      break;
  }
  return 0;
}

/// Union of the table values over the summands present.
inline PointSet support(const Object& o, Kind k) {
  PointSet s = 0;
  if (o.free) s |= table(Symbol::free, k);
  if (o.frac) s |= table(Symbol::frac, k);
  if (o.env) s |= table(Symbol::env, k);
  for (const auto& [e, n] : o.tors)
    if (n) s |= table(Symbol::tors, k);
  return s;
}

/// Matlis dual summandwise: R <-> E, T(k) <-> T(k). K has no closed dual.
inline Object dual(const Object& o) {
  if (o.frac) throw InputError("dual of K is outside the closed duality table");
  Object d;
  d.free = o.env;
  d.env = o.free;
  d.tors = o.tors;
  return d;
}

/// The one-symbol objects used by probes and property checks.
inline std::vector<std::pair<std::string, Object>> alphabet() {
  return {{"R", free_obj()}, {"K", frac_obj()}, {"T(1)", tors_obj(1)}, {"T(3)", tors_obj(3)}, {"E", env_obj()}};
}

// ---------------------------------------------------------------------------
// Demo probes

struct Check {
  std::string label;
  std::string detail;
  bool holds = false;
  bool expected = true;  // false marks a statement known to fail as printed
};

struct Report {
  std::string probe;
  std::vector<Check> checks;

  /// Every check came out as expected.
  bool ok() const {
    for (const auto& c : checks)
      if (c.holds != c.expected) return false;
    return true;
  }
};

inline Check strict_check(const std::string& label, const std::string& lhs, PointSet a, const std::string& rhs, PointSet b) {
  return {label, lhs + " = " + format(a) + " ⊊ " + format(b) + " = " + rhs, strict_subset(a, b), true};
}

inline Report demo_strictness() {
  Report r{"strictness", {}};
  auto R = free_obj(), E = env_obj(), K = frac_obj();
  r.checks.push_back(strict_check("free module", "cosupp R", support(R, Kind::cosupp), "supp R", support(R, Kind::supp)));
  r.checks.push_back(strict_check("injective hull", "supp E", support(E, Kind::supp), "cosupp E", support(E, Kind::cosupp)));
  r.checks.push_back(strict_check("fraction field", "cosupp K", support(K, Kind::cosupp), "coSupp K", support(K, Kind::coSupp)));
  r.checks.push_back({"free module spans Spec", "supp R = " + format(support(R, Kind::supp)), support(R, Kind::supp) == kSpec, true});
  return r;
}

/// Literal identity cosupp M = min(cosupp H(M)) for a module in degree 0,
/// against the min-min form min(cosupp M) = min(cosupp H(M)).
inline Report demo_cor34() {
  Report r{"cor34", {}};
  for (const auto& [name, o] : alphabet()) {
    PointSet cs = support(o, Kind::cosupp);
    PointSet hom = cs;  // H(M) = M for a module concentrated in one degree
    bool literal = cs == minimal(hom);
    r.checks.push_back({"literal " + name, "cosupp = " + format(cs) + ", min(cosupp H) = " + format(minimal(hom)), literal,
                        name != "E"});
    r.checks.push_back({"min-min " + name, "min(cosupp) = " + format(minimal(cs)) + " = min(cosupp H)",
                        minimal(cs) == minimal(hom), true});
  }
  return r;
}

inline Report demo_maxmin() {
  Report r{"maxmin", {}};
  for (const auto& [name, o] : alphabet()) {
    PointSet s = support(o, Kind::supp), cs = support(o, Kind::cosupp), cS = support(o, Kind::coSupp);
    r.checks.push_back({"max " + name, "max(supp) = " + format(maximal(s)) + ", max(cosupp) = " + format(maximal(cs)),
                        maximal(s) == maximal(cs), true});
    r.checks.push_back({"min " + name, "min(cosupp) = " + format(minimal(cs)) + ", min(coSupp) = " + format(minimal(cS)),
                        minimal(cs) == minimal(cS), true});
  }
  return r;
}

inline Report demo(const std::string& probe) {
  if (probe == "strictness") return demo_strictness();
  if (probe == "cor34") return demo_cor34();
  if (probe == "maxmin") return demo_maxmin();
  throw InputError("unknown probe '" + probe + "' (expected strictness, cor34 or maxmin)");
}

}  // namespace cosupp::dvr
