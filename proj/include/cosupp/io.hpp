#pragma once
// JSON forms of rings, modules, complexes and prime sets, and the scenario
// file format read by the command-line tool.

#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cosupp/supports.hpp"

namespace cosupp::io {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Primitive conversions

inline json to_json(const Mat& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows; ++i) rows.push_back(m.row(i));
  return rows;
}

inline Int get_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw InputError(where + ": expected an integer");
  return j.get<Int>();
}

inline Vec get_vec(const json& j, const std::string& where) {
  if (!j.is_array()) throw InputError(where + ": expected an array of integers");
  Vec v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(get_int(j[i], where + "[" + std::to_string(i) + "]"));
  return v;
}

/// Matrix from a list of rows; rows/cols are checked when given.
inline Mat get_mat(const json& j, std::size_t rows, std::size_t cols, const std::string& where) {
  if (!j.is_array()) throw InputError(where + ": expected a matrix (list of rows)");
  if (j.size() != rows) throw InputError(where + ": expected " + std::to_string(rows) + " rows, got " + std::to_string(j.size()));
  Mat m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    Vec r = get_vec(j[i], where + " row " + std::to_string(i));
    if (r.size() != cols)
      throw InputError(where + " row " + std::to_string(i) + ": expected " + std::to_string(cols) + " entries, got " +
                       std::to_string(r.size()));
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = r[c];
  }
  return m;
}

/// A ring element: coordinate list, or an integer n meaning n·1.
inline Vec get_element(const Ring& r, const json& j, const std::string& where) {
  if (j.is_number_integer()) return r.scale(j.get<Int>(), r.one());
  Vec v = get_vec(j, where);
  if (v.size() != r.dim()) throw InputError(where + ": ring element needs " + std::to_string(r.dim()) + " coordinates");
  return r.reduce(v);
}

// ---------------------------------------------------------------------------
// Rings

inline RingSpec ring_spec_from_json(const json& j, const std::string& where = "ring") {
  if (!j.is_object()) throw InputError(where + ": expected an object");
  RingSpec s;
  if (!j.contains("kind")) throw InputError(where + ": missing 'kind'");
  s.kind = j.at("kind").get<std::string>();
  s.name = j.value("name", "");
  if (s.kind == "zmod") {
    if (!j.contains("n")) throw InputError(where + ": zmod needs 'n'");
    s.n = get_int(j.at("n"), where + ".n");
  } else if (s.kind == "gf") {
    if (!j.contains("p") || !j.contains("min_poly")) throw InputError(where + ": gf needs 'p' and 'min_poly'");
    s.p = get_int(j.at("p"), where + ".p");
    s.deg = j.contains("deg") ? get_int(j.at("deg"), where + ".deg") : 0;
    s.min_poly = get_vec(j.at("min_poly"), where + ".min_poly");
  } else if (s.kind == "quot") {
    if (!j.contains("characteristic") || !j.contains("vars") || !j.contains("relations"))
      throw InputError(where + ": quot needs 'characteristic', 'vars' and 'relations'");
    s.characteristic = get_int(j.at("characteristic"), where + ".characteristic");
    s.vars = j.at("vars").get<std::vector<std::string>>();
    // each relation is a monomial {"x":2,"y":1}
    for (const auto& rel : j.at("relations")) {
      if (!rel.is_object()) throw InputError(where + ".relations: each relation is an object of exponents");
      std::vector<std::pair<std::string, Int>> mono;
      for (const auto& [v, e] : rel.items()) mono.emplace_back(v, get_int(e, where + ".relations." + v));
      s.relations.push_back(std::move(mono));
    }
  } else if (s.kind == "product") {
    if (!j.contains("factors") || !j.at("factors").is_array()) throw InputError(where + ": product needs 'factors'");
    for (std::size_t i = 0; i < j.at("factors").size(); ++i)
      s.factors.push_back(ring_spec_from_json(j.at("factors")[i], where + ".factors[" + std::to_string(i) + "]"));
  } else {
    throw InputError(where + ": unknown ring kind '" + s.kind + "'");
  }
  return s;
}

/// Explicit structure constants; round-trips through ring_from_json.
inline json ring_to_json(const Ring& r) {
  json left = json::array();
  for (const auto& m : r.left_all()) left.push_back(to_json(m));
  return {{"name", r.name()}, {"orders", r.orders()}, {"left", left}, {"one", r.one()}};
}

/// Accepts {"catalog": name}, a construction {"kind": ...} or explicit
/// {"orders", "left", "one"}.
inline RingPtr ring_from_json(const json& j, const std::string& where = "ring") {
  if (j.is_string()) return catalog_ring(j.get<std::string>());
  if (!j.is_object()) throw InputError(where + ": expected an object or catalog name");
  if (j.contains("catalog")) return catalog_ring(j.at("catalog").get<std::string>());
  if (j.contains("kind")) return build_ring(ring_spec_from_json(j, where));
  if (!j.contains("orders") || !j.contains("left") || !j.contains("one"))
    throw InputError(where + ": need 'catalog', 'kind', or explicit 'orders'/'left'/'one'");
  Vec orders = get_vec(j.at("orders"), where + ".orders");
  std::vector<Mat> left;
  if (!j.at("left").is_array() || j.at("left").size() != orders.size())
    throw InputError(where + ".left: need one matrix per additive generator");
  for (std::size_t i = 0; i < orders.size(); ++i)
    left.push_back(get_mat(j.at("left")[i], orders.size(), orders.size(), where + ".left[" + std::to_string(i) + "]"));
  return Ring::make(orders, std::move(left), get_vec(j.at("one"), where + ".one"), j.value("name", "ring"));
}

inline json prime_to_json(const Ring& r, std::size_t p) {
  json gens = json::array();
  const Mat& b = r.spectrum().at(p).ideal.basis();
  for (std::size_t c = 0; c < b.cols; ++c) gens.push_back(b.col(c));
  return {{"id", p}, {"local_index", r.spectrum()[p].local_index}, {"generators", gens}};
}

inline json primes_to_json(const Ring& r, const PrimeSet& s) {
  json out = json::array();
  for (auto p : s) out.push_back(prime_to_json(r, p));
  return out;
}

inline json ideal_to_json(const Ideal& a) {
  json gens = json::array();
  for (std::size_t c = 0; c < a.basis().cols; ++c) gens.push_back(a.basis().col(c));
  return gens;
}

inline json ring_info(const Ring& r) {
  json primes = json::array();
  for (std::size_t p = 0; p < r.spectrum().size(); ++p) primes.push_back(prime_to_json(r, p));
  json factors = json::array();
  for (std::size_t i = 0; i < r.local_factors().size(); ++i)
    factors.push_back({{"idempotent", r.local_factors()[i].idempotent}, {"size", r.factor_ring(i)->size()}});
  return {{"name", r.name()},
          {"size", r.size()},
          {"characteristic", r.characteristic()},
          {"orders", r.orders()},
          {"local", r.is_local()},
          {"local_factors", factors},
          {"spectrum", primes},
          {"maximal", maximal(r, all_primes(r))},
          {"jacobson_radical", ideal_to_json(r.jacobson_radical())}};
}

// ---------------------------------------------------------------------------
// Modules and complexes

inline json module_to_json(const FinModule& m) {
  json act = json::array();
  for (const auto& a : m.action) act.push_back(to_json(a));
  return {{"orders", m.orders}, {"action", act}};
}

using ModuleTable = std::map<std::string, FinModule>;

inline FinModule module_from_json(const RingPtr& r, const json& j, const ModuleTable& named, const std::string& where);

inline const FinModule& lookup(const ModuleTable& named, const std::string& name, const std::string& where) {
  auto it = named.find(name);
  if (it == named.end()) throw InputError(where + ": unknown module reference '" + name + "'");
  return it->second;
}

inline std::size_t get_prime(const Ring& r, const json& j, const std::string& where) {
  Int p = get_int(j, where);
  if (p < 0 || static_cast<std::size_t>(p) >= r.spectrum().size())
    throw InputError(where + ": prime id " + std::to_string(p) + " out of range (ring has " +
                     std::to_string(r.spectrum().size()) + " primes)");
  return static_cast<std::size_t>(p);
}

/// Module forms: a reference "name", {"free":k}, {"residue":p},
/// {"envelope":p}, {"cyclic":[gens]}, {"presentation":{rows,cols,entries}},
/// {"sum":[...]}, {"dual":...} or explicit {"orders","action"}.
inline FinModule module_from_json(const RingPtr& r, const json& j, const ModuleTable& named, const std::string& where) {
  if (j.is_string()) return lookup(named, j.get<std::string>(), where);
  if (!j.is_object()) throw InputError(where + ": expected a module object or reference");
  if (j.contains("free")) {
    Int k = get_int(j.at("free"), where + ".free");
    if (k < 0 || k > 16) throw InputError(where + ".free: rank must be in [0, 16]");
    return free_module(r, static_cast<std::size_t>(k));
  }
  if (j.contains("residue")) return residue_field(r, get_prime(*r, j.at("residue"), where + ".residue"));
  if (j.contains("envelope")) return injective_envelope(r, get_prime(*r, j.at("envelope"), where + ".envelope")).module;
  if (j.contains("cyclic")) {
    std::vector<Vec> gens;
    const auto& g = j.at("cyclic");
    if (!g.is_array()) throw InputError(where + ".cyclic: expected a list of ring elements");
    for (std::size_t i = 0; i < g.size(); ++i) gens.push_back(get_element(*r, g[i], where + ".cyclic[" + std::to_string(i) + "]"));
    return cyclic_module(r, make_ideal(*r, gens));
  }
  if (j.contains("presentation")) {
    const auto& p = j.at("presentation");
    auto rows = static_cast<std::size_t>(get_int(p.at("rows"), where + ".rows"));
    auto cols = static_cast<std::size_t>(get_int(p.at("cols"), where + ".cols"));
    const auto& e = p.at("entries");
    if (!e.is_array() || e.size() != rows) throw InputError(where + ".entries: expected " + std::to_string(rows) + " rows");
    std::vector<std::vector<Vec>> entries(rows);
    for (std::size_t i = 0; i < rows; ++i) {
      if (!e[i].is_array() || e[i].size() != cols) throw InputError(where + ".entries row " + std::to_string(i) + ": wrong length");
      for (std::size_t c = 0; c < cols; ++c) entries[i].push_back(get_element(*r, e[i][c], where + ".entries"));
    }
    return cokernel_presentation(r, entries, rows, cols);
  }
  if (j.contains("sum")) {
    std::vector<FinModule> parts;
    const auto& s = j.at("sum");
    if (!s.is_array()) throw InputError(where + ".sum: expected a list");
    for (std::size_t i = 0; i < s.size(); ++i) parts.push_back(module_from_json(r, s[i], named, where + ".sum[" + std::to_string(i) + "]"));
    return direct_sum(r, parts).module;
  }
  if (j.contains("dual")) return char_dual(module_from_json(r, j.at("dual"), named, where + ".dual"));
  if (j.contains("orders")) {
    Vec orders = get_vec(j.at("orders"), where + ".orders");
    for (Int o : orders)
      if (o < 2) throw InputError(where + ".orders: each order must be >= 2");
    if (!j.contains("action") || !j.at("action").is_array() || j.at("action").size() != r->dim())
      throw InputError(where + ".action: need one matrix per ring generator (" + std::to_string(r->dim()) + ")");
    std::vector<Mat> act;
    for (std::size_t i = 0; i < r->dim(); ++i)
      act.push_back(get_mat(j.at("action")[i], orders.size(), orders.size(), where + ".action[" + std::to_string(i) + "]"));
    try {
      return make_module(r, orders, std::move(act));
    } catch (const InputError& e) {
      throw InputError(where + ": " + e.what());
    }
  }
  throw InputError(where + ": unrecognized module form");
}

/// Names referenced by a module form.
inline std::vector<std::string> module_refs(const json& j) {
  std::vector<std::string> out;
  if (j.is_string()) {
    out.push_back(j.get<std::string>());
  } else if (j.is_object()) {
    if (j.contains("sum") && j.at("sum").is_array())
      for (const auto& part : j.at("sum"))
        for (auto& r : module_refs(part)) out.push_back(std::move(r));
    if (j.contains("dual"))
      for (auto& r : module_refs(j.at("dual"))) out.push_back(std::move(r));
  }
  return out;
}

inline json complex_to_json(const Complex& c) {
  json mods = json::object(), diffs = json::object();
  if (!c.empty()) {
    for (int n = c.lo(); n <= c.hi(); ++n) mods[std::to_string(n)] = module_to_json(c.at(n));
    for (int n = c.lo() + 1; n <= c.hi(); ++n) diffs[std::to_string(n)] = to_json(c.d(n));
  }
  return {{"modules", mods}, {"differentials", diffs}};
}

inline int get_degree(const std::string& key, const std::string& where) {
  try {
    std::size_t used = 0;
    int n = std::stoi(key, &used);
    if (used == key.size() && n >= -64 && n <= 64) return n;
  } catch (const std::exception&) {
  }
  throw InputError(where + ": degree key '" + key + "' is not an integer in [-64, 64]");
}

/// {"modules": {"0": <module>, ...}, "differentials": {"1": [[...]], ...}};
/// d_n maps degree n to degree n-1 and is given as a target x source matrix.
inline Complex complex_from_json(const RingPtr& r, const json& j, const ModuleTable& named, const std::string& where) {
  if (!j.is_object() || !j.contains("modules")) throw InputError(where + ": complex needs 'modules'");
  std::map<int, FinModule> mods;
  for (const auto& [k, v] : j.at("modules").items())
    mods.emplace(get_degree(k, where), module_from_json(r, v, named, where + ".modules." + k));
  std::map<int, Mat> diffs;
  if (j.contains("differentials"))
    for (const auto& [k, v] : j.at("differentials").items()) {
      int n = get_degree(k, where);
      auto src = mods.find(n), dst = mods.find(n - 1);
      if (src == mods.end() || dst == mods.end())
        throw InputError(where + ": differential at degree " + k + " needs modules in degrees " + k + " and " + std::to_string(n - 1));
      diffs[n] = get_mat(v, dst->second.dim(), src->second.dim(), where + ".differentials." + k);
    }
  try {
    return make_complex(r, mods, diffs);
  } catch (const InputError& e) {
    throw InputError(where + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Scenarios

struct Scenario {
  RingPtr ring;
  ModuleTable modules;
  std::map<std::string, Complex> complexes;
  std::string target;  // default object for compute
  json computations = json::array();

  /// A named complex, or a named module placed in degree 0.
  Complex object(const std::string& name) const {
    if (auto it = complexes.find(name); it != complexes.end()) return it->second;
    if (auto it = modules.find(name); it != modules.end()) return module_complex(it->second);
    throw InputError("unknown object reference '" + name + "'");
  }

  Complex default_object() const {
    if (!target.empty()) return object(target);
    if (complexes.size() == 1) return complexes.begin()->second;
    if (complexes.empty() && modules.size() == 1) return module_complex(modules.begin()->second);
    throw InputError("scenario has several objects; set 'target'");
  }

  std::string default_name() const {
    if (!target.empty()) return target;
    return complexes.size() == 1 ? complexes.begin()->first : modules.empty() ? "" : modules.begin()->first;
  }
};

inline Scenario parse_scenario_json(const json& j) {
  if (!j.is_object()) throw InputError("scenario: top level must be an object");
  if (!j.contains("ring")) throw InputError("scenario: missing 'ring'");
  Scenario s;
  s.ring = ring_from_json(j.at("ring"));
  if (j.contains("modules")) {
    const json& mods = j.at("modules");
    if (!mods.is_object()) throw InputError("modules: expected an object");
    // resolve in dependency order
    std::map<std::string, int> state;  // 1 = in progress, 2 = done
    std::function<void(const std::string&, const std::string&)> visit = [&](const std::string& name, const std::string& from) {
      if (!mods.contains(name)) throw InputError(from + ": unknown module reference '" + name + "'");
      int& st = state[name];
      if (st == 2) return;
      if (st == 1) throw InputError("modules." + name + ": cyclic module reference");
      st = 1;
      for (const auto& dep : module_refs(mods.at(name))) visit(dep, "modules." + name);
      s.modules[name] = module_from_json(s.ring, mods.at(name), s.modules, "modules." + name);
      state[name] = 2;
    };
    for (const auto& [name, v] : mods.items()) visit(name, "modules");
  }
  if (j.contains("complexes"))
    for (const auto& [name, v] : j.at("complexes").items()) {
      if (s.modules.count(name)) throw InputError("complexes." + name + ": name already used by a module");
      s.complexes.emplace(name, complex_from_json(s.ring, v, s.modules, "complexes." + name));
    }
  s.target = j.value("target", "");
  if (!s.target.empty()) (void)s.object(s.target);
  if (j.contains("computations")) {
    s.computations = j.at("computations");
    for (const auto& c : s.computations) {
      if (c.contains("target")) (void)s.object(c.at("target").get<std::string>());
      if (c.contains("set")) {
        auto k = c.at("set").get<std::string>();
        static const std::vector<std::string> families{"Ass", "ass", "Coass", "coass", "all"};
        if (std::find(families.begin(), families.end(), k) == families.end()) (void)parse_kind(k);
      }
      if (c.contains("route") && c.at("route").get<std::string>() != "all") (void)parse_route(c.at("route").get<std::string>());
    }
  }
  return s;
}

inline Scenario parse_scenario_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("scenario is not valid JSON: ") + e.what());
  }
  try {
    return parse_scenario_json(j);
  } catch (const json::exception& e) {
    throw InputError(std::string("scenario schema violation: ") + e.what());
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Scenario parse_scenario(const std::string& path) { return parse_scenario_text(read_file(path)); }

/// FNV-1a 64-bit, printed as 16 hex digits.
inline std::string digest(const std::string& data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace cosupp::io
