// Command-line front end: ring info, support computations, property suites
// and the DVR probes.
//
// Exit codes: 0 ok, 1 property failure or route disagreement, 2 input error.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

#include "cosupp/verify.hpp"

using namespace cosupp;
using io::json;

namespace {

constexpr int kOk = 0, kFailure = 1, kInputError = 2;

std::string primes_label(const Ring& r, const PrimeSet& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    const Mat& b = r.spectrum()[s[i]].ideal.basis();
    std::string gens;
    for (std::size_t c = 0; c < b.cols; ++c) {
      Vec v = b.col(c);
      std::string e = v.size() == 1 ? std::to_string(v[0]) : json(v).dump();
      gens += (c ? "," : "") + e;
    }
    out += (i ? ", " : "") + std::string("p") + std::to_string(s[i]) + "=(" + (gens.empty() ? "0" : gens) + ")";
  }
  return out + "}";
}

std::pair<std::uint64_t, std::uint64_t> parse_seeds(const std::string& s) {
  auto dots = s.find("..");
  try {
    if (dots == std::string::npos) {
      auto v = std::stoull(s);
      return {v, v};
    }
    return {std::stoull(s.substr(0, dots)), std::stoull(s.substr(dots + 2))};
  } catch (const std::exception&) {
    throw InputError("seeds must look like 'a..b', got '" + s + "'");
  }
}

// ---------------------------------------------------------------------------

int ring_info(const std::string& path, bool as_json) {
  json j = json::parse(io::read_file(path), nullptr, false);
  if (j.is_discarded()) throw InputError("'" + path + "' is not valid JSON");
  RingPtr r = io::ring_from_json(j.is_object() && j.contains("ring") ? j.at("ring") : j);
  json info = io::ring_info(*r);
  if (as_json) {
    std::cout << info.dump(2) << '\n';
    return kOk;
  }
  std::cout << "ring " << r->name() << ": " << r->size() << " elements, characteristic " << r->characteristic()
            << (r->is_local() ? ", local" : "") << '\n';
  std::cout << "additive orders " << json(r->orders()).dump() << ", identity " << json(r->one()).dump() << '\n';
  std::cout << "local factors: " << r->local_factors().size() << '\n';
  for (std::size_t p = 0; p < r->spectrum().size(); ++p)
    std::cout << "  prime " << primes_label(*r, {p}) << "  local factor " << r->spectrum()[p].local_index << '\n';
  std::cout << "Jacobson radical dimension " << r->jacobson_radical().dim() << '\n';
  return kOk;
}

struct ComputeRequest {
  std::string set;
  std::string route = "all";
  std::optional<std::size_t> prime;
  std::string target;
};

std::vector<Route> routes_of(const std::string& s) {
  if (s == "all") return {Route::definitional, Route::dual, Route::homology};
  return {parse_route(s)};
}

json compute_one(const io::Scenario& sc, const ComputeRequest& req, const Options& opt, std::ostream& table) {
  const Ring& r = *sc.ring;
  std::string name = req.target.empty() ? sc.default_name() : req.target;
  Complex c = req.target.empty() ? sc.default_object() : sc.object(req.target);
  if (req.prime && *req.prime >= r.spectrum().size())
    throw InputError("prime id " + std::to_string(*req.prime) + " out of range (ring has " + std::to_string(r.spectrum().size()) +
                     " primes)");
  json out = json::array();
  auto emit = [&](const std::string& kind, const std::string& route, const PrimeSet& s) {
    json row = {{"target", name}, {"set", kind}, {"route", route}, {"primes", io::primes_to_json(r, s)}};
    table << "  " << kind << std::string(kind.size() < 8 ? 8 - kind.size() : 1, ' ') << primes_label(r, s) << "   [" << route << "]";
    if (req.prime) {
      bool in = std::find(s.begin(), s.end(), *req.prime) != s.end();
      row["prime"] = *req.prime;
      row["member"] = in;
      table << "   p" << *req.prime << (in ? " ∈" : " ∉");
    }
    table << '\n';
    out.push_back(row);
  };
  static const std::vector<std::string> families{"Ass", "ass", "Coass", "coass"};
  std::vector<std::string> kinds;
  if (req.set == "all") kinds = {"Supp", "supp", "coSupp", "cosupp", "co_supp", "Co_supp"};
  else kinds = {req.set};
  for (const auto& k : kinds) {
    auto fam = std::find(families.begin(), families.end(), k);
    if (fam != families.end()) {
      auto b = ass_coass(c, static_cast<PrimeFamily>(fam - families.begin()), opt);
      std::string prov;
      for (const auto& p : b.provenance) prov += (prov.empty() ? "" : "+") + p;
      emit(k, prov, b.primes);
      continue;
    }
    auto s = support_set(c, parse_kind(k), routes_of(req.route), opt);
    emit(k, s.route, s.primes);
  }
  return out;
}

int compute(const std::string& path, ComputeRequest req, bool as_json, const Options& opt) {
  io::Scenario sc = io::parse_scenario(path);
  std::vector<ComputeRequest> reqs;
  if (!req.set.empty()) {
    reqs.push_back(req);
  } else {
    if (sc.computations.empty()) throw InputError("no --set given and the scenario lists no computations");
    for (const auto& c : sc.computations) {
      ComputeRequest q;
      q.set = c.value("set", "all");
      q.route = c.value("route", "all");
      q.target = c.value("target", "");
      if (c.contains("prime")) q.prime = static_cast<std::size_t>(io::get_int(c.at("prime"), "computations.prime"));
      reqs.push_back(q);
    }
  }
  std::ostringstream table;
  json results = json::array();
  table << "ring " << sc.ring->name() << '\n';
  try {
    for (const auto& q : reqs)
      for (auto& row : compute_one(sc, q, opt, table)) results.push_back(row);
  } catch (const RouteDisagreement& e) {
    json routes = json::object();
    for (const auto& s : e.results) routes[s.route] = io::primes_to_json(*sc.ring, s.primes);
    json payload = {{"error", "route disagreement"},
                    {"set", e.kind},
                    {"routes", routes},
                    {"ring", io::ring_to_json(*sc.ring)},
                    {"input", io::complex_to_json(sc.default_object())}};
    std::cout << payload.dump() << '\n';
    std::cerr << "cosupp: " << e.what() << '\n';
    return kFailure;
  }
  if (as_json) std::cout << json({{"ring", sc.ring->name()}, {"results", results}}).dump() << '\n';
  else std::cout << table.str();
  return kOk;
}

int verify_run(const verify::SuiteConfig& cfg, const std::string& out_path, bool quiet) {
  auto res = verify::run_suite(cfg);
  if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::app);
    if (!out) throw InputError("cannot open '" + out_path + "' for writing");
    verify::write_jsonl(out, res);
    if (!out) throw std::runtime_error("failed writing '" + out_path + "'");
  }
  if (!quiet) {
    std::cout << "property            pass  fail  flagged  vacuous\n";
    for (const auto& [id, s] : res.stats) {
      std::printf("%-18s %5zu %5zu %8zu %8zu\n", id.c_str(), s.pass, s.fail, s.flagged, s.vacuous);
    }
    std::fflush(stdout);
    std::cout << "instances " << res.instances << ", with >= 2 nonzero homologies " << res.multi_homology << '\n';
    std::cout << "total pass " << res.pass << ", fail " << res.fail << ", flagged " << res.flagged << '\n';
    if (res.flagged) {
      std::cout << "flagged (statement fails as printed, not a defect):\n";
      for (const auto& v : res.verdicts)
        if (v.outcome.status == verify::Status::flagged)
          std::cout << "  " << v.property << " seed " << v.seed << " " << v.outcome.details.value("object", "") << '\n';
    }
    for (const auto& v : res.verdicts)
      if (v.outcome.status == verify::Status::fail)
        std::cout << "FAIL " << v.property << " seed " << v.seed << " ring " << v.ring << " digest " << v.digest << " "
                  << v.outcome.details.value("failed", "") << '\n';
    for (const auto& id : res.vacuity_violations) std::cout << "vacuity above 80%: " << id << '\n';
    std::printf("elapsed %.1f s\n", res.elapsed_ms / 1000.0);
  }
  return res.ok() ? kOk : kFailure;
}

int dvr_demo(const std::string& probe, bool as_json) {
  auto rep = dvr::demo(probe);
  if (as_json) {
    json checks = json::array();
    for (const auto& c : rep.checks)
      checks.push_back({{"label", c.label}, {"detail", c.detail}, {"holds", c.holds}, {"expected", c.expected}});
    std::cout << json({{"probe", rep.probe}, {"checks", checks}, {"ok", rep.ok()}}).dump() << '\n';
  } else {
    for (const auto& c : rep.checks) {
      const char* tag = c.holds == c.expected ? (c.holds ? "holds " : "fails (expected)") : "UNEXPECTED";
      std::cout << c.label << ": " << c.detail << "   " << tag << '\n';
    }
  }
  return rep.ok() ? kOk : kFailure;
}

int dvr_eval(const std::string& expr, const std::string& set, bool as_json) {
  auto obj = dvr::parse(expr);
  std::vector<dvr::Kind> kinds;
  if (set == "all") kinds = {dvr::Kind::Supp, dvr::Kind::supp, dvr::Kind::coSupp, dvr::Kind::cosupp, dvr::Kind::Ass, dvr::Kind::Coass};
  else kinds = {dvr::parse_kind(set)};
  json rows = json::array();
  for (auto k : kinds) {
    auto s = dvr::support(obj, k);
    if (as_json) rows.push_back({{"set", dvr::kind_name(k)}, {"primes", dvr::point_names(s)}});
    else std::cout << dvr::kind_name(k) << "(" << dvr::to_string(obj) << ") = " << dvr::format(s) << '\n';
  }
  if (as_json) std::cout << json({{"object", dvr::to_string(obj)}, {"results", rows}}).dump() << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Support and cosupport computations over finite commutative rings"};
  app.require_subcommand(1);
  app.fallthrough();
  bool as_json = false;
  app.add_flag("--json", as_json, "Machine-readable output");

  auto* ring = app.add_subcommand("ring", "Ring utilities");
  ring->require_subcommand(1);
  auto* info = ring->add_subcommand("info", "Describe the ring of a scenario or ring file");
  std::string ring_file;
  info->add_option("file", ring_file, "Scenario or ring JSON")->required();

  auto* comp = app.add_subcommand("compute", "Compute a support-type set");
  ComputeRequest req;
  std::string input;
  std::optional<std::size_t> prime;
  bool validate = false;
  comp->add_option("--set", req.set, "Supp|supp|coSupp|cosupp|co_supp|Co_supp|Ass|ass|Coass|coass|all");
  comp->add_option("--route", req.route, "definitional|dual|homology|all")->default_val("all");
  comp->add_option("--prime", prime, "Prime id to test for membership");
  comp->add_option("--target", req.target, "Named module or complex");
  comp->add_option("--input", input, "Scenario file")->required();
  comp->add_flag("--validate", validate, "Cross-check nonvanishing criteria against derived windows");

  auto* ver = app.add_subcommand("verify", "Property suites");
  ver->require_subcommand(1);
  auto* run = ver->add_subcommand("run", "Run properties over a seed range");
  verify::SuiteConfig cfg;
  std::string seeds = "0..199", out_path, fault;
  bool no_shrink = false, quiet = false;
  run->add_option("--suite", cfg.suite, "Comma-separated property ids, or all")->default_val("all");
  run->add_option("--seeds", seeds, "Seed range a..b")->default_val("0..199");
  run->add_option("--out", out_path, "Append JSONL verdicts to this file");
  run->add_option("--jobs", cfg.jobs, "Worker threads")->default_val(1)->check(CLI::Range(1u, 256u));
  run->add_option("--module-cap", cfg.profile.module_cap, "Largest generated module")->default_val(64);
  run->add_option("--fault", fault, "Inject a deliberate defect (wrong-v)");
  run->add_flag("--no-shrink", no_shrink, "Report failures without shrinking");
  run->add_flag("--quiet", quiet, "Only the exit status and the JSONL file");
  auto* list = ver->add_subcommand("list", "List property ids");

  auto* dv = app.add_subcommand("dvr", "Complete DVR rule tables");
  dv->require_subcommand(1);
  auto* demo = dv->add_subcommand("demo", "Run a probe: strictness, cor34 or maxmin");
  std::string probe;
  demo->add_option("probe", probe, "Probe name")->required();
  auto* eval = dv->add_subcommand("eval", "Evaluate a set on an expression like \"R + 2*E + T(3) + K\"");
  std::string expr, dvr_set = "all";
  eval->add_option("expr", expr, "Expression")->required();
  eval->add_option("--set", dvr_set, "Supp|supp|coSupp|cosupp|Ass|Coass|all")->default_val("all");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*info) return ring_info(ring_file, as_json);
    if (*comp) {
      req.prime = prime;
      Options opt;
      opt.validate = validate;
      return compute(input, req, as_json, opt);
    }
    if (*run) {
      std::tie(cfg.first, cfg.last) = parse_seeds(seeds);
      if (!fault.empty()) {
        if (fault != "wrong-v") throw InputError("unknown fault '" + fault + "' (expected wrong-v)");
        cfg.options.fault_wrong_v = true;
      }
      cfg.shrink_failures = !no_shrink;
      return verify_run(cfg, out_path, quiet);
    }
    if (*list) {
      for (const auto& p : verify::registry())
        std::cout << p.id << "  [" << p.domain << (p.implication ? ", implication" : "") << "]\n";
      return kOk;
    }
    if (*demo) return dvr_demo(probe, as_json);
    if (*eval) return dvr_eval(expr, dvr_set, as_json);
  } catch (const InputError& e) {
    std::cerr << "cosupp: input error: " << e.what() << '\n';
    return kInputError;
  } catch (const json::exception& e) {
    std::cerr << "cosupp: input error: " << e.what() << '\n';
    return kInputError;
  } catch (const RouteDisagreement& e) {
    std::cerr << "cosupp: " << e.what() << '\n';
    return kFailure;
  } catch (const KernelBug& e) {
    std::cerr << "cosupp: internal inconsistency: " << e.what() << '\n';
    return kFailure;
  } catch (const std::exception& e) {
    std::cerr << "cosupp: " << e.what() << '\n';
    return kFailure;
  }
  return kOk;
}
