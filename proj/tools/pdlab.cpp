// Unified command-line front end: one experiment per process, JSON reports,
// CSV sweeps, deterministic output for a fixed (config, seed) regardless of
// worker count. Exit codes: 0 ok, 64 usage, 65 budget, 70 assertion.
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <sys/stat.h>
#include <vector>

#include <CLI11.hpp>

#include "pdlab/capp.hpp"
#include "pdlab/diag.hpp"
#include "pdlab/errors.hpp"
#include "pdlab/highrkt.hpp"
#include "pdlab/kolmogorov.hpp"
#include "pdlab/lk.hpp"
#include "pdlab/manifest.hpp"
#include "pdlab/nw.hpp"
#include "pdlab/perm.hpp"
#include "pdlab/primes.hpp"
#include "pdlab/report.hpp"
#include "pdlab/rng.hpp"

namespace {

using namespace pdlab;

struct CliExit {
  int code = 0;
};

struct Globals {
  uint64_t seed = 0;
  std::string out;
  unsigned workers = 1;
};

struct Emitted {
  bool is_csv = false;
  OrderedJson doc;
  std::string csv;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cli: cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool file_exists(const std::string& path) {
  struct stat st{};
  return stat(path.c_str(), &st) == 0;
}

Bits parse_bits_checked(const std::string& s) {
  if (s.empty() || s.size() > 64) throw ValidationError("cli: bit string length must be 1..64");
  for (char c : s)
    if (c != '0' && c != '1') throw ValidationError("cli: bit strings are over {0,1}");
  return Bits::parse(s);
}

void parse_fraction(const std::string& s, uint64_t* num, uint64_t* den) {
  size_t slash = s.find('/');
  if (slash == std::string::npos || slash == 0 || slash + 1 == s.size())
    throw ValidationError("cli: fractions are written p/q");
  try {
    *num = std::stoull(s.substr(0, slash));
    *den = std::stoull(s.substr(slash + 1));
  } catch (const std::exception&) {
    throw ValidationError("cli: fraction parts must be integers");
  }
  if (*den == 0) throw ValidationError("cli: fraction denominator is zero");
}

// --gen accepts a JSON file path or the JSON text itself.
GeneratorConfig load_generator(const std::string& spec) {
  if (spec.empty()) throw ValidationError("cli: --gen is required here");
  return GeneratorConfig::parse(file_exists(spec) ? read_file(spec) : spec);
}

GeneratorConfig identity_config(uint32_t ell) {
  GeneratorConfig cfg;
  cfg.kind = GeneratorConfig::Kind::kIdentity;
  cfg.ell = ell;
  cfg.m = ell;
  return cfg;
}

// Smallest n >= 2 whose encoding size n^d holds the netlist.
uint32_t auto_instance_n(size_t len, uint32_t d) {
  for (uint32_t n = 2; n <= 4096; n++) {
    uint64_t size = 1;
    bool over = false;
    for (uint32_t i = 0; i < d && !over; i++) {
      size *= n;
      if (size > kCappEncodingCap) over = true;
    }
    if (over) break;
    if (size >= len) return n;
  }
  throw BudgetError("cli: netlist does not fit any encodable instance size");
}

CappInstance load_instance(const std::string& path, uint32_t n, uint32_t d) {
  Circuit c = Circuit::from_netlist(read_file(path));
  if (d == 0) d = (uint32_t)manifest().capp_c;
  if (n == 0) n = auto_instance_n(c.to_netlist().size(), d);
  return CappInstance::make(n, d, c);
}

void put_estimate(OrderedJson& results, const CappInstance& inst, const CappEstimate& est) {
  results["mu_num"] = est.mu.num;
  results["mu_logden"] = est.mu.e;
  results["mode"] = capp_mode_name(est.mode);
  results["success"] = capp_success_name(capp_success(inst, est));
  results["canonical"] = est.canonical;
  results["samples"] = est.samples;
}

struct Range {
  std::string name;
  std::vector<uint64_t> values;
};

// name=A..B walks by +1; name=A..B:S by +S; name=A..B:xS multiplies by S.
// A > B is the empty range.
Range parse_range(const std::string& spec) {
  Range r;
  size_t eq = spec.find('=');
  size_t dots = spec.find("..");
  if (eq == std::string::npos || eq == 0 || dots == std::string::npos || dots < eq)
    throw ValidationError("cli: ranges are written name=A..B[:S|:xS]");
  r.name = spec.substr(0, eq);
  std::string lo_s = spec.substr(eq + 1, dots - eq - 1);
  std::string rest = spec.substr(dots + 2);
  std::string hi_s = rest;
  uint64_t step = 1;
  bool mul = false;
  size_t colon = rest.find(':');
  if (colon != std::string::npos) {
    hi_s = rest.substr(0, colon);
    std::string s = rest.substr(colon + 1);
    if (!s.empty() && (s[0] == 'x' || s[0] == 'X')) {
      mul = true;
      s = s.substr(1);
    }
    try {
      step = std::stoull(s);
    } catch (const std::exception&) {
      throw ValidationError("cli: range step must be an integer");
    }
    if (step < (mul ? 2u : 1u)) throw ValidationError("cli: range step too small");
  }
  uint64_t lo = 0, hi = 0;
  try {
    lo = std::stoull(lo_s);
    hi = std::stoull(hi_s);
  } catch (const std::exception&) {
    throw ValidationError("cli: range endpoints must be integers");
  }
  for (uint64_t v = lo; v <= hi; v = mul ? v * step : v + step) {
    r.values.push_back(v);
    if (r.values.size() > 4096) throw BudgetError("cli: range longer than 4096 values");
    if (mul && v > hi / step) break;  // next multiply would overflow past hi
  }
  return r;
}

void flatten_results(const OrderedJson& node, const std::string& prefix,
                     std::vector<std::pair<std::string, std::string>>* cells) {
  for (auto it = node.begin(); it != node.end(); ++it) {
    std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    const auto& v = it.value();
    if (v.is_object()) {
      flatten_results(v, key, cells);
    } else if (v.is_array()) {
      continue;  // sweeps keep scalar columns only
    } else if (v.is_string()) {
      cells->emplace_back(key, v.get<std::string>());
    } else {
      cells->emplace_back(key, v.dump());
    }
  }
}

Emitted dispatch(const std::vector<std::string>& args, const Globals& g, bool allow_sweep);

Emitted run_sweep(const Range& range, const std::vector<std::string>& rest, const Globals& g) {
  if (!rest.empty() && rest[0] == "sweep")
    throw ValidationError("cli: sweeps do not nest");
  std::string csv;
  std::vector<std::string> header{range.name};
  bool have_header = false;
  std::string body;
  for (uint64_t v : range.values) {
    std::vector<std::string> inner = rest;
    inner.push_back("--" + range.name);
    inner.push_back(std::to_string(v));
    Emitted e = dispatch(inner, g, false);
    if (e.is_csv) throw ValidationError("cli: the swept subcommand must emit a JSON report");
    std::vector<std::pair<std::string, std::string>> cells;
    flatten_results(e.doc["results"], "", &cells);
    if (!have_header) {
      for (auto& kv : cells) header.push_back(kv.first);
      have_header = true;
    }
    std::vector<std::string> row{std::to_string(v)};
    for (auto& kv : cells) row.push_back(kv.second);
    if (row.size() != header.size())
      throw InternalError("cli: sweep rows changed shape mid-range");
    body += csv_row(row);
  }
  Emitted e;
  e.is_csv = true;
  e.csv = csv_row(header) + body;
  return e;
}

Emitted dispatch(const std::vector<std::string>& args, const Globals& g, bool allow_sweep) {
  CLI::App app{"desk-scale lab for pseudodeterministic estimation, diagonalization, "
               "randomized Kolmogorov complexity, and succinct primes "
               "(global flags: --seed N --out PATH --workers N --config FILE)"};
  app.require_subcommand(1);
  Emitted emitted;

  // ---- capp ---------------------------------------------------------------
  auto* capp = app.add_subcommand("capp", "acceptance-probability estimation");
  capp->require_subcommand(1);
  struct {
    std::string circuit, gen;
    uint32_t n = 0, d = 0;
    uint64_t samples = 100000;
    bool self_check = false;
  } ca;
  auto add_capp_common = [&](CLI::App* cmd) {
    cmd->add_option("--circuit", ca.circuit, "netlist file")->required();
    cmd->add_option("--n", ca.n, "instance size parameter (0 = smallest fit)");
    cmd->add_option("--d", ca.d, "encoding exponent (0 = manifest default)");
  };
  auto capp_config = [&](const char* op) {
    OrderedJson cfg;
    cfg["op"] = op;
    cfg["circuit"] = ca.circuit;
    cfg["n"] = ca.n;
    cfg["d"] = ca.d;
    cfg["seed"] = g.seed;
    return cfg;
  };
  auto* capp_exact_cmd = capp->add_subcommand("exact", "enumerate all wired inputs");
  add_capp_common(capp_exact_cmd);
  capp_exact_cmd->callback([&] {
    CappInstance inst = load_instance(ca.circuit, ca.n, ca.d);
    OrderedJson doc = report_skeleton("capp exact", capp_config("exact"));
    put_estimate(doc["results"], inst, capp_exact(inst));
    emitted.doc = doc;
  });
  auto* capp_sample_cmd = capp->add_subcommand("sample", "empirical mean over uniform inputs");
  add_capp_common(capp_sample_cmd);
  capp_sample_cmd->add_option("--samples", ca.samples, "draw count (rounded up to 2^k)");
  capp_sample_cmd->callback([&] {
    CappInstance inst = load_instance(ca.circuit, ca.n, ca.d);
    OrderedJson cfg = capp_config("sample");
    cfg["samples"] = ca.samples;
    OrderedJson doc = report_skeleton("capp sample", cfg);
    Sampler s("cli-capp-sample", inst.n, g.seed);
    put_estimate(doc["results"], inst, capp_sample(inst, ca.samples, s));
    emitted.doc = doc;
  });
  auto* capp_prg_cmd = capp->add_subcommand("prg", "derandomized canonical estimate");
  add_capp_common(capp_prg_cmd);
  capp_prg_cmd->add_option("--gen", ca.gen, "generator config (JSON file or text)")->required();
  capp_prg_cmd->add_flag("--self-check", ca.self_check, "run the empirical smoke check");
  capp_prg_cmd->callback([&] {
    CappInstance inst = load_instance(ca.circuit, ca.n, ca.d);
    GeneratorConfig gen = load_generator(ca.gen);
    OrderedJson cfg = capp_config("prg");
    cfg["gen"] = OrderedJson::parse(gen.to_json());
    cfg["self_check"] = ca.self_check;
    OrderedJson doc = report_skeleton("capp prg", cfg);
    Sampler s("cli-capp-prg", inst.n, g.seed);
    put_estimate(doc["results"], inst, capp_pseudodet(inst, gen, s, ca.self_check));
    emitted.doc = doc;
  });

  // ---- kolmo --------------------------------------------------------------
  auto* kolmo = app.add_subcommand("kolmo", "time-bounded descriptive complexity");
  kolmo->require_subcommand(1);
  struct {
    std::string x, measure = "rkt", delta = "2/3";
    uint32_t m = 0, t = 16;
  } ko;
  auto kolmo_budget = [&] {
    ComplexityBudget b;
    parse_fraction(ko.delta, &b.delta_num, &b.delta_den);
    b.validate();
    return b;
  };
  auto* kolmo_measure_cmd = kolmo->add_subcommand("measure", "one string's witness cost");
  kolmo_measure_cmd->add_option("--x", ko.x, "the string")->required();
  kolmo_measure_cmd->add_option("--measure", ko.measure, "kt | rkt | rkt-poly")
      ->check(CLI::IsMember({"kt", "rkt", "rkt-poly"}));
  kolmo_measure_cmd->add_option("--delta", ko.delta, "success threshold p/q");
  kolmo_measure_cmd->add_option("--t", ko.t, "step budget (rkt-poly only)");
  kolmo_measure_cmd->callback([&] {
    Bits x = parse_bits_checked(ko.x);
    ComplexityBudget b = kolmo_budget();
    OrderedJson cfg;
    cfg["op"] = "measure";
    cfg["x"] = ko.x;
    cfg["measure"] = ko.measure;
    cfg["delta"] = ko.delta;
    if (ko.measure == "rkt-poly") cfg["t"] = ko.t;
    cfg["seed"] = g.seed;
    OrderedJson doc = report_skeleton("kolmo measure", cfg);
    ComplexityReport r = ko.measure == "kt"    ? measure_kt(x, b)
                         : ko.measure == "rkt" ? measure_rkt(x, b)
                                               : measure_rk_t(x, ko.t, b);
    auto& res = doc["results"];
    res["found"] = r.found;
    res["value"] = r.value;
    res["machine"] = r.machine.hex();
    res["aux"] = r.aux.str();
    res["t"] = r.t;
    res["prob"] = dyadic_json(r.prob);
    res["exhausted"] = r.exhausted;
    emitted.doc = doc;
  });
  auto* kolmo_census_cmd = kolmo->add_subcommand("census", "value,count CSV over all strings");
  kolmo_census_cmd->add_option("--m", ko.m, "string length")->required();
  kolmo_census_cmd->add_option("--measure", ko.measure, "kt | rkt | rkt-poly")
      ->check(CLI::IsMember({"kt", "rkt", "rkt-poly"}));
  kolmo_census_cmd->add_option("--delta", ko.delta, "success threshold p/q");
  kolmo_census_cmd->add_option("--t", ko.t, "step budget (rkt-poly only)");
  kolmo_census_cmd->callback([&] {
    ComplexityBudget b = kolmo_budget();
    Census c = ko.measure == "kt"    ? kt_census(ko.m, b)
               : ko.measure == "rkt" ? rkt_census(ko.m, b, g.workers)
                                     : rk_t_census(ko.m, ko.t, b, g.workers);
    std::string csv = csv_row({"value", "count"});
    for (auto& [value, count] : c.histogram()) {
      std::string v = value == kNoWitness ? "none" : std::to_string(value);
      csv += csv_row({v, std::to_string(count)});
    }
    emitted.is_csv = true;
    emitted.csv = csv;
  });

  // ---- prg ----------------------------------------------------------------
  auto* prg = app.add_subcommand("prg", "generator pipeline");
  prg->require_subcommand(1);
  struct {
    std::string gen, z, circuit;
    uint64_t samples = 0;
  } pg;
  auto* prg_gen_cmd = prg->add_subcommand("gen", "expand one seed");
  prg_gen_cmd->add_option("--gen", pg.gen, "generator config (JSON file or text)")->required();
  prg_gen_cmd->add_option("--z", pg.z, "seed bits (default: global seed, MSB first)");
  prg_gen_cmd->callback([&] {
    NWGenerator gen = generator_from_config(load_generator(pg.gen));
    uint32_t ell = gen.seed_length();
    Bits z;
    if (!pg.z.empty()) {
      z = parse_bits_checked(pg.z);
      if (z.size() != ell) throw ValidationError("cli: --z length must equal seed length");
    } else {
      if (ell > 64) throw BudgetError("cli: seed too long to derive from --seed");
      if (ell < 64 && (g.seed >> ell) != 0)
        throw ValidationError("cli: --seed does not fit in the seed length");
      z = from_msb_value(g.seed, (uint8_t)ell);
    }
    OrderedJson cfg;
    cfg["op"] = "gen";
    cfg["gen"] = OrderedJson::parse(load_generator(pg.gen).to_json());
    cfg["z"] = z.str();
    cfg["seed"] = g.seed;
    OrderedJson doc = report_skeleton("prg gen", cfg);
    auto& res = doc["results"];
    res["ell"] = ell;
    res["m"] = gen.output_length();
    res["output"] = nw_generate(gen, z).str();
    emitted.doc = doc;
  });
  auto add_prg_pair = [&](CLI::App* cmd) {
    cmd->add_option("--circuit", pg.circuit, "distinguisher netlist file")->required();
    cmd->add_option("--gen", pg.gen, "generator config (JSON file or text)")->required();
  };
  auto* prg_adv_cmd = prg->add_subcommand("advantage", "distinguisher advantage");
  add_prg_pair(prg_adv_cmd);
  prg_adv_cmd->add_option("--samples", pg.samples, "0 = exact enumeration");
  prg_adv_cmd->callback([&] {
    Circuit d = Circuit::from_netlist(read_file(pg.circuit));
    NWGenerator gen = generator_from_config(load_generator(pg.gen));
    OrderedJson cfg;
    cfg["op"] = "advantage";
    cfg["circuit"] = pg.circuit;
    cfg["gen"] = OrderedJson::parse(load_generator(pg.gen).to_json());
    cfg["samples"] = pg.samples;
    cfg["seed"] = g.seed;
    OrderedJson doc = report_skeleton("prg advantage", cfg);
    DistinguisherReport r;
    if (pg.samples == 0) {
      r = advantage_exact(d, gen);
    } else {
      Sampler s("cli-prg-advantage", gen.output_length(), g.seed);
      r = advantage_sample(d, gen, pg.samples, s);
    }
    auto& res = doc["results"];
    res["p_uniform"] = dyadic_json(r.p_uniform);
    res["p_generator"] = dyadic_json(r.p_generator);
    res["advantage"] = dyadic_json(r.advantage);
    res["mode"] = estimate_mode_name(r.mode);
    res["samples"] = r.samples;
    res["distinguishes"] = r.distinguishes;
    emitted.doc = doc;
  });
  auto* prg_predict_cmd = prg->add_subcommand("predict", "hybrid next-bit predictor");
  add_prg_pair(prg_predict_cmd);
  prg_predict_cmd->callback([&] {
    Circuit d = Circuit::from_netlist(read_file(pg.circuit));
    NWGenerator gen = generator_from_config(load_generator(pg.gen));
    OrderedJson cfg;
    cfg["op"] = "predict";
    cfg["circuit"] = pg.circuit;
    cfg["gen"] = OrderedJson::parse(load_generator(pg.gen).to_json());
    cfg["seed"] = g.seed;
    OrderedJson doc = report_skeleton("prg predict", cfg);
    HybridReport r = hybrid_predictor(d, gen);
    auto& res = doc["results"];
    res["found"] = r.found;
    res["bit"] = r.bit;
    res["success"] = dyadic_json(r.success);
    res["advantage"] = dyadic_json(r.advantage);
    res["total"] = dyadic_json(r.total);
    OrderedJson hybrids = OrderedJson::array();
    for (auto& h : r.hybrid) hybrids.push_back(h.str());
    res["hybrid"] = hybrids;
    emitted.doc = doc;
  });

  // ---- diag ---------------------------------------------------------------
  auto* diag = app.add_subcommand("diag", "diagonalization harness");
  diag->require_subcommand(1);
  struct {
    std::string x, gen;
    uint64_t i = 0;
    uint32_t n = 0, d = 2;
  } di;
  auto diag_gen = [&] { return load_generator(di.gen); };
  auto* diag_decide_cmd = diag->add_subcommand("decide", "the diagonal language");
  diag_decide_cmd->add_option("--x", di.x, "input bits")->required();
  diag_decide_cmd->add_option("--gen", di.gen, "generator config")->required();
  diag_decide_cmd->add_option("--d", di.d, "clock exponent");
  diag_decide_cmd->callback([&] {
    Bits x = parse_bits_checked(di.x);
    OrderedJson cfg;
    cfg["op"] = "decide";
    cfg["x"] = di.x;
    cfg["gen"] = OrderedJson::parse(diag_gen().to_json());
    cfg["d"] = di.d;
    cfg["seed"] = g.seed;
    OrderedJson doc = report_skeleton("diag decide", cfg);
    doc["results"]["decide"] = diag_decide(x, diag_gen(), di.d);
    emitted.doc = doc;
  });
  auto* diag_verify_cmd = diag->add_subcommand("verify", "decision vs machine majority");
  diag_verify_cmd->add_option("--i", di.i, "machine index")->required();
  diag_verify_cmd->add_option("--n", di.n, "input length")->required();
  diag_verify_cmd->add_option("--gen", di.gen, "generator config")->required();
  diag_verify_cmd->add_option("--d", di.d, "clock exponent");
  auto put_diag_report = [](OrderedJson& res, const DiagReport& r) {
    res["verdict"] = diag_verdict_name(r.verdict);
    res["exact_mu"] = dyadic_json(r.exact_mu);
    res["estimate_mu"] = dyadic_json(r.estimate_mu);
    res["capp_ok"] = r.capp_ok;
    res["decide"] = r.decide;
    res["majority"] = r.majority;
  };
  diag_verify_cmd->callback([&] {
    OrderedJson cfg;
    cfg["op"] = "verify";
    cfg["i"] = di.i;
    cfg["n"] = di.n;
    cfg["gen"] = OrderedJson::parse(diag_gen().to_json());
    cfg["d"] = di.d;
    cfg["seed"] = g.seed;
    OrderedJson doc = report_skeleton("diag verify", cfg);
    put_diag_report(doc["results"], diag_verify(di.i, di.n, diag_gen(), di.d));
    emitted.doc = doc;
  });
  auto* diag_sweep_cmd = diag->add_subcommand("sweep", "verify the whole ensemble support");
  diag_sweep_cmd->add_option("--n", di.n, "input length")->required();
  diag_sweep_cmd->add_option("--gen", di.gen, "generator config")->required();
  diag_sweep_cmd->add_option("--d", di.d, "clock exponent");
  diag_sweep_cmd->callback([&] {
    DiagEnsemble ens = diag_ensemble(di.n, di.d);
    GeneratorConfig gen = diag_gen();
    std::string csv = csv_row({"i", "n", "verdict", "capp_err"});
    for (uint64_t i = 0; i < ens.support_size(); i++) {
      DiagReport r = diag_verify(i, di.n, gen, di.d);
      csv += csv_row({std::to_string(i), std::to_string(di.n),
                      diag_verdict_name(r.verdict),
                      abs_diff(r.exact_mu, r.estimate_mu).str()});
    }
    emitted.is_csv = true;
    emitted.csv = csv;
  });

  // ---- rkt ----------------------------------------------------------------
  auto* rkt = app.add_subcommand("rkt", "high-complexity string pipeline");
  rkt->require_subcommand(1);
  struct {
    uint32_t n = 0, d = 2, ell = 0, time = 16, ceiling = 0, m = 0;
    std::string mode = "exact", gen, machine, advice, table, tcsv = "flat:4:16";
    std::string hier_delta = "1/20", hier_eps = "1/2";
    uint32_t hier_k = 2, hier_lambda = 1;
  } rk;
  auto* rkt_construct_cmd = rkt->add_subcommand("construct", "canonical high-cost string");
  rkt_construct_cmd->add_option("--n", rk.n, "instance size")->required();
  rkt_construct_cmd->add_option("--d", rk.d, "encoding exponent");
  rkt_construct_cmd->add_option("--mode", rk.mode, "exact | mc")
      ->check(CLI::IsMember({"exact", "mc"}));
  rkt_construct_cmd->add_option("--ceiling", rk.ceiling, "mc witness cost ceiling (0 = threshold)");
  rkt_construct_cmd->add_option("--gen", rk.gen, "estimator generator config (default identity)");
  rkt_construct_cmd->callback([&] {
    RndSearchInstance inst{rk.n, rk.d};
    inst.validate();
    GeneratorConfig gen = rk.gen.empty() ? identity_config(8) : load_generator(rk.gen);
    OrderedJson cfg;
    cfg["op"] = "construct";
    cfg["n"] = rk.n;
    cfg["d"] = rk.d;
    cfg["mode"] = rk.mode;
    cfg["ceiling"] = rk.ceiling;
    cfg["gen"] = OrderedJson::parse(gen.to_json());
    cfg["seed"] = g.seed;
    OrderedJson doc = report_skeleton("rkt construct", cfg);
    ComplexityBudget b;
    GapMcConfig mc;
    mc.cost_ceiling = rk.ceiling;
    GapDeciderMode mode =
        rk.mode == "exact" ? GapDeciderMode::kExact : GapDeciderMode::kMonteCarlo;
    Sampler s("cli-rkt-construct", rk.n, g.seed);
    HighRktResult r = construct_high_rkt(inst, b, mode, gen, s, mc);
    auto& res = doc["results"];
    res["string"] = r.found ? r.value.str() : "";
    if (r.found) {
      const Census& c = rkt_census(inst.m(), b, g.workers);
      res["oracle_rkt"] = c.at(r.value).value;
    } else {
      res["oracle_rkt"] = nullptr;
    }
    res["canonical"] = r.found && r.mu.geq_fraction(2, 3);
    res["found"] = r.found;
    res["enumerated"] = r.enumerated;
    res["mu"] = dyadic_json(r.mu);
    res["oracle"] = "rkt-census";
    emitted.doc = doc;
  });
  auto hier_params = [&] {
    HierarchyParams hp;
    hp.k = rk.hier_k;
    hp.lambda = rk.hier_lambda;
    uint64_t n = 0, d = 0;
    parse_fraction(rk.hier_delta, &n, &d);
    hp.delta_num = (uint32_t)n;
    hp.delta_den = (uint32_t)d;
    parse_fraction(rk.hier_eps, &n, &d);
    hp.eps_num = (uint32_t)n;
    hp.eps_den = (uint32_t)d;
    hp.validate();
    return hp;
  };
  auto add_hier_flags = [&](CLI::App* cmd) {
    cmd->add_option("--hier-k", rk.hier_k, "hierarchy exponent");
    cmd->add_option("--hier-delta", rk.hier_delta, "hierarchy delta p/q");
    cmd->add_option("--hier-lambda", rk.hier_lambda, "padding exponent bound");
    cmd->add_option("--hier-eps", rk.hier_eps, "hardness exponent p/q");
  };
  auto parse_time_table = [&]() -> TimeBoundTable {
    if (rk.tcsv.rfind("flat:", 0) == 0) {
      std::string rest = rk.tcsv.substr(5);
      size_t colon = rest.find(':');
      if (colon == std::string::npos)
        throw ValidationError("cli: flat tables are written flat:VALUE:MAX_N");
      try {
        return TimeBoundTable::flat(std::stoull(rest.substr(0, colon)),
                                    (uint32_t)std::stoul(rest.substr(colon + 1)));
      } catch (const std::exception&) {
        throw ValidationError("cli: flat table parts must be integers");
      }
    }
    return TimeBoundTable::parse_csv(read_file(rk.tcsv));
  };
  auto* rkt_embed_cmd = rkt->add_subcommand("embed", "hard prefix into a truth table");
  rkt_embed_cmd->add_option("--n", rk.n, "table input width")->required();
  rkt_embed_cmd->add_option("--T", rk.tcsv, "time-bound table: CSV file or flat:VALUE:MAX_N");
  rkt_embed_cmd->add_option("--table", rk.table, "explicit hard prefix bits (default: structured language)");
  add_hier_flags(rkt_embed_cmd);
  rkt_embed_cmd->callback([&] {
    TimeBoundTable T = parse_time_table();
    HierarchyParams hp = hier_params();
    OrderedJson cfg;
    cfg["op"] = "embed";
    cfg["n"] = rk.n;
    cfg["T"] = rk.tcsv;
    cfg["table"] = rk.table;
    cfg["hier"] = {{"k", rk.hier_k}, {"delta", rk.hier_delta},
                   {"lambda", rk.hier_lambda}, {"eps", rk.hier_eps}};
    cfg["seed"] = g.seed;
    OrderedJson doc = report_skeleton("rkt embed", cfg);
    auto supplier = [&](uint32_t m) {
      std::vector<uint8_t> v(m);
      if (!rk.table.empty()) {
        if (rk.table.size() != m)
          throw ValidationError("cli: --table must supply exactly the prefix length " +
                                std::to_string(m));
        for (uint32_t i = 0; i < m; i++) v[i] = rk.table[i] == '1';
        return v;
      }
      uint8_t w = 6;
      while ((1u << w) < m) w++;
      for (uint32_t i = 0; i < m; i++)
        v[i] = (uint8_t)surrogate_member(from_msb_value(i, w));
      return v;
    };
    TruthTableString t = embed_hard_language(supplier, rk.n, T, hp);
    auto& res = doc["results"];
    res["n"] = t.n;
    res["prefix_length"] = t.ell;
    std::string bits(t.bits.size(), '0');
    for (size_t i = 0; i < t.bits.size(); i++) bits[i] = t.bits[i] ? '1' : '0';
    res["bits"] = bits;
    emitted.doc = doc;
  });
  auto* rkt_extract_cmd = rkt->add_subcommand("extract", "flatten a decision table to a string");
  rkt_extract_cmd->add_option("--n", rk.n, "table input width")->required();
  rkt_extract_cmd->add_option("--m", rk.m, "output length")->required();
  rkt_extract_cmd->callback([&] {
    OrderedJson cfg;
    cfg["op"] = "extract";
    cfg["n"] = rk.n;
    cfg["m"] = rk.m;
    cfg["seed"] = g.seed;
    OrderedJson doc = report_skeleton("rkt extract", cfg);
    Bits s = extract_string([](const Bits& x) { return surrogate_member(x); }, rk.n, rk.m);
    doc["results"]["string"] = s.str();
    doc["results"]["language"] = "structured-surrogate";
    emitted.doc = doc;
  });
  auto* rkt_fact51_cmd = rkt->add_subcommand("fact51", "witness for a decided table");
  rkt_fact51_cmd->add_option("--machine", rk.machine, "decider program, hex")->required();
  rkt_fact51_cmd->add_option("--advice", rk.advice, "decider advice bits");
  rkt_fact51_cmd->add_option("--time", rk.time, "decider step budget");
  rkt_fact51_cmd->add_option("--n", rk.n, "input width")->required();
  rkt_fact51_cmd->add_option("--ell", rk.ell, "table prefix length")->required();
  rkt_fact51_cmd->callback([&] {
    DeciderSpec dec;
    dec.machine = Program::from_hex(rk.machine);
    if (!rk.advice.empty()) dec.advice = parse_bits_checked(rk.advice);
    dec.time = rk.time;
    OrderedJson cfg;
    cfg["op"] = "fact51";
    cfg["machine"] = rk.machine;
    cfg["advice"] = rk.advice;
    cfg["time"] = rk.time;
    cfg["n"] = rk.n;
    cfg["ell"] = rk.ell;
    cfg["seed"] = g.seed;
    OrderedJson doc = report_skeleton("rkt fact51", cfg);
    Fact51Witness w = fact51_witness(dec, rk.n, rk.ell);
    auto& res = doc["results"];
    res["machine"] = w.machine.hex();
    res["aux"] = w.aux.str();
    res["t"] = w.t;
    res["cost"] = w.cost;
    res["bound"] = w.bound;
    res["table"] = w.table.str();
    emitted.doc = doc;
  });

  // ---- primes -------------------------------------------------------------
  auto* primes = app.add_subcommand("primes", "succinct primes via generators");
  primes->require_subcommand(1);
  struct {
    uint32_t n = 0;
    uint64_t trials = 100000;
    int advice = -1;
    std::string gen;
  } pr;
  auto primes_gen = [&] {
    return pr.gen.empty() ? identity_config(pr.n) : load_generator(pr.gen);
  };
  auto primes_config = [&](const char* op) {
    OrderedJson cfg;
    cfg["op"] = op;
    cfg["n"] = pr.n;
    cfg["gen"] = OrderedJson::parse(primes_gen().to_json());
    cfg["seed"] = g.seed;
    return cfg;
  };
  auto* primes_find_cmd = primes->add_subcommand("find", "canonical prime for the config");
  primes_find_cmd->add_option("--n", pr.n, "prime bit width")->required();
  primes_find_cmd->add_option("--gen", pr.gen, "generator config (default identity)");
  primes_find_cmd->callback([&] {
    OrderedJson doc = report_skeleton("primes find", primes_config("find"));
    auto sp = find_prime_via_prg(primes_gen(), pr.n);
    auto& res = doc["results"];
    res["found"] = sp.has_value();
    if (sp) {
      res["seed_bits"] = sp->seed.str();
      res["prime"] = sp->prime;
      res["n"] = sp->n;
    }
    emitted.doc = doc;
  });
  auto* primes_rate_cmd = primes->add_subcommand("rate", "random-seed hit frequency");
  primes_rate_cmd->add_option("--n", pr.n, "prime bit width")->required();
  primes_rate_cmd->add_option("--gen", pr.gen, "generator config (default identity)");
  primes_rate_cmd->add_option("--trials", pr.trials, "sampled seeds");
  primes_rate_cmd->add_option("--advice", pr.advice, "pin the advice bit (0/1; -1 draws it)")
      ->check(CLI::Range(-1, 1));
  primes_rate_cmd->callback([&] {
    OrderedJson cfg = primes_config("rate");
    cfg["trials"] = pr.trials;
    cfg["advice"] = pr.advice;
    OrderedJson doc = report_skeleton("primes rate", cfg);
    Sampler s("cli-primes-rate", pr.n, g.seed);
    SeedRateReport r = random_seed_prime(pr.n, pr.trials, s, primes_gen(), pr.advice);
    auto& res = doc["results"];
    res["applicable"] = r.applicable;
    res["ell"] = r.ell;
    res["trials"] = r.trials;
    res["hits"] = r.hits;
    res["target"] = r.target;
    res["bound"] = dyadic_json(r.bound);
    emitted.doc = doc;
  });
  auto* primes_witness_cmd = primes->add_subcommand("witness", "seed-echo descriptor");
  primes_witness_cmd->add_option("--n", pr.n, "prime bit width")->required();
  primes_witness_cmd->add_option("--gen", pr.gen, "generator config (default identity)");
  primes_witness_cmd->callback([&] {
    OrderedJson doc = report_skeleton("primes witness", primes_config("witness"));
    auto sp = find_prime_via_prg(primes_gen(), pr.n);
    if (!sp) throw ValidationError("primes: no canonical prime to witness");
    PrimeWitness w = rk_poly_prime_witness(*sp);
    auto& res = doc["results"];
    res["prime"] = sp->prime;
    res["seed_bits"] = sp->seed.str();
    res["machine"] = w.machine.hex();
    res["aux"] = w.aux.str();
    res["t"] = w.t;
    res["cost"] = w.cost;
    res["bound"] = w.bound;
    emitted.doc = doc;
  });

  // ---- sweep --------------------------------------------------------------
  std::string sweep_param;
  auto* sweep_cmd = app.add_subcommand(
      "sweep", "rerun a JSON subcommand over one ranged parameter, emit CSV");
  sweep_cmd->add_option("--param", sweep_param, "name=A..B[:S|:xS]")->required()->expected(1);
  sweep_cmd->allow_extras();
  sweep_cmd->callback([&] {
    if (!allow_sweep) throw ValidationError("cli: sweeps do not nest");
    std::vector<std::string> rest = sweep_cmd->remaining();
    emitted = run_sweep(parse_range(sweep_param), rest, g);
  });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    throw CliExit{code == 0 ? 0 : 64};
  }
  return emitted;
}

// Global flags may appear anywhere; strip them before subcommand parsing.
// --config FILE supplies defaults for any long flag not already present.
std::vector<std::string> strip_globals(std::vector<std::string> args, Globals* g) {
  std::vector<std::string> rest;
  std::string config_path;
  auto take_value = [&](size_t* i, const std::string& flag) -> std::string {
    size_t eq = args[*i].find('=');
    if (eq != std::string::npos) return args[*i].substr(eq + 1);
    if (*i + 1 >= args.size()) throw ValidationError("cli: " + flag + " needs a value");
    return args[++*i];
  };
  for (size_t i = 0; i < args.size(); i++) {
    const std::string& a = args[i];
    auto is = [&](const char* f) { return a == f || a.rfind(std::string(f) + "=", 0) == 0; };
    try {
      if (is("--seed")) {
        g->seed = std::stoull(take_value(&i, "--seed"));
      } else if (is("--workers")) {
        g->workers = (unsigned)std::stoul(take_value(&i, "--workers"));
        if (g->workers < 1 || g->workers > 64)
          throw ValidationError("cli: --workers must be in [1, 64]");
      } else if (is("--out")) {
        g->out = take_value(&i, "--out");
      } else if (is("--config")) {
        config_path = take_value(&i, "--config");
      } else {
        rest.push_back(a);
      }
    } catch (const std::invalid_argument&) {
      throw ValidationError("cli: bad numeric value for " + a);
    } catch (const std::out_of_range&) {
      throw ValidationError("cli: numeric value out of range for " + a);
    }
  }
  if (!config_path.empty()) {
    OrderedJson cfg;
    try {
      cfg = OrderedJson::parse(read_file(config_path));
    } catch (const nlohmann::json::exception&) {
      throw ValidationError("cli: config file is not valid JSON");
    }
    if (!cfg.is_object()) throw ValidationError("cli: config file must hold one JSON object");
    for (auto it = cfg.begin(); it != cfg.end(); ++it) {
      std::string flag = "--" + it.key();
      bool present = false;
      for (const auto& a : rest)
        if (a == flag || a.rfind(flag + "=", 0) == 0) present = true;
      if (present) continue;
      if (it.key() == "seed" || it.key() == "workers" || it.key() == "out") {
        std::vector<std::string> one{flag, it.value().is_string()
                                               ? it.value().get<std::string>()
                                               : it.value().dump()};
        strip_globals(one, g);
        continue;
      }
      if (it.value().is_boolean()) {
        if (it.value().get<bool>()) rest.push_back(flag);
        continue;
      }
      rest.push_back(flag);
      rest.push_back(it.value().is_string() ? it.value().get<std::string>()
                                            : it.value().dump());
    }
  }
  return rest;
}

}  // namespace

int main(int argc, char** argv) {
  Globals g;
  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    auto start = std::chrono::steady_clock::now();
    Emitted e = dispatch(strip_globals(std::move(args), &g), g, true);
    auto elapsed = std::chrono::steady_clock::now() - start;
    std::string text;
    if (e.is_csv) {
      text = e.csv;
    } else {
      e.doc["timing_ms"] =
          std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
      text = e.doc.dump(2) + "\n";
    }
    if (g.out.empty()) {
      fputs(text.c_str(), stdout);
    } else {
      std::ofstream out(g.out, std::ios::binary);
      if (!out) throw ValidationError("cli: cannot write " + g.out);
      out << text;
    }
    return 0;
  } catch (const CliExit& e) {
    return e.code;
  } catch (const ValidationError& e) {
    fprintf(stderr, "validation: %s\n", e.what());
    return 64;
  } catch (const BudgetError& e) {
    fprintf(stderr, "budget: %s\n", e.what());
    return 65;
  } catch (const std::exception& e) {
    fprintf(stderr, "assertion: %s\n", e.what());
    return 70;
  }
}
