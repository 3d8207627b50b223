// Command-line front end. Talks to the library only through wdl.h.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "wdl/wdl.h"

namespace {

struct Failure : std::runtime_error {
  wdl_status status;
  Failure(wdl_status s, const std::string& msg) : std::runtime_error(msg), status(s) {}
};

void check(wdl_status s) {
  if (s != WDL_OK) throw Failure(s, wdl_last_error());
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Algebra = std::unique_ptr<wdl_algebra, Deleter<wdl_algebra, wdl_algebra_free>>;
using Module = std::unique_ptr<wdl_module, Deleter<wdl_module, wdl_module_free>>;
using Curve = std::unique_ptr<wdl_curve, Deleter<wdl_curve, wdl_curve_free>>;
using CurveDb = std::unique_ptr<wdl_curve_db, Deleter<wdl_curve_db, wdl_curve_db_free>>;
using ScanResult = std::unique_ptr<wdl_scan_result, Deleter<wdl_scan_result, wdl_scan_result_free>>;

std::string take(char* s) {
  std::string out(s ? s : "");
  wdl_string_free(s);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Failure(WDL_ERR_IO, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text) || !out.flush()) throw Failure(WDL_ERR_IO, "cannot write " + path);
}

std::vector<std::uint64_t> parse_primes(const std::string& s) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) throw Failure(WDL_ERR_INVALID_ARGUMENT, "bad prime \"" + tok + "\"");
    out.push_back(v);
  }
  if (out.empty()) throw Failure(WDL_ERR_INVALID_ARGUMENT, "empty prime list");
  return out;
}

struct DbArgs {
  std::string curves;
  std::string format = "cremona";
  bool skip_bad = false;
};

void add_db_options(CLI::App* cmd, DbArgs& a) {
  cmd->add_option("--curves", a.curves, "Curve table (default: $WDL_CURVE_DB)");
  cmd->add_option("--format", a.format, "Table format")->check(CLI::IsMember({"cremona", "simple"}));
  cmd->add_flag("--skip-bad", a.skip_bad, "Skip malformed lines instead of failing");
}

CurveDb open_db(DbArgs a) {
  if (a.curves.empty()) {
    const char* env = std::getenv("WDL_CURVE_DB");
    if (!env || !*env) throw Failure(WDL_ERR_INVALID_ARGUMENT, "no --curves given and WDL_CURVE_DB unset");
    a.curves = env;
  }
  wdl_curve_db* db = nullptr;
  check(wdl_curve_db_open(a.curves.c_str(), a.format == "simple" ? WDL_FORMAT_SIMPLE : WDL_FORMAT_CREMONA,
                          a.skip_bad ? 1 : 0, &db));
  CurveDb out(db);
  const std::size_t issues = wdl_curve_db_issue_count(db);
  for (std::size_t i = 0; i < issues; ++i) {
    std::size_t line = 0;
    const char* msg = nullptr;
    check(wdl_curve_db_issue(db, i, &line, &msg));
    std::cerr << "skipped line " << line << ": " << msg << '\n';
  }
  return out;
}

struct ScanArgs {
  DbArgs db;
  std::uint64_t min_cond = 1;
  std::uint64_t max_cond = 0;
  std::string primes = "3,5,7,11";
  unsigned min_lowered = 2;
  std::uint64_t cert_bound = 0;
  bool nonzero_only = false;
  bool summarize = false;
  std::string out;
  std::string emit = "csv";
  std::string exclusions;
};

int run_scan(const ScanArgs& a, unsigned jobs) {
  CurveDb db = open_db(a.db);
  wdl_scan_options opts;
  wdl_scan_options_default(&opts);
  const std::vector<std::uint64_t> primes = parse_primes(a.primes);
  opts.primes = primes.data();
  opts.num_primes = primes.size();
  opts.min_conductor = a.min_cond;
  opts.max_conductor = a.max_cond;
  opts.min_lowered_prime_divisors = a.min_lowered;
  opts.nonzero_only = a.nonzero_only ? 1 : 0;
  if (a.cert_bound) opts.certificate_bound = a.cert_bound;
  opts.jobs = jobs;
  wdl_scan_result* raw = nullptr;
  check(wdl_scan_run(db.get(), &opts, &raw));
  ScanResult r(raw);

  char* text = nullptr;
  if (a.summarize) {
    check(wdl_scan_result_render(r.get(), WDL_REPORT_SUMMARY, &text));
    std::cout << take(text);
    if (!a.out.empty()) {
      check(wdl_scan_result_render(r.get(), a.emit == "json" ? WDL_REPORT_JSON : WDL_REPORT_CSV, &text));
      write_output(a.out, take(text));
    }
  } else {
    check(wdl_scan_result_render(r.get(), a.emit == "json" ? WDL_REPORT_JSON : WDL_REPORT_CSV, &text));
    write_output(a.out, take(text));
  }

  const std::size_t skipped = wdl_scan_result_skipped_count(r.get());
  const std::size_t undetermined = wdl_scan_result_undetermined_count(r.get());
  if (!a.exclusions.empty()) {
    std::ostringstream ex;
    ex << "label,p,reason\n";
    for (std::size_t i = 0; i < skipped; ++i) {
      const char* label = nullptr;
      const char* reason = nullptr;
      check(wdl_scan_result_skipped(r.get(), i, &label, &reason));
      ex << label << ",," << '"' << reason << "\"\n";
    }
    for (std::size_t i = 0; i < undetermined; ++i) {
      const char* label = nullptr;
      std::uint64_t p = 0;
      check(wdl_scan_result_undetermined(r.get(), i, &label, &p));
      ex << label << ',' << p << ",undetermined irreducibility\n";
    }
    write_output(a.exclusions, ex.str());
  }
  std::cerr << "curves in range: " << wdl_scan_result_curves_in_range(r.get())
            << ", rows: " << wdl_scan_result_row_count(r.get()) << ", skipped: " << skipped
            << ", undetermined (curve, p): " << undetermined << '\n';
  return 0;
}

struct CurveArgs {
  DbArgs db;
  std::string label;
  std::string ainvs;
  std::uint64_t p = 0;
  std::uint64_t q = 0;
  std::string q_set;
  std::uint64_t cert_bound = 0;
};

int run_curve(const CurveArgs& a) {
  Curve c;
  wdl_curve* raw = nullptr;
  if (!a.ainvs.empty()) {
    check(wdl_curve_from_ainvs(a.ainvs.c_str(), a.label.c_str(), &raw));
    c.reset(raw);
  } else {
    if (a.label.empty()) throw Failure(WDL_ERR_INVALID_ARGUMENT, "give --label or --ainvs");
    CurveDb db = open_db(a.db);
    check(wdl_curve_db_find(db.get(), a.label.c_str(), &raw));
    c.reset(raw);
  }
  char* text = nullptr;
  check(wdl_curve_describe(c.get(), &text));
  nlohmann::ordered_json out = nlohmann::ordered_json::parse(take(text));
  if (a.p) {
    wdl_scan_options defaults;
    wdl_scan_options_default(&defaults);
    const std::uint64_t bound = a.cert_bound ? a.cert_bound : defaults.certificate_bound;
    std::uint64_t ell = 0;
    check(wdl_curve_irreducibility_certificate(c.get(), a.p, bound, &ell));
    out["p"] = a.p;
    out["irreducibility"] = ell ? "certified-at-" + std::to_string(ell) : std::string("undetermined");

    char* n_lowered = nullptr;
    char* dropped = nullptr;
    const wdl_status st = wdl_curve_lowered_conductor(c.get(), a.p, &n_lowered, &dropped);
    if (st == WDL_OK) {
      out["N_lowered"] = nlohmann::ordered_json::parse(take(n_lowered));
      out["dropped"] = take(dropped);
    } else {
      out["N_lowered"] = std::string("n/a: ") + wdl_last_error();
    }

    std::vector<std::uint64_t> qs;
    if (a.q) {
      qs.push_back(a.q);
    } else {
      for (const auto& b : out["bad_primes"])
        if (b["type"] == "split" || b["type"] == "nonsplit") qs.push_back(b["q"].get<std::uint64_t>());
    }
    nlohmann::ordered_json local = nlohmann::ordered_json::array();
    for (std::uint64_t q : qs) {
      wdl_tame_invariants inv;
      const wdl_status s = wdl_curve_tame_invariants(c.get(), q, a.p, &inv);
      if (s != WDL_OK) {
        if (a.q) check(s);
        continue;
      }
      nlohmann::ordered_json o;
      o["q"] = inv.q;
      o["vqJ"] = -static_cast<std::int64_t>(inv.vq_tate);
      o["t_q"] = inv.t_q;
      o["m_q"] = inv.m_q;
      o["u_q"] = inv.u_q;
      o["k_q"] = inv.k_q;
      o["n_q"] = inv.n_q;
      o["n_q_via_log"] = inv.n_q_via_log;
      o["unit_part"] = inv.unit_part;
      o["split"] = inv.split ? "split" : "nonsplit";
      local.push_back(std::move(o));
    }
    out["tame"] = std::move(local);
    if (!a.q_set.empty()) {
      std::int64_t defect = 0;
      int applicable = 0;
      check(wdl_curve_defect_for_q(c.get(), a.q_set.c_str(), a.p, &defect, &applicable));
      out["Q"] = a.q_set;
      out["defect"] = defect;
      out["defect_formula_applicable"] = applicable != 0;
    }
  }
  std::cout << out.dump(2) << '\n';
  return 0;
}

struct LocaldefArgs {
  std::uint64_t q = 0;
  std::uint64_t p = 0;
  std::string s;
  std::string t;
  std::string route = "both";
};

int run_localdef(const LocaldefArgs& a) {
  wdl_localdef_lengths l;
  check(wdl_localdef_lengths_compute(a.q, a.p, a.s.c_str(), a.t.c_str(), a.route != "closed", &l));
  static const char* const kNames[3] = {"framed/unipotent", "unipotent/steinberg", "framed/steinberg"};
  std::cout << "m = " << l.m << ", n = " << l.n << '\n';
  bool agree = true;
  for (int k = 0; k < 3; ++k) {
    std::cout << kNames[k] << ':';
    if (a.route != "lattice") std::cout << " closed " << l.closed_form[k];
    if (a.route != "closed") std::cout << " lattice " << l.lattice[k];
    std::cout << '\n';
    agree = agree && (a.route != "both" || l.closed_form[k] == l.lattice[k]);
  }
  if (!agree) {
    std::cerr << "routes disagree\n";
    return WDL_ERR_INTERNAL;
  }
  return 0;
}

struct AlgebraArgs {
  std::string input;
  std::string module;
  std::size_t aug = 0;
};

int run_algebra(const AlgebraArgs& a) {
  wdl_algebra* ra = nullptr;
  check(wdl_algebra_from_json(read_file(a.input).c_str(), &ra));
  Algebra alg(ra);
  Module mod;
  if (!a.module.empty()) {
    wdl_module* rm = nullptr;
    check(wdl_module_from_json(alg.get(), read_file(a.module).c_str(), &rm));
    mod.reset(rm);
  }
  wdl_defect_report r;
  check(wdl_wiles_defect(alg.get(), mod.get(), a.aug, &r));
  std::cout << "augmentation " << a.aug << '\n'
            << "Phi length " << r.phi_length << '\n'
            << "Psi length " << r.psi_length << '\n'
            << "lambda-rank " << r.lambda_rank << '\n'
            << "defect " << r.defect_num;
  if (r.defect_den != 1) std::cout << '/' << r.defect_den;
  std::cout << '\n';
  if (r.generic_rank_exceeds_lambda_rank) std::cout << "warning: a generic point has rank above the lambda-rank\n";
  if (!mod) {
    std::uint64_t eta = 0;
    check(wdl_algebra_congruence_length(alg.get(), a.aug, &eta));
    std::cout << "eta length " << eta << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wiles defects: congruence modules, local deformation lattices, Tate-curve scans"};
  app.require_subcommand(1);
  app.set_version_flag("--version", wdl_version());
  unsigned jobs = 1;
  app.add_option("--jobs,-j", jobs, "Worker threads")->check(CLI::Range(1u, 1024u));

  ScanArgs scan;
  auto* sc = app.add_subcommand("scan", "Scan a curve table for Steinberg primes");
  add_db_options(sc, scan.db);
  sc->add_option("--min-cond", scan.min_cond, "Smallest conductor");
  sc->add_option("--max-cond", scan.max_cond, "Largest conductor (0: no bound)");
  sc->add_option("--primes", scan.primes, "Comma-separated odd primes p");
  sc->add_option("--min-lowered-divisors", scan.min_lowered, "Least number of prime divisors of N_lowered");
  sc->add_option("--cert-bound", scan.cert_bound, "Largest l tried for the irreducibility certificate");
  sc->add_flag("--nonzero-only", scan.nonzero_only, "Only rows with n_q > 0");
  sc->add_flag("--summarize", scan.summarize, "Print counts of (E, q) with n_q > 0 per p");
  sc->add_option("--out", scan.out, "Report path (default stdout)");
  sc->add_option("--emit", scan.emit, "Report format")->check(CLI::IsMember({"csv", "json"}));
  sc->add_option("--exclusions", scan.exclusions, "Write skipped and undetermined curves here");

  CurveArgs curve;
  auto* cc = app.add_subcommand("curve", "Invariants of one curve");
  add_db_options(cc, curve.db);
  cc->add_option("--label", curve.label, "Curve label");
  cc->add_option("--ainvs", curve.ainvs, "[a1,a2,a3,a4,a6] instead of a table lookup");
  cc->add_option("--prime,-p", curve.p, "Odd prime p");
  cc->add_option("--q", curve.q, "Single multiplicative prime q");
  cc->add_option("--Q", curve.q_set, "Comma-separated set Q for the defect sum");
  cc->add_option("--cert-bound", curve.cert_bound, "Largest l tried for the irreducibility certificate");

  LocaldefArgs ld;
  auto* lc = app.add_subcommand("localdef", "Relative cotangent lengths at a Steinberg point");
  lc->add_option("--q", ld.q, "Prime q")->required();
  lc->add_option("--p", ld.p, "Odd prime p")->required();
  lc->add_option("--s", ld.s, "Integer s")->required();
  lc->add_option("--t", ld.t, "Nonzero integer t")->required();
  lc->add_option("--route", ld.route, "closed, lattice or both")->check(CLI::IsMember({"closed", "lattice", "both"}));

  AlgebraArgs al;
  auto* ac = app.add_subcommand("algebra", "Cotangent and congruence lengths of an algebra");
  ac->add_option("--input", al.input, "Algebra JSON")->required()->check(CLI::ExistingFile);
  ac->add_option("--module", al.module, "Module JSON (default: the regular module)")->check(CLI::ExistingFile);
  ac->add_option("--aug", al.aug, "Augmentation index, 0-based");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sc->parsed()) return run_scan(scan, jobs);
    if (cc->parsed()) return run_curve(curve);
    if (lc->parsed()) return run_localdef(ld);
    if (ac->parsed()) return run_algebra(al);
  } catch (const Failure& f) {
    std::cerr << "error (" << wdl_status_name(f.status) << "): " << f.what() << '\n';
    return static_cast<int>(f.status);
  }
  return 0;
}
