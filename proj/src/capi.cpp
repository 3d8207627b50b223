#include "wdl/wdl.h"

#include <json.hpp>

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <set>
#include <sstream>
#include <string>

#include "wdl/congruence.hpp"
#include "wdl/curvedb.hpp"
#include "wdl/elliptic.hpp"
#include "wdl/error.hpp"
#include "wdl/localdef.hpp"
#include "wdl/scan.hpp"
#include "wdl/tamedefect.hpp"

struct wdl_algebra {
  wdl::OAlgebra value;
};

struct wdl_module {
  wdl::RModule value;
};

struct wdl_curve {
  wdl::WeierstrassCurve value;
};

struct wdl_curve_db {
  wdl::IngestResult value;
};

struct wdl_scan_result {
  wdl::ScanResult value;
  std::vector<std::uint64_t> primes;
};

namespace {

thread_local std::string g_last_error;

wdl_status set_error(wdl_status code, const std::string& msg) {
  g_last_error = msg;
  return code;
}

// Runs f, translating exceptions into a status and the thread's message.
template <class F>
wdl_status guarded(F&& f) noexcept {
  try {
    f();
    g_last_error.clear();
    return WDL_OK;
  } catch (const wdl::Error& e) {
    return set_error(static_cast<wdl_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(WDL_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(WDL_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(WDL_ERR_INTERNAL, "unknown exception");
  }
}

void require(bool ok, const char* what) {
  if (!ok) wdl::fail(wdl::ErrorCode::InvalidArgument, what);
}

wdl::Integer parse_int(const char* s, const char* what) {
  require(s != nullptr, what);
  wdl::Integer out;
  std::string str(s);
  if (!str.empty() && str[0] == '+') str.erase(0, 1);
  if (str.empty() || out.set_str(str, 10) != 0) {
    wdl::fail(wdl::ErrorCode::InvalidArgument, std::string("not an integer: ") + what + " = \"" + s + "\"");
  }
  return out;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::uint64_t finite(const wdl::PAdicVal& v) { return v.value(); }

std::set<std::uint64_t> parse_prime_list(const char* s) {
  require(s != nullptr, "prime list is null");
  std::set<std::uint64_t> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    const wdl::Integer v = parse_int(tok.c_str(), "prime list entry");
    require(v > 0 && v.fits_ulong_p(), "prime list entry out of range");
    out.insert(v.get_ui());
  }
  require(!out.empty(), "empty prime list");
  return out;
}

nlohmann::ordered_json big(const wdl::Integer& n) { return nlohmann::ordered_json::parse(n.get_str()); }

}  // namespace

extern "C" {

WDL_API const char* wdl_version(void) { return "0.1.0"; }

WDL_API const char* wdl_last_error(void) { return g_last_error.c_str(); }

WDL_API const char* wdl_status_name(wdl_status status) {
  switch (status) {
    case WDL_OK: return "ok";
    case WDL_ERR_INVALID_ARGUMENT: return "invalid argument";
    case WDL_ERR_NOT_PRIME: return "not prime";
    case WDL_ERR_INADMISSIBLE: return "inadmissible";
    case WDL_ERR_PRECONDITION: return "precondition";
    case WDL_ERR_INFINITE_LENGTH: return "infinite length";
    case WDL_ERR_PARSE: return "parse error";
    case WDL_ERR_IO: return "i/o error";
    case WDL_ERR_DATA: return "data error";
    case WDL_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

WDL_API void wdl_string_free(char* s) { std::free(s); }

WDL_API wdl_status wdl_vp(uint64_t p, const char* n, uint64_t* value, int* is_infinite) {
  return guarded([&] {
    require(value && is_infinite, "null output pointer");
    const wdl::PAdicVal v = wdl::vp(p, parse_int(n, "n"));
    *is_infinite = v.is_infinite() ? 1 : 0;
    *value = v.is_finite() ? v.value() : 0;
  });
}

// ---- algebras and modules ----

WDL_API wdl_status wdl_algebra_from_json(const char* json, wdl_algebra** out) {
  return guarded([&] {
    require(json && out, "null argument");
    *out = new wdl_algebra{wdl::algebra_from_json(json)};
  });
}

WDL_API void wdl_algebra_free(wdl_algebra* a) { delete a; }

WDL_API wdl_status wdl_algebra_num_augmentations(const wdl_algebra* a, size_t* out) {
  return guarded([&] {
    require(a && out, "null argument");
    *out = a->value.num_augmentations();
  });
}

WDL_API wdl_status wdl_algebra_cotangent_length(const wdl_algebra* a, size_t i, uint64_t* out) {
  return guarded([&] {
    require(a && out, "null argument");
    *out = finite(wdl::cotangent_length(a->value, i));
  });
}

WDL_API wdl_status wdl_algebra_congruence_length(const wdl_algebra* a, size_t i, uint64_t* out) {
  return guarded([&] {
    require(a && out, "null argument");
    *out = finite(wdl::algebra_congruence_length(a->value, i));
  });
}

WDL_API wdl_status wdl_algebra_remark_subalgebra(const wdl_algebra* a, wdl_algebra** out) {
  return guarded([&] {
    require(a && out, "null argument");
    *out = new wdl_algebra{wdl::build_remark_subalgebra(a->value)};
  });
}

WDL_API wdl_status wdl_module_from_json(const wdl_algebra* a, const char* json, wdl_module** out) {
  return guarded([&] {
    require(a && json && out, "null argument");
    *out = new wdl_module{wdl::module_from_json(a->value, json)};
  });
}

WDL_API wdl_status wdl_module_regular(const wdl_algebra* a, wdl_module** out) {
  return guarded([&] {
    require(a && out, "null argument");
    *out = new wdl_module{wdl::regular_module(a->value)};
  });
}

WDL_API void wdl_module_free(wdl_module* m) { delete m; }

WDL_API wdl_status wdl_module_congruence_length(const wdl_module* m, size_t i, uint64_t* length,
                                                uint64_t* lambda_rank) {
  return guarded([&] {
    require(m && length && lambda_rank, "null argument");
    const auto info = wdl::module_congruence(m->value, i);
    *length = finite(info.length);
    *lambda_rank = info.lambda_rank;
  });
}

WDL_API wdl_status wdl_wiles_defect(const wdl_algebra* a, const wdl_module* m, size_t i, wdl_defect_report* out) {
  return guarded([&] {
    require(a && out, "null argument");
    const wdl::DefectReport r = m ? wdl::wiles_defect(a->value, m->value, i) : wdl::wiles_defect(a->value, i);
    require(r.defect.get_num().fits_slong_p() && r.defect.get_den().fits_slong_p(), "defect out of int64 range");
    out->phi_length = finite(r.phi_length);
    out->psi_length = finite(r.psi_length);
    out->lambda_rank = r.lambda_rank;
    out->defect_num = r.defect.get_num().get_si();
    out->defect_den = r.defect.get_den().get_si();
    out->generic_rank_exceeds_lambda_rank = r.generic_rank_exceeds_lambda_rank ? 1 : 0;
  });
}

// ---- local deformation lattices ----

WDL_API wdl_status wdl_localdef_lengths_compute(uint64_t q, uint64_t p, const char* s, const char* t,
                                                int with_lattice, wdl_localdef_lengths* out) {
  return guarded([&] {
    require(out != nullptr, "null output pointer");
    wdl::DeformationPoint pt{q, p, parse_int(s, "s"), parse_int(t, "t")};
    pt.validate();
    *out = wdl_localdef_lengths{};
    out->m = pt.m();
    out->n = pt.n();
    const wdl::LatticePair pairs[3] = {wdl::LatticePair::FramedUnipotent, wdl::LatticePair::UnipotentSteinberg,
                                       wdl::LatticePair::FramedSteinberg};
    for (int k = 0; k < 3; ++k) out->closed_form[k] = finite(wdl::relative_length_closed_form(pt, pairs[k]));
    if (with_lattice) {
      const wdl::CotangentLattices l = wdl::build_lattices(pt);
      for (int k = 0; k < 3; ++k) out->lattice[k] = finite(wdl::relative_length_lattice(l, pairs[k]));
      out->steinberg_case_one = l.steinberg_case_one ? 1 : 0;
    }
  });
}

// ---- curves ----

WDL_API wdl_status wdl_curve_from_ainvs(const char* ainvs, const char* label, wdl_curve** out) {
  return guarded([&] {
    require(ainvs && out, "null argument");
    std::string s(ainvs);
    const auto open = s.find('[');
    const auto close = s.rfind(']');
    require(open != std::string::npos && close != std::string::npos && close > open,
            "a-invariants must be written [a1,a2,a3,a4,a6]");
    std::stringstream ss(s.substr(open + 1, close - open - 1));
    wdl::WeierstrassCurve e;
    std::string tok;
    std::size_t k = 0;
    while (std::getline(ss, tok, ',')) {
      require(k < 5, "expected five a-invariants");
      const auto b = tok.find_first_not_of(" \t");
      const auto en = tok.find_last_not_of(" \t");
      require(b != std::string::npos, "empty a-invariant");
      e.a[k++] = parse_int(tok.substr(b, en - b + 1).c_str(), "a-invariant");
    }
    require(k == 5, "expected five a-invariants");
    e.label = label ? label : "";
    wdl::invariants(e);
    *out = new wdl_curve{std::move(e)};
  });
}

WDL_API void wdl_curve_free(wdl_curve* c) { delete c; }

WDL_API wdl_status wdl_curve_describe(const wdl_curve* c, char** json) {
  return guarded([&] {
    require(c && json, "null argument");
    const wdl::WeierstrassCurve& e = c->value;
    const wdl::WeierstrassCurve m = wdl::minimal_model(e);
    const wdl::CurveInvariants inv = wdl::invariants(m);
    nlohmann::ordered_json o;
    o["label"] = e.label;
    o["ainvs"] = e.ainvs_string();
    o["minimal_ainvs"] = m.ainvs_string();
    o["c4"] = big(inv.c4);
    o["c6"] = big(inv.c6);
    o["discriminant"] = big(inv.discriminant);
    o["j"] = inv.j.get_str();
    const auto n = wdl::semistable_conductor(m);
    o["semistable_conductor"] = n ? big(*n) : nlohmann::ordered_json(nullptr);
    nlohmann::ordered_json bad = nlohmann::ordered_json::array();
    for (const auto& [q, exp] : wdl::factor_integer(inv.discriminant)) {
      (void)exp;
      require(q.fits_ulong_p(), "bad prime beyond 64 bits");
      const wdl::ReductionInfo r = wdl::reduction_at(m, q.get_ui());
      nlohmann::ordered_json b;
      b["q"] = r.q;
      b["type"] = wdl::to_string(r.type);
      b["vq_delta"] = r.vq_delta;
      b["vq_j"] = r.vq_j;
      bad.push_back(std::move(b));
    }
    o["bad_primes"] = std::move(bad);
    *json = dup_string(o.dump(2));
  });
}

WDL_API wdl_status wdl_curve_tame_invariants(const wdl_curve* c, uint64_t q, uint64_t p, wdl_tame_invariants* out) {
  return guarded([&] {
    require(c && out, "null argument");
    const wdl::LocalTameInvariants inv = wdl::tame_invariants(c->value, q, p);
    out->q = inv.q;
    out->p = inv.p;
    out->vq_tate = inv.vq_tate;
    out->t_q = inv.t_q;
    out->m_q = inv.m_q;
    out->u_q = inv.u_q;
    out->k_q = inv.k_q;
    out->n_q = inv.n_q;
    out->n_q_via_log = wdl::nq_via_log(inv);
    out->unit_part = inv.unit_part;
    out->split = inv.split ? 1 : 0;
  });
}

WDL_API wdl_status wdl_curve_irreducibility_certificate(const wdl_curve* c, uint64_t p, uint64_t bound,
                                                        uint64_t* ell) {
  return guarded([&] {
    require(c && ell, "null argument");
    const auto cert = wdl::irreducibility_certificate(wdl::minimal_model(c->value), p, bound);
    *ell = cert ? *cert : 0;
  });
}

WDL_API wdl_status wdl_curve_lowered_conductor(const wdl_curve* c, uint64_t p, char** n_lowered, char** dropped) {
  return guarded([&] {
    require(c && n_lowered && dropped, "null argument");
    const wdl::LoweredConductor l = wdl::lowered_conductor(c->value, p);
    std::string d;
    for (std::size_t k = 0; k < l.dropped.size(); ++k) d += (k ? "," : "") + std::to_string(l.dropped[k]);
    char* a = dup_string(l.n_lowered.get_str());
    try {
      *dropped = dup_string(d);
    } catch (...) {
      std::free(a);
      throw;
    }
    *n_lowered = a;
  });
}

WDL_API wdl_status wdl_curve_defect_for_q(const wdl_curve* c, const char* qs, uint64_t p, int64_t* defect,
                                          int* applicable) {
  return guarded([&] {
    require(c && defect && applicable, "null argument");
    const wdl::DefectForQ d = wdl::wiles_defect_for_Q(c->value, parse_prime_list(qs), p);
    require(d.defect.get_den() == 1 && d.defect.get_num().fits_slong_p(), "defect is not a machine integer");
    *defect = d.defect.get_num().get_si();
    *applicable = d.applicability.applicable() ? 1 : 0;
  });
}

WDL_API wdl_status wdl_curve_db_open(const char* path, wdl_curve_format format, int skip_bad, wdl_curve_db** out) {
  return guarded([&] {
    require(path && out, "null argument");
    require(format == WDL_FORMAT_CREMONA || format == WDL_FORMAT_SIMPLE, "unknown curve format");
    const auto fmt = format == WDL_FORMAT_CREMONA ? wdl::CurveFormat::Cremona : wdl::CurveFormat::Simple;
    *out = new wdl_curve_db{wdl::ingest(path, fmt, skip_bad != 0)};
  });
}

WDL_API void wdl_curve_db_free(wdl_curve_db* db) { delete db; }

WDL_API size_t wdl_curve_db_size(const wdl_curve_db* db) { return db ? db->value.records.size() : 0; }

WDL_API size_t wdl_curve_db_issue_count(const wdl_curve_db* db) { return db ? db->value.issues.size() : 0; }

WDL_API wdl_status wdl_curve_db_issue(const wdl_curve_db* db, size_t i, size_t* line, const char** message) {
  return guarded([&] {
    require(db && line && message, "null argument");
    require(i < db->value.issues.size(), "issue index out of range");
    *line = db->value.issues[i].line;
    *message = db->value.issues[i].message.c_str();
  });
}

WDL_API wdl_status wdl_curve_db_find(const wdl_curve_db* db, const char* label, wdl_curve** out) {
  return guarded([&] {
    require(db && label && out, "null argument");
    const wdl::CurveRecord* rec = wdl::find_by_label(db->value.records, label);
    if (!rec) wdl::fail(wdl::ErrorCode::Data, std::string("label not found: ") + label);
    *out = new wdl_curve{rec->curve()};
  });
}

// ---- scan ----

WDL_API void wdl_scan_options_default(wdl_scan_options* opts) {
  if (!opts) return;
  static const uint64_t kPrimes[] = {3, 5, 7, 11};
  const wdl::ScanOptions d;
  opts->min_conductor = 1;
  opts->max_conductor = 0;
  opts->primes = kPrimes;
  opts->num_primes = 4;
  opts->min_lowered_prime_divisors = d.min_lowered_prime_divisors;
  opts->nonzero_only = 0;
  opts->certificate_bound = d.certificate_bound;
  opts->jobs = 1;
}

WDL_API wdl_status wdl_scan_run(const wdl_curve_db* db, const wdl_scan_options* opts, wdl_scan_result** out) {
  return guarded([&] {
    require(db && opts && out, "null argument");
    require(opts->num_primes == 0 || opts->primes, "null prime list");
    wdl::ScanOptions o;
    o.min_conductor = wdl::Integer(static_cast<unsigned long>(opts->min_conductor));
    o.max_conductor = wdl::Integer(static_cast<unsigned long>(opts->max_conductor));
    o.primes.assign(opts->primes, opts->primes + opts->num_primes);
    o.min_lowered_prime_divisors = opts->min_lowered_prime_divisors;
    o.nonzero_only = opts->nonzero_only != 0;
    o.certificate_bound = opts->certificate_bound;
    o.jobs = opts->jobs;
    auto r = std::make_unique<wdl_scan_result>();
    r->value = wdl::scan(db->value.records, o);
    r->primes = o.primes;
    *out = r.release();
  });
}

WDL_API void wdl_scan_result_free(wdl_scan_result* r) { delete r; }

WDL_API size_t wdl_scan_result_row_count(const wdl_scan_result* r) { return r ? r->value.rows.size() : 0; }

WDL_API size_t wdl_scan_result_curves_in_range(const wdl_scan_result* r) {
  return r ? r->value.curves_in_range : 0;
}

WDL_API size_t wdl_scan_result_skipped_count(const wdl_scan_result* r) { return r ? r->value.skipped.size() : 0; }

WDL_API wdl_status wdl_scan_result_skipped(const wdl_scan_result* r, size_t i, const char** label,
                                           const char** reason) {
  return guarded([&] {
    require(r && label && reason, "null argument");
    require(i < r->value.skipped.size(), "index out of range");
    *label = r->value.skipped[i].label.c_str();
    *reason = r->value.skipped[i].reason.c_str();
  });
}

WDL_API size_t wdl_scan_result_undetermined_count(const wdl_scan_result* r) {
  return r ? r->value.undetermined.size() : 0;
}

WDL_API wdl_status wdl_scan_result_undetermined(const wdl_scan_result* r, size_t i, const char** label,
                                                uint64_t* p) {
  return guarded([&] {
    require(r && label && p, "null argument");
    require(i < r->value.undetermined.size(), "index out of range");
    *label = r->value.undetermined[i].label.c_str();
    *p = r->value.undetermined[i].p;
  });
}

WDL_API wdl_status wdl_scan_result_render(const wdl_scan_result* r, wdl_report_format format, char** out) {
  return guarded([&] {
    require(r && out, "null argument");
    std::ostringstream os;
    switch (format) {
      case WDL_REPORT_CSV: wdl::write_csv(os, r->value.rows); break;
      case WDL_REPORT_JSON: wdl::write_json(os, r->value.rows); break;
      case WDL_REPORT_SUMMARY: wdl::write_summary(os, wdl::summarize(r->value, r->primes)); break;
      default: require(false, "unknown report format");
    }
    *out = dup_string(os.str());
  });
}

}  // extern "C"
