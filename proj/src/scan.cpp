#include "wdl/scan.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>

#include "wdl/error.hpp"

namespace wdl {

const char* const kScanCsvHeader =
    "label,conductor,q,p,vqJ,t_q,m_q,u_q,k_q,n_q,split,irreducibility,N_lowered,defect_contribution";

namespace {

struct CurveOutcome {
  std::vector<ScanRow> rows;
  std::optional<std::string> skip_reason;
  std::vector<std::uint64_t> undetermined;
  bool in_range = false;
};

Integer z(std::uint64_t x) { return Integer(static_cast<unsigned long>(x)); }

CurveOutcome process(const CurveRecord& rec, const ScanOptions& opt) {
  CurveOutcome out;
  const Integer& n = rec.conductor;
  if (n == 0) {
    out.in_range = true;
    out.skip_reason = "conductor unknown (additive reduction)";
    return out;
  }
  if (n < opt.min_conductor || (opt.max_conductor > 0 && n > opt.max_conductor)) return out;
  out.in_range = true;
  const auto factors = factor_integer(n);
  if (std::any_of(factors.begin(), factors.end(), [](const auto& f) { return f.second > 1; })) {
    out.skip_reason = "conductor not squarefree";
    return out;
  }
  const WeierstrassCurve e = minimal_model(rec.curve());
  if (!conductor_matches(e, n)) {
    out.skip_reason = "data error: conductor " + n.get_str() + " differs from rad(minimal discriminant)";
    return out;
  }
  for (std::uint64_t p : opt.primes) {
    if (n % z(p) == 0) continue;
    std::vector<std::uint64_t> steinberg;
    for (const auto& [qq, exp] : factors) {
      (void)exp;
      if ((qq - 1) % z(p) == 0) steinberg.push_back(qq.get_ui());
    }
    if (steinberg.empty()) continue;
    const auto cert = irreducibility_certificate(e, p, opt.certificate_bound);
    if (!cert) {
      out.undetermined.push_back(p);
      continue;
    }
    const LoweredConductor lowered = lowered_conductor_minimal(e, n, p);
    if (prime_divisor_count(lowered.n_lowered) < opt.min_lowered_prime_divisors) continue;
    for (std::uint64_t q : steinberg) {
      const LocalTameInvariants inv = tame_invariants_minimal(e, q, p);
      if (opt.nonzero_only && inv.n_q == 0) continue;
      ScanRow row;
      row.label = rec.label;
      row.conductor = n;
      row.q = q;
      row.p = p;
      row.vqJ = -static_cast<std::int64_t>(inv.vq_tate);
      row.t_q = inv.t_q;
      row.m_q = inv.m_q;
      row.u_q = inv.u_q;
      row.k_q = inv.k_q;
      row.n_q = inv.n_q;
      row.split = inv.split;
      row.certificate = *cert;
      row.n_lowered = lowered.n_lowered;
      row.defect_contribution = 2 * inv.n_q;
      row.n_q_via_log = nq_via_log(inv);
      if (row.n_q_via_log != row.n_q) {
        fail(ErrorCode::Internal, rec.label + ": n_q routes disagree at q = " + std::to_string(q));
      }
      out.rows.push_back(std::move(row));
    }
  }
  return out;
}

bool row_less(const ScanRow& a, const ScanRow& b) {
  if (a.conductor != b.conductor) return a.conductor < b.conductor;
  if (a.label != b.label) return a.label < b.label;
  if (a.q != b.q) return a.q < b.q;
  return a.p < b.p;
}

}  // namespace

ScanResult scan(const std::vector<CurveRecord>& records, const ScanOptions& options) {
  for (std::uint64_t p : options.primes) {
    if (!is_prime(p) || p == 2) fail(ErrorCode::InvalidArgument, "scan primes must be odd primes, got " + std::to_string(p));
  }
  std::vector<CurveOutcome> outcomes(records.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= records.size()) return;
      try {
        outcomes[i] = process(records[i], options);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::Internal) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
        outcomes[i].in_range = true;
        outcomes[i].skip_reason = e.what();
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  const unsigned jobs = std::max(1u, options.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);

  ScanResult result;
  for (std::size_t i = 0; i < records.size(); ++i) {
    auto& o = outcomes[i];
    if (o.in_range) ++result.curves_in_range;
    if (o.skip_reason) result.skipped.push_back({records[i].label, *o.skip_reason});
    for (std::uint64_t p : o.undetermined) result.undetermined.push_back({records[i].label, p});
    for (auto& row : o.rows) result.rows.push_back(std::move(row));
  }
  std::stable_sort(result.rows.begin(), result.rows.end(), row_less);
  return result;
}

void write_csv(std::ostream& out, const std::vector<ScanRow>& rows) {
  out << kScanCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.label << ',' << r.conductor.get_str() << ',' << r.q << ',' << r.p << ',' << r.vqJ << ',' << r.t_q
        << ',' << r.m_q << ',' << r.u_q << ',' << r.k_q << ',' << r.n_q << ',' << (r.split ? "split" : "nonsplit")
        << ',' << (r.certificate ? "certified-at-" + std::to_string(r.certificate) : std::string("undetermined"))
        << ',' << r.n_lowered.get_str() << ',' << r.defect_contribution << '\n';
  }
}

void write_json(std::ostream& out, const std::vector<ScanRow>& rows) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json o;
    o["label"] = r.label;
    o["conductor"] = nlohmann::ordered_json::parse(r.conductor.get_str());
    o["q"] = r.q;
    o["p"] = r.p;
    o["vqJ"] = r.vqJ;
    o["t_q"] = r.t_q;
    o["m_q"] = r.m_q;
    o["u_q"] = r.u_q;
    o["k_q"] = r.k_q;
    o["n_q"] = r.n_q;
    o["split"] = r.split ? "split" : "nonsplit";
    o["irreducibility"] = r.certificate ? "certified-at-" + std::to_string(r.certificate) : "undetermined";
    o["N_lowered"] = nlohmann::ordered_json::parse(r.n_lowered.get_str());
    o["defect_contribution"] = r.defect_contribution;
    arr.push_back(std::move(o));
  }
  out << arr.dump(2) << '\n';
}

ScanSummary summarize(const ScanResult& result, const std::vector<std::uint64_t>& primes) {
  ScanSummary s;
  for (std::uint64_t p : primes) {
    s.nonzero_pairs[p] = 0;
    s.undetermined[p] = 0;
  }
  for (const auto& r : result.rows)
    if (r.n_q > 0) ++s.nonzero_pairs[r.p];
  for (const auto& u : result.undetermined) ++s.undetermined[u.p];
  return s;
}

void write_summary(std::ostream& out, const ScanSummary& summary) {
  out << "p,nonzero_pairs,undetermined_curves\n";
  for (const auto& [p, count] : summary.nonzero_pairs) {
    auto it = summary.undetermined.find(p);
    out << p << ',' << count << ',' << (it == summary.undetermined.end() ? 0 : it->second) << '\n';
  }
}

}  // namespace wdl
