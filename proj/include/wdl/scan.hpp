#pragma once

// Scan of a curve table for Steinberg primes with nonzero tame invariant,
// and report emission.

#include <cstddef>
#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "wdl/curvedb.hpp"
#include "wdl/tamedefect.hpp"

namespace wdl {

struct ScanOptions {
  Integer min_conductor = 1;
  Integer max_conductor = 0;  // 0: no upper bound
  std::vector<std::uint64_t> primes{3, 5, 7, 11};
  unsigned min_lowered_prime_divisors = 2;
  bool nonzero_only = false;
  std::uint64_t certificate_bound = kDefaultCertificateBound;
  unsigned jobs = 1;
};

struct ScanRow {
  std::string label;
  Integer conductor;
  std::uint64_t q = 0;
  std::uint64_t p = 0;
  std::int64_t vqJ = 0;
  unsigned t_q = 0;
  unsigned m_q = 0;
  unsigned u_q = 0;
  unsigned k_q = 0;
  unsigned n_q = 0;
  bool split = false;
  std::uint64_t certificate = 0;  // 0: undetermined
  Integer n_lowered;
  unsigned defect_contribution = 0;
  /// Discrete-log route, kept for the route-equality check.
  unsigned n_q_via_log = 0;
};

struct SkippedCurve {
  std::string label;
  std::string reason;
};

struct UndeterminedCurve {
  std::string label;
  std::uint64_t p = 0;
};

struct ScanResult {
  std::vector<ScanRow> rows;
  std::vector<SkippedCurve> skipped;
  std::vector<UndeterminedCurve> undetermined;
  std::size_t curves_in_range = 0;
};

ScanResult scan(const std::vector<CurveRecord>& records, const ScanOptions& options);

/// Column names, in output order.
extern const char* const kScanCsvHeader;

void write_csv(std::ostream& out, const std::vector<ScanRow>& rows);
void write_json(std::ostream& out, const std::vector<ScanRow>& rows);

struct ScanSummary {
  /// #{(E, q) : n_q > 0} per p.
  std::map<std::uint64_t, std::size_t> nonzero_pairs;
  /// Curves excluded for lack of an irreducibility certificate, per p.
  std::map<std::uint64_t, std::size_t> undetermined;
};

ScanSummary summarize(const ScanResult& result, const std::vector<std::uint64_t>& primes);
void write_summary(std::ostream& out, const ScanSummary& summary);

}  // namespace wdl
