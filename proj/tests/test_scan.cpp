#include <doctest.h>

#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "wdl/curvedb.hpp"
#include "wdl/error.hpp"
#include "wdl/scan.hpp"

using namespace wdl;

namespace {

const std::vector<CurveRecord>& fixture() {
  static const std::vector<CurveRecord> records =
      ingest(WDL_TEST_DATA "/allcurves.00001-09999", CurveFormat::Cremona, false).records;
  return records;
}

std::string csv(const std::vector<ScanRow>& rows) {
  std::ostringstream out;
  write_csv(out, rows);
  return out.str();
}

ScanOptions range(long lo, long hi, std::vector<std::uint64_t> primes) {
  ScanOptions o;
  o.min_conductor = lo;
  o.max_conductor = hi;
  o.primes = std::move(primes);
  return o;
}

std::string key(const ScanRow& r) { return r.label + "/" + std::to_string(r.q) + "/" + std::to_string(r.p); }

}  // namespace

TEST_CASE("cremona lines") {
  const CurveRecord r = parse_cremona_line("11 a 1 [0,-1,1,-10,-20] 0 5");
  CHECK(r.label == "11a1");
  CHECK(r.conductor == 11);
  CHECK(r.a == std::array<Integer, 5>{0, -1, 1, -10, -20});
  CHECK(parse_cremona_line("  104710 l 1 [1,0,0,-1,0]  2 1 ").label == "104710l1");
  CHECK_THROWS_AS(parse_cremona_line("11 a [0,-1]"), Error);
  CHECK_THROWS_AS(parse_cremona_line("11 a 1 [0,-1,1,-10] 0 5"), Error);
  CHECK_THROWS_AS(parse_cremona_line("11 a 1 [0,-1,1,-10,x] 0 5"), Error);
  CHECK_THROWS_AS(parse_cremona_line("-11 a 1 [0,-1,1,-10,-20] 0 5"), Error);
  try {
    parse_cremona_line("11 a [0,-1]");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Parse);
  }
}

TEST_CASE("simple lines recompute the conductor") {
  const CurveRecord r = parse_simple_line("x11 0 -1 1 0 0");
  CHECK(r.label == "x11");
  CHECK(r.conductor == 11);
  // additive at 3: conductor left unknown
  CHECK(parse_simple_line("y 0 0 0 0 1").conductor == 0);
  CHECK_THROWS_AS(parse_simple_line("z 0 0 0 0"), Error);
  CHECK(parse_curve_format("simple") == CurveFormat::Simple);
  CHECK_THROWS_AS(parse_curve_format("lmfdb"), Error);
}

TEST_CASE("ingestion") {
  std::istringstream good("# comment\n\n11 a 1 [0,-1,1,-10,-20] 0 5\n11 a 2 [0,-1,1,-7820,-263580] 0 1\n");
  const IngestResult res = ingest_stream(good, CurveFormat::Cremona, false);
  CHECK(res.records.size() == 2);
  CHECK(res.issues.empty());
  CHECK(find_by_label(res.records, "11a2") != nullptr);
  CHECK(find_by_label(res.records, "11a3") == nullptr);

  std::istringstream mixed("11 a 1 [0,-1,1,-10,-20] 0 5\n11 a [0,-1]\n14 a 1 [1,0,1,4,-6] 0 6\n");
  CHECK_THROWS_AS(ingest_stream(mixed, CurveFormat::Cremona, false), Error);
  std::istringstream mixed2(mixed.str());
  const IngestResult skipped = ingest_stream(mixed2, CurveFormat::Cremona, true);
  CHECK(skipped.records.size() == 2);
  REQUIRE(skipped.issues.size() == 1);
  CHECK(skipped.issues[0].line == 2);

  std::istringstream empty("# nothing\n");
  try {
    ingest_stream(empty, CurveFormat::Cremona, false);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Data);
  }
  try {
    ingest("/nonexistent/curves.txt", CurveFormat::Cremona, false);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Io);
  }
}

TEST_CASE("empty scans emit only the header") {
  const ScanResult r = scan(fixture(), range(11, 13, {3}));
  CHECK(r.rows.empty());
  CHECK(csv(r.rows) == std::string(kScanCsvHeader) + "\n");
  std::ostringstream js;
  write_json(js, r.rows);
  CHECK(nlohmann::json::parse(js.str()).empty());
  CHECK_THROWS_AS(scan(fixture(), range(1, 100, {2})), Error);
  CHECK_THROWS_AS(scan(fixture(), range(1, 100, {9})), Error);
}

TEST_CASE("golden report") {
  ScanOptions o = range(1, 900, {3});
  o.nonzero_only = true;
  const ScanResult r = scan(fixture(), o);
  std::ifstream in(WDL_TEST_DATA "/scan_p3_upto900.csv");
  std::stringstream golden;
  golden << in.rdbuf();
  CHECK(csv(r.rows) == golden.str());
  REQUIRE_FALSE(r.rows.empty());
  CHECK(r.rows.front().label == "805b1");
  CHECK(r.rows.front().q == 7);

  std::ostringstream js;
  write_json(js, r.rows);
  const auto parsed = nlohmann::json::parse(js.str());
  CHECK(parsed.size() == r.rows.size());
  CHECK(parsed[0]["label"] == "805b1");
  CHECK(parsed[0]["n_q"] == 1);
}

TEST_CASE("skip and undetermined bookkeeping") {
  std::istringstream in(
      "11 a 1 [0,-1,1,-10,-20] 0 5\n"      // reducible at 5
      "27 a 1 [0,0,1,0,-7] 0 3\n"          // additive
      "35 a 1 [0,1,1,9,1] 0 3\n"           // fine
      "37 a 1 [0,0,1,-1,0] 1 1\n"          // conductor says 37 ...
      "38 a 1 [0,0,1,-1,0] 1 1\n");        // ... but these invariants are 37a1
  const auto recs = ingest_stream(in, CurveFormat::Cremona, false).records;
  const ScanResult r = scan(recs, range(1, 0, {3, 5}));
  CHECK(r.curves_in_range == 5);
  REQUIRE(r.skipped.size() == 2);
  CHECK(r.skipped[0].label == "27a1");
  CHECK(r.skipped[0].reason == "conductor not squarefree");
  CHECK(r.skipped[1].label == "38a1");
  CHECK(r.skipped[1].reason.find("data error") == 0);
  bool saw_11 = false;
  for (const auto& u : r.undetermined) saw_11 |= u.label == "11a1" && u.p == 5;
  CHECK(saw_11);
  for (const auto& row : r.rows) CHECK(row.label != "38a1");
}

TEST_CASE("property: worker count does not change the report") {
  ScanOptions o = range(1, 1500, {3, 5, 7, 11});
  o.min_lowered_prime_divisors = 0;
  const std::string one = csv(scan(fixture(), o).rows);
  for (unsigned jobs : {3u, 8u}) {
    o.jobs = jobs;
    const ScanResult r = scan(fixture(), o);
    CHECK(csv(r.rows) == one);
  }
}

TEST_CASE("property: restricting primes or range restricts the rows") {
  ScanOptions all = range(1, 2500, {3, 5, 7});
  const ScanResult full = scan(fixture(), all);
  std::set<std::string> full_keys;
  for (const auto& r : full.rows) full_keys.insert(key(r));

  std::set<std::string> union_keys;
  for (std::uint64_t p : {3u, 5u, 7u}) {
    for (const auto& r : scan(fixture(), range(1, 2500, {p})).rows) {
      CHECK(r.p == p);
      union_keys.insert(key(r));
    }
  }
  CHECK(union_keys == full_keys);

  std::set<std::string> pieces;
  for (const auto& [lo, hi] : std::vector<std::pair<long, long>>{{1, 800}, {801, 1700}, {1701, 2500}})
    for (const auto& r : scan(fixture(), range(lo, hi, {3, 5, 7})).rows) {
      CHECK(r.conductor >= lo);
      CHECK(r.conductor <= hi);
      pieces.insert(key(r));
    }
  CHECK(pieces == full_keys);

  ScanOptions nz = all;
  nz.nonzero_only = true;
  std::size_t expected = 0;
  for (const auto& r : full.rows) expected += r.n_q > 0;
  CHECK(scan(fixture(), nz).rows.size() == expected);
}

TEST_CASE("property: every row is internally consistent") {
  ScanOptions o = range(1, 9999, {3, 5, 7, 11});
  const ScanResult r = scan(fixture(), o);
  CHECK(r.curves_in_range == fixture().size());
  CHECK(r.rows.size() > 1000);
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const ScanRow& row = r.rows[i];
    CHECK(row.n_q_via_log == row.n_q);
    CHECK(row.defect_contribution == 2 * row.n_q);
    CHECK(row.defect_contribution % 2 == 0);
    CHECK(row.certificate != 0);
    CHECK(row.conductor % row.q == 0);
    CHECK((row.q - 1) % row.p == 0);
    CHECK(row.n_q <= row.k_q);
    CHECK(prime_divisor_count(row.n_lowered) >= 2);
    CHECK(row.conductor % row.n_lowered == 0);
    if (i > 0) {
      const ScanRow& prev = r.rows[i - 1];
      CHECK((prev.conductor < row.conductor ||
             (prev.conductor == row.conductor && (prev.label < row.label || (prev.label == row.label &&
                                                  (prev.q < row.q || (prev.q == row.q && prev.p < row.p)))))));
    }
  }
  const ScanSummary s = summarize(r, o.primes);
  std::size_t nonzero = 0;
  for (const auto& [p, c] : s.nonzero_pairs) nonzero += c;
  std::size_t expected = 0;
  for (const auto& row : r.rows) expected += row.n_q > 0;
  CHECK(nonzero == expected);
  std::ostringstream out;
  write_summary(out, s);
  CHECK(out.str().find("p,nonzero_pairs,undetermined_curves") == 0);
}
