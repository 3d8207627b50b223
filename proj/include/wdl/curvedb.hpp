#pragma once

// Curve table ingestion. Two line formats:
//   cremona: N class num [a1,a2,a3,a4,a6] rank torsion   ("?" allowed for the last two)
//   simple:  label a1 a2 a3 a4 a6      (conductor recomputed)
// Blank lines and lines starting with '#' are ignored.

#include <array>
#include <cstddef>
#include <istream>
#include <string>
#include <vector>

#include "wdl/arith.hpp"
#include "wdl/elliptic.hpp"

namespace wdl {

enum class CurveFormat { Cremona, Simple };

CurveFormat parse_curve_format(const std::string& name);

struct CurveRecord {
  std::string label;
  /// 0 when it could not be recomputed (simple format, additive reduction).
  Integer conductor;
  std::array<Integer, 5> a;

  WeierstrassCurve curve() const;
};

struct ParseIssue {
  std::size_t line = 0;
  std::string message;
};

struct IngestResult {
  std::vector<CurveRecord> records;
  std::vector<ParseIssue> issues;
};

/// Throws Parse on the first malformed line unless skip_bad, Data on an
/// input with no records, Io when the file cannot be read.
IngestResult ingest(const std::string& path, CurveFormat format, bool skip_bad);
IngestResult ingest_stream(std::istream& in, CurveFormat format, bool skip_bad);

/// Parses one cremona-format line; throws Parse with a description.
CurveRecord parse_cremona_line(const std::string& line);
CurveRecord parse_simple_line(const std::string& line);

/// Linear search by exact label; nullptr when absent.
const CurveRecord* find_by_label(const std::vector<CurveRecord>& records, const std::string& label);

}  // namespace wdl
