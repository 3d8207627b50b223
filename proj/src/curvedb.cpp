#include "wdl/curvedb.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "wdl/error.hpp"

namespace wdl {

namespace {

Integer parse_integer(const std::string& token, const char* what) {
  Integer out;
  std::size_t start = (token.size() > 1 && (token[0] == '-' || token[0] == '+')) ? 1 : 0;
  bool digits = token.size() > start;
  for (std::size_t i = start; i < token.size(); ++i) digits = digits && token[i] >= '0' && token[i] <= '9';
  if (!digits || out.set_str(token[0] == '+' ? token.substr(1) : token, 10) != 0) {
    fail(ErrorCode::Parse, std::string("bad ") + what + " \"" + token + "\"");
  }
  return out;
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

bool is_alpha_token(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < 'a' || c > 'z') return false;
  return true;
}

}  // namespace

CurveFormat parse_curve_format(const std::string& name) {
  if (name == "cremona") return CurveFormat::Cremona;
  if (name == "simple") return CurveFormat::Simple;
  fail(ErrorCode::InvalidArgument, "unknown curve format \"" + name + "\" (expected cremona or simple)");
}

WeierstrassCurve CurveRecord::curve() const {
  WeierstrassCurve e;
  e.a = a;
  e.label = label;
  return e;
}

CurveRecord parse_cremona_line(const std::string& line) {
  const auto open = line.find('[');
  const auto close = line.find(']');
  if (open == std::string::npos || close == std::string::npos || close < open) {
    fail(ErrorCode::Parse, "missing bracketed a-invariants");
  }
  const auto head = split_ws(line.substr(0, open));
  const auto tail = split_ws(line.substr(close + 1));
  if (head.size() != 3) fail(ErrorCode::Parse, "expected \"N class num\" before the a-invariants");
  if (tail.size() != 2) fail(ErrorCode::Parse, "expected \"rank torsion\" after the a-invariants");
  CurveRecord rec;
  rec.conductor = parse_integer(head[0], "conductor");
  if (rec.conductor <= 0) fail(ErrorCode::Parse, "conductor must be positive");
  if (!is_alpha_token(head[1])) fail(ErrorCode::Parse, "bad isogeny class \"" + head[1] + "\"");
  const Integer num = parse_integer(head[2], "curve number");
  if (num <= 0) fail(ErrorCode::Parse, "curve number must be positive");
  std::string inner = line.substr(open + 1, close - open - 1);
  for (char& c : inner)
    if (c == ',') c = ' ';
  if (std::count(line.begin() + open, line.begin() + close, ',') != 4) {
    fail(ErrorCode::Parse, "expected five comma-separated a-invariants");
  }
  const auto coeffs = split_ws(inner);
  if (coeffs.size() != 5) fail(ErrorCode::Parse, "expected five a-invariants");
  for (std::size_t i = 0; i < 5; ++i) rec.a[i] = parse_integer(coeffs[i], "a-invariant");
  // rank and torsion are informational; "?" marks a value the source lacks
  if (tail[0] != "?") parse_integer(tail[0], "rank");
  if (tail[1] != "?") parse_integer(tail[1], "torsion order");
  rec.label = head[0] + head[1] + head[2];
  invariants(rec.curve());
  return rec;
}

CurveRecord parse_simple_line(const std::string& line) {
  const auto tok = split_ws(line);
  if (tok.size() != 6) fail(ErrorCode::Parse, "expected \"label a1 a2 a3 a4 a6\"");
  CurveRecord rec;
  rec.label = tok[0];
  for (std::size_t i = 0; i < 5; ++i) rec.a[i] = parse_integer(tok[i + 1], "a-invariant");
  const auto n = semistable_conductor(rec.curve());
  rec.conductor = n ? *n : Integer(0);
  return rec;
}

IngestResult ingest_stream(std::istream& in, CurveFormat format, bool skip_bad) {
  IngestResult out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    try {
      out.records.push_back(format == CurveFormat::Cremona ? parse_cremona_line(line) : parse_simple_line(line));
    } catch (const Error& e) {
      out.issues.push_back({lineno, e.what()});
      if (!skip_bad) {
        fail(ErrorCode::Parse, "line " + std::to_string(lineno) + ": " + e.what() + ": \"" + line + "\"");
      }
    }
  }
  if (in.bad()) fail(ErrorCode::Io, "read error");
  if (out.records.empty()) fail(ErrorCode::Data, "no curve records found");
  return out;
}

IngestResult ingest(const std::string& path, CurveFormat format, bool skip_bad) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open " + path);
  try {
    return ingest_stream(in, format, skip_bad);
  } catch (const Error& e) {
    fail(e.code(), path + ": " + e.what());
  }
}

const CurveRecord* find_by_label(const std::vector<CurveRecord>& records, const std::string& label) {
  for (const auto& r : records)
    if (r.label == label) return &r;
  return nullptr;
}

}  // namespace wdl
