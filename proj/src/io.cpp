#include "pcaforge/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace pcaforge::io {
namespace {

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
  std::ostringstream os;
  os << "line " << line << ": " << what;
  fail(ErrorCode::ParseError, os.str());
}

std::vector<std::string> split_spaces(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

template <typename T>
bool parse_int(const std::string& s, T& out) {
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

bool parse_double(const std::string& s, double& out) {
  try {
    std::size_t used = 0;
    out = std::stod(s, &used);
    return used == s.size();
  } catch (const std::exception&) {
    return false;
  }
}

std::string format_epsilon(double eps) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", eps);
  return buf;
}

}  // namespace

std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::IoError, "cannot open " + path + " for writing");
  out << text;
  if (!out) fail(ErrorCode::IoError, "write failed for " + path);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string format_array(const Array& a, const WriteOptions& options) {
  if (options.base != 0 && options.base != 1) {
    fail(ErrorCode::InvalidArgument, "symbol base must be 0 or 1");
  }
  std::string out = kMagic;
  out += '\n';
  out += std::to_string(a.rows()) + ' ' + std::to_string(a.cols()) + ' ' + std::to_string(a.v()) +
         ' ' + std::to_string(options.base);
  if (options.claims.t) out += " t=" + std::to_string(*options.claims.t);
  if (options.claims.m) out += " m=" + std::to_string(*options.claims.m);
  if (options.claims.epsilon) out += " eps=" + format_epsilon(*options.claims.epsilon);
  out += '\n';
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) {
      if (c) out += ' ';
      out += std::to_string(a.at(r, c) + options.base);
    }
    out += '\n';
  }
  return out;
}

LoadedArray parse_array(const std::string& text) {
  std::vector<std::string> lines;
  {
    std::size_t pos = 0;
    while (pos < text.size()) {
      std::size_t nl = text.find('\n', pos);
      if (nl == std::string::npos) nl = text.size();
      std::string line = text.substr(pos, nl - pos);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      lines.push_back(std::move(line));
      pos = nl + 1;
    }
  }
  if (lines.empty() || lines[0] != kMagic) parse_fail(1, "expected magic line 'pca-forge v1'");
  if (lines.size() < 2) parse_fail(2, "missing dimension line");

  LoadedArray out;
  ArrayFileHeader& h = out.header;
  const auto head = split_spaces(lines[1]);
  if (head.size() < 4) parse_fail(2, "expected 'N k v base'");
  if (!parse_int(head[0], h.rows) || !parse_int(head[1], h.cols) || !parse_int(head[2], h.v) ||
      !parse_int(head[3], h.base)) {
    parse_fail(2, "dimension fields must be non-negative integers");
  }
  if (h.base != 0 && h.base != 1) parse_fail(2, "symbol base must be 0 or 1");
  if (h.v < 2 || h.v > 65535) parse_fail(2, "v must lie in [2, 65535]");
  for (std::size_t i = 4; i < head.size(); ++i) {
    const auto eq = head[i].find('=');
    if (eq == std::string::npos) parse_fail(2, "unexpected token '" + head[i] + "'");
    const std::string key = head[i].substr(0, eq);
    const std::string val = head[i].substr(eq + 1);
    if (key == "t") {
      int t = 0;
      if (!parse_int(val, t)) parse_fail(2, "bad t claim");
      h.claims.t = t;
    } else if (key == "m") {
      std::uint64_t m = 0;
      if (!parse_int(val, m)) parse_fail(2, "bad m claim");
      h.claims.m = m;
    } else if (key == "eps") {
      double e = 0;
      if (!parse_double(val, e)) parse_fail(2, "bad eps claim");
      h.claims.epsilon = e;
    } else {
      parse_fail(2, "unknown claim '" + key + "'");
    }
  }

  std::size_t body = lines.size() - 2;
  // A final newline leaves one empty trailing entry.
  if (body > 0 && lines.back().empty()) --body;
  if (body != h.rows) {
    std::ostringstream os;
    os << "header declares " << h.rows << " rows, body has " << body;
    fail(ErrorCode::DimensionMismatch, os.str());
  }
  std::vector<Symbol> cells;
  cells.reserve(h.rows * h.cols);
  for (std::size_t r = 0; r < h.rows; ++r) {
    const std::size_t line_no = r + 3;
    const auto toks = split_spaces(lines[r + 2]);
    if (toks.size() != h.cols) {
      std::ostringstream os;
      os << "line " << line_no << ": expected " << h.cols << " symbols, found " << toks.size();
      fail(ErrorCode::DimensionMismatch, os.str());
    }
    for (const auto& tok : toks) {
      long long s = 0;
      if (!parse_int(tok, s)) parse_fail(line_no, "symbol '" + tok + "' is not an integer");
      s -= h.base;
      if (s < 0 || s >= h.v) {
        std::ostringstream os;
        os << "line " << line_no << ": symbol " << tok << " outside [" << h.base << ", "
           << h.base + h.v << ")";
        fail(ErrorCode::SymbolOutOfRange, os.str());
      }
      cells.push_back(static_cast<Symbol>(s));
    }
  }
  out.array = Array(h.rows, h.cols, h.v, std::move(cells));
  return out;
}

void write_array(const Array& a, const std::string& path, const WriteOptions& options) {
  write_text(path, format_array(a, options));
}

LoadedArray read_array(const std::string& path) { return parse_array(read_text(path)); }

std::string format_sweep_csv(const bounds::BoundSweep& sweep) {
  std::string out = "axis,formula,real_bound,n_rows,feasible\n";
  for (const auto& point : sweep.points) {
    for (const auto& cell : point.cells) {
      out += std::to_string(point.value);
      out += ',';
      out += cell.result ? cell.result->source : bounds::formula_label(cell.formula);
      if (cell.result) {
        out += ',' + format_real(cell.result->real_bound) + ',' + std::to_string(cell.result->n_rows) + ",1\n";
      } else {
        out += ",,,0\n";
      }
    }
  }
  return out;
}

void write_sweep_csv(const bounds::BoundSweep& sweep, const std::string& path) {
  write_text(path, format_sweep_csv(sweep));
}

std::string format_defects_csv(const std::vector<coverage::Defect>& defects) {
  std::string out = "tset_indices,count,missing\n";
  for (const auto& d : defects) {
    for (std::size_t i = 0; i < d.columns.size(); ++i) {
      if (i) out += ';';
      out += std::to_string(d.columns[i]);
    }
    out += ',' + std::to_string(d.count) + ',' + std::to_string(d.missing) + '\n';
  }
  return out;
}

void write_defects_csv(const std::vector<coverage::Defect>& defects, const std::string& path) {
  write_text(path, format_defects_csv(defects));
}

std::string format_report_json(const construct::BuildReport& report) {
  nlohmann::ordered_json j;
  j["algorithm"] = report.algorithm;
  j["params"] = {{"t", report.params.t},
                 {"k", report.params.k},
                 {"v", report.params.v},
                 {"m", report.params.m},
                 {"epsilon", report.params.epsilon}};
  j["seed"] = report.rng_seed;
  j["n_rows"] = report.array.rows();
  j["iterations"] = report.iterations;
  j["verifier"] = report.verifier;
  j["defective_count"] = report.defective_count;
  j["bound"] = {{"source", report.bound_used.source},
                {"real_bound", report.bound_used.real_bound},
                {"n_rows", report.bound_used.n_rows}};
  if (!report.estimator_trace.empty()) j["estimator_trace"] = report.estimator_trace;
  j["elapsed_ms"] = report.elapsed_ms;
  return j.dump(2) + '\n';
}

void write_report_json(const construct::BuildReport& report, const std::string& path) {
  write_text(path, format_report_json(report));
}

}  // namespace pcaforge::io
