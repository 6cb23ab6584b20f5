#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

#include "gnatty/bench/experiment.hpp"

namespace gnatty::bench {
namespace {

std::string format_double(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

template <class T>
std::string optional_field(const std::optional<T>& v) {
  if (!v) return "";
  if constexpr (std::is_floating_point_v<T>) {
    return format_double(*v);
  } else {
    return std::to_string(*v);
  }
}

std::vector<std::string> fields_of(const ResultRow& row, bool timing) {
  std::vector<std::string> f{
      quote(row.dataset),
      row.metric,
      std::to_string(row.n),
      std::to_string(row.dim),
      std::to_string(row.queries),
      std::to_string(row.seed),
      row.index,
      row.partition,
      row.arity,
      optional_field(row.gamma),
      row.codec,
      optional_field(row.fp_bits),
      optional_field(row.fp_mag),
      optional_field(row.beta),
      optional_field(row.reduce),
      optional_field(row.bucket),
      optional_field(row.lc_bucket),
      row.search,
      row.radius_mode,
      format_double(row.radius),
      format_double(row.mean_results),
      format_double(row.median_evals),
      format_double(row.mean_evals),
      std::to_string(row.table_entries),
      std::to_string(row.table_bytes),
      std::to_string(row.build_evals),
      optional_field(row.memory_target),
  };
  if (timing) {
    f.push_back(format_double(row.build_ms));
    f.push_back(format_double(row.query_ms));
  }
  return f;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  return fields;
}

template <class T>
T parse_field(const std::string& s, std::size_t line) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError("csv", line, "bad numeric field \"" + s + "\"");
  }
  return v;
}

template <class T>
std::optional<T> parse_optional(const std::string& s, std::size_t line) {
  if (s.empty()) return std::nullopt;
  return parse_field<T>(s, line);
}

}  // namespace

std::vector<std::string> csv_columns(bool timing) {
  std::vector<std::string> cols{"dataset",     "metric",       "n",           "dim",          "queries",
                                "seed",        "index",        "partition",   "arity",        "gamma",
                                "codec",       "fp_bits",      "fp_mag",      "beta",         "reduce",
                                "bucket",      "lc_bucket",    "search",      "radius_mode",  "radius",
                                "mean_results", "median_evals", "mean_evals", "table_entries", "table_bytes",
                                "build_evals", "memory_target"};
  if (timing) {
    cols.push_back("build_ms");
    cols.push_back("query_ms");
  }
  return cols;
}

void write_csv(const std::vector<ResultRow>& rows, std::ostream& out, bool timing) {
  const auto join = [&](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) out << (i ? "," : "") << fields[i];
    out << '\n';
  };
  join(csv_columns(timing));
  for (const auto& row : rows) join(fields_of(row, timing));
}

void emit_csv(const std::vector<ResultRow>& rows, const std::string& path, bool timing) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  write_csv(rows, out, timing);
  out.flush();
  if (!out) throw IoError("failed writing " + path);
}

std::vector<ResultRow> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("csv", 1, "missing header");
  const auto header = split_csv_line(line);
  const bool timing = header == csv_columns(true);
  if (!timing && header != csv_columns(false)) throw ParseError("csv", 1, "unexpected header");

  std::vector<ResultRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != header.size()) throw ParseError("csv", line_no, "wrong field count");
    ResultRow row;
    std::size_t i = 0;
    row.dataset = f[i++];
    row.metric = f[i++];
    row.n = parse_field<std::uint64_t>(f[i++], line_no);
    row.dim = parse_field<std::uint64_t>(f[i++], line_no);
    row.queries = parse_field<std::uint64_t>(f[i++], line_no);
    row.seed = parse_field<std::uint64_t>(f[i++], line_no);
    row.index = f[i++];
    row.partition = f[i++];
    row.arity = f[i++];
    row.gamma = parse_optional<double>(f[i++], line_no);
    row.codec = f[i++];
    row.fp_bits = parse_optional<std::uint64_t>(f[i++], line_no);
    row.fp_mag = parse_optional<std::uint64_t>(f[i++], line_no);
    row.beta = parse_optional<double>(f[i++], line_no);
    row.reduce = parse_optional<double>(f[i++], line_no);
    row.bucket = parse_optional<std::uint64_t>(f[i++], line_no);
    row.lc_bucket = parse_optional<std::uint64_t>(f[i++], line_no);
    row.search = f[i++];
    row.radius_mode = f[i++];
    row.radius = parse_field<double>(f[i++], line_no);
    row.mean_results = parse_field<double>(f[i++], line_no);
    row.median_evals = parse_field<double>(f[i++], line_no);
    row.mean_evals = parse_field<double>(f[i++], line_no);
    row.table_entries = parse_field<std::uint64_t>(f[i++], line_no);
    row.table_bytes = parse_field<std::uint64_t>(f[i++], line_no);
    row.build_evals = parse_field<std::uint64_t>(f[i++], line_no);
    row.memory_target = parse_optional<std::uint64_t>(f[i++], line_no);
    if (timing) {
      row.build_ms = parse_field<double>(f[i++], line_no);
      row.query_ms = parse_field<double>(f[i++], line_no);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace gnatty::bench
