#include "gnatty/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

namespace gnatty {
namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

template <class T>
bool parse_number(std::string_view field, T& out) {
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, out);
  return ec == std::errc() && ptr == end;
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

}  // namespace

Dataset<Vector> generate_uniform_vectors(std::size_t n, std::size_t dim, std::uint64_t seed) {
  if (dim == 0) throw ConfigError("generate_uniform_vectors: dim must be at least 1");
  auto rng = Rng::for_stream(seed, Stream::kDataset);
  Dataset<Vector> data(n, Vector(dim));
  for (auto& v : data) {
    for (auto& x : v) x = rng.unit();
  }
  return data;
}

Dataset<std::string> generate_random_strings(std::size_t n, std::uint64_t seed, std::size_t min_len,
                                             std::size_t max_len) {
  if (min_len > max_len) throw ConfigError("generate_random_strings: min_len > max_len");
  auto rng = Rng::for_stream(seed, Stream::kDataset);
  Dataset<std::string> data(n);
  for (auto& s : data) {
    const auto len = min_len + rng.below(max_len - min_len + 1);
    s.resize(len);
    for (auto& c : s) c = static_cast<char>('a' + rng.below(26));
  }
  return data;
}

Dataset<Vector> read_vectors(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ParseError(source, 1, "missing header \"<dim> <n>\"");
  ++line_no;
  const auto header = split_fields(line);
  std::size_t dim = 0;
  std::size_t n = 0;
  if (header.size() != 2 || !parse_number(header[0], dim) || !parse_number(header[1], n)) {
    throw ParseError(source, line_no, "malformed header, expected \"<dim> <n>\"");
  }
  if (dim == 0) throw ParseError(source, line_no, "dimension must be at least 1");

  Dataset<Vector> data;
  data.reserve(n);
  while (data.size() < n) {
    if (!std::getline(in, line)) {
      throw ParseError(source, line_no + 1,
                       "expected " + std::to_string(n) + " vectors, found " + std::to_string(data.size()));
    }
    ++line_no;
    const auto fields = split_fields(line);
    if (fields.size() != dim) {
      throw ParseError(source, line_no,
                       "expected " + std::to_string(dim) + " coordinates, found " + std::to_string(fields.size()));
    }
    Vector v(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      if (!parse_number(fields[i], v[i]) || !std::isfinite(v[i])) {
        throw ParseError(source, line_no, "invalid coordinate \"" + std::string(fields[i]) + "\"");
      }
    }
    data.push_back(std::move(v));
  }
  while (std::getline(in, line)) {
    ++line_no;
    if (!split_fields(line).empty()) throw ParseError(source, line_no, "unexpected data after last vector");
  }
  return data;
}

Dataset<Vector> load_vectors(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return read_vectors(in, path.string());
}

Dataset<std::string> read_strings(std::istream& in, const std::string& source) {
  Dataset<std::string> data;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!is_valid_utf8(line)) throw ParseError(source, line_no, "invalid UTF-8");
    data.push_back(std::move(line));
  }
  return data;
}

Dataset<std::string> load_strings(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return read_strings(in, path.string());
}

bool is_valid_utf8(std::string_view text) {
  std::size_t i = 0;
  while (i < text.size()) {
    const auto lead = static_cast<unsigned char>(text[i]);
    std::size_t extra = 0;
    std::uint32_t cp = 0;
    if (lead < 0x80) {
      ++i;
      continue;
    } else if ((lead & 0xE0) == 0xC0) {
      extra = 1;
      cp = lead & 0x1F;
    } else if ((lead & 0xF0) == 0xE0) {
      extra = 2;
      cp = lead & 0x0F;
    } else if ((lead & 0xF8) == 0xF0) {
      extra = 3;
      cp = lead & 0x07;
    } else {
      return false;
    }
    if (i + extra >= text.size()) return false;
    for (std::size_t k = 1; k <= extra; ++k) {
      const auto cont = static_cast<unsigned char>(text[i + k]);
      if ((cont & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (cont & 0x3F);
    }
    // Overlong forms, surrogates, and values past U+10FFFF.
    static constexpr std::uint32_t kMinForLength[] = {0, 0x80, 0x800, 0x10000};
    if (cp < kMinForLength[extra] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return false;
    i += extra + 1;
  }
  return true;
}

}  // namespace gnatty
