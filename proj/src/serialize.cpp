#include "gnatty/serialize.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <memory>
#include <ostream>

#include "gnatty/errors.hpp"

namespace gnatty {
namespace {

constexpr std::array<char, 8> kMagic{'G', 'N', 'A', 'T', 'T', 'R', 'E', 'E'};

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  void u8(std::uint8_t v) { out_.put(static_cast<char>(v)); }
  void u32(std::uint32_t v) { little(v, 4); }
  void u64(std::uint64_t v) { little(v, 8); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void bytes(std::span<const std::uint8_t> b) {
    out_.write(reinterpret_cast<const char*>(b.data()), static_cast<std::streamsize>(b.size()));
  }

 private:
  void little(std::uint64_t v, int width) {
    for (int i = 0; i < width; ++i) out_.put(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
  std::ostream& out_;
};

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  std::uint8_t u8() { return static_cast<std::uint8_t>(little(1)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(little(4)); }
  std::uint64_t u64() { return little(8); }
  double f64() { return std::bit_cast<double>(u64()); }
  std::vector<std::uint8_t> bytes(std::size_t n) {
    std::vector<std::uint8_t> b(n);
    in_.read(reinterpret_cast<char*>(b.data()), static_cast<std::streamsize>(n));
    if (!in_) throw ParseError("tree file: truncated");
    return b;
  }
  std::size_t count(std::size_t limit, const char* what) {
    const auto n = u64();
    if (n > limit) throw ParseError(std::string("tree file: implausible ") + what + " count");
    return static_cast<std::size_t>(n);
  }

 private:
  std::uint64_t little(int width) {
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) {
      const int c = in_.get();
      if (c == std::char_traits<char>::eof()) throw ParseError("tree file: truncated");
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * i);
    }
    return v;
  }
  std::istream& in_;
};

void write_config(Writer& w, const BuildConfig& config) {
  w.u8(static_cast<std::uint8_t>(config.partition));
  if (const auto* c = std::get_if<ConstantArity>(&config.arity)) {
    w.u8(0);
    w.u64(c->m);
    w.f64(0.0);
  } else {
    w.u8(1);
    w.u64(0);
    w.f64(std::get<PowerArity>(config.arity).alpha);
  }
  w.f64(config.gamma);
  w.u64(config.bucket_size);
  w.f64(config.reduce_factor);
  if (const auto* fp = std::get_if<FixedPointParams>(&config.codec)) {
    w.u8(1);
    w.u8(static_cast<std::uint8_t>(fp->total_bits));
    w.u8(static_cast<std::uint8_t>(fp->magnitude_bits));
    w.f64(fp->beta);
  } else {
    w.u8(0);
    w.u8(0);
    w.u8(0);
    w.f64(0.0);
  }
  w.u64(config.seed);
}

BuildConfig read_config(Reader& r) {
  BuildConfig config;
  const auto partition = r.u8();
  if (partition > 1) throw ParseError("tree file: unknown partition kind");
  config.partition = static_cast<PartitionKind>(partition);
  const auto arity_kind = r.u8();
  const auto m = r.u64();
  const auto alpha = r.f64();
  if (arity_kind == 0) {
    config.arity = ConstantArity{static_cast<std::size_t>(m)};
  } else if (arity_kind == 1) {
    config.arity = PowerArity{alpha};
  } else {
    throw ParseError("tree file: unknown arity kind");
  }
  config.gamma = r.f64();
  config.bucket_size = static_cast<std::size_t>(r.u64());
  config.reduce_factor = r.f64();
  const auto codec = r.u8();
  FixedPointParams fp;
  fp.total_bits = r.u8();
  fp.magnitude_bits = r.u8();
  fp.beta = r.f64();
  if (codec == 1) {
    config.codec = fp;
  } else if (codec != 0) {
    throw ParseError("tree file: unknown codec");
  }
  config.seed = r.u64();
  try {
    config.validate();
  } catch (const ConfigError& e) {
    throw ParseError(std::string("tree file: invalid config: ") + e.what());
  }
  return config;
}

void write_subtree(Writer& w, const GnatTree& tree, const Subtree& subtree) {
  if (subtree.empty()) {
    w.u8(0);
    return;
  }
  if (!subtree.is_node()) {
    w.u8(1);
    w.u64(subtree.bucket.size());
    for (const auto id : subtree.bucket) w.u32(id);
    return;
  }
  const auto& node = tree.node(subtree.node);
  w.u8(2);
  w.u64(node.centers.size());
  for (const auto id : node.centers) w.u32(id);
  w.u64(node.measuring.size());
  for (const auto p : node.measuring) w.u32(p);
  const auto& table = node.table;
  w.u8(table.saturated() ? 1 : 0);
  if (table.fixed_point()) {
    w.bytes(table.code_bytes());
  } else {
    for (const auto& iv : table.exact_entries()) {
      w.f64(iv.lo);
      w.f64(iv.hi);
    }
  }
  for (const auto& child : node.children) write_subtree(w, tree, child);
}

struct TreeReader {
  Reader& r;
  std::size_t n;
  std::shared_ptr<const FixedPointCodec> codec;
  std::vector<GnatNode> nodes;

  ObjectId object_id() {
    const auto id = r.u32();
    if (id >= n) throw ParseError("tree file: object id out of range");
    return id;
  }

  Subtree subtree() {
    const auto tag = r.u8();
    if (tag == 0) return {};
    if (tag == 1) {
      Subtree bucket;
      bucket.bucket.resize(r.count(n, "bucket"));
      for (auto& id : bucket.bucket) id = object_id();
      return bucket;
    }
    if (tag != 2) throw ParseError("tree file: unknown subtree tag");

    const std::size_t index = nodes.size();
    nodes.emplace_back();
    GnatNode node;
    node.centers.resize(r.count(n, "center"));
    for (auto& id : node.centers) id = object_id();
    const std::size_t m = node.centers.size();
    node.measuring.resize(r.count(m, "measuring pivot"));
    if (m == 0 || node.measuring.empty()) throw ParseError("tree file: node without centers");
    for (auto& p : node.measuring) {
      p = r.u32();
      if (p >= m) throw ParseError("tree file: measuring position out of range");
    }
    node.index_rows();
    const bool saturated = r.u8() != 0;
    const std::size_t rows = node.measuring.size();
    if (codec) {
      const auto width = static_cast<std::size_t>(codec->params().bytes_per_code());
      node.table = RangeTable::from_codes(rows, m, r.bytes(rows * m * 2 * width), saturated, codec);
    } else {
      std::vector<Interval> entries(rows * m);
      for (auto& iv : entries) {
        iv.lo = r.f64();
        iv.hi = r.f64();
      }
      node.table = RangeTable::from_exact(rows, m, std::move(entries));
    }
    node.children.reserve(m);
    for (std::size_t j = 0; j < m; ++j) node.children.push_back(subtree());
    nodes[index] = std::move(node);
    return Subtree{static_cast<std::int32_t>(index), {}};
  }
};

}  // namespace

void write_tree(const GnatTree& tree, std::ostream& out) {
  Writer w(out);
  for (const char c : kMagic) w.u8(static_cast<std::uint8_t>(c));
  w.u32(kTreeFormatVersion);
  write_config(w, tree.config());
  w.u64(tree.size());
  w.u64(tree.build_distance_evals());
  w.u64(tree.nodes().size());
  write_subtree(w, tree, tree.root());
  if (!out) throw IoError("failed writing tree");
}

GnatTree read_tree(std::istream& in) {
  Reader r(in);
  for (const char c : kMagic) {
    if (r.u8() != static_cast<std::uint8_t>(c)) throw ParseError("tree file: bad magic");
  }
  if (const auto version = r.u32(); version != kTreeFormatVersion) {
    throw ParseError("tree file: unsupported version " + std::to_string(version));
  }
  const auto config = read_config(r);
  const auto n = static_cast<std::size_t>(r.u64());
  const auto build_evals = r.u64();
  const auto node_count = r.u64();
  TreeReader reader{r, n, nullptr, {}};
  if (const auto* fp = std::get_if<FixedPointParams>(&config.codec)) {
    reader.codec = std::make_shared<const FixedPointCodec>(*fp);
  }
  Subtree root = reader.subtree();
  if (reader.nodes.size() != node_count) throw ParseError("tree file: node count mismatch");
  return GnatTree(config, n, std::move(root), std::move(reader.nodes), build_evals);
}

void save_tree(const GnatTree& tree, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_tree(tree, out);
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

GnatTree load_tree(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return read_tree(in);
}

}  // namespace gnatty
