#pragma once

#include <filesystem>
#include <iosfwd>

#include "gnatty/gnat_tree.hpp"

namespace gnatty {

// Binary tree file, little-endian:
//   "GNATTREE" | u32 version | config | u64 n | u64 build evals | u64 node count
//   then the root subtree in pre-order. A subtree is a u8 tag (0 empty,
//   1 bucket, 2 node); buckets carry u64 count + u32 ids; nodes carry their
//   centers, measuring positions, table (exact f64 pairs or raw code bytes)
//   and their children.
inline constexpr std::uint32_t kTreeFormatVersion = 1;

void write_tree(const GnatTree& tree, std::ostream& out);
GnatTree read_tree(std::istream& in);

void save_tree(const GnatTree& tree, const std::filesystem::path& path);
GnatTree load_tree(const std::filesystem::path& path);

}  // namespace gnatty
