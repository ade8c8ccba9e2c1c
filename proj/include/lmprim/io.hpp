#pragma once

// Text formats for permutations, matrices, subspaces and scheme manifests.
//
//   permutation  one line of 2^m whitespace-separated decimal images
//   matrix       m lines of m '0'/'1' characters; line i is the image of e_i,
//                leftmost character the most significant bit
//   subspace     one basis vector per line in the matrix bit-string syntax
//   manifest     one "rho_path theta_path key" triple per line; '#' starts
//                a comment; relative paths resolve against the manifest

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "lmprim/gf2.hpp"
#include "lmprim/permgroup.hpp"
#include "lmprim/scheme.hpp"

namespace lmprim::io {

Permutation parse_permutation(std::string_view text);
std::string format_permutation(const Permutation& p);

Gf2Matrix parse_matrix(std::string_view text);
std::string format_matrix(const Gf2Matrix& m);

Subspace parse_subspace(std::string_view text);
std::string format_subspace(const Subspace& s);

struct ManifestEntry {
  std::filesystem::path rho_path;
  std::filesystem::path theta_path;
  Code key = 0;
};

std::vector<ManifestEntry> parse_manifest(std::string_view text, const std::filesystem::path& base_dir = {});

/// Throws ParseError when the file cannot be read.
std::string read_file(const std::filesystem::path& path);

Permutation parse_permutation_file(const std::filesystem::path& path);
Gf2Matrix parse_matrix_file(const std::filesystem::path& path);
Subspace parse_subspace_file(const std::filesystem::path& path);
std::vector<ManifestEntry> parse_manifest_file(const std::filesystem::path& path);

}  // namespace lmprim::io
