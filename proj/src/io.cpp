#include "lmprim/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "lmprim/errors.hpp"

namespace lmprim::io {

namespace {

std::vector<std::string> non_empty_lines(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    out.push_back(line.substr(first, last - first + 1));
  }
  return out;
}

Code parse_decimal(std::string_view token) {
  Code value = 0;
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc{} || ptr != end) throw ParseError("expected a non-negative decimal integer, got '" +
                                                        std::string(token) + "'");
  return value;
}

}  // namespace

Permutation parse_permutation(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::vector<Code> images;
  std::string token;
  while (in >> token) images.push_back(parse_decimal(token));
  try {
    return Permutation(std::move(images));
  } catch (const DimensionError& e) {
    throw ParseError(e.what());
  } catch (const PreconditionError& e) {
    throw ParseError(e.what());
  }
}

std::string format_permutation(const Permutation& p) {
  std::string out;
  for (Code v : p.images()) {
    if (!out.empty()) out += ' ';
    out += std::to_string(v);
  }
  return out + "\n";
}

Gf2Matrix parse_matrix(std::string_view text) {
  const auto lines = non_empty_lines(text);
  if (lines.empty()) throw ParseError("matrix file is empty");
  std::vector<Code> rows;
  for (const auto& line : lines) {
    if (line.size() != lines.size()) {
      throw ParseError("matrix must be square: " + std::to_string(lines.size()) + " rows but a row of width " +
                       std::to_string(line.size()));
    }
    rows.push_back(parse_bit_string(line));
  }
  return {static_cast<unsigned>(lines.size()), std::move(rows)};
}

std::string format_matrix(const Gf2Matrix& m) {
  std::string out;
  for (Code r : m.rows()) out += to_bit_string(r, m.dim()) + "\n";
  return out;
}

Subspace parse_subspace(std::string_view text) {
  const auto lines = non_empty_lines(text);
  if (lines.empty()) throw ParseError("subspace file is empty; write a zero vector for the zero subspace");
  std::vector<Code> vectors;
  for (const auto& line : lines) {
    if (line.size() != lines.front().size()) throw ParseError("subspace basis vectors differ in length");
    vectors.push_back(parse_bit_string(line));
  }
  return subspace_from_codes(static_cast<unsigned>(lines.front().size()), vectors);
}

std::string format_subspace(const Subspace& s) {
  if (s.is_zero()) return std::string(s.ambient_dim(), '0') + "\n";
  std::string out;
  for (Code r : s.basis()) out += to_bit_string(r, s.ambient_dim()) + "\n";
  return out;
}

std::vector<ManifestEntry> parse_manifest(std::string_view text, const std::filesystem::path& base_dir) {
  std::vector<ManifestEntry> out;
  for (auto line : non_empty_lines(text)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream in(line);
    std::string rho, theta, key, extra;
    if (!(in >> rho)) continue;
    if (!(in >> theta >> key) || (in >> extra)) {
      throw ParseError("manifest lines must read 'rho_path theta_path key': " + line);
    }
    auto resolve = [&](const std::string& p) {
      std::filesystem::path path(p);
      return path.is_absolute() ? path : base_dir / path;
    };
    out.push_back({resolve(rho), resolve(theta), parse_decimal(key)});
  }
  if (out.empty()) throw ParseError("manifest lists no rounds");
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Permutation parse_permutation_file(const std::filesystem::path& path) { return parse_permutation(read_file(path)); }
Gf2Matrix parse_matrix_file(const std::filesystem::path& path) { return parse_matrix(read_file(path)); }
Subspace parse_subspace_file(const std::filesystem::path& path) { return parse_subspace(read_file(path)); }

std::vector<ManifestEntry> parse_manifest_file(const std::filesystem::path& path) {
  return parse_manifest(read_file(path), path.parent_path());
}

}  // namespace lmprim::io
