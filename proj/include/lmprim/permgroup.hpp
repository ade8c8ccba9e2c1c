#pragma once

// Permutations of F2^m (as the point set {0, ..., 2^m - 1}), generator-set
// group specifications and the orbit / block-system decisions built on them.
//
// Maps act on the right and products read left to right: compose(f, g)
// applies f first.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lmprim/gf2.hpp"

namespace lmprim {

class Permutation {
 public:
  /// Validates that `images` is a bijection of [0, 2^m). Throws
  /// DimensionError for a length that is not a power of two and
  /// PreconditionError for a non-bijective table.
  explicit Permutation(std::vector<Code> images);

  static Permutation identity(unsigned degree_log);

  [[nodiscard]] unsigned degree_log() const noexcept { return degree_log_; }
  [[nodiscard]] std::size_t degree() const noexcept { return images_.size(); }
  [[nodiscard]] std::span<const Code> images() const noexcept { return images_; }
  [[nodiscard]] Code operator()(Code x) const noexcept { return images_[x]; }
  [[nodiscard]] bool is_identity() const noexcept;

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  struct Trusted {};
  Permutation(Trusted, unsigned degree_log, std::vector<Code> images)
      : degree_log_(degree_log), images_(std::move(images)) {}
  friend Permutation compose(const Permutation&, const Permutation&);
  friend Permutation inverse(const Permutation&);
  friend Permutation translation(unsigned, Gf2Vector);

  unsigned degree_log_;
  std::vector<Code> images_;
};

/// x -> x + v.
Permutation translation(unsigned m, Gf2Vector v);
/// Apply f, then g.
Permutation compose(const Permutation& f, const Permutation& g);
Permutation inverse(const Permutation& f);

inline Linearity classify_permutation_linearity(const Permutation& f) {
  return classify_map_linearity(f.images());
}

/// Generators of a permutation group on F2^m.
class GroupSpec {
 public:
  /// When `includes_full_translations` is set, the m basis translations
  /// are appended to `generators` unless already present.
  GroupSpec(unsigned degree_log, std::vector<Permutation> generators, bool includes_full_translations,
            std::string label = {});

  [[nodiscard]] unsigned degree_log() const noexcept { return degree_log_; }
  [[nodiscard]] std::size_t degree() const noexcept { return std::size_t{1} << degree_log_; }
  [[nodiscard]] std::span<const Permutation> generators() const noexcept { return generators_; }
  [[nodiscard]] bool includes_full_translations() const noexcept { return includes_full_translations_; }
  [[nodiscard]] const std::string& label() const noexcept { return label_; }

  /// Generators that are not translations (the only ones that can break a
  /// coset partition).
  [[nodiscard]] std::vector<const Permutation*> non_translation_generators() const;

 private:
  unsigned degree_log_;
  std::vector<Permutation> generators_;
  bool includes_full_translations_;
  std::string label_;
};

struct BlockSystem {
  enum class Kind { subspace_cosets, explicit_partition };

  Kind kind = Kind::explicit_partition;
  std::optional<Subspace> subspace;
  /// Point -> class index; classes are numbered by first occurrence.
  std::optional<std::vector<std::size_t>> classes;
  std::size_t block_size = 0;
  std::size_t block_count = 0;

  static BlockSystem from_subspace(const Subspace& u);
  static BlockSystem from_classes(std::vector<std::size_t> classes);

  /// Class index of every point; computed from the subspace when needed.
  [[nodiscard]] std::vector<std::size_t> class_table() const;
};

struct PrimitivityOptions {
  bool find_all = false;
  unsigned workers = 1;
  unsigned subspace_cap = kDefaultSubspaceCap;
};

struct PrimitivityResult {
  /// First block system in canonical order, if any.
  std::optional<BlockSystem> block_system;
  /// Every invariant subspace partition (only filled when find_all is set).
  std::vector<BlockSystem> all_block_systems;
  std::size_t candidates_examined = 0;
  std::size_t candidates_refuted = 0;

  [[nodiscard]] bool is_primitive() const noexcept { return !block_system.has_value(); }
};

/// Default ceiling on m for the ordered-pair orbit computation.
inline constexpr unsigned kDefaultPairOrbitCap = 14;

/// Orbit of 0 under the generators and their inverses.
std::vector<Code> orbit_of_zero(const GroupSpec& spec);
bool is_transitive(const GroupSpec& spec);
/// Orbit of the ordered pair (0, 1) must cover all 2^m (2^m - 1) pairs.
bool is_2_transitive(const GroupSpec& spec, unsigned cap = kDefaultPairOrbitCap);

/// True iff f maps every coset U + v onto the coset U + f(v).
bool coset_partition_invariant(const Subspace& u, const Permutation& f);

/// Primitivity of a group that contains the full translation group: any
/// block system is a coset partition of a proper nontrivial subspace, so
/// only those candidates are tested. Throws PreconditionError when the spec
/// does not include the translations.
PrimitivityResult primitivity_by_subspaces(const GroupSpec& spec, const PrimitivityOptions& options = {});

/// Generic minimal-block search for any transitive group: for each
/// beta != 0, the finest invariant partition joining 0 and beta. Throws
/// PreconditionError for intransitive input.
PrimitivityResult atkinson_block_search(const GroupSpec& spec);

/// True iff every generator maps every block of `blocks` onto a block.
bool verify_block_system(const GroupSpec& spec, const BlockSystem& blocks);

}  // namespace lmprim
