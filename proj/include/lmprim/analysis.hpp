#pragma once

// Experiments on top of the group machinery: per-instance checks of the
// implication "<rho, T_n> primitive => Lai-Massey group primitive", the
// exhaustive search over S-boxes of F2^n, and imprimitivity-attack reports.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lmprim/gf2.hpp"
#include "lmprim/permgroup.hpp"

namespace lmprim {

struct GroupVerdict {
  bool primitive = false;
  std::optional<BlockSystem> block_system;
  std::size_t candidates_refuted = 0;
};

struct ReductionReport {
  unsigned n = 0;
  std::string rho_id;
  std::string theta_id;
  /// Set when the instance was not analysed (rho in AGL(V)).
  std::optional<std::string> skipped_reason;
  GroupVerdict spn;
  GroupVerdict lm_rho_only;
  GroupVerdict lm_full;
  /// NOT (spn primitive AND lm_full imprimitive).
  bool consistent_with_theorem = true;
  /// Also fails when <rho_bar, T_2n> is imprimitive under a primitive SPN group.
  bool rho_only_consistent = true;
  /// Block system of the first imprimitive group among lm_full, lm_rho_only, spn.
  std::optional<BlockSystem> witness;
};

/// Decimal image table, space separated.
std::string permutation_id(const Permutation& p);
/// Matrix rows as bit strings, comma separated.
std::string matrix_id(const Gf2Matrix& m);

/// One report per theta. Throws CapExceededError when 2n exceeds the cap.
std::vector<ReductionReport> verify_reduction(const Permutation& rho, std::span<const Gf2Matrix> thetas,
                                              unsigned workers = 1, unsigned subspace_cap = kDefaultSubspaceCap);

enum class SearchProperty { primitivity_reduction, two_transitivity_reduction };
enum class SearchScope { zero_fixing, all };

std::string_view to_string(SearchProperty p) noexcept;
std::string_view to_string(SearchScope s) noexcept;

struct SearchConfig {
  unsigned n = 3;
  SearchProperty property = SearchProperty::primitivity_reduction;
  SearchScope scope = SearchScope::zero_fixing;
  /// Random sample size; required for n >= 4, where full enumeration is out of reach.
  std::optional<std::uint64_t> sample_budget;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  /// Number of rho receiving the full theta sweep (primitivity only).
  std::size_t theta_sweep_rhos = 100;
  /// Thetas per swept rho when GL(n, 2) is too large to sweep entirely (n >= 4).
  std::size_t theta_sample = 16;
  std::optional<std::filesystem::path> checkpoint;
  std::size_t checkpoint_interval = 500;
  unsigned subspace_cap = kDefaultSubspaceCap;
};

struct Counterexample {
  std::uint64_t candidate_index = 0;
  std::vector<Code> rho;
  std::string detail;

  friend bool operator==(const Counterexample&, const Counterexample&) = default;
};

struct WorkerStats {
  unsigned worker = 0;
  std::size_t chunks = 0;
  std::uint64_t candidates = 0;
  double busy_seconds = 0.0;
};

struct ThetaSweepSummary {
  std::size_t rhos_sampled = 0;
  std::size_t thetas_per_rho = 0;
  std::uint64_t groups_tested = 0;
  std::uint64_t groups_primitive = 0;
};

struct SearchReport {
  unsigned n = 0;
  SearchScope scope = SearchScope::zero_fixing;
  SearchProperty property = SearchProperty::primitivity_reduction;
  std::string filter_description;
  std::string property_description;
  std::uint64_t scope_size = 0;
  std::uint64_t scanned = 0;
  std::uint64_t skipped_affine = 0;
  std::uint64_t filtered = 0;
  std::uint64_t tested = 0;
  std::vector<Counterexample> counterexamples;
  std::optional<ThetaSweepSummary> theta_sweep;
  /// First candidate index processed in this run (non-zero after a resume).
  std::uint64_t resumed_at = 0;
  double elapsed_seconds = 0.0;
  std::vector<WorkerStats> worker_stats;
};

/// Number of candidates in a full enumeration of the scope.
std::uint64_t scope_size(unsigned n, SearchScope scope);

/// The candidate with the given index: lexicographic order of image tables
/// for full scans, a seeded shuffle for sampled scans.
std::vector<Code> search_candidate(const SearchConfig& config, std::uint64_t index);

/// Throws PreconditionError for n >= 4 without a sampling budget.
SearchReport exhaustive_search(const SearchConfig& config);

struct AttackReport {
  std::string label;
  unsigned degree_log = 0;
  bool primitive = false;
  std::vector<BlockSystem> block_systems;
  std::size_t candidates_examined = 0;
  std::size_t candidates_refuted = 0;
};

/// Every invariant coset partition of a translation-containing group.
AttackReport imprimitivity_attack_report(const GroupSpec& spec, unsigned subspace_cap = kDefaultSubspaceCap);

}  // namespace lmprim
