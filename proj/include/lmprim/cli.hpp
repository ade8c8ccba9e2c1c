#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lmprim/gf2.hpp"

namespace lmprim::cli {

/// Exit status when a search or theorem check finds counterexamples.
inline constexpr int kExitCounterexample = 2;

struct CommandConfig {
  std::string command;

  std::optional<std::filesystem::path> rho_path;
  std::vector<std::filesystem::path> theta_paths;
  std::optional<std::filesystem::path> subspace_path;
  std::optional<std::filesystem::path> manifest_path;
  std::optional<std::filesystem::path> json_path;
  std::optional<std::filesystem::path> checkpoint_path;

  /// analyze / attack: spn, lm-rho-only, lm-full, multi-round.
  std::string mode = "spn";
  /// lift: rho or theta.
  std::string lift_target = "rho";
  bool inverse = false;
  bool spn_round = false;
  std::vector<Code> keys;
  std::vector<std::string> eval_points;

  bool find_all = false;
  bool all_thetas = false;
  bool linear_blocks_only = false;
  bool no_timestamp = false;

  std::optional<unsigned> n;
  std::string property = "primitivity";
  std::string scope = "zero-fixing";
  unsigned workers = 1;
  std::optional<std::uint64_t> sample_budget;
  std::uint64_t seed = 1;
  std::size_t theta_sweep = 100;
  std::size_t theta_sample = 16;
  std::size_t checkpoint_interval = 500;
  unsigned subspace_cap = kDefaultSubspaceCap;
};

/// Default worker count: $LMPRIM_WORKERS when set to a positive integer, else 1.
unsigned default_workers();

/// Runs one command. Returns 0 on success, kExitCounterexample when a search
/// or theorem check finds a counterexample; throws on malformed input.
int dispatch(const CommandConfig& config, std::ostream& out);

/// Parses argv and dispatches; errors are reported on `err` with exit 1.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lmprim::cli
