#pragma once

// Round operators of Substitution Permutation Networks and Lai-Massey
// schemes, and the generator sets of the groups they generate.
//
// A Lai-Massey state (x, y) in V x V, V = F2^n, is coded as x * 2^n + y,
// so translating by (v, w) is XOR with the code of (v, w).

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lmprim/gf2.hpp"
#include "lmprim/permgroup.hpp"

namespace lmprim {

/// Largest half dimension accepted by the lifts (states then have 2^14 points).
inline constexpr unsigned kMaxHalfDim = 7;

class PairCoding {
 public:
  explicit PairCoding(unsigned half_dim);

  [[nodiscard]] unsigned half_dim() const noexcept { return half_dim_; }
  [[nodiscard]] Code encode(Code x, Code y) const noexcept { return (x << half_dim_) | y; }
  [[nodiscard]] std::pair<Code, Code> decode(Code state) const noexcept {
    return {state >> half_dim_, state & low_mask_};
  }

 private:
  unsigned half_dim_;
  Code low_mask_;
};

/// (x, y) -> (x + y, y + (x + y)rho). Bijective for any map rho, so the
/// table overload accepts arbitrary functions V -> V.
Permutation lift_rho_bar(std::span<const Code> rho_table);
Permutation lift_rho_bar(const Permutation& rho);

/// (x, y) -> (x + y + x rho, y + x rho). Uses rho only in the forward direction.
Permutation lift_rho_bar_inverse(std::span<const Code> rho_table);
Permutation lift_rho_bar_inverse(const Permutation& rho);

/// (x, y) -> ((x + y)theta, y): the block matrix (theta 0; theta 1) acting on row vectors.
Permutation lift_theta_bar(const Gf2Matrix& theta);
/// (x, y) -> (x theta^-1 + y, y).
Permutation lift_theta_bar_inverse(const Gf2Matrix& theta);

struct LmRoundDescriptor {
  Permutation rho;
  Gf2Matrix theta;
  Code round_key = 0;
};

/// rho_bar, then theta_bar, then the translation by (k theta, k). The result
/// is checked pointwise against (x, y) -> ((x + (x+y)rho + k)theta, y + (x+y)rho + k)
/// and a ConsistencyError is raised on any mismatch. Throws
/// SingularMatrixError for a singular theta; a rho in AGL(V) is accepted.
Permutation lm_round(const LmRoundDescriptor& d);

/// theta_bar^-1, then rho_bar^-1, then the translation by (k, k).
Permutation lm_round_inverse(const LmRoundDescriptor& d);

/// Table-level variants: rho may be any map V -> V, bijective or not.
Permutation lm_round(std::span<const Code> rho_table, const Gf2Matrix& theta, Code round_key);
Permutation lm_round_inverse(std::span<const Code> rho_table, const Gf2Matrix& theta, Code round_key);

/// The classical closed form of one round, evaluated on a single state.
std::pair<Code, Code> lm_round_closed_form(std::span<const Code> rho_table, const Gf2Matrix& theta, Code round_key,
                                           Code x, Code y);

/// x -> x rho + k.
Permutation spn_round(const Permutation& rho, Gf2Vector key);

enum class GroupKind { spn, lm_rho_only, lm_full, multi_round };

std::string_view to_string(GroupKind kind) noexcept;

struct RoundComponents {
  Permutation rho;
  Gf2Matrix theta;
};

/// Generator sets, translations always included:
///   spn          <rho, T_n>
///   lm_rho_only  <rho_bar, T_2n>
///   lm_full      <rho_bar, theta_bar, T_2n>
///   multi_round  <rho_bar_i, theta_bar_i, T_2n : all i>
/// spn, lm_rho_only and lm_full use only the first entry of `parts`.
GroupSpec group_generators(GroupKind kind, std::span<const RoundComponents> parts);

GroupSpec spn_group(const Permutation& rho);
GroupSpec lm_rho_only_group(const Permutation& rho);
GroupSpec lm_full_group(const Permutation& rho, const Gf2Matrix& theta);

}  // namespace lmprim
