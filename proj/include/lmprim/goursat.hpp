#pragma once

// Goursat decomposition of subspaces of V x V, V = F2^n, and the checks of
// the linear-block conditions on such decompositions.
//
// Every subgroup of the elementary abelian group V x V is a subspace, and
// can be written U = {(a, a phi + d) : a in A, d in D} where A and C are the
// projections of U, B = {a : (a, 0) in U}, D = {c : (0, c) in U} and phi is
// a linear map A -> C inducing A/B ~ C/D.

#include <string>
#include <vector>

#include "lmprim/gf2.hpp"
#include "lmprim/permgroup.hpp"

namespace lmprim {

struct GoursatTriple {
  unsigned half_dim;
  Subspace a, b, c, d;
  /// phi of each basis row of `a` (same order), reduced modulo `d`.
  std::vector<Code> phi_images;

  /// phi(x) for x in A; throws PreconditionError when x is not in A.
  [[nodiscard]] Code phi(Code x) const;

  /// Empty string when every structural invariant holds, otherwise a
  /// description of the first violation.
  [[nodiscard]] std::string invariant_violation() const;
};

/// Throws DimensionError for an odd ambient dimension.
GoursatTriple goursat_decompose(const Subspace& u);

/// Throws PreconditionError when the triple violates its invariants.
Subspace goursat_reconstruct(const GoursatTriple& t);

struct LemmaConditions {
  bool d_le_a = false;
  bool aphi_le_a = false;
  /// phi is only defined on A, so this is reported false when D is not in A.
  bool dphi_le_d = false;

  [[nodiscard]] bool all() const noexcept { return d_le_a && aphi_le_a && dphi_le_d; }
};

LemmaConditions lemma_conditions(const GoursatTriple& t);

struct SurveyOptions {
  unsigned subspace_cap = kDefaultSubspaceCap;
  /// Keep only the records of subspaces that are linear blocks.
  bool linear_blocks_only = false;
};

struct SurveyRecord {
  Subspace u;
  GoursatTriple triple;
  bool is_linear_block = false;
  LemmaConditions conditions;
};

/// Enumerates every subspace U of F2^2n, tests whether U is a linear block
/// for rho_bar and records its decomposition and the three conditions. A
/// linear block with a failing condition raises ConsistencyError.
std::vector<SurveyRecord> linear_block_survey(const Permutation& rho, const SurveyOptions& options = {});

}  // namespace lmprim
