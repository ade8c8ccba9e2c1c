#pragma once

// Random group specifications for cross-checking the two primitivity tests.

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "lmprim/gf2.hpp"
#include "lmprim/permgroup.hpp"
#include "lmprim/scheme.hpp"
#include "oracles.hpp"

namespace fixture {

using lmprim::Code;

/// A random permutation of F2^m mapping every coset of `u` onto a coset.
inline lmprim::Permutation coset_preserving_permutation(const lmprim::Subspace& u, std::mt19937_64& rng) {
  const std::size_t n = std::size_t{1} << u.ambient_dim();
  std::vector<Code> reps;
  for (Code x = 0; x < n; ++x) {
    if (u.reduce(x) == x) reps.push_back(x);
  }
  std::vector<Code> targets = reps;
  std::shuffle(targets.begin(), targets.end(), rng);
  const std::vector<Code> elems = u.elements();
  std::vector<Code> images(n);
  for (std::size_t i = 0; i < reps.size(); ++i) {
    std::vector<Code> shuffled = elems;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    for (std::size_t j = 0; j < elems.size(); ++j) images[reps[i] ^ elems[j]] = targets[i] ^ shuffled[j];
  }
  return lmprim::Permutation(std::move(images));
}

inline lmprim::Subspace random_proper_subspace(unsigned m, std::mt19937_64& rng) {
  std::uniform_int_distribution<Code> dist(1, (Code{1} << m) - 1);
  for (;;) {
    std::vector<Code> gens(1 + rng() % (m - 1));
    for (auto& g : gens) g = dist(rng);
    auto s = lmprim::subspace_from_codes(m, gens);
    if (!s.is_zero() && !s.is_full()) return s;
  }
}

/// Alternates between mostly-primitive and known-imprimitive constructions;
/// every spec contains the translations of F2^m.
inline lmprim::GroupSpec random_translation_spec(unsigned m, std::mt19937_64& rng, int variant) {
  using lmprim::Permutation;
  switch (variant % 4) {
    case 0:
      // Every permutation of F2^2 is affine.
      if (m <= 2) return {m, {Permutation(oracle::random_permutation(std::size_t{1} << m, rng))}, true, "random"};
      return {m, {Permutation(oracle::random_nonaffine(m, rng))}, true, "random"};
    case 1: {
      const auto u = random_proper_subspace(m, rng);
      return {m, {coset_preserving_permutation(u, rng), coset_preserving_permutation(u, rng)}, true, "coset"};
    }
    case 2: {
      const lmprim::Gf2Matrix a(m, oracle::random_invertible_rows(m, rng));
      std::vector<Code> t(std::size_t{1} << m);
      for (Code x = 0; x < t.size(); ++x) t[x] = a.apply(x);
      return {m, {Permutation(std::move(t))}, true, "linear"};
    }
    default:
      if (m % 2 == 0 && m >= 6) {
        return lmprim::lm_rho_only_group(Permutation(oracle::random_nonaffine(m / 2, rng)));
      }
      return {m, {Permutation(oracle::random_permutation(std::size_t{1} << m, rng))}, true, "random"};
  }
}

}  // namespace fixture
