#include "lmprim/scheme.hpp"

#include <bit>

#include "lmprim/errors.hpp"

namespace lmprim {

namespace {

unsigned half_dim_of_table(std::span<const Code> table) {
  const std::size_t size = table.size();
  if (size == 0 || !std::has_single_bit(size)) throw DimensionError("rho table length must be a power of two");
  const auto n = static_cast<unsigned>(std::countr_zero(size));
  if (n > kMaxHalfDim) {
    throw DimensionError("degree overflow: lifting F2^" + std::to_string(n) + " would exceed 2^" +
                         std::to_string(2 * kMaxHalfDim) + " states");
  }
  for (Code v : table) {
    if (v >= size) throw DimensionError("rho table value outside F2^" + std::to_string(n));
  }
  return n;
}

unsigned half_dim_of_matrix(const Gf2Matrix& theta) {
  if (theta.dim() > kMaxHalfDim) throw DimensionError("degree overflow: theta dimension too large");
  if (!theta.is_invertible()) throw SingularMatrixError("theta is singular: not in GL(V)");
  return theta.dim();
}

template <typename Fn>
Permutation tabulate_pairs(unsigned n, Fn&& fn) {
  const PairCoding coding(n);
  std::vector<Code> images(std::size_t{1} << (2 * n));
  for (Code x = 0; x < (Code{1} << n); ++x) {
    for (Code y = 0; y < (Code{1} << n); ++y) {
      const auto [u, v] = fn(x, y);
      images[coding.encode(x, y)] = coding.encode(u, v);
    }
  }
  return Permutation(std::move(images));
}

Permutation pair_translation(unsigned n, Code v, Code w) {
  return translation(2 * n, Gf2Vector(2 * n, PairCoding(n).encode(v, w)));
}

void check_key(unsigned n, Code key) {
  if (n < 32 && (key >> n) != 0) throw DimensionError("round key does not lie in F2^" + std::to_string(n));
}

}  // namespace

PairCoding::PairCoding(unsigned half_dim) : half_dim_(half_dim), low_mask_((Code{1} << half_dim) - 1U) {
  if (half_dim == 0 || half_dim > kMaxAmbientDim / 2) throw DimensionError("unsupported half dimension");
}

Permutation lift_rho_bar(std::span<const Code> rho) {
  const unsigned n = half_dim_of_table(rho);
  return tabulate_pairs(n, [&](Code x, Code y) {
    const Code s = x ^ y;
    return std::pair{s, y ^ rho[s]};
  });
}

Permutation lift_rho_bar(const Permutation& rho) { return lift_rho_bar(rho.images()); }

Permutation lift_rho_bar_inverse(std::span<const Code> rho) {
  const unsigned n = half_dim_of_table(rho);
  return tabulate_pairs(n, [&](Code x, Code y) {
    const Code t = rho[x];
    return std::pair{x ^ y ^ t, y ^ t};
  });
}

Permutation lift_rho_bar_inverse(const Permutation& rho) { return lift_rho_bar_inverse(rho.images()); }

Permutation lift_theta_bar(const Gf2Matrix& theta) {
  const unsigned n = half_dim_of_matrix(theta);
  return tabulate_pairs(n, [&](Code x, Code y) { return std::pair{theta.apply(x ^ y), y}; });
}

Permutation lift_theta_bar_inverse(const Gf2Matrix& theta) {
  const unsigned n = half_dim_of_matrix(theta);
  const Gf2Matrix inv = matrix_inverse(theta);
  return tabulate_pairs(n, [&](Code x, Code y) { return std::pair{inv.apply(x) ^ y, y}; });
}

std::pair<Code, Code> lm_round_closed_form(std::span<const Code> rho, const Gf2Matrix& theta, Code k, Code x,
                                           Code y) {
  const Code mix = rho[x ^ y] ^ k;
  return {theta.apply(x ^ mix), y ^ mix};
}

Permutation lm_round(std::span<const Code> rho, const Gf2Matrix& theta, Code k) {
  const unsigned n = half_dim_of_table(rho);
  if (theta.dim() != n) throw DimensionError("rho and theta act on different spaces");
  check_key(n, k);
  Permutation round =
      compose(compose(lift_rho_bar(rho), lift_theta_bar(theta)), pair_translation(n, theta.apply(k), k));
  const PairCoding coding(n);
  for (Code x = 0; x < (Code{1} << n); ++x) {
    for (Code y = 0; y < (Code{1} << n); ++y) {
      const auto [u, v] = lm_round_closed_form(rho, theta, k, x, y);
      if (round(coding.encode(x, y)) != coding.encode(u, v)) {
        throw ConsistencyError("composed Lai-Massey round disagrees with the closed form");
      }
    }
  }
  return round;
}

Permutation lm_round_inverse(std::span<const Code> rho, const Gf2Matrix& theta, Code k) {
  const unsigned n = half_dim_of_table(rho);
  if (theta.dim() != n) throw DimensionError("rho and theta act on different spaces");
  check_key(n, k);
  return compose(compose(lift_theta_bar_inverse(theta), lift_rho_bar_inverse(rho)), pair_translation(n, k, k));
}

Permutation lm_round(const LmRoundDescriptor& d) { return lm_round(d.rho.images(), d.theta, d.round_key); }

Permutation lm_round_inverse(const LmRoundDescriptor& d) {
  return lm_round_inverse(d.rho.images(), d.theta, d.round_key);
}

Permutation spn_round(const Permutation& rho, Gf2Vector key) {
  if (key.ambient_dim() != rho.degree_log()) throw DimensionError("round key and S-box act on different spaces");
  return compose(rho, translation(rho.degree_log(), key));
}

std::string_view to_string(GroupKind kind) noexcept {
  switch (kind) {
    case GroupKind::spn: return "spn";
    case GroupKind::lm_rho_only: return "lm_rho_only";
    case GroupKind::lm_full: return "lm_full";
    case GroupKind::multi_round: return "multi_round";
  }
  return "unknown";
}

GroupSpec group_generators(GroupKind kind, std::span<const RoundComponents> parts) {
  if (parts.empty()) throw PreconditionError("group_generators needs at least one round description");
  const unsigned n = parts.front().rho.degree_log();
  for (const auto& p : parts) {
    if (p.rho.degree_log() != n || p.theta.dim() != n) throw DimensionError("round components act on different spaces");
  }
  const std::string nstr = std::to_string(n);
  switch (kind) {
    case GroupKind::spn:
      return GroupSpec(n, {parts.front().rho}, true, "<rho, T_" + nstr + ">");
    case GroupKind::lm_rho_only:
      return GroupSpec(2 * n, {lift_rho_bar(parts.front().rho)}, true, "<rho_bar, T_" + std::to_string(2 * n) + ">");
    case GroupKind::lm_full:
      return GroupSpec(2 * n, {lift_rho_bar(parts.front().rho), lift_theta_bar(parts.front().theta)}, true,
                       "<rho_bar, theta_bar, T_" + std::to_string(2 * n) + ">");
    case GroupKind::multi_round: {
      std::vector<Permutation> gens;
      for (const auto& p : parts) {
        gens.push_back(lift_rho_bar(p.rho));
        gens.push_back(lift_theta_bar(p.theta));
      }
      return GroupSpec(2 * n, std::move(gens), true,
                       "<rho_bar_i, theta_bar_i, T_" + std::to_string(2 * n) + " : " +
                           std::to_string(parts.size()) + " rounds>");
    }
  }
  throw PreconditionError("unknown group kind");
}

GroupSpec spn_group(const Permutation& rho) {
  return GroupSpec(rho.degree_log(), {rho}, true, "<rho, T_" + std::to_string(rho.degree_log()) + ">");
}

GroupSpec lm_rho_only_group(const Permutation& rho) {
  const RoundComponents parts[] = {{rho, Gf2Matrix::identity(rho.degree_log())}};
  return group_generators(GroupKind::lm_rho_only, parts);
}

GroupSpec lm_full_group(const Permutation& rho, const Gf2Matrix& theta) {
  const RoundComponents parts[] = {{rho, theta}};
  return group_generators(GroupKind::lm_full, parts);
}

}  // namespace lmprim
