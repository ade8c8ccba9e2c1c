#include "lmprim/goursat.hpp"

#include "lmprim/errors.hpp"
#include "lmprim/scheme.hpp"

namespace lmprim {

namespace {

unsigned rank_modulo(std::span<const Code> vectors, const Subspace& modulus) {
  std::vector<Code> reduced;
  reduced.reserve(vectors.size());
  for (Code v : vectors) reduced.push_back(modulus.reduce(v));
  return subspace_from_codes(modulus.ambient_dim(), reduced).dim();
}

}  // namespace

Code GoursatTriple::phi(Code x) const {
  Code image = 0;
  const auto rows = a.basis();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if ((x & Subspace::leading_bit(rows[i])) != 0U) {
      x ^= rows[i];
      image ^= phi_images[i];
    }
  }
  if (x != 0) throw PreconditionError("phi is only defined on A");
  return image;
}

std::string GoursatTriple::invariant_violation() const {
  for (const Subspace* s : {&a, &b, &c, &d}) {
    if (s->ambient_dim() != half_dim) return "component subspace is not in F2^" + std::to_string(half_dim);
  }
  if (phi_images.size() != a.dim()) return "phi needs one image per basis vector of A";
  if (!b.is_subspace_of(a)) return "B is not contained in A";
  if (!d.is_subspace_of(c)) return "D is not contained in C";
  for (Code img : phi_images) {
    if (!c.contains_code(img)) return "phi maps outside C";
  }
  for (Code row : b.basis()) {
    if (!d.contains_code(phi(row))) return "phi(B) is not contained in D";
  }
  if (a.dim() - b.dim() != c.dim() - d.dim()) return "dim A/B differs from dim C/D";
  // phi(B) <= D plus rank(phi(A) mod D) = dim A/B forces ker = B, and
  // equal quotient dimensions then force the induced map to be onto C/D.
  if (rank_modulo(phi_images, d) != a.dim() - b.dim()) return "phi does not induce an isomorphism A/B -> C/D";
  return {};
}

GoursatTriple goursat_decompose(const Subspace& u) {
  const unsigned total = u.ambient_dim();
  if (total % 2 != 0 || total == 0) throw DimensionError("Goursat decomposition needs an even ambient dimension");
  const unsigned n = total / 2;
  const PairCoding coding(n);

  std::vector<Code> highs, lows, low_only, swapped;
  for (Code row : u.basis()) {
    const auto [hi, lo] = coding.decode(row);
    lows.push_back(lo);
    if (hi != 0) {
      highs.push_back(hi);
    } else {
      low_only.push_back(lo);
    }
    swapped.push_back(coding.encode(lo, hi));
  }

  Subspace d = subspace_from_codes(n, low_only);
  // In the half-swapped space, rows whose pivot lies in the low half are
  // exactly the elements (a, 0) of U.
  const Subspace swapped_u = subspace_from_codes(total, swapped);
  std::vector<Code> high_only;
  for (Code row : swapped_u.basis()) {
    const auto [lo, hi] = coding.decode(row);
    if (lo == 0) high_only.push_back(hi);
  }

  GoursatTriple t{n, subspace_from_codes(n, highs), subspace_from_codes(n, high_only), subspace_from_codes(n, lows),
                  std::move(d), {}};

  // Rows of U with a high pivot restrict to an RREF basis of A; pick phi(a)
  // from the matching combination of those rows, reduced modulo D.
  std::vector<std::pair<Code, Code>> high_rows;
  for (Code row : u.basis()) {
    const auto pr = coding.decode(row);
    if (pr.first != 0) high_rows.push_back(pr);
  }
  for (Code a_row : t.a.basis()) {
    Code x = a_row;
    Code image = 0;
    for (const auto& [hi, lo] : high_rows) {
      if ((x & Subspace::leading_bit(hi)) != 0U) {
        x ^= hi;
        image ^= lo;
      }
    }
    if (x != 0) throw ConsistencyError("projection of U does not span A");
    t.phi_images.push_back(t.d.reduce(image));
  }
  return t;
}

Subspace goursat_reconstruct(const GoursatTriple& t) {
  if (auto why = t.invariant_violation(); !why.empty()) throw PreconditionError("invalid Goursat triple: " + why);
  const PairCoding coding(t.half_dim);
  std::vector<Code> gens;
  const auto a_rows = t.a.basis();
  for (std::size_t i = 0; i < a_rows.size(); ++i) gens.push_back(coding.encode(a_rows[i], t.phi_images[i]));
  for (Code d_row : t.d.basis()) gens.push_back(coding.encode(0, d_row));
  return subspace_from_codes(2 * t.half_dim, gens);
}

LemmaConditions lemma_conditions(const GoursatTriple& t) {
  LemmaConditions out;
  out.d_le_a = t.d.is_subspace_of(t.a);
  out.aphi_le_a = true;
  for (Code img : t.phi_images) out.aphi_le_a = out.aphi_le_a && t.a.contains_code(img);
  if (out.d_le_a) {
    out.dphi_le_d = true;
    for (Code row : t.d.basis()) out.dphi_le_d = out.dphi_le_d && t.d.contains_code(t.phi(row));
  }
  return out;
}

std::vector<SurveyRecord> linear_block_survey(const Permutation& rho, const SurveyOptions& options) {
  const unsigned m = 2 * rho.degree_log();
  const Permutation rho_bar = lift_rho_bar(rho);
  std::vector<SurveyRecord> out;
  for_each_subspace(m, {.proper_nontrivial_only = false, .cap = options.subspace_cap}, [&](const Subspace& u) {
    SurveyRecord rec{u, goursat_decompose(u), coset_partition_invariant(u, rho_bar), {}};
    rec.conditions = lemma_conditions(rec.triple);
    if (rec.is_linear_block && !rec.conditions.all()) {
      std::string basis;
      for (Code r : u.basis()) basis += to_bit_string(r, m) + " ";
      throw ConsistencyError("linear block violates the Goursat conditions: U = { " + basis + "}");
    }
    if (rec.is_linear_block || !options.linear_blocks_only) out.push_back(std::move(rec));
    return true;
  });
  return out;
}

}  // namespace lmprim
