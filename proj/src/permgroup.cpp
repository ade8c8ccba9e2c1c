#include "lmprim/permgroup.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <map>
#include <numeric>
#include <thread>

#include "lmprim/errors.hpp"

namespace lmprim {

// -------------------------------------------------------------- Permutation

Permutation::Permutation(std::vector<Code> images) : images_(std::move(images)) {
  const std::size_t n = images_.size();
  if (n == 0 || !std::has_single_bit(n)) {
    throw DimensionError("bad degree: permutation table length " + std::to_string(n) + " is not a power of two");
  }
  degree_log_ = static_cast<unsigned>(std::countr_zero(n));
  if (degree_log_ > kMaxAmbientDim) throw DimensionError("bad degree: permutation too large");
  std::vector<bool> seen(n, false);
  for (Code v : images_) {
    if (v >= n || seen[v]) throw PreconditionError("not a permutation: image table is not a bijection");
    seen[v] = true;
  }
}

Permutation Permutation::identity(unsigned degree_log) {
  if (degree_log > kMaxAmbientDim) throw DimensionError("bad degree: permutation too large");
  std::vector<Code> images(std::size_t{1} << degree_log);
  std::iota(images.begin(), images.end(), Code{0});
  return {Trusted{}, degree_log, std::move(images)};
}

bool Permutation::is_identity() const noexcept {
  for (std::size_t x = 0; x < images_.size(); ++x) {
    if (images_[x] != x) return false;
  }
  return true;
}

Permutation translation(unsigned m, Gf2Vector v) {
  if (v.ambient_dim() != m) throw DimensionError("translation vector does not lie in F2^" + std::to_string(m));
  std::vector<Code> images(std::size_t{1} << m);
  for (std::size_t x = 0; x < images.size(); ++x) images[x] = static_cast<Code>(x) ^ v.code();
  return {Permutation::Trusted{}, m, std::move(images)};
}

Permutation compose(const Permutation& f, const Permutation& g) {
  if (f.degree_log_ != g.degree_log_) throw DimensionError("composition of permutations of different degree");
  std::vector<Code> images(f.images_.size());
  for (std::size_t x = 0; x < images.size(); ++x) images[x] = g.images_[f.images_[x]];
  return {Permutation::Trusted{}, f.degree_log_, std::move(images)};
}

Permutation inverse(const Permutation& f) {
  std::vector<Code> images(f.images_.size());
  for (std::size_t x = 0; x < images.size(); ++x) images[f.images_[x]] = static_cast<Code>(x);
  return {Permutation::Trusted{}, f.degree_log_, std::move(images)};
}

// ---------------------------------------------------------------- GroupSpec

namespace {

bool is_translation(const Permutation& f) {
  const Code shift = f(0);
  for (std::size_t x = 0; x < f.degree(); ++x) {
    if (f(static_cast<Code>(x)) != (static_cast<Code>(x) ^ shift)) return false;
  }
  return true;
}

// Generators together with their inverses, without duplicates.
std::vector<Permutation> closed_under_inverses(std::span<const Permutation> gens) {
  std::vector<Permutation> out;
  auto add = [&](Permutation p) {
    if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(std::move(p));
  };
  for (const auto& g : gens) {
    add(g);
    add(inverse(g));
  }
  return out;
}

}  // namespace

GroupSpec::GroupSpec(unsigned degree_log, std::vector<Permutation> generators, bool includes_full_translations,
                     std::string label)
    : degree_log_(degree_log),
      generators_(std::move(generators)),
      includes_full_translations_(includes_full_translations),
      label_(std::move(label)) {
  for (const auto& g : generators_) {
    if (g.degree_log() != degree_log_) throw DimensionError("generators of a group spec must share one degree");
  }
  if (includes_full_translations_) {
    for (unsigned i = 0; i < degree_log_; ++i) {
      Permutation t = translation(degree_log_, Gf2Vector(degree_log_, Code{1} << i));
      if (std::find(generators_.begin(), generators_.end(), t) == generators_.end()) {
        generators_.push_back(std::move(t));
      }
    }
  }
  if (generators_.empty()) throw PreconditionError("a group spec needs at least one generator");
}

std::vector<const Permutation*> GroupSpec::non_translation_generators() const {
  std::vector<const Permutation*> out;
  for (const auto& g : generators_) {
    if (!is_translation(g)) out.push_back(&g);
  }
  return out;
}

// -------------------------------------------------------------- BlockSystem

BlockSystem BlockSystem::from_subspace(const Subspace& u) {
  BlockSystem b;
  b.kind = Kind::subspace_cosets;
  b.subspace = u;
  b.block_size = std::size_t{1} << u.dim();
  b.block_count = std::size_t{1} << (u.ambient_dim() - u.dim());
  return b;
}

BlockSystem BlockSystem::from_classes(std::vector<std::size_t> classes) {
  // Renumber by first occurrence.
  std::map<std::size_t, std::size_t> relabel;
  for (auto& c : classes) c = relabel.try_emplace(c, relabel.size()).first->second;
  const std::size_t next = relabel.size();
  BlockSystem b;
  b.kind = Kind::explicit_partition;
  b.block_count = next;
  b.block_size = next == 0 ? 0 : classes.size() / next;
  b.classes = std::move(classes);
  return b;
}

std::vector<std::size_t> BlockSystem::class_table() const {
  if (classes) return *classes;
  const Subspace& u = *subspace;
  const std::size_t n = std::size_t{1} << u.ambient_dim();
  std::vector<std::size_t> reps(n);
  for (std::size_t x = 0; x < n; ++x) reps[x] = u.reduce(static_cast<Code>(x));
  return from_classes(std::move(reps)).classes.value();
}

// ------------------------------------------------------------------- Orbits

std::vector<Code> orbit_of_zero(const GroupSpec& spec) {
  const auto gens = closed_under_inverses(spec.generators());
  std::vector<bool> seen(spec.degree(), false);
  std::vector<Code> orbit{0};
  seen[0] = true;
  for (std::size_t head = 0; head < orbit.size(); ++head) {
    for (const auto& g : gens) {
      const Code y = g(orbit[head]);
      if (!seen[y]) {
        seen[y] = true;
        orbit.push_back(y);
      }
    }
  }
  return orbit;
}

bool is_transitive(const GroupSpec& spec) { return orbit_of_zero(spec).size() == spec.degree(); }

bool is_2_transitive(const GroupSpec& spec, unsigned cap) {
  if (spec.degree_log() > cap) {
    throw CapExceededError("pair-orbit computation refused: degree 2^" + std::to_string(spec.degree_log()) +
                           " exceeds the cap 2^" + std::to_string(cap));
  }
  const std::size_t n = spec.degree();
  if (n < 2) throw PreconditionError("2-transitivity needs at least two points");
  const auto gens = closed_under_inverses(spec.generators());
  const std::size_t target = n * (n - 1);
  std::vector<bool> seen(n * n, false);
  std::vector<std::uint64_t> queue;
  queue.reserve(target);
  queue.push_back(1);  // (0, 1)
  seen[1] = true;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::size_t a = queue[head] / n;
    const std::size_t b = queue[head] % n;
    for (const auto& g : gens) {
      const std::uint64_t key = std::uint64_t{g(static_cast<Code>(a))} * n + g(static_cast<Code>(b));
      if (!seen[key]) {
        seen[key] = true;
        queue.push_back(key);
      }
    }
  }
  return queue.size() == target;
}

// ----------------------------------------------------------- Block systems

bool coset_partition_invariant(const Subspace& u, const Permutation& f) {
  if (u.ambient_dim() != f.degree_log()) throw DimensionError("subspace and permutation live on different spaces");
  const auto basis = u.basis();
  if (basis.empty() || u.is_full()) return true;
  const std::size_t n = f.degree();
  const Code pivots = u.pivot_mask();
  const std::uint64_t coset_size = u.size();
  // Coset representatives are exactly the points with all pivot bits clear.
  for (std::size_t v = 0; v < n; ++v) {
    if ((static_cast<Code>(v) & pivots) != 0U) continue;
    const Code base = f(static_cast<Code>(v));
    Code offset = 0;
    for (std::uint64_t j = 1; j < coset_size; ++j) {
      offset ^= basis[static_cast<unsigned>(std::countr_zero(j))];
      if (!u.contains_code(f(static_cast<Code>(v) ^ offset) ^ base)) return false;
    }
  }
  return true;
}

namespace {

bool invariant_under_all(const Subspace& u, const std::vector<const Permutation*>& gens) {
  return std::all_of(gens.begin(), gens.end(), [&](const Permutation* g) { return coset_partition_invariant(u, *g); });
}

}  // namespace

PrimitivityResult primitivity_by_subspaces(const GroupSpec& spec, const PrimitivityOptions& options) {
  if (!spec.includes_full_translations()) {
    throw PreconditionError("translation subgroup required; use atkinson_block_search");
  }
  PrimitivityResult result;
  const unsigned m = spec.degree_log();
  if (m < 2) {
    // F2^1 has no proper nontrivial subspace.
    return result;
  }
  const auto& candidates = proper_subspace_catalog(m, options.subspace_cap);
  const auto gens = spec.non_translation_generators();

  if (options.find_all) {
    for (const auto& u : candidates) {
      if (invariant_under_all(u, gens)) result.all_block_systems.push_back(BlockSystem::from_subspace(u));
    }
    result.candidates_examined = candidates.size();
    result.candidates_refuted = candidates.size() - result.all_block_systems.size();
    if (!result.all_block_systems.empty()) result.block_system = result.all_block_systems.front();
    return result;
  }

  const std::size_t total = candidates.size();
  std::atomic<std::size_t> best{total};
  auto scan = [&](std::size_t start, std::size_t stride) {
    for (std::size_t i = start; i < total; i += stride) {
      if (i >= best.load(std::memory_order_relaxed)) return;
      if (invariant_under_all(candidates[i], gens)) {
        std::size_t cur = best.load();
        while (i < cur && !best.compare_exchange_weak(cur, i)) {
        }
        return;
      }
    }
  };
  const unsigned workers = std::max(1U, options.workers);
  if (workers == 1) {
    scan(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(scan, w, workers);
  }
  const std::size_t found = best.load();
  if (found < total) {
    result.block_system = BlockSystem::from_subspace(candidates[found]);
    result.candidates_examined = found + 1;
    result.candidates_refuted = found;
  } else {
    result.candidates_examined = total;
    result.candidates_refuted = total;
  }
  return result;
}

PrimitivityResult atkinson_block_search(const GroupSpec& spec) {
  if (!is_transitive(spec)) throw PreconditionError("atkinson_block_search requires a transitive group");
  const std::size_t n = spec.degree();
  const auto gens = spec.generators();
  PrimitivityResult result;
  std::vector<std::size_t> parent(n);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  std::vector<std::pair<Code, Code>> pending;
  for (std::size_t beta = 1; beta < n; ++beta) {
    ++result.candidates_examined;
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    std::size_t classes = n;
    parent[beta] = 0;
    --classes;
    pending.assign(1, {Code{0}, static_cast<Code>(beta)});
    while (!pending.empty() && classes > 1) {
      const auto [a, b] = pending.back();
      pending.pop_back();
      for (const auto& g : gens) {
        const std::size_t ra = find(g(a));
        const std::size_t rb = find(g(b));
        if (ra != rb) {
          parent[std::max(ra, rb)] = std::min(ra, rb);
          --classes;
          pending.emplace_back(g(a), g(b));
        }
      }
    }
    if (classes > 1) {
      std::vector<std::size_t> table(n);
      for (std::size_t x = 0; x < n; ++x) table[x] = find(x);
      result.block_system = BlockSystem::from_classes(std::move(table));
      return result;
    }
    ++result.candidates_refuted;
  }
  return result;
}

bool verify_block_system(const GroupSpec& spec, const BlockSystem& blocks) {
  const auto table = blocks.class_table();
  const std::size_t n = spec.degree();
  if (table.size() != n) return false;
  std::vector<std::size_t> sizes(blocks.block_count, 0);
  for (std::size_t c : table) {
    if (c >= sizes.size()) return false;
    ++sizes[c];
  }
  if (blocks.block_count < 2 || blocks.block_count >= n) return false;
  if (std::any_of(sizes.begin(), sizes.end(), [&](std::size_t s) { return s != blocks.block_size; })) return false;
  // A generator maps each block onto a block iff all images of a block share
  // one class (images of distinct blocks then land in distinct classes).
  for (const auto& g : spec.generators()) {
    std::vector<std::size_t> image_class(blocks.block_count, n);
    for (std::size_t x = 0; x < n; ++x) {
      const std::size_t target = table[g(static_cast<Code>(x))];
      auto& slot = image_class[table[x]];
      if (slot == n) {
        slot = target;
      } else if (slot != target) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace lmprim
