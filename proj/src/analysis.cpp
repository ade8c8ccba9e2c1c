#include "lmprim/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <fstream>
#include <mutex>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include "lmprim/errors.hpp"
#include "lmprim/scheme.hpp"

namespace lmprim {

namespace {

using Clock = std::chrono::steady_clock;

GroupVerdict decide(const GroupSpec& spec, unsigned workers, unsigned cap) {
  const auto r = primitivity_by_subspaces(spec, {.find_all = false, .workers = workers, .subspace_cap = cap});
  return {r.is_primitive(), r.block_system, r.candidates_refuted};
}

std::string describe_block(const BlockSystem& b) {
  if (!b.subspace) return "explicit partition";
  std::string out = "cosets of span{";
  const auto basis = b.subspace->basis();
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (i != 0) out += ",";
    out += to_bit_string(basis[i], b.subspace->ambient_dim());
  }
  return out + "}";
}

// --------------------------------------------------------------- Candidates

std::uint64_t factorial(unsigned k) {
  std::uint64_t f = 1;
  for (unsigned i = 2; i <= k; ++i) f *= i;
  return f;
}

// Permutation of `items` (sorted) with the given lexicographic rank.
void unrank_into(std::vector<Code> items, std::uint64_t rank, std::span<Code> out) {
  for (std::size_t pos = 0; pos < out.size(); ++pos) {
    const std::uint64_t block = factorial(static_cast<unsigned>(items.size() - 1));
    const std::size_t pick = static_cast<std::size_t>(rank / block);
    rank %= block;
    out[pos] = items[pick];
    items.erase(items.begin() + static_cast<std::ptrdiff_t>(pick));
  }
}

std::size_t fixed_prefix(SearchScope scope) { return scope == SearchScope::zero_fixing ? 1 : 0; }

// ---------------------------------------------------------------- Outcomes

enum class Outcome { skipped_affine, filtered, tested };

struct CandidateResult {
  Outcome outcome = Outcome::filtered;
  std::optional<std::string> counterexample;
};

CandidateResult evaluate(std::span<const Code> table, const SearchConfig& config, const Gf2Matrix& identity_theta) {
  CandidateResult out;
  if (classify_map_linearity(table) != Linearity::nonaffine) {
    out.outcome = Outcome::skipped_affine;
    return out;
  }
  const Permutation rho(std::vector<Code>(table.begin(), table.end()));
  if (config.property == SearchProperty::two_transitivity_reduction) {
    if (!is_2_transitive(spn_group(rho))) return out;
    out.outcome = Outcome::tested;
    if (!is_2_transitive(lm_rho_only_group(rho))) {
      out.counterexample = "<rho, T_n> 2-transitive but <rho_bar, T_2n> is not";
    }
    return out;
  }
  if (!decide(spn_group(rho), 1, config.subspace_cap).primitive) return out;
  out.outcome = Outcome::tested;
  const auto rho_only = decide(lm_rho_only_group(rho), 1, config.subspace_cap);
  if (!rho_only.primitive) {
    out.counterexample =
        "<rho, T_n> primitive but <rho_bar, T_2n> has " + describe_block(*rho_only.block_system);
    return out;
  }
  const auto full = decide(lm_full_group(rho, identity_theta), 1, config.subspace_cap);
  if (!full.primitive) {
    out.counterexample = "<rho, T_n> primitive but <rho_bar, theta_bar, T_2n> (theta = I) has " +
                         describe_block(*full.block_system);
  }
  return out;
}

struct Tally {
  std::uint64_t scanned = 0, skipped_affine = 0, filtered = 0, tested = 0;
  std::vector<Counterexample> counterexamples;

  void add(std::uint64_t index, std::span<const Code> table, const CandidateResult& r) {
    ++scanned;
    switch (r.outcome) {
      case Outcome::skipped_affine: ++skipped_affine; break;
      case Outcome::filtered: ++filtered; break;
      case Outcome::tested: ++tested; break;
    }
    if (r.counterexample) {
      counterexamples.push_back({index, std::vector<Code>(table.begin(), table.end()), *r.counterexample});
    }
  }

  void merge(Tally&& other) {
    scanned += other.scanned;
    skipped_affine += other.skipped_affine;
    filtered += other.filtered;
    tested += other.tested;
    for (auto& c : other.counterexamples) counterexamples.push_back(std::move(c));
  }
};

// Evaluates candidates [begin, end) in index order.
Tally run_range(const SearchConfig& config, std::uint64_t begin, std::uint64_t end) {
  Tally tally;
  const Gf2Matrix identity_theta = Gf2Matrix::identity(config.n);
  if (config.sample_budget) {
    for (std::uint64_t i = begin; i < end; ++i) {
      const auto table = search_candidate(config, i);
      tally.add(i, table, evaluate(table, config, identity_theta));
    }
    return tally;
  }
  auto table = search_candidate(config, begin);
  const auto skip = static_cast<std::ptrdiff_t>(fixed_prefix(config.scope));
  for (std::uint64_t i = begin; i < end; ++i) {
    tally.add(i, table, evaluate(table, config, identity_theta));
    std::next_permutation(table.begin() + skip, table.end());
  }
  return tally;
}

// --------------------------------------------------------------- Checkpoint

std::string config_line(const SearchConfig& c) {
  std::ostringstream s;
  s << "config n=" << c.n << " property=" << to_string(c.property) << " scope=" << to_string(c.scope)
    << " budget=" << (c.sample_budget ? std::to_string(*c.sample_budget) : "-") << " seed=" << c.seed;
  return s.str();
}

void write_checkpoint(const std::filesystem::path& path, const SearchConfig& config, std::uint64_t last_done,
                      const Tally& t) {
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << last_done << "\n" << config_line(config) << "\n";
    out << "counts " << t.scanned << " " << t.skipped_affine << " " << t.filtered << " " << t.tested << "\n";
    for (const auto& c : t.counterexamples) {
      out << "cx " << c.candidate_index;
      for (Code v : c.rho) out << " " << v;
      out << " | " << c.detail << "\n";
    }
    if (!out) throw Error("failed to write checkpoint " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

// Returns the first index still to process.
std::uint64_t read_checkpoint(const std::filesystem::path& path, const SearchConfig& config, Tally& t) {
  std::ifstream in(path);
  if (!in) return 0;
  std::string line;
  std::uint64_t last_done = 0;
  if (!std::getline(in, line)) return 0;
  try {
    last_done = std::stoull(line);
  } catch (const std::exception&) {
    throw ParseError("checkpoint " + path.string() + " does not start with a candidate index");
  }
  if (!std::getline(in, line) || line != config_line(config)) {
    throw PreconditionError("checkpoint " + path.string() + " belongs to a different search configuration");
  }
  while (std::getline(in, line)) {
    std::istringstream s(line);
    std::string tag;
    s >> tag;
    if (tag == "counts") {
      s >> t.scanned >> t.skipped_affine >> t.filtered >> t.tested;
    } else if (tag == "cx") {
      Counterexample c;
      s >> c.candidate_index;
      std::string tok;
      while (s >> tok && tok != "|") c.rho.push_back(static_cast<Code>(std::stoul(tok)));
      std::getline(s >> std::ws, c.detail);
      t.counterexamples.push_back(std::move(c));
    }
  }
  if (!in.eof() || t.scanned != last_done + 1) {
    throw ParseError("checkpoint " + path.string() + " is inconsistent");
  }
  return last_done + 1;
}

// -------------------------------------------------------------- Theta sweep

std::vector<Gf2Matrix> sweep_thetas(const SearchConfig& config) {
  if (config.n <= 3) return general_linear_group(config.n);
  std::vector<Gf2Matrix> out;
  if (config.n == 4) {
    const auto all = general_linear_group(4);
    const std::size_t k = std::min(config.theta_sample, all.size());
    for (std::size_t i = 0; i < k; ++i) out.push_back(all[i * all.size() / k]);
    return out;
  }
  std::mt19937_64 rng(config.seed ^ 0x7e7aULL);
  std::uniform_int_distribution<Code> row(0, (Code{1} << config.n) - 1U);
  while (out.size() < config.theta_sample) {
    std::vector<Code> rows(config.n);
    for (auto& r : rows) r = row(rng);
    Gf2Matrix candidate(config.n, rows);
    if (candidate.is_invertible()) out.push_back(std::move(candidate));
  }
  return out;
}

bool spn_primitive_nonaffine(std::span<const Code> table, unsigned cap) {
  if (classify_map_linearity(table) != Linearity::nonaffine) return false;
  return decide(spn_group(Permutation(std::vector<Code>(table.begin(), table.end()))), 1, cap).primitive;
}

// Evenly spaced over the scope; each start walks forward to the next rho
// satisfying the antecedent. Deterministic and independent of worker count.
std::vector<std::uint64_t> sweep_sample(const SearchConfig& config, std::uint64_t total) {
  std::vector<std::uint64_t> chosen;
  const std::uint64_t k = std::min<std::uint64_t>(config.theta_sweep_rhos, total);
  std::uint64_t next_free = 0;
  for (std::uint64_t i = 0; i < k; ++i) {
    std::uint64_t idx = std::max(next_free, i * total / k);
    while (idx < total && !spn_primitive_nonaffine(search_candidate(config, idx), config.subspace_cap)) ++idx;
    if (idx >= total) break;
    chosen.push_back(idx);
    next_free = idx + 1;
  }
  return chosen;
}

template <typename Job>
void parallel_for(std::size_t count, unsigned workers, Job&& job) {
  std::atomic<std::size_t> next{0};
  auto loop = [&](unsigned w) {
    for (std::size_t i = next++; i < count; i = next++) job(i, w);
  };
  if (workers <= 1) {
    loop(0);
    return;
  }
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(loop, w);
}

}  // namespace

std::string permutation_id(const Permutation& p) {
  std::string out;
  for (Code v : p.images()) {
    if (!out.empty()) out += ' ';
    out += std::to_string(v);
  }
  return out;
}

std::string matrix_id(const Gf2Matrix& m) {
  std::string out;
  for (Code r : m.rows()) {
    if (!out.empty()) out += ',';
    out += to_bit_string(r, m.dim());
  }
  return out;
}

std::vector<ReductionReport> verify_reduction(const Permutation& rho, std::span<const Gf2Matrix> thetas,
                                              unsigned workers, unsigned subspace_cap) {
  const unsigned n = rho.degree_log();
  if (2 * n > subspace_cap) {
    throw CapExceededError("verify_reduction: F2^" + std::to_string(2 * n) + " exceeds the subspace cap " +
                           std::to_string(subspace_cap));
  }
  std::vector<Gf2Matrix> theta_list(thetas.begin(), thetas.end());
  if (theta_list.empty()) theta_list.push_back(Gf2Matrix::identity(n));

  std::vector<ReductionReport> out;
  const bool affine = classify_permutation_linearity(rho) != Linearity::nonaffine;
  std::optional<GroupVerdict> spn, rho_only;
  if (!affine) {
    spn = decide(spn_group(rho), workers, subspace_cap);
    rho_only = decide(lm_rho_only_group(rho), workers, subspace_cap);
  }
  for (const auto& theta : theta_list) {
    if (theta.dim() != n) throw DimensionError("theta and rho act on different spaces");
    ReductionReport r;
    r.n = n;
    r.rho_id = permutation_id(rho);
    r.theta_id = matrix_id(theta);
    if (affine) {
      r.skipped_reason = "rho in AGL(V)";
      out.push_back(std::move(r));
      continue;
    }
    r.spn = *spn;
    r.lm_rho_only = *rho_only;
    r.lm_full = decide(lm_full_group(rho, theta), workers, subspace_cap);
    r.consistent_with_theorem = !(r.spn.primitive && !r.lm_full.primitive);
    r.rho_only_consistent = !(r.spn.primitive && !r.lm_rho_only.primitive);
    for (const GroupVerdict* v : {&r.lm_full, &r.lm_rho_only, &r.spn}) {
      if (!v->primitive) {
        r.witness = v->block_system;
        break;
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::string_view to_string(SearchProperty p) noexcept {
  return p == SearchProperty::primitivity_reduction ? "primitivity" : "two-transitivity";
}

std::string_view to_string(SearchScope s) noexcept { return s == SearchScope::zero_fixing ? "zero-fixing" : "all"; }

std::uint64_t scope_size(unsigned n, SearchScope scope) {
  if (n > 4) throw CapExceededError("scope size of S(2^n) for n > 4 does not fit in 64 bits");
  const unsigned points = 1U << n;
  return factorial(points - static_cast<unsigned>(fixed_prefix(scope)));
}

std::vector<Code> search_candidate(const SearchConfig& config, std::uint64_t index) {
  const std::size_t points = std::size_t{1} << config.n;
  const std::size_t skip = fixed_prefix(config.scope);
  std::vector<Code> table(points);
  std::iota(table.begin(), table.end(), Code{0});
  if (config.sample_budget) {
    std::seed_seq seq{static_cast<std::uint32_t>(config.seed), static_cast<std::uint32_t>(config.seed >> 32U),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32U)};
    std::mt19937_64 rng(seq);
    // Explicit Fisher-Yates keeps the samples identical across standard libraries.
    for (std::size_t i = points - 1; i > skip; --i) {
      const std::size_t j = skip + static_cast<std::size_t>(rng() % (i - skip + 1));
      std::swap(table[i], table[j]);
    }
    return table;
  }
  std::vector<Code> items(table.begin() + static_cast<std::ptrdiff_t>(skip), table.end());
  unrank_into(std::move(items), index, std::span(table).subspan(skip));
  return table;
}

SearchReport exhaustive_search(const SearchConfig& config) {
  if (config.n == 0) throw PreconditionError("search needs n >= 1");
  if (config.n >= 4 && !config.sample_budget) {
    throw PreconditionError("full search for n >= 4 is out of reach (" + std::to_string(config.n) +
                            "); pass a sampling budget");
  }
  if (config.property == SearchProperty::primitivity_reduction && 2 * config.n > config.subspace_cap) {
    throw CapExceededError("primitivity search at n = " + std::to_string(config.n) + " exceeds the subspace cap");
  }
  if (config.workers == 0) throw PreconditionError("worker count must be at least 1");
  const auto started = Clock::now();

  SearchReport report;
  report.n = config.n;
  report.scope = config.scope;
  report.property = config.property;
  report.filter_description =
      std::string("rho nonaffine and <rho, T_n> ") +
      (config.property == SearchProperty::primitivity_reduction ? "primitive" : "2-transitive");
  report.property_description =
      config.property == SearchProperty::primitivity_reduction
          ? "<rho_bar, T_2n> and <rho_bar, theta_bar, T_2n> primitive"
          : "<rho_bar, T_2n> 2-transitive";
  const std::uint64_t total = config.sample_budget ? *config.sample_budget : scope_size(config.n, config.scope);
  report.scope_size = total;

  Tally tally;
  std::uint64_t start = 0;
  if (config.checkpoint) start = read_checkpoint(*config.checkpoint, config, tally);
  report.resumed_at = start;

  const std::uint64_t chunk = std::max<std::size_t>(1, config.checkpoint_interval);
  const std::uint64_t chunks = total > start ? (total - start + chunk - 1) / chunk : 0;
  const unsigned workers = config.workers;
  report.worker_stats.resize(workers);
  for (unsigned w = 0; w < workers; ++w) report.worker_stats[w].worker = w;

  std::vector<std::optional<Tally>> results(chunks);
  std::mutex mutex;
  std::condition_variable ready;
  std::atomic<std::uint64_t> next_chunk{0};
  {
    auto worker = [&](unsigned w) {
      for (std::uint64_t c = next_chunk++; c < chunks; c = next_chunk++) {
        const auto t0 = Clock::now();
        const std::uint64_t begin = start + c * chunk;
        Tally part = run_range(config, begin, std::min(total, begin + chunk));
        auto& stats = report.worker_stats[w];
        ++stats.chunks;
        stats.candidates += part.scanned;
        stats.busy_seconds += std::chrono::duration<double>(Clock::now() - t0).count();
        std::lock_guard lock(mutex);
        results[c] = std::move(part);
        ready.notify_one();
      }
    };
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker, w);
    // Ordered merge: only the master touches the checkpoint file.
    for (std::uint64_t c = 0; c < chunks; ++c) {
      Tally part;
      {
        std::unique_lock lock(mutex);
        ready.wait(lock, [&] { return results[c].has_value(); });
        part = std::move(*results[c]);
        results[c].reset();
      }
      tally.merge(std::move(part));
      if (config.checkpoint) {
        write_checkpoint(*config.checkpoint, config, std::min(total, start + (c + 1) * chunk) - 1, tally);
      }
    }
  }

  if (tally.skipped_affine + tally.filtered + tally.tested != tally.scanned || tally.scanned != total) {
    throw ConsistencyError("candidate accounting does not add up");
  }

  if (config.property == SearchProperty::primitivity_reduction && config.theta_sweep_rhos > 0) {
    const auto thetas = sweep_thetas(config);
    const auto sample = sweep_sample(config, total);
    std::vector<std::vector<Counterexample>> found(sample.size());
    std::vector<std::uint64_t> primitive(sample.size(), 0);
    parallel_for(sample.size(), workers, [&](std::size_t i, unsigned) {
      const auto table = search_candidate(config, sample[i]);
      const Permutation rho(table);
      for (const auto& theta : thetas) {
        const auto v = decide(lm_full_group(rho, theta), 1, config.subspace_cap);
        if (v.primitive) {
          ++primitive[i];
        } else {
          found[i].push_back({sample[i], table,
                              "<rho, T_n> primitive but <rho_bar, theta_bar, T_2n> with theta = " + matrix_id(theta) +
                                  " has " + describe_block(*v.block_system)});
        }
      }
    });
    ThetaSweepSummary sweep;
    sweep.rhos_sampled = sample.size();
    sweep.thetas_per_rho = thetas.size();
    sweep.groups_tested = sample.size() * thetas.size();
    for (std::size_t i = 0; i < sample.size(); ++i) {
      sweep.groups_primitive += primitive[i];
      for (auto& c : found[i]) tally.counterexamples.push_back(std::move(c));
    }
    report.theta_sweep = sweep;
  }

  report.scanned = tally.scanned;
  report.skipped_affine = tally.skipped_affine;
  report.filtered = tally.filtered;
  report.tested = tally.tested;
  report.counterexamples = std::move(tally.counterexamples);
  report.elapsed_seconds = std::chrono::duration<double>(Clock::now() - started).count();
  return report;
}

AttackReport imprimitivity_attack_report(const GroupSpec& spec, unsigned subspace_cap) {
  const auto r = primitivity_by_subspaces(spec, {.find_all = true, .workers = 1, .subspace_cap = subspace_cap});
  AttackReport out;
  out.label = spec.label();
  out.degree_log = spec.degree_log();
  out.primitive = r.is_primitive();
  out.block_systems = r.all_block_systems;
  out.candidates_examined = r.candidates_examined;
  out.candidates_refuted = r.candidates_refuted;
  return out;
}

}  // namespace lmprim
