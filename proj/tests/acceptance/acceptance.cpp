// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <algorithm>
#include <chrono>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fixtures.hpp"
#include "lmprim/analysis.hpp"
#include "lmprim/cli.hpp"
#include "lmprim/errors.hpp"
#include "lmprim/goursat.hpp"
#include "lmprim/permgroup.hpp"
#include "lmprim/scheme.hpp"
#include "oracles.hpp"

using namespace lmprim;
using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

json run_search(const std::vector<std::string>& args) {
  std::vector<std::string> full{"lmprim"};
  full.insert(full.end(), args.begin(), args.end());
  const std::string workers = std::to_string(std::max(1U, cli::default_workers()));
  full.insert(full.end(), {"--workers", workers, "--no-timestamp"});
  std::vector<const char*> argv;
  for (const auto& a : full) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int status = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  if (status != 0) throw Error("search exited with status " + std::to_string(status) + ": " + err.str());
  return json::parse(out.str());
}

oracle::Table table_of(const Permutation& p) { return {p.images().begin(), p.images().end()}; }

Outcome two_transitivity_search() {
  Outcome o;
  const auto r = run_search({"search", "--n", "3", "--property", "two-transitivity", "--scope", "all"});
  o.require(r["scanned"] == 40320, "scanned " + r["scanned"].dump());
  o.require(r["counterexamples"].empty(), r["counterexamples"].size() == 0 ? "" : "counterexamples found");
  o.require(r["tested"].get<std::uint64_t>() > 0, "no candidate passed the filter");
  o.require(r["skipped_affine"] == 1344, "affine count " + r["skipped_affine"].dump() + " != |AGL(3,2)|");
  o.detail += (o.detail.empty() ? "" : "; ") + std::string("tested ") + r["tested"].dump() + ", filtered " +
              r["filtered"].dump() + ", skipped " + r["skipped_affine"].dump();
  return o;
}

Outcome primitivity_search() {
  Outcome o;
  std::size_t brute_linear = 0;
  std::vector<std::uint32_t> t(8);
  std::iota(t.begin(), t.end(), 0U);
  do {
    if (oracle::is_linear(t)) ++brute_linear;
  } while (std::next_permutation(t.begin() + 1, t.end()));

  const auto r = run_search({"search", "--n", "3", "--property", "primitivity", "--scope", "zero-fixing"});
  o.require(r["scanned"] == 5040, "scanned " + r["scanned"].dump());
  o.require(brute_linear == 168, "brute-force linear count " + std::to_string(brute_linear));
  o.require(r["skipped_affine"] == brute_linear, "skipped " + r["skipped_affine"].dump());
  o.require(r["counterexamples"].empty(), "counterexamples found");
  const auto& sweep = r["theta_sweep"];
  o.require(sweep.is_object(), "no theta sweep");
  if (sweep.is_object()) {
    o.require(sweep["rhos_sampled"].get<std::size_t>() >= 100, "only " + sweep["rhos_sampled"].dump() + " rho swept");
    o.require(sweep["thetas_per_rho"] == 168, "thetas per rho " + sweep["thetas_per_rho"].dump());
    o.require(sweep["groups_primitive"] == sweep["groups_tested"], "a swept group is imprimitive");
    o.detail += (o.detail.empty() ? "" : "; ") + std::string("tested ") + r["tested"].dump() + ", theta sweep " +
                sweep["rhos_sampled"].dump() + " x " + sweep["thetas_per_rho"].dump();
  }
  return o;
}

Outcome goursat_round_trip() {
  Outcome o;
  std::size_t failures = 0;
  for (unsigned m : {4U, 6U}) {
    const auto all = enumerate_subspaces(m);
    o.require(all.size() == oracle::galois_number(m) && all.size() == galois_number(m),
              "count at m = " + std::to_string(m));
    for (const auto& u : all) {
      const auto t = goursat_decompose(u);
      if (!t.invariant_violation().empty() || goursat_reconstruct(t) != u) ++failures;
    }
  }
  o.require(galois_number(4) == 67 && galois_number(6) == 2825, "Galois numbers");
  o.require(failures == 0, std::to_string(failures) + " round-trip failures");
  o.detail += (o.detail.empty() ? "" : "; ") + std::string("67 + 2825 subspaces");
  return o;
}

Outcome lemma_harness() {
  Outcome o;
  std::mt19937_64 rng(20240601);
  std::vector<Permutation> rhos{Permutation({0, 1, 2, 3, 5, 4, 6, 7})};
  while (rhos.size() < 21) rhos.emplace_back(oracle::random_nonaffine(3, rng));
  std::size_t blocks = 0, violations = 0, oracle_mismatch = 0;
  for (const auto& rho : rhos) {
    const auto bar = table_of(lift_rho_bar(rho));
    std::vector<SurveyRecord> records;
    try {
      records = linear_block_survey(rho);
    } catch (const ConsistencyError& e) {
      ++violations;
      o.require(false, e.what());
      continue;
    }
    for (const auto& r : records) {
      if (r.is_linear_block != oracle::coset_images_match(r.u.elements(), bar)) ++oracle_mismatch;
      if (!r.is_linear_block) continue;
      ++blocks;
      const auto& t = r.triple;
      bool ok = t.d.is_subspace_of(t.a);
      for (Code img : t.phi_images) ok = ok && t.a.contains_code(img);
      for (Code row : t.d.basis()) ok = ok && t.a.contains_code(row) && t.d.contains_code(t.phi(row));
      if (!ok || !r.conditions.all()) ++violations;
    }
  }
  o.require(violations == 0, std::to_string(violations) + " violations");
  o.require(oracle_mismatch == 0, std::to_string(oracle_mismatch) + " block verdicts disagree with the oracle");
  o.detail += (o.detail.empty() ? "" : "; ") + std::to_string(rhos.size()) + " rho, " + std::to_string(blocks) +
              " linear blocks checked";
  return o;
}

Outcome known_answers() {
  Outcome o;
  const Permutation inv({0, 1, 5, 6, 7, 2, 3, 4});
  const Permutation swap({0, 1, 2, 3, 5, 4, 6, 7});
  const Gf2Matrix alpha(3, {2, 4, 3});

  const auto spn_inv = spn_group(inv);
  const auto r_inv = primitivity_by_subspaces(spn_inv);
  std::vector<oracle::Table> gens;
  for (const auto& g : spn_inv.generators()) gens.push_back(table_of(g));
  o.require(oracle::closure_is_primitive(oracle::group_closure(gens)), "oracle: <inv, T_3> not primitive");
  o.require(r_inv.is_primitive() && r_inv.candidates_refuted == 14, "<inv, T_3> verdict");

  const auto span1 = subspace_from_codes(3, std::vector<Code>{1});
  const auto r_swap = primitivity_by_subspaces(spn_group(swap));
  o.require(oracle::coset_images_match(span1.elements(), table_of(swap)), "oracle: span{1} not a block for (4 5)");
  o.require(!r_swap.is_primitive() && r_swap.block_system->subspace == span1, "<(4 5), T_3> block");

  const auto dd = subspace_from_codes(6, std::vector<Code>{8, 1});
  const auto bar = lift_rho_bar(swap);
  o.require(oracle::coset_images_match(dd.elements(), table_of(bar)), "oracle: {0,1}x{0,1} not a block");
  const auto r_lift = primitivity_by_subspaces(lm_rho_only_group(swap), {.find_all = true});
  o.require(std::any_of(r_lift.all_block_systems.begin(), r_lift.all_block_systems.end(),
                        [&](const BlockSystem& b) { return b.subspace == dd; }),
            "<rho_bar, T_6> misses {0,1}x{0,1}");

  const PairCoding c(3);
  const auto expected = oracle::lai_massey_round(table_of(inv), {2, 4, 3}, 1, 2, 3);
  o.require(expected == std::pair<std::uint32_t, std::uint32_t>{4, 3}, "oracle round value");
  o.require(lm_round({inv, alpha, 1})(c.encode(2, 3)) == c.encode(4, 3), "LM round (2,3)");
  return o;
}

Outcome oracle_equivalence() {
  Outcome o;
  std::mt19937_64 rng(777);
  std::size_t specs = 0, disagreements = 0, imprimitive = 0, bad_blocks = 0;
  for (unsigned m : {2U, 3U, 4U, 6U}) {
    for (int i = 0; i < 50; ++i) {
      const auto spec = fixture::random_translation_spec(m, rng, i);
      const auto a = primitivity_by_subspaces(spec);
      const auto b = atkinson_block_search(spec);
      ++specs;
      if (a.is_primitive() != b.is_primitive()) ++disagreements;
      if (!a.is_primitive()) {
        ++imprimitive;
        if (!verify_block_system(spec, *a.block_system) || !verify_block_system(spec, *b.block_system)) {
          ++bad_blocks;
        }
      }
    }
  }
  o.require(disagreements == 0, std::to_string(disagreements) + " disagreements");
  o.require(bad_blocks == 0, std::to_string(bad_blocks) + " invalid block systems");
  o.detail += (o.detail.empty() ? "" : "; ") + std::to_string(specs) + " specs at degrees 4/8/16/64, " +
              std::to_string(imprimitive) + " imprimitive";
  return o;
}

Outcome operator_identities() {
  Outcome o;
  std::mt19937_64 rng(4242);
  std::size_t failures = 0;
  for (int i = 0; i < 1000; ++i) {
    const unsigned n = 2 + static_cast<unsigned>(i % 3);
    const std::size_t size = std::size_t{1} << n;
    const auto rho = oracle::random_permutation(size, rng);
    const auto rows = oracle::random_invertible_rows(n, rng);
    const Code k = static_cast<Code>(rng() % size);
    const LmRoundDescriptor d{Permutation(rho), Gf2Matrix(n, rows), k};
    const auto round = lm_round(d);
    const auto inverse_round = lm_round_inverse(d);
    const PairCoding c(n);
    bool ok = compose(round, inverse_round).is_identity() && compose(inverse_round, round).is_identity();
    for (Code x = 0; x < size && ok; ++x) {
      for (Code y = 0; y < size && ok; ++y) {
        const auto [u, v] = oracle::lai_massey_round(rho, rows, k, x, y);
        ok = round(c.encode(x, y)) == c.encode(u, v);
      }
    }
    if (!ok) ++failures;
  }
  o.require(failures == 0, std::to_string(failures) + " failures");
  o.detail += (o.detail.empty() ? "" : "; ") + std::string("1000 random (rho, theta, k)");
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "2-transitivity search, n = 3, all 40320 permutations", 15 * 60.0, two_transitivity_search},
      {2, "primitivity search, n = 3, zero-fixing, with theta sweep", 30 * 60.0, primitivity_search},
      {3, "Goursat round trip on F2^4 and F2^6", 60.0, goursat_round_trip},
      {4, "linear-block conditions for 21 rho", 0.0, lemma_harness},
      {5, "known answers", 0.0, known_answers},
      {6, "subspace scan vs Atkinson block search", 0.0, oracle_equivalence},
      {7, "Lai-Massey operator identities", 0.0, operator_identities},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    if (c.limit_seconds > 0 && seconds > c.limit_seconds) {
      o.pass = false;
      o.detail += "; exceeded time limit";
    }
    if (!o.pass) ++failed;
    std::ostringstream time;
    time.precision(2);
    time << std::fixed << seconds;
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.name << " (" << time.str() << " s)";
    if (!o.detail.empty()) std::cout << ": " << o.detail;
    std::cout << "\n";
  }
  return failed;
}
