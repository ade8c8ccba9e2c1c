#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "lmprim/analysis.hpp"
#include "lmprim/errors.hpp"
#include "lmprim/scheme.hpp"
#include "oracles.hpp"

using namespace lmprim;

namespace {

const Permutation kInversion({0, 1, 5, 6, 7, 2, 3, 4});
const Permutation kSwap45({0, 1, 2, 3, 5, 4, 6, 7});
const Gf2Matrix kMulAlpha(3, {2, 4, 3});

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("lmprim_test_analysis_" + name);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void check_same(const SearchReport& a, const SearchReport& b) {
  CHECK(a.scanned == b.scanned);
  CHECK(a.skipped_affine == b.skipped_affine);
  CHECK(a.filtered == b.filtered);
  CHECK(a.tested == b.tested);
  CHECK(a.counterexamples == b.counterexamples);
  CHECK(a.theta_sweep.has_value() == b.theta_sweep.has_value());
  if (a.theta_sweep && b.theta_sweep) {
    CHECK(a.theta_sweep->rhos_sampled == b.theta_sweep->rhos_sampled);
    CHECK(a.theta_sweep->groups_primitive == b.theta_sweep->groups_primitive);
  }
}

}  // namespace

TEST_CASE("verify_reduction examples") {
  SUBCASE("inversion with multiply-by-alpha") {
    const std::vector<Gf2Matrix> thetas{kMulAlpha};
    const auto reports = verify_reduction(kInversion, thetas);
    REQUIRE(reports.size() == 1);
    const auto& r = reports.front();
    CHECK_FALSE(r.skipped_reason);
    CHECK(r.spn.primitive);
    CHECK(r.spn.candidates_refuted == 14);
    CHECK(r.lm_rho_only.primitive);
    CHECK(r.lm_full.primitive);
    CHECK(r.lm_full.candidates_refuted == 2823);
    CHECK(r.consistent_with_theorem);
    CHECK(r.rho_only_consistent);
    CHECK_FALSE(r.witness);
    CHECK(r.theta_id == matrix_id(kMulAlpha));
  }
  SUBCASE("(4 5) with the identity") {
    const auto reports = verify_reduction(kSwap45, {});
    REQUIRE(reports.size() == 1);
    const auto& r = reports.front();
    CHECK_FALSE(r.spn.primitive);
    CHECK(*r.spn.block_system->subspace == subspace_from_codes(3, std::vector<Code>{1}));
    CHECK_FALSE(r.lm_rho_only.primitive);
    CHECK(coset_partition_invariant(subspace_from_codes(6, std::vector<Code>{8, 1}), lift_rho_bar(kSwap45)));
    CHECK(r.consistent_with_theorem);
    REQUIRE(r.witness);
    CHECK(r.theta_id == matrix_id(Gf2Matrix::identity(3)));
  }
  SUBCASE("affine rho is skipped") {
    const auto reports = verify_reduction(Permutation({3, 2, 1, 0, 7, 6, 5, 4}), {});
    REQUIRE(reports.size() == 1);
    CHECK(reports.front().skipped_reason.value() == "rho in AGL(V)");
  }
  SUBCASE("cap") {
    CHECK_THROWS_AS(verify_reduction(kInversion, {}, 1, 4), CapExceededError);
  }
  SUBCASE("one report per theta") {
    const auto gl = general_linear_group(3);
    const std::vector<Gf2Matrix> some(gl.begin(), gl.begin() + 5);
    const auto reports = verify_reduction(kInversion, some);
    CHECK(reports.size() == 5);
    for (const auto& r : reports) CHECK(r.consistent_with_theorem);
  }
}

TEST_CASE("identifiers") {
  CHECK(permutation_id(kInversion) == "0 1 5 6 7 2 3 4");
  CHECK(matrix_id(kMulAlpha) == "010,100,011");
}

TEST_CASE("imprimitivity attack reports") {
  const auto swap = imprimitivity_attack_report(spn_group(kSwap45));
  CHECK_FALSE(swap.primitive);
  REQUIRE_FALSE(swap.block_systems.empty());
  CHECK(*swap.block_systems.front().subspace == subspace_from_codes(3, std::vector<Code>{1}));

  const auto inv = imprimitivity_attack_report(spn_group(kInversion));
  CHECK(inv.primitive);
  CHECK(inv.candidates_refuted == 14);
  CHECK(inv.block_systems.empty());

  const auto t3 = imprimitivity_attack_report(GroupSpec(3, {}, true, "T_3"));
  CHECK(t3.block_systems.size() == 14);
  CHECK(t3.label == "T_3");

  CHECK_THROWS_AS(imprimitivity_attack_report(GroupSpec(3, {kInversion}, false)), PreconditionError);
}

TEST_CASE("scope sizes and candidate order") {
  CHECK(scope_size(3, SearchScope::all) == 40320);
  CHECK(scope_size(3, SearchScope::zero_fixing) == 5040);
  CHECK(scope_size(2, SearchScope::all) == 24);

  SearchConfig all{.n = 3, .scope = SearchScope::all};
  CHECK(search_candidate(all, 0) == std::vector<Code>{0, 1, 2, 3, 4, 5, 6, 7});
  CHECK(search_candidate(all, 1) == std::vector<Code>{0, 1, 2, 3, 4, 5, 7, 6});
  CHECK(search_candidate(all, 40319) == std::vector<Code>{7, 6, 5, 4, 3, 2, 1, 0});

  SearchConfig zf{.n = 3, .scope = SearchScope::zero_fixing};
  std::vector<Code> t{0, 1, 2, 3, 4, 5, 6, 7};
  for (std::uint64_t i = 0; i < 5040; ++i) {
    CHECK(search_candidate(zf, i) == t);
    std::next_permutation(t.begin() + 1, t.end());
  }

  SearchConfig sampled{.n = 4, .scope = SearchScope::zero_fixing, .sample_budget = 10, .seed = 5};
  const auto a = search_candidate(sampled, 3);
  CHECK(a == search_candidate(sampled, 3));
  CHECK(a.front() == 0);
  CHECK(std::set<Code>(a.begin(), a.end()).size() == 16);
  CHECK(a != search_candidate(sampled, 4));
}

TEST_CASE("168 linear zero-fixing permutations at n = 3") {
  std::size_t linear = 0;
  std::vector<std::uint32_t> t{0, 1, 2, 3, 4, 5, 6, 7};
  do {
    if (oracle::is_linear(t)) ++linear;
  } while (std::next_permutation(t.begin() + 1, t.end()));
  CHECK(linear == 168);
  CHECK(linear == general_linear_group(3).size());
}

TEST_CASE("search preconditions") {
  CHECK_THROWS_AS(exhaustive_search({.n = 4}), PreconditionError);
  CHECK_THROWS_AS(exhaustive_search({.n = 3, .workers = 0}), PreconditionError);
  CHECK_THROWS_AS(exhaustive_search({.n = 3, .subspace_cap = 4}), CapExceededError);
}

TEST_CASE("sampled searches are deterministic across worker counts") {
  SearchConfig base{.n = 3,
                    .property = SearchProperty::primitivity_reduction,
                    .scope = SearchScope::all,
                    .sample_budget = 300,
                    .seed = 9,
                    .theta_sweep_rhos = 3,
                    .checkpoint_interval = 37};
  const auto one = exhaustive_search(base);
  auto many_cfg = base;
  many_cfg.workers = 3;
  const auto many = exhaustive_search(many_cfg);
  check_same(one, many);
  CHECK(one.scanned == 300);
  CHECK(one.skipped_affine + one.filtered + one.tested == one.scanned);
  CHECK(one.counterexamples.empty());
  REQUIRE(one.theta_sweep);
  CHECK(one.theta_sweep->thetas_per_rho == 168);
  CHECK(one.theta_sweep->groups_primitive == one.theta_sweep->groups_tested);
}

TEST_CASE("two-transitivity search on a sample") {
  SearchConfig cfg{.n = 3,
                   .property = SearchProperty::two_transitivity_reduction,
                   .scope = SearchScope::all,
                   .sample_budget = 400,
                   .seed = 2,
                   .workers = 2};
  const auto r = exhaustive_search(cfg);
  CHECK(r.scanned == 400);
  CHECK(r.tested > 0);
  CHECK(r.counterexamples.empty());
  CHECK_FALSE(r.theta_sweep);
}

TEST_CASE("a sampled n = 4 run") {
  SearchConfig cfg{.n = 4,
                   .property = SearchProperty::two_transitivity_reduction,
                   .scope = SearchScope::zero_fixing,
                   .sample_budget = 20,
                   .seed = 3};
  const auto r = exhaustive_search(cfg);
  CHECK(r.scanned == 20);
  CHECK(r.skipped_affine + r.filtered + r.tested == 20);
  CHECK(r.counterexamples.empty());
}

TEST_CASE("checkpointed runs resume to the same report") {
  const auto path = temp_path("resume.ckpt");
  std::filesystem::remove(path);
  SearchConfig full{.n = 3,
                    .property = SearchProperty::primitivity_reduction,
                    .scope = SearchScope::zero_fixing,
                    .sample_budget = 240,
                    .seed = 4,
                    .theta_sweep_rhos = 2,
                    .checkpoint_interval = 50};
  const auto reference = exhaustive_search(full);

  // A shorter run over the same sample prefix stands in for an interrupted one.
  auto prefix = full;
  prefix.sample_budget = 100;
  prefix.checkpoint = path;
  (void)exhaustive_search(prefix);
  std::string text = slurp(path);
  CHECK(text.rfind("99\n", 0) == 0);
  const auto pos = text.find("budget=100");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 10, "budget=240");
  std::ofstream(path, std::ios::trunc) << text;

  auto resumed_cfg = full;
  resumed_cfg.checkpoint = path;
  const auto resumed = exhaustive_search(resumed_cfg);
  CHECK(resumed.resumed_at == 100);
  check_same(reference, resumed);
  CHECK(slurp(path).rfind("239\n", 0) == 0);

  // A finished checkpoint reproduces the report without rescanning.
  const auto again = exhaustive_search(resumed_cfg);
  CHECK(again.resumed_at == 240);
  check_same(reference, again);

  auto other = resumed_cfg;
  other.seed = 5;
  CHECK_THROWS_AS(exhaustive_search(other), PreconditionError);
  std::filesystem::remove(path);
}

TEST_CASE("normalizing 0 rho = 0 preserves every verdict") {
  std::mt19937_64 rng(53);
  for (int i = 0; i < 100; ++i) {
    const auto table = oracle::random_permutation(8, rng);
    std::vector<Code> shifted(8);
    for (Code x = 0; x < 8; ++x) shifted[x] = table[x] ^ table[0];
    const Permutation rho(table);
    const Permutation rho0(shifted);
    CHECK(rho0(0) == 0);
    const auto a = verify_reduction(rho, {});
    const auto b = verify_reduction(rho0, {});
    CHECK(a.front().skipped_reason == b.front().skipped_reason);
    if (a.front().skipped_reason) continue;
    CHECK(a.front().spn.primitive == b.front().spn.primitive);
    CHECK(a.front().lm_rho_only.primitive == b.front().lm_rho_only.primitive);
    CHECK(a.front().lm_full.primitive == b.front().lm_full.primitive);
    CHECK(is_2_transitive(spn_group(rho)) == is_2_transitive(spn_group(rho0)));
    if (i < 10) {
      std::vector<oracle::Table> ga, gb;
      const auto sa = spn_group(rho);
      const auto sb = spn_group(rho0);
      for (const auto& g : sa.generators()) ga.emplace_back(g.images().begin(), g.images().end());
      for (const auto& g : sb.generators()) gb.emplace_back(g.images().begin(), g.images().end());
      const auto ca = oracle::group_closure(ga);
      const auto cb = oracle::group_closure(gb);
      CHECK(std::set<oracle::Table>(ca.begin(), ca.end()) == std::set<oracle::Table>(cb.begin(), cb.end()));
    }
  }
}
