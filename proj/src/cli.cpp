#include "lmprim/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "lmprim/analysis.hpp"
#include "lmprim/errors.hpp"
#include "lmprim/goursat.hpp"
#include "lmprim/io.hpp"
#include "lmprim/report_json.hpp"
#include "lmprim/scheme.hpp"

namespace lmprim::cli {

namespace {

using lmprim::json::ordered_json;

const std::filesystem::path& require(const std::optional<std::filesystem::path>& p, const char* flag) {
  if (!p) throw PreconditionError(std::string("missing required option ") + flag);
  if (!std::filesystem::exists(*p)) throw ParseError("no such file: " + p->string());
  return *p;
}

void emit(const ordered_json& doc, const CommandConfig& config, std::ostream& out) {
  if (config.json_path) {
    std::ofstream file(*config.json_path, std::ios::trunc);
    file << doc.dump(2) << "\n";
    if (!file) throw Error("cannot write " + config.json_path->string());
    out << "report written to " << config.json_path->string() << "\n";
  } else {
    out << doc.dump(2) << "\n";
  }
}

Permutation load_rho(const CommandConfig& c) { return io::parse_permutation_file(require(c.rho_path, "--rho")); }

Gf2Matrix load_theta_or_identity(const CommandConfig& c, unsigned n) {
  if (c.theta_paths.empty()) return Gf2Matrix::identity(n);
  if (!std::filesystem::exists(c.theta_paths.front())) {
    throw ParseError("no such file: " + c.theta_paths.front().string());
  }
  return io::parse_matrix_file(c.theta_paths.front());
}

GroupSpec build_group(const CommandConfig& c) {
  if (c.mode == "multi-round") {
    std::vector<RoundComponents> parts;
    for (const auto& e : io::parse_manifest_file(require(c.manifest_path, "--manifest"))) {
      parts.push_back({io::parse_permutation_file(e.rho_path), io::parse_matrix_file(e.theta_path)});
    }
    return group_generators(GroupKind::multi_round, parts);
  }
  const Permutation rho = load_rho(c);
  if (c.mode == "spn") return spn_group(rho);
  if (c.mode == "lm-rho-only") return lm_rho_only_group(rho);
  if (c.mode == "lm-full") return lm_full_group(rho, load_theta_or_identity(c, rho.degree_log()));
  throw PreconditionError("unknown mode '" + c.mode + "' (spn, lm-rho-only, lm-full, multi-round)");
}

int cmd_analyze(const CommandConfig& c, std::ostream& out) {
  const GroupSpec spec = build_group(c);
  ordered_json doc;
  doc["command"] = "analyze";
  doc["mode"] = c.mode;
  doc["group"] = spec.label();
  doc["degree_log"] = spec.degree_log();
  if (c.rho_path && c.mode != "multi-round") {
    doc["rho_linearity"] = to_string(classify_permutation_linearity(load_rho(c)));
  }
  doc["transitive"] = is_transitive(spec);
  doc["two_transitive"] =
      spec.degree_log() <= 12 ? ordered_json(is_2_transitive(spec)) : ordered_json(nullptr);
  const auto r = primitivity_by_subspaces(
      spec, {.find_all = c.find_all, .workers = c.workers, .subspace_cap = c.subspace_cap});
  doc["verdict"] = r.is_primitive() ? "primitive" : "imprimitive";
  doc["candidates_examined"] = r.candidates_examined;
  doc["candidates_refuted"] = r.candidates_refuted;
  ordered_json blocks = ordered_json::array();
  if (c.find_all) {
    for (const auto& b : r.all_block_systems) blocks.push_back(json::to_json(b));
  } else if (r.block_system) {
    blocks.push_back(json::to_json(*r.block_system));
  }
  doc["block_systems"] = std::move(blocks);
  emit(doc, c, out);
  return 0;
}

int cmd_lift(const CommandConfig& c, std::ostream& out) {
  if (c.lift_target == "rho") {
    const Permutation rho = load_rho(c);
    out << io::format_permutation(c.inverse ? lift_rho_bar_inverse(rho) : lift_rho_bar(rho));
    return 0;
  }
  if (c.lift_target == "theta") {
    if (c.theta_paths.empty()) throw PreconditionError("missing required option --theta");
    const Gf2Matrix theta = io::parse_matrix_file(c.theta_paths.front());
    out << io::format_permutation(c.inverse ? lift_theta_bar_inverse(theta) : lift_theta_bar(theta));
    return 0;
  }
  throw PreconditionError("lift target must be 'rho' or 'theta'");
}

std::vector<Code> split_decimals(const std::string& s) {
  std::vector<Code> out;
  std::stringstream in(s);
  std::string part;
  while (std::getline(in, part, ',')) {
    try {
      std::size_t used = 0;
      const unsigned long v = std::stoul(part, &used);
      if (used != part.size()) throw ParseError("");
      out.push_back(static_cast<Code>(v));
    } catch (const std::exception&) {
      throw ParseError("bad --eval point '" + s + "'");
    }
  }
  return out;
}

int cmd_round(const CommandConfig& c, std::ostream& out) {
  const Permutation rho = load_rho(c);
  const unsigned n = rho.degree_log();
  const Code key = c.keys.empty() ? 0 : c.keys.front();
  Permutation round = Permutation::identity(c.spn_round ? n : 2 * n);
  if (c.spn_round) {
    round = spn_round(rho, Gf2Vector(n, key));
    if (c.inverse) round = inverse(round);
  } else {
    const LmRoundDescriptor d{rho, load_theta_or_identity(c, n), key};
    round = c.inverse ? lm_round_inverse(d) : lm_round(d);
  }
  if (c.eval_points.empty()) {
    out << io::format_permutation(round);
    return 0;
  }
  for (const auto& point : c.eval_points) {
    const auto coords = split_decimals(point);
    if (c.spn_round) {
      if (coords.size() != 1 || coords[0] >= round.degree()) throw ParseError("SPN --eval takes one value below 2^n");
      out << round(coords[0]) << "\n";
      continue;
    }
    const PairCoding coding(n);
    if (coords.size() != 2 || coords[0] >> n != 0 || coords[1] >> n != 0) {
      throw ParseError("Lai-Massey --eval takes x,y with both halves below 2^n");
    }
    const auto [u, v] = coding.decode(round(coding.encode(coords[0], coords[1])));
    out << "(" << u << "," << v << ")\n";
  }
  return 0;
}

int cmd_goursat(const CommandConfig& c, std::ostream& out) {
  const Subspace u = io::parse_subspace_file(require(c.subspace_path, "--subspace"));
  const GoursatTriple t = goursat_decompose(u);
  ordered_json doc;
  doc["command"] = "goursat";
  doc["subspace"] = json::bit_strings(u);
  doc["triple"] = json::to_json(t);
  doc["conditions"] = json::to_json(lemma_conditions(t));
  doc["reconstructs"] = goursat_reconstruct(t) == u;
  emit(doc, c, out);
  return 0;
}

int cmd_survey(const CommandConfig& c, std::ostream& out) {
  const auto records = linear_block_survey(
      load_rho(c), {.subspace_cap = c.subspace_cap, .linear_blocks_only = c.linear_blocks_only});
  std::ostringstream lines;
  for (const auto& r : records) lines << json::to_json(r).dump() << "\n";
  if (c.json_path) {
    std::ofstream file(*c.json_path, std::ios::trunc);
    file << lines.str();
    if (!file) throw Error("cannot write " + c.json_path->string());
    out << records.size() << " survey records written to " << c.json_path->string() << "\n";
  } else {
    out << lines.str();
  }
  return 0;
}

int cmd_verify(const CommandConfig& c, std::ostream& out) {
  const Permutation rho = load_rho(c);
  std::vector<Gf2Matrix> thetas;
  if (c.all_thetas) {
    thetas = general_linear_group(rho.degree_log());
  } else {
    for (const auto& p : c.theta_paths) thetas.push_back(io::parse_matrix_file(p));
  }
  const auto reports = verify_reduction(rho, thetas, c.workers, c.subspace_cap);
  ordered_json doc;
  doc["command"] = "verify-theorem";
  ordered_json list = ordered_json::array();
  bool consistent = true;
  for (const auto& r : reports) {
    list.push_back(json::to_json(r));
    consistent = consistent && r.consistent_with_theorem && r.rho_only_consistent;
  }
  doc["reports"] = std::move(list);
  doc["consistent_with_theorem"] = consistent;
  emit(doc, c, out);
  return consistent ? 0 : kExitCounterexample;
}

SearchProperty parse_property(const std::string& s) {
  if (s == "primitivity") return SearchProperty::primitivity_reduction;
  if (s == "two-transitivity") return SearchProperty::two_transitivity_reduction;
  throw PreconditionError("unknown property '" + s + "' (primitivity, two-transitivity)");
}

SearchScope parse_scope(const std::string& s) {
  if (s == "zero-fixing") return SearchScope::zero_fixing;
  if (s == "all") return SearchScope::all;
  throw PreconditionError("unknown scope '" + s + "' (zero-fixing, all)");
}

int cmd_search(const CommandConfig& c, std::ostream& out) {
  SearchConfig sc;
  sc.n = c.n.value_or(3);
  sc.property = parse_property(c.property);
  sc.scope = parse_scope(c.scope);
  sc.sample_budget = c.sample_budget;
  sc.seed = c.seed;
  sc.workers = c.workers;
  sc.theta_sweep_rhos = c.theta_sweep;
  sc.theta_sample = c.theta_sample;
  sc.checkpoint = c.checkpoint_path;
  sc.checkpoint_interval = c.checkpoint_interval;
  sc.subspace_cap = c.subspace_cap;
  const SearchReport report = exhaustive_search(sc);
  emit(json::to_json(report, !c.no_timestamp), c, out);
  return report.counterexamples.empty() ? 0 : kExitCounterexample;
}

int cmd_attack(const CommandConfig& c, std::ostream& out) {
  const AttackReport report = imprimitivity_attack_report(build_group(c), c.subspace_cap);
  ordered_json doc = json::to_json(report);
  doc["attackable"] = !report.primitive;
  emit(doc, c, out);
  return 0;
}

}  // namespace

unsigned default_workers() {
  if (const char* env = std::getenv("LMPRIM_WORKERS")) {
    try {
      const unsigned long v = std::stoul(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return 1;
}

int dispatch(const CommandConfig& config, std::ostream& out) {
  if (config.workers == 0) throw PreconditionError("--workers must be at least 1");
  const std::string& cmd = config.command;
  if (cmd == "analyze") return cmd_analyze(config, out);
  if (cmd == "lift") return cmd_lift(config, out);
  if (cmd == "round") return cmd_round(config, out);
  if (cmd == "goursat") return cmd_goursat(config, out);
  if (cmd == "survey") return cmd_survey(config, out);
  if (cmd == "verify-theorem") return cmd_verify(config, out);
  if (cmd == "search") return cmd_search(config, out);
  if (cmd == "attack") return cmd_attack(config, out);
  throw PreconditionError("unknown command '" + cmd + "'");
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Primitivity of groups generated by SPN and Lai-Massey round functions", "lmprim"};
  app.require_subcommand(1);
  CommandConfig cfg;
  cfg.workers = default_workers();

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--json", cfg.json_path, "Write the JSON report to this file");
    sub->add_option("--subspace-cap", cfg.subspace_cap, "Largest ambient dimension for subspace enumeration");
    sub->add_option("--workers", cfg.workers, "Worker threads (default $LMPRIM_WORKERS or 1)");
  };
  auto add_group = [&](CLI::App* sub) {
    sub->add_option("--rho", cfg.rho_path, "Permutation file for rho");
    sub->add_option("--theta", cfg.theta_paths, "Matrix file for theta");
    sub->add_option("--mode", cfg.mode, "spn | lm-rho-only | lm-full | multi-round");
    sub->add_option("--manifest", cfg.manifest_path, "Round manifest for multi-round");
  };

  auto* analyze = app.add_subcommand("analyze", "Linearity, transitivity and primitivity of a group");
  add_group(analyze);
  add_common(analyze);
  analyze->add_flag("--find-all", cfg.find_all, "Report every invariant subspace partition");

  auto* lift = app.add_subcommand("lift", "Print the table of rho_bar or theta_bar");
  lift->add_option("--rho", cfg.rho_path, "Permutation file for rho");
  lift->add_option("--theta", cfg.theta_paths, "Matrix file for theta");
  lift->add_option("--target", cfg.lift_target, "rho | theta");
  lift->add_flag("--inverse", cfg.inverse, "Print the inverse operator");
  lift->callback([&] {
    if (!cfg.theta_paths.empty() && !cfg.rho_path) cfg.lift_target = "theta";
  });

  auto* round = app.add_subcommand("round", "Build a Lai-Massey or SPN round");
  round->add_option("--rho", cfg.rho_path, "Permutation file for rho");
  round->add_option("--theta", cfg.theta_paths, "Matrix file for theta (default identity)");
  round->add_option("--key", cfg.keys, "Round key as a decimal integer");
  round->add_option("--eval", cfg.eval_points, "Evaluate at x,y (Lai-Massey) or x (SPN)");
  round->add_flag("--spn", cfg.spn_round, "Build the SPN round x -> x rho + k");
  round->add_flag("--inverse", cfg.inverse, "Build the inverse round");

  auto* goursat = app.add_subcommand("goursat", "Goursat decomposition of a subspace of V x V");
  goursat->add_option("--subspace", cfg.subspace_path, "Subspace file")->required();
  add_common(goursat);

  auto* survey = app.add_subcommand("survey", "Linear-block survey of rho_bar over all subspaces (JSON lines)");
  survey->add_option("--rho", cfg.rho_path, "Permutation file for rho")->required();
  survey->add_flag("--linear-blocks-only", cfg.linear_blocks_only, "Only emit linear blocks");
  add_common(survey);

  auto* verify = app.add_subcommand("verify-theorem", "Check SPN primitivity against the Lai-Massey groups");
  verify->add_option("--rho", cfg.rho_path, "Permutation file for rho")->required();
  verify->add_option("--theta", cfg.theta_paths, "Matrix files for theta (default identity)");
  verify->add_flag("--all-thetas", cfg.all_thetas, "Sweep every theta in GL(n, 2)");
  add_common(verify);

  auto* search = app.add_subcommand("search", "Exhaustive search over S-boxes of F2^n");
  search->add_option("--n", cfg.n, "Half-block dimension (default 3)");
  search->add_option("--property", cfg.property, "primitivity | two-transitivity");
  search->add_option("--scope", cfg.scope, "zero-fixing | all");
  search->add_option("--sample-budget", cfg.sample_budget, "Random sample size (required for n >= 4)");
  search->add_option("--seed", cfg.seed, "Seed for sampled searches");
  search->add_option("--theta-sweep", cfg.theta_sweep, "Number of rho given the full theta sweep");
  search->add_option("--theta-sample", cfg.theta_sample, "Thetas per swept rho when n >= 4");
  search->add_option("--checkpoint", cfg.checkpoint_path, "Checkpoint file (resumes when present)");
  search->add_option("--checkpoint-interval", cfg.checkpoint_interval, "Candidates per checkpoint");
  search->add_flag("--no-timestamp", cfg.no_timestamp, "Write elapsed_seconds as 0");
  add_common(search);

  auto* attack = app.add_subcommand("attack", "Imprimitivity-attack report: every invariant coset partition");
  add_group(attack);
  add_common(attack);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  for (const auto* sub : app.get_subcommands()) cfg.command = sub->get_name();

  try {
    return dispatch(cfg, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace lmprim::cli
