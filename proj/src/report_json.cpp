#include "lmprim/report_json.hpp"

namespace lmprim::json {

ordered_json bit_strings(const Subspace& s) {
  ordered_json out = ordered_json::array();
  for (Code r : s.basis()) out.push_back(to_bit_string(r, s.ambient_dim()));
  return out;
}

ordered_json to_json(const BlockSystem& b) {
  ordered_json out;
  out["kind"] = b.kind == BlockSystem::Kind::subspace_cosets ? "subspace_cosets" : "explicit";
  if (b.subspace) {
    out["subspace"] = bit_strings(*b.subspace);
    out["subspace_dim"] = b.subspace->dim();
  }
  if (b.classes) out["classes"] = *b.classes;
  out["block_size"] = b.block_size;
  out["block_count"] = b.block_count;
  return out;
}

ordered_json to_json(const GroupVerdict& v) {
  ordered_json out;
  out["verdict"] = v.primitive ? "primitive" : "imprimitive";
  out["candidates_refuted"] = v.candidates_refuted;
  out["block_system"] = v.block_system ? to_json(*v.block_system) : ordered_json(nullptr);
  return out;
}

ordered_json to_json(const ReductionReport& r) {
  ordered_json out;
  out["n"] = r.n;
  out["rho"] = r.rho_id;
  out["theta"] = r.theta_id;
  if (r.skipped_reason) {
    out["skipped"] = *r.skipped_reason;
    return out;
  }
  out["spn"] = to_json(r.spn);
  out["lm_rho_only"] = to_json(r.lm_rho_only);
  out["lm_full"] = to_json(r.lm_full);
  out["consistent_with_theorem"] = r.consistent_with_theorem;
  out["rho_only_consistent"] = r.rho_only_consistent;
  out["witness"] = r.witness ? to_json(*r.witness) : ordered_json(nullptr);
  return out;
}

ordered_json to_json(const LemmaConditions& c) {
  ordered_json out;
  out["D_le_A"] = c.d_le_a;
  out["Aphi_le_A"] = c.aphi_le_a;
  out["Dphi_le_D"] = c.dphi_le_d;
  return out;
}

ordered_json to_json(const GoursatTriple& t) {
  ordered_json out;
  out["half_dim"] = t.half_dim;
  out["A"] = bit_strings(t.a);
  out["B"] = bit_strings(t.b);
  out["C"] = bit_strings(t.c);
  out["D"] = bit_strings(t.d);
  ordered_json phi = ordered_json::array();
  const auto rows = t.a.basis();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    phi.push_back({{"a", to_bit_string(rows[i], t.half_dim)}, {"image", to_bit_string(t.phi_images[i], t.half_dim)}});
  }
  out["phi"] = std::move(phi);
  out["dims"] = {{"A", t.a.dim()}, {"B", t.b.dim()}, {"C", t.c.dim()}, {"D", t.d.dim()}};
  return out;
}

ordered_json to_json(const SurveyRecord& r) {
  ordered_json out;
  out["basis"] = bit_strings(r.u);
  out["dim"] = r.u.dim();
  out["is_linear_block"] = r.is_linear_block;
  out["conditions"] = to_json(r.conditions);
  out["dims"] = {{"A", r.triple.a.dim()}, {"B", r.triple.b.dim()}, {"C", r.triple.c.dim()}, {"D", r.triple.d.dim()}};
  return out;
}

ordered_json to_json(const AttackReport& r) {
  ordered_json out;
  out["group"] = r.label;
  out["degree_log"] = r.degree_log;
  out["verdict"] = r.primitive ? "primitive" : "imprimitive";
  out["candidates_examined"] = r.candidates_examined;
  out["candidates_refuted"] = r.candidates_refuted;
  ordered_json blocks = ordered_json::array();
  for (const auto& b : r.block_systems) blocks.push_back(to_json(b));
  out["block_systems"] = std::move(blocks);
  return out;
}

ordered_json to_json(const SearchReport& r, bool include_timing) {
  ordered_json out;
  out["n"] = r.n;
  out["scope"] = to_string(r.scope);
  out["property"] = to_string(r.property);
  out["scope_size"] = r.scope_size;
  out["filter"] = r.filter_description;
  out["tested_property"] = r.property_description;
  out["scanned"] = r.scanned;
  out["skipped_affine"] = r.skipped_affine;
  out["filtered"] = r.filtered;
  out["tested"] = r.tested;
  ordered_json cx = ordered_json::array();
  for (const auto& c : r.counterexamples) {
    std::string table;
    for (Code v : c.rho) {
      if (!table.empty()) table += ' ';
      table += std::to_string(v);
    }
    cx.push_back({{"rho", table}, {"candidate_index", c.candidate_index}, {"detail", c.detail}});
  }
  out["counterexamples"] = std::move(cx);
  if (r.theta_sweep) {
    out["theta_sweep"] = {{"rhos_sampled", r.theta_sweep->rhos_sampled},
                          {"thetas_per_rho", r.theta_sweep->thetas_per_rho},
                          {"groups_tested", r.theta_sweep->groups_tested},
                          {"groups_primitive", r.theta_sweep->groups_primitive}};
  }
  out["elapsed_seconds"] = include_timing ? r.elapsed_seconds : 0.0;
  return out;
}

}  // namespace lmprim::json
