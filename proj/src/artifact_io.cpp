#include "walshlab/artifact_io.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "walshlab/error.hpp"

namespace walshlab {

using nlohmann::json;

json spectrum_to_json(const Spectrum& s) {
  json j;
  j["exponents"] = s.bits();
  if (auto v = s.value()) j["value"] = *v;
  return j;
}

json rat_to_json(const Rat64& r) { return json{{"num", r.num()}, {"den", r.den()}}; }

json report_to_json(const SequenceReport& rep) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["variation_profile"] = rep.variation_profile;
  j["separated"] = rep.separated;
  j["nested"] = rep.nested;
  j["unbounded_variation_evidence"] = rep.unbounded_variation_evidence;
  j["lacunary_ratio"] = rep.lacunary_ratio;
  j["lacunary_index"] = rep.lacunary_index;
  if (rep.close_bound.has_value()) j["close_bound"] = spectrum_to_json(*rep.close_bound);
  return j;
}

json artifact_to_json(const Lemma1Artifact& art, const std::vector<Verdict>& verdicts,
                      const ExtractionReport& extraction) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["level"] = art.base.level;
  j["n"] = spectrum_to_json(art.n());
  j["variation"] = art.variation();
  j["base_resolution"] = art.base.resolution;
  j["out_bit"] = art.out_bit;
  j["lambda"] = spectrum_to_json(art.lambda);
  j["kernel_norm"] = rat_to_json(art.base.kernel_norm);
  j["degree"] = spectrum_to_json(art.degree);
  j["witness_cap"] = spectrum_to_json(art.witness_cap);
  j["witness_cap_index"] = art.cap_index;
  j["dense_resolution"] = art.dense.has_value() ? art.dense_resolution : 0;

  json table = json::array();
  for (std::size_t s = 0; s < art.deltas.size(); ++s) {
    const DeltaChoice& d = art.deltas[s];
    json row;
    row["step"] = s + 1;
    row["branch"] = std::string(1, branch_code(d.branch));
    row["source_index"] = d.source_index;
    row["delta"] = spectrum_to_json(d.delta);
    row["lower_cut"] = spectrum_to_json(d.lower_cut);
    row["upper_cut"] = spectrum_to_json(d.upper_cut);
    row["active_count"] = d.active_count;
    if (d.fracs_exact) {
      row["measure_sum"] = rat_to_json(d.frac_sum);
      row["measure_rem"] = rat_to_json(d.frac_rem);
    }
    table.push_back(row);
  }
  j["branch_table"] = table;

  json cells = json::array();
  for (const auto& c : extraction.cells) {
    cells.push_back(json{{"cell", c.cell},
                         {"hits", c.hits},
                         {"total", c.total},
                         {"fraction", rat_to_json(c.fraction)}});
  }
  j["set_report"] = json{{"exact", extraction.exact},
                         {"threshold", rat_to_json(extraction.threshold)},
                         {"points", extraction.points},
                         {"all_cells_quarter", extraction.all_cells_quarter},
                         {"witness_cap_ok", extraction.witness_cap_ok},
                         {"max_witness_source", extraction.max_witness_source},
                         {"cells", cells}};

  json checks = json::object();
  for (const auto& v : verdicts) checks[v.tag] = json{{"pass", v.pass}, {"detail", v.detail}};
  j["verdicts"] = checks;
  return j;
}

json plan_to_json(const WitnessPlan& plan) {
  json j;
  j["schema_version"] = kSchemaVersion;
  json levels = json::array();
  for (const auto& lvl : plan.levels) {
    json row;
    row["position"] = lvl.position;
    row["weight"] = rat_to_json(lvl.weight());
    row["level"] = lvl.level;
    row["n"] = spectrum_to_json(lvl.n_level);
    row["variation"] = lvl.variation;
    row["term_ok"] = lvl.term_ok;
    row["term_approx"] = lvl.term_approx;
    row["cap_exact"] = lvl.cap_exact;
    row["degree"] = spectrum_to_json(lvl.degree);
    if (lvl.cap_exact) {
      row["cap"] = spectrum_to_json(lvl.cap);
      row["cap_index"] = lvl.cap_index;
    }
    if (lvl.has_gap) {
      row["alpha_index"] = lvl.alpha_index;
      row["beta_index"] = lvl.beta_index;
    }
    levels.push_back(row);
  }
  j["levels"] = levels;
  return j;
}

json phi_report_to_json(const PiecewiseConvex& phi, const PhiReport& rep) {
  json j;
  j["schema_version"] = kSchemaVersion;
  json knots = json::array();
  for (const auto& k : phi.knots()) {
    json row;
    row["u"] = json{{"q", rat_to_json(k.u.q)}, {"log2_scale", k.u.e}};
    json terms = json::array();
    for (const auto& t : k.value.terms)
      terms.push_back(json{{"q", rat_to_json(t.q)}, {"log2_scale", t.e}});
    row["value_terms"] = terms;
    knots.push_back(row);
  }
  j["knots"] = knots;
  j["increasing"] = rep.increasing;
  j["convex"] = rep.convex;
  j["strictly_convex"] = rep.strictly_convex;
  j["superlinear_evidence"] = rep.superlinear_evidence;
  j["doubling"] = json{{"holds", rep.delta2.holds}, {"c", rep.delta2.c}};
  return j;
}

std::string number_str(const Rat64& r) {
  if (r.is_integer()) return std::to_string(r.num());
  return number_str(r.approx());
}

std::string number_str(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    require(out.good(), Errc::invalid_argument, "cannot open " + tmp.string());
    out << content;
    require(out.good(), Errc::invalid_argument, "write failed for " + tmp.string());
  }
  fs::rename(tmp, target);
}

} // namespace walshlab
