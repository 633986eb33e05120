#include "walshlab/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "walshlab/artifact_io.hpp"
#include "walshlab/error.hpp"
#include "walshlab/lemma1.hpp"
#include "walshlab/orlicz.hpp"
#include "walshlab/sequences.hpp"
#include "walshlab/witness.hpp"

namespace walshlab {

namespace {

// Options shared by every command that consumes a sequence prefix.
struct SeqSpec {
  std::string kind = "nested-canonical";
  uint64_t prefix = 40;
  std::string terms; // explicit comma-separated values override kind/prefix
};

std::vector<Spectrum> parse_terms(const std::string& csv) {
  std::vector<Spectrum> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    require(!item.empty(), Errc::invalid_argument, "empty term in the list");
    uint64_t v = 0;
    for (char c : item) {
      require(c >= '0' && c <= '9', Errc::invalid_argument, "terms must be decimal naturals");
      v = v * 10 + static_cast<uint64_t>(c - '0');
    }
    out.push_back(Spectrum::from_value(v));
  }
  require(!out.empty(), Errc::invalid_argument, "no terms given");
  return out;
}

std::vector<Spectrum> resolve_sequence(const SeqSpec& spec) {
  if (!spec.terms.empty()) return parse_terms(spec.terms);
  auto kind = parse_sequence_kind(spec.kind);
  require(kind.has_value(), Errc::invalid_argument, "unknown sequence kind: " + spec.kind);
  return generate_sequence(*kind, spec.prefix);
}

void add_seq_options(CLI::App* cmd, SeqSpec& spec, bool count_alias = false) {
  cmd->add_option("--kind,--seq", spec.kind,
                  "sequence family: nested-canonical | separated-canonical | powers-of-two");
  cmd->add_option(count_alias ? "--count,--prefix" : "--prefix", spec.prefix,
                  "number of terms to generate")
      ->check(CLI::Range(1, 256));
  cmd->add_option("--terms", spec.terms, "explicit comma-separated terms (overrides --kind)");
}

Rat64 parse_rational(const std::string& text) {
  auto slash = text.find('/');
  auto to_int = [](const std::string& s) {
    require(!s.empty(), Errc::invalid_argument, "empty number");
    int64_t v = 0;
    std::size_t i = s[0] == '-' ? 1 : 0;
    require(i < s.size(), Errc::invalid_argument, "bad number " + s);
    for (; i < s.size(); ++i) {
      require(s[i] >= '0' && s[i] <= '9', Errc::invalid_argument, "bad number " + s);
      v = v * 10 + (s[i] - '0');
    }
    return s[0] == '-' ? -v : v;
  };
  if (slash == std::string::npos) return Rat64(to_int(text));
  return Rat64(to_int(text.substr(0, slash)), to_int(text.substr(slash + 1)));
}

PiecewiseConvex parse_phi(const std::string& name) {
  if (name == "id") return PiecewiseConvex::identity();
  if (name.rfind("linear:", 0) == 0) return PiecewiseConvex::linear(parse_rational(name.substr(7)));
  fail(Errc::invalid_argument, "unknown phi: " + name + " (use id or linear:p/q)");
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty())
    std::cout << content;
  else
    write_file_atomic(out_path, content);
}

void print_verdicts(const std::vector<Verdict>& verdicts) {
  for (const auto& v : verdicts)
    std::cout << (v.pass ? "[pass] " : "[FAIL] ") << v.tag << ": " << v.detail << "\n";
}

// --config FILE expands to --key=value tokens injected where the flag stood,
// so explicitly passed flags (which follow it) win under the take-last policy.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] != "--config") continue;
    require(i + 1 < args.size(), Errc::invalid_argument, "--config needs a file");
    std::ifstream in(args[i + 1]);
    require(in.good(), Errc::invalid_argument, "cannot read config " + args[i + 1]);
    nlohmann::json cfg = nlohmann::json::parse(in);
    require(cfg.is_object(), Errc::invalid_argument, "config must be a JSON object");
    std::vector<std::string> injected;
    for (auto it = cfg.begin(); it != cfg.end(); ++it) {
      std::string value;
      if (it.value().is_string())
        value = it.value().get<std::string>();
      else
        value = it.value().dump();
      injected.push_back("--" + it.key() + "=" + value);
    }
    args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
               args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
    args.insert(args.begin() + static_cast<std::ptrdiff_t>(i), injected.begin(), injected.end());
    break;
  }
  return args;
}

int cmd_seq_gen(const SeqSpec& spec, const std::string& format, const std::string& out) {
  auto seq = resolve_sequence(spec);
  if (format == "csv") {
    std::ostringstream os;
    os << "index,term,variation\n";
    for (std::size_t i = 0; i < seq.size(); ++i)
      os << (i + 1) << "," << seq[i].str() << "," << seq[i].variation() << "\n";
    emit(out, os.str());
  } else {
    nlohmann::json j;
    j["schema_version"] = kSchemaVersion;
    j["terms"] = nlohmann::json::array();
    for (const auto& term : seq) j["terms"].push_back(spectrum_to_json(term));
    emit(out, j.dump(2) + "\n");
  }
  return 0;
}

int cmd_seq_classify(const SeqSpec& spec, const std::string& close_to, const std::string& out) {
  auto seq = resolve_sequence(spec);
  SequenceReport rep;
  if (!close_to.empty()) {
    auto other = parse_terms(close_to);
    rep = classify_sequence(seq, &other);
  } else {
    rep = classify_sequence(seq);
  }
  emit(out, report_to_json(rep).dump(2) + "\n");
  return 0;
}

int cmd_kernel(uint64_t n_max, int resolution, const std::string& out) {
  if (resolution == 0) {
    resolution = 1;
    while ((uint64_t{1} << resolution) < n_max) ++resolution;
  }
  auto rows = kernel_table(n_max, resolution);
  std::ostringstream os;
  os << "n,V,norm_num,norm_den,lower_ok,upper_ok\n";
  bool all_ok = true;
  for (const auto& row : rows) {
    os << row.n << "," << row.variation << "," << row.norm.num() << "," << row.norm.den() << ","
       << (row.lower_ok ? 1 : 0) << "," << (row.upper_ok ? 1 : 0) << "\n";
    all_ok = all_ok && row.lower_ok && row.upper_ok;
  }
  emit(out, os.str());
  std::cout << (all_ok ? "[pass] " : "[FAIL] ") << "kernel-norm-window: V(n)/8 <= ||D_n|| <= V(n) for n <= "
            << n_max << "\n";
  return all_ok ? 0 : 1;
}

int cmd_lemma1(const SeqSpec& spec, std::size_t level, int dense_cap, uint64_t samples,
               uint64_t seed, const std::string& out) {
  auto seq = resolve_sequence(spec);
  Lemma1Config config;
  config.dense_resolution_cap = dense_cap;
  Lemma1Artifact art = build_lemma1(seq, level, config);
  auto verdicts = verify_artifact(art, seed, std::max<uint64_t>(samples / 10, 100));
  uint64_t per_cell = std::max<uint64_t>(samples >> art.base.resolution, 16);
  auto extraction = extract_set(art, per_cell, seed);

  verdicts.push_back({"cell-coverage", extraction.all_cells_quarter,
                      extraction.exact ? "exact measure of every cell is at least 1/4"
                                       : "sampled coverage of every cell is at least 1/4"});
  verdicts.push_back({"cut-witness", extraction.witness_cap_ok,
                      "witness terms stay at or below the cap term"});

  print_verdicts(verdicts);
  if (!out.empty()) emit(out, artifact_to_json(art, verdicts, extraction).dump(2) + "\n");
  for (const auto& v : verdicts)
    if (!v.pass) {
      std::cerr << "verification failed: " << v.tag << "\n";
      return 1;
    }
  return 0;
}

int cmd_phi(const SeqSpec& spec, std::size_t knots, const std::string& beta_name,
            const std::string& eps_text, const std::string& out) {
  auto seq = resolve_sequence(spec);
  auto phi = build_phi(seq, knots);
  auto rep = check_phi_properties(phi);
  nlohmann::json j = phi_report_to_json(phi, rep);

  j["slopes_strictly_increase"] = phi_slopes_strictly_increase(seq, knots);
  nlohmann::json slopes = nlohmann::json::array();
  for (const auto& info : phi_slope_info(seq, knots)) {
    slopes.push_back(nlohmann::json{{"variation", info.variation},
                                    {"delta", info.delta},
                                    {"gap", info.gap},
                                    {"slope_lo", rat_to_json(info.slope_lo)},
                                    {"slope_hi", rat_to_json(info.slope_hi)},
                                    {"aux_bound_ok", info.aux_bound_ok},
                                    {"gap_matches_delta", info.gap_matches_delta}});
  }
  j["slope_info"] = slopes;

  auto window = growth_window_scan(phi);
  j["growth_window"] = nlohmann::json{
      {"c", window.c}, {"C", window.C}, {"samples", window.samples}};

  bool ok = rep.increasing && rep.convex && rep.superlinear_evidence && rep.delta2.holds &&
            j["slopes_strictly_increase"].get<bool>();

  if (!beta_name.empty()) {
    auto beta = parse_phi(beta_name);
    auto gamma = lemma3_gamma(phi, beta);
    bool bracket = verify_gamma_bracket(phi, beta, gamma);
    auto grep = check_phi_properties(gamma.gamma);
    nlohmann::json pieces = nlohmann::json::array();
    for (const auto& piece : gamma.pieces) {
      nlohmann::json row{{"level", piece.level},
                         {"u_log2", piece.u.e},
                         {"v_log2", piece.v.e}};
      if (piece.has_next) row["u_next_log2"] = piece.u_next.e;
      pieces.push_back(row);
    }
    j["interpolant"] = nlohmann::json{{"pieces", pieces},
                                      {"bracket_ok", bracket},
                                      {"convex", grep.convex},
                                      {"doubling_holds", grep.delta2.holds}};
    ok = ok && bracket && grep.convex;
    std::cout << (bracket ? "[pass] " : "[FAIL] ") << "interpolant-bracket\n";
  }
  if (!eps_text.empty()) {
    Rat64 eps = parse_rational(eps_text);
    auto repair = lemma4_nfunction(phi, eps);
    auto nrep = check_nfunction(repair.phi);
    j["repair"] = nlohmann::json{{"eps", rat_to_json(eps)},
                                 {"nfunction", nrep.passes()},
                                 {"cert_c", rat_to_json(repair.cert.c)},
                                 {"cert_C", rat_to_json(repair.cert.C)},
                                 {"cert_u0", rat_to_json(repair.cert.u0)},
                                 {"cert_verified", repair.cert.verified}};
    ok = ok && nrep.passes() && repair.cert.verified;
    std::cout << (nrep.passes() && repair.cert.verified ? "[pass] " : "[FAIL] ")
              << "nfunction-repair\n";
  }

  std::cout << (rep.convex ? "[pass] " : "[FAIL] ") << "convexity\n";
  std::cout << (rep.delta2.holds ? "[pass] " : "[FAIL] ") << "doubling: c = " << rep.delta2.c
            << "\n";
  if (!out.empty()) emit(out, j.dump(2) + "\n");
  return ok ? 0 : 1;
}

int cmd_witness(const SeqSpec& spec, int truncation, const std::string& phi_name,
                uint64_t samples, uint64_t seed, const std::string& out,
                const std::string& plan_out) {
  auto seq = resolve_sequence(spec);
  auto phi = parse_phi(phi_name);
  WitnessPlan plan = plan_levels(seq, phi, truncation);
  if (!plan_out.empty()) emit(plan_out, plan_to_json(plan).dump(2) + "\n");

  WitnessConfig config;
  config.samples = samples;
  config.seed = seed;
  WitnessLab lab(std::move(plan), config);

  std::ostringstream os;
  os << "x_bits,level,cut_tag,value,threshold,pass\n";
  std::mt19937_64 rng(seed);
  uint64_t bound_hits = 0, flat_bad = 0;
  for (uint64_t p = 0; p < samples; ++p) {
    DyadicPoint x = lab.sample_point(rng);
    auto ev = lab.evaluate(x);
    const auto& levels = lab.plan().levels;
    for (const auto& row : ev.rows) {
      Rat64 bound = levels[row.position - 1].level_bound();
      bool pass = row.exact ? row.value.abs() >= bound : std::abs(row.approx) >= bound.approx();
      os << x.bit_string() << "," << row.position << ",s" << (row.step + 1) << "."
         << (branch_code(lab.artifacts().at(row.position).deltas[row.step].branch) == 'A'
                 ? "upper"
                 : "lower")
         << "," << (row.exact ? number_str(row.value) : number_str(row.approx)) << ","
         << number_str(bound) << "," << (pass ? 1 : 0) << "\n";
    }
    os << x.bit_string() << "," << ev.arg_position << ",sup,"
       << (ev.sup_exact ? number_str(ev.sup) : number_str(ev.sup_approx)) << ","
       << number_str(levels[ev.arg_position - 1].level_bound()) << ","
       << (ev.clears_some_level_bound ? 1 : 0) << "\n";
    if (ev.clears_some_level_bound) ++bound_hits;
    for (std::size_t gapi = 0; gapi < ev.flat_defects.size(); ++gapi) {
      bool zero = ev.flat_defects[gapi].is_zero();
      os << x.bit_string() << "," << (gapi + 1) << ",flat," << number_str(ev.flat_defects[gapi])
         << ",0," << (zero ? 1 : 0) << "\n";
      if (!zero) ++flat_bad;
    }
  }
  if (!out.empty()) emit(out, os.str());

  double fraction = static_cast<double>(bound_hits) / static_cast<double>(samples);
  bool ok = fraction >= 0.25 && flat_bad == 0;
  std::cout << "samples: " << samples << "\n";
  std::cout << "divergence-bound fraction: " << number_str(fraction) << "\n";
  std::cout << "flat-segment defects: " << flat_bad << "\n";
  std::cout << (ok ? "[pass] " : "[FAIL] ") << "witness-profile\n";
  return ok ? 0 : 1;
}

int cmd_relocate(const SeqSpec& spec, int truncation, uint64_t count, uint64_t max_degree,
                 uint64_t seed, const std::string& out) {
  auto seq = resolve_sequence(spec);
  WitnessPlan plan = plan_levels(seq, PiecewiseConvex::identity(), truncation);
  std::mt19937_64 rng(seed);
  nlohmann::json rows = nlohmann::json::array();
  bool all_ok = true;
  for (uint64_t r = 0; r < count; ++r) {
    auto poly = SparsePoly::random(max_degree, 8, rng);
    auto result = spectral_relocate(poly, plan, rng(), 100);
    bool ok = result.window_ok && result.vanishes_below_anchor && result.full_at_window_top &&
              result.index_addition_ok && result.modulus_preserved;
    all_ok = all_ok && ok;
    rows.push_back(nlohmann::json{{"index", r},
                                  {"terms", poly.terms.size()},
                                  {"degree", spectrum_to_json(poly.degree())},
                                  {"gap_position", result.gap_position},
                                  {"shift", spectrum_to_json(result.shift)},
                                  {"window_ok", result.window_ok},
                                  {"vanishes_below_anchor", result.vanishes_below_anchor},
                                  {"full_at_window_top", result.full_at_window_top},
                                  {"index_addition_ok", result.index_addition_ok},
                                  {"modulus_preserved", result.modulus_preserved},
                                  {"pass", ok}});
  }
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["count"] = count;
  j["seed"] = seed;
  j["relocations"] = rows;
  if (!out.empty()) emit(out, j.dump(2) + "\n");
  std::cout << (all_ok ? "[pass] " : "[FAIL] ") << "relocation-identities (" << count
            << " polynomials)\n";
  return all_ok ? 0 : 1;
}

} // namespace

int run_cli(std::vector<std::string> args) {
  CLI::App app{"exact constructions for divergent subsequences of partial Walsh-Fourier sums"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  // seq
  auto* seq_cmd = app.add_subcommand("seq", "sequence generation and classification");
  seq_cmd->require_subcommand(1);
  SeqSpec gen_spec;
  std::string gen_format = "json", gen_out;
  auto* gen = seq_cmd->add_subcommand("gen", "emit the first terms of a named sequence");
  add_seq_options(gen, gen_spec, true);
  gen->add_option("--format", gen_format, "json | csv");
  gen->add_option("--out", gen_out, "output path (stdout when omitted)");

  SeqSpec cls_spec;
  std::string cls_close, cls_out;
  auto* cls = seq_cmd->add_subcommand("classify", "spectral classification of a prefix");
  add_seq_options(cls, cls_spec);
  cls->add_option("--close-to", cls_close, "comparison terms for the closeness bound");
  cls->add_option("--out", cls_out, "output path (stdout when omitted)");

  // kernel
  uint64_t kernel_n_max = 4096;
  int kernel_resolution = 0;
  std::string kernel_out;
  auto* kernel = app.add_subcommand("kernel", "kernel norm table with the V(n) window");
  kernel->add_option("--n-max", kernel_n_max, "largest kernel order")->check(CLI::Range(1, 1 << 22));
  kernel->add_option("--resolution", kernel_resolution, "grid resolution (default: fits n-max)");
  kernel->add_option("--out", kernel_out, "CSV output path");

  // lemma1
  SeqSpec l1_spec;
  std::size_t l1_level = 1;
  int l1_dense_cap = 22;
  uint64_t l1_samples = 10000, l1_seed = 0;
  std::string l1_out;
  auto* l1 = app.add_subcommand("lemma1", "build and verify one level's polynomial");
  add_seq_options(l1, l1_spec);
  l1->add_option("--nu", l1_level, "level index (1-based)")->check(CLI::Range(1, 12));
  l1->add_option("--dense-cap", l1_dense_cap, "densify while the degree fits 2^cap");
  l1->add_option("--samples", l1_samples, "sample budget for non-dense checks");
  l1->add_option("--seed", l1_seed, "sampling seed");
  l1->add_option("--out", l1_out, "artifact JSON path");

  // phi
  SeqSpec phi_spec;
  std::size_t phi_knots = 20;
  std::string phi_beta, phi_eps, phi_out;
  auto* phi = app.add_subcommand("phi", "growth-function diagnostics");
  add_seq_options(phi, phi_spec);
  phi->add_option("--knots", phi_knots, "number of knots")->check(CLI::Range(1, 30));
  phi->add_option("--beta", phi_beta, "build the interpolant against this function (id, linear:p/q)");
  phi->add_option("--eps", phi_eps, "run the quadratic-head repair with this eps (p/q)");
  phi->add_option("--out", phi_out, "report JSON path");

  // witness
  SeqSpec wit_spec;
  int wit_truncation = 2;
  std::string wit_phi = "id", wit_out, wit_plan_out;
  uint64_t wit_samples = 10000, wit_seed = 0;
  auto* wit = app.add_subcommand("witness", "truncated divergence witness profile");
  add_seq_options(wit, wit_spec);
  wit->add_option("--truncation", wit_truncation, "number of levels")->check(CLI::Range(1, 8));
  wit->add_option("--phi", wit_phi, "growth class to certify against (id, linear:p/q)");
  wit->add_option("--samples", wit_samples, "sample count");
  wit->add_option("--seed", wit_seed, "sampling seed");
  wit->add_option("--out", wit_out, "CSV output path");
  wit->add_option("--plan-out", wit_plan_out, "plan JSON path");

  // relocate
  SeqSpec rel_spec;
  int rel_truncation = 2;
  uint64_t rel_count = 100, rel_max_degree = 4096, rel_seed = 0;
  std::string rel_out;
  auto* rel = app.add_subcommand("relocate", "move small polynomials into plan gaps");
  add_seq_options(rel, rel_spec);
  rel->add_option("--truncation", rel_truncation, "plan depth")->check(CLI::Range(1, 8));
  rel->add_option("--count", rel_count, "number of random polynomials");
  rel->add_option("--max-degree", rel_max_degree, "degree bound for the random polynomials");
  rel->add_option("--seed", rel_seed, "sampling seed");
  rel->add_option("--out", rel_out, "report JSON path");

  app.footer("Any command also accepts --config FILE, a JSON object of flag defaults;\n"
             "flags given on the command line win on conflict.");

  try {
    args = expand_config(std::move(args));
    std::vector<const char*> argv;
    argv.push_back("walshlab");
    for (const auto& a : args) argv.push_back(a.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());

    if (gen->parsed()) return cmd_seq_gen(gen_spec, gen_format, gen_out);
    if (cls->parsed()) return cmd_seq_classify(cls_spec, cls_close, cls_out);
    if (kernel->parsed()) return cmd_kernel(kernel_n_max, kernel_resolution, kernel_out);
    if (l1->parsed()) return cmd_lemma1(l1_spec, l1_level, l1_dense_cap, l1_samples, l1_seed, l1_out);
    if (phi->parsed()) return cmd_phi(phi_spec, phi_knots, phi_beta, phi_eps, phi_out);
    if (wit->parsed())
      return cmd_witness(wit_spec, wit_truncation, wit_phi, wit_samples, wit_seed, wit_out,
                         wit_plan_out);
    if (rel->parsed())
      return cmd_relocate(rel_spec, rel_truncation, rel_count, rel_max_degree, rel_seed, rel_out);
    return 2;
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == Errc::invalid_argument ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

} // namespace walshlab
