// perla — persistent Laplacian toolkit.
//
// Subcommands: spectra, betti, audit, search. Reads JSON input documents,
// writes a CSV report to stdout and human-readable notes to stderr.
// Exit codes: 0 all checks passed, 2 malformed input, 3 numerical failure,
// 4 violated invariant or theorem-guaranteed check, 5 informative flag
// (an expected-to-sometimes-fail property was observed to fail).

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "perla/perla.hpp"

namespace {

using perla::FiltrationTriple;
using perla::Filtration;
using perla::Index;
using perla::Kind;
using perla::Matrix;
using perla::PersistentPair;
using perla::Tolerance;
using perla::io::ReportRow;

constexpr int kExitPass = 0;
constexpr int kExitParse = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitInvariant = 4;
constexpr int kExitFlag = 5;

struct CommonOptions {
  std::string input;
  Tolerance tol;
  std::optional<int> degree;
  int qmax = 4;
};

void add_tolerance_flags(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("--tol-rank", opt.tol.rank_tol,
                  "relative rank tolerance (default 1e-10)");
  cmd->add_option("--tol-eig", opt.tol.eig_tol,
                  "relative eigenvalue tolerance (default 1e-9)");
}

std::vector<int> degrees_for(const PersistentPair& pair,
                             const std::optional<int>& degree) {
  if (degree) return {*degree};
  std::vector<int> out;
  const int top = std::max(pair.K.max_degree(), 0);
  for (int k = 0; k <= top; ++k) out.push_back(k);
  return out;
}

void emit(const std::vector<ReportRow>& rows) {
  std::vector<ReportRow> sorted = rows;
  perla::io::canonical_report_order(sorted);
  std::cout << perla::io::render_csv(sorted);
}

void spectra_rows_for_pair(const PersistentPair& pair,
                           const std::vector<int>& degrees,
                           std::optional<double> s, std::optional<double> t,
                           const Tolerance& tol,
                           std::vector<ReportRow>& rows) {
  for (int k : degrees) {
    const perla::PersistentLaplacians lap =
        perla::persistent_laplacians(pair, k, tol);
    for (Kind kind : {Kind::up, Kind::down, Kind::full}) {
      const perla::LaplacianRep& rep = kind == Kind::up     ? lap.up
                                       : kind == Kind::down ? lap.down
                                                            : lap.full;
      const perla::Spectrum spec = perla::spectrum(rep, tol);
      for (Index q = 0; q < spec.dim(); ++q) {
        ReportRow row;
        row.record = "eigenvalue";
        row.k = k;
        row.kind = kind;
        row.q = static_cast<int>(q) + 1;
        row.s = s;
        row.t = t;
        row.value = spec.eigenvalues[q];
        rows.push_back(std::move(row));
      }
    }
  }
}

int cmd_spectra(const CommonOptions& opt, std::optional<double> s,
                std::optional<double> t) {
  const perla::io::InputDocument doc = perla::io::load_input(opt.input);
  std::vector<ReportRow> rows;
  const bool grid_mode = !s && !t && !doc.pair && !doc.cosheaf && doc.complex;
  if (grid_mode) {
    const Filtration f = doc.filtration();
    const std::vector<double> bp = f.breakpoints();
    for (std::size_t i = 0; i < bp.size(); ++i)
      for (std::size_t j = i; j < bp.size(); ++j) {
        const perla::io::ResolvedPair rp =
            perla::io::resolve_pair(doc, bp[i], bp[j]);
        spectra_rows_for_pair(rp.pair, degrees_for(rp.pair, opt.degree),
                              rp.s, rp.t, opt.tol, rows);
      }
  } else {
    const perla::io::ResolvedPair rp = perla::io::resolve_pair(doc, s, t);
    spectra_rows_for_pair(rp.pair, degrees_for(rp.pair, opt.degree), rp.s,
                          rp.t, opt.tol, rows);
  }
  emit(rows);
  return kExitPass;
}

int cmd_betti(const CommonOptions& opt, std::optional<double> s,
              std::optional<double> t) {
  const perla::io::InputDocument doc = perla::io::load_input(opt.input);
  const perla::io::ResolvedPair rp = perla::io::resolve_pair(doc, s, t);
  std::vector<ReportRow> rows;
  bool all_agree = true;
  for (int k : degrees_for(rp.pair, opt.degree)) {
    const perla::HodgeReport rep = perla::hodge_check(rp.pair, k, opt.tol);
    for (const auto& [reason, value] :
         {std::pair<const char*, Index>{"kernel_dim", rep.kernel_dim},
          {"betti", rep.betti},
          {"harmonic_dim", rep.cap_dim}}) {
      ReportRow row;
      row.record = "value";
      row.k = k;
      row.s = rp.s;
      row.t = rp.t;
      row.value = static_cast<double>(value);
      row.reason = reason;
      rows.push_back(std::move(row));
    }
    ReportRow agree;
    agree.record = "audit";
    agree.k = k;
    agree.s = rp.s;
    agree.t = rp.t;
    agree.status = rep.ok ? "pass" : "fail";
    agree.reason = "hodge-agreement";
    rows.push_back(std::move(agree));
    all_agree = all_agree && rep.ok;
  }
  emit(rows);
  if (!all_agree) {
    std::cerr << "betti: kernel dimension disagrees with the Betti oracle\n";
    return kExitInvariant;
  }
  return kExitPass;
}

void monotonicity_rows(const perla::MonotonicityReport& rep, int k,
                       std::vector<ReportRow>& rows) {
  const std::pair<const char*, const char*> relations[] = {
      {"down-12-eq-13", "down 1,2"}, {"down-23-le-13", "down 2,3"},
      {"up-12-le-13", "up 1,2"},     {"up-23-le-13", "up 2,3"},
      {"full-12-le-13", "full 1,2"}};
  for (const auto& [reason, prefix] : relations) {
    bool failed = false;
    for (const std::string& v : rep.violations)
      failed = failed || v.rfind(prefix, 0) == 0;
    ReportRow row;
    row.record = "audit";
    row.k = k;
    row.status = failed ? "fail" : "pass";
    row.reason = reason;
    rows.push_back(std::move(row));
  }
  for (int q : rep.full_violation_qs) {
    ReportRow row;
    row.record = "audit";
    row.k = k;
    row.kind = Kind::full;
    row.q = q;
    row.status = "flag";
    row.reason = "full-monotonicity";
    rows.push_back(std::move(row));
  }
}

int cmd_audit_monotonicity(const perla::io::InputDocument& doc,
                           const CommonOptions& opt) {
  const FiltrationTriple triple = perla::io::resolve_triple(doc);
  const int k = opt.degree.value_or(1);
  const perla::MonotonicityReport rep =
      perla::monotonicity_audit(triple, k, opt.qmax, opt.tol);
  std::vector<ReportRow> rows;
  monotonicity_rows(rep, k, rows);
  emit(rows);
  if (!rep.ok) {
    std::cerr << "monotonicity: a guaranteed relation failed: "
              << rep.violations.front() << "\n";
    return kExitInvariant;
  }
  if (rep.full_flag) {
    std::cerr << "monotonicity: full-monotonicity flag raised (informative)\n";
    return kExitFlag;
  }
  return kExitPass;
}

int cmd_audit_condition(const perla::io::InputDocument& doc,
                        const CommonOptions& opt) {
  const FiltrationTriple triple = perla::io::resolve_triple(doc);
  const int k = opt.degree.value_or(1);
  const bool condition =
      perla::full_monotonicity_condition(triple, k, opt.tol);
  const perla::MonotonicityReport rep =
      perla::monotonicity_audit(triple, k, opt.qmax, opt.tol);
  std::vector<ReportRow> rows;
  ReportRow cond;
  cond.record = "audit";
  cond.k = k;
  cond.status = condition ? "pass" : "flag";
  cond.reason = "sufficient-condition";
  rows.push_back(std::move(cond));
  monotonicity_rows(rep, k, rows);
  emit(rows);
  if (!rep.ok) {
    std::cerr << "condition: a guaranteed relation failed\n";
    return kExitInvariant;
  }
  if (condition && rep.full_flag) {
    std::cerr << "condition: sufficient condition held but full monotonicity "
                 "failed — implementation bug\n";
    return kExitInvariant;
  }
  if (!condition) {
    std::cerr << "condition: sufficient condition is false (informative; "
                 "monotonicity "
              << (rep.full_flag ? "also failed" : "still held") << ")\n";
    return kExitFlag;
  }
  return kExitPass;
}

int cmd_audit_stability(const perla::io::InputDocument& doc,
                        const CommonOptions& opt) {
  const auto [f, g] = perla::io::resolve_filtration_pair(doc);
  const int k = opt.degree.value_or(1);
  const perla::StabilityReport rep =
      perla::stability_audit(f, g, k, opt.qmax, opt.tol);
  std::vector<ReportRow> rows;
  ReportRow base;
  base.record = "value";
  base.k = k;
  base.value = rep.filtration_distance;
  base.reason = "filtration-distance";
  rows.push_back(std::move(base));
  for (const auto& e : rep.entries) {
    ReportRow row;
    row.record = "value";
    row.k = k;
    row.kind = e.kind;
    row.q = e.q;
    row.value = e.function_distance;
    row.reason = "function-distance";
    rows.push_back(std::move(row));
    ReportRow audit;
    audit.record = "audit";
    audit.k = k;
    audit.kind = e.kind;
    audit.q = e.q;
    audit.status = e.bounded ? "pass" : (e.kind == Kind::full ? "flag" : "fail");
    audit.reason = "stability";
    rows.push_back(std::move(audit));
  }
  emit(rows);
  if (!rep.ok) {
    std::cerr << "stability: up/down stability violated — implementation "
                 "bug\n";
    return kExitInvariant;
  }
  if (!rep.full_within) {
    std::cerr << "stability: full counting function exceeded the filtration "
                 "distance (informative)\n";
    return kExitFlag;
  }
  return kExitPass;
}

int cmd_audit_splitting(const perla::io::InputDocument& doc,
                        const CommonOptions& opt, std::optional<double> s,
                        std::optional<double> t) {
  const perla::io::ResolvedPair rp = perla::io::resolve_pair(doc, s, t);
  std::vector<ReportRow> rows;
  bool all_ok = true;
  for (int k : degrees_for(rp.pair, opt.degree)) {
    const perla::SplittingReport rep =
        perla::splitting_check(rp.pair, k, opt.tol);
    ReportRow row;
    row.record = "audit";
    row.k = k;
    row.s = rp.s;
    row.t = rp.t;
    row.value = rep.max_mismatch;
    row.status = rep.ok ? "pass" : "fail";
    row.reason = "splitting";
    rows.push_back(std::move(row));
    all_ok = all_ok && rep.ok;
  }
  emit(rows);
  if (!all_ok) {
    std::cerr << "splitting: nonzero spectra do not split — implementation "
                 "bug\n";
    return kExitInvariant;
  }
  return kExitPass;
}

int cmd_audit_hodge(const perla::io::InputDocument& doc,
                    const CommonOptions& opt, std::optional<double> s,
                    std::optional<double> t) {
  const perla::io::ResolvedPair rp = perla::io::resolve_pair(doc, s, t);
  std::vector<ReportRow> rows;
  bool all_ok = true;
  for (int k : degrees_for(rp.pair, opt.degree)) {
    const perla::HodgeReport rep = perla::hodge_check(rp.pair, k, opt.tol);
    ReportRow row;
    row.record = "audit";
    row.k = k;
    row.s = rp.s;
    row.t = rp.t;
    row.value = static_cast<double>(rep.betti);
    row.status = rep.ok ? "pass" : "fail";
    row.reason = "hodge";
    rows.push_back(std::move(row));
    all_ok = all_ok && rep.ok;
  }
  emit(rows);
  if (!all_ok) {
    std::cerr << "hodge: kernel/Betti/harmonic dimensions disagree — "
                 "implementation bug\n";
    return kExitInvariant;
  }
  return kExitPass;
}

int cmd_search(const CommonOptions& opt, const perla::SearchParams& params,
               const std::vector<std::string>& plant_files,
               const std::string& out_dir) {
  std::vector<perla::SearchInstance> planted;
  for (const std::string& path : plant_files) {
    const perla::io::InputDocument doc = perla::io::load_input(path);
    if (!doc.triple || !doc.triple->thresholds)
      throw perla::parse_error(path +
                               ": planted instances need a filtration with "
                               "triple thresholds");
    const auto& ts = *doc.triple->thresholds;
    planted.push_back(
        {doc.filtration(), ts[0], ts[1], ts[2], params.k, {}});
  }
  const perla::SearchResult result =
      perla::counterexample_search(params, planted, opt.tol);
  std::vector<ReportRow> rows;
  {
    ReportRow row;
    row.record = "value";
    row.value = static_cast<double>(result.trials);
    row.reason = "trials";
    rows.push_back(std::move(row));
    ReportRow flagged;
    flagged.record = "value";
    flagged.value = static_cast<double>(result.flagged.size());
    flagged.reason = "flagged";
    rows.push_back(std::move(flagged));
  }
  std::filesystem::create_directories(out_dir);
  for (std::size_t i = 0; i < result.flagged.size(); ++i) {
    const perla::SearchInstance& inst = result.flagged[i];
    char name[64];
    std::snprintf(name, sizeof name, "counterexample_%03zu.json", i);
    const std::filesystem::path path = std::filesystem::path(out_dir) / name;
    std::ofstream out(path, std::ios::binary);
    out << perla::io::dump_canonical(perla::io::instance_to_json(inst));
    if (!out) throw perla::numeric_error("cannot write " + path.string());
    std::cerr << "wrote " << path.string() << "\n";
    for (int q : inst.violation_qs) {
      ReportRow row;
      row.record = "audit";
      row.k = inst.k;
      row.kind = Kind::full;
      row.q = q;
      row.status = "flag";
      row.reason = "full-monotonicity";
      rows.push_back(std::move(row));
    }
  }
  emit(rows);
  if (result.fatal) {
    std::cerr << "search: guaranteed relation failed: " << result.fatal_message
              << "\n";
    return kExitInvariant;
  }
  return result.flagged.empty() ? kExitPass : kExitFlag;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"persistent Laplacians of weighted complexes"};
  app.require_subcommand(1);

  CommonOptions opt;
  std::optional<double> s_flag, t_flag;
  std::string mode;
  perla::SearchParams search_params;
  std::vector<std::string> plant_files;
  std::string out_dir = ".";
  std::function<int()> runner;

  const auto add_common = [&](CLI::App* cmd, bool with_input = true) {
    if (with_input)
      cmd->add_option("-i,--input", opt.input, "input document (JSON)")
          ->required();
    cmd->add_option("--degree", opt.degree, "chain degree k (default: all)");
    cmd->add_option("--qmax", opt.qmax, "largest eigenvalue index audited");
    add_tolerance_flags(cmd, opt);
  };

  CLI::App* spectra = app.add_subcommand(
      "spectra", "persistent Laplacian spectra of a pair of complexes");
  add_common(spectra);
  spectra->add_option("-s", s_flag, "lower sublevel threshold");
  spectra->add_option("-t", t_flag, "upper sublevel threshold");
  spectra->callback([&] {
    runner = [&] { return cmd_spectra(opt, s_flag, t_flag); };
  });

  CLI::App* betti = app.add_subcommand(
      "betti", "kernel dimension against the persistent Betti oracle");
  add_common(betti);
  betti->add_option("-s", s_flag, "lower sublevel threshold");
  betti->add_option("-t", t_flag, "upper sublevel threshold");
  betti->callback(
      [&] { runner = [&] { return cmd_betti(opt, s_flag, t_flag); }; });

  CLI::App* audit =
      app.add_subcommand("audit", "check a theorem on the given input");
  add_common(audit);
  audit
      ->add_option("--mode", mode,
                   "monotonicity | stability | splitting | hodge | condition")
      ->required()
      ->check(CLI::IsMember(
          {"monotonicity", "stability", "splitting", "hodge", "condition"}));
  audit->add_option("-s", s_flag, "lower sublevel threshold");
  audit->add_option("-t", t_flag, "upper sublevel threshold");
  audit->callback([&] {
    runner = [&]() -> int {
      const perla::io::InputDocument doc = perla::io::load_input(opt.input);
      if (mode == "monotonicity") return cmd_audit_monotonicity(doc, opt);
      if (mode == "condition") return cmd_audit_condition(doc, opt);
      if (mode == "stability") return cmd_audit_stability(doc, opt);
      if (mode == "splitting")
        return cmd_audit_splitting(doc, opt, s_flag, t_flag);
      return cmd_audit_hodge(doc, opt, s_flag, t_flag);
    };
  });

  CLI::App* search = app.add_subcommand(
      "search", "randomized search for full-monotonicity violations");
  add_common(search, /*with_input=*/false);
  search->add_option("--seed", search_params.seed, "random seed");
  search->add_option("--budget", search_params.budget,
                     "number of random triples");
  search->add_option("--vertices", search_params.complex_params.n_vertices,
                     "vertices per random complex");
  search->add_option("--edge-prob", search_params.complex_params.edge_prob,
                     "edge probability");
  search->add_option("--triangle-prob",
                     search_params.complex_params.triangle_prob,
                     "kept fraction of flag triangles");
  search->add_option("--plant", plant_files,
                     "instance file audited before the random trials");
  search->add_option("--out", out_dir, "directory for flagged instance files");
  search->callback([&] {
    runner = [&] {
      search_params.k = opt.degree.value_or(1);
      search_params.qmax = opt.qmax;
      return cmd_search(opt, search_params, plant_files, out_dir);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParse;
  }

  try {
    return runner();
  } catch (const perla::parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const perla::numeric_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const perla::invariant_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitNumeric;
  }
}
