// comb-spectra: command-line front end.
//
// Exit status: 0 success, 1 invalid input or failed invariant, 2 solver failure.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "combspec/analysis.hpp"
#include "combspec/bounds.hpp"
#include "combspec/comb.hpp"
#include "combspec/fem.hpp"
#include "combspec/io.hpp"
#include "combspec/parallel.hpp"
#include "combspec/secular.hpp"

using namespace combspec;

namespace {

struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

void diag(const char* level, const char* kind, const std::string& msg) {
  std::string quoted;
  for (char c : msg) {
    if (c == '"' || c == '\\') quoted += '\\';
    quoted += c == '\n' ? ' ' : c;
  }
  std::fprintf(stderr, "level=%s kind=%s msg=\"%s\"\n", level, kind, quoted.c_str());
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_text_file(path, text);
  }
}

std::string fr(double x) { return std::isnan(x) ? "nan" : format_real(x); }

Condition parse_cut(const std::string& s) {
  if (s == "dirichlet" || s == "D") return Condition::Dirichlet;
  if (s == "neumann" || s == "N" || s == "KN") return Condition::KirchhoffNeumann;
  throw ValidationError("--cut must be dirichlet or neumann, got '" + s + "'");
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ValidationError("--alpha must be positive");
  if (alpha <= 0.5) {
    diag("warning", "regime",
         "alpha <= 1/2: the spectrum of the infinite comb is not purely discrete");
  }
}

struct CombArgs {
  double alpha = 1.0;
  std::int64_t teeth = 1;
  std::string cut = "dirichlet";
  std::string variant = "truncation";
  std::int64_t depth = 0;
};

void add_comb_options(CLI::App* app, CombArgs& a) {
  app->add_option("--alpha", a.alpha, "comb parameter alpha > 0");
  app->add_option("--teeth,-n", a.teeth, "truncation index (teeth kept, or split index n)");
  app->add_option("--cut", a.cut, "condition at the truncation cut: dirichlet|neumann");
  app->add_option("--variant", a.variant, "truncation|finite-part|tail");
  app->add_option("--depth", a.depth, "last tooth of a tail approximation");
}

BackboneChain comb_chain(const CombArgs& a) {
  check_alpha(a.alpha);
  CombSpec spec;
  spec.alpha = a.alpha;
  spec.truncation_index = a.teeth;
  spec.cut_condition = parse_cut(a.cut);
  spec.depth = a.depth;
  if (a.variant == "truncation") {
    spec.variant = CombVariant::MidpointTruncation;
  } else if (a.variant == "finite-part") {
    spec.variant = CombVariant::FinitePart;
  } else if (a.variant == "tail") {
    spec.variant = CombVariant::TailApproximation;
  } else {
    throw ValidationError("--variant must be truncation, finite-part or tail");
  }
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }
  return build_comb_chain(spec);
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != item.size()) throw ValidationError("bad number '" + item + "' in list");
    out.push_back(v);
  }
  if (out.empty()) throw ValidationError("empty list");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectra of diagonal combs and other metric graphs"};
  app.require_subcommand(1);
  app.fallthrough();
  std::optional<std::size_t> threads_flag;
  app.add_option("--threads,-j", threads_flag, "worker threads (default: COMB_SPECTRA_THREADS, else cores)");

  // comb build
  auto* comb = app.add_subcommand("comb", "comb construction");
  comb->require_subcommand(1);
  auto* build = comb->add_subcommand("build", "emit a comb as graph JSON (or chain JSON)");
  CombArgs build_args;
  add_comb_options(build, build_args);
  bool as_chain = false;
  std::string build_out;
  build->add_flag("--chain", as_chain, "emit the backbone chain instead of the graph");
  build->add_option("-o,--output", build_out, "output file (default stdout)");

  // spectrum
  auto* spectrum = app.add_subcommand("spectrum", "lowest eigenvalues of a graph or comb");
  CombArgs spec_args;
  add_comb_options(spectrum, spec_args);
  std::string graph_file, chain_file, backend = "secular", spec_out;
  std::size_t count = 10;
  double rel_tol = 1e-8, abs_tol = 1e-10;
  spectrum->add_option("--graph", graph_file, "graph JSON file");
  spectrum->add_option("--chain", chain_file, "backbone chain JSON file");
  spectrum->add_option("--backend", backend, "fem|secular|both");
  spectrum->add_option("--count,-k", count, "number of eigenvalues");
  spectrum->add_option("--rel-tol", rel_tol, "FEM refinement tolerance");
  spectrum->add_option("--abs-tol", abs_tol, "secular bracket width");
  spectrum->add_option("-o,--output", spec_out,
                       "CSV file; with --backend both, a prefix for .fem.csv/.secular.csv/.agreement.csv");

  // bounds
  auto* bnd = app.add_subcommand("bounds", "certified closed-form bounds for lambda_k(G_alpha)");
  double bnd_alpha = 0.75;
  std::int64_t kmax = 100;
  bool paper_constants = false;
  std::string bnd_out;
  bnd->add_option("--alpha", bnd_alpha)->required();
  bnd->add_option("--kmax", kmax)->required();
  bnd->add_flag("--paper-constants", paper_constants, "integral volume estimates instead of exact sums");
  bnd->add_option("-o,--output", bnd_out);

  // bracket
  auto* brk = app.add_subcommand("bracket", "two-sided enclosure of lambda_k(G_alpha)");
  double brk_alpha = 0.75;
  std::size_t brk_kmax = 20;
  std::int64_t brk_n = 1000;
  std::size_t fem_stride = 0;
  std::string brk_out;
  brk->add_option("--alpha", brk_alpha)->required();
  brk->add_option("--kmax", brk_kmax);
  brk->add_option("--n", brk_n, "split index / truncation");
  brk->add_option("--fem-stride", fem_stride, "cross-check every s-th row with FEM (0 = off)");
  brk->add_option("-o,--output", brk_out);

  // study
  auto* study = app.add_subcommand("study", "parameter studies");
  study->require_subcommand(1);
  auto* phase = study->add_subcommand("phase", "exponent fits across alpha");
  std::string alphas_s = "0.6,0.75,0.9,1,1.5,2";
  std::int64_t k_lo = 10, k_hi = 60, study_n = 2000;
  std::string study_out;
  phase->add_option("--alphas", alphas_s, "comma-separated alpha list");
  phase->add_option("--klo", k_lo);
  phase->add_option("--khi", k_hi);
  phase->add_option("--n", study_n);
  phase->add_option("-o,--output", study_out);
  auto* fpart = study->add_subcommand("finite-part", "finite-part upper bound vs computed eigenvalues");
  std::string fp_alphas = "0.6,0.75,0.9,1", fp_ns = "8,32,128,512", fp_ks = "2,4,8,16";
  std::string fp_out;
  fpart->add_option("--alphas", fp_alphas);
  fpart->add_option("--ns", fp_ns);
  fpart->add_option("--ks", fp_ks);
  fpart->add_option("-o,--output", fp_out);

  // verify
  auto* verify = app.add_subcommand("verify", "run the invariant battery");
  bool corrupt = false;
  double verify_tol = 1e-8;
  verify->add_flag("--corrupt-edge", corrupt, "fault injection: perturb one edge length");
  verify->add_option("--fem-tol", verify_tol, "FEM refinement tolerance for cross-backend rows");
  double verify_h_scale = 1.0;
  verify->add_option("--fem-h-scale", verify_h_scale, "fault injection: coarser initial FEM mesh");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const std::size_t threads = resolve_thread_count(threads_flag);

    if (build->parsed()) {
      const BackboneChain chain = comb_chain(build_args);
      emit(build_out, (as_chain ? chain_to_json(chain) : graph_to_json(chain_to_graph(chain))) + "\n");
      return 0;
    }

    if (spectrum->parsed()) {
      if (backend != "fem" && backend != "secular" && backend != "both") {
        throw ValidationError("--backend must be fem, secular or both");
      }
      if (count == 0) throw ValidationError("--count must be positive");
      if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw ValidationError("tolerances must be positive");
      std::optional<BackboneChain> chain;
      std::optional<MetricGraph> graph;
      try {
        if (!chain_file.empty()) {
          chain = chain_from_json(read_text_file(chain_file));
        } else if (!graph_file.empty()) {
          graph = graph_from_json(read_text_file(graph_file));
          if (is_chain_graph(*graph)) chain = graph_to_chain(*graph);
        } else {
          chain = comb_chain(spec_args);
        }
      } catch (const std::invalid_argument& e) {
        throw ValidationError(e.what());
      }
      if (!graph) graph = chain_to_graph(*chain);
      if (backend != "fem" && !chain) {
        throw ValidationError("secular backend needs a chain-shaped tree (caterpillar)");
      }

      auto fem_csv = [](const Spectrum& s) {
        CsvTable t({"k", "lambda", "abs_error_estimate", "mesh_dofs"});
        for (std::size_t i = 0; i < s.size(); ++i) {
          t.add_row({std::to_string(i + 1), fr(s[i]), fr(s.errors[i]), std::to_string(s.mesh_dofs)});
        }
        return t.str();
      };
      auto sec_csv = [](const Spectrum& s) {
        CsvTable t({"k", "lambda", "half_width"});
        for (std::size_t i = 0; i < s.size(); ++i) {
          t.add_row({std::to_string(i + 1), fr(s[i]), fr(s.errors[i])});
        }
        return t.str();
      };

      if (backend == "fem") {
        emit(spec_out, fem_csv(fem::refine_until(*graph, count, rel_tol)));
        return 0;
      }
      if (backend == "secular") {
        emit(spec_out, sec_csv(secular::eigenvalues_by_bisection(*chain, count, abs_tol)));
        return 0;
      }
      auto both = parallel_map(2, threads, [&](std::size_t job) {
        return job == 0 ? secular::eigenvalues_by_bisection(*chain, count, abs_tol)
                        : fem::refine_until(*graph, count, rel_tol);
      });
      const Spectrum& sec = both[0];
      const Spectrum& fe = both[1];
      CsvTable agree({"k", "lambda_secular", "lambda_fem", "abs_diff", "rel_diff", "allowed", "agrees"});
      std::size_t disagreements = 0;
      for (std::size_t i = 0; i < count; ++i) {
        const double d = std::abs(sec[i] - fe[i]);
        const double allowed = 10.0 * (sec.errors[i] + fe.errors[i]);
        const bool ok = d <= allowed;
        if (!ok) ++disagreements;
        agree.add_row({std::to_string(i + 1), fr(sec[i]), fr(fe[i]), fr(d),
                       fr(sec[i] > 0.0 ? d / sec[i] : d), fr(allowed), ok ? "1" : "0"});
      }
      if (spec_out.empty()) {
        std::cout << agree.str();
      } else {
        write_text_file(spec_out + ".secular.csv", sec_csv(sec));
        write_text_file(spec_out + ".fem.csv", fem_csv(fe));
        write_text_file(spec_out + ".agreement.csv", agree.str());
      }
      if (disagreements) {
        diag("warning", "cross-backend", std::to_string(disagreements) + " of " +
                                             std::to_string(count) + " eigenvalues disagree");
      }
      return 0;
    }

    if (bnd->parsed()) {
      check_alpha(bnd_alpha);
      if (bnd_alpha <= 0.5) throw ValidationError("bounds need alpha > 1/2");
      if (kmax < 1) throw ValidationError("--kmax must be >= 1");
      bounds::BoundOptions opt;
      opt.paper_constants = paper_constants;
      auto rows = parallel_map(static_cast<std::size_t>(kmax), threads, [&](std::size_t i) {
        const std::int64_t k = static_cast<std::int64_t>(i) + 1;
        std::vector<std::string> cells{fr(bnd_alpha), std::to_string(k)};
        std::string lower = "0", n_chosen = "", source;
        if (k == 1) {
          // lambda_1 of the Neumann finite part is 0; nothing better is certified.
          source = "trivial";
        } else if (bnd_alpha <= 1.0) {
          const auto lo = bounds::certified_lower_bound(bnd_alpha, k, opt);
          lower = fr(lo.value);
          n_chosen = std::to_string(lo.n);
          source = lo.source;
        } else {
          lower = "nan";
          source = "none";
        }
        const auto up = bounds::certified_upper_bound(bnd_alpha, k, opt);
        const std::string upper = up.vacuous ? "inf" : fr(up.value);
        source += "|" + up.source;
        cells.insert(cells.end(), {lower, upper, n_chosen, source});
        return cells;
      });
      CsvTable t({"alpha", "k", "lower_certified", "upper_certified", "n_chosen", "source"});
      for (auto& r : rows) t.add_row(std::move(r));
      emit(bnd_out, t.str());
      return 0;
    }

    if (brk->parsed()) {
      check_alpha(brk_alpha);
      if (brk_alpha <= 0.5) throw ValidationError("bracket needs alpha > 1/2");
      if (brk_n < 2) throw ValidationError("--n must be >= 2");
      if (brk_kmax < 1) throw ValidationError("--kmax must be >= 1");
      analysis::SolveOptions opt;
      opt.fem_stride = fem_stride;
      opt.threads = threads;
      const auto table = analysis::bracket_spectrum(brk_alpha, brk_kmax, brk_n, opt);
      CsvTable t({"k", "lower", "upper", "valid", "lower_solver", "threshold", "lower_certified",
                  "upper_certified", "fem_discrepancy"});
      for (const auto& r : table.rows) {
        t.add_row({std::to_string(r.k), fr(r.lower), fr(r.upper), r.valid ? "1" : "0",
                   fr(r.lower_solver), fr(r.threshold), fr(r.lower_certified),
                   fr(r.upper_certified), fr(r.fem_discrepancy)});
      }
      emit(brk_out, t.str());
      return 0;
    }

    if (phase->parsed()) {
      const auto alphas = parse_list(alphas_s);
      for (double a : alphas) {
        check_alpha(a);
        if (a <= 0.5) throw ValidationError("study phase needs every alpha > 1/2");
      }
      if (k_lo < 1 || k_hi <= k_lo) throw ValidationError("need 1 <= klo < khi");
      if (study_n < 2) throw ValidationError("--n must be >= 2");
      analysis::SolveOptions opt;
      opt.threads = threads;
      const auto rows = analysis::phase_transition_study(alphas, k_lo, k_hi, study_n, opt);
      CsvTable t({"alpha", "k_lo", "k_hi", "slope_lower", "slope_upper", "predicted_lo",
                  "predicted_hi", "n", "valid_rows"});
      for (const auto& r : rows) {
        t.add_row({fr(r.alpha), std::to_string(r.k_lo), std::to_string(r.k_hi), fr(r.slope_lower),
                   fr(r.slope_upper), fr(r.predicted_lo), fr(r.predicted_hi), std::to_string(r.n),
                   std::to_string(r.valid_rows)});
      }
      emit(study_out, t.str());
      return 0;
    }

    if (fpart->parsed()) {
      const auto alphas = parse_list(fp_alphas);
      for (double a : alphas) {
        if (!(a > 0.5 && a <= 1.0)) throw ValidationError("finite-part study needs alpha in (1/2, 1]");
      }
      std::vector<std::int64_t> ns, ks;
      for (double v : parse_list(fp_ns)) ns.push_back(static_cast<std::int64_t>(v));
      for (double v : parse_list(fp_ks)) ks.push_back(static_cast<std::int64_t>(v));
      for (auto v : ns) if (v < 2) throw ValidationError("--ns entries must be >= 2");
      for (auto v : ks) if (v < 2) throw ValidationError("--ks entries must be >= 2");
      analysis::SolveOptions opt;
      opt.threads = threads;
      const auto rows = analysis::finite_part_comparison(alphas, ns, ks, opt);
      CsvTable t({"alpha", "n", "k", "lambda", "paper_bound", "paper_holds", "strict_bound",
                  "strict_holds", "volume", "volume_displayed", "scaled"});
      for (const auto& r : rows) {
        t.add_row({fr(r.alpha), std::to_string(r.n), std::to_string(r.k), fr(r.lambda),
                   fr(r.paper_bound), r.paper_holds ? "pass" : "fail", fr(r.strict_bound),
                   r.strict_holds ? "pass" : "fail", fr(r.volume), fr(r.volume_displayed),
                   fr(r.scaled)});
      }
      emit(fp_out, t.str());
      return 0;
    }

    if (verify->parsed()) {
      analysis::VerifyOptions opt;
      opt.corrupt_edge = corrupt;
      opt.fem_rel_tol = verify_tol;
      opt.fem_h_scale = verify_h_scale;
      opt.threads = threads;
      const auto results = analysis::verify_suite(opt);
      std::size_t failed = 0;
      for (const auto& r : results) {
        std::printf("%-26s %s  %s\n", r.name.c_str(), r.passed ? "PASS" : "FAIL", r.detail.c_str());
        if (!r.passed) {
          ++failed;
          diag("error", "invariant", r.name + ": " + r.detail);
        }
      }
      std::printf("%zu of %zu checks passed\n", results.size() - failed, results.size());
      return failed ? 1 : 0;
    }
  } catch (const SolverError& e) {
    diag("error", "solver", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    diag("error", "validation", e.what());
    return 1;
  } catch (const std::exception& e) {
    diag("error", "solver", e.what());
    return 2;
  }
  return 0;
}
