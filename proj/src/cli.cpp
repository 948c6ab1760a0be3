#include "synteval/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "synteval/baselines.hpp"
#include "synteval/csv.hpp"
#include "synteval/runner.hpp"
#include "synteval/version.hpp"

namespace synteval {

namespace {

int run_fit(const std::string& real_path, const std::string& codebook_path,
            std::size_t sweeps, std::size_t chains, std::uint64_t seed,
            const std::string& out) {
  Codebook codebook = Codebook::from_json_file(codebook_path);
  Table real = load_csv(real_path, codebook);
  pcc::PccPriorConfig prior;
  auto ensemble = pcc::PccEnsemble::init(real, prior, chains, seed);
  ensemble.step(sweeps);
  ensemble.save(out);
  std::cout << "fit: " << chains << " chains, " << sweeps << " sweeps -> " << out
            << "\n";
  return 0;
}

int run_eval(EvalConfig cfg, const std::string& out) {
  EvaluationReport report = run_evaluation(cfg);
  if (out.empty())
    std::cout << emit_report(report, ReportFormat::Json) << "\n";
  else
    emit_report_file(report, ReportFormat::Json, out);
  return 0;
}

int run_baseline(const std::string& real_path, const std::string& codebook_path,
                 const std::string& kind, std::uint64_t seed, const std::string& out,
                 const std::string& out_real) {
  Codebook codebook = Codebook::from_json_file(codebook_path);
  Table real = load_csv(real_path, codebook);
  BaselinePair pair;
  if (kind == "self")
    pair = baseline_self(real);
  else if (kind == "perm")
    pair = baseline_perm(real, seed);
  else
    pair = baseline_half(real, seed);
  write_csv(pair.synth, out);
  if (!out_real.empty()) write_csv(pair.real, out_real);
  return 0;
}

int run_report(const std::string& in, const std::string& format,
               const std::string& out) {
  std::ifstream f(in, std::ios::binary);
  if (!f) throw DataError("report: cannot open '" + in + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  EvaluationReport report = parse_report_json(ss.str());
  ReportFormat fmt = format == "csv"        ? ReportFormat::Csv
                     : format == "markdown" ? ReportFormat::Markdown
                                            : ReportFormat::Json;
  if (out.empty())
    std::cout << emit_report(report, fmt) << "\n";
  else
    emit_report_file(report, fmt, out);
  return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"synteval: structured evaluation of synthetic tabular data"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  // fit
  auto* fit = app.add_subcommand("fit", "train a PCC surrogate on the real data");
  std::string fit_real, fit_codebook, fit_out;
  std::size_t fit_sweeps = 200, fit_chains = 8;
  std::uint64_t fit_seed = 0;
  fit->add_option("--real", fit_real, "real data CSV")->required();
  fit->add_option("--codebook", fit_codebook, "codebook JSON")->required();
  fit->add_option("--sweeps", fit_sweeps, "MCMC sweeps (default 200)");
  fit->add_option("--chains", fit_chains, "number of chains (default 8)");
  fit->add_option("--seed", fit_seed, "RNG seed");
  fit->add_option("--out", fit_out, "output state file")->required();

  // eval
  auto* eval = app.add_subcommand("eval", "evaluate synthetic datasets");
  std::string eval_real, eval_codebook, eval_pcc, eval_out, eval_config;
  std::vector<std::string> eval_synths;
  std::size_t eval_reps = 5;
  std::uint64_t eval_seed = 0;
  eval->add_option("--config", eval_config, "EvalConfig JSON (flags override)");
  eval->add_option("--real", eval_real, "real data CSV");
  eval->add_option("--codebook", eval_codebook, "codebook JSON");
  eval->add_option("--synth", eval_synths,
                   "synthetic CSV as name=path (repeatable)");
  eval->add_option("--pcc", eval_pcc, "PCC state file for surrogate metrics");
  eval->add_option("--reps", eval_reps, "replications (default 5)");
  eval->add_option("--seed", eval_seed, "RNG seed");
  eval->add_option("--out", eval_out, "report JSON path (default stdout)");

  // baseline
  auto* baseline = app.add_subcommand("baseline", "emit a baseline dataset");
  std::string base_real, base_codebook, base_kind, base_out, base_out_real;
  std::uint64_t base_seed = 0;
  baseline->add_option("--real", base_real, "real data CSV")->required();
  baseline->add_option("--codebook", base_codebook, "codebook JSON")->required();
  baseline->add_option("--kind", base_kind, "self|perm|half")
      ->required()
      ->check(CLI::IsMember({"self", "perm", "half"}));
  baseline->add_option("--seed", base_seed, "RNG seed");
  baseline->add_option("--out", base_out, "synthetic-role CSV")->required();
  baseline->add_option("--out-real", base_out_real,
                       "real-role CSV (the larger half for --kind half)");

  // report
  auto* report = app.add_subcommand("report", "re-emit a report");
  std::string rep_in, rep_format = "json", rep_out;
  report->add_option("--in", rep_in, "report JSON")->required();
  report->add_option("--format", rep_format, "json|csv|markdown")
      ->check(CLI::IsMember({"json", "csv", "markdown"}));
  report->add_option("--out", rep_out, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    std::cout << kVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    if (*fit) return run_fit(fit_real, fit_codebook, fit_sweeps, fit_chains, fit_seed,
                             fit_out);
    if (*eval) {
      EvalConfig cfg;
      if (!eval_config.empty()) cfg = EvalConfig::from_json_file(eval_config);
      if (!eval_real.empty()) cfg.real_path = eval_real;
      if (!eval_codebook.empty()) cfg.codebook_path = eval_codebook;
      for (const auto& spec : eval_synths) {
        auto pos = spec.find('=');
        if (pos == std::string::npos || pos == 0 || pos + 1 == spec.size()) {
          std::cerr << "--synth expects name=path, got '" << spec << "'\n";
          return 1;
        }
        cfg.synth_paths.emplace_back(spec.substr(0, pos), spec.substr(pos + 1));
      }
      if (!eval_pcc.empty()) {
        cfg.pcc_state_path = eval_pcc;
        cfg.surrogate = true;
      }
      if (eval->count("--reps")) cfg.replications = eval_reps;
      if (eval->count("--seed")) cfg.seed = eval_seed;
      if (cfg.real_path.empty() || cfg.codebook_path.empty()) {
        std::cerr << "eval requires --real and --codebook (or a --config providing "
                     "them)\n\n"
                  << app.help();
        return 1;
      }
      if (cfg.synth_paths.empty() && !cfg.baselines) {
        std::cerr << "eval needs at least one --synth or baselines enabled\n";
        return 1;
      }
      return run_eval(std::move(cfg), eval_out);
    }
    if (*baseline)
      return run_baseline(base_real, base_codebook, base_kind, base_seed, base_out,
                          base_out_real);
    if (*report) return run_report(rep_in, rep_format, rep_out);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

}  // namespace synteval
