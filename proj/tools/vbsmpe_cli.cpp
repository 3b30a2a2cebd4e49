// vbsmpe: k most probable / most plausible explanations from the command line.
//
// Exit codes:
//   0  success
//   1  validation error (model violates its invariants)
//   2  usage error (bad arguments, wrong model kind)
//   3  parse error (unreadable or malformed file, unknown name or label)
//   4  no solution (fewer than k positive-score configurations found)
//   5  capacity error (search space or combination too large)
//   6  total conflict
//   7  output file could not be written

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "vbsmpe/vbsmpe.hpp"

namespace {

using namespace vbsmpe;

enum Exit : int {
  kOk = 0,
  kValidation = 1,
  kUsage = 2,
  kParse = 3,
  kNoSolution = 4,
  kCapacity = 5,
  kConflict = 6,
  kWrite = 7,
};

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::usage: return kUsage;
    case ErrorCode::parse: return kParse;
    case ErrorCode::validation: return kValidation;
    case ErrorCode::index: return kValidation;
    case ErrorCode::no_solution: return kNoSolution;
    case ErrorCode::capacity: return kCapacity;
    case ErrorCode::total_conflict: return kConflict;
  }
  return kUsage;
}

struct Options {
  std::string model_path;
  std::string evidence_path;
  std::string out_path;
  std::string format = "json";
  std::size_t k = 1;
  GaParams params;
  std::string selection = "tournament";
  std::size_t tournament_size = 2;

  std::string gen_kind = "bayesian";
  GenOptions gen;
  bool no_discount = false;
};

int emit(const Options& opt, const std::string& text) {
  if (opt.out_path.empty()) {
    std::cout << text;
    return kOk;
  }
  std::ofstream out(opt.out_path, std::ios::binary);
  if (!out || !(out << text)) {
    std::cerr << "error: cannot write " << opt.out_path << "\n";
    return kWrite;
  }
  return kOk;
}

OutputFormat format_of(const Options& opt) { return opt.format == "text" ? OutputFormat::text : OutputFormat::json; }

Model load_valid_model(const std::string& path) {
  Model model = load_model(path);
  const auto report = validate_model(model);
  if (!report.empty()) {
    std::string msg = path + ": invalid model";
    for (const auto& v : report) msg += "\n  " + v;
    raise(ErrorCode::validation, msg);
  }
  return model;
}

Evidence load_query_evidence(const Options& opt, const Model& model) {
  if (opt.evidence_path.empty()) return {};
  return load_evidence(opt.evidence_path, model);
}

int cmd_solve(Options opt) {
  if (opt.k == 0) raise(ErrorCode::usage, "--k must be at least 1");
  opt.params.selection = opt.selection == "roulette" ? Selection{Roulette{}} : Selection{Tournament{opt.tournament_size}};
  opt.params.validate();
  const Model model = load_valid_model(opt.model_path);
  const Evidence ev = load_query_evidence(opt, model);
  const auto result = k_mpe(model, ev, opt.params, opt.k);
  return emit(opt, render_result(make_result(model, ev, opt.params, opt.k, result), model, format_of(opt)));
}

int cmd_oracle(const Options& opt) {
  if (opt.k == 0) raise(ErrorCode::usage, "--k must be at least 1");
  const Model model = load_valid_model(opt.model_path);
  const Evidence ev = load_query_evidence(opt, model);
  const auto result = enumerate_top_k(model, ev, opt.k);
  return emit(opt, render_result(make_result(model, ev, opt.k, result), model, format_of(opt)));
}

int cmd_check(const Options& opt) {
  const Model model = load_model(opt.model_path);
  const auto report = validate_model(model);
  std::string text;
  if (format_of(opt) == OutputFormat::json) {
    ordered_json doc;
    doc["valid"] = report.empty();
    doc["violations"] = report;
    text = doc.dump(2) + "\n";
  } else if (report.empty()) {
    text = "ok\n";
  } else {
    for (const auto& v : report) text += v + "\n";
  }
  const int rc = emit(opt, text);
  if (rc != kOk) return rc;
  return report.empty() ? kOk : kValidation;
}

int cmd_qtable(const Options& opt) {
  const Model model = load_valid_model(opt.model_path);
  if (model.kind() != ModelKind::dst) raise(ErrorCode::usage, "qtable needs a dst model");
  return emit(opt, render_qtables(model, format_of(opt)));
}

int cmd_gen(Options opt) {
  if (opt.gen.n_vars == 0) raise(ErrorCode::usage, "--vars must be at least 1");
  opt.gen.kind = opt.gen_kind == "dst" ? ModelKind::dst : ModelKind::bayesian;
  opt.gen.discount = !opt.no_discount;
  return emit(opt, model_to_json(generate_model(opt.gen)).dump(2) + "\n");
}

void add_ga_flags(CLI::App* cmd, Options& opt) {
  cmd->add_option("--k", opt.k, "number of explanations")->capture_default_str();
  cmd->add_option("--seed", opt.params.seed, "random seed")->capture_default_str();
  cmd->add_option("--pop", opt.params.population_size, "population size")->capture_default_str();
  cmd->add_option("--pm", opt.params.p_m, "per-locus mutation probability")->capture_default_str();
  cmd->add_option("--pc", opt.params.p_c, "per-pair crossover probability")->capture_default_str();
  cmd->add_option("--gens", opt.params.max_generations, "maximum generations")->capture_default_str();
  cmd->add_option("--stagnation", opt.params.stagnation_window, "stop after this many generations without improvement (0 = off)")
      ->capture_default_str();
  cmd->add_option("--elitism", opt.params.elitism, "individuals copied unchanged")->capture_default_str();
  cmd->add_option("--selection", opt.selection, "tournament or roulette")
      ->check(CLI::IsMember({"tournament", "roulette"}))
      ->capture_default_str();
  cmd->add_option("--tournament-size", opt.tournament_size, "tournament sample size")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"k most probable / most plausible explanations in valuation-based systems"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* cmd, bool needs_evidence) {
    cmd->add_option("--model", opt.model_path, "model file (JSON)")->required();
    if (needs_evidence) cmd->add_option("--evidence", opt.evidence_path, "evidence file (JSON)");
    cmd->add_option("--out", opt.out_path, "write output here instead of stdout");
    cmd->add_option("--format", opt.format, "json or text")
        ->check(CLI::IsMember({"json", "text"}))
        ->capture_default_str();
  };

  auto* solve = app.add_subcommand("solve", "genetic k-MPE search");
  add_common(solve, true);
  add_ga_flags(solve, opt);

  auto* oracle = app.add_subcommand("oracle", "exact top-k by enumeration");
  add_common(oracle, true);
  oracle->add_option("--k", opt.k, "number of explanations")->capture_default_str();

  auto* check = app.add_subcommand("check", "validate a model file");
  add_common(check, false);

  auto* qtable = app.add_subcommand("qtable", "print singleton commonality tables of a dst model");
  add_common(qtable, false);

  auto* gen = app.add_subcommand("gen", "emit a random valid model");
  gen->add_option("--kind", opt.gen_kind, "bayesian or dst")
      ->check(CLI::IsMember({"bayesian", "dst"}))
      ->capture_default_str();
  gen->add_option("--vars", opt.gen.n_vars, "number of variables")->capture_default_str();
  gen->add_option("--max-frame", opt.gen.max_frame, "largest frame size")->capture_default_str();
  gen->add_option("--max-parents", opt.gen.max_parents, "bayesian: most parents per node")->capture_default_str();
  gen->add_option("--universes", opt.gen.universes, "dst: number of mass universes (0 = one per variable)")
      ->capture_default_str();
  gen->add_option("--universe-vars", opt.gen.max_universe_vars, "dst: most variables per universe")->capture_default_str();
  gen->add_option("--focal", opt.gen.max_focal, "dst: most random focal sets per universe")->capture_default_str();
  gen->add_flag("--no-discount", opt.no_discount, "dst: do not add the whole frame as a focal set");
  gen->add_option("--seed", opt.gen.seed, "random seed")->capture_default_str();
  gen->add_option("--out", opt.out_path, "write output here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*solve) return cmd_solve(opt);
    if (*oracle) return cmd_oracle(opt);
    if (*check) return cmd_check(opt);
    if (*qtable) return cmd_qtable(opt);
    if (*gen) return cmd_gen(opt);
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.code()) << "): " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
