#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "freenorm/free_sums.hpp"
#include "freenorm/harness.hpp"
#include "freenorm/spaces.hpp"

namespace {

using namespace freenorm;

struct CommonArgs {
  std::string config_path;
  std::string out_dir = "results";
  std::uint64_t seed = 0;
  bool seed_set = false;
};

void attach_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "key = value configuration file");
  cmd->add_option("--out", args.out_dir, "output directory for reports");
  cmd->add_option("--seed", args.seed, "override for model.seed")
      ->each([&args](const std::string&) { args.seed_set = true; });
}

Config load_config(const CommonArgs& args) {
  Config cfg;
  if (!args.config_path.empty()) cfg = Config::parse_file(args.config_path);
  if (args.seed_set) cfg.set("model.seed", std::to_string(args.seed));
  cfg.validate_keys();
  return cfg;
}

int emit_suite_reports(const std::string& name, const std::vector<ReportRow>& rows,
                       const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const std::string base = out_dir + "/" + name;
  write_text_file(base + ".csv", to_csv(rows));
  write_text_file(base + ".plot", to_plotdata(rows));
  int failures = 0;
  for (const ReportRow& row : rows)
    if (!row.pass) ++failures;
  std::printf("%s: %zu rows, %d failing -> %s.csv\n", name.c_str(), rows.size(), failures,
              base.c_str());
  for (const ReportRow& row : rows)
    if (!row.pass)
      std::printf("  FAIL %s/%s %s: lhs=%.12g rhs=%.12g constant=%.12g slack=%.12g\n",
                  row.experiment.c_str(), row.instance.c_str(), row.quantity.c_str(),
                  row.lhs, row.rhs, row.constant, row.slack);
  return failures;
}

Operator load_operator(const std::string& path) {
  return operator_from_json(read_text_file(path));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for norms of sums of free random variables"};
  app.require_subcommand(1);
  app.fallthrough();

  CommonArgs args;
  std::string in_path, space_descriptor = "lp:inf", suite_filter;
  bool uncentered = false;

  std::vector<CLI::App*> suite_cmds;
  for (const std::string& name : suite_names()) {
    CLI::App* cmd = app.add_subcommand(name, "run the " + name + " inequality suite");
    attach_common(cmd, args);
    suite_cmds.push_back(cmd);
  }

  CLI::App* report = app.add_subcommand("report", "run suites and write a combined report");
  attach_common(report, args);
  report->add_option("--suite", suite_filter, "restrict to one suite");

  CLI::App* norm = app.add_subcommand("norm", "symmetric norm of a serialized operator");
  attach_common(norm, args);
  norm->add_option("--in", in_path, "operator json file")->required();
  norm->add_option("--space", space_descriptor, "norm descriptor, e.g. lp:2");

  CLI::App* mu = app.add_subcommand("mu", "rearrangement steps of a serialized operator");
  attach_common(mu, args);
  mu->add_option("--in", in_path, "operator json file")->required();

  CLI::App* decompose =
      app.add_subcommand("decompose", "three-part splitting of a free family");
  attach_common(decompose, args);
  decompose->add_option("--in", in_path, "json file with an 'operators' array")->required();
  decompose->add_option("--space", space_descriptor, "norm descriptor, e.g. lp:2");
  decompose->add_flag("--uncentered", uncentered, "skip the centering check");

  CLI11_PARSE(app, argc, argv);

  try {
    for (std::size_t i = 0; i < suite_cmds.size(); ++i)
      if (suite_cmds[i]->parsed()) {
        const std::string name = suite_names()[i];
        const Config cfg = load_config(args);
        const std::vector<ReportRow> rows = run_suite(name, cfg);
        return emit_suite_reports(name, rows, args.out_dir) == 0 ? 0 : 1;
      }

    if (report->parsed()) {
      Config cfg = load_config(args);
      if (!suite_filter.empty()) cfg.set("suite", suite_filter);
      const std::vector<ReportRow> rows = run_experiment(cfg);
      return emit_suite_reports("report", rows, args.out_dir) == 0 ? 0 : 1;
    }

    if (norm->parsed()) {
      const SymmetricSpace space = SymmetricSpace::parse(space_descriptor);
      std::printf("%.12g\n", operator_norm(space, load_operator(in_path)));
      return 0;
    }

    if (mu->parsed()) {
      const StepFunction f = singular_value_function(load_operator(in_path));
      for (const Step& step : f.steps()) std::printf("%.12g %.12g\n", step.width, step.value);
      return 0;
    }

    if (decompose->parsed()) {
      const Config cfg = load_config(args);
      const SymmetricSpace space = SymmetricSpace::parse(space_descriptor);
      const nlohmann::json j = nlohmann::json::parse(read_text_file(in_path));
      std::vector<Operator> xs;
      for (const nlohmann::json& jx : j.at("operators"))
        xs.push_back(operator_from_json(jx.dump()));
      const FreeFamily family = FreeFamily::over_scalars(std::move(xs), !uncentered);
      const CapNorm cap = cap_norm(family, space);
      std::printf("cap %.12g (column %.12g, row %.12g, diagonal %.12g)\n", cap.value,
                  cap.column, cap.row, cap.diagonal);
      const SigmaResult sigma = sigma_norm(family, space, solver_config_from(cfg));
      std::printf("sigma %.12g (%s after %d iterations)\n", sigma.value,
                  sigma.converged ? "converged" : "not converged", sigma.iterations);
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
