#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "asymint/errors.hpp"
#include "asymint/report.hpp"

namespace {

std::vector<int> parse_roots(const std::string& text) {
  std::vector<int> roots;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    int i = 0;
    try {
      i = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw asymint::ValidationError("roots", "expected a comma separated list of 1..4, got '" + text + "'");
    asymint::check_root_index(i);
    roots.push_back(i);
  }
  if (roots.empty()) throw asymint::ValidationError("roots", "no root index given");
  return roots;
}

void print_summary(const nlohmann::json& rep, std::ostream& os) {
  os << "status: " << rep["status"].get<std::string>() << "\n";
  if (!rep["error"].is_null()) os << "error: " << rep["error"]["code"].get<std::string>() << ": " << rep["error"]["message"].get<std::string>() << "\n";
  for (const auto& root : rep["roots"]) {
    os << "root " << root["index"].get<int>() << ": " << root["status"].get<std::string>();
    if (!root["case"].is_null()) os << " case=" << root["case"].get<std::string>();
    if (!root["rho"].is_null() && !root["rho"]["value"].is_null()) os << " rho=" << root["rho"]["value"].get<double>();
    if (!root["picard"].is_null()) os << " picard=" << root["picard"]["status"].get<std::string>();
    if (!root["error"].is_null()) os << " (" << root["error"]["message"].get<std::string>() << ")";
    os << "\n";
    for (const auto& [name, v] : root["checks"].items())
      if (v.is_boolean()) os << "  " << name << ": " << (v.get<bool>() ? "PASS" : "FAIL") << "\n";
  }
  if (!rep["wronskian"].is_null())
    os << "wronskian: " << rep["wronskian"]["normalized_t_max"] << " expected " << rep["wronskian"]["expected"]
       << (rep["wronskian"]["pass"].get<bool>() ? " PASS" : " FAIL") << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Asymptotic integration of perturbed fourth-order linear ODEs by Riccati reduction"};
  app.require_subcommand(1);

  std::string config, roots_text = "1,2,3,4", out_dir;
  std::vector<std::string> overrides;
  bool trace = false, serial = false, quiet = false;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "problem file (INI sections [equation], [domain], [solver])")->required()->check(CLI::ExistingFile);
    sub->add_option("--roots", roots_text, "root indices, e.g. 1,3");
    sub->add_flag("--trace", trace, "write iterate snapshots trace_i.csv");
    sub->add_option("--out", out_dir, "output directory for report.json and CSV files");
    sub->add_option("--tol", overrides, "override a setting, key=value (repeatable)");
    sub->add_flag("--serial", serial, "process roots one after another");
    sub->add_flag("-q,--quiet", quiet, "no summary on stdout");
  };
  std::map<CLI::App*, asymint::Stage> stages;
  stages[app.add_subcommand("analyze", "characteristic data, constants and hypothesis checks")] = asymint::Stage::Analyze;
  stages[app.add_subcommand("solve", "analyze plus fixed point iteration")] = asymint::Stage::Solve;
  stages[app.add_subcommand("verify", "solve plus synthesis and ODE cross-validation")] = asymint::Stage::Verify;
  stages[app.add_subcommand("report", "full pipeline")] = asymint::Stage::Report;
  for (auto& [sub, stage] : stages) add_common(sub);

  double n = 0.0, p = 0.0;
  std::string preset_out;
  auto* preset = app.add_subcommand("preset-biharmonic", "write the config for the radial biharmonic example");
  preset->add_option("--n", n, "dimension")->required();
  preset->add_option("--p", p, "exponent")->required();
  preset->add_option("--out", preset_out, "config file to write (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (preset->parsed()) {
      const asymint::BiharmonicPreset b = asymint::biharmonic_preset(n, p);
      const std::string text = asymint::to_config_text(b.spec);
      if (preset_out.empty()) {
        std::cout << text;
      } else {
        std::ofstream out(preset_out);
        if (!out) throw asymint::Error(asymint::Errc::InvalidArgument, "cannot write " + preset_out);
        out << text;
      }
      return 0;
    }

    asymint::RunOptions opts;
    for (auto& [sub, stage] : stages)
      if (sub->parsed()) opts.stage = stage;
    asymint::ProblemSpec spec = asymint::load_problem_spec(config);
    for (const std::string& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw asymint::ValidationError("tol", "expected key=value, got '" + kv + "'");
      asymint::set_field(spec, kv.substr(0, eq), kv.substr(eq + 1));
    }
    opts.roots = parse_roots(roots_text);
    opts.trace = trace;
    opts.parallel = !serial;
    if (!out_dir.empty()) opts.out_dir = out_dir;

    const asymint::RunResult result = asymint::run_report(spec, opts);
    if (!quiet) print_summary(result.report, std::cout);
    return result.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return asymint::exit_code_for(e);
  }
}
