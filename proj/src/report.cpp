#include "asymint/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <memory>

#include "asymint/errors.hpp"
#include "asymint/hypotheses.hpp"
#include "asymint/oracle.hpp"
#include "asymint/picard.hpp"
#include "asymint/synthesis.hpp"

namespace asymint {
namespace {

using json = nlohmann::json;

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

template <class V>
json numbers(const V& v) {
  json out = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(num(v(k)));
  return out;
}

json numbers(const std::vector<double>& v) {
  json out = json::array();
  for (double x : v) out.push_back(num(x));
  return out;
}

bool is_input_error(Errc c) {
  switch (c) {
    case Errc::SyntaxError:
    case Errc::UnknownIdentifier:
    case Errc::ParseError:
    case Errc::ValidationError:
    case Errc::InvalidArgument:
    case Errc::ComplexRoots:
    case Errc::RepeatedRealParts:
    case Errc::ZeroRoot:
      return true;
    default:
      return false;
  }
}

std::string orientation_name(OrientationPolicy p) {
  switch (p) {
    case OrientationPolicy::Auto: return "auto";
    case OrientationPolicy::Printed: return "printed";
    case OrientationPolicy::Reflected: return "reflected";
  }
  return "";
}

std::string stage_name(Stage s) {
  switch (s) {
    case Stage::Analyze: return "analyze";
    case Stage::Solve: return "solve";
    case Stage::Verify: return "verify";
    case Stage::Report: return "report";
  }
  return "";
}

json error_json(const std::exception& e) {
  json j = {{"code", "Error"}, {"message", e.what()}};
  if (const auto* err = dynamic_cast<const Error*>(&e)) j["code"] = std::string(errc_name(err->code()));
  return j;
}

json root_skeleton(int i) {
  return json{{"index", i},
              {"status", "not_run"},
              {"error", nullptr},
              {"lambda", nullptr},
              {"case", nullptr},
              {"gamma", nullptr},
              {"b", nullptr},
              {"pi", nullptr},
              {"orientation", nullptr},
              {"constants", nullptr},
              {"rho", nullptr},
              {"smallness", nullptr},
              {"h2", nullptr},
              {"picard", nullptr},
              {"envelope", nullptr},
              {"synthesis", nullptr},
              {"cross_validation", nullptr},
              {"checks",
               {{"h2", nullptr},
                {"smallness", nullptr},
                {"converged", nullptr},
                {"certificate", nullptr},
                {"residual", nullptr},
                {"envelope", nullptr},
                {"ratio_limits", nullptr},
                {"cross_validation", nullptr}}}};
}

struct Context {
  const ProblemSpec& spec;
  const CharacteristicData& cd;
  const Perturbations& r;
  const RunOptions& opts;
  Eigen::ArrayXd nodes;
  QuadratureOptions quad;
};

struct RootOutcome {
  json j;
  bool input_error = false;
  std::unique_ptr<FundamentalSolution> fs;
  std::vector<GridFunction> snapshots;
};

void write_csv_z(const std::filesystem::path& path, const GridFunction& z) {
  std::ofstream out(path);
  out << "t,z,dz,d2z\n";
  char buf[160];
  for (Eigen::Index n = 0; n < z.size(); ++n) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", z.t(n), z.value(n), z.d1(n), z.d2(n));
    out << buf;
  }
}

void write_csv_y(const std::filesystem::path& path, const FundamentalSolution& fs) {
  std::ofstream out(path);
  out << "t,y,y1_over_y,y2_over_y,y3_over_y,y4_over_y\n";
  char buf[200];
  const auto& t = fs.z().t;
  for (Eigen::Index n = 0; n < t.size(); ++n) {
    const Eigen::Vector4d q = fs.ratios(t(n));
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", t(n), fs.y(t(n)), q(0), q(1), q(2), q(3));
    out << buf;
  }
}

void write_csv_trace(const std::filesystem::path& path, const std::vector<GridFunction>& snaps) {
  std::ofstream out(path);
  out << "iter,t,z,dz,d2z\n";
  char buf[160];
  for (std::size_t k = 0; k < snaps.size(); ++k) {
    const GridFunction& z = snaps[k];
    for (Eigen::Index n = 0; n < z.size(); ++n) {
      std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.17g\n", k + 1, z.t(n), z.value(n), z.d1(n), z.d2(n));
      out << buf;
    }
  }
}

bool all_checks_pass(const json& checks) {
  for (const auto& [name, v] : checks.items())
    if (v.is_boolean() && !v.get<bool>()) return false;
  return true;
}

RootOutcome run_root(const Context& ctx, int i) {
  RootOutcome out;
  json& j = out.j;
  j = root_skeleton(i);
  json& checks = j["checks"];
  const ProblemSpec& spec = ctx.spec;
  const CharacteristicData& cd = ctx.cd;
  try {
    const RiccatiSystem sys = build_system(cd, ctx.r, i, spec.orientation, spec.gap_tol);
    const Orientation o = sys.kernel.orientation();
    j["lambda"] = cd.root(i);
    j["case"] = std::string(to_string(sys.kernel.pattern()));
    j["gamma"] = numbers(cd.shifted(i));
    j["b"] = numbers(sys.b);
    j["pi"] = root_product(cd, i);
    j["orientation"] = {{"selected", std::string(to_string(o))},
                        {"policy", orientation_name(spec.orientation)},
                        {"residual_printed", num(sys.orientation_choice.residual_printed)},
                        {"residual_reflected", num(sys.orientation_choice.residual_reflected)},
                        {"tolerance", sys.orientation_choice.tolerance}};

    // Constants and hypotheses.
    const ContractionConstants cc = contraction_constants(cd, i, spec.eta);
    j["constants"] = {{"delta_w", cc.delta_w},       {"alpha", numbers(cc.alpha)}, {"alpha_printed", numbers(cc.alpha_printed)},
                      {"A", cc.A},                   {"A_printed", cc.A_printed},  {"A_kernel", cc.A_kernel},
                      {"varsigma", cc.varsigma},     {"eta", cc.eta}};
    const RhoBound rho = rho_bound(cd, i, ctx.r, spec.t0, o, std::nullopt, ctx.quad);
    const Orientation other = o == Orientation::Printed ? Orientation::Reflected : Orientation::Printed;
    const RhoBound rho_other = rho_bound(cd, i, ctx.r, spec.t0, other, std::nullopt, ctx.quad);
    j["rho"] = {{"value", num(rho.rho)},
                {"argmax_t", num(rho.argmax_t)},
                {"perturbation_index", rho.argmax_j},
                {"tail_monotone", rho.tail_monotone},
                {"horizon", num(rho.horizon)},
                {"layout", std::string(to_string(o))},
                {"other_layout_value", num(rho_other.rho)}};
    const Smallness sm = smallness_check(cc.A_kernel, cc.varsigma, rho.rho);
    const Smallness sm_other = smallness_check(cc.A_kernel, cc.varsigma, rho_other.rho);
    j["smallness"] = {{"product", num(sm.product)},
                      {"ok", sm.ok},
                      {"Phi", sm.Phi ? num(*sm.Phi) : json(nullptr)},
                      {"product_other_layout", num(sm_other.product)},
                      {"Phi_other_layout", sm_other.Phi ? num(*sm_other.Phi) : json(nullptr)}};
    checks["smallness"] = sm.ok;

    const H2Report h2 = check_h2(sys.kernel, ctx.r, default_h2_samples(spec.t0, cd.min_gap), spec.t0, spec.h2_tol, ctx.quad);
    json samples = json::array();
    for (const auto& [t, v] : h2.samples) samples.push_back({num(t), num(v)});
    j["h2"] = {{"pass", h2.pass}, {"fitted_rate", num(h2.fitted_rate)}, {"tolerance", h2.tolerance}, {"samples", samples}};
    checks["h2"] = h2.pass;
    j["status"] = "analyzed";
    if (ctx.opts.stage == Stage::Analyze) {
      j["status"] = all_checks_pass(checks) ? "pass" : "fail";
      return out;
    }

    // Fixed point.
    const IntegralOperator T(sys, ctx.nodes);
    PicardOptions po;
    po.fp_tol = spec.fp_tol;
    po.max_iter = spec.max_iter;
    po.eta = spec.eta;
    po.keep_iterates = ctx.opts.trace;
    FixedPoint fp = iterate_to_fixed_point(T, po);
    const bool converged = fp.trace.status == IterationStatus::Converged;
    json picard = {{"status", std::string(to_string(fp.trace.status))},
                   {"iterations", fp.trace.n_iter},
                   {"norms", numbers(fp.trace.iterates)},
                   {"deltas", numbers(fp.trace.deltas)},
                   {"contraction", numbers(fp.trace.contraction)},
                   {"empirical_contraction", num(empirical_contraction(fp.trace))},
                   {"predicted_contraction", num(sm.product)},
                   {"norm", num(c0_norm(fp.z))},
                   {"certificate", nullptr},
                   {"max_residual", nullptr},
                   {"warning", fp.trace.warning.empty() ? json(nullptr) : json(fp.trace.warning)},
                   {"nodes", ctx.nodes.size()},
                   {"t_max", ctx.nodes(ctx.nodes.size() - 1)}};
    checks["converged"] = converged;
    out.snapshots = std::move(fp.trace.snapshots);
    if (ctx.opts.out_dir) write_csv_z(*ctx.opts.out_dir / ("z_" + std::to_string(i) + ".csv"), fp.z);
    if (ctx.opts.out_dir && ctx.opts.trace)
      write_csv_trace(*ctx.opts.out_dir / ("trace_" + std::to_string(i) + ".csv"), out.snapshots);
    if (!converged) {
      j["picard"] = picard;
      j["status"] = "fail";
      return out;
    }
    const double certificate = c0_distance(T.apply(fp.z), fp.z);
    const double max_residual = riccati_residuals(T, fp.z).abs().maxCoeff();
    picard["certificate"] = num(certificate);
    picard["max_residual"] = num(max_residual);
    j["picard"] = picard;
    checks["certificate"] = certificate <= spec.fp_tol;
    checks["residual"] = max_residual <= spec.residual_tol;

    if (sm.Phi) {
      const double beta = admissible_beta(cd, i, o).natural();
      const EnvelopeCheck env = envelope_check(sys, cd, fp.z, beta, *sm.Phi, ctx.quad);
      j["envelope"] = {{"status", "checked"},
                       {"beta", env.beta},
                       {"Phi", env.Phi},
                       {"domain", env.domain},
                       {"merged_finite", env.merged_finite},
                       {"max_ratio", num(env.max_ratio)},
                       {"max_ratio_value_channel", num(env.max_ratio_value)},
                       {"max_ratio_split", num(env.max_ratio_split)},
                       {"pass", env.pass}};
      checks["envelope"] = env.pass;
    } else {
      j["envelope"] = {{"status", "not_applicable"}, {"beta", nullptr}, {"Phi", nullptr}, {"domain", nullptr},
                       {"merged_finite", nullptr}, {"max_ratio", nullptr}, {"max_ratio_value_channel", nullptr},
                       {"max_ratio_split", nullptr}, {"pass", nullptr}};
    }
    if (ctx.opts.stage == Stage::Solve) {
      j["status"] = all_checks_pass(checks) ? "pass" : "fail";
      return out;
    }

    // Synthesis and oracle.
    out.fs = std::make_unique<FundamentalSolution>(fundamental_solution(sys, cd, fp.z));
    const FundamentalSolution& fs = *out.fs;
    const double t_max = ctx.nodes(ctx.nodes.size() - 1);
    std::vector<double> ts;
    for (int n = 1; n <= 16; ++n) ts.push_back(spec.t0 + (t_max - spec.t0) * n / 16.0);
    const RatioErrors re = derivative_ratio_limits(fs, ts, spec.ratio_tol);
    double gap_max = 0.0;
    AsymptoticFormula last{};
    for (double t : ts) {
      last = asymptotic_integral_formula(fs, t);
      gap_max = std::max(gap_max, last.relative_gap);
    }
    j["synthesis"] = {{"ratio_errors_at_t_max", numbers(Eigen::VectorXd(re.error.row(re.error.rows() - 1).transpose()))},
                      {"ratio_tolerance", re.tolerance},
                      {"ratio_pass", re.pass},
                      {"y_at_t_max", num(fs.y(t_max))},
                      {"log_y_at_t_max", num(fs.log_y(t_max))},
                      {"asymptotic_gap_final", num(last.relative_gap)},
                      {"asymptotic_gap_max", num(gap_max)},
                      {"asymptotic_gap_plus_sign_final", num(last.relative_gap_printed)},
                      {"prefactor_at_t_max", numbers(last.prefactor)}};
    checks["ratio_limits"] = re.pass;
    if (ctx.opts.out_dir) write_csv_y(*ctx.opts.out_dir / ("y_" + std::to_string(i) + ".csv"), fs);

    const CrossValidation cv = cross_validate(fs, spec.a, ctx.r, spec.oracle_span);
    j["cross_validation"] = {{"method", cv.method},
                             {"span", cv.span},
                             {"max_error", num(cv.max_error)},
                             {"tolerance", cv.tolerance},
                             {"riccati_method", cv.riccati_method},
                             {"riccati_span", cv.riccati_span},
                             {"riccati_max_error", num(cv.riccati_max_error)},
                             {"pass", cv.pass}};
    checks["cross_validation"] = cv.pass;
    j["status"] = all_checks_pass(checks) ? "pass" : "fail";
  } catch (const Error& e) {
    j["status"] = "error";
    j["error"] = {{"code", std::string(errc_name(e.code()))}, {"message", std::string("root ") + std::to_string(i) + ": " + e.what()}};
    out.input_error = is_input_error(e.code());
  }
  return out;
}

json problem_json(const ProblemSpec& spec, double t_max) {
  return {{"a", {spec.a.a3, spec.a.a2, spec.a.a1, spec.a.a0}},
          {"r", {spec.r[0], spec.r[1], spec.r[2], spec.r[3]}},
          {"t0", spec.t0},
          {"t_max", num(t_max)},
          {"nodes", spec.nodes},
          {"eta", spec.eta},
          {"fp_tol", spec.fp_tol},
          {"quad_tol", spec.quad_tol},
          {"root_tol", spec.root_tol},
          {"gap_tol", spec.gap_tol},
          {"imag_tol", spec.imag_tol},
          {"h2_tol", spec.h2_tol},
          {"ratio_tol", spec.ratio_tol},
          {"residual_tol", spec.residual_tol},
          {"max_iter", spec.max_iter},
          {"oracle_span", spec.oracle_span},
          {"orientation", orientation_name(spec.orientation)}};
}

}  // namespace

int exit_code_for(const std::exception& e) noexcept {
  if (const auto* err = dynamic_cast<const Error*>(&e)) return is_input_error(err->code()) ? 2 : 1;
  return 1;
}

RunResult run_report(const ProblemSpec& spec, const RunOptions& opts) {
  RunResult result;
  json& rep = result.report;
  rep = {{"schema_version", 1},
         {"stage", stage_name(opts.stage)},
         {"status", "error"},
         {"error", nullptr},
         {"problem", problem_json(spec, spec.t_max.value_or(std::nan("")))},
         {"spectrum", nullptr},
         {"roots", json::array()},
         {"wronskian", nullptr}};
  if (opts.out_dir) std::filesystem::create_directories(*opts.out_dir);
  auto finish = [&](int code) {
    result.exit_code = code;
    if (opts.out_dir) {
      std::ofstream out(*opts.out_dir / "report.json");
      out << rep.dump(2) << "\n";
    }
    return result;
  };

  std::optional<CharacteristicData> cd;
  Perturbations r;
  try {
    validate(spec);
    for (int i : opts.roots) check_root_index(i);
    r = parse_perturbations(spec);
    cd = characteristic_data(spec.a, spec.spectra_options());
  } catch (const std::exception& e) {
    rep["error"] = error_json(e);
    return finish(exit_code_for(e));
  }
  const double t_max = spec.t_max.value_or(default_t_max(spec.t0, cd->min_gap));
  rep["problem"]["t_max"] = t_max;
  rep["spectrum"] = {{"roots", numbers(cd->lambda)},
                     {"min_gap", cd->min_gap},
                     {"vandermonde", vandermonde(cd->lambda)},
                     {"root_sum", cd->lambda.sum()},
                     {"minus_a3", -spec.a.a3}};

  Context ctx{spec, *cd, r, opts, graded_nodes(spec.t0, t_max, spec.nodes),
              QuadratureOptions{spec.quad_tol, 1e-11, 40}};
  std::vector<RootOutcome> outcomes;
  if (opts.parallel && opts.roots.size() > 1) {
    std::vector<std::future<RootOutcome>> jobs;
    for (int i : opts.roots) jobs.push_back(std::async(std::launch::async, run_root, std::cref(ctx), i));
    for (auto& job : jobs) outcomes.push_back(job.get());
  } else {
    for (int i : opts.roots) outcomes.push_back(run_root(ctx, i));
  }

  bool all_pass = true, input_error = false;
  for (auto& o : outcomes) {
    all_pass = all_pass && o.j["status"] == "pass";
    input_error = input_error || o.input_error;
    rep["roots"].push_back(o.j);
  }

  if (opts.stage >= Stage::Verify && outcomes.size() == 4) {
    std::array<const FundamentalSolution*, 4> fss{};
    bool complete = true;
    for (const auto& o : outcomes) {
      if (!o.fs) complete = false;
      else fss[static_cast<std::size_t>(o.fs->root() - 1)] = o.fs.get();
    }
    if (complete) {
      const double expected = vandermonde(cd->lambda);
      const double w_end = wronskian_normalized(fss, t_max);
      const double rel = std::abs(w_end - expected) / std::abs(expected);
      const bool pass = rel <= 0.01;
      rep["wronskian"] = {{"normalized_t0", num(wronskian_normalized(fss, spec.t0))},
                          {"normalized_t_max", num(w_end)},
                          {"expected", expected},
                          {"relative_error", num(rel)},
                          {"log_abs_unnormalized_t_max", num(log_abs_wronskian(fss, t_max))},
                          {"vandermonde_deviation_t_max", num(vandermonde_deviation(fss, t_max))},
                          {"pass", pass}};
      all_pass = all_pass && pass;
      if (opts.out_dir) {
        std::ofstream out(*opts.out_dir / "wronskian.csv");
        out << "t,normalized,log_abs_unnormalized\n";
        char buf[120];
        for (Eigen::Index n = 0; n < ctx.nodes.size(); ++n) {
          const double t = ctx.nodes(n);
          std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", t, wronskian_normalized(fss, t), log_abs_wronskian(fss, t));
          out << buf;
        }
      }
    }
  }
  rep["status"] = input_error ? "error" : (all_pass ? "pass" : "fail");
  return finish(input_error ? 2 : (all_pass ? 0 : 1));
}

}  // namespace asymint
