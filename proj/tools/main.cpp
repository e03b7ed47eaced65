// Command-line front end: configures one study, runs it, emits CSV/DAT
// files, and optionally asserts the fitted slopes against the predicted
// ones.  Exit codes: 0 clean, 1 failed assertion (or runtime failure),
// 2 usage or configuration error.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fracspec/experiment.hpp"
#include "fracspec/fem1d.hpp"
#include "fracspec/spacetime.hpp"
#include "json.hpp"

namespace {

using fracspec::ExperimentConfig;
using fracspec::ExperimentKind;

// Options shared by every study subcommand.
struct CommonFlags {
  std::string config_path;
  std::string out_dir;
  bool do_assert = false;
  double tol = 0.15;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path,
                  "JSON file mirroring the experiment configuration");
  cmd->add_option("--out", f.out_dir, "directory to write CSV/DAT files into");
  cmd->add_flag("--assert", f.do_assert,
                "exit 1 unless every fitted slope is within --tol of its "
                "prediction");
  cmd->add_option("--tol", f.tol, "slope tolerance for --assert")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

[[noreturn]] void bad_config(const std::string& msg) {
  throw std::invalid_argument("config: " + msg);
}

// Loads a JSON document whose keys mirror ExperimentConfig.  Unknown keys
// are rejected rather than ignored: a typo silently reverting a parameter
// to its default would poison a study.
void apply_json(const std::string& path, ExperimentConfig& c) {
  std::ifstream in(path);
  if (!in) bad_config("cannot open " + path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    bad_config(path + ": " + e.what());
  }
  if (!doc.is_object()) bad_config(path + ": top level must be an object");

  static const std::set<std::string> known = {
      "kind",   "alphas", "beta",       "gamma",     "theta",
      "lambda", "y0",     "degrees",    "h_exponent", "reference",
      "times",  "ml_index", "out_dir"};
  for (const auto& item : doc.items())
    if (!known.count(item.key())) bad_config("unknown key \"" + item.key() + '"');

  try {
    if (doc.contains("kind")) {
      const ExperimentKind kind =
          fracspec::parse_kind(doc["kind"].get<std::string>());
      if (kind != c.kind)
        bad_config("kind \"" + kind_name(kind) +
                   "\" does not match the subcommand (" + kind_name(c.kind) +
                   ")");
    }
    if (doc.contains("alphas")) doc["alphas"].get_to(c.alphas);
    if (doc.contains("beta")) doc["beta"].get_to(c.beta);
    if (doc.contains("gamma")) doc["gamma"].get_to(c.gamma);
    if (doc.contains("theta")) doc["theta"].get_to(c.theta);
    if (doc.contains("lambda")) doc["lambda"].get_to(c.lambda);
    if (doc.contains("y0")) doc["y0"].get_to(c.y0);
    if (doc.contains("degrees")) doc["degrees"].get_to(c.degrees);
    if (doc.contains("h_exponent")) doc["h_exponent"].get_to(c.h_exponent);
    if (doc.contains("reference")) doc["reference"].get_to(c.reference);
    if (doc.contains("times")) doc["times"].get_to(c.times);
    if (doc.contains("ml_index")) doc["ml_index"].get_to(c.ml_index);
    if (doc.contains("out_dir")) doc["out_dir"].get_to(c.out_dir);
  } catch (const nlohmann::json::type_error& e) {
    bad_config(path + ": " + e.what());
  }
}

std::string list_str(const std::vector<double>& v) {
  std::string s;
  char buf[40];
  for (double x : v) {
    std::snprintf(buf, sizeof buf, s.empty() ? "%g" : " %g", x);
    s += buf;
  }
  return s;
}

std::string list_str(const std::vector<int>& v) {
  std::vector<double> d(v.begin(), v.end());
  return list_str(d);
}

// One-line echo of the resolved plan, printed before the run starts.
void print_plan(const ExperimentConfig& c) {
  std::string line = "plan: " + kind_name(c.kind);
  line += "  alphas = [" + list_str(c.alphas) + "]";
  char buf[80];
  switch (c.kind) {
    case ExperimentKind::ode:
      std::snprintf(buf, sizeof buf, "  lambda = %g  y0 = %g", c.lambda, c.y0);
      line += buf;
      break;
    case ExperimentKind::example51:
      std::snprintf(buf, sizeof buf, "  beta = %g", c.beta);
      line += buf;
      break;
    case ExperimentKind::example52:
      std::snprintf(buf, sizeof buf, "  gamma = %g  theta = %g", c.gamma,
                    c.theta);
      line += buf;
      break;
    case ExperimentKind::example53:
      std::snprintf(buf, sizeof buf, "  gamma = %g", c.gamma);
      line += buf;
      break;
    case ExperimentKind::ml_eval:
      std::snprintf(buf, sizeof buf, "  beta = %g", c.ml_index);
      line += buf;
      line += "  t = [" + list_str(c.times) + "]";
      break;
    case ExperimentKind::besov_report:
      break;
  }
  if (c.kind != ExperimentKind::ml_eval &&
      c.kind != ExperimentKind::besov_report) {
    line += "  degrees = [" + list_str(c.degrees) + "]";
    if (c.kind != ExperimentKind::ode) {
      std::snprintf(buf, sizeof buf, "  h = 2^-%d  reference = %s",
                    c.h_exponent, c.reference.c_str());
      line += buf;
    }
  }
  if (!c.out_dir.empty()) line += "  out = " + c.out_dir;
  std::printf("%s\n", line.c_str());
}

int run_study(ExperimentConfig c, const CommonFlags& f) {
  if (!f.out_dir.empty()) c.out_dir = f.out_dir;
  fracspec::validate(c);
  print_plan(c);
  const fracspec::ExperimentResult res = fracspec::run(c);
  std::fputs(res.summary.c_str(), stdout);
  for (const std::string& path : res.files)
    std::printf("wrote %s\n", path.c_str());
  if (f.do_assert) {
    const bool ok = res.pass(f.tol);
    std::printf("assert: %s (tol %.3g)\n", ok ? "PASS" : "FAIL", f.tol);
    if (!ok) return 1;
  }
  return 0;
}

// pde-solve: one solve of one example, sampled on the mesh at the given
// times.  A plotting aid, not a study; no fits, no assertions.
struct SolveFlags {
  int example = 52;
  double alpha = 0.5;
  double beta = 0.75;
  double gamma = 0.5;
  double theta = 0.0;
  int degree = 64;
  int h_exponent = 10;
  std::vector<double> times = {1.0};
  std::string out_dir;
};

int run_solve(const SolveFlags& f) {
  ExperimentConfig c;
  c.kind = fracspec::parse_kind("example" + std::to_string(f.example));
  c.alphas = {f.alpha};
  c.beta = f.beta;
  c.gamma = f.gamma;
  c.theta = f.theta;
  c.h_exponent = f.h_exponent;
  // Default degrees are kept: a single solve has no reference to stay
  // clear of, so only the parameter windows are checked here.
  fracspec::validate(c);
  if (f.degree < 1) bad_config("degree must be >= 1");
  for (double t : f.times)
    if (!(t >= 0.0) || !(t <= 1.0))
      bad_config("sample times must lie in [0,1]");

  const fracspec::ProblemSpec spec = fracspec::example_problem(c, f.alpha);
  const auto basis = std::make_shared<const fracspec::ModalBasis>(
      fracspec::uniform_modal_basis(1 << f.h_exponent));
  const fracspec::SpaceTimeSolution sol =
      fracspec::solve(spec, f.degree, basis);

  std::printf("solve: %s  alpha = %g  M = %d  h = 2^-%d\n",
              kind_name(c.kind).c_str(), f.alpha, f.degree, f.h_exponent);
  std::string csv = "x,t,u\n";
  char buf[120];
  for (double t : f.times) {
    const Eigen::VectorXd nodal =
        fracspec::nodal_values(*basis, sol.modal_at(t));
    const auto& node = basis->mesh.node;
    for (int i = 1; i + 1 < static_cast<int>(node.size()); ++i) {
      std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.17g\n", node[i], t,
                    nodal[i - 1]);
      csv += buf;
    }
    const int mid = (static_cast<int>(node.size()) - 1) / 2;
    std::printf("t = %-8g u(%g) = %.12g\n", t, node[mid], nodal[mid - 1]);
  }
  if (!f.out_dir.empty()) {
    namespace fs = std::filesystem;
    fs::create_directories(f.out_dir);
    const fs::path path = fs::path(f.out_dir) / "solution.csv";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    out << csv;
    std::printf("wrote %s\n", path.string().c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Spectral-in-time solver for fractional diffusion: convergence "
      "studies, kernel evaluation, and coefficient-decay diagnostics"};
  app.require_subcommand(1);

  // ml-eval
  CLI::App* ml = app.add_subcommand(
      "ml-eval", "tabulate the relaxation kernel E_{alpha,beta}(-t)");
  CommonFlags ml_common;
  std::vector<double> ml_alphas;
  std::vector<double> ml_times;
  double ml_beta = 1.0;
  ml->add_option("--alpha", ml_alphas, "kernel indices alpha, in (0,1)");
  ml->add_option("--beta", ml_beta, "second kernel index")
      ->capture_default_str();
  ml->add_option("--t", ml_times, "arguments t >= 0");
  add_common(ml, ml_common);

  // ode-converge
  CLI::App* ode = app.add_subcommand(
      "ode-converge", "scalar relaxation study against the exact kernel");
  CommonFlags ode_common;
  std::vector<double> ode_alphas;
  std::vector<int> ode_degrees;
  double ode_lambda = 1.0, ode_y0 = 1.0;
  ode->add_option("--alpha", ode_alphas, "fractional orders, in (0,1)");
  ode->add_option("--lambda", ode_lambda, "decay coefficient")
      ->capture_default_str();
  ode->add_option("--y0", ode_y0, "initial value")->capture_default_str();
  ode->add_option("--degrees", ode_degrees, "spectral degrees, ascending");
  add_common(ode, ode_common);

  // pde-converge
  CLI::App* pde = app.add_subcommand(
      "pde-converge", "space-time convergence study of one example");
  CommonFlags pde_common;
  int pde_example = 0;
  std::vector<double> pde_alphas;
  std::vector<int> pde_degrees;
  double pde_beta = 0.75, pde_gamma = 0.5, pde_theta = 0.0;
  int pde_h = 10;
  std::string pde_reference = "numerical";
  pde->add_option("--example", pde_example, "which example: 51, 52, or 53")
      ->check(CLI::IsMember({51, 52, 53}));
  pde->add_option("--alpha", pde_alphas, "fractional orders, in (0,1)");
  pde->add_option("--beta", pde_beta, "solution exponent (example 51)")
      ->capture_default_str();
  pde->add_option("--gamma", pde_gamma, "data exponent (examples 52, 53)")
      ->capture_default_str();
  pde->add_option("--theta", pde_theta, "initial-data mix (example 52)")
      ->capture_default_str();
  pde->add_option("--degrees", pde_degrees, "spectral degrees, ascending");
  pde->add_option("--h-exponent", pde_h, "2^h cells on (0,1)")
      ->capture_default_str();
  pde->add_option("--reference", pde_reference,
                  "\"numerical\" or \"ml-exact\"")
      ->capture_default_str();
  add_common(pde, pde_common);

  // besov-report
  CLI::App* besov = app.add_subcommand(
      "besov-report", "coefficient-pairing decay of E_{alpha,1}(-t^alpha)");
  CommonFlags besov_common;
  std::vector<double> besov_alphas;
  besov->add_option("--alpha", besov_alphas, "fractional orders, in (0,1)");
  add_common(besov, besov_common);

  // pde-solve
  CLI::App* slv = app.add_subcommand(
      "pde-solve", "solve one example once and sample the solution");
  SolveFlags slv_flags;
  slv->add_option("--example", slv_flags.example, "which example: 51, 52, or 53")
      ->check(CLI::IsMember({51, 52, 53}))
      ->capture_default_str();
  slv->add_option("--alpha", slv_flags.alpha, "fractional order, in (0,1)")
      ->capture_default_str();
  slv->add_option("--beta", slv_flags.beta, "solution exponent (example 51)")
      ->capture_default_str();
  slv->add_option("--gamma", slv_flags.gamma, "data exponent (examples 52, 53)")
      ->capture_default_str();
  slv->add_option("--theta", slv_flags.theta, "initial-data mix (example 52)")
      ->capture_default_str();
  slv->add_option("--degree", slv_flags.degree, "spectral degree")
      ->capture_default_str();
  slv->add_option("--h-exponent", slv_flags.h_exponent, "2^h cells on (0,1)")
      ->capture_default_str();
  slv->add_option("--times", slv_flags.times, "sample times in [0,1]")
      ->capture_default_str();
  slv->add_option("--out", slv_flags.out_dir,
                  "directory for the sampled solution.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (ml->parsed()) {
      ExperimentConfig c;
      c.kind = ExperimentKind::ml_eval;
      if (!ml_common.config_path.empty()) apply_json(ml_common.config_path, c);
      if (ml->count("--alpha")) c.alphas = ml_alphas;
      if (ml->count("--beta")) c.ml_index = ml_beta;
      if (ml->count("--t")) c.times = ml_times;
      return run_study(std::move(c), ml_common);
    }
    if (ode->parsed()) {
      ExperimentConfig c;
      c.kind = ExperimentKind::ode;
      if (!ode_common.config_path.empty())
        apply_json(ode_common.config_path, c);
      if (ode->count("--alpha")) c.alphas = ode_alphas;
      if (ode->count("--lambda")) c.lambda = ode_lambda;
      if (ode->count("--y0")) c.y0 = ode_y0;
      if (ode->count("--degrees")) c.degrees = ode_degrees;
      return run_study(std::move(c), ode_common);
    }
    if (pde->parsed()) {
      ExperimentConfig c;
      c.kind = ExperimentKind::example52;  // placeholder until resolved
      const bool have_example = pde->count("--example") > 0;
      if (have_example)
        c.kind = fracspec::parse_kind("example" + std::to_string(pde_example));
      if (!pde_common.config_path.empty()) {
        if (!have_example) {
          // Let the file's "kind" choose the example.
          std::ifstream in(pde_common.config_path);
          if (!in) bad_config("cannot open " + pde_common.config_path);
          nlohmann::json doc;
          try {
            doc = nlohmann::json::parse(in);
          } catch (const nlohmann::json::parse_error& e) {
            bad_config(pde_common.config_path + ": " + e.what());
          }
          if (!doc.contains("kind"))
            bad_config("pde-converge needs --example or a \"kind\" entry");
          c.kind = fracspec::parse_kind(doc["kind"].get<std::string>());
          if (c.kind != ExperimentKind::example51 &&
              c.kind != ExperimentKind::example52 &&
              c.kind != ExperimentKind::example53)
            bad_config("\"" + kind_name(c.kind) +
                       "\" is not a pde-converge kind");
        }
        apply_json(pde_common.config_path, c);
      } else if (!have_example) {
        bad_config("pde-converge needs --example or a \"kind\" entry");
      }
      if (pde->count("--alpha")) c.alphas = pde_alphas;
      if (pde->count("--beta")) c.beta = pde_beta;
      if (pde->count("--gamma")) c.gamma = pde_gamma;
      if (pde->count("--theta")) c.theta = pde_theta;
      if (pde->count("--degrees")) c.degrees = pde_degrees;
      if (pde->count("--h-exponent")) c.h_exponent = pde_h;
      if (pde->count("--reference")) c.reference = pde_reference;
      return run_study(std::move(c), pde_common);
    }
    if (besov->parsed()) {
      ExperimentConfig c;
      c.kind = ExperimentKind::besov_report;
      if (!besov_common.config_path.empty())
        apply_json(besov_common.config_path, c);
      if (besov->count("--alpha")) c.alphas = besov_alphas;
      return run_study(std::move(c), besov_common);
    }
    return run_solve(slv_flags);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
