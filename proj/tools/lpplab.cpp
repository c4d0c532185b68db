// lpplab: command-line front end for the last-passage library.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "lpp/config.hpp"
#include "lpp/experiments.hpp"
#include "lpp/io.hpp"
#include "lpp/tasep.hpp"
#include "lpp/verify.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitVerdictFailure = 1;
constexpr int kExitUsage = 2;

struct Options {
  std::optional<double> rho, t;
  std::optional<int> m, n;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::optional<std::string> boundary, tie;
  std::string out;
};

std::string default_out_dir() {
  const char* env = std::getenv("LPPLAB_OUT");
  return env && *env ? env : "lpplab-out";
}

void add_common(CLI::App* app, Options& o, bool with_samples) {
  app->add_option("--rho", o.rho, "density in (0,1)");
  app->add_option("--t", o.t, "time (characteristic point, TASEP horizon)");
  app->add_option("--m", o.m, "columns");
  app->add_option("--n", o.n, "rows");
  app->add_option("--seed", o.seed, "master seed");
  if (with_samples) app->add_option("--samples", o.samples, "Monte Carlo sample count");
  app->add_option("--boundary", o.boundary, "boundary kind")
      ->check(CLI::IsMember({"equilibrium", "rarefaction", "zero-west", "zero-south", "zero-both"}));
  app->add_option("--tie", o.tie, "tie policy")->check(CLI::IsMember({"rightmost", "leftmost"}));
  app->add_option("--out", o.out, "output directory (default $LPPLAB_OUT or lpplab-out)");
}

void apply_overrides(lpp::ExperimentConfig& c, const Options& o) {
  if (o.rho) c.rho = *o.rho;
  if (o.t) c.t = *o.t;
  if (o.m) c.m = *o.m;
  if (o.n) c.n = *o.n;
  if (o.seed) c.seed = *o.seed;
  if (o.samples) c.samples = *o.samples;
  if (o.boundary) c.boundary = *o.boundary;
  if (o.tie) c.tie = lpp::parse_tie_policy(*o.tie);
}

std::string command_line(int argc, char** argv) {
  std::string s;
  for (int k = 0; k < argc; ++k) s += (k ? " " : "") + std::string(argv[k]);
  return s;
}

struct Instance {
  lpp::WeightArray weights;
  double rho;
  lpp::TiePolicy tie;
};

/// Single-instance commands: m, n given directly or through --t.
Instance make_instance(const Options& o) {
  const double rho = o.rho.value_or(0.5);
  lpp::require_density(rho, "rho");
  int m = o.m.value_or(25);
  int n = o.n.value_or(25);
  if (o.t) {
    const lpp::Dimensions d = lpp::characteristic_point(rho, *o.t);
    m = d.m;
    n = d.n;
  }
  if (m < 1 || n < 1) throw std::invalid_argument("m and n must be at least 1");
  const std::string boundary = o.boundary.value_or("equilibrium");
  return {lpp::sample_with_boundary(boundary, rho, m, n, o.seed.value_or(1)), rho,
          lpp::parse_tie_policy(o.tie.value_or("rightmost"))};
}

void finish(const std::filesystem::path& dir, lpp::RunManifest& man, const std::vector<std::filesystem::path>& files) {
  for (std::size_t k = 0; k < files.size(); ++k) man.add("output_" + std::to_string(k), files[k].string());
  lpp::write_manifest(dir / "manifest.csv", man);
  std::cout << "wrote " << files.size() << " files and manifest.csv to " << dir.string() << '\n';
}

int cmd_field(const Options& o, const std::string& cmd) {
  const Instance in = make_instance(o);
  const std::filesystem::path dir = o.out;
  lpp::RunManifest man = lpp::start_manifest(cmd, o.seed.value_or(1));
  const lpp::LppField f = lpp::compute_field(in.weights);
  const lpp::LatticePath p = lpp::backtrack_path(f, in.tie);
  std::vector<std::filesystem::path> files{dir / "weights.csv", dir / "field.csv"};
  lpp::save_weights(files[0], in.weights);
  {
    auto out = lpp::detail::open_output(files[1]);
    lpp::write_field_csv(out, f);
  }
  std::cout << "G(" << f.m() << "," << f.n() << ") = " << lpp::format_double(f.corner()) << '\n'
            << "exit Z = " << p.exit << '\n';
  finish(dir, man, files);
  return kExitPass;
}

int cmd_path(const Options& o, const std::string& cmd) {
  const Instance in = make_instance(o);
  const std::filesystem::path dir = o.out;
  lpp::RunManifest man = lpp::start_manifest(cmd, o.seed.value_or(1));
  const lpp::LppField f = lpp::compute_field(in.weights);
  const lpp::LatticePath p = lpp::backtrack_path(f, in.tie);
  const lpp::Decomposition d = lpp::decompose(f, in.tie);
  const auto file = dir / "path.csv";
  {
    auto out = lpp::detail::open_output(file);
    lpp::write_sites_csv(out, p.sites);
  }
  std::cout << "G = " << lpp::format_double(f.corner()) << '\n'
            << "exit Z = " << d.exit << '\n'
            << "U_Z = " << lpp::format_double(d.axis) << '\n'
            << "A_Z = " << lpp::format_double(d.interior) << '\n'
            << "ties = " << p.ties << '\n';
  finish(dir, man, {file});
  return kExitPass;
}

int cmd_interface(const Options& o, const std::string& cmd) {
  const Instance in = make_instance(o);
  const std::filesystem::path dir = o.out;
  lpp::RunManifest man = lpp::start_manifest(cmd, o.seed.value_or(1));
  const lpp::LppField f = lpp::compute_field(in.weights);
  const lpp::CompetitionInterface ci = lpp::build_interface(f);
  const auto file = dir / "interface.csv";
  {
    auto out = lpp::detail::open_output(file);
    lpp::write_sites_csv(out, ci.sites);
  }
  std::cout << "stop = " << (ci.stop == lpp::InterfaceStop::kEast ? "east" : "north") << '\n'
            << "v(n) = " << (ci.v_hit ? std::to_string(ci.v) : std::string("none")) << '\n'
            << "w(m) = " << (ci.w_hit ? std::to_string(ci.w) : std::string("none")) << '\n'
            << "Z* = " << ci.z_star() << '\n'
            << "Z = " << lpp::backtrack_path(f, in.tie).exit << '\n';
  finish(dir, man, {file});
  return kExitPass;
}

int cmd_tasep(const Options& o, int track, const std::string& cmd) {
  const double rho = o.rho.value_or(0.5);
  const double horizon = o.t.value_or(60.0);
  const std::filesystem::path dir = o.out;
  lpp::RunManifest man = lpp::start_manifest(cmd, o.seed.value_or(1));
  lpp::TasepOptions opt;
  opt.track = track;
  opt.record_log = true;
  const lpp::TasepTrajectory tr = lpp::run_tasep(rho, horizon, o.seed.value_or(1), opt);
  std::vector<std::filesystem::path> files{dir / "events.csv", dir / "exchange.csv"};
  {
    auto out = lpp::detail::open_output(files[0]);
    lpp::write_event_log_csv(out, tr);
  }
  {
    auto out = lpp::detail::open_output(files[1]);
    lpp::write_exchange_csv(out, tr);
  }
  std::cout << "events = " << tr.events << '\n'
            << "identity checks = " << tr.identity_checks << ", failures = " << tr.identity_failures << '\n'
            << "P_0 jumps = " << tr.p0_jumps.size() << ", H_0 jumps = " << tr.h0_jumps.size() << '\n'
            << "tracked exchanges complete = " << (tr.complete() ? "yes" : "no") << '\n';
  finish(dir, man, files);
  return tr.identity_failures == 0 && tr.valid() ? kExitPass : kExitVerdictFailure;
}

int cmd_experiment(const std::string& name, const std::string& config, const Options& o, const std::string& cmd) {
  lpp::ExperimentConfig c = config.empty() ? lpp::default_config(name) : lpp::load_config(config, name);
  apply_overrides(c, o);
  lpp::validate_config(c);
  const std::filesystem::path dir = o.out;
  lpp::RunManifest man = lpp::start_manifest(cmd, c.seed);
  man.add("config", lpp::config_text(c));
  const lpp::EstimatorReport r = lpp::run_experiment(c);
  auto files = lpp::save_report(dir, name, r);
  const auto cfg = dir / "config.cfg";
  {
    auto out = lpp::detail::open_output(cfg);
    lpp::write_config(out, c);
  }
  files.push_back(cfg);
  lpp::write_report_text(std::cout, r);
  finish(dir, man, files);
  return r.passed() ? kExitPass : kExitVerdictFailure;
}

int cmd_verify(bool quick, const std::vector<int>& only, const Options& o, const std::string& cmd) {
  const std::uint64_t seed = o.seed.value_or(1);
  const std::filesystem::path dir = o.out;
  lpp::RunManifest man = lpp::start_manifest(cmd, seed);
  man.add("mode", quick ? "quick" : "full");
  const auto results = lpp::verify_all(quick, seed, only, [](const lpp::CriterionResult& r) {
    std::cout << "criterion " << r.id << " (" << r.title << "): " << (r.passed() ? "PASS" : "FAIL") << "  ["
              << lpp::format_fixed(r.seconds, 1) << " s]" << std::endl;
    for (const auto& rep : r.reports) {
      for (const auto& v : rep.verdicts) {
        if (!v.pass) std::cout << "    failed: " << rep.experiment << "." << v.name << " = " << lpp::format_double(v.value) << '\n';
      }
    }
  });
  const auto files = lpp::save_verification(dir, results, quick, seed);
  bool all = true;
  for (const auto& r : results) all = all && r.passed();
  std::cout << (all ? "all criteria passed" : "some criteria FAILED") << '\n';
  finish(dir, man, files);
  return all ? kExitPass : kExitVerdictFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Last-passage percolation laboratory"};
  app.require_subcommand(1);
  Options opt;
  opt.out = default_out_dir();

  auto* field = app.add_subcommand("field", "sample weights, write the field CSV, print G(m,n)");
  add_common(field, opt, false);
  auto* path = app.add_subcommand("path", "maximal path, exit point and decomposition");
  add_common(path, opt, false);
  auto* iface = app.add_subcommand("interface", "competition interface and Z*");
  add_common(iface, opt, false);
  auto* tasep = app.add_subcommand("tasep", "simulate TASEP from the Palm state; --t is the horizon");
  add_common(tasep, opt, false);
  int track = 5;
  tasep->add_option("--track", track, "exchange times recorded for labels 0..track")->check(CLI::NonNegativeNumber);

  auto* experiment = app.add_subcommand("experiment", "run one Monte Carlo experiment");
  std::string name, config;
  experiment->add_option("name", name, "experiment name")->required()->check(CLI::IsMember(lpp::experiment_names()));
  experiment->add_option("--config", config, "key=value configuration file")->check(CLI::ExistingFile);
  add_common(experiment, opt, true);

  auto* verify = app.add_subcommand("verify-all", "run every acceptance criterion");
  bool quick = false;
  std::vector<int> only;
  verify->add_flag("--quick", quick, "reduced sample sizes");
  verify->add_option("--criteria", only, "restrict to these criterion numbers")->delimiter(',');
  verify->add_option("--seed", opt.seed, "master seed");
  verify->add_option("--out", opt.out, "output directory (default $LPPLAB_OUT or lpplab-out)");

  app.add_subcommand("list", "list experiment names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  const std::string cmd = command_line(argc, argv);
  try {
    if (*field) return cmd_field(opt, cmd);
    if (*path) return cmd_path(opt, cmd);
    if (*iface) return cmd_interface(opt, cmd);
    if (*tasep) return cmd_tasep(opt, track, cmd);
    if (*experiment) return cmd_experiment(name, config, opt, cmd);
    if (*verify) return cmd_verify(quick, only, opt, cmd);
    for (const auto& n : lpp::experiment_names()) std::cout << n << '\n';
    return kExitPass;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}
