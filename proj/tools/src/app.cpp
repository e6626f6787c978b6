#include "app.hpp"

#include "commands.hpp"
#include "config.hpp"

#include "wavemap/error.hpp"
#include "wavemap/serialize.hpp"

#include "CLI11.hpp"

#include <functional>
#include <ostream>
#include <vector>

namespace wavemap::cli {

namespace {

// flag values are applied only when given on the command line
struct Flags {
  std::vector<std::function<void(RunConfig&)>> setters;

  template <class T, class F>
  void add(CLI::App* app, const std::string& name, const std::string& help, F&& assign) {
    auto value = std::make_shared<T>();
    CLI::Option* opt = app->add_option(name, *value, help);
    setters.push_back([opt, value, assign](RunConfig& c) {
      if (opt->count() > 0) assign(c, *value);
    });
  }
  void flag(CLI::App* app, const std::string& name, const std::string& help, std::function<void(RunConfig&, bool)> assign) {
    auto value = std::make_shared<bool>(false);
    CLI::Option* opt = app->add_flag(name, *value, help);
    setters.push_back([opt, value, assign](RunConfig& c) {
      if (opt->count() > 0) assign(c, *value);
    });
  }
};

void common(Flags& f, CLI::App* s) {
  f.add<int>(s, "--n", "profile index n >= 0", [](RunConfig& c, int v) { c.n = v; });
  f.add<int>(s, "--ell", "equivariance index ell >= 1", [](RunConfig& c, int v) { c.ell = v; });
  f.add<std::string>(s, "-o,--output", "output path, '-' for stdout", [](RunConfig& c, const std::string& v) { c.output.path = v; });
  f.add<std::string>(s, "--format", "json or csv", [](RunConfig& c, const std::string& v) { c.output.format = v; });
  f.add<double>(s, "--ode-rel", "relative ODE tolerance", [](RunConfig& c, double v) { c.tolerances.ode_rel = v; });
  f.add<double>(s, "--ode-abs", "absolute ODE tolerance", [](RunConfig& c, double v) { c.tolerances.ode_abs = v; });
  f.add<double>(s, "--match-tol", "profile matching tolerance", [](RunConfig& c, double v) { c.tolerances.match_tol = v; });
  f.add<double>(s, "--eig-tol", "eigenvalue root tolerance", [](RunConfig& c, double v) { c.tolerances.eig_tol = v; });
  f.add<double>(s, "--eps", "endpoint series offset", [](RunConfig& c, double v) { c.grid.eps = v; });
  f.add<int>(s, "--series-order", "endpoint series order", [](RunConfig& c, int v) { c.grid.series_order = v; });
  f.add<std::string>(s, "--profile", "read the profile from a JSON document",
                     [](RunConfig& c, const std::string& v) { c.spectrum.profile_path = v; });
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Self-similar wave maps: profiles, spectra and linear evolution", "wavemap"};
  std::string config_path;
  bool emit_config = false;
  app.add_option("--config", config_path, "JSON run configuration (unknown keys are rejected)");
  app.add_flag("--emit-config", emit_config, "print the fully resolved configuration and exit");
  app.require_subcommand(0, 1);

  Flags f;
  std::vector<std::pair<CLI::App*, Command>> subs;
  auto* profile = app.add_subcommand("profile", "shoot the profile f_{n,ell}");
  auto* spectrum = app.add_subcommand("spectrum", "negative eigenvalues of A_{n,ell}");
  auto* infty = app.add_subcommand("spectrum-infty", "negative eigenvalues of A_infinity");
  auto* evolve = app.add_subcommand("evolve", "linear evolution in similarity variables");
  auto* verify = app.add_subcommand("verify-table1", "recompute Table 1 and compare with the printed digits");
  subs = {{profile, Command::profile},
          {spectrum, Command::spectrum},
          {infty, Command::spectrum_infty},
          {evolve, Command::evolve},
          {verify, Command::verify_table1}};
  for (auto& [s, cmd] : subs) common(f, s);

  f.add<double>(spectrum, "--mu-max", "largest mu scanned", [](RunConfig& c, double v) { c.spectrum.mu_max = v; });
  f.add<int>(infty, "--count", "number of eigenvalues", [](RunConfig& c, int v) { c.spectrum.count = v; });
  f.add<double>(infty, "--mu-max", "largest mu scanned by --direct", [](RunConfig& c, double v) { c.spectrum.mu_max = v; });
  f.flag(infty, "--direct", "Lagrange-bracket shooting instead of the phase condition",
         [](RunConfig& c, bool v) { c.spectrum.direct = v; });
  f.add<std::string>(evolve, "--seed", "zero, eigenmode, gauge or random", [](RunConfig& c, const std::string& v) { c.evolve.seed = v; });
  f.add<int>(evolve, "--j", "eigenmode index", [](RunConfig& c, int v) { c.evolve.j = v; });
  f.flag(evolve, "--decaying", "seed the decaying branch u_s = -mu u", [](RunConfig& c, bool v) { c.evolve.growing = !v; });
  f.add<double>(evolve, "--sigma-max", "final similarity time (0: default)", [](RunConfig& c, double v) { c.evolve.sigma_max = v; });
  f.add<double>(evolve, "--interval", "output spacing in sigma (0: default)", [](RunConfig& c, double v) { c.evolve.interval = v; });
  f.add<int>(evolve, "--grid", "number of grid intervals", [](RunConfig& c, int v) { c.grid.size = v; });
  f.add<double>(evolve, "--delta", "domain truncation 1 - rho_max", [](RunConfig& c, double v) { c.grid.delta = v; });
  f.add<std::uint64_t>(evolve, "--random-seed", "RNG seed for random data", [](RunConfig& c, std::uint64_t v) { c.evolve.random_seed = v; });
  f.add<std::vector<double>>(evolve, "--snapshot", "sigma values for full-state snapshots (json)",
                             [](RunConfig& c, const std::vector<double>& v) { c.evolve.snapshots = v; });

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << error_record("invalid_argument", e.what()) << '\n';
    return 2;
  }

  RunConfig c;
  bool have_command = false;
  try {
    if (!config_path.empty()) {
      const std::string text = read_text_file(config_path);
      apply_json(c, text);
      have_command = text.find("\"command\"") != std::string::npos;
    }
    for (auto& [s, cmd] : subs) {
      if (s->parsed()) {
        c.command = cmd;
        have_command = true;
      }
    }
    for (auto& set : f.setters) set(c);
    validate(c);
  } catch (const Error& e) {
    err << error_record(std::string(to_string(e.kind())), e.what()) << '\n';
    return 2;
  }
  if (emit_config) {
    out << to_json(c) << '\n';
    return 0;
  }
  if (!have_command) {
    err << error_record("invalid_argument", "no command given (subcommand or \"command\" in --config)") << '\n';
    return 2;
  }
  return run(c, out, err);
}

}  // namespace wavemap::cli
