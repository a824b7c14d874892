// wavemodels: run, compare and check the wave-model solvers from the command line.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wavemodels/cli/check.hpp"
#include "wavemodels/cli/config.hpp"
#include "wavemodels/cli/run.hpp"

namespace wm = wavemodels;
namespace cli = wavemodels::cli;
namespace fs = std::filesystem;

namespace {

struct Overrides {
  std::optional<int> nodes;
  std::optional<double> tmax;
  std::optional<double> sample_every;
  std::string output_dir;
};

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  if (!is) throw wm::ConfigError("cannot read config file " + p.string(), "<file>");
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

// A config file path, or the name of a preset.
cli::RunConfig load(const std::string& arg) {
  if (fs::exists(arg)) {
    cli::RunConfig c = cli::parse_config(slurp(arg));
    if (c.name == "run") c.name = fs::path(arg).stem().string();
    return c;
  }
  if (auto p = cli::find_preset(arg)) return *p;
  throw wm::ConfigError("'" + arg + "' is neither a config file nor a preset", "<argument>");
}

void apply(cli::RunConfig& c, const Overrides& o) {
  if (o.nodes) c.n_nodes = *o.nodes;
  if (o.tmax) c.t_max = *o.tmax;
  if (o.sample_every) c.sample_every = *o.sample_every;
  if (!o.output_dir.empty()) c.output_dir = (fs::path(o.output_dir) / c.name).string();
  cli::validate(c);
}

int do_run(const std::string& arg, const Overrides& o) {
  cli::RunConfig c = load(arg);
  apply(c, o);
  const fs::path dir = cli::resolve_output_dir(c);
  const cli::RunOutcome r = cli::execute(c);
  cli::write_run(r, dir);
  std::cout << dir.string() << ": " << (r.numeric_failure ? "numeric_failure" : r.traj.stop.to_string())
            << " at t=" << r.traj.final_time << " (" << r.traj.stats.accepted << " steps, " << r.wall_seconds
            << " s)\n";
  if (r.numeric_failure) std::cerr << "error: " << r.error << '\n';
  return cli::exit_code(r);
}

int do_compare(const std::vector<std::string>& args, const std::string& reference, const Overrides& o) {
  std::vector<cli::RunConfig> cfgs;
  for (const auto& a : args) {
    cfgs.push_back(load(a));
    Overrides each = o;
    each.output_dir.clear();
    apply(cfgs.back(), each);
  }
  std::optional<std::map<double, std::vector<double>>> ref;
  if (!reference.empty()) ref = cli::read_reference(reference);
  const cli::CompareResult res = cli::compare(cfgs, ref ? &*ref : nullptr);
  const char* env = std::getenv("WAVEMODELS_OUTPUT_DIR");
  const fs::path root = !o.output_dir.empty() ? fs::path(o.output_dir) : fs::path(env && *env ? env : "runs");
  const fs::path dir = root / "compare";
  cli::write_compare(res, dir);
  std::cout << "t,a,b,sup_diff_h\n";
  for (const auto& row : res.table) {
    std::cout << cli::format_double(row.t) << ',' << row.a << ',' << row.b << ',' << cli::format_double(row.sup_diff)
              << '\n';
  }
  std::cerr << "wrote " << (dir / "compare.csv").string() << '\n';
  int code = cli::kExitOk;
  for (const auto& r : res.runs) code = std::max(code, cli::exit_code(r));
  return code;
}

int do_check(bool full) {
  const cli::CheckReport rep = cli::run_checks(full);
  std::cout << cli::to_json(rep).dump(2) << '\n';
  return rep.passed() ? cli::kExitOk : cli::kExitInvariant;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudospectral solvers for interface wave models"};
  app.require_subcommand(1);
  Overrides o;
  auto add_overrides = [&](CLI::App* sub) {
    sub->add_option("--nodes", o.nodes, "number of grid nodes (power of two)");
    sub->add_option("--tmax", o.tmax, "final time");
    sub->add_option("--sample-every", o.sample_every, "snapshot interval (<= 0: every accepted step)");
    sub->add_option("--output-dir", o.output_dir, "output root (default $WAVEMODELS_OUTPUT_DIR or ./runs)");
  };

  std::string run_arg;
  auto* run = app.add_subcommand("run", "integrate one config file or preset");
  run->add_option("config", run_arg, "config file or preset name")->required();
  add_overrides(run);

  std::vector<std::string> compare_args;
  std::string reference;
  auto* compare = app.add_subcommand("compare", "run graph models on shared data and tabulate sup |h_a - h_b|");
  compare->add_option("configs", compare_args, "config files or presets")->required();
  compare->add_option("--reference", reference, "external snapshot file with t and h columns");
  add_overrides(compare);

  bool full = false;
  auto* check = app.add_subcommand("check", "run the invariant suite and print a JSON report");
  check->add_flag("--full", full, "include Birkhoff-Rott convergence and the H1-decay and strip monitors");

  auto* list_models = app.add_subcommand("list-models", "print the model ids");
  auto* list_presets = app.add_subcommand("list-presets", "print the scenario presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : cli::kExitConfig;
  }

  try {
    if (*run) return do_run(run_arg, o);
    if (*compare) return do_compare(compare_args, reference, o);
    if (*check) return do_check(full);
    if (*list_models) {
      for (const auto& m : wm::kModels) std::cout << m.name << '\n';
      return 0;
    }
    if (*list_presets) {
      for (const auto& p : cli::presets()) std::cout << p.name << "\t" << p.description << '\n';
      return 0;
    }
  } catch (const wm::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return cli::kExitConfig;
  } catch (const wm::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return cli::kExitConfig;
  } catch (const wm::ParameterError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return cli::kExitConfig;
  } catch (const wm::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return cli::kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
