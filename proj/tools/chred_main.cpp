// chred — scenario-driven verification of controlled Hamiltonian systems on
// Poisson phase spaces: reduction criteria, matching conditions, momentum
// diagnostics and deterministic reports.
//
// Commands:
//   catalog list            built-in scenario names
//   catalog show <name>     print a built-in scenario document
//   catalog dump [--dir]    write every built-in scenario to disk
//   run <file|catalog:name> execute a scenario and emit a report
//   export                  re-emit a report as json or csv summary
//
// Exit codes: 0 all checks pass, 1 any check fails, 2 configuration error.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "chred/catalog.hpp"
#include "chred/report.hpp"
#include "chred/runner.hpp"
#include "chred/subspace.hpp"
#include "chred/version.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw chred::Error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw chred::Error("cannot write '" + out_path + "'");
  out << text;
}

int run_command(const std::string& target, const chred::RunOverrides& overrides,
                const std::string& out_path, const std::string& format) {
  chred::Scenario scenario;
  constexpr const char* kCatalogPrefix = "catalog:";
  if (target.rfind(kCatalogPrefix, 0) == 0) {
    scenario = chred::catalog_get(target.substr(std::strlen(kCatalogPrefix)));
  } else {
    chred::ParseResult parsed = chred::parse_scenario(read_file(target));
    if (!parsed.ok()) {
      std::cerr << "scenario errors:\n";
      for (const auto& e : parsed.errors) std::cerr << "  " << e << "\n";
      return kExitConfig;
    }
    scenario = *parsed.scenario;
  }

  chred::Report report = chred::run_scenario(scenario, overrides);
  write_output(format == "csv" ? chred::report_csv_summary(report)
                               : chred::report_json(report),
               out_path);
  std::cerr << "scenario " << report.scenario_name << ": "
            << (report.all_pass() ? "pass" : "fail") << " ("
            << report.checks.size() << " checks, wall_time_ms="
            << report.wall_time_ms << ")\n";
  return report.all_pass() ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"controlled Hamiltonian reduction toolkit"};
  app.set_version_flag("--version", chred::kVersion);
  app.require_subcommand(1);

  // catalog
  auto* catalog = app.add_subcommand("catalog", "built-in scenarios");
  catalog->require_subcommand(1);
  catalog->add_subcommand("list", "print scenario names");
  std::string show_name;
  auto* show = catalog->add_subcommand("show", "print a scenario document");
  show->add_option("name", show_name)->required();
  std::string dump_dir = "scenarios";
  auto* dump = catalog->add_subcommand("dump", "write scenarios to a directory");
  dump->add_option("--dir", dump_dir, "output directory");

  // run
  std::string run_target, run_out, run_format = "json", traj_dir;
  std::uint64_t seed = 0;
  int samples = 0;
  double tol = 0.0, fd_step = 0.0;
  auto* run = app.add_subcommand("run", "execute a scenario");
  run->add_option("target", run_target, "scenario file or catalog:<name>")
      ->required();
  auto* seed_opt = run->add_option("--seed", seed, "override the scenario seed");
  auto* samples_opt = run->add_option("--samples", samples, "override sample count");
  auto* tol_opt = run->add_option("--tol", tol, "override the residual tolerance");
  auto* fd_opt = run->add_option("--fd-step", fd_step, "override the FD step");
  run->add_option("--out", run_out, "report file (stdout when omitted)");
  run->add_option("--format", run_format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  run->add_option("--traj-out", traj_dir, "directory for trajectory CSV exports");

  // export
  std::string export_in, export_out, export_format = "json";
  auto* exp = app.add_subcommand("export", "re-emit a report");
  exp->add_option("--in", export_in, "report JSON file")->required();
  exp->add_option("--format", export_format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  exp->add_option("--out", export_out, "output file (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (catalog->parsed()) {
      if (catalog->get_subcommand("list")->parsed()) {
        for (const auto& name : chred::catalog_list()) std::cout << name << "\n";
        return kExitPass;
      }
      if (show->parsed()) {
        std::cout << chred::catalog_json(show_name);
        return kExitPass;
      }
      if (dump->parsed()) {
        std::filesystem::create_directories(dump_dir);
        for (const auto& name : chred::catalog_list()) {
          std::ofstream out(std::filesystem::path(dump_dir) / (name + ".json"),
                            std::ios::binary);
          out << chred::catalog_json(name);
        }
        std::cerr << "wrote " << chred::catalog_list().size()
                  << " scenarios to " << dump_dir << "\n";
        return kExitPass;
      }
    }
    if (run->parsed()) {
      chred::RunOverrides overrides;
      if (seed_opt->count()) overrides.seed = seed;
      if (samples_opt->count()) overrides.samples = samples;
      if (tol_opt->count()) overrides.tol = tol;
      if (fd_opt->count()) overrides.fd_step = fd_step;
      if (!traj_dir.empty()) {
        std::filesystem::create_directories(traj_dir);
        overrides.trajectory_dir = traj_dir;
      }
      return run_command(run_target, overrides, run_out, run_format);
    }
    if (exp->parsed()) {
      chred::Report report = chred::report_from_json(read_file(export_in));
      write_output(export_format == "csv" ? chred::report_csv_summary(report)
                                          : chred::report_json(report),
                   export_out);
      return kExitPass;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
