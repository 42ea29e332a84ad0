#include <cstdint>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "crf/io.hpp"

// CLI front end: load a structure definition (or a catalog fixture), run a
// set of named checks and print a text or JSON report.
//
// exit codes: 0 all checks passed, 1 at least one failed, 2 input error.

namespace {

using namespace crf;

Payload resolve_input(const std::string& input, RunConfig& cfg, bool& have_file_checks) {
  if (input.rfind("catalog:", 0) == 0) {
    Fixture fx = catalog_get(input.substr(8));
    have_file_checks = false;
    return fx.payload;
  }
  RunConfig loaded = load_definition(input);
  cfg.samples = loaded.samples;
  cfg.seed = loaded.seed;
  cfg.tol = loaded.tol;
  cfg.checks = loaded.checks;
  have_file_checks = !loaded.checks.empty();
  return loaded.payload;
}

std::vector<CheckSpec> split_checks(const std::string& csv) {
  std::vector<CheckSpec> out;
  std::size_t start = 0;
  while (start <= csv.size()) {
    std::size_t comma = csv.find(',', start);
    std::string name = csv.substr(start, comma == std::string::npos ? csv.size() - start
                                                                    : comma - start);
    if (!name.empty()) out.push_back(CheckSpec{name, {}});
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

int run_reports(const Payload& payload, const std::vector<CheckSpec>& checks,
                const RunConfig& rc, bool timing, bool serial) {
  CheckConfig cfg = rc.check_config();
  cfg.parallel = !serial;
  std::vector<CheckReport> reports;
  for (const auto& spec : checks) reports.push_back(run_check(payload, spec, cfg));
  if (rc.format == "json")
    std::cout << render_json(reports, timing);
  else
    std::cout << render_text(reports);
  for (const auto& r : reports)
    if (!r.pass) return 1;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"symbolic-numeric verification of generalized CRF-geometry"};
  app.require_subcommand(1);

  std::string input, checks_csv, report = "text";
  int samples = -1;
  std::int64_t seed = -1;
  double tol = -1;
  bool timing = false, serial = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--samples", samples, "sample points per check");
    cmd->add_option("--seed", seed, "PRNG seed");
    cmd->add_option("--tol", tol, "pass tolerance");
    cmd->add_option("--report", report, "text | json")
        ->check(CLI::IsMember({"text", "json"}));
    cmd->add_flag("--timing", timing, "include wall-clock millis in the JSON report");
    cmd->add_flag("--serial", serial, "disable the parallel point scan");
  };

  CLI::App* check = app.add_subcommand("check", "run checks on a definition file or fixture");
  check->add_option("input", input, "path to a definition file, or catalog:<name>")
      ->required();
  check->add_option("--checks", checks_csv, "comma-separated check names");
  add_common(check);

  CLI::App* catalog = app.add_subcommand("catalog", "built-in fixtures");
  CLI::App* cat_list = catalog->add_subcommand("list", "list fixture names");
  CLI::App* cat_run = catalog->add_subcommand("run", "run a fixture against its expected verdicts");
  std::string fixture_name;
  cat_run->add_option("name", fixture_name, "fixture name")->required();
  add_common(cat_run);
  catalog->require_subcommand(1);

  CLI::App* exp = app.add_subcommand("export", "write a catalog fixture as a definition file");
  std::string exp_name, exp_path;
  exp->add_option("name", exp_name, "catalog:<name>")->required();
  exp->add_option("path", exp_path, "output file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) {
      RunConfig rc;
      bool have_file_checks = false;
      Payload payload = resolve_input(input, rc, have_file_checks);
      if (samples > 0) rc.samples = samples;
      if (seed >= 0) rc.seed = static_cast<std::uint64_t>(seed);
      if (tol > 0) rc.tol = tol;
      rc.format = report;
      std::vector<CheckSpec> checks = rc.checks;
      if (!checks_csv.empty()) checks = split_checks(checks_csv);
      if (checks.empty()) throw InputError("no checks requested (use --checks or a checks[] key)");
      return run_reports(payload, checks, rc, timing, serial);
    }
    if (cat_list->parsed()) {
      for (const auto& n : catalog_names()) std::cout << n << "\n";
      return 0;
    }
    if (cat_run->parsed()) {
      CheckConfig cfg;
      if (samples > 0) cfg.samples = samples;
      if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
      if (tol > 0) cfg.tol = tol;
      cfg.parallel = !serial;
      auto results = catalog_run(fixture_name, cfg);
      bool ok = true;
      std::vector<CheckReport> reports;
      for (const auto& r : results) {
        reports.push_back(r.report);
        ok = ok && r.matches();
      }
      if (report == "json")
        std::cout << render_json(reports, timing);
      else
        std::cout << render_text(reports);
      for (const auto& r : results)
        if (!r.matches())
          std::cout << "verdict mismatch: " << r.report.name << " expected "
                    << (r.expected_pass ? "pass" : "fail") << "\n";
      return ok ? 0 : 1;
    }
    if (exp->parsed()) {
      std::string name = exp_name.rfind("catalog:", 0) == 0 ? exp_name.substr(8) : exp_name;
      Fixture fx = catalog_get(name);
      std::ofstream out(exp_path);
      if (!out) throw crf::InputError("cannot write '" + exp_path + "'");
      out << export_fixture(fx);
      return 0;
    }
  } catch (const crf::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const crf::StructureError& e) {
    std::cerr << "structure error: " << e.what() << "\n";
    return 2;
  } catch (const crf::EvalError& e) {
    std::cerr << "evaluation error: " << e.what() << "\n";
    return 2;
  } catch (const crf::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
