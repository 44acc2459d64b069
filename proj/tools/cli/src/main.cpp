#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "config.hpp"
#include "run.hpp"

using namespace ldspec::cli;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_output(const std::string& text, const std::optional<std::string>& path) {
  if (!path) {
    std::cout << text;
    return;
  }
  std::ofstream out(*path, std::ios::binary);
  if (!out || !(out << text)) throw std::runtime_error("cannot write '" + *path + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectra of periodic Schrodinger pencils with measure coefficients"};
  app.require_subcommand(1);

  std::string config_path, out_path, compare_path;
  Overrides ov;
  bool csv = false;
  for (const char* verb : {"bands", "eigs", "bs", "susy", "miura", "validate"}) {
    CLI::App* sub = app.add_subcommand(verb);
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--out", out_path, "result path (default: the config's output field, else stdout)");
    sub->add_option("--theta", ov.theta, "single quasi-momentum in [0, 2 pi)");
    sub->add_option("--zmin", ov.zmin, "lower end of the spectral range");
    sub->add_option("--zmax", ov.zmax, "upper end of the spectral range");
    sub->add_option("--modes", ov.modes, "Fourier modes N (basis size 2N + 1)");
    sub->add_option("--tol", ov.tol, "integrator tolerance");
    sub->add_flag("--csv", csv, "emit a flat CSV table instead of the JSON document");
    sub->add_option("--compare", compare_path, "compare the result with a stored document, ignoring metadata");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_parse;
  }
  const Task task = *task_from_name(app.get_subcommands().front()->get_name());

  RunConfig cfg;
  try {
    cfg = parse_config(read_file(config_path), task, ov);
  } catch (const std::exception& e) {
    std::cerr << "ldspec: " << e.what() << "\n";
    return exit_parse;
  }
  std::optional<std::string> out;
  if (!out_path.empty())
    out = out_path;
  else if (cfg.output)
    out = cfg.output;

  const Outcome result = execute(cfg);
  if (result.exit_code != exit_ok) {
    std::cerr << "ldspec: " << result.diagnostic << "\n";
    return result.exit_code;
  }
  if (task == Task::validate)
    std::cerr << "ldspec: validate: max relative mismatch " << result.document["results"]["max_rel_mismatch"].dump()
              << "\n";

  try {
    if (!compare_path.empty()) {
      const json reference = json::parse(read_file(compare_path));
      const auto diffs = compare_documents(result.document, reference);
      if (out) write_output(csv ? render_csv(result.document) : render_json(result.document), out);
      if (diffs.empty()) {
        std::cerr << "ldspec: documents agree (metadata ignored)\n";
        return exit_ok;
      }
      std::cerr << "ldspec: documents differ at " << diffs.size() << " path(s):\n";
      for (std::size_t i = 0; i < diffs.size() && i < 20; ++i) std::cerr << "  " << diffs[i] << "\n";
      return exit_mismatch;
    }
    write_output(csv ? render_csv(result.document) : render_json(result.document), out);
  } catch (const json::exception& e) {
    std::cerr << "ldspec: cannot parse comparison document: " << e.what() << "\n";
    return exit_parse;
  } catch (const std::exception& e) {
    std::cerr << "ldspec: " << e.what() << "\n";
    return exit_engine;
  }
  return exit_ok;
}
