// mframes: verification runs for moving-frame computations on surfaces.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include <mframes/cli.hpp>

namespace {

std::set<std::string> split_formats(const std::string& s) {
  std::set<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item != "csv" && item != "json") throw CLI::ValidationError("--format", "unknown format '" + item + "'");
    out.insert(item);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Moving-frame checks on surfaces of negative curvature"};
  app.require_subcommand(1, 1);

  std::string config_path, out_dir, formats;
  bool quiet = false;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON run configuration (defaults apply when omitted)")
        ->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory (overrides 'output')");
    sub->add_option("--format", formats, "comma-separated subset of csv,json (overrides 'formats')");
    sub->add_flag("--quiet,-q", quiet, "print errors only");
  };
  const std::pair<const char*, const char*> commands[] = {
      {"surface-info", "curvature statistics over a grid"},
      {"verify", "run every residual check with convergence rates"},
      {"net", "build the asymptotic Chebyshev net and write it"},
      {"area", "compare the two expressions for the area of a net"},
      {"hyperbolic", "disk areas, isometry invariance and the Picard demo"},
  };
  for (const auto& [name, help] : commands) add_common(app.add_subcommand(name, help));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : mframes::cli::kUsageError;
  }

  std::string text = "{}";
  if (!config_path.empty()) {
    std::ifstream f(config_path, std::ios::binary);
    if (!f) {
      std::cerr << "error: cannot read " << config_path << '\n';
      return mframes::cli::kUsageError;
    }
    std::stringstream buf;
    buf << f.rdbuf();
    text = buf.str();
  }

  mframes::cli::Overrides ov;
  ov.quiet = quiet;
  if (!out_dir.empty()) ov.out = out_dir;
  if (!formats.empty()) {
    try {
      ov.formats = split_formats(formats);
    } catch (const CLI::ValidationError& e) {
      std::cerr << "error: " << e.what() << '\n';
      return mframes::cli::kUsageError;
    }
  }
  const std::string command = app.get_subcommands().front()->get_name();
  return mframes::cli::run_text(command, text, ov, std::cout, std::cerr);
}
