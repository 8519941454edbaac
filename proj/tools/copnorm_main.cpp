#include <array>
#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "copnorm/cli.hpp"

namespace {

void add_common(CLI::App* cmd, copnorm::RunConfig& cfg, std::string& format) {
  cmd->add_option("--tol", cfg.tolerance, "numerical tolerance (default 1e-12)");
  cmd->add_option("--oracle-n", cfg.oracle_n, "truncation order for the matrix oracle");
  cmd->add_option("--points", cfg.sweep_points, "number of sweep rows");
  cmd->add_option("--format", format, "output format: json, csv, or text")
      ->check(CLI::IsMember({"json", "csv", "text"}));
  cmd->add_option("--seed", cfg.seed, "seed for randomized batteries");
  cmd->add_option("--out", cfg.out_file, "write output to FILE instead of stdout");
}

copnorm::OutputFormat parse_format(const std::string& s) {
  if (s == "json") return copnorm::OutputFormat::json;
  if (s == "csv") return copnorm::OutputFormat::csv;
  return copnorm::OutputFormat::text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"composition-operator norms on H^2 for linear fractional symbols"};
  app.require_subcommand(1);

  copnorm::RunConfig cfg;
  std::string format = "text";
  std::array<std::string, 4> coeffs;

  if (const char* env = std::getenv("COPNORM_MAX_TERMS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v > 0) cfg.max_terms = static_cast<int>(std::min(v, 100000000L));
  }

  auto add_coeffs = [&](CLI::App* cmd) {
    cmd->add_option("a", coeffs[0], "coefficient a of (az+b)/(cz+d)")->required();
    cmd->add_option("b", coeffs[1], "coefficient b")->required();
    cmd->add_option("c", coeffs[2], "coefficient c")->required();
    cmd->add_option("d", coeffs[3], "coefficient d")->required();
  };

  CLI::App* classify = app.add_subcommand("classify", "classify a linear fractional self-map");
  add_coeffs(classify);
  add_common(classify, cfg, format);

  CLI::App* norm = app.add_subcommand("norm", "full norm report for a symbol");
  add_coeffs(norm);
  add_common(norm, cfg, format);

  CLI::App* sweep = app.add_subcommand("sweep-theta", "sweep the rotated family phi_theta");
  add_common(sweep, cfg, format);

  CLI::App* oracle = app.add_subcommand("oracle", "cross-check against the matrix oracle");
  add_coeffs(oracle);
  add_common(oracle, cfg, format);

  CLI::App* selfcheck = app.add_subcommand("selfcheck", "run the invariant batteries");
  add_common(selfcheck, cfg, format);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return copnorm::exit_parse_error;
  }
  cfg.format = parse_format(format);

  if (classify->parsed()) return copnorm::run_classify(coeffs, cfg, std::cout, std::cerr);
  if (norm->parsed()) return copnorm::run_norm(coeffs, cfg, std::cout, std::cerr);
  if (sweep->parsed()) return copnorm::run_sweep_theta(cfg, std::cout, std::cerr);
  if (oracle->parsed()) return copnorm::run_oracle(coeffs, cfg, std::cout, std::cerr);
  if (selfcheck->parsed()) return copnorm::run_selfcheck(cfg, std::cout, std::cerr);
  return copnorm::exit_parse_error;
}
