// Copyright 2026 The optipred Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "optipred/cli.hpp"

int main(int argc, char** argv) {
  namespace cli = optipred::cli;

  CLI::App app{"optipred: optimal prediction measures for polynomial regression on finite candidate sets"};
  app.require_subcommand(1);

  std::string problem_path;
  std::string report_path;
  cli::DesignFlags design_flags;
  std::string csv_path;
  bool no_timestamp = false;
  auto* design = app.add_subcommand("design", "compute and certify the optimal design for a problem file");
  design->add_option("problem", problem_path, "problem file (JSON)")->required();
  design->add_option("-o,--output", design_flags.output, "report file (JSON); '-' for stdout")->required();
  design->add_option("--csv", csv_path, "also write (coordinates, weight) rows as CSV");
  design->add_flag("--no-timestamp", no_timestamp, "omit the timestamp so reports are byte-reproducible");

  int degree = 0;
  std::string z0_text;
  cli::HoelLevineFlags hl_flags;
  auto* hl = app.add_subcommand("hoel-levine", "closed-form design on the Chebyshev extreme points of [-1, 1]");
  hl->add_option("-n,--degree", degree, "polynomial degree")->required();
  hl->add_option("--z0", z0_text, "external point: 2, -1.5, i, 1+2i, or {\"re\":..,\"im\":..}")->required();
  hl->add_option("-o,--output", hl_flags.output, "report file (JSON); stdout when omitted");
  hl->add_flag("--no-timestamp", no_timestamp, "omit the timestamp");

  auto* growth = app.add_subcommand("growth", "polynomial of extremal growth at the external point");
  growth->add_option("problem", problem_path, "problem file (JSON)")->required();

  cli::VerifyFlags verify_flags;
  auto* verify = app.add_subcommand("verify", "recompute the certificate of a report from scratch");
  verify->add_option("problem", problem_path, "problem file (JSON)")->required();
  verify->add_option("report", report_path, "report file (JSON)")->required();
  verify->add_flag("--oracle", verify_flags.oracle, "also run the brute-force grid and gradient oracles");
  verify->add_option("--resolution", verify_flags.resolution, "oracle grid resolution r")->check(CLI::PositiveNumber);
  verify->add_option("--rounds", verify_flags.rounds, "oracle refinement rounds")->check(CLI::NonNegativeNumber);
  verify->add_option("--cap", verify_flags.cap, "maximum number of oracle grid points");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::exit_code::input_error;
  }

  if (*design) {
    design_flags.timestamp = !no_timestamp;
    if (!csv_path.empty()) design_flags.csv = csv_path;
    return cli::cmd_design(problem_path, design_flags, std::cout, std::cerr);
  }
  if (*hl) {
    hl_flags.timestamp = !no_timestamp;
    return cli::cmd_hoel_levine(degree, z0_text, hl_flags, std::cout, std::cerr);
  }
  if (*growth) return cli::cmd_growth(problem_path, std::cout, std::cerr);
  return cli::cmd_verify(problem_path, report_path, verify_flags, std::cout, std::cerr);
}
