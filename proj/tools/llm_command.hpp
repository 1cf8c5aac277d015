#pragma once

#include <cstdint>
#include <string>

#include <CLI11.hpp>

namespace freightneg::llm {

struct CliOptions {
  std::string mode = "carrier";  // "carrier": LLM carriers; "broker": LLM broker
  std::string base_url;
  std::string model;
  double temperature = -1.0;  // <0: persona/broker default
  int timeout_ms = 0;
  int retries = 3;
  bool mock = false;
  std::string strategy = "two-index";
  std::string carrier = "cooperative";
  double spread = 4.0;
  std::uint64_t seed = 7;
  std::size_t loads = 1;
  unsigned concurrency = 4;
  std::string log_path;
};

void add_cli_options(CLI::App* cmd, CliOptions& opts);
int run_cli(const CliOptions& opts);

}  // namespace freightneg::llm
