// SPDX-License-Identifier: Apache-2.0
// simulate: run a comm or radar sweep from a JSON config.
#include <cstdio>
#include <iostream>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "sjisac/harness.hpp"

int main(int argc, char** argv) {
  using namespace sjisac;
  CLI::App app{"Sampling-jitter sweeps for OFDM ISAC"};
  app.require_subcommand(1);

  std::string config, out = "out", engine;
  int workers = 1;
  long long seed = -1;
  bool quiet = false;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config,-c", config, "sweep JSON")->required()->check(CLI::ExistingFile);
    sub->add_option("--out,-o", out, "output directory");
    sub->add_option("--engine", engine, "fine-grid | farrow | sinc-oracle (overrides config)");
    sub->add_option("--workers,-j", workers, "worker threads")->check(CLI::Range(1, 256));
    sub->add_option("--seed", seed, "base seed (overrides config)")->check(CLI::NonNegativeNumber);
    sub->add_flag("--quiet,-q", quiet, "no progress output");
  };
  auto* comm = app.add_subcommand("comm", "EVM / SIR sweep");
  auto* radar = app.add_subcommand("radar", "range-Doppler sweep");
  add_common(comm);
  add_common(radar);
  CLI11_PARSE(app, argc, argv);

  try {
    SweepSpec spec = load_sweep(config);
    const bool is_radar = radar->parsed();
    if ((spec.kind == SweepKind::Radar) != is_radar)
      throw ConfigError(fmt::format("config kind does not match subcommand '{}'", is_radar ? "radar" : "comm"));
    if (!engine.empty()) spec.engine = parse_engine(engine);
    if (seed >= 0) spec.base_seed = static_cast<std::uint64_t>(seed);
    spec.validate();

    RunOptions opt;
    opt.workers = workers;
    opt.image_dir = std::filesystem::path(out) / "images";
    if (!quiet)
      opt.progress = [](std::size_t done, std::size_t total) {
        std::fprintf(stderr, "\r%zu/%zu", done, total);
        if (done == total) std::fputc('\n', stderr);
      };
    const auto rows = is_radar ? run_radar(spec, opt) : run_comm(spec, opt);
    report(rows, spec, out);
    if (!quiet) fmt::print(stderr, "wrote {} rows to {}\n", rows.size(), out);
  } catch (const ConfigError& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
  return 0;
}
