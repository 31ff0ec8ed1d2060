// Command-line front end: run one scenario cell, sweep modes x rates, or
// compare two binary traces. Exit codes: 0 success, 2 configuration error,
// 3 invariant violation during a run (1: trace-diff divergence / failed
// sweep self-check).
#include "foggyedge/harness.hpp"
#include "foggyedge/sim.hpp"
#include "foggyedge/trace.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

using namespace foggyedge;

namespace {

int cmdRun(const std::string& config_path, const std::string& mode_str, std::uint64_t seed,
           bool seed_set, double rate, bool rate_set, double duration, bool duration_set,
           const std::string& out_dir, bool tables)
{
  ScenarioConfig cfg = config_path.empty() ? ScenarioConfig{} : parseConfigFile(config_path);
  if (!mode_str.empty())
    cfg.mode = parseMode(mode_str);
  if (seed_set)
    cfg.seed = seed;
  if (rate_set)
    cfg.rate_per_sec = rate;
  if (duration_set)
    cfg.duration_s = duration;
  cfg.validate();

  Simulation sim(cfg);
  sim.run();
  std::cout << sim.reportText();
  if (!out_dir.empty()) {
    runScenarioOutputs(sim, out_dir, tables);
    std::cout << "wrote " << out_dir << "/{trace.bin,summary.csv,report.txt"
              << (tables ? ",tables.txt" : "") << "}\n";
  }
  return 0;
}

int cmdSweep(SweepOptions opt)
{
  SweepResult res = runSweep(opt);
  std::cout << res.report;
  if (!opt.out_dir.empty())
    std::cout << "wrote " << opt.out_dir << "/{summary.csv,report.txt"
              << (opt.write_traces ? ",trace_*.bin" : "")
              << (opt.emit_plot ? ",plot.svg" : "") << "}\n";
  if (!res.cell_errors.empty())
    return 3;
  if (opt.self_check && !res.self_check_passed)
    return 1;
  return 0;
}

int cmdTraceDiff(const std::string& a_path, const std::string& b_path)
{
  std::vector<TraceRecord> a = readTraceFile(a_path);
  std::vector<TraceRecord> b = readTraceFile(b_path);
  auto div = firstDivergence(a, b);
  if (!div) {
    std::cout << "traces identical (" << a.size() << " records)\n";
    return 0;
  }
  std::cout << "traces diverge at record " << *div << " of " << a.size() << " / " << b.size()
            << "\n";
  if (*div < a.size())
    std::cout << "  a: " << describeRecord(a[*div]) << "\n";
  else
    std::cout << "  a: <end of trace>\n";
  if (*div < b.size())
    std::cout << "  b: " << describeRecord(b[*div]) << "\n";
  else
    std::cout << "  b: <end of trace>\n";
  return 1;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"FoggyEdge named-data computation-offloading simulator"};
  app.require_subcommand(1);

  // --- run ---
  auto* run = app.add_subcommand("run", "Run one scenario cell and print its report");
  std::string run_config, run_mode, run_out;
  std::uint64_t run_seed = 0;
  double run_rate = 0, run_duration = 0;
  bool run_tables = false;
  run->add_option("--config", run_config, "Scenario config file (section.key = value)");
  run->add_option("--mode", run_mode, "FoggyEdge | EdgeOnly | CloudOnly");
  auto* run_seed_opt = run->add_option("--seed", run_seed, "Override sim.seed");
  auto* run_rate_opt = run->add_option("--rate", run_rate, "Override sim.rate_per_sec");
  auto* run_dur_opt = run->add_option("--duration", run_duration, "Override sim.duration_s");
  run->add_option("--out", run_out, "Directory for trace.bin/summary.csv/report.txt");
  run->add_flag("--tables", run_tables, "Also write end-of-run node tables (tables.txt)");

  // --- sweep ---
  auto* sweep = app.add_subcommand("sweep", "Run modes x rates and emit a comparison table");
  std::string sw_config, sw_modes = "FoggyEdge,EdgeOnly,CloudOnly", sw_rates = "1..10", sw_out;
  std::uint64_t sw_seed = 0;
  int sw_jobs = 1;
  bool sw_no_traces = false, sw_self_check = false, sw_emit_plot = false;
  sweep->add_option("--config", sw_config, "Scenario config file used as the cell template");
  sweep->add_option("--modes", sw_modes, "Comma-separated mode list");
  sweep->add_option("--rates", sw_rates, "Rates: '1..10' or '1,2,5.5'");
  auto* sw_seed_opt = sweep->add_option("--seed", sw_seed, "Override sim.seed");
  sweep->add_option("--jobs", sw_jobs, "Parallel worker threads across cells")
    ->check(CLI::PositiveNumber);
  sweep->add_option("--out", sw_out, "Output directory")->required();
  sweep->add_flag("--no-traces", sw_no_traces, "Skip per-cell trace files");
  sweep->add_flag("--self-check", sw_self_check,
                  "Assert saturation ordering F < E < C at rates >= 5 (exit 1 on failure)");
  sweep->add_flag("--emit-plot", sw_emit_plot, "Write plot.svg rendered from summary.csv rows");

  // --- trace-diff ---
  auto* diff = app.add_subcommand("trace-diff", "Compare two trace.bin files");
  std::string diff_a, diff_b;
  diff->add_option("a", diff_a, "First trace file")->required();
  diff->add_option("b", diff_b, "Second trace file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed())
      return cmdRun(run_config, run_mode, run_seed, run_seed_opt->count() > 0, run_rate,
                    run_rate_opt->count() > 0, run_duration, run_dur_opt->count() > 0, run_out,
                    run_tables);
    if (sweep->parsed()) {
      SweepOptions opt;
      opt.base = sw_config.empty() ? ScenarioConfig{} : parseConfigFile(sw_config);
      if (sw_seed_opt->count() > 0)
        opt.base.seed = sw_seed;
      std::istringstream ms(sw_modes);
      std::string tok;
      opt.modes.clear();
      while (std::getline(ms, tok, ','))
        opt.modes.push_back(parseMode(tok));
      if (opt.modes.empty())
        throw ConfigError("--modes: no modes given");
      opt.rates = parseRatesSpec(sw_rates);
      opt.jobs = sw_jobs;
      opt.out_dir = sw_out;
      opt.write_traces = !sw_no_traces;
      opt.self_check = sw_self_check;
      opt.emit_plot = sw_emit_plot;
      return cmdSweep(std::move(opt));
    }
    if (diff->parsed())
      return cmdTraceDiff(diff_a, diff_b);
  }
  catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  catch (const DecodeError& e) {
    std::cerr << "decode error: " << e.what() << "\n";
    return 2;
  }
  catch (const InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
