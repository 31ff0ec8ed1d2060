#ifndef FOGGYEDGE_HARNESS_HPP
#define FOGGYEDGE_HARNESS_HPP

#include "foggyedge/config.hpp"
#include "foggyedge/metrics.hpp"

#include <string>
#include <vector>

namespace foggyedge {

class Simulation;

/// Run one scenario cell. With a non-empty out_dir, writes trace.bin,
/// summary.csv, and report.txt there (plus tables.txt when write_tables).
RunSummary runScenario(const ScenarioConfig& cfg, const std::string& out_dir = "",
                       bool write_tables = false);

/// Write the standard output files for an already-run simulation.
void runScenarioOutputs(Simulation& sim, const std::string& out_dir, bool write_tables = false);

struct SweepOptions {
  ScenarioConfig base;                      // template; mode and rate overridden per cell
  std::vector<Mode> modes{Mode::FoggyEdge, Mode::EdgeOnly, Mode::CloudOnly};
  std::vector<double> rates{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  int jobs = 1;                             // worker threads across cells
  std::string out_dir;                      // empty: no files written
  bool write_traces = true;                 // per-cell trace_<mode>_r<rate>.bin
  bool self_check = false;                  // evaluate saturation ordering
  bool emit_plot = false;                   // write plot.svg from the summary
};

struct SweepResult {
  std::vector<RunSummary> rows;             // sorted by (rate, mode)
  std::vector<std::string> cell_errors;     // one message per failed cell
  std::string csv;                          // rows as CSV (fixed schema)
  std::string report;                       // plain-text comparison table
  bool self_check_passed = true;            // meaningful when options.self_check
};

/// Run modes x rates cells with a shared seed. Cells are independent and run in
/// parallel when jobs > 1; results are identical to a serial sweep. Cell
/// failures are collected in cell_errors ("partial tables flagged"), not thrown.
SweepResult runSweep(const SweepOptions& opt);

/// Comparison table plus (optionally) the saturation-ordering self-check:
/// at every rate >= 5 with all three modes present, mean CSD must satisfy
/// FoggyEdge < EdgeOnly < CloudOnly with >= 5% gaps.
std::string renderSweepReport(const std::vector<RunSummary>& rows, bool with_self_check,
                              bool* self_check_passed);

/// Static SVG line chart: mean CSD vs rate, one polyline per mode.
std::string renderSweepSvg(const std::vector<RunSummary>& rows);

/// Rate list syntax: "1..10" (integer range) or "1,2,5.5" (explicit list).
/// Throws ConfigError on malformed input or non-positive rates.
std::vector<double> parseRatesSpec(const std::string& spec);

} // namespace foggyedge

#endif // FOGGYEDGE_HARNESS_HPP
