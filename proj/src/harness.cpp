#include "foggyedge/harness.hpp"

#include "foggyedge/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace foggyedge {

namespace {

std::string fmt(const char* f, double v)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string rateLabel(double r)
{
  return fmt("%g", r);
}

void writeTextFile(const std::string& path, const std::string& text)
{
  std::ofstream f(path, std::ios::binary);
  if (!f)
    throw ConfigError("cannot write " + path);
  f << text;
}

int modeRank(Mode m)
{
  return static_cast<int>(m);
}

} // namespace

RunSummary runScenario(const ScenarioConfig& cfg, const std::string& out_dir, bool write_tables)
{
  Simulation sim(cfg);
  sim.run();
  if (!out_dir.empty())
    runScenarioOutputs(sim, out_dir, write_tables);
  return sim.summary();
}

void runScenarioOutputs(Simulation& sim, const std::string& out_dir, bool write_tables)
{
  std::filesystem::create_directories(out_dir);
  sim.trace().writeFile(out_dir + "/trace.bin");
  std::vector<RunSummary> one{sim.summary()};
  writeTextFile(out_dir + "/summary.csv", summariesToCsv(one));
  writeTextFile(out_dir + "/report.txt", sim.reportText());
  if (write_tables)
    writeTextFile(out_dir + "/tables.txt", sim.dumpTables());
}

SweepResult runSweep(const SweepOptions& opt)
{
  struct Cell {
    Mode mode;
    double rate;
  };
  std::vector<Cell> cells;
  for (double r : opt.rates)
    for (Mode m : opt.modes)
      cells.push_back(Cell{m, r});

  if (!opt.out_dir.empty())
    std::filesystem::create_directories(opt.out_dir);

  const int n = static_cast<int>(cells.size());
  std::vector<RunSummary> results(cells.size());
  std::vector<std::string> errors(cells.size());

#pragma omp parallel for schedule(dynamic, 1) num_threads(opt.jobs) if (opt.jobs > 1)
  for (int i = 0; i < n; ++i) {
    ScenarioConfig cfg = opt.base;
    cfg.mode = cells[i].mode;
    cfg.rate_per_sec = cells[i].rate;
    try {
      Simulation sim(cfg);
      sim.run();
      results[i] = sim.summary();
      if (!opt.out_dir.empty() && opt.write_traces) {
        sim.trace().writeFile(opt.out_dir + "/trace_" + modeName(cfg.mode) + "_r" +
                              rateLabel(cfg.rate_per_sec) + ".bin");
      }
    }
    catch (const std::exception& e) {
      errors[i] = modeName(cfg.mode) + " rate " + rateLabel(cfg.rate_per_sec) + ": " + e.what();
    }
  }

  SweepResult out;
  for (int i = 0; i < n; ++i) {
    if (!errors[i].empty())
      out.cell_errors.push_back(errors[i]);
    else
      out.rows.push_back(results[i]);
  }
  std::stable_sort(out.rows.begin(), out.rows.end(), [](const RunSummary& a, const RunSummary& b) {
    if (a.rate_per_sec != b.rate_per_sec)
      return a.rate_per_sec < b.rate_per_sec;
    return modeRank(a.mode) < modeRank(b.mode);
  });
  out.csv = summariesToCsv(out.rows);
  out.report = renderSweepReport(out.rows, opt.self_check, &out.self_check_passed);
  if (!out.cell_errors.empty()) {
    out.report += "\nfailed cells (table is partial):\n";
    for (const std::string& e : out.cell_errors)
      out.report += "  " + e + "\n";
  }

  if (!opt.out_dir.empty()) {
    writeTextFile(opt.out_dir + "/summary.csv", out.csv);
    writeTextFile(opt.out_dir + "/report.txt", out.report);
    if (opt.emit_plot)
      writeTextFile(opt.out_dir + "/plot.svg", renderSweepSvg(out.rows));
  }
  return out;
}

std::string renderSweepReport(const std::vector<RunSummary>& rows, bool with_self_check,
                              bool* self_check_passed)
{
  std::ostringstream os;
  os << "rate  mode       generated  satisfied  sat%    mean_s    p50_s     p95_s     c1     c2     c3     c4\n";
  for (const RunSummary& s : rows) {
    char line[256];
    std::snprintf(line, sizeof line,
                  "%-5s %-10s %-10llu %-10llu %-7.1f %-9s %-9s %-9s %-6llu %-6llu %-6llu %-6llu\n",
                  rateLabel(s.rate_per_sec).c_str(), modeName(s.mode).c_str(),
                  static_cast<unsigned long long>(s.generated),
                  static_cast<unsigned long long>(s.satisfied),
                  100.0 * s.stats.satisfaction_rate,
                  s.stats.mean_s ? fmt("%.4f", *s.stats.mean_s).c_str() : "-",
                  s.stats.p50_s ? fmt("%.4f", *s.stats.p50_s).c_str() : "-",
                  s.stats.p95_s ? fmt("%.4f", *s.stats.p95_s).c_str() : "-",
                  static_cast<unsigned long long>(s.case_counts[0]),
                  static_cast<unsigned long long>(s.case_counts[1]),
                  static_cast<unsigned long long>(s.case_counts[2]),
                  static_cast<unsigned long long>(s.case_counts[3]));
    os << line;
  }

  bool passed = true;
  if (with_self_check) {
    os << "\nsaturation ordering self-check (rates >= 5: FoggyEdge < EdgeOnly < CloudOnly,"
          " gaps >= 5%):\n";
    std::map<double, std::map<int, const RunSummary*>> byRate;
    for (const RunSummary& s : rows)
      byRate[s.rate_per_sec][modeRank(s.mode)] = &s;
    bool any = false;
    for (const auto& [rate, m] : byRate) {
      if (rate < 5.0 || m.size() != 3)
        continue;
      const RunSummary* f = m.at(modeRank(Mode::FoggyEdge));
      const RunSummary* e = m.at(modeRank(Mode::EdgeOnly));
      const RunSummary* c = m.at(modeRank(Mode::CloudOnly));
      if (!f->stats.mean_s || !e->stats.mean_s || !c->stats.mean_s) {
        os << "  rate " << rateLabel(rate) << ": MISSING STATISTICS\n";
        passed = false;
        continue;
      }
      any = true;
      double fm = *f->stats.mean_s, em = *e->stats.mean_s, cm = *c->stats.mean_s;
      bool ok = fm < em * 0.95 && em < cm * 0.95;
      if (!ok)
        passed = false;
      os << "  rate " << rateLabel(rate) << ": F=" << fmt("%.4f", fm)
         << " E=" << fmt("%.4f", em) << " C=" << fmt("%.4f", cm) << "  "
         << (ok ? "OK" : "VIOLATION") << "\n";
    }
    if (!any) {
      os << "  no rate >= 5 with all three modes present\n";
      passed = false;
    }
    os << "self-check: " << (passed ? "PASS" : "FAIL") << "\n";
  }
  if (self_check_passed != nullptr)
    *self_check_passed = passed;
  return os.str();
}

std::string renderSweepSvg(const std::vector<RunSummary>& rows)
{
  struct Pt {
    double rate, mean;
  };
  std::map<int, std::vector<Pt>> series; // mode rank -> points
  double maxRate = 1, maxMean = 0;
  for (const RunSummary& s : rows) {
    if (!s.stats.mean_s)
      continue;
    series[modeRank(s.mode)].push_back({s.rate_per_sec, *s.stats.mean_s});
    maxRate = std::max(maxRate, s.rate_per_sec);
    maxMean = std::max(maxMean, *s.stats.mean_s);
  }
  if (maxMean <= 0)
    maxMean = 1;

  const double W = 640, H = 400, L = 60, R = 20, T = 30, B = 50;
  auto X = [&](double r) { return L + (W - L - R) * (r / maxRate); };
  auto Y = [&](double m) { return H - B - (H - T - B) * (m / (maxMean * 1.1)); };

  const char* colors[3] = {"#2e7d32", "#ef6c00", "#c62828"};
  const char* names[3] = {"FoggyEdge", "EdgeOnly", "CloudOnly"};

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << W << " " << H
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"18\" text-anchor=\"middle\" font-size=\"14\">"
        "mean computation satisfaction delay vs request rate</text>\n";
  // axes
  os << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B
     << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
     << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    double m = maxMean * 1.1 * i / 5;
    os << "<line x1=\"" << L - 4 << "\" y1=\"" << Y(m) << "\" x2=\"" << L << "\" y2=\"" << Y(m)
       << "\" stroke=\"black\"/><text x=\"" << L - 8 << "\" y=\"" << Y(m) + 4
       << "\" text-anchor=\"end\">" << fmt("%.2f", m) << "</text>\n";
  }
  for (double r = 1; r <= maxRate + 1e-9; r += 1) {
    os << "<line x1=\"" << X(r) << "\" y1=\"" << H - B << "\" x2=\"" << X(r) << "\" y2=\""
       << H - B + 4 << "\" stroke=\"black\"/><text x=\"" << X(r) << "\" y=\"" << H - B + 18
       << "\" text-anchor=\"middle\">" << fmt("%g", r) << "</text>\n";
  }
  os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 10
     << "\" text-anchor=\"middle\">requests per second</text>\n";
  os << "<text x=\"16\" y=\"" << (T + H - B) / 2
     << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << (T + H - B) / 2
     << ")\">mean CSD (s)</text>\n";

  for (const auto& [rank, pts] : series) {
    os << "<polyline fill=\"none\" stroke=\"" << colors[rank % 3]
       << "\" stroke-width=\"2\" points=\"";
    for (const Pt& p : pts)
      os << fmt("%.1f", X(p.rate)) << "," << fmt("%.1f", Y(p.mean)) << " ";
    os << "\"/>\n";
    for (const Pt& p : pts)
      os << "<circle cx=\"" << fmt("%.1f", X(p.rate)) << "\" cy=\"" << fmt("%.1f", Y(p.mean))
         << "\" r=\"3\" fill=\"" << colors[rank % 3] << "\"/>\n";
  }
  double ly = T + 10;
  for (const auto& [rank, pts] : series) {
    (void)pts;
    os << "<rect x=\"" << W - R - 150 << "\" y=\"" << ly - 9 << "\" width=\"12\" height=\"12\""
       << " fill=\"" << colors[rank % 3] << "\"/><text x=\"" << W - R - 132 << "\" y=\"" << ly + 2
       << "\">" << names[rank % 3] << "</text>\n";
    ly += 18;
  }
  os << "</svg>\n";
  return os.str();
}

std::vector<double> parseRatesSpec(const std::string& spec)
{
  auto bad = [&](const std::string& why) {
    throw ConfigError("bad rates spec '" + spec + "': " + why);
  };
  std::vector<double> out;
  auto range = spec.find("..");
  if (range != std::string::npos) {
    long lo = 0, hi = 0;
    try {
      std::size_t p1 = 0, p2 = 0;
      lo = std::stol(spec.substr(0, range), &p1);
      hi = std::stol(spec.substr(range + 2), &p2);
      if (p1 != range || p2 != spec.size() - range - 2)
        bad("range bounds must be integers");
    }
    catch (const std::logic_error&) {
      bad("range bounds must be integers");
    }
    if (lo <= 0 || hi < lo)
      bad("range must be ascending and positive");
    for (long r = lo; r <= hi; ++r)
      out.push_back(static_cast<double>(r));
    return out;
  }
  std::istringstream is(spec);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    if (tok.empty())
      bad("empty element");
    double v = 0;
    try {
      std::size_t pos = 0;
      v = std::stod(tok, &pos);
      if (pos != tok.size())
        bad("not a number: " + tok);
    }
    catch (const std::logic_error&) {
      bad("not a number: " + tok);
    }
    if (v <= 0)
      bad("rates must be positive");
    out.push_back(v);
  }
  if (out.empty())
    bad("no rates given");
  return out;
}

} // namespace foggyedge
