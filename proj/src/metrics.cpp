#include "foggyedge/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace foggyedge {

CsdStats computeCsd(std::span<const RequestRecord> records, Tick warmup_end)
{
  CsdStats out;
  std::vector<Tick> delays;
  for (const RequestRecord& r : records) {
    if (r.created_at < warmup_end)
      continue;
    ++out.considered;
    if (r.satisfied_at) {
      ++out.satisfied;
      delays.push_back(r.csd());
    }
  }
  if (out.considered > 0)
    out.satisfaction_rate =
      static_cast<double>(out.satisfied) / static_cast<double>(out.considered);
  if (delays.empty())
    return out;

  std::sort(delays.begin(), delays.end());
  long double sum = 0;
  for (Tick d : delays)
    sum += static_cast<long double>(d);
  out.mean_s = static_cast<double>(sum / static_cast<long double>(delays.size())) / TICKS_PER_SEC;

  auto nearestRank = [&](double pct) {
    std::size_t rank = static_cast<std::size_t>(
      std::ceil(pct * static_cast<double>(delays.size())));
    if (rank == 0)
      rank = 1;
    return ticksToSeconds(delays[rank - 1]);
  };
  out.p50_s = nearestRank(0.50);
  out.p95_s = nearestRank(0.95);
  return out;
}

RunSummary summarize(Mode mode, double rate, std::uint64_t seed,
                     std::span<const RequestRecord> records, Tick warmup_end)
{
  RunSummary s;
  s.mode = mode;
  s.rate_per_sec = rate;
  s.seed = seed;
  s.stats = computeCsd(records, warmup_end);
  for (const RequestRecord& r : records) {
    if (r.created_at < warmup_end)
      continue;
    ++s.generated;
    if (r.satisfied_at) {
      ++s.satisfied;
      if (r.offload_case && *r.offload_case >= 1 && *r.offload_case <= 4)
        ++s.case_counts[static_cast<std::size_t>(*r.offload_case - 1)];
    }
    else if (r.drop_reason) {
      ++s.dropped;
      ++s.drops_by_reason[*r.drop_reason];
    }
    else {
      ++s.in_flight_at_end;
    }
  }
  return s;
}

namespace {

std::string fmtDouble(double v)
{
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::string fmtOpt(const std::optional<double>& v)
{
  return v ? fmtDouble(*v) : std::string();
}

std::vector<std::string> splitCsvLine(const std::string& line)
{
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    }
    else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

} // namespace

std::string summaryCsvHeader()
{
  return "mode,rate,seed,generated,satisfied,dropped,in_flight,"
         "satisfaction_rate,mean_csd_s,p50_csd_s,p95_csd_s,case1,case2,case3,case4";
}

std::string summaryCsvRow(const RunSummary& s)
{
  std::ostringstream os;
  os << modeName(s.mode) << ',' << fmtDouble(s.rate_per_sec) << ',' << s.seed << ','
     << s.generated << ',' << s.satisfied << ',' << s.dropped << ',' << s.in_flight_at_end << ','
     << fmtDouble(s.stats.satisfaction_rate) << ',' << fmtOpt(s.stats.mean_s) << ','
     << fmtOpt(s.stats.p50_s) << ',' << fmtOpt(s.stats.p95_s);
  for (std::uint64_t c : s.case_counts)
    os << ',' << c;
  return os.str();
}

std::string summariesToCsv(std::span<const RunSummary> rows)
{
  std::ostringstream os;
  os << summaryCsvHeader() << '\n';
  for (const RunSummary& s : rows)
    os << summaryCsvRow(s) << '\n';
  return os.str();
}

std::vector<RunSummary> parseSummaryCsv(const std::string& text)
{
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line))
    throw ConfigError("empty summary csv");
  if (line.find("mode,rate") != 0)
    throw ConfigError("bad summary csv header");

  std::vector<RunSummary> out;
  while (std::getline(in, line)) {
    if (line.empty())
      continue;
    std::vector<std::string> f = splitCsvLine(line);
    if (f.size() != 15)
      throw ConfigError("bad summary csv row: " + line);
    RunSummary s;
    s.mode = parseMode(f[0]);
    s.rate_per_sec = std::stod(f[1]);
    s.seed = std::stoull(f[2]);
    s.generated = std::stoull(f[3]);
    s.satisfied = std::stoull(f[4]);
    s.dropped = std::stoull(f[5]);
    s.in_flight_at_end = std::stoull(f[6]);
    s.stats.considered = s.generated;
    s.stats.satisfied = s.satisfied;
    s.stats.satisfaction_rate = std::stod(f[7]);
    if (!f[8].empty())
      s.stats.mean_s = std::stod(f[8]);
    if (!f[9].empty())
      s.stats.p50_s = std::stod(f[9]);
    if (!f[10].empty())
      s.stats.p95_s = std::stod(f[10]);
    for (int i = 0; i < 4; ++i)
      s.case_counts[static_cast<std::size_t>(i)] = std::stoull(f[11 + static_cast<std::size_t>(i)]);
    out.push_back(std::move(s));
  }
  return out;
}

} // namespace foggyedge
