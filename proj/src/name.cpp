#include "foggyedge/name.hpp"

#include <array>

namespace foggyedge {

namespace {

bool isSpaceByte(char c)
{
  // Explicit set, independent of locale.
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

std::string trim(const std::string& s)
{
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && isSpaceByte(s[b]))
    ++b;
  while (e > b && isSpaceByte(s[e - 1]))
    --e;
  return s.substr(b, e - b);
}

std::vector<std::string> splitOn(const std::string& s, char sep)
{
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

} // namespace

bool isValidComponent(const std::string& c)
{
  if (c.empty())
    return false;
  for (char ch : c) {
    if (ch == '/' || ch == '|' || ch == '?' || ch == ',')
      return false;
    if (isSpaceByte(ch))
      return false;
  }
  return true;
}

std::optional<FeName> tryParseName(const std::string& raw) noexcept
{
  static constexpr const char* SCHEME = "FE:/";
  if (raw.size() < 4 || raw.compare(0, 4, SCHEME) != 0)
    return std::nullopt;
  std::string rest = raw.substr(4);

  // Exactly one region/service separator.
  std::size_t bar = rest.find('|');
  if (bar == std::string::npos || rest.find('|', bar + 1) != std::string::npos)
    return std::nullopt;
  std::string regionPart = rest.substr(0, bar);
  std::string servicePart = rest.substr(bar + 1);

  std::vector<std::string> region = splitOn(regionPart, '/');
  if (region.size() != 3)
    return std::nullopt;

  FeName n;
  n.country = trim(region[0]);
  n.city = trim(region[1]);
  n.district = trim(region[2]);

  std::size_t q = servicePart.find('?');
  if (q == std::string::npos) {
    n.microservice = trim(servicePart);
  }
  else {
    n.microservice = trim(servicePart.substr(0, q));
    for (const std::string& p : splitOn(servicePart.substr(q + 1), ','))
      n.params.push_back(trim(p));
    if (n.params.empty())
      return std::nullopt;
  }

  if (!isValidComponent(n.country) || !isValidComponent(n.city) ||
      !isValidComponent(n.district) || !isValidComponent(n.microservice))
    return std::nullopt;
  for (const std::string& p : n.params)
    if (!isValidComponent(p))
      return std::nullopt;
  return n;
}

FeName parseName(const std::string& raw)
{
  std::optional<FeName> n = tryParseName(raw);
  if (!n)
    throw MalformedNameError("malformed name: " + raw);
  return *n;
}

std::string FeName::canonical() const
{
  std::string out = "FE:/";
  out += country;
  out += '/';
  out += city;
  out += '/';
  out += district;
  out += '|';
  out += microservice;
  if (!params.empty()) {
    out += '?';
    for (std::size_t i = 0; i < params.size(); ++i) {
      if (i > 0)
        out += ',';
      out += params[i];
    }
  }
  return out;
}

std::string FeName::canonicalWithoutParams() const
{
  FeName stripped = *this;
  stripped.params.clear();
  return stripped.canonical();
}

std::string serializeName(const FeName& n)
{
  return n.canonical();
}

std::size_t regionPrefixMatch(const FeName& n, std::span<const std::string> prefix)
{
  const std::array<const std::string*, 3> region = {&n.country, &n.city, &n.district};
  std::size_t len = 0;
  for (std::size_t i = 0; i < prefix.size() && i < region.size(); ++i) {
    if (*region[i] != prefix[i])
      break;
    ++len;
  }
  return len;
}

} // namespace foggyedge
