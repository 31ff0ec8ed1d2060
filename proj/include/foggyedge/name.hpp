#ifndef FOGGYEDGE_NAME_HPP
#define FOGGYEDGE_NAME_HPP

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace foggyedge {

/** @brief Hierarchical microservice name: region triple, microservice, parameters.
 *
 * Wire grammar: `FE:/<country>/<city>/<district>|<microservice>[?<param>(,<param>)*]`.
 * Whitespace around separators is accepted on input and never emitted; canonical()
 * is the single wire form used as a table key everywhere.
 */
struct FeName {
  std::string country;
  std::string city;
  std::string district;
  std::string microservice;
  std::vector<std::string> params;

  bool operator==(const FeName&) const = default;

  /// Canonical wire form, e.g. "FE:/Korea/Seoul/Itaewon|traffic_status?param1,param2".
  std::string canonical() const;

  /// Canonical form with the parameter list stripped (access-store key).
  std::string canonicalWithoutParams() const;
};

class MalformedNameError : public std::runtime_error {
public:
  explicit MalformedNameError(const std::string& what)
    : std::runtime_error(what) {}
};

/// Parse a raw name string. Never crashes on arbitrary bytes; returns nullopt on any
/// grammar violation.
std::optional<FeName> tryParseName(const std::string& raw) noexcept;

/// Parse, throwing MalformedNameError on rejection.
FeName parseName(const std::string& raw);

/// Canonical serialization; parseName(serializeName(n)) == n for every valid n.
std::string serializeName(const FeName& n);

/// Number of leading region components of n equal to prefix (prefix has <= 3 components).
std::size_t regionPrefixMatch(const FeName& n, std::span<const std::string> prefix);

/// Component validity: non-empty, no separators ('/', '|', '?', ','), no whitespace.
bool isValidComponent(const std::string& c);

} // namespace foggyedge

#endif // FOGGYEDGE_NAME_HPP
