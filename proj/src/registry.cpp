#include <algorithm>
#include <cctype>
#include <map>

#include "recmle/error.hpp"
#include "recmle/family.hpp"
#include "recmle/format.hpp"

namespace recmle {

const std::vector<RegistryEntry>& family_registry() {
  static const std::vector<RegistryEntry> entries = {
      {"exponential", "A(x) = x", "B(theta) = 1/theta", "[0, inf)", {}},
      {"lomax", "A(x) = log(1 + x)", "B(theta) = 1/theta", "[0, inf)", {}},
      {"weibull",
       "A(x) = x^alpha",
       "B(theta) = theta",
       "[0, inf)",
       {{"alpha", 2.0, "shape, > 0"}}},
      {"pareto", "A(x) = log(x/k)", "B(theta) = theta", "[k, inf)", {{"k", 1.0, "scale, > 0"}}},
  };
  return entries;
}

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) {
    ++b;
  }
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) {
    --e;
  }
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) {
      break;
    }
    start = pos + 1;
  }
  return out;
}

}  // namespace

FamilySpec parse_family(const std::string& text) {
  const auto colon = text.find(':');
  std::string name = trim(std::string_view(text).substr(0, colon));
  std::transform(name.begin(), name.end(), name.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });

  const auto& registry = family_registry();
  const auto entry = std::find_if(registry.begin(), registry.end(),
                                  [&](const RegistryEntry& e) { return e.name == name; });
  if (entry == registry.end()) {
    throw ArgumentError("unknown family '" + name + "'");
  }

  std::map<std::string, double> values;
  for (const auto& p : entry->parameters) {
    values[p.key] = p.default_value;
  }

  if (colon != std::string::npos) {
    std::map<std::string, bool> seen;
    for (const auto& item : split(std::string_view(text).substr(colon + 1), ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) {
        throw ArgumentError("family parameter '" + item + "' is not of the form key=value");
      }
      const std::string key = trim(std::string_view(item).substr(0, eq));
      const std::string raw = trim(std::string_view(item).substr(eq + 1));
      if (!values.count(key)) {
        throw ArgumentError("family '" + name + "' has no parameter '" + key + "'");
      }
      if (seen[key]) {
        throw ArgumentError("family parameter '" + key + "' given twice");
      }
      seen[key] = true;
      const auto v = parse_double(raw);
      if (!v) {
        throw ArgumentError("family parameter '" + key + "' has non-numeric value '" + raw + "'");
      }
      values[key] = *v;
    }
  }

  if (name == "exponential") {
    return exponential_family();
  }
  if (name == "lomax") {
    return lomax_family();
  }
  if (name == "weibull") {
    return weibull_family(values.at("alpha"));
  }
  return pareto_family(values.at("k"));
}

}  // namespace recmle
