#include "pon/config_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

namespace pon {

namespace {

struct Entry {
  std::vector<std::string> tokens;
  int line = 0;
};

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

class Parser {
 public:
  explicit Parser(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(int line, const std::string& msg) const {
    throw ConfigError({{ErrorCode::ParseError, source_ + ":" + std::to_string(line) + ": " + msg}});
  }

  double to_real(const std::string& tok, int line, const std::string& key) const {
    double value = 0.0;
    const char* begin = tok.data();
    const char* end = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) fail(line, "'" + key + "': '" + tok + "' is not a number");
    return value;
  }

  std::size_t to_index(const std::string& tok, int line, const std::string& key) const {
    std::size_t value = 0;
    const char* begin = tok.data();
    const char* end = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end)
      fail(line, "'" + key + "': '" + tok + "' is not a non-negative integer");
    return value;
  }

  const std::string& source() const { return source_; }

 private:
  std::string source_;
};

}  // namespace

PonConfig parse_config(std::istream& in, const std::string& source_name) {
  Parser parser(source_name);
  std::map<std::string, Entry> entries;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) parser.fail(line_no, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) parser.fail(line_no, "missing key before '='");
    std::string rhs = line.substr(eq + 1);
    for (char& c : rhs)
      if (c == ',') c = ' ';
    Entry entry{{}, line_no};
    std::istringstream tokens(rhs);
    for (std::string tok; tokens >> tok;) entry.tokens.push_back(tok);
    if (entry.tokens.empty()) parser.fail(line_no, "'" + key + "' has no value");
    if (entries.count(key))
      parser.fail(line_no, "'" + key + "' already set on line " + std::to_string(entries[key].line));
    entries.emplace(key, std::move(entry));
  }

  static const char* known[] = {"num_onus", "cycle_length", "guards",    "slice_of",
                                "slice_weights", "lambdas", "unit_time", "delta_t"};
  for (const auto& [key, entry] : entries) {
    bool ok = false;
    for (const char* k : known) ok |= key == k;
    if (!ok) parser.fail(entry.line, "unknown key '" + key + "'");
  }

  auto require = [&](const char* key) -> const Entry& {
    auto it = entries.find(key);
    if (it == entries.end())
      throw ConfigError({{ErrorCode::ParseError,
                          parser.source() + ": missing required key '" + key + "'"}});
    return it->second;
  };
  auto scalar = [&](const char* key) -> std::optional<double> {
    auto it = entries.find(key);
    if (it == entries.end()) return std::nullopt;
    if (it->second.tokens.size() != 1) parser.fail(it->second.line, std::string("'") + key + "' takes one value");
    return parser.to_real(it->second.tokens[0], it->second.line, key);
  };
  auto reals = [&](const Entry& e, const char* key, std::size_t n, bool broadcast) {
    std::vector<double> out;
    for (const auto& tok : e.tokens) out.push_back(parser.to_real(tok, e.line, key));
    if (broadcast && out.size() == 1 && n > 1) out.assign(n, out[0]);
    if (out.size() != n)
      parser.fail(e.line, std::string("'") + key + "' has " + std::to_string(out.size()) +
                              " values, expected " + std::to_string(n));
    return out;
  };

  PonConfig config;
  {
    const Entry& e = require("num_onus");
    if (e.tokens.size() != 1) parser.fail(e.line, "'num_onus' takes one value");
    config.num_onus = parser.to_index(e.tokens[0], e.line, "num_onus");
    if (config.num_onus == 0) parser.fail(e.line, "'num_onus' must be positive");
  }
  const std::size_t n = config.num_onus;
  if (auto v = scalar("cycle_length")) config.cycle_length = *v;
  if (auto v = scalar("unit_time")) config.unit_time = *v;
  if (auto v = scalar("delta_t")) config.delta_t = *v;

  if (auto it = entries.find("guards"); it != entries.end())
    config.guards = reals(it->second, "guards", n, true);
  else
    config.guards.assign(n, 0.0);

  config.lambdas = reals(require("lambdas"), "lambdas", n, true);

  {
    const Entry& e = require("slice_of");
    for (const auto& tok : e.tokens) config.slice_of.push_back(parser.to_index(tok, e.line, "slice_of"));
    if (config.slice_of.size() != n)
      parser.fail(e.line, "'slice_of' maps " + std::to_string(config.slice_of.size()) +
                              " ONUs, expected " + std::to_string(n));
  }
  {
    const Entry& e = require("slice_weights");
    for (const auto& tok : e.tokens) config.slice_weights.push_back(parser.to_real(tok, e.line, "slice_weights"));
  }

  // Invariant violations are attributed to the line of the key that carries them.
  auto issues = check_config(config);
  if (!issues.empty()) {
    auto line_of = [&](ErrorCode code) {
      const char* key = "num_onus";
      switch (code) {
        case ErrorCode::CapacityExhausted: key = "guards"; break;
        case ErrorCode::SlicePartitionBroken: key = "slice_of"; break;
        case ErrorCode::NonPositiveWeight: key = "slice_weights"; break;
        default: break;
      }
      auto it = entries.find(key);
      return it == entries.end() ? 0 : it->second.line;
    };
    for (auto& issue : issues)
      issue.message = parser.source() + ":" + std::to_string(line_of(issue.code)) + ": " + issue.message;
    throw ConfigError(std::move(issues));
  }
  return config;
}

PonConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open config file '" + path.string() + "'");
  return parse_config(in, path.string());
}

void write_config(std::ostream& out, const PonConfig& config) {
  auto real = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  out << "num_onus = " << config.num_onus << '\n';
  out << "cycle_length = " << real(config.cycle_length) << '\n';
  out << "guards =";
  for (double d : config.guards) out << ' ' << real(d);
  out << "\nslice_of =";
  for (auto s : config.slice_of) out << ' ' << s;
  out << "\nslice_weights =";
  for (double p : config.slice_weights) out << ' ' << real(p);
  out << "\nlambdas =";
  for (double l : config.lambdas) out << ' ' << real(l);
  out << "\nunit_time = " << real(config.unit_time) << '\n';
  out << "delta_t = " << real(config.delta_t) << '\n';
}

}  // namespace pon
