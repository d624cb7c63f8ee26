#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace bonusruin::cli {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

double parse_double(const std::string& key, const std::string& raw) {
  const std::string s = trim(raw);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw ConfigError(key, key + ": expected a finite number, got '" + raw + "'");
  }
  return v;
}

}  // namespace

void RunConfig::load_text(std::string_view text, std::string_view origin) {
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    if (t.find('=') == std::string::npos) {
      std::ostringstream os;
      os << origin << ":" << lineno << ": expected key=value";
      throw ConfigError("", os.str());
    }
    assign(t);
  }
}

void RunConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot read config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  load_text(buf.str(), path);
}

void RunConfig::assign(std::string_view token) {
  const auto eq = token.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError(std::string(token), "expected key=value, got '" + std::string(token) + "'");
  }
  const std::string key = trim(token.substr(0, eq));
  if (key.empty()) throw ConfigError("", "empty key in '" + std::string(token) + "'");
  values_[key] = trim(token.substr(eq + 1));
}

const std::string& RunConfig::text(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError(key, "missing required field: " + key);
  return it->second;
}

std::string RunConfig::text_or(const std::string& key, const std::string& fallback) const {
  return has(key) ? text(key) : fallback;
}

double RunConfig::number(const std::string& key) const { return parse_double(key, text(key)); }

double RunConfig::number_or(const std::string& key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

std::uint64_t RunConfig::count(const std::string& key) const {
  const std::string s = trim(text(key));
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec == std::errc() && ptr != s.data() + s.size()) {
    // accept 1e6 style counts
    const double d = parse_double(key, s);
    if (d >= 0.0 && d <= 1.8e19 && std::floor(d) == d) return static_cast<std::uint64_t>(d);
    ec = std::errc::invalid_argument;
  }
  if (s.empty() || ec != std::errc()) {
    throw ConfigError(key, key + ": expected a nonnegative integer, got '" + s + "'");
  }
  return v;
}

std::uint64_t RunConfig::count_or(const std::string& key, std::uint64_t fallback) const {
  return has(key) ? count(key) : fallback;
}

std::vector<double> RunConfig::numbers(const std::string& key) const {
  const std::string& raw = text(key);
  std::vector<double> out;
  if (raw.find(':') != std::string::npos) {
    std::vector<double> parts;
    std::stringstream ss(raw);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(parse_double(key, item));
    if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0]) {
      throw ConfigError(key, key + ": range must be start:stop:step with step > 0");
    }
    const auto steps = static_cast<long>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
    for (long i = 0; i <= steps; ++i) out.push_back(parts[0] + static_cast<double>(i) * parts[2]);
    return out;
  }
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(key, item));
  if (out.empty()) throw ConfigError(key, key + ": empty list");
  return out;
}

void RunConfig::check_known(const std::vector<std::string>& allowed) const {
  for (const auto& [key, value] : values_) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError(key, "unknown field: " + key);
    }
  }
}

std::vector<std::string> model_keys() {
  return {"claims", "beta", "alpha", "sigma", "lambda1", "lambda2", "xi"};
}

ModelParams model_from_config(const RunConfig& config) {
  const std::string family = config.text_or("claims", "exponential");
  const double lambda1 = config.number("lambda1");
  const double lambda2 = config.number("lambda2");
  const double xi = config.number("xi");
  if (family == "exponential") {
    return make_exponential_model(lambda1, lambda2, xi, config.number("beta"));
  }
  if (family == "pareto") {
    return make_pareto_model(lambda1, lambda2, xi, config.number("alpha"), config.number("sigma"));
  }
  throw ConfigError("claims", "claims must be exponential or pareto, got '" + family + "'");
}

}  // namespace bonusruin::cli
