#include "config.hpp"

#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "error.hpp"
#include "expr.hpp"

namespace fpt {

PiecewiseLinearDrift RunConfig::build_drift() const {
  if (has_piecewise) return make_piecewise(breakpoints, slopes, intercepts);
  return linearize(drift_function(), domain_lo, domain_hi, resolution);
}

DriftFunction RunConfig::drift_function() const {
  if (has_piecewise) {
    PiecewiseLinearDrift d = make_piecewise(breakpoints, slopes, intercepts);
    auto [lo, hi] = extremes(d);
    double sup_abs = std::max(std::abs(lo), std::abs(hi));
    double lip = 0.0;
    for (double a : d.slopes) lip = std::max(lip, std::abs(a));
    return DriftFunction{[d](double x) { return d.eval(x); },
                         m1.value_or(sup_abs), m2.value_or(lip)};
  }
  Expression e = parse_expression(*expression);
  return make_drift_function([e](double x) { return e.eval(x); }, domain_lo,
                             domain_hi, m1, m2);
}

std::vector<double> RunConfig::time_grid() const {
  std::vector<double> grid;
  grid.reserve(steps);
  for (int k = 1; k <= steps; ++k) grid.push_back(t_max * k / steps);
  return grid;
}

namespace {

struct RawConfig {
  // (section, key) -> value, plus occurrence order for error reporting
  std::map<std::pair<std::string, std::string>, std::string> values;

  bool has(const std::string& sec, const std::string& key) const {
    return values.count({sec, key}) != 0;
  }
  const std::string& get(const std::string& sec, const std::string& key) const {
    return values.at({sec, key});
  }
};

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

RawConfig read_raw(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::io_error, "cannot open config file: " + path);
  RawConfig raw;
  std::string line, section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        fail(errc::type_mismatch, "config line " + std::to_string(line_no) +
                                      ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      fail(errc::type_mismatch, "config line " + std::to_string(line_no) +
                                    ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      fail(errc::type_mismatch, "config line " + std::to_string(line_no) +
                                    ": empty key or value");
    if (!raw.values.emplace(std::make_pair(section, key), value).second)
      fail(errc::constraint_violation,
           "config line " + std::to_string(line_no) + ": duplicate key '" +
               key + "'");
  }
  return raw;
}

double parse_double(const std::string& sec, const std::string& key,
                    const std::string& v) {
  char* end = nullptr;
  double x = std::strtod(v.c_str(), &end);
  if (end != v.c_str() + v.size())
    fail(errc::type_mismatch,
         "[" + sec + "] " + key + ": expected a number, got '" + v + "'");
  return x;
}

long parse_int(const std::string& sec, const std::string& key,
               const std::string& v) {
  char* end = nullptr;
  long x = std::strtol(v.c_str(), &end, 10);
  if (end != v.c_str() + v.size())
    fail(errc::type_mismatch,
         "[" + sec + "] " + key + ": expected an integer, got '" + v + "'");
  return x;
}

bool parse_bool(const std::string& sec, const std::string& key,
                const std::string& v) {
  if (v == "true" || v == "on" || v == "1") return true;
  if (v == "false" || v == "off" || v == "0") return false;
  fail(errc::type_mismatch,
       "[" + sec + "] " + key + ": expected true/false, got '" + v + "'");
}

std::vector<double> parse_list(const std::string& sec, const std::string& key,
                               const std::string& v) {
  std::vector<double> out;
  std::string item;
  std::stringstream ss(v);
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty())
      fail(errc::type_mismatch, "[" + sec + "] " + key + ": empty list entry");
    out.push_back(parse_double(sec, key, item));
  }
  if (out.empty())
    fail(errc::type_mismatch, "[" + sec + "] " + key + ": empty list");
  return out;
}

const std::map<std::string, std::set<std::string>> kSchema = {
    {"drift",
     {"expression", "domain_lo", "domain_hi", "resolution", "m1", "m2",
      "breakpoints", "slopes", "intercepts"}},
    {"query", {"x0", "barrier"}},
    {"inversion", {"method", "terms", "target_rel_tol"}},
    {"grid", {"t_max", "steps"}},
    {"mc", {"paths", "dt", "seed", "bridge", "horizon"}},
};

void check_schema(const RawConfig& raw) {
  for (const auto& [sk, value] : raw.values) {
    (void)value;
    auto sec = kSchema.find(sk.first);
    if (sec == kSchema.end())
      fail(errc::unknown_field, "unknown config section [" + sk.first + "]");
    if (sec->second.count(sk.second) == 0)
      fail(errc::unknown_field,
           "unknown key '" + sk.second + "' in section [" + sk.first + "]");
  }
}

}  // namespace

RunConfig load_config(const std::string& path) {
  RawConfig raw = read_raw(path);
  check_schema(raw);
  RunConfig cfg;

  auto require = [&](const std::string& sec, const std::string& key) {
    if (!raw.has(sec, key))
      fail(errc::missing_field, "missing required key '" + key +
                                    "' in section [" + sec + "]");
    return raw.get(sec, key);
  };

  bool has_expr = raw.has("drift", "expression");
  cfg.has_piecewise = raw.has("drift", "breakpoints") ||
                      raw.has("drift", "slopes") ||
                      raw.has("drift", "intercepts");
  if (has_expr == cfg.has_piecewise)
    fail(errc::constraint_violation,
         "config must give exactly one drift form: expression or piecewise "
         "lists");
  if (has_expr) {
    cfg.expression = raw.get("drift", "expression");
    parse_expression(*cfg.expression);  // reject bad syntax up front
    cfg.domain_lo = parse_double("drift", "domain_lo", require("drift", "domain_lo"));
    cfg.domain_hi = parse_double("drift", "domain_hi", require("drift", "domain_hi"));
    if (!(cfg.domain_lo < cfg.domain_hi))
      fail(errc::constraint_violation, "drift domain must satisfy lo < hi");
    if (raw.has("drift", "resolution")) {
      cfg.resolution =
          int(parse_int("drift", "resolution", raw.get("drift", "resolution")));
      if (cfg.resolution < 1)
        fail(errc::constraint_violation, "resolution must be >= 1");
    }
  } else {
    cfg.breakpoints = parse_list("drift", "breakpoints",
                                 require("drift", "breakpoints"));
    cfg.slopes = parse_list("drift", "slopes", require("drift", "slopes"));
    cfg.intercepts =
        parse_list("drift", "intercepts", require("drift", "intercepts"));
    if (raw.has("drift", "resolution"))
      fail(errc::constraint_violation,
           "resolution applies only to expression drifts");
  }
  if (raw.has("drift", "m1")) cfg.m1 = parse_double("drift", "m1", raw.get("drift", "m1"));
  if (raw.has("drift", "m2")) cfg.m2 = parse_double("drift", "m2", raw.get("drift", "m2"));

  cfg.x0 = parse_double("query", "x0", require("query", "x0"));
  cfg.barrier = parse_double("query", "barrier", require("query", "barrier"));
  if (!(cfg.x0 < cfg.barrier))
    fail(errc::constraint_violation, "query requires x0 < barrier");

  if (raw.has("inversion", "method")) {
    const std::string& m = raw.get("inversion", "method");
    if (m == "euler_summation")
      cfg.inversion.method = InversionMethod::euler_summation;
    else if (m == "gaver_stehfest")
      cfg.inversion.method = InversionMethod::gaver_stehfest;
    else
      fail(errc::type_mismatch, "unknown inversion method '" + m + "'");
  }
  if (raw.has("inversion", "terms"))
    cfg.inversion.terms =
        int(parse_int("inversion", "terms", raw.get("inversion", "terms")));
  if (raw.has("inversion", "target_rel_tol"))
    cfg.inversion.target_rel_tol = parse_double(
        "inversion", "target_rel_tol", raw.get("inversion", "target_rel_tol"));
  cfg.inversion.validate();

  if (raw.has("grid", "t_max"))
    cfg.t_max = parse_double("grid", "t_max", raw.get("grid", "t_max"));
  if (raw.has("grid", "steps"))
    cfg.steps = int(parse_int("grid", "steps", raw.get("grid", "steps")));
  if (!(cfg.t_max > 0.0))
    fail(errc::constraint_violation, "t_max must be positive");
  if (cfg.steps < 1) fail(errc::constraint_violation, "steps must be >= 1");

  cfg.has_mc = raw.has("mc", "paths") || raw.has("mc", "dt") ||
               raw.has("mc", "seed") || raw.has("mc", "bridge") ||
               raw.has("mc", "horizon");
  if (cfg.has_mc) {
    cfg.mc.n_paths =
        std::uint64_t(parse_int("mc", "paths", require("mc", "paths")));
    cfg.mc.dt = parse_double("mc", "dt", require("mc", "dt"));
    cfg.mc.seed = raw.has("mc", "seed")
                      ? std::uint64_t(parse_int("mc", "seed", raw.get("mc", "seed")))
                      : 1;
    cfg.mc.bridge_correction =
        raw.has("mc", "bridge") ? parse_bool("mc", "bridge", raw.get("mc", "bridge"))
                                : true;
    cfg.mc.horizon = raw.has("mc", "horizon")
                         ? parse_double("mc", "horizon", raw.get("mc", "horizon"))
                         : cfg.t_max;
    cfg.mc.validate();
  }

  return cfg;
}

}  // namespace fpt
