#include "shellproj/config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <vector>

namespace shellproj {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw PreconditionError("empty list element");
    out.push_back(item);
  }
  if (out.empty()) throw PreconditionError("empty list");
  return out;
}

long long parse_integer(const std::string& text) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw PreconditionError("'" + text + "' is not an integer");
  return v;
}

template <typename T, typename F>
std::string join(const std::vector<T>& items, F&& fmt) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? ", " : "") + fmt(items[i]);
  return out;
}

}  // namespace

std::string format_exact(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  for (int digits = 15; digits <= 17; ++digits) {
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

double parse_real(const std::string& text) {
  const std::string t = trim(text);
  if (t == "inf" || t == "infinity" || t == "Inf") return kInfinity;
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != t.size() || std::isnan(v)) throw PreconditionError("'" + t + "' is not a number");
  return v;
}

void Config::validate() const {
  plan.validate();
  if (format != "csv" && format != "jsonl") throw PreconditionError("format must be csv or jsonl, got '" + format + "'");
  if (workers < 1) throw PreconditionError("workers must be >= 1");
  if (output_dir.empty()) throw PreconditionError("output_dir must not be empty");
}

Config parse_config(const std::string& text) {
  Config c;
  auto& plan = c.plan;
  const std::map<std::string, std::function<void(const std::string&)>> setters{
      {"lambdas", [&](const std::string& v) {
         plan.lambdas.clear();
         for (const auto& s : split_list(v)) plan.lambdas.push_back(parse_real(s));
       }},
      {"delta_rules", [&](const std::string& v) {
         plan.delta_rules.clear();
         for (const auto& s : split_list(v)) plan.delta_rules.push_back(DeltaRule::parse(s));
       }},
      {"ps", [&](const std::string& v) {
         plan.ps.clear();
         for (const auto& s : split_list(v)) plan.ps.push_back(parse_real(s));
       }},
      {"kinds", [&](const std::string& v) {
         plan.kinds.clear();
         for (const auto& s : split_list(v)) plan.kinds.push_back(record_kind_from_string(s));
       }},
      {"seeds_per_point", [&](const std::string& v) { plan.seeds_per_point = static_cast<int>(parse_integer(v)); }},
      {"eta_step_multiplier", [&](const std::string& v) { plan.build.eta_step_multiplier = parse_real(v); }},
      {"y_half_window_multiplier", [&](const std::string& v) { plan.policy.y_window_multiplier = parse_real(v); }},
      {"sample_budget", [&](const std::string& v) { plan.policy.sample_budget = parse_integer(v); }},
      {"maximize_steps", [&](const std::string& v) { plan.maximize_steps = static_cast<int>(parse_integer(v)); }},
      {"maximize_sample_budget", [&](const std::string& v) { plan.maximize_sample_budget = parse_integer(v); }},
      {"output_dir", [&](const std::string& v) { c.output_dir = v; }},
      {"format", [&](const std::string& v) { c.format = v; }},
      {"workers", [&](const std::string& v) { c.workers = static_cast<int>(parse_integer(v)); }},
  };
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw PreconditionError("config line " + std::to_string(number) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end())
      throw PreconditionError("config line " + std::to_string(number) + ": unknown key '" + key + "'");
    try {
      it->second(value);
    } catch (const PreconditionError& e) {
      throw PreconditionError("config line " + std::to_string(number) + " (" + key + "): " + e.what());
    }
  }
  return c;
}

std::string serialize_config(const Config& c) {
  const auto& plan = c.plan;
  std::ostringstream out;
  out << "lambdas = " << join(plan.lambdas, format_exact) << "\n";
  out << "delta_rules = " << join(plan.delta_rules, [](const DeltaRule& r) {
    return std::string(r.type == DeltaRule::Type::fixed ? "fixed:" : "power:") + format_exact(r.value);
  }) << "\n";
  out << "ps = " << join(plan.ps, format_exact) << "\n";
  out << "kinds = " << join(plan.kinds, [](RecordKind k) { return to_string(k); }) << "\n";
  out << "seeds_per_point = " << plan.seeds_per_point << "\n";
  out << "eta_step_multiplier = " << format_exact(plan.build.eta_step_multiplier) << "\n";
  out << "y_half_window_multiplier = " << format_exact(plan.policy.y_window_multiplier) << "\n";
  out << "sample_budget = " << plan.policy.sample_budget << "\n";
  out << "maximize_steps = " << plan.maximize_steps << "\n";
  out << "maximize_sample_budget = " << plan.maximize_sample_budget << "\n";
  out << "output_dir = " << c.output_dir << "\n";
  out << "format = " << c.format << "\n";
  out << "workers = " << c.workers << "\n";
  return out.str();
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace shellproj
