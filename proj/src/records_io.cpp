#include "shellproj/records_io.hpp"

#include "shellproj/config.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace shellproj {

namespace {

std::string format_p(double p) { return std::isinf(p) ? "inf" : format_real(p); }

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

Regime regime_from_string(const std::string& s) {
  if (s == "low") return Regime::low;
  if (s == "high") return Regime::high;
  throw PreconditionError("unknown regime '" + s + "'");
}

std::uint64_t parse_seed(const std::string& s) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw PreconditionError("seed '" + s + "' is not a nonnegative integer");
  return std::stoull(s);
}

double json_real(const nlohmann::json& j, const char* key) {
  const auto& v = j.at(key);
  if (v.is_string()) return parse_real(v.get<std::string>());
  return v.get<double>();
}

std::string panel_name(RecordKind kind, double p) { return to_string(kind) + "_p" + format_p(p); }

}  // namespace

std::string format_real(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_records_csv(std::ostream& out, const std::vector<SweepRecord>& records) {
  out << kRecordsHeader << "\n";
  for (const auto& r : records) {
    out << format_real(r.lambda) << ',' << format_real(r.delta) << ',' << format_p(r.p) << ',' << to_string(r.kind)
        << ',' << r.seed << ',' << format_real(r.ratio) << ',' << format_real(r.bound) << ',' << to_string(r.regime)
        << ',' << format_real(r.quotient) << ',' << format_real(r.echo) << ',' << to_string(r.status) << "\n";
  }
}

void write_records_jsonl(std::ostream& out, const std::vector<SweepRecord>& records) {
  for (const auto& r : records) {
    nlohmann::ordered_json j;
    j["lambda"] = format_real(r.lambda);
    j["delta"] = format_real(r.delta);
    j["p"] = format_p(r.p);
    j["kind"] = to_string(r.kind);
    j["seed"] = r.seed;
    j["ratio"] = format_real(r.ratio);
    j["bound"] = format_real(r.bound);
    j["regime"] = to_string(r.regime);
    j["quotient"] = format_real(r.quotient);
    j["echo"] = format_real(r.echo);
    j["status"] = to_string(r.status);
    if (!r.message.empty()) j["message"] = r.message;
    out << j.dump() << "\n";
  }
}

std::vector<SweepRecord> parse_records(const std::string& text) {
  std::vector<SweepRecord> records;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  const auto first = text.find_first_not_of(" \t\r\n");
  const bool jsonl = first != std::string::npos && text[first] == '{';
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      SweepRecord r;
      if (jsonl) {
        const auto j = nlohmann::json::parse(line);
        r.lambda = json_real(j, "lambda");
        r.delta = json_real(j, "delta");
        r.p = json_real(j, "p");
        r.kind = record_kind_from_string(j.at("kind").get<std::string>());
        r.seed = j.at("seed").get<std::uint64_t>();
        r.ratio = json_real(j, "ratio");
        r.bound = json_real(j, "bound");
        r.regime = regime_from_string(j.at("regime").get<std::string>());
        r.quotient = json_real(j, "quotient");
        r.echo = json_real(j, "echo");
        r.status = record_status_from_string(j.at("status").get<std::string>());
        if (j.contains("message")) r.message = j.at("message").get<std::string>();
      } else {
        if (!header_seen) {
          if (line != kRecordsHeader) throw PreconditionError("expected header '" + std::string(kRecordsHeader) + "'");
          header_seen = true;
          continue;
        }
        const auto f = split_csv(line);
        if (f.size() != 11) throw PreconditionError("expected 11 fields, got " + std::to_string(f.size()));
        r.lambda = parse_real(f[0]);
        r.delta = parse_real(f[1]);
        r.p = parse_real(f[2]);
        r.kind = record_kind_from_string(f[3]);
        r.seed = parse_seed(f[4]);
        r.ratio = parse_real(f[5]);
        r.bound = parse_real(f[6]);
        r.regime = regime_from_string(f[7]);
        r.quotient = parse_real(f[8]);
        r.echo = parse_real(f[9]);
        r.status = record_status_from_string(f[10]);
      }
      records.push_back(r);
    } catch (const std::exception& e) {
      throw PreconditionError("records line " + std::to_string(number) + ": " + e.what());
    }
  }
  if (records.empty()) throw PreconditionError("records file contains no records");
  return records;
}

std::vector<SweepRecord> read_records(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot read records file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_records(ss.str());
}

void write_fits_csv(std::ostream& out, const std::vector<FitRow>& rows) {
  out << "kind,p,delta_rule,slope,expected,deviation,r2,n,check,quotient_slope,passed\n";
  for (const auto& row : rows) {
    out << to_string(row.kind) << ',' << format_p(row.p) << ',' << row.rule.label() << ',';
    if (row.fit) {
      out << format_real(row.fit->slope) << ',' << format_real(row.expected) << ',' << format_real(row.deviation())
          << ',' << format_real(row.fit->r_squared) << ',' << row.fit->n_points;
    } else {
      out << ',' << format_real(row.expected) << ",,,0";
    }
    out << ',' << to_string(row.check) << ',' << (row.quotient_fit ? format_real(row.quotient_fit->slope) : "") << ','
        << (row.passed ? "yes" : "no") << "\n";
  }
}

EmittedFiles emit_plots(std::vector<SweepRecord> records) {
  if (records.empty()) throw PreconditionError("no records to plot");
  canonical_sort(records);
  std::map<std::pair<int, double>, std::vector<const SweepRecord*>> panels;
  for (const auto& r : records)
    if (r.status != RecordStatus::failed && r.ratio > 0) panels[{static_cast<int>(r.kind), r.p}].push_back(&r);
  if (panels.empty()) throw PreconditionError("no plottable records");
  EmittedFiles files;
  const auto n = panels.size();
  const auto cols = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
  const auto rows = (n + cols - 1) / cols;
  for (const char* what : {"ratio", "quotient"}) {
    std::ostringstream gp;
    gp << "# " << what << " against lambda, one panel per (kind, p)\n";
    gp << "set terminal pngcairo size " << 420 * cols << "," << 360 * rows << "\n";
    gp << "set output '" << what << "_vs_lambda.png'\n";
    gp << "set logscale xy\nset key off\nset xlabel 'lambda'\nset ylabel '" << what << "'\n";
    gp << "set multiplot layout " << rows << "," << cols << "\n";
    for (const auto& [key, recs] : panels) {
      const std::string name = panel_name(static_cast<RecordKind>(key.first), key.second);
      gp << "set title '" << to_string(static_cast<RecordKind>(key.first)) << ", p = " << format_p(key.second) << "'\n";
      gp << "plot '" << name << ".dat' using 1:" << (std::string(what) == "ratio" ? 3 : 4) << " with points pt 7\n";
    }
    gp << "unset multiplot\n";
    files.emplace_back(std::string(what) + "_vs_lambda.gp", gp.str());
  }
  for (const auto& [key, recs] : panels) {
    std::ostringstream dat;
    dat << "# lambda delta ratio quotient seed\n";
    for (const auto* r : recs)
      dat << format_real(r->lambda) << ' ' << format_real(r->delta) << ' ' << format_real(r->ratio) << ' '
          << format_real(r->quotient) << ' ' << r->seed << "\n";
    files.emplace_back(panel_name(static_cast<RecordKind>(key.first), key.second) + ".dat", dat.str());
  }
  return files;
}

}  // namespace shellproj
