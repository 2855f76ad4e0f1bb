#include "cli_commands.hpp"

#include "shellproj/geometry.hpp"
#include "shellproj/records_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <vector>

namespace shellproj::cli {

namespace {

namespace fs = std::filesystem;

bool prepare_dir(const std::string& dir, std::ostream& err) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    err << "error: cannot create output directory '" << dir << "'\n";
    return false;
  }
  const fs::path probe = fs::path(dir) / ".write_probe";
  {
    std::ofstream f(probe);
    if (!f) {
      err << "error: output directory '" << dir << "' is not writable\n";
      return false;
    }
  }
  fs::remove(probe, ec);
  return true;
}

bool write_file(const fs::path& path, const std::string& content, std::ostream& err) {
  std::ofstream f(path, std::ios::binary);
  f << content;
  if (!f) {
    err << "error: cannot write '" << path.string() << "'\n";
    return false;
  }
  return true;
}

double relative_gap(double a, double b) { return b != 0 ? std::abs(a - b) / std::abs(b) : std::abs(a); }

}  // namespace

int cmd_sweep(const Config& config, bool json, std::ostream& out, std::ostream& err) {
  try {
    config.validate();
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  if (!prepare_dir(config.output_dir, err)) return kExitUsage;
  const std::vector<SweepRecord> records = run_sweep(config.plan, config.workers);
  const std::vector<FitRow> fits = fit_series(config.plan, records);

  std::ostringstream rec_text, fit_text;
  if (config.format == "jsonl")
    write_records_jsonl(rec_text, records);
  else
    write_records_csv(rec_text, records);
  write_fits_csv(fit_text, fits);
  const fs::path dir(config.output_dir);
  if (!write_file(dir / ("records." + config.format), rec_text.str(), err)) return kExitUsage;
  if (!write_file(dir / "fits.csv", fit_text.str(), err)) return kExitUsage;

  int failed = 0, echo = 0;
  for (const auto& r : records) {
    if (r.status == RecordStatus::failed) {
      ++failed;
      err << "failed record lambda=" << format_real(r.lambda) << " delta=" << format_real(r.delta)
          << " p=" << format_real(r.p) << " kind=" << to_string(r.kind) << " seed=" << r.seed << ": " << r.message << "\n";
    }
    if (r.status == RecordStatus::echo) ++echo;
  }
  std::vector<const FitRow*> violations;
  for (const auto& f : fits)
    if (!f.passed) violations.push_back(&f);
  std::sort(violations.begin(), violations.end(), [](const FitRow* a, const FitRow* b) {
    return std::abs(a->deviation()) > std::abs(b->deviation());
  });
  const bool ok = failed == 0 && violations.empty();
  if (json) {
    nlohmann::ordered_json j;
    j["records"] = records.size();
    j["failed"] = failed;
    j["echo_flagged"] = echo;
    j["fit_violations"] = violations.size();
    j["exit"] = ok ? kExitOk : kExitTolerance;
    out << j.dump() << "\n";
  } else {
    out << "records: " << records.size() << " (failed " << failed << ", echo-flagged " << echo << ")\n";
    out << "fits: " << fits.size() << " series, " << violations.size() << " outside tolerance\n";
  }
  if (!violations.empty()) {
    err << "worst fit deviations:\n";
    for (std::size_t i = 0; i < std::min<std::size_t>(violations.size(), 10); ++i) {
      const auto& f = *violations[i];
      err << "  " << to_string(f.kind) << " p=" << format_real(f.p) << " " << f.rule.label() << ": ";
      if (f.fit)
        err << "slope " << format_real(f.fit->slope) << " expected " << format_real(f.expected) << " ("
            << to_string(f.check) << ")\n";
      else
        err << "fewer than 4 accepted points\n";
    }
  }
  return ok ? kExitOk : kExitTolerance;
}

int cmd_support(double lambda, double delta, bool json, std::ostream& out, std::ostream& err) {
  try {
    SpectralParams{lambda, delta, 2}.validate();
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  const CoronaGeometry geo(lambda, delta);
  const double f1 = support_measure_f1(geo);
  const double f1_oracle = support_measure_f1_oracle(geo, delta / 100);
  const double f1_scale = 4 * std::sqrt(lambda * delta);
  bool ok = relative_gap(f1_oracle, f1) <= 0.05;

  nlohmann::ordered_json j;
  j["lambda"] = lambda;
  j["delta"] = delta;
  j["f1_measure"] = f1;
  j["f1_oracle"] = f1_oracle;
  j["f1_over_4_sqrt_lambda_delta"] = f1 / f1_scale;

  const double eps = delta / lambda;
  if (eps < 1.0 / 9) {
    const auto caps = cap_partition(geo);
    const auto strips = rescaled_strips(geo);
    double best = 0;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < caps.size(); ++i) {
      const double m = cap_support_measure(caps[i], strips);
      if (m > best) best = m, arg = i;
    }
    const double cap_scale = std::pow(delta, 2.5) * std::pow(lambda, -1.5);
    j["caps"] = caps.size();
    j["max_cap_measure"] = best;
    if (best > 0) {
      const double oracle = cap_support_oracle(caps[arg], strips, eps / 20);
      j["max_cap_oracle"] = oracle;
      ok = ok && relative_gap(oracle, best) <= 0.05;
    } else {
      j["max_cap_oracle"] = 0.0;
    }
    j["max_cap_over_scale"] = best / cap_scale;
  } else {
    j["caps"] = 0;
    j["cap_note"] = "delta/lambda >= 1/9: no cap partition";
  }
  j["oracle_agreement"] = ok;
  if (json) {
    out << j.dump() << "\n";
  } else {
    out << "f1 support measure        " << format_real(f1) << "\n";
    out << "f1 oracle (step delta/100) " << format_real(f1_oracle) << "\n";
    out << "f1 / (4 sqrt(lambda delta)) " << format_real(f1 / f1_scale) << "\n";
    if (j.contains("max_cap_measure")) {
      out << "caps                      " << j["caps"].get<std::size_t>() << "\n";
      out << "max cap measure           " << format_real(j["max_cap_measure"].get<double>()) << "\n";
      out << "max cap oracle            " << format_real(j["max_cap_oracle"].get<double>()) << "\n";
      out << "max cap / (delta^2.5 lambda^-1.5) " << format_real(j["max_cap_over_scale"].get<double>()) << "\n";
    } else {
      out << "caps: " << j["cap_note"].get<std::string>() << "\n";
    }
    out << "oracle agreement          " << (ok ? "yes" : "no") << "\n";
  }
  if (!ok) err << "oracle disagreement beyond 5%\n";
  return ok ? kExitOk : kExitTolerance;
}

int cmd_example(const std::string& kind, double lambda, double delta, double p, std::uint64_t seed, bool json,
                std::ostream& out, std::ostream& err) {
  RecordKind rk;
  try {
    rk = record_kind_from_string(kind);
    SpectralParams{lambda, delta, p}.validate();
    if (rk == RecordKind::knapp && lambda != std::floor(lambda))
      throw PreconditionError("knapp example needs integer lambda (assume lambda in N), got " + format_exact(lambda));
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  SweepPlan plan = SweepPlan::default_plan();
  const SweepRecord r = evaluate_record(plan, lambda, delta, p, rk, seed);
  if (r.status == RecordStatus::failed) {
    err << "error: " << r.message << "\n";
    return kExitUsage;
  }
  if (json) {
    nlohmann::ordered_json j;
    j["kind"] = kind;
    j["lambda"] = lambda;
    j["delta"] = delta;
    j["p"] = std::isinf(p) ? nlohmann::ordered_json("inf") : nlohmann::ordered_json(p);
    j["ratio"] = r.ratio;
    j["bound"] = r.bound;
    j["quotient"] = r.quotient;
    j["regime"] = to_string(r.regime);
    j["echo"] = r.echo;
    j["status"] = to_string(r.status);
    out << j.dump() << "\n";
  } else {
    out << "ratio    " << format_real(r.ratio) << "\n";
    out << "bound    " << format_real(r.bound) << "\n";
    out << "quotient " << format_real(r.quotient) << "\n";
    out << "regime   " << to_string(r.regime) << "\n";
    out << "echo     " << format_real(r.echo) << "\n";
    out << "status   " << to_string(r.status) << "\n";
  }
  return r.status == RecordStatus::ok ? kExitOk : kExitTolerance;
}

int cmd_plot(const std::string& records_path, const std::string& out_dir, std::ostream& out, std::ostream& err) {
  EmittedFiles files;
  try {
    files = emit_plots(read_records(records_path));
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  if (!prepare_dir(out_dir, err)) return kExitUsage;
  for (const auto& [name, content] : files)
    if (!write_file(fs::path(out_dir) / name, content, err)) return kExitUsage;
  out << "wrote " << files.size() << " files to " << out_dir << "\n";
  return kExitOk;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral projector laboratory on the cylinder T x R"};
  app.require_subcommand(1);
  bool json = false;
  app.add_flag("--json", json, "Machine-readable output");

  std::string config_path, out_dir;
  int workers = 0;
  auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep and fit exponents");
  sweep->add_option("--config", config_path, "Config file (key = value)");
  sweep->add_option("--out", out_dir, "Output directory (overrides config)");
  sweep->add_option("--workers", workers, "Worker threads (overrides config)")->check(CLI::PositiveNumber);
  sweep->add_flag("--json", json, "Machine-readable summary");

  double lambda = 0, delta = 0;
  auto* support = app.add_subcommand("support", "Fourier support measures of the f1 and cap pieces");
  support->add_option("--lambda", lambda)->required();
  support->add_option("--delta", delta)->required();
  support->add_flag("--json", json, "Machine-readable output");

  std::string kind, p_text = "2";
  std::uint64_t seed = 0;
  auto* example = app.add_subcommand("example", "Ratio ||f||_p / ||f||_2 of one example");
  example->add_option("--kind", kind, "knapp, annulus, random_corona or maximized")->required();
  example->add_option("--lambda", lambda)->required();
  example->add_option("--delta", delta)->required();
  example->add_option("--p", p_text, "Exponent, or inf");
  example->add_option("--seed", seed, "Seed for random_corona");
  example->add_flag("--json", json, "Machine-readable output");

  std::string records_path, plot_out = "plots";
  auto* plot = app.add_subcommand("plot", "Emit gnuplot scripts from a records file");
  plot->add_option("records", records_path, "records.csv or records.jsonl")->required();
  plot->add_option("--out", plot_out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*sweep) {
      Config config = config_path.empty() ? Config{} : load_config(config_path);
      if (!out_dir.empty()) config.output_dir = out_dir;
      if (workers > 0) config.workers = workers;
      return cmd_sweep(config, json, out, err);
    }
    if (*support) return cmd_support(lambda, delta, json, out, err);
    if (*example) return cmd_example(kind, lambda, delta, parse_real(p_text), seed, json, out, err);
    if (*plot) return cmd_plot(records_path, plot_out, out, err);
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace shellproj::cli
