#include <doctest.h>

#include "cli_commands.hpp"
#include "shellproj/records_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <vector>

using namespace shellproj;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "shellproj");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path temp_dir() {
  std::string tmpl = (fs::temp_directory_path() / "shellproj_cli_XXXXXX").string();
  REQUIRE(mkdtemp(tmpl.data()) != nullptr);
  return tmpl;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  f << text;
}

const char* kSmallConfig =
    "# small sweep\n"
    "lambdas = 20, 40, 80, 160\n"
    "delta_rules = fixed:0.2\n"
    "ps = 2, 4, inf\n"
    "kinds = knapp, annulus, random_corona\n"
    "seeds_per_point = 2\n"
    "sample_budget = 65536\n";

}  // namespace

TEST_CASE("config round trip") {
  const Config def;
  const std::string text = serialize_config(def);
  CHECK(serialize_config(parse_config(text)) == text);

  const Config small = parse_config(kSmallConfig);
  CHECK(small.plan.lambdas.size() == 4);
  CHECK(small.plan.ps.back() == kInfinity);
  CHECK(small.plan.policy.sample_budget == 65536);
  const std::string canon = serialize_config(small);
  const Config again = parse_config(canon);
  CHECK(serialize_config(again) == canon);
  CHECK(again.plan.delta_rules == small.plan.delta_rules);
  CHECK(again.plan.lambdas == small.plan.lambdas);

  // Awkward reals survive exactly.
  Config odd;
  odd.plan.lambdas = {100.1, 1.0 / 3 + 10};
  odd.plan.delta_rules = {DeltaRule::fixed(0.1 + 0.2)};
  odd.plan.build.eta_step_multiplier = 0.7;
  const Config odd2 = parse_config(serialize_config(odd));
  CHECK(odd2.plan.lambdas == odd.plan.lambdas);
  CHECK(odd2.plan.delta_rules == odd.plan.delta_rules);
  CHECK(odd2.plan.build.eta_step_multiplier == 0.7);

  CHECK_THROWS_WITH_AS(parse_config("lambdas = 10\ncolour = red\n"), doctest::Contains("line 2"), PreconditionError);
  CHECK_THROWS_WITH_AS(parse_config("ps = 2, four\n"), doctest::Contains("line 1"), PreconditionError);
  CHECK_THROWS_AS(parse_config("format = xml\n").validate(), PreconditionError);
}

TEST_CASE("usage and help exit codes") {
  CHECK(run_cli({"--help"}).code == cli::kExitOk);
  CHECK(run_cli({}).code == cli::kExitUsage);
  CHECK(run_cli({"frobnicate"}).code == cli::kExitUsage);
  CHECK(run_cli({"support", "--lambda", "100"}).code == cli::kExitUsage);
}

TEST_CASE("sweep validation and unwritable output") {
  const auto dir = temp_dir();
  spit(dir / "bad.cfg", "lambdas = 0.5\ndelta_rules = fixed:0.1\n");
  const auto r = run_cli({"sweep", "--config", (dir / "bad.cfg").string(), "--out", (dir / "o").string()});
  CHECK(r.code == cli::kExitUsage);
  CHECK(r.err.find("lambda > 1") != std::string::npos);

  spit(dir / "small.cfg", kSmallConfig);
  spit(dir / "file", "x");
  const auto u = run_cli({"sweep", "--config", (dir / "small.cfg").string(), "--out", (dir / "file" / "sub").string()});
  CHECK(u.code == cli::kExitUsage);
  CHECK(run_cli({"sweep", "--config", (dir / "missing.cfg").string()}).code == cli::kExitUsage);
  fs::remove_all(dir);
}

TEST_CASE("sweep output is reproducible and plots cover every panel") {
  const auto dir = temp_dir();
  spit(dir / "small.cfg", kSmallConfig);
  const auto a = run_cli({"sweep", "--config", (dir / "small.cfg").string(), "--out", (dir / "a").string(), "--json"});
  const auto b = run_cli({"sweep", "--config", (dir / "small.cfg").string(), "--out", (dir / "b").string(), "--workers", "2"});
  CHECK(a.code != cli::kExitUsage);
  const auto summary = nlohmann::json::parse(a.out);
  CHECK(summary["records"].get<int>() == 4 * 3 * 4);
  CHECK(summary["failed"].get<int>() == 0);
  const std::string ra = slurp(dir / "a" / "records.csv");
  CHECK(ra == slurp(dir / "b" / "records.csv"));
  CHECK(ra.substr(0, ra.find('\n')) == kRecordsHeader);
  CHECK(slurp(dir / "a" / "fits.csv") == slurp(dir / "b" / "fits.csv"));

  // JSONL carries the same records.
  spit(dir / "jsonl.cfg", std::string(kSmallConfig) + "format = jsonl\n");
  run_cli({"sweep", "--config", (dir / "jsonl.cfg").string(), "--out", (dir / "j").string()});
  const auto from_jsonl = read_records((dir / "j" / "records.jsonl").string());
  std::ostringstream re;
  write_records_csv(re, from_jsonl);
  CHECK(re.str() == ra);

  // Plot: one panel per distinct (kind, p).
  REQUIRE(run_cli({"plot", (dir / "a" / "records.csv").string(), "--out", (dir / "plots").string()}).code == 0);
  const auto records = read_records((dir / "a" / "records.csv").string());
  std::set<std::pair<int, double>> pairs;
  for (const auto& r : records) pairs.insert({static_cast<int>(r.kind), r.p});
  const std::string script = slurp(dir / "plots" / "ratio_vs_lambda.gp");
  std::size_t panels = 0;
  for (std::size_t pos = script.find("\nplot "); pos != std::string::npos; pos = script.find("\nplot ", pos + 1)) ++panels;
  CHECK(panels == pairs.size());
  CHECK(fs::exists(dir / "plots" / "quotient_vs_lambda.gp"));

  // Reordered records give the same plot files.
  std::vector<std::string> lines;
  std::istringstream is(ra);
  std::string header, line;
  std::getline(is, header);
  while (std::getline(is, line)) lines.push_back(line);
  std::mt19937_64 rng(1);
  std::shuffle(lines.begin(), lines.end(), rng);
  std::string shuffled = header + "\n";
  for (const auto& l : lines) shuffled += l + "\n";
  spit(dir / "shuffled.csv", shuffled);
  REQUIRE(run_cli({"plot", (dir / "shuffled.csv").string(), "--out", (dir / "plots2").string()}).code == 0);
  for (const auto& entry : fs::directory_iterator(dir / "plots"))
    CHECK(slurp(entry.path()) == slurp(dir / "plots2" / entry.path().filename()));

  // Malformed and empty records.
  spit(dir / "empty.csv", "");
  CHECK(run_cli({"plot", (dir / "empty.csv").string(), "--out", (dir / "p3").string()}).code == cli::kExitUsage);
  spit(dir / "header_only.csv", std::string(kRecordsHeader) + "\n");
  CHECK(run_cli({"plot", (dir / "header_only.csv").string(), "--out", (dir / "p3").string()}).code == cli::kExitUsage);
  spit(dir / "broken.csv", std::string(kRecordsHeader) + "\n" + lines[0] + "\n100,0.1,4,knapp\n");
  const auto broken = run_cli({"plot", (dir / "broken.csv").string(), "--out", (dir / "p3").string()});
  CHECK(broken.code == cli::kExitUsage);
  CHECK(broken.err.find("line 3") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("support command") {
  const auto r = run_cli({"support", "--lambda", "100", "--delta", "0.01", "--json"});
  REQUIRE(r.code == cli::kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  const double f1 = j["f1_measure"].get<double>();
  CHECK(std::abs(f1 - j["f1_oracle"].get<double>()) / f1 < 0.01);
  // The k = lambda line alone contributes sqrt(2.01), so the sum sits slightly above 4.
  CHECK(f1 == doctest::Approx(4.35924506).epsilon(1e-8));

  const auto a = nlohmann::json::parse(run_cli({"support", "--lambda", "1000", "--delta", "0.1", "--json"}).out);
  const auto b = nlohmann::json::parse(run_cli({"support", "--lambda", "10000", "--delta", "0.1", "--json"}).out);
  const double ca = a["max_cap_over_scale"].get<double>(), cb = b["max_cap_over_scale"].get<double>();
  CHECK(cb / ca <= 4);
  CHECK(cb / ca >= 0.25);
  CHECK(a["oracle_agreement"].get<bool>());
  CHECK(b["oracle_agreement"].get<bool>());

  const auto text = run_cli({"support", "--lambda", "100", "--delta", "0.3"});
  CHECK(text.code == cli::kExitOk);
  CHECK(text.out.find("f1") != std::string::npos);
  CHECK(run_cli({"support", "--lambda", "0.5", "--delta", "0.1"}).code == cli::kExitUsage);
  CHECK(run_cli({"support", "--lambda", "100", "--delta", "1.5"}).code == cli::kExitUsage);
}

TEST_CASE("example command") {
  const auto k = run_cli({"example", "--kind", "knapp", "--lambda", "1000", "--delta", "0.1", "--p", "4", "--json"});
  REQUIRE(k.code == cli::kExitOk);
  const auto jk = nlohmann::json::parse(k.out);
  CHECK(jk["quotient"].get<double>() >= 0.05);
  CHECK(jk["quotient"].get<double>() <= 20);

  const auto a = run_cli({"example", "--kind", "annulus", "--lambda", "200", "--delta", "0.1", "--p", "2", "--json"});
  REQUIRE(a.code == cli::kExitOk);
  CHECK(nlohmann::json::parse(a.out)["ratio"].get<double>() == doctest::Approx(1).epsilon(1e-9));

  const auto bad = run_cli({"example", "--kind", "knapp", "--lambda", "1000.5", "--delta", "0.1", "--p", "4"});
  CHECK(bad.code == cli::kExitUsage);
  CHECK(bad.err.find("assume lambda in N") != std::string::npos);
  CHECK(run_cli({"example", "--kind", "blob", "--lambda", "100", "--delta", "0.1"}).code == cli::kExitUsage);

  const auto inf = run_cli({"example", "--kind", "random_corona", "--lambda", "50", "--delta", "0.2", "--p", "inf", "--seed", "3"});
  CHECK(inf.code == cli::kExitOk);
  CHECK(inf.out.find("ratio") != std::string::npos);
}
