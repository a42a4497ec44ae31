#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qsr/cli.hpp"
#include "qsr/presets.hpp"
#include "qsr/sampling.hpp"
#include "qsr/state_io.hpp"

namespace qsr {
namespace {

using nlohmann::json;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "qsr");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

json record(const Run& r) { return json::parse(r.out); }

class TempDir {
 public:
  TempDir() {
    path_ = std::filesystem::temp_directory_path() /
            ("qsr_test_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  return {std::istreambuf_iterator<char>(in), {}};
}

TEST(StateIo, RoundTripIsExact) {
  SeededStream s(81);
  const auto psi = random_pure_state(SystemLayout{{"C", 3}, {"R", 2}}, s);
  const auto back = read_state(write_state(psi));
  EXPECT_EQ(back.layout(), psi.layout());
  EXPECT_TRUE(back.amplitudes() == psi.amplitudes());
  EXPECT_EQ(state_digest(back), state_digest(psi));
  EXPECT_EQ(state_digest(psi).size(), 16u);
}

TEST(StateIo, ErrorsNamePositions) {
  auto message = [](std::string_view text) {
    try {
      read_state(text);
    } catch (const FormatError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_NE(message("{\"subsystems\": [{\"label\": \"C\", \"dim\": 2}], \"amplitudes\": [[1, 0], [0]]}")
                .find("/amplitudes/1"),
            std::string::npos);
  EXPECT_NE(message("{\"subsystems\": [{\"label\": \"C\"}], \"amplitudes\": []}").find("/subsystems/0"),
            std::string::npos);
  EXPECT_NE(message("{\"subsystems\": [{\"label\": \"C\", \"dim\": 2}], \"amplitudes\": [[1, 0]]}")
                .find("entries"),
            std::string::npos);
  EXPECT_NE(message("{\"subsystems\": [{\"label\": \"C\", \"dim\": 2}], \"amplitudes\": [[1, 0], [1, 0]]}")
                .find("norm"),
            std::string::npos);
  EXPECT_NE(message("{\"subsystems\": [").find("byte"), std::string::npos);
  EXPECT_NE(message("{\"format\": \"other/2\", \"subsystems\": [], \"amplitudes\": [[1, 0]]}")
                .find("format"),
            std::string::npos);
}

TEST(StateIo, MissingFile) {
  EXPECT_THROW(load_state_file("/nonexistent/state.json"), FormatError);
}

TEST(Presets, AllNamesBuild) {
  for (auto name : preset_names()) {
    const auto psi = make_preset(name, 1);
    ASSERT_TRUE(psi.has_value()) << name;
    EXPECT_NEAR(psi->amplitudes().norm(), 1.0, 1e-12);
  }
  EXPECT_FALSE(make_preset("nope").has_value());
  EXPECT_FALSE(make_preset("random", 1)->amplitudes() == make_preset("random", 2)->amplitudes());
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, cli::kUsage);
  EXPECT_EQ(run({"rates"}).code, cli::kUsage);
  EXPECT_EQ(run({"rates", "--state", "no-such-state"}).code, cli::kUsage);
  EXPECT_EQ(run({"protocol", "--state", "bell-CA", "--partition", "3,1,1"}).code, cli::kUsage);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kUsage);
  EXPECT_EQ(run({"--help"}).code, cli::kOk);
}

TEST(Cli, Presets) {
  const auto r = run({"presets"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("bell-CA\n"), std::string::npos);
}

TEST(Cli, RatesOfPresets) {
  auto rates = [](const char* name) {
    const auto r = run({"rates", "--state", name});
    EXPECT_EQ(r.code, 0) << r.err;
    return record(r)["results"];
  };
  auto check = [&](const char* name, double q, double e1, double e2) {
    const auto j = rates(name);
    EXPECT_NEAR(j["Q"].get<double>(), q, 1e-9) << name;
    EXPECT_NEAR(j["E1"].get<double>(), e1, 1e-9) << name;
    EXPECT_NEAR(j["E2"].get<double>(), e2, 1e-9) << name;
  };
  check("bell-CA", 0, 1, 0);
  check("bell-CR", 1, 0, 0);
  check("product", 0, 0, 0);
}

TEST(Cli, ReportShape) {
  const auto j = record(run({"rates", "--state", "w-CABR", "--seed", "4"}));
  EXPECT_EQ(j["command"], "rates");
  EXPECT_EQ(j["format"], "qsr-report/1");
  EXPECT_EQ(j["inputs"]["seed"], 4);
  EXPECT_EQ(j["inputs"]["generator"], std::string(kGeneratorVersion));
  EXPECT_EQ(j["inputs"]["state"]["digest"], state_digest(*make_preset("w-CABR")));
  EXPECT_TRUE(j.contains("timings_ms"));
}

TEST(Cli, DecoupleMaximallyMixed) {
  const auto r = run({"decouple", "--partition", "2,2,2", "--samples", "100"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = record(r)["results"];
  EXPECT_LT(j["omega_check"]["mean_squared_residual"].get<double>(), 1e-20);
  EXPECT_TRUE(j["pass"].get<bool>());
  EXPECT_TRUE(j["search"]["accepted"].get<bool>());
}

TEST(Cli, ProtocolExactCase) {
  const auto r = run({"protocol", "--state", "bell-CA", "--partition", "1,2,1", "--reverse"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = record(r)["results"];
  EXPECT_LE(j["forward"]["distance_to_target"].get<double>(), 1e-6);
  EXPECT_EQ(j["forward"]["ledger"]["ebits_consumed"], 1.0);
  EXPECT_LE(j["reverse"]["distance_to_target"].get<double>(), 1e-6);
}

TEST(Cli, ProtocolIsDeterministic) {
  const std::vector<std::string> args{"protocol", "--state", "random", "--seed", "5",
                                      "--partition", "2,1,1"};
  auto a = record(run(args)), b = record(run(args));
  a.erase("timings_ms");
  b.erase("timings_ms");
  EXPECT_EQ(a, b);
}

TEST(Cli, IidProduct) {
  const auto r = run({"iid", "--state", "product", "--n", "5"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = record(r)["results"];
  EXPECT_EQ(j["per_copy"]["qubits"], 0.0);
  EXPECT_EQ(j["per_copy"]["ebits_consumed"], 0.0);
  EXPECT_EQ(j["per_copy"]["ebits_distilled"], 0.0);
}

TEST(Cli, IidGuardAndFeasibility) {
  EXPECT_EQ(run({"iid", "--state", "random", "--n", "3", "--delta", "0.6", "--max-entries", "100"}).code,
            cli::kInfeasible);
  EXPECT_EQ(run({"iid", "--state", "bell-CR", "--n", "2", "--require-feasible"}).code,
            cli::kInfeasible);
}

TEST(Cli, IidSweepCsv) {
  const auto r = run({"iid", "--state", "bell-CR", "--sweep", "2..4"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream lines(r.out);
  std::string line;
  int rows = 0;
  std::getline(lines, line);
  EXPECT_EQ(line.rfind("n,delta,t,", 0), 0u);
  while (std::getline(lines, line)) ++rows;
  EXPECT_EQ(rows, 3);
  EXPECT_EQ(run({"iid", "--state", "bell-CR", "--sweep", "4..2"}).code, cli::kUsage);
}

TEST(Cli, SampleStateDeterministicAndParsable) {
  TempDir dir;
  const auto a = dir.file("a.json"), b = dir.file("b.json");
  ASSERT_EQ(run({"sample-state", "--dims", "C=2,A=2,B=2,R=2", "--seed", "7", "--out", a}).code, 0);
  ASSERT_EQ(run({"sample-state", "--dims", "C=2,A=2,B=2,R=2", "--seed", "7", "--out", b}).code, 0);
  EXPECT_EQ(slurp(a), slurp(b));
  const auto psi = load_state_file(a);
  EXPECT_NEAR(psi.amplitudes().norm(), 1.0, 1e-12);
  EXPECT_EQ(write_state(psi), slurp(a));

  const auto r = run({"rates", "--state", a});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(record(r)["inputs"]["state"]["source"], a);

  EXPECT_EQ(run({"sample-state", "--dims", "C=two"}).code, cli::kUsage);
}

TEST(Cli, MalformedStateFileIsUsageError) {
  TempDir dir;
  const auto f = dir.file("bad.json");
  std::ofstream(f) << "{\"subsystems\": [{\"label\": \"C\", \"dim\": 2}], \"amplitudes\": [[1, 0], [1, 0]]}";
  const auto r = run({"rates", "--state", f});
  EXPECT_EQ(r.code, cli::kUsage);
  EXPECT_NE(r.err.find("norm"), std::string::npos);
}

}  // namespace
}  // namespace qsr
