// End-to-end tests driving the installed command-line binary. The path to
// the executable comes from the SPINSIM_CLI_PATH environment variable, with
// the build-tree location compiled in as the fallback.
#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

#ifndef SPINSIM_CLI_FALLBACK
#define SPINSIM_CLI_FALLBACK "spinsim"
#endif

std::string cli_path() {
  if (const char* env = std::getenv("SPINSIM_CLI_PATH")) return env;
  return SPINSIM_CLI_FALLBACK;
}

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    std::mt19937_64 rng(std::random_device{}());
    dir_ = fs::temp_directory_path() /
           ("spinsim-cli-" + std::to_string(rng() & 0xffffff));
    fs::create_directories(dir_);
  }
  void TearDown() override {
    std::error_code ec;
    fs::remove_all(dir_, ec);
  }

  RunResult run(const std::string& args) const {
    const fs::path log = dir_ / "run.log";
    std::ostringstream cmd;
    cmd << '"' << cli_path() << "\" " << args << " > \"" << log.string()
        << "\" 2>&1";
    const int status = std::system(cmd.str().c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(log);
    std::stringstream ss;
    ss << in.rdbuf();
    r.output = ss.str();
    return r;
  }

  std::string read_file(const fs::path& p) const {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  std::vector<std::vector<std::string>> read_csv(const fs::path& p) const {
    std::vector<std::vector<std::string>> rows;
    std::ifstream in(p);
    std::string line;
    while (std::getline(in, line)) {
      while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) {
        line.pop_back();
      }
      if (line.empty()) continue;
      std::vector<std::string> fields;
      std::istringstream ss(line);
      std::string f;
      while (std::getline(ss, f, ',')) fields.push_back(f);
      rows.push_back(std::move(fields));
    }
    return rows;
  }

  json read_manifest(const std::string& stem) const {
    return json::parse(read_file(dir_ / (stem + ".manifest.json")));
  }

  std::string out_flag(const std::string& stem) const {
    return " --out \"" + dir_.string() + "\" --stem " + stem;
  }

  fs::path dir_;
};

TEST_F(CliTest, TimescaleConvertsRampTimes) {
  const RunResult r =
      run("timescale --j-hz 0.5e9 --jt 10.4" + out_flag("ts1"));
  ASSERT_EQ(r.exit_code, 0) << r.output;
  const auto rows = read_csv(dir_ / "ts1.csv");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_NEAR(std::stod(rows[1][3]), 20.8, 1e-9);

  const RunResult r2 =
      run("timescale --j-hz 0.5e9 --jt 23.5" + out_flag("ts2"));
  ASSERT_EQ(r2.exit_code, 0);
  const auto rows2 = read_csv(dir_ / "ts2.csv");
  EXPECT_NEAR(std::stod(rows2[1][3]), 47.0, 1e-9);
}

TEST_F(CliTest, TimescaleLooksUpPriorResults) {
  const fs::path table = dir_ / "tmin-prior.csv";
  {
    std::ofstream out(table);
    out << "N,N_squared,JT_min,status\r\n"
        << "8,64,7.35,ok\r\n"
        << "20,400,23.5,ok\r\n";
  }
  const RunResult r = run("timescale --j-hz 0.5e9 --tmin-csv \"" +
                          table.string() + "\" --n 20" + out_flag("ts3"));
  ASSERT_EQ(r.exit_code, 0) << r.output;
  const auto rows = read_csv(dir_ / "ts3.csv");
  EXPECT_NEAR(std::stod(rows[1][3]), 47.0, 1e-9);

  const RunResult missing = run("timescale --j-hz 0.5e9 --tmin-csv \"" +
                                table.string() + "\" --n 12" + out_flag("ts4"));
  EXPECT_NE(missing.exit_code, 0);
}

TEST_F(CliTest, TimescaleRejectsNonPositiveCoupling) {
  const RunResult r = run("timescale --j-hz 0 --jt 10" + out_flag("bad"));
  EXPECT_NE(r.exit_code, 0);
  EXPECT_FALSE(fs::exists(dir_ / "bad.csv"));
}

TEST_F(CliTest, GapDimerizedIsFourPerSiteCount) {
  const RunResult r =
      run("gap --mode dimerized --n 4 --n 6" + out_flag("gapd"));
  ASSERT_EQ(r.exit_code, 0) << r.output;
  const auto rows = read_csv(dir_ / "gapd.csv");
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0][0], "N");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_NEAR(std::stod(rows[i][2]), 4.0, 1e-8);
    EXPECT_EQ(rows[i][3], "ok");
  }
}

TEST_F(CliTest, GapEmptyListWritesHeaderOnlyTable) {
  const RunResult r = run("gap --mode uniform" + out_flag("gap0"));
  ASSERT_EQ(r.exit_code, 0) << r.output;
  const auto rows = read_csv(dir_ / "gap0.csv");
  ASSERT_EQ(rows.size(), 1u);  // header only
  EXPECT_EQ(rows[0][0], "N");
}

TEST_F(CliTest, GapInfeasibleSitesReportPerRowErrors) {
  const RunResult r =
      run("gap --mode dimerized --n 4 --n 7 --n 6" + out_flag("gaperr"));
  ASSERT_EQ(r.exit_code, 0) << r.output;  // run continues past bad rows
  const auto rows = read_csv(dir_ / "gaperr.csv");
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[1][3], "ok");
  EXPECT_NE(rows[2][3].find("error"), std::string::npos);
  EXPECT_EQ(rows[3][3], "ok");
}

TEST_F(CliTest, PrepareRejectsZeroRampTime) {
  const RunResult r = run("prepare --n 6 --ramp-time 0" + out_flag("bad"));
  EXPECT_NE(r.exit_code, 0);
  EXPECT_FALSE(fs::exists(dir_ / "bad.csv"));
  EXPECT_FALSE(fs::exists(dir_ / "bad.manifest.json"));
}

TEST_F(CliTest, PrepareSingleRunWritesTrajectory) {
  const RunResult r =
      run("prepare --n 6 --ramp-time 1.5 --dt 0.05" + out_flag("prep"));
  ASSERT_EQ(r.exit_code, 0) << r.output;
  const auto rows = read_csv(dir_ / "prep.csv");
  ASSERT_EQ(rows[0][0], "Jt");
  ASSERT_EQ(rows[0][1], "F_g");
  ASSERT_EQ(rows.size(), 32u);  // header + 30 steps + t=0
  EXPECT_NEAR(std::stod(rows[1][0]), 0.0, 1e-12);
  EXPECT_NEAR(std::stod(rows.back()[0]), 1.5, 1e-9);
  const double final_f = std::stod(rows.back()[1]);
  EXPECT_GT(final_f, 0.9);

  const json manifest = read_manifest("prep");
  EXPECT_EQ(manifest.at("command"), "prepare");
  EXPECT_EQ(manifest.at("parameters").at("mode"), "single");
  EXPECT_NEAR(manifest.at("parameters").at("fidelity_at_T").get<double>(),
              final_f, 1e-9);
}

TEST_F(CliTest, DisorderTurnsOnEnsembleMode) {
  const RunResult r = run(
      "prepare --n 6 --ramp-time 1.5 --dt 0.05 --bnuc 0.1 --realizations 4 "
      "--seed 7" +
      out_flag("ens"));
  ASSERT_EQ(r.exit_code, 0) << r.output;
  const auto rows = read_csv(dir_ / "ens.csv");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0][0], "eta");
  EXPECT_EQ(rows[0][3], "mean");
  const json manifest = read_manifest("ens");
  EXPECT_EQ(manifest.at("parameters").at("mode"), "ensemble");
  EXPECT_EQ(manifest.at("master_seed"), 7);
}

TEST_F(CliTest, EnsembleCsvIdenticalAcrossWorkerCounts) {
  const std::string common =
      "prepare --n 6 --ramp-time 1.5 --dt 0.05 --bnuc 0.1 --delta 0.1 "
      "--eta 0.1 --realizations 4 --seed 11";
  const RunResult a = run(common + " --workers 1" + out_flag("w1"));
  const RunResult b = run(common + " --workers 3" + out_flag("w3"));
  ASSERT_EQ(a.exit_code, 0) << a.output;
  ASSERT_EQ(b.exit_code, 0) << b.output;
  EXPECT_EQ(read_file(dir_ / "w1.csv"), read_file(dir_ / "w3.csv"));
}

TEST_F(CliTest, ConfigFileSuppliesDefaultsAndFlagsOverride) {
  const fs::path cfg = dir_ / "run.ini";
  {
    std::ofstream out(cfg);
    out << "[prepare]\n"
        << "n=6\n"
        << "ramp-time=1.5\n"
        << "dt=0.05\n";
  }
  const RunResult from_cfg = run("--config \"" + cfg.string() + "\" prepare" +
                                 out_flag("cfg6"));
  ASSERT_EQ(from_cfg.exit_code, 0) << from_cfg.output;
  EXPECT_EQ(read_manifest("cfg6").at("parameters").at("n"), 6);

  const RunResult overridden = run("--config \"" + cfg.string() +
                                   "\" prepare --n 8" + out_flag("cfg8"));
  ASSERT_EQ(overridden.exit_code, 0) << overridden.output;
  EXPECT_EQ(read_manifest("cfg8").at("parameters").at("n"), 8);
}

TEST_F(CliTest, TransferReportsPeakInManifest) {
  const RunResult r = run(
      "transfer --n 6 --ramp-time 2.0 --dt 0.05 --t-end 4.0" +
      out_flag("tr"));
  ASSERT_EQ(r.exit_code, 0) << r.output;
  const json manifest = read_manifest("tr");
  const auto& params = manifest.at("parameters");
  EXPECT_TRUE(params.contains("peak_fidelity"));
  EXPECT_TRUE(params.contains("peak_time"));
  EXPECT_GE(params.at("peak_time").get<double>(), 2.0);
  const auto rows = read_csv(dir_ / "tr.csv");
  EXPECT_EQ(rows[0][1], "F_c");
}

TEST_F(CliTest, InvalidBackendIsRejected) {
  const RunResult r =
      run("prepare --n 6 --ramp-time 1 --backend magic" + out_flag("bad"));
  EXPECT_NE(r.exit_code, 0);
}

TEST_F(CliTest, ManifestListsOutputsAndVersion) {
  const RunResult r = run("gap --mode dimerized --n 4" + out_flag("man"));
  ASSERT_EQ(r.exit_code, 0) << r.output;
  const json manifest = read_manifest("man");
  EXPECT_TRUE(manifest.contains("command"));
  EXPECT_TRUE(manifest.contains("parameters"));
  EXPECT_TRUE(manifest.contains("master_seed"));
  EXPECT_TRUE(manifest.contains("version"));
  EXPECT_TRUE(manifest.contains("duration_seconds"));
  ASSERT_TRUE(manifest.contains("outputs"));
  bool lists_csv = false;
  for (const auto& entry : manifest.at("outputs")) {
    if (entry.get<std::string>().find("man.csv") != std::string::npos) {
      lists_csv = true;
    }
  }
  EXPECT_TRUE(lists_csv);
}

TEST_F(CliTest, EmitPlotWritesGnuplotScript) {
  const RunResult r = run("prepare --n 6 --ramp-time 1.5 --dt 0.05 "
                          "--emit-plot" +
                          out_flag("plot"));
  ASSERT_EQ(r.exit_code, 0) << r.output;
  ASSERT_TRUE(fs::exists(dir_ / "plot.gnuplot"));
  const std::string script = read_file(dir_ / "plot.gnuplot");
  EXPECT_NE(script.find("plot"), std::string::npos);
  EXPECT_NE(script.find("plot.csv"), std::string::npos);
}

TEST_F(CliTest, SweepGridsDisorderValues) {
  const RunResult r = run(
      "sweep --protocol prepare --n 6 --ramp-time 1.5 --dt 0.05 "
      "--delta 0 --delta 0.1 --eta 0 --bnuc 0.1 --realizations 2 --seed 1" +
      out_flag("sweep"));
  ASSERT_EQ(r.exit_code, 0) << r.output;
  const auto rows = read_csv(dir_ / "sweep.csv");
  ASSERT_EQ(rows.size(), 3u);  // header + 2 delta values
  EXPECT_EQ(rows[0][0], "eta");
  EXPECT_EQ(rows[1][1], "0");
  EXPECT_EQ(rows[2][1], "0.1");
}

}  // namespace
