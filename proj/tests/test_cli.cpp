#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "qccilc/pauli_io.hpp"
#include "qccilc/sim.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kData = QCCILC_TEST_DATA;
const std::string kCli = QCCILC_CLI;

struct CliRun {
  int code = -1;
  std::string out;
  std::string err;
};

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("qccilc_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  CliRun run(const std::string& args) const {
    const auto out = dir_ / "stdout.txt";
    const auto err = dir_ / "stderr.txt";
    const std::string cmd = "cd '" + dir_.string() + "' && '" + kCli + "' " + args + " >'" + out.string() + "' 2>'" +
                            err.string() + "'";
    const int status = std::system(cmd.c_str());
    CliRun r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
  }

  static std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

std::string h2() { return (kData / "h2_sto3g_0.74.fcidump").string(); }
std::string lih(const std::string& r) { return (kData / ("lih_sto3g_cas23_" + r + ".fcidump")).string(); }

TEST_F(CliTest, MapMatchesGoldenH2) {
  const auto r = run("-o h2.pauli map " + h2());
  ASSERT_EQ(r.code, 0) << r.err;
  const auto text = slurp(path("h2.pauli"));
  EXPECT_EQ(text, slurp(kData / "golden" / "h2_sto3g_0.74_jw.pauli"));
  const auto op = qccilc::parse_pauli_text(text);
  EXPECT_EQ(op.num_qubits(), 4u);
  EXPECT_EQ(op.size(), 15u);
  EXPECT_TRUE(fs::exists(path("h2.pauli.manifest.json")));
}

TEST_F(CliTest, ManifestRecordsInputsAndConfig) {
  ASSERT_EQ(run("--seed 7 -o h2.pauli map " + h2() + " --mapping parity").code, 0);
  const auto j = nlohmann::json::parse(slurp(path("h2.pauli.manifest.json")));
  EXPECT_EQ(j["command"], "map");
  EXPECT_EQ(j["seed"], 7);
  EXPECT_EQ(j["config"]["mapping"], "parity");
  ASSERT_EQ(j["inputs"].size(), 1u);
  EXPECT_EQ(j["inputs"][0]["sha256"].get<std::string>().size(), 64u);
  EXPECT_TRUE(j.contains("wall_time_s"));
  EXPECT_EQ(j["outputs"][0], "h2.pauli");
}

TEST_F(CliTest, SpinPenaltyKeepsQubitCount) {
  ASSERT_EQ(run("-o a.pauli map " + h2()).code, 0);
  ASSERT_EQ(run("-o b.pauli map " + h2() + " --spin-penalty 0.5").code, 0);
  const auto a = qccilc::read_pauli_file(path("a.pauli"));
  const auto b = qccilc::read_pauli_file(path("b.pauli"));
  EXPECT_EQ(a.num_qubits(), b.num_qubits());
  EXPECT_FALSE(a == b);
}

TEST_F(CliTest, BadInputExitsTwoWithLineNumber) {
  {
    std::ofstream f(path("bad.fcidump"));
    f << " &FCI NORB=2,NELEC=2,\n &END\n 0.5 1 1 x 1\n";
  }
  const auto r = run("map bad.fcidump");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("line 3"), std::string::npos) << r.err;
  EXPECT_EQ(run("map missing.fcidump").code, 2);
  EXPECT_EQ(run("no-such-command").code, 2);
  EXPECT_EQ(run("--help").code, 0);
}

TEST_F(CliTest, AnticomExitCodes) {
  const auto ok = run("anticom 1100 0011 1111");
  ASSERT_EQ(ok.code, 0) << ok.err;
  int lines = 0;
  for (char c : ok.out) lines += c == '\n';
  EXPECT_EQ(lines, 3);
  EXPECT_EQ(run("anticom 1 1").code, 2);  // duplicate flip vector
  // Single-qubit flips force Y on every qubit, and then 1111 has no
  // completion anticommuting with all four.
  EXPECT_EQ(run("anticom 0001 0010 0100 1000 1111").code, 3);
}

TEST_F(CliTest, PipelineDepthZeroIsReferenceEnergy) {
  ASSERT_EQ(run("-o h2.pauli map " + h2()).code, 0);
  const auto r = run("pipeline h2.pauli -d 0 -M 0");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["steps"].size(), 0u);
  EXPECT_DOUBLE_EQ(j["final_energy"].get<double>(), j["reference_energy"].get<double>());
}

TEST_F(CliTest, PipelineReportsVariationalEnergiesAndStepFiles) {
  ASSERT_EQ(run("-o li.pauli map " + lih("1.6")).code, 0);
  const auto r = run("-o out.json pipeline li.pauli -d 2 -N 2 -M 2 --out-dir steps");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(slurp(path("out.json")));
  EXPECT_TRUE(j["energies_non_increasing"].get<bool>());
  EXPECT_GE(j["final_energy"].get<double>(), j["exact_energy"].get<double>() - 1e-9);
  EXPECT_GT(j["overlap_with_fci"].get<double>(), 0.99);
  const auto steps = j["steps"].size();
  ASSERT_GE(steps, 1u);
  for (std::size_t k = 1; k <= steps; ++k) {
    const auto f = path("steps/step_" + std::to_string(k) + ".pauli");
    ASSERT_TRUE(fs::exists(f));
    EXPECT_EQ(qccilc::read_pauli_file(f).size(), j["steps"][k - 1]["terms"].get<std::size_t>());
  }
  // Dressing is a similarity transform, so the spectrum survives.
  const auto last = qccilc::read_pauli_file(path("steps/step_" + std::to_string(steps) + ".pauli"));
  EXPECT_NEAR(qccilc::ground_state(last).energy, j["exact_energy"].get<double>(), 1e-6);
}

TEST_F(CliTest, OutputsAreByteIdenticalOnRerun) {
  ASSERT_EQ(run("-o li.pauli map " + lih("1.6")).code, 0);
  ASSERT_EQ(run("--seed 5 -o a.json pipeline li.pauli -d 1 -N 2 -M 1").code, 0);
  ASSERT_EQ(run("--seed 5 -o b.json pipeline li.pauli -d 1 -N 2 -M 1").code, 0);
  EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
  ASSERT_EQ(run("--seed 5 -o a.csv bench-growth --qubits 6 --terms 30 -N 2,3 --trials 3 --kind both").code, 0);
  ASSERT_EQ(run("--seed 5 --threads 1 -o b.csv bench-growth --qubits 6 --terms 30 -N 2,3 --trials 3 --kind both").code,
            0);
  EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
}

TEST_F(CliTest, ScanSingleFileMatchesPipeline) {
  ASSERT_EQ(run("-o li.pauli map " + lih("1.6")).code, 0);
  const auto p = run("pipeline li.pauli -d 1 -N 2 -M 1");
  const auto s = run("scan li.pauli -d 1 -N 2 -M 1");
  ASSERT_EQ(p.code, 0) << p.err;
  ASSERT_EQ(s.code, 0) << s.err;
  const auto j = nlohmann::json::parse(p.out);
  std::istringstream csv(s.out);
  std::string header, row;
  std::getline(csv, header);
  std::getline(csv, row);
  EXPECT_EQ(header, "point,E_ref,E_ilc,E_final,E_exact,terms");
  std::vector<std::string> cols;
  std::stringstream rs(row);
  for (std::string c; std::getline(rs, c, ',');) cols.push_back(c);
  ASSERT_EQ(cols.size(), 6u);
  EXPECT_NEAR(std::stod(cols[3]), j["final_energy"].get<double>(), 1e-9);
  EXPECT_GE(std::stod(cols[3]), std::stod(cols[4]) - 1e-9);
}

TEST_F(CliTest, ScanRowsAreVariational) {
  std::string files;
  for (const auto* r : {"1.0", "1.6", "2.4"}) {
    ASSERT_EQ(run(std::string("-o li_") + r + ".pauli map " + lih(r)).code, 0);
    files += std::string(" li_") + r + ".pauli";
  }
  const auto s = run("-o scan.csv scan" + files + " --select 1 -d 1 -N 2 -M 2");
  ASSERT_EQ(s.code, 0) << s.err;
  std::istringstream csv(slurp(path("scan.csv")));
  std::string line;
  std::getline(csv, line);
  int rows = 0;
  while (std::getline(csv, line)) {
    std::vector<double> v;
    std::stringstream rs(line);
    for (std::string c; std::getline(rs, c, ',');) v.push_back(std::stod(c));
    EXPECT_GE(v[3], v[4] - 1e-9) << line;
    EXPECT_LE(v[3], v[1] + 1e-12) << line;
    ++rows;
  }
  EXPECT_EQ(rows, 3);
  const auto m = nlohmann::json::parse(slurp(path("scan.csv.manifest.json")));
  EXPECT_EQ(m["notes"]["ilc_entanglers"].size(), 1u);
}

TEST_F(CliTest, IlcOptFeedsDress) {
  ASSERT_EQ(run("-o h2.pauli map " + h2()).code, 0);
  ASSERT_EQ(run("-o a.json ilc-opt h2.pauli -N 1").code, 0);
  const auto a = nlohmann::json::parse(slurp(path("a.json")));
  for (const auto* k : {"energy", "tau", "alphas", "entanglers", "iterations"}) EXPECT_TRUE(a.contains(k)) << k;
  ASSERT_EQ(run("-o d.pauli dress h2.pauli --ansatz a.json").code, 0);
  const auto d = qccilc::read_pauli_file(path("d.pauli"));
  const auto ref = *qccilc::find_reference_hint(slurp(path("d.pauli")));
  EXPECT_NEAR(qccilc::expectation(qccilc::Statevector::basis(ref), d), a["energy"].get<double>(), 1e-8);
}

TEST_F(CliTest, BenchGrowthRespectsWorstCase) {
  const auto r = run("bench-growth --qubits 6 --terms 40 -N 2,4 --trials 4");
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream csv(r.out);
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "kind,N,trial,input_terms,terms,predicted_avg,predicted_worst,predicted_qcc");
  int rows = 0;
  while (std::getline(csv, line)) {
    std::vector<std::string> c;
    std::stringstream rs(line);
    for (std::string x; std::getline(rs, x, ',');) c.push_back(x);
    EXPECT_LE(std::stod(c[4]), std::stod(c[6])) << line;
    ++rows;
  }
  EXPECT_EQ(rows, 8);
}

TEST_F(CliTest, ConfigFileAndFlagPrecedence) {
  ASSERT_EQ(run("-o h2.pauli map " + h2()).code, 0);
  {
    std::ofstream f(path("cfg.toml"));
    f << "[dis]\ntop = 1\n";
  }
  const auto from_cfg = run("--config cfg.toml dis h2.pauli");
  ASSERT_EQ(from_cfg.code, 0) << from_cfg.err;
  int lines = 0;
  for (char c : from_cfg.out) lines += c == '\n';
  EXPECT_EQ(lines, 2);
  {
    std::ofstream f(path("cfg.toml"));
    f << "[dis]\ntop = 1\n[spectrum]\ncount = 3\n";
  }
  const auto sp = run("--config cfg.toml spectrum h2.pauli --count 5");
  ASSERT_EQ(sp.code, 0) << sp.err;
  EXPECT_EQ(nlohmann::json::parse(sp.out)["eigenvalues"].size(), 5u);
}

}  // namespace
