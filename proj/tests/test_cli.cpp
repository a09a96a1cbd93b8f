#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "json.hpp"

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + BCL_CLI_PATH + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

double field(const std::string& text, const std::string& key) {
  const auto pos = text.find(key + ": ");
  if (pos == std::string::npos) return std::nan("");
  return std::stod(text.substr(pos + key.size() + 2));
}

double row_value(const std::string& csv, const std::string& prefix) {
  const auto pos = csv.find("\n" + prefix);
  if (pos == std::string::npos) return std::nan("");
  return std::stod(csv.substr(pos + 1 + prefix.size()));
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "bcl_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(Cli, HelpDocumentsFlags) {
  const auto top = run("--help");
  EXPECT_EQ(top.code, 0);
  for (const char* cmd : {"capacity", "decompose", "plot", "verify"}) EXPECT_NE(top.out.find(cmd), std::string::npos);

  const auto cap = run("capacity --help");
  EXPECT_EQ(cap.code, 0);
  for (const char* flag : {"--channel", "--eta", "--N", "--n", "--kappa", "--energy", "--format"}) {
    EXPECT_NE(cap.out.find(flag), std::string::npos) << flag;
  }
  const auto ver = run("verify --help");
  EXPECT_EQ(ver.code, 0);
  for (const char* flag : {"--suite", "--seed", "--report", "--kappa", "--dim", "--samples", "--tolerance", "--eta",
                           "--N", "--q-max", "--budget", "--threads", "--timing"}) {
    EXPECT_NE(ver.out.find(flag), std::string::npos) << flag;
  }
  EXPECT_NE(ver.out.find("1e-09"), std::string::npos);
}

TEST(Cli, Capacity) {
  auto r = run("capacity --channel thermal --eta 0.5 --N 1 --energy 10");
  EXPECT_EQ(r.code, 0);
  EXPECT_NEAR(field(r.out, "capacity_bits"), 2.6485405143302299, 1e-13);
  EXPECT_NEAR(field(r.out, "min_output_entropy_bits"), 1.3774437510817343, 1e-13);

  r = run("capacity --channel addnoise --n 0 --energy 0");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(field(r.out, "capacity_bits"), 0.0);

  r = run("capacity --channel contra-amp --kappa 2 --N 0 --energy 10 --format json");
  EXPECT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["capacity_bits"].get<double>(), 2.9658022036436044, 1e-13);
}

TEST(Cli, CapacityRejectsBadInput) {
  EXPECT_EQ(run("capacity --channel thermal --eta 1.5 --N 1 --energy 10").code, 1);
  EXPECT_EQ(run("capacity --channel thermal --eta 0.5 --energy 10").code, 1);
  EXPECT_EQ(run("capacity --channel amp --kappa 2 --N 0 --n 1 --energy 1").code, 1);
  EXPECT_EQ(run("capacity --channel warp --energy 1").code, 1);
  EXPECT_EQ(run("capacity --channel amp --kappa 2 --N 0 --energy 1 --bogus").code, 1);
  EXPECT_EQ(run("").code, 1);
}

TEST(Cli, Decompose) {
  auto r = run("decompose --channel addnoise --n 2");
  EXPECT_EQ(r.code, 0);
  EXPECT_NEAR(field(r.out, "eta0"), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(field(r.out, "kappa0"), 3.0, 1e-15);

  r = run("decompose --channel thermal --eta 1 --N 5");
  EXPECT_EQ(field(r.out, "eta0"), 1.0);
  EXPECT_EQ(field(r.out, "kappa0"), 1.0);

  r = run("decompose --channel amp --kappa 2 --N 1");
  EXPECT_NEAR(field(r.out, "eta0"), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(field(r.out, "kappa0"), 3.0, 1e-15);

  EXPECT_EQ(run("decompose --channel amp --kappa 0.5 --N 1").code, 1);
}

TEST(Cli, PlotIsAtomicAndReproducible) {
  const auto a = scratch("a.csv");
  const auto b = scratch("b.csv");
  ASSERT_EQ(run("plot --panel fig2a --out " + a.string()).code, 0);
  ASSERT_EQ(run("plot --panel fig2a --out " + b.string()).code, 0);
  const std::string text = slurp(a);
  EXPECT_EQ(text, slurp(b));
  EXPECT_EQ(text.rfind("panel,series,x,value\n", 0), 0u);
  EXPECT_NEAR(row_value(text, "fig2a,thermal:N=0,1,"), 4.8344668561366463, 1e-14);
  EXPECT_FALSE(std::filesystem::exists(a.string() + ".tmp"));

  const auto d = run("plot --panel fig2d");
  EXPECT_EQ(d.code, 0);
  EXPECT_NEAR(row_value(d.out, "fig2d,smin-addnoise,2,"), 2.7548875021634685, 1e-14);

  EXPECT_EQ(run("plot --panel fig2a --out /nonexistent-dir/x.csv").code, 1);
  EXPECT_EQ(run("plot --panel fig9").code, 1);
}

TEST(Cli, VerifyExitCodes) {
  const auto ok = run("verify --suite transposition --kappa 2 --dim 40");
  EXPECT_EQ(ok.code, 0);
  const auto j = nlohmann::json::parse(ok.out);
  EXPECT_EQ(j["test"], "transposition");
  EXPECT_GE(j["worst_margin"].get<double>(), -1e-6);

  EXPECT_EQ(run("verify --suite conjecture --tolerance 0").code, 2);
  EXPECT_EQ(run("verify --suite spectra --dim 6 --samples 3 --budget 1e-30").code, 3);
  EXPECT_EQ(run("verify --suite nonsense").code, 1);
  EXPECT_EQ(run("verify --suite mixing --eta 1.5").code, 1);
  EXPECT_EQ(run("verify --suite mixing --threads many").code, 1);
}

TEST(Cli, VerifyReportIsReproducible) {
  const auto path = scratch("report.json");
  const std::string args = "verify --suite chain --dim 6 --samples 4 --seed 9 --report " + path.string();
  const auto first = run(args);
  ASSERT_EQ(first.code, 0);
  EXPECT_EQ(slurp(path), first.out);
  const auto second = run(args, "BCL_THREADS=3");
  EXPECT_EQ(second.out, first.out);
  const auto j = nlohmann::json::parse(first.out);
  EXPECT_EQ(j["seed"].get<std::uint64_t>(), 9u);
  EXPECT_EQ(j["elapsed_seconds"].get<double>(), 0.0);
  EXPECT_TRUE(j["passed"].get<bool>());
}
