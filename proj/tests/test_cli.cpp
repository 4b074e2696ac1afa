#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "wlayout/io.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code = -1;
  std::string out;
};

// Paths baked in at build time; the environment may override them.
std::string env(const char* name) {
  if (const char* v = std::getenv(name)) return v;
  const std::string key = name;
  if (key == "WLAYOUT_CLI") return WLAYOUT_CLI_PATH;
  if (key == "WLAYOUT_SAMPLES") return WLAYOUT_SAMPLES_PATH;
  return "";
}

Outcome run(const std::string& args) {
  const std::string cmd = "'" + env("WLAYOUT_CLI") + "' " + args + " 2>/dev/null";
  Outcome r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string sample(const std::string& name) { return "'" + env("WLAYOUT_SAMPLES") + "/" + name + "'"; }

fs::path scratch() {
  fs::path dir = fs::temp_directory_path() / ("wlayout_cli_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    if (env("WLAYOUT_CLI").empty() || env("WLAYOUT_SAMPLES").empty()) GTEST_SKIP() << "CLI paths not set";
  }
};

}  // namespace

TEST_F(Cli, SolveThenValidate) {
  const fs::path out = scratch() / "solve.json";
  EXPECT_EQ(run("solve --space " + sample("small_room.json") + " --alpha 0.5 --theta 0.3 --beam 2 --out '" +
                out.string() + "'")
                .code,
            0);
  const wlayout::Json j = wlayout::Json::parse(slurp(out));
  EXPECT_TRUE(j.at("validation").at("valid").get<bool>());
  EXPECT_EQ(run("validate --space " + sample("small_room.json") + " --layout '" + out.string() + "'").code, 0);
  const Outcome rendered = run("render --layout '" + out.string() + "'");
  EXPECT_EQ(rendered.code, 0);
  EXPECT_NE(rendered.out.find('D'), std::string::npos);
}

TEST_F(Cli, InvalidManualLayout) {
  const Outcome r = run("validate --space " + sample("small_room.json") + " --layout " + sample("small_room_manual.txt"));
  EXPECT_EQ(r.code, 1);
  EXPECT_FALSE(wlayout::Json::parse(r.out).at("valid").get<bool>());
}

TEST_F(Cli, InputErrors) {
  EXPECT_EQ(run("solve --space /nonexistent.json --alpha 0.5 --theta 0.1").code, 2);
  EXPECT_EQ(run("solve --space " + sample("small_room.json") + " --alpha 3 --theta 0.1").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  const fs::path bad = scratch() / "bad.txt";
  std::ofstream(bad) << "WW\nWW\n";
  EXPECT_EQ(run("validate --space " + sample("small_room.json") + " --layout '" + bad.string() + "'").code, 2);
}

TEST_F(Cli, SweepThenParetoIsByteIdentical) {
  const fs::path dir = scratch() / "sweep";
  fs::remove_all(dir);
  const Outcome sweep = run("sweep --space " + sample("small_room.json") + " --jobs 2 --out '" + dir.string() + "'");
  ASSERT_EQ(sweep.code, 0);
  EXPECT_NE(sweep.out.find("index\talpha"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "run_00.json"));
  EXPECT_TRUE(fs::exists(dir / "run_25.json"));

  const fs::path rebuilt = scratch() / "rebuilt.json";
  ASSERT_EQ(run("pareto --in '" + dir.string() + "' --out '" + rebuilt.string() + "'").code, 0);
  EXPECT_EQ(slurp(rebuilt), slurp(dir / "pareto.json"));

  const Outcome cmp = run("compare --manual " + sample("small_room_manual.txt") + " --pareto '" +
                      (dir / "pareto.json").string() + "'");
  EXPECT_EQ(cmp.code, 0);
  EXPECT_TRUE(wlayout::Json::parse(cmp.out).contains("status"));
}
