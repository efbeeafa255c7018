// End-to-end tests of the command-line binary; exercises exit codes and the
// bundled fixtures. Paths are injected by the build.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

const std::string cli = CLI_PATH;
const fs::path fixtures = FIXTURES_DIR;

fs::path work_dir() {
  const auto dir = fs::temp_directory_path() / "roomrec_cli_tests";
  fs::create_directories(dir);
  return dir;
}

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

RunResult run(const std::string& args) {
  const fs::path log = work_dir() / "run.log";
  const std::string cmd = cli + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(log);
  std::stringstream ss;
  ss << in.rdbuf();
  r.output = ss.str();
  return r;
}

std::string fixture(const std::string& name) { return (fixtures / name).string(); }

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("usage errors exit with code 2") {
  CHECK(run("").exit_code == 2);                          // no subcommand
  CHECK(run("frobnicate").exit_code == 2);                // unknown subcommand
  CHECK(run("train").exit_code == 2);                     // missing required option
  CHECK(run("corpus stats").exit_code == 2);              // missing positional
  CHECK(run("predict --model x.json").exit_code == 2);    // missing --objects
}

TEST_CASE("missing input files exit with code 1") {
  const RunResult r = run("corpus stats /nonexistent/corpus.json");
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("error") != std::string::npos);
  CHECK(run("train --corpus /nonexistent.json --out /tmp/m.json").exit_code == 1);
  CHECK(run("report /nonexistent/selection.json").exit_code == 1);
}

TEST_CASE("corpus stats prints the vocabulary and prior table") {
  const RunResult r = run("corpus stats " + fixture("corpus.json"));
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("categories (V): 30") != std::string::npos);
  CHECK(r.output.find("room types (U): 4") != std::string::npos);
  CHECK(r.output.find("type0") != std::string::npos);
}

TEST_CASE("train then predict round-trips through model.json") {
  const fs::path model = work_dir() / "model.json";
  const RunResult train = run("train --corpus " + fixture("corpus.json") + " --out " +
                              model.string() + " --iters 100 --seed 5");
  CHECK(train.exit_code == 0);
  REQUIRE(fs::exists(model));

  // Deterministic: retraining with the same seed writes identical bytes.
  const std::string first = slurp(model);
  CHECK(run("train --corpus " + fixture("corpus.json") + " --out " + model.string() +
            " --iters 100 --seed 5")
            .exit_code == 0);
  CHECK(slurp(model) == first);

  const RunResult predict =
      run("predict --model " + model.string() + " --objects cat020,cat021,cat022");
  CHECK(predict.exit_code == 0);
  CHECK(predict.output.find("predicted:") != std::string::npos);

  // Unknown tokens are reported, not fatal.
  const RunResult partial =
      run("predict --model " + model.string() + " --objects cat020,unobtainium");
  CHECK(partial.exit_code == 0);
  CHECK(partial.output.find("1 unknown") != std::string::npos);

  // All-unknown input is a runtime failure.
  CHECK(run("predict --model " + model.string() + " --objects unobtainium").exit_code == 1);
}

TEST_CASE("palette extract and diff") {
  const fs::path pal = work_dir() / "style_palette.json";
  CHECK(run("palette extract " + fixture("style.png") + " --out " + pal.string()).exit_code ==
        0);
  REQUIRE(fs::exists(pal));
  const RunResult self = run("palette diff " + pal.string() + " " + pal.string());
  CHECK(self.exit_code == 0);
  CHECK(self.output.find("0.000000") != std::string::npos);
  CHECK(run("palette extract /nonexistent.png").exit_code == 1);
}

TEST_CASE("templates build follows the file naming convention") {
  const fs::path dir = work_dir() / "template_images";
  fs::create_directories(dir);
  fs::copy_file(fixture("style.png"), dir / "houseX__type0.png",
                fs::copy_options::overwrite_existing);
  fs::copy_file(fixture("style.png"), dir / "houseX__type1.png",
                fs::copy_options::overwrite_existing);
  const fs::path out = work_dir() / "templates.json";
  const RunResult r = run("templates build " + dir.string() + " --out " + out.string());
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("2 templates") != std::string::npos);

  // A stray file without the <house>__<type> separator is a usage error.
  fs::copy_file(fixture("style.png"), dir / "noseparator.png",
                fs::copy_options::overwrite_existing);
  CHECK(run("templates build " + dir.string() + " --out " + out.string()).exit_code == 2);
  fs::remove(dir / "noseparator.png");
}

TEST_CASE("pipeline runs from the bundled config and is reproducible") {
  const fs::path out1 = work_dir() / "pipe_run1";
  const fs::path out2 = work_dir() / "pipe_run2";
  fs::remove_all(out1);
  fs::remove_all(out2);
  const std::string base = "pipeline --config " + fixture("pipeline.json");
  // Config paths are relative to the fixtures directory.
  const std::string cd = "cd " + fixtures.string() + " && ";
  auto run_in = [&](const std::string& args) {
    const fs::path log = work_dir() / "pipe.log";
    const int status =
        std::system((cd + cli + " " + args + " > " + log.string() + " 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  };
  REQUIRE(run_in(base + " --out-dir " + out1.string()) == 0);
  REQUIRE(run_in(base + " --out-dir " + out2.string()) == 0);
  for (const char* name : {"model.json", "lists.json", "selection.json", "report.json"}) {
    CHECK(fs::exists(out1 / name));
    CHECK(slurp(out1 / name) == slurp(out2 / name));
  }
  // No stale .partial files survive a successful run.
  for (const auto& entry : fs::directory_iterator(out1)) {
    CHECK(entry.path().extension() != ".partial");
  }

  const fs::path report = work_dir() / "report.html";
  CHECK(run("report " + (out1 / "selection.json").string() + " --out " + report.string())
            .exit_code == 0);
  CHECK(slurp(report).find("<html>") != std::string::npos);
}

TEST_CASE("pipeline config with a missing required path names the field") {
  const fs::path bad = work_dir() / "bad_config.json";
  std::ofstream(bad) << R"({"schema_version":1,"corpus":"corpus.json",)"
                     << R"("knowledge":"knowledge.json"})";
  const RunResult r = run("pipeline --config " + bad.string());
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("catalog") != std::string::npos);
}
