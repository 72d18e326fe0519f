#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <string>
#include <sys/wait.h>

#include "plainscore/io.hpp"

using namespace plainscore;
namespace fs = std::filesystem;

namespace {

const std::string kData = PLAINSCORE_TEST_DATA;

struct Run {
  int code;
  std::string out;
};

fs::path work_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "plainscore_test_cli" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

Run run(const std::string& args, const std::string& env = "") {
  const auto out_file = fs::temp_directory_path() / "plainscore_test_cli" / "stdout.txt";
  fs::create_directories(out_file.parent_path());
  const std::string cmd = env + " \"" + std::string(PLAINSCORE_CLI) + "\" " + args + " > \"" + out_file.string() +
                          "\" 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, io::read_file(out_file)};
}

io::Json report(const fs::path& p) { return io::read_json(p); }

}  // namespace

TEST_CASE("build-corpus reproduces the golden files") {
  const auto a = work_dir("corpus_a");
  const auto b = work_dir("corpus_b");
  const std::string input = kData + "/reviews.jsonl";
  const auto before = io::read_file(input);
  REQUIRE(run("build-corpus --input " + input + " --out-dir " + a.string()).code == 0);
  REQUIRE(run("--seed 0 build-corpus --input " + input + " --out-dir " + b.string()).code == 0);
  CHECK(io::read_file(a / "pairs.jsonl") == io::read_file(kData + "/golden/pairs.jsonl"));
  CHECK(io::read_file(a / "rejects.jsonl") == io::read_file(kData + "/golden/rejects.jsonl"));
  CHECK(io::read_file(a / "split.json") == io::read_file(b / "split.json"));
  CHECK(io::read_file(input) == before);
  CHECK(report(a / "build-corpus.manifest.json")["config"]["cap"] == 1024);
}

TEST_CASE("ul-check prints the worked example") {
  const auto r = run("ul-check --distributions " + kData + "/ul_distributions.json --penalties " + kData +
                     "/ul_penalty.json --alpha 100");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("UL=0.4159") != std::string::npos);
  CHECK(r.out.find("total=42.639") != std::string::npos);
  CHECK(r.out.find("NLL=1.0498") != std::string::npos);
}

TEST_CASE("evaluate with candidate equal to reference") {
  const auto dir = work_dir("evaluate");
  REQUIRE(run("evaluate --input " + kData + "/eval_identity.jsonl --out-dir " + dir.string()).code == 0);
  const auto j = report(dir / "report.json");
  REQUIRE(j["documents"].size() == 3);
  for (const auto& d : j["documents"]) {
    CHECK(d["rouge1"] == 1.0);
    CHECK(d["rouge2"] == 1.0);
    CHECK(d["rougeL"] == 1.0);
    CHECK(d["bleu"] == 1.0);
  }
  CHECK(j["corpus_mean"]["bleu"]["mean"] == 1.0);
  CHECK(j["candidate_minus_reference"]["n_tokens"]["mean_diff"] == 0.0);
}

TEST_CASE("end-to-end run is byte-reproducible") {
  const std::string input = kData + "/reviews.jsonl";
  std::string outputs[2];
  for (int k = 0; k < 2; ++k) {
    const auto dir = work_dir("e2e");
    const std::string o = " --out-dir " + dir.string();
    REQUIRE(run("build-corpus --input " + input + o).code == 0);
    const std::string pairs = (dir / "pairs.jsonl").string();
    REQUIRE(run("readability --input " + pairs + o).code == 0);
    REQUIRE(run("--seed 3 mlm-score --backend unigram --input " + pairs + o).code == 0);
    REQUIRE(run("train-discriminator --input " + pairs + " --newsela " + kData + "/levels.jsonl" + o).code == 0);
    REQUIRE(run("ul-weights --model " + (dir / "model_cochrane.json").string() + " --model " +
                (dir / "model_newsela.json").string() + o)
                .code == 0);
    const auto roc = run("roc --input " + (dir / "scores.jsonl").string() + " --input " +
                         (dir / "readability.jsonl").string() + " --field mean_prob --field fk" + o);
    REQUIRE(roc.code == 0);
    CHECK(roc.out.find("AUC=") != std::string::npos);
    for (const char* f : {"scores.jsonl", "readability.jsonl", "model_cochrane.json", "penalty.json", "roc.json",
                          "roc_scores_mean_prob.csv", "discriminator.json"}) {
      outputs[k] += io::read_file(dir / f);
    }
    const auto penalty = report(dir / "penalty.json");
    CHECK(penalty["source"] == "both");
    CHECK(penalty["entries"].size() > 0);
  }
  CHECK(outputs[0] == outputs[1]);
}

TEST_CASE("config file, flags and environment") {
  const auto dir = work_dir("config");
  io::write_file_atomic(dir / "run.json", R"({"temperature": 4.0, "alpha": 3.0})");
  const std::string model = (dir / "model.json").string();
  io::write_file_atomic(model, R"({"vocab":"v","bias":0.0,"weights":[[0,-2.0],[1,-1.0],[2,3.0]],"meta":{"dim":3}})");

  REQUIRE(run("--config " + (dir / "run.json").string() + " ul-weights --model " + model + " --out-dir " +
              dir.string())
              .code == 0);
  CHECK(report(dir / "penalty.json")["temperature"] == 4.0);
  REQUIRE(run("--config " + (dir / "run.json").string() + " --temperature 1 ul-weights --model " + model +
              " --out-dir " + dir.string())
              .code == 0);
  const auto p = report(dir / "penalty.json");
  CHECK(p["temperature"] == 1.0);
  CHECK(p["config"]["alpha"] == 3.0);
  CHECK(std::abs(p["entries"][0][1].get<double>() - 0.7311) <= 1e-4);

  const std::string pairs = kData + "/golden/pairs.jsonl";
  CHECK(run("mlm-score --input " + pairs + " --out-dir " + dir.string(), "PLAINSCORE_SCORER_URL=http://127.0.0.1:9")
            .code == 4);
  CHECK(run("mlm-score --input " + pairs + " --out-dir " + dir.string(), "env -u PLAINSCORE_SCORER_URL").code == 3);
}

TEST_CASE("exit codes") {
  const auto dir = work_dir("codes");
  const std::string o = " --out-dir " + dir.string();
  CHECK(run("").code == 1);
  CHECK(run("build-corpus").code == 1);
  CHECK(run("evaluate --input " + kData + "/eval_identity.jsonl --bogus-flag").code == 1);
  CHECK(run("readability --input " + (dir / "missing.jsonl").string() + o).code == 2);

  io::write_file_atomic(dir / "bad.json", R"({"ratio_low": 2.0})");
  CHECK(run("--config " + (dir / "bad.json").string() + " build-corpus --input " + kData + "/reviews.jsonl" + o)
            .code == 3);
  io::write_file_atomic(dir / "unknown.json", R"({"temprature": 2.0})");
  CHECK(run("--config " + (dir / "unknown.json").string() + " build-corpus --input " + kData + "/reviews.jsonl" + o)
            .code == 3);
  CHECK(run("--top-p 0 ul-check --distributions " + kData + "/ul_distributions.json --penalties " + kData +
            "/ul_penalty.json")
            .code == 3);
  io::write_file_atomic(dir / "broken.jsonl", "{\"id\": \"x\"\n");
  CHECK(run("evaluate --input " + (dir / "broken.jsonl").string() + o).code == 3);
  CHECK(run("mlm-score --input " + kData + "/golden/pairs.jsonl --scorer-url http://127.0.0.1:9" + o).code == 4);
}
