#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "nestex/cli.h"

using namespace nestex;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch() {
  const fs::path dir = fs::temp_directory_path() / "nestex_test_cli";
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

const std::vector<std::string> kTinyModel = {
    "--set", "embed_dim=6", "--set", "hidden_dim=8", "--set", "repr_dim=8",
    "--set", "hash_buckets=8", "--set", "window=1", "--set", "epochs=3"};

}  // namespace

TEST_CASE("synth is deterministic and eval of gold against itself is perfect") {
  const fs::path dir = scratch();
  const std::string a = (dir / "a.jsonl").string(), b = (dir / "b.jsonl").string();
  REQUIRE(run({"synth", "--seed", "7", "--n", "100", "--out", a}).code == 0);
  REQUIRE(run({"synth", "--seed", "7", "--n", "100", "--out", b}).code == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK_FALSE(slurp(a).empty());

  const Run eval = run({"eval", "--gold", a, "--pred", a, "--json"});
  CHECK(eval.code == 0);
  CHECK(eval.out.find(R"("f1":1.0)") != std::string::npos);
  CHECK(eval.out.find(R"("f1":0.)") == std::string::npos);

  const Run table = run({"eval", "--gold", a, "--pred", a});
  CHECK(table.code == 0);
  CHECK(table.out.find("100.00") != std::string::npos);
}

TEST_CASE("validate reports dangling ids") {
  const fs::path dir = scratch();
  const fs::path bad = dir / "bad.jsonl";
  std::ofstream(bad) << R"({"id":"s1","tokens":["He","wants"],"entities":[],)"
                        R"("triggers":[{"id":"t0","start":1,"end":2,"type":"Intention"}],)"
                        R"("arguments":[{"parent":"t0","child":"e7","role":"Agent"}]})"
                     << '\n';
  const Run r = run({"validate", "--input", bad.string()});
  CHECK(r.code == kExitValidation);
  CHECK(r.err.find("e7") != std::string::npos);
  CHECK(r.err.find("line 1") != std::string::npos);

  const fs::path good = dir / "good.jsonl";
  REQUIRE(run({"synth", "--n", "20", "--out", good.string()}).code == 0);
  const Run ok = run({"validate", "--input", good.string()});
  CHECK(ok.code == 0);
  CHECK(ok.out.rfind("ok: 20 sentences", 0) == 0);
}

TEST_CASE("usage errors") {
  CHECK(run({"frobnicate"}).code == kExitUsage);
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"synth", "--bogus"}).code == kExitUsage);
  CHECK(run({"--help"}).code == kExitOk);
  CHECK(run({"validate", "--input", "/nonexistent/x.jsonl"}).code == kExitUsage);
  CHECK(run({"train", "--train", "x", "--out", "y", "--set", "nope=1"}).code != 0);
}

TEST_CASE("train, predict, validate the predictions, evaluate") {
  const fs::path dir = scratch();
  const std::string train_path = (dir / "train.jsonl").string();
  const std::string test_path = (dir / "test.jsonl").string();
  REQUIRE(run({"synth", "--seed", "1", "--n", "30", "--out", train_path}).code == 0);
  REQUIRE(run({"synth", "--seed", "2", "--n", "10", "--out", test_path}).code == 0);

  auto train_to = [&](const std::string& name, std::vector<std::string> extra) {
    std::vector<std::string> args = {"train", "--train", train_path, "--dev", test_path,
                                     "--out", (dir / name).string(),
                                     "--log", (dir / (name + ".log")).string()};
    args.insert(args.end(), kTinyModel.begin(), kTinyModel.end());
    args.insert(args.end(), extra.begin(), extra.end());
    return run(args);
  };
  const Run trained = train_to("m1", {});
  REQUIRE(trained.code == 0);
  REQUIRE(train_to("m2", {}).code == 0);
  CHECK(slurp(dir / "m1") == slurp(dir / "m2"));
  const std::string log = slurp(dir / "m1.log");
  CHECK(log.rfind("epoch\tloss\tTI", 0) == 0);
  CHECK(std::count(log.begin(), log.end(), '\n') == 4);

  REQUIRE(train_to("m3", {"--set", "ablate_per=true"}).code == 0);
  CHECK(slurp(dir / "m3").find("pair.tt") == std::string::npos);
  CHECK(slurp(dir / "m1").find("pair.tt") != std::string::npos);

  const std::string p1 = (dir / "p1.jsonl").string(), p2 = (dir / "p2.jsonl").string();
  REQUIRE(run({"predict", "--model", (dir / "m1").string(), "--input", test_path, "--out", p1}).code == 0);
  REQUIRE(run({"predict", "--model", (dir / "m1").string(), "--input", test_path, "--out", p2,
               "--workers", "3"}).code == 0);
  CHECK(slurp(p1) == slurp(p2));
  CHECK(run({"validate", "--input", p1}).code == 0);
  CHECK(run({"eval", "--gold", test_path, "--pred", p1}).code == 0);
  CHECK(run({"eval", "--gold", train_path, "--pred", p1}).code != 0);
}

TEST_CASE("gradcheck subcommand passes on the tiny model") {
  const Run r = run({"gradcheck"});
  INFO(r.out);
  CHECK(r.code == 0);
  CHECK(r.out.find("0 failures") != std::string::npos);
}
