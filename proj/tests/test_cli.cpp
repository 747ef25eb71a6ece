#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"

#include "hessiana/classifier.hpp"
#include "hessiana/cli.hpp"
#include "hessiana/cubic_io.hpp"
#include "hessiana/registry.hpp"
#include "schema_check.hpp"

using namespace hessiana;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "hessiana");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("hessiana-cli-" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name, const std::string& contents) const {
    const auto p = path / name;
    std::ofstream(p) << contents;
    return p.string();
  }
};

const schema::Validator& validator() {
  static const schema::Validator v(schema::load(HESSIANA_SCHEMA_PATH));
  return v;
}

void require_valid(const nlohmann::json& report) {
  const auto errs = validator().errors(report);
  for (const auto& e : errs) MESSAGE(e);
  CHECK(errs.empty());
}

}  // namespace

TEST_CASE("exit code matrix") {
  TempDir tmp;
  const auto s1 = tmp.file("s1.cubic", serialize_cubic(named_form("severi:1").form));
  const auto zero = tmp.file("zero.cubic", "cubic n_vars=3 field=rational\n");
  const auto quad = tmp.file("quad.cubic", "cubic n_vars=3 field=rational\n1 1 1 : 1\n1 1 0 : 2\n");

  struct Scenario {
    std::vector<std::string> args;
    int expected;
  };
  const Scenario matrix[] = {
      {{"generate", "severi:1"}, kExitOk},
      {{"generate", "severi:9"}, kExitError},
      {{"analyze", "severi:1", "--no-timestamp"}, kExitOk},
      {{"analyze", s1, "--no-timestamp"}, kExitInconclusive},
      {{"analyze", zero, "--no-timestamp"}, kExitInconclusive},
      {{"analyze", (tmp.path / "missing.cubic").string()}, kExitError},
      {{"analyze", quad}, kExitError},
      {{"section", "severi:1", "--orbit", "O1"}, kExitOk},
      {{"section", "severi:1"}, kExitError},
      {{"prolong", "severi:1", "--dim-only"}, kExitOk},
      {{"prolong", "severi:1", "--dim-only", "--basis"}, kExitError},
      {{"profile", "severi:2"}, kExitOk},
  };
  for (const auto& s : matrix) {
    const auto r = cli(s.args);
    std::string joined;
    for (const auto& a : s.args) joined += a + " ";
    CHECK_MESSAGE(r.code == s.expected, joined, r.err);
    if (r.code == kExitError) CHECK_MESSAGE(r.err.find("error") != std::string::npos, joined);
  }
}

TEST_CASE("usage errors") {
  CHECK(cli({}).code == kExitError);
  CHECK(cli({"frobnicate"}).code == kExitError);
  CHECK(cli({"analyze", "severi:1", "--seed", "twelve"}).code == kExitError);
  CHECK(cli({"analyze", "severi:1", "--samples", "0"}).code == kExitError);
  CHECK(cli({"--help"}).code == kExitOk);
  CHECK(cli({"section", "fermat:4", "--orbit", "O2"}).code == kExitError);
  CHECK(cli({"section", "severi:1", "--orbit", "O4"}).code == kExitError);
  CHECK(cli({"prolong", "severi:4", "--basis", "--rational"}).code == kExitError);
  CHECK(cli({"section", "severi:1", "--covector", "0,0,0,0,0,0"}).code == kExitError);
  const auto bad = cli({"analyze", "bogus:1"});
  CHECK(bad.err.find("unknown registry name") != std::string::npos);
}

TEST_CASE("generate round trip") {
  const auto r = cli({"generate", "severi:1"});
  REQUIRE(r.code == kExitOk);
  const auto f = parse_cubic_string(r.out);
  CHECK(f == named_form("severi:1").form);
  CHECK(f.n_vars() == 6);
  const auto fp = parse_cubic_string(cli({"generate", "severi:2", "--field", "p:101"}).out);
  CHECK(fp == named_form("severi:2").form.reduced_mod(101));
  CHECK(cli({"generate", "severi:2", "--field", "p:100"}).code == kExitError);
}

TEST_CASE("file parse errors carry line numbers") {
  TempDir tmp;
  const auto quad = tmp.file("quad.cubic", "cubic n_vars=3 field=rational\n1 1 1 : 1\n1 1 0 : 2\n");
  const auto r = cli({"analyze", quad});
  CHECK(r.code == kExitError);
  CHECK(r.err.find("line 3") != std::string::npos);
}

TEST_CASE("analyze the O1 section") {
  const auto r = cli({"analyze", "severi:1:section:O1", "--no-timestamp"});
  REQUIRE(r.code == kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["polar_defect"]["value"] == 1);
  CHECK(j["form"]["n_vars"] == 5);
  CHECK(j["verdict"]["failed"] == nlohmann::json::array({"a"}));
  require_valid(j);
}

TEST_CASE("prolong dimension with a two-prime certificate") {
  const auto r = cli({"prolong", "--dim-only", "severi:4", "--primes", "2"});
  REQUIRE(r.code == kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["aut1_dim"] == 27);
  CHECK(j["primes"].size() == 2);
  CHECK(j["dims"] == nlohmann::json::array({27, 27}));
  CHECK(j["agree"] == true);

  const auto b = cli({"prolong", "--basis", "severi:1", "--rational"});
  REQUIRE(b.code == kExitOk);
  CHECK(b.out.rfind("prolongation n_vars=6 field=rational count=6", 0) == 0);
}

TEST_CASE("reports are reproducible") {
  const auto a = cli({"analyze", "severi:2", "--no-timestamp"});
  const auto b = cli({"analyze", "severi:2", "--no-timestamp"});
  CHECK(a.out == b.out);
  const auto c = cli({"analyze", "severi:2"});
  const auto ja = nlohmann::json::parse(a.out), jc = nlohmann::json::parse(c.out);
  CHECK(ja["generated_at"] == "");
  CHECK(jc["generated_at"] != "");
  // the hash covers the invocation but not the timestamp
  auto moved = jc;
  moved["generated_at"] = "1999-01-01T00:00:00Z";
  CHECK(content_hash(moved) == jc["content_hash"].get<std::string>());
  moved["invocation"] = ja["invocation"];
  moved["generated_at"] = "";
  CHECK(content_hash(moved) == ja["content_hash"].get<std::string>());
  moved["content_hash"] = ja["content_hash"];
  CHECK(moved.dump() == ja.dump());
  CHECK(ja["invocation"] == "hessiana analyze severi:2 --no-timestamp");
  CHECK(ja["config"]["seed"] == kDefaultSeed);

  const auto s1 = nlohmann::json::parse(cli({"analyze", "severi:2", "--seed", "7", "--no-timestamp"}).out);
  CHECK(s1["config"]["seed"] == 7);
  CHECK(s1["content_hash"] != ja["content_hash"]);
  const auto rnd = cli({"analyze", "severi:1", "--seed", "random", "--no-timestamp"});
  CHECK(rnd.code == kExitOk);
  CHECK(nlohmann::json::parse(rnd.out)["invocation"].get<std::string>().find("(seed ") != std::string::npos);
}

TEST_CASE("reports validate against the schema") {
  TempDir tmp;
  const auto s1 = tmp.file("s1.cubic", serialize_cubic(named_form("severi:1").form));
  const auto zero = tmp.file("zero.cubic", "cubic n_vars=3 field=rational\n");
  std::vector<std::vector<std::string>> runs;
  for (const auto& name : registry_examples()) runs.push_back({"analyze", name});
  runs.push_back({"analyze", s1});
  runs.push_back({"analyze", zero});
  for (const auto& args : runs) {
    const auto r = cli(args);
    require_valid(nlohmann::json::parse(r.out));
  }
  auto j = nlohmann::json::parse(cli({"analyze", "fermat:3"}).out);
  j["verdict"]["kind"] = "maybe";
  j.erase("content_hash");
  j["extra"] = 1;
  CHECK(validator().errors(j).size() == 3);
}

TEST_CASE("output files") {
  TempDir tmp;
  const auto path = (tmp.path / "nested" / "report.json").string();
  fs::create_directories(tmp.path / "nested");
  const auto r = cli({"analyze", "severi:1", "-o", path, "--no-timestamp"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.empty());
  std::ifstream in(path);
  const auto j = nlohmann::json::parse(in);
  CHECK(j["verdict"]["kind"] == "severi_secant");
  for (const auto& e : fs::directory_iterator(tmp.path / "nested"))
    CHECK(e.path().filename() == "report.json");

  const auto cubic = (tmp.path / "section.cubic").string();
  CHECK(cli({"section", "severi:2", "--orbit", "O3", "-o", cubic}).code == kExitOk);
  const auto sec = read_cubic_file(cubic);
  CHECK(sec == named_form("severi:2:section:O3").form);
  CHECK(cli({"section", "severi:2", "--random", "--seed", "3"}).out ==
        cli({"section", "severi:2", "--random", "--seed", "3"}).out);

  const auto prof = nlohmann::json::parse(cli({"profile", "severi:1"}).out);
  CHECK(prof["generic"] == 0);
  CHECK(prof["on_hypersurface"] == 2);
  CHECK(prof["on_singular_locus"] == 3);
}
