#include "doctest.h"

#include "hessiana/classifier.hpp"
#include "hessiana/registry.hpp"

using namespace hessiana;

namespace {

std::vector<std::vector<mpq_class>> random_invertible(Rng& rng, std::size_t n) {
  std::vector<std::vector<mpq_class>> cols(n, std::vector<mpq_class>(n, 0));
  for (std::size_t c = 0; c < n; ++c) {
    cols[c][c] = static_cast<long>(rng.below(2) ? 1 : -1);
    for (std::size_t r = 0; r < c; ++r) cols[c][r] = static_cast<long>(rng.uniform_int(-3, 3));
  }
  // mix lower rows too: add a multiple of column 0 into every other column
  const long m = static_cast<long>(rng.uniform_int(-2, 2));
  for (std::size_t c = 1; c < n; ++c)
    for (std::size_t r = 0; r < n; ++r) cols[c][r] += m * cols[0][r];
  const std::size_t a = rng.below(n), b = rng.below(n);
  for (auto& col : cols) std::swap(col[a], col[b]);
  return cols;
}

AnalysisReport run(const std::string& name) { return analyze(named_form(name), AnalysisConfig{}); }

bool has_reason(const Verdict& v, const std::string& prefix) {
  for (const auto& r : v.reasons)
    if (r.rfind(prefix, 0) == 0) return true;
  return false;
}

}  // namespace

TEST_CASE("registry verdicts") {
  for (int i = 1; i <= 4; ++i) {
    const auto r = run("severi:" + std::to_string(i));
    CHECK(r.errors.empty());
    CHECK(r.verdict.kind == Verdict::Kind::severi_secant);
    CHECK(r.verdict.index == i);
    CHECK(r.verdict.failed.empty());
    CHECK(r.verdict.reasons.empty());
    CHECK(r.signature_match() == i);
    CHECK(r.secant->pass);
  }
  const std::pair<const char*, std::vector<std::string>> gallery[] = {
      {"severi:1:section:O1", {"a"}}, {"severi:1:section:O2", {"b"}}, {"severi:1:section:O3", {"c"}},
      {"severi:2:section:O1", {"a"}}, {"severi:2:section:O2", {"b"}}, {"severi:2:section:O3", {"c"}},
      {"fermat:3", {"c"}},            {"fermat:4", {"c"}},            {"gordan-noether", {"a"}},
  };
  for (const auto& [name, failed] : gallery) {
    const auto r = run(name);
    CHECK_MESSAGE(r.verdict.kind == Verdict::Kind::conditions_fail, name);
    CHECK_MESSAGE(r.verdict.failed == failed, name);
  }
  // smooth by construction: condition b holds without witnesses
  const auto fermat = run("fermat:4");
  CHECK(fermat.condition_b() == ConditionStatus::pass);
  CHECK(fermat.secant->vacuous);
}

TEST_CASE("verdicts are stable under coordinate change") {
  Rng rng(404);
  for (const auto& name : {"severi:1", "severi:1:section:O1", "severi:1:section:O2", "severi:1:section:O3",
                           "severi:2"}) {
    const auto base = named_form(name);
    const auto ref = analyze(base, AnalysisConfig{});
    for (int t = 0; t < 10; ++t) {
      const auto moved = transform_named(base, random_invertible(rng, base.form.n_vars()), std::string(name) + "'");
      AnalysisConfig cfg;
      cfg.seed = 1000 + t;
      const auto r = analyze(moved, cfg);
      CHECK_MESSAGE(r.errors.empty(), name);
      CHECK_MESSAGE(r.verdict.kind == ref.verdict.kind, name);
      CHECK_MESSAGE(r.verdict.index == ref.verdict.index, name);
      CHECK_MESSAGE(r.verdict.failed == ref.verdict.failed, name);
    }
  }
}

TEST_CASE("synthetic reports") {
  const auto base = run("severi:1");
  REQUIRE(base.verdict.kind == Verdict::Kind::severi_secant);

  SUBCASE("reducible forms get no positive verdict") {
    auto r = base;
    r.irreducibility->verdict = Irreducibility::reducible;
    const auto v = severi_verdict(r);
    CHECK(v.kind == Verdict::Kind::conditions_fail);
    CHECK(v.failed == std::vector<std::string>{"irreducible"});
  }
  SUBCASE("unverified irreducibility qualifies the verdict") {
    auto r = base;
    r.irreducibility->verdict = Irreducibility::unverified;
    const auto v = severi_verdict(r);
    CHECK(v.kind == Verdict::Kind::severi_secant);
    CHECK(has_reason(v, "irreducibility-dependent:"));
  }
  SUBCASE("missing witnesses") {
    auto nf = named_form("severi:1");
    nf.witnesses = nullptr;
    const auto r = analyze(nf, AnalysisConfig{});
    CHECK(r.condition_b() == ConditionStatus::unknown);
    CHECK(r.verdict.kind == Verdict::Kind::inconclusive);
    CHECK(has_reason(r.verdict, "no singular witnesses supplied"));
  }
  SUBCASE("conditions without a signature") {
    auto r = base;
    r.def->value = 1;
    const auto v = severi_verdict(r);
    CHECK(v.kind == Verdict::Kind::inconclusive);
    CHECK(has_reason(v, "theorem-tension:"));
  }
  SUBCASE("step errors") {
    auto r = base;
    r.errors.push_back("aut1: out of memory");
    const auto v = severi_verdict(r);
    CHECK(v.kind == Verdict::Kind::inconclusive);
    CHECK(has_reason(v, "step failed: aut1"));
  }
  SUBCASE("disagreeing primes") {
    auto r = base;
    r.aut1->agree = false;
    CHECK(severi_verdict(r).kind == Verdict::Kind::inconclusive);
  }
  SUBCASE("a failed condition wins over missing data") {
    auto r = base;
    r.pdef->value = 1;
    r.aut1.reset();
    const auto v = severi_verdict(r);
    CHECK(v.kind == Verdict::Kind::conditions_fail);
    CHECK(v.failed == std::vector<std::string>{"a"});
  }
  SUBCASE("zero form") {
    const auto r = analyze(NamedForm{"zero", CubicForm(3, FieldSpec::rational(), {}), {}, false, {}, {}},
                           AnalysisConfig{});
    CHECK_FALSE(r.errors.empty());
    CHECK(r.verdict.kind == Verdict::Kind::inconclusive);
  }
}

TEST_CASE("prolongations force dual defect") {
  for (const auto& name : registry_examples()) {
    const auto r = run(name);
    REQUIRE(r.aut1);
    REQUIRE(r.def);
    if (r.aut1->value > 0) CHECK_MESSAGE(r.def->value > 0, name);
    CHECK_MESSAGE(r.def->value >= r.pdef->value, name);
    CHECK_MESSAGE(r.profile->monotone(), name);
  }
}

TEST_CASE("report json") {
  const auto r = run("severi:2");
  const auto a = report_json(r, "2026-01-01T00:00:00Z");
  const auto b = report_json(r, "2030-06-30T12:00:00Z");
  CHECK(a["generated_at"] != b["generated_at"]);
  CHECK(a["content_hash"] == b["content_hash"]);
  CHECK(content_hash(a) == a["content_hash"].get<std::string>());
  CHECK(a["verdict"]["kind"] == "severi_secant");
  CHECK(a["verdict"]["index"] == 2);
  auto tampered = a;
  tampered["verdict"]["index"] = 3;
  CHECK(content_hash(tampered) != a["content_hash"].get<std::string>());
  CHECK(report_json(run("severi:2")).dump() == report_json(r).dump());
  CHECK(report_json(run("fermat:4"))["verdict"]["index"].is_null());
}

TEST_CASE("config primes") {
  AnalysisConfig cfg;
  CHECK(cfg.primes() == std::vector<std::uint64_t>{kDefaultPrime, kSecondPrime});
  cfg.prime_count = 0;
  CHECK_THROWS_AS(cfg.primes(), ContractError);
  CHECK(to_string(Verdict::Kind::conditions_fail) == "conditions_fail");
  CHECK(to_string(ConditionStatus::unknown) == "unknown");
}
