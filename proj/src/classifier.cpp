#include "hessiana/classifier.hpp"

#include <future>

#include "hessiana/jordan.hpp"

namespace hessiana {

using nlohmann::json;

std::vector<std::uint64_t> AnalysisConfig::primes() const {
  if (prime_count == 0) throw ContractError("at least one prime is required");
  std::vector<std::uint64_t> out{prime};
  while (out.size() < prime_count) out.push_back(next_prime(out.back() + 1));
  return out;
}

std::string to_string(Verdict::Kind k) {
  switch (k) {
    case Verdict::Kind::severi_secant: return "severi_secant";
    case Verdict::Kind::conditions_fail: return "conditions_fail";
    case Verdict::Kind::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

std::string to_string(ConditionStatus s) {
  switch (s) {
    case ConditionStatus::pass: return "pass";
    case ConditionStatus::fail: return "fail";
    case ConditionStatus::unknown: return "unknown";
  }
  return "unknown";
}

ConditionStatus AnalysisReport::condition_a() const {
  if (!pdef) return ConditionStatus::unknown;
  return pdef->value == 0 ? ConditionStatus::pass : ConditionStatus::fail;
}

ConditionStatus AnalysisReport::condition_b() const {
  if (singular_locus_empty) return ConditionStatus::pass;
  if (!smoothness || smoothness->witness_count == 0) return ConditionStatus::unknown;
  return smoothness->smooth ? ConditionStatus::pass : ConditionStatus::fail;
}

ConditionStatus AnalysisReport::condition_c() const {
  if (!aut1) return ConditionStatus::unknown;
  return aut1->value > 0 ? ConditionStatus::pass : ConditionStatus::fail;
}

std::optional<int> AnalysisReport::signature_match() const {
  if (!def || !aut1) return std::nullopt;
  for (int i = 1; i <= 4; ++i) {
    const SeveriIndex idx(i);
    if (n_vars == idx.N() + 1 && def->value == idx.n() / 2 + 1 && aut1->value == idx.N() + 1) return i;
  }
  return std::nullopt;
}

Verdict severi_verdict(const AnalysisReport& r) {
  Verdict v;
  for (const auto& e : r.errors) v.reasons.push_back("step failed: " + e);
  if (r.irreducibility && r.irreducibility->verdict == Irreducibility::reducible) v.failed.push_back("irreducible");
  const ConditionStatus a = r.condition_a(), b = r.condition_b(), c = r.condition_c();
  if (a == ConditionStatus::fail) v.failed.push_back("a");
  if (b == ConditionStatus::fail) v.failed.push_back("b");
  if (c == ConditionStatus::fail) v.failed.push_back("c");
  if (b == ConditionStatus::unknown) v.reasons.push_back("no singular witnesses supplied");
  if (a == ConditionStatus::unknown) v.reasons.push_back("polar defect not computed");
  if (c == ConditionStatus::unknown) v.reasons.push_back("prolongation dimension not computed");
  if (r.aut1 && !r.aut1->agree) v.reasons.push_back("prolongation dimension differs across primes");
  if (!v.failed.empty()) {
    v.kind = Verdict::Kind::conditions_fail;
    return v;
  }
  if (!v.reasons.empty()) {
    v.kind = Verdict::Kind::inconclusive;
    return v;
  }
  if (auto i = r.signature_match()) {
    v.kind = Verdict::Kind::severi_secant;
    v.index = *i;
    if (r.irreducibility && r.irreducibility->verdict == Irreducibility::unverified)
      v.reasons.push_back("irreducibility-dependent: irreducibility was not verified");
    return v;
  }
  v.kind = Verdict::Kind::inconclusive;
  v.reasons.push_back("theorem-tension: conditions a), b), c) hold without a signature match; report for review");
  return v;
}

namespace {

template <class Fn>
void step(AnalysisReport& r, const char* name, Fn&& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    r.errors.push_back(std::string(name) + ": " + e.what());
  }
}

}  // namespace

AnalysisReport analyze(const NamedForm& form, const AnalysisConfig& cfg) {
  const auto& f = form.form;
  AnalysisReport r;
  r.form_id = form.name;
  r.form_hash = f.hash_hex();
  r.n_vars = f.n_vars();
  r.field = f.field().to_string();
  r.config = cfg;
  r.singular_locus_empty = form.singular_locus_empty;
  if (f.is_zero()) {
    r.errors.push_back("input: the zero polynomial does not define a hypersurface");
    r.verdict = severi_verdict(r);
    return r;
  }
  const Rng root(cfg.seed);
  std::vector<std::uint64_t> primes;
  step(r, "primes", [&] { primes = cfg.primes(); });
  if (f.field().is_prime()) primes = {f.field().prime};
  const std::uint64_t p = primes.empty() ? cfg.prime : primes.front();

  // The symmetry systems are independent of the sampling work.
  auto symmetry = std::async(std::launch::async, [&] {
    std::optional<DimensionCertificate> aut, aut1;
    std::string err;
    try {
      if (!primes.empty()) {
        aut = aut_dim(f, primes);
        aut1 = aut1_dim(f, primes);
      }
    } catch (const std::exception& e) {
      err = e.what();
    }
    return std::make_tuple(aut, aut1, err);
  });

  step(r, "irreducibility", [&] { r.irreducibility = irreducible_heuristic(f, p, root.fork(1).seed()); });
  step(r, "polar_defect", [&] { r.pdef = polar_defect(f, p, root.fork(2).seed(), cfg.samples); });
  step(r, "dual_defect", [&] { r.def = dual_defect(f, p, root.fork(3).seed(), cfg.samples); });

  WitnessSet witnesses;
  if (form.witnesses) {
    r.witness_seed = root.fork(4).seed();
    step(r, "witnesses", [&] {
      witnesses = form.witnesses(p, cfg.witness_count, r.witness_seed);
      r.witnesses_available = !witnesses.points.empty();
      r.witness_source = witnesses.source;
      r.witness_prime = witnesses.prime;
    });
  }
  if (r.witnesses_available) {
    step(r, "smoothness", [&] { r.smoothness = smooth_witness(f, witnesses); });
  }
  step(r, "secant", [&] { r.secant = secant_check(f, witnesses, cfg.secant_trials, root.fork(5).seed()); });
  if (r.pdef && r.def) {
    CorankProfile prof;
    prof.prime = p;
    prof.generic_corank = r.pdef->value;
    prof.on_Y_corank = r.def->value;
    prof.generic_samples = r.pdef->samples;
    prof.on_Y_samples = r.def->samples;
    if (r.witnesses_available) {
      const PrimeField W(witnesses.prime);
      const FieldCubic<PrimeField> fc(f, W);
      std::size_t best = f.n_vars();
      for (const auto& v : witnesses.points)
        best = std::min(best, f.n_vars() - fc.hessian_rank(std::span<const std::uint64_t>(v)));
      prof.on_singular_corank = best;
      prof.witness_prime = witnesses.prime;
      prof.witness_samples = witnesses.points.size();
    }
    r.profile = prof;
  }

  auto [aut, aut1, err] = symmetry.get();
  r.aut = aut;
  r.aut1 = aut1;
  if (!err.empty()) r.errors.push_back("symmetry: " + err);
  r.verdict = severi_verdict(r);
  return r;
}

namespace {

json defect_json(const DefectEstimate& d, const std::string& label) {
  return {{"value", d.value},     {"prime", d.prime},       {"seed", d.seed},  {"samples", d.samples},
          {"coranks", d.coranks}, {"error_bound", d.error_bound}, {"label", label}};
}

json certificate_json(const DimensionCertificate& c) {
  return {{"value", c.value}, {"primes", c.primes}, {"dims", c.dims}, {"agree", c.agree}, {"route", c.route}};
}

template <class T, class Fn>
json optional_json(const std::optional<T>& v, Fn&& fn) {
  return v ? fn(*v) : json(nullptr);
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

json profile_json(const CorankProfile& p) {
  return {{"generic", p.generic_corank},
          {"on_hypersurface", p.on_Y_corank},
          {"on_singular_locus", p.on_singular_corank ? json(*p.on_singular_corank) : json(nullptr)},
          {"monotone", p.monotone()},
          {"prime", p.prime},
          {"witness_prime", p.witness_prime},
          {"generic_samples", p.generic_samples},
          {"on_hypersurface_samples", p.on_Y_samples},
          {"witness_samples", p.witness_samples}};
}

std::string content_hash(const json& report) {
  json copy = report;
  copy.erase("generated_at");
  copy.erase("content_hash");
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(copy.dump())));
  return buf;
}

json report_json(const AnalysisReport& r, const std::string& timestamp) {
  json j;
  j["schema"] = 1;
  j["tool"] = {{"name", "hessiana"}, {"version", HESSIANA_VERSION}};
  j["invocation"] = r.config.invocation;
  j["generated_at"] = timestamp;
  j["form"] = {{"id", r.form_id}, {"hash", r.form_hash}, {"n_vars", r.n_vars}, {"field", r.field}};
  std::vector<std::uint64_t> primes;
  try {
    primes = r.config.primes();
  } catch (const std::exception&) {
  }
  j["config"] = {{"prime", r.config.prime},
                 {"primes", primes},
                 {"seed", r.config.seed},
                 {"samples", r.config.samples},
                 {"witness_count", r.config.witness_count},
                 {"secant_trials", r.config.secant_trials}};
  j["irreducibility"] = optional_json(r.irreducibility, [](const IrreducibilityResult& v) {
    return json{{"verdict", to_string(v.verdict)},
                {"witness", v.witness},
                {"planes_tried", v.planes_tried},
                {"prime", v.prime},
                {"seed", v.seed}};
  });
  j["polar_defect"] = optional_json(r.pdef, [](const DefectEstimate& d) {
    return defect_json(d, "minimum Hessian corank at random points");
  });
  j["dual_defect"] = optional_json(r.def, [](const DefectEstimate& d) {
    return defect_json(d, "generic Gauss-fiber dimension: minimum Hessian corank at sampled smooth points");
  });
  j["corank_profile"] = optional_json(r.profile, [](const CorankProfile& p) { return profile_json(p); });
  j["aut_dim"] = optional_json(r.aut, certificate_json);
  j["aut1_dim"] = optional_json(r.aut1, certificate_json);
  j["witnesses"] = {{"available", r.witnesses_available},
                    {"singular_locus_empty", r.singular_locus_empty},
                    {"source", r.witness_source},
                    {"prime", r.witness_prime},
                    {"seed", r.witness_seed},
                    {"count", r.smoothness ? r.smoothness->witness_count : 0}};
  {
    json s;
    if (r.singular_locus_empty) {
      s["status"] = "singular locus empty";
    } else if (!r.smoothness) {
      s["status"] = "not evaluated";
    } else {
      s["status"] = r.smoothness->smooth ? "smooth at witnesses" : "not smooth at witnesses";
      s["codimension"] = r.smoothness->codimension;
      s["ranks"] = r.smoothness->ranks;
      s["offending"] = r.smoothness->offending;
      s["prime"] = r.smoothness->prime;
    }
    j["smoothness"] = s;
  }
  j["secant_containment"] = optional_json(r.secant, [&](const SecantVerdict& v) {
    return json{{"pass", v.pass},
                {"vacuous", v.vacuous},
                {"note", v.vacuous ? "no singular witnesses" : "containment is evidence, not a certificate"},
                {"trials", v.trials},
                {"evaluations", v.evaluations},
                {"failures", v.failures},
                {"prime", r.witness_prime}};
  });
  j["conditions"] = {{"a", to_string(r.condition_a())},
                     {"b", to_string(r.condition_b())},
                     {"c", to_string(r.condition_c())}};
  json cross;
  cross["irreducibility_dependent"] =
      !r.irreducibility || r.irreducibility->verdict != Irreducibility::irreducible;
  if (r.aut1 && r.def) cross["prolongation_implies_dual_defect"] = r.aut1->value == 0 || r.def->value > 0;
  if (r.pdef && r.def) cross["dual_defect_at_least_polar_defect"] = r.def->value >= r.pdef->value;
  if (r.profile) cross["corank_profile_monotone"] = r.profile->monotone();
  j["cross_checks"] = cross;
  const auto match = r.signature_match();
  j["signature"] = {{"n_vars", r.n_vars},
                    {"dual_defect", r.def ? json(r.def->value) : json(nullptr)},
                    {"aut1_dim", r.aut1 ? json(r.aut1->value) : json(nullptr)},
                    {"match", match ? json(*match) : json(nullptr)},
                    {"label", "signature match (n_vars, dual defect, prolongation dimension)"}};
  j["verdict"] = {{"kind", to_string(r.verdict.kind)},
                  {"index", r.verdict.kind == Verdict::Kind::severi_secant ? json(r.verdict.index) : json(nullptr)},
                  {"failed", r.verdict.failed},
                  {"reasons", r.verdict.reasons}};
  j["errors"] = r.errors;
  j["content_hash"] = content_hash(j);
  return j;
}

}  // namespace hessiana
