#include "hessiana/cli.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "CLI11.hpp"

#include "hessiana/cubic_io.hpp"
#include "hessiana/jordan.hpp"

namespace hessiana {

namespace {

void add_common(CLI::App* sub, CliConfig& cfg, std::string& seed_text) {
  sub->add_option("input", cfg.input, "registry name (severi:I, severi:I:section:O1|O2|O3, fermat:K, gordan-noether) or cubic file")
      ->required();
  sub->add_option("--prime", cfg.prime, "first prime in [2^31, 2^32)");
  sub->add_option("--primes", cfg.prime_count, "number of primes for dimension certificates")->check(CLI::PositiveNumber);
  sub->add_option("--seed", seed_text, "integer seed, or 'random'");
  sub->add_option("--samples", cfg.samples, "random points per defect estimate")->check(CLI::PositiveNumber);
  sub->add_option("--witnesses", cfg.witnesses, "singular-locus witnesses to draw")->check(CLI::PositiveNumber);
  sub->add_option("-o,--output", cfg.output, "output file (default stdout)");
  sub->add_flag("-v,--verbose", cfg.verbosity, "progress on stderr");
}

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void emit(const CliConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.output.empty()) {
    out << text;
    out.flush();
  } else {
    write_file_atomic(cfg.output, text);
  }
}

AnalysisConfig analysis_config(const CliConfig& cfg) {
  AnalysisConfig a;
  a.prime = cfg.prime;
  a.prime_count = cfg.prime_count;
  a.seed = cfg.seed;
  a.samples = cfg.samples;
  a.witness_count = cfg.witnesses;
  a.secant_trials = cfg.secant_trials;
  a.invocation = cfg.invocation;
  return a;
}

std::vector<mpq_class> parse_covector(const std::string& text) {
  std::vector<mpq_class> ell;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) ell.push_back(parse_rational(item));
  return ell;
}

std::string format_covector(const std::vector<mpq_class>& ell) {
  std::string s;
  for (std::size_t i = 0; i < ell.size(); ++i) s += (i ? "," : "") + ell[i].get_str();
  return s;
}

int run_generate(const CliConfig& cfg, std::ostream& out) {
  auto form = named_form(cfg.input).form;
  const auto spec = FieldSpec::parse(cfg.field);
  if (spec.is_prime()) form = form.reduced_mod(spec.prime);
  emit(cfg, "# " + cfg.input + "\n" + serialize_cubic(form), out);
  return kExitOk;
}

int run_analyze(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto form = resolve_input(cfg.input);
  if (cfg.verbosity) err << "analyzing " << form.name << " (" << form.form.n_vars() << " variables)\n";
  const auto report = analyze(form, analysis_config(cfg));
  const auto j = report_json(report, cfg.timestamp ? utc_now() : "");
  emit(cfg, j.dump(2) + "\n", out);
  if (cfg.verbosity) err << "verdict: " << to_string(report.verdict.kind) << '\n';
  if (!report.errors.empty()) {
    for (const auto& e : report.errors) err << "error: " << e << '\n';
  }
  return report.verdict.kind == Verdict::Kind::inconclusive ? kExitInconclusive : kExitOk;
}

int run_section(const CliConfig& cfg, std::ostream& out) {
  const auto form = resolve_input(cfg.input);
  const int modes = !cfg.orbit.empty() + cfg.random_section + !cfg.covector.empty();
  if (modes != 1) throw ContractError("section needs exactly one of --orbit, --random, --covector");
  std::vector<mpq_class> ell;
  if (!cfg.orbit.empty()) {
    if (cfg.orbit.size() != 2 || cfg.orbit[0] != 'O' || cfg.orbit[1] < '1' || cfg.orbit[1] > '3')
      throw ContractError("--orbit must be O1, O2 or O3");
    if (!form.severi_index || form.section_covector)
      throw ContractError("--orbit applies to severi:I registry forms only");
    ell = orbit_hyperplane(SeveriIndex(*form.severi_index), cfg.orbit[1] - '0');
  } else if (cfg.random_section) {
    Rng rng(cfg.seed);
    ell.resize(form.form.n_vars());
    for (auto& x : ell) x = static_cast<long>(rng.uniform_int(-9, 9));
    if (std::all_of(ell.begin(), ell.end(), [](const mpq_class& x) { return x == 0; })) ell[0] = 1;
  } else {
    ell = parse_covector(cfg.covector);
  }
  const auto sec = hyperplane_section(form.form, ell);
  emit(cfg,
       "# section of " + form.name + " by l = (" + format_covector(ell) + "), pivot " + std::to_string(sec.pivot) +
           "\n" + serialize_cubic(sec.form),
       out);
  return kExitOk;
}

int run_prolong(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.dim_only == cfg.basis) throw ContractError("prolong needs exactly one of --dim-only, --basis");
  const auto form = resolve_input(cfg.input);
  const auto& f = form.form;
  std::vector<std::uint64_t> primes = analysis_config(cfg).primes();
  if (f.field().is_prime()) primes = {f.field().prime};
  if (cfg.dim_only) {
    const auto c = aut1_dim(f, primes);
    nlohmann::json j = {{"form", form.name},    {"hash", f.hash_hex()}, {"aut1_dim", c.value},
                        {"primes", c.primes},   {"dims", c.dims},       {"agree", c.agree},
                        {"route", c.route},     {"invocation", cfg.invocation}};
    emit(cfg, j.dump(2) + "\n", out);
    if (!c.agree) err << "warning: dimensions differ across primes\n";
    return c.agree ? kExitOk : kExitInconclusive;
  }
  if (cfg.rational) {
    if (f.n_vars() > 9) throw ContractError("rational basis is limited to forms with at most 9 variables");
    if (f.field().is_prime()) throw ContractError("rational basis needs a form over Q");
    const RationalField Q;
    emit(cfg, export_basis(Q, aut1_basis(f, Q)), out);
  } else {
    const PrimeField F(primes.front());
    emit(cfg, export_basis(F, aut1_basis(f, F)), out);
  }
  return kExitOk;
}

int run_profile(const CliConfig& cfg, std::ostream& out) {
  const auto form = resolve_input(cfg.input);
  WitnessSet w;
  const WitnessSet* wp = nullptr;
  if (form.witnesses) {
    w = form.witnesses(cfg.prime, cfg.witnesses, Rng(cfg.seed).fork(4).seed());
    wp = &w;
  }
  const auto p = corank_profile(form.form, cfg.prime, cfg.seed, cfg.samples, wp);
  nlohmann::json j = profile_json(p);
  j["form"] = form.name;
  j["seed"] = cfg.seed;
  j["invocation"] = cfg.invocation;
  emit(cfg, j.dump(2) + "\n", out);
  return kExitOk;
}

}  // namespace

NamedForm resolve_input(const std::string& input) {
  if (is_registry_name(input)) return named_form(input);
  std::error_code ec;
  if (std::filesystem::is_regular_file(input, ec)) {
    auto f = read_cubic_file(input);
    return NamedForm{input, std::move(f), {}, false, std::nullopt, std::nullopt};
  }
  if (input.find(':') != std::string::npos || input == "gordan-noether")
    throw ContractError("unknown registry name '" + input + "'");
  throw std::runtime_error("cannot read input '" + input + "'");
}

std::optional<int> parse_cli(int argc, const char* const* argv, CliConfig& cfg, std::ostream& out, std::ostream& err) {
  CLI::App app{"Invariants of cubic hypersurfaces: defects, symmetry prolongations, Severi signatures"};
  app.require_subcommand(1);
  std::string seed_text;
  bool no_timestamp = false;

  auto* gen = app.add_subcommand("generate", "write a registry form as a cubic file");
  gen->add_option("input", cfg.input, "registry name")->required();
  gen->add_option("--field", cfg.field, "rational or p:PRIME");
  gen->add_option("-o,--output", cfg.output, "output file (default stdout)");

  auto* an = app.add_subcommand("analyze", "full invariant report and verdict (JSON)");
  add_common(an, cfg, seed_text);
  an->add_option("--secant-trials", cfg.secant_trials, "witness pairs for secant containment");
  an->add_flag("--no-timestamp", no_timestamp, "leave generated_at empty");

  auto* sec = app.add_subcommand("section", "restrict to a hyperplane");
  add_common(sec, cfg, seed_text);
  sec->add_option("--orbit", cfg.orbit, "orbit representative O1, O2 or O3 (severi:I only)");
  sec->add_flag("--random", cfg.random_section, "seeded random covector");
  sec->add_option("--covector", cfg.covector, "comma-separated covector");

  auto* pro = app.add_subcommand("prolong", "prolongation space of the symmetry algebra");
  add_common(pro, cfg, seed_text);
  pro->add_flag("--dim-only", cfg.dim_only, "dimension with a multi-prime certificate");
  pro->add_flag("--basis", cfg.basis, "export a basis");
  pro->add_flag("--rational", cfg.rational, "basis over Q (at most 9 variables)");

  auto* prof = app.add_subcommand("profile", "Hessian corank profile (JSON)");
  add_common(prof, cfg, seed_text);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }
  for (auto* s : app.get_subcommands()) cfg.command = s->get_name();
  if (!seed_text.empty()) {
    if (seed_text == "random") {
      cfg.random_seed = true;
      std::random_device rd;
      cfg.seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    } else {
      try {
        std::size_t pos = 0;
        cfg.seed = std::stoull(seed_text, &pos);
        if (pos != seed_text.size()) throw std::invalid_argument(seed_text);
      } catch (const std::exception&) {
        err << "error: --seed must be an integer or 'random'\n";
        return kExitError;
      }
    }
  }
  cfg.timestamp = !no_timestamp;
  std::string inv;
  for (int i = 0; i < argc; ++i) {
    inv += i ? " " : "";
    inv += i == 0 ? std::filesystem::path(argv[0]).filename().string() : argv[i];
  }
  if (cfg.random_seed) inv += " (seed " + std::to_string(cfg.seed) + ")";
  cfg.invocation = inv;
  return std::nullopt;
}

int run_command(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (cfg.command == "generate") return run_generate(cfg, out);
    if (cfg.command == "analyze") return run_analyze(cfg, out, err);
    if (cfg.command == "section") return run_section(cfg, out);
    if (cfg.command == "prolong") return run_prolong(cfg, out, err);
    if (cfg.command == "profile") return run_profile(cfg, out);
    err << "error: unknown command '" << cfg.command << "'\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return kExitError;
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CliConfig cfg;
  if (auto code = parse_cli(argc, argv, cfg, out, err)) return *code;
  return run_command(cfg, out, err);
}

}  // namespace hessiana
