#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "hessiana/geometry.hpp"
#include "hessiana/registry.hpp"
#include "hessiana/symmetry.hpp"

namespace hessiana {

inline constexpr std::uint64_t kDefaultSeed = 1729;

struct AnalysisConfig {
  std::uint64_t prime = kDefaultPrime;
  std::size_t prime_count = 2;  // primes for the dimension certificates
  std::uint64_t seed = kDefaultSeed;
  std::size_t samples = 3;
  std::size_t witness_count = 20;
  std::size_t secant_trials = 200;
  std::string invocation;

  std::vector<std::uint64_t> primes() const;
};

struct Verdict {
  enum class Kind { severi_secant, conditions_fail, inconclusive };
  Kind kind = Kind::inconclusive;
  int index = 0;                    // severi_secant
  std::vector<std::string> failed;  // conditions_fail: subset of {irreducible, a, b, c}
  std::vector<std::string> reasons;
};

std::string to_string(Verdict::Kind k);

enum class ConditionStatus { pass, fail, unknown };
std::string to_string(ConditionStatus s);

struct AnalysisReport {
  std::string form_id;
  std::string form_hash;
  std::size_t n_vars = 0;
  std::string field;
  AnalysisConfig config;

  std::optional<IrreducibilityResult> irreducibility;
  std::optional<DefectEstimate> pdef;
  std::optional<DefectEstimate> def;
  std::optional<CorankProfile> profile;
  std::optional<DimensionCertificate> aut;
  std::optional<DimensionCertificate> aut1;

  bool witnesses_available = false;
  bool singular_locus_empty = false;
  std::string witness_source;
  std::uint64_t witness_prime = 0;
  std::uint64_t witness_seed = 0;
  std::optional<SmoothnessVerdict> smoothness;
  std::optional<SecantVerdict> secant;

  std::vector<std::string> errors;  // steps that failed; the report is then partial
  Verdict verdict;

  ConditionStatus condition_a() const;
  ConditionStatus condition_b() const;
  ConditionStatus condition_c() const;
  /// i with (n_vars, def, aut1) = (N_i + 1, n_i/2 + 1, N_i + 1).
  std::optional<int> signature_match() const;
};

/// Runs every step even after a condition fails; step errors are recorded
/// and make the verdict inconclusive.
AnalysisReport analyze(const NamedForm& form, const AnalysisConfig& config);
Verdict severi_verdict(const AnalysisReport& report);

/// Report as JSON (schema 1). `timestamp` goes into "generated_at", which
/// is excluded from "content_hash".
nlohmann::json report_json(const AnalysisReport& report, const std::string& timestamp = "");
std::string content_hash(const nlohmann::json& report);

nlohmann::json profile_json(const CorankProfile& p);

}  // namespace hessiana
