#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hessiana/cubic.hpp"
#include "hessiana/field.hpp"

namespace hessiana {

/// Points of the singular locus supplied by a construction, over F_prime.
struct WitnessSet {
  std::uint64_t prime = 0;
  std::vector<Vec<PrimeField>> points;
  std::string source;
};

/// (prime hint, count, seed) -> witnesses. The generator may move to a later
/// prime when the hinted one has too few rational points; the set records
/// the prime actually used.
using WitnessGenerator = std::function<WitnessSet(std::uint64_t, std::size_t, std::uint64_t)>;

struct SamplerSpec {
  enum class Target { ambient, on_hypersurface, on_singular_locus };
  Target target = Target::ambient;
  std::uint64_t seed = 0;
  int retries = 64;
  WitnessGenerator witnesses;  // required for on_singular_locus
};

/// Point on the affine cone over {f = 0} with nonzero polar covector, found
/// by intersecting random lines with the hypersurface. Throws
/// std::runtime_error when `retries` lines yield nothing.
Vec<PrimeField> sample_smooth_point(const FieldCubic<PrimeField>& f, Rng& rng, int retries = 64);

Vec<PrimeField> sample_point(const CubicForm& f, const PrimeField& field, const SamplerSpec& spec);

/// Minimum corank of the Hessian over sampled points, with provenance.
struct DefectEstimate {
  std::size_t value = 0;
  std::uint64_t prime = 0;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  std::vector<std::size_t> coranks;
  /// Probability that every sample overshoots the generic corank, bounded
  /// by (deg / p)^samples with deg = n_vars (degree of a maximal minor).
  double error_bound = 0;
};

DefectEstimate polar_defect(const CubicForm& f, std::uint64_t prime, std::uint64_t seed, std::size_t samples = 3);
/// Generic Gauss-fiber dimension: Hessian corank at sampled smooth points.
DefectEstimate dual_defect(const CubicForm& f, std::uint64_t prime, std::uint64_t seed, std::size_t samples = 3);

struct CorankProfile {
  std::size_t generic_corank = 0;
  std::size_t on_Y_corank = 0;
  std::optional<std::size_t> on_singular_corank;
  std::uint64_t prime = 0;
  std::uint64_t witness_prime = 0;
  std::size_t generic_samples = 0;
  std::size_t on_Y_samples = 0;
  std::size_t witness_samples = 0;

  bool monotone() const {
    return generic_corank <= on_Y_corank && (!on_singular_corank || on_Y_corank <= *on_singular_corank);
  }
};

CorankProfile corank_profile(const CubicForm& f, std::uint64_t prime, std::uint64_t seed, std::size_t samples,
                             const WitnessSet* witnesses);

struct SmoothnessVerdict {
  bool smooth = true;
  std::size_t codimension = 0;  // rank H at the first witness
  std::vector<std::size_t> ranks;
  std::vector<std::size_t> offending;  // indices whose rank differs from the first
  std::size_t witness_count = 0;
  std::uint64_t prime = 0;
};

/// Constant rank of H(v) over witnesses v with F_vv = 0. Throws ContractError
/// if some witness has nonzero polar covector.
SmoothnessVerdict smooth_witness(const CubicForm& f, const WitnessSet& witnesses);

struct SecantVerdict {
  bool pass = true;
  bool vacuous = false;  // no singular witnesses
  std::size_t trials = 0;
  std::size_t evaluations = 0;
  std::size_t failures = 0;
};

/// f(v1 + t v2) = 0 for random witness pairs and five random t each.
SecantVerdict secant_check(const CubicForm& f, const WitnessSet& witnesses, std::size_t trials, std::uint64_t seed);

struct Section {
  CubicForm form;
  std::vector<std::vector<mpq_class>> basis;  // e_j - (l_j / l_p) e_p, j != p
  std::size_t pivot = 0;                      // first index with l_p != 0
};

/// Restriction to Ker l. Section coordinates are ambient ones with the pivot
/// coordinate dropped.
Section hyperplane_section(const CubicForm& f, const std::vector<mpq_class>& ell);

/// Section coordinates of ambient witnesses; every point must lie in Ker l.
WitnessSet section_witnesses(const WitnessSet& ambient, const std::vector<mpq_class>& ell);

enum class Irreducibility { irreducible, reducible, unverified };
std::string to_string(Irreducibility v);

struct IrreducibilityResult {
  Irreducibility verdict = Irreducibility::unverified;
  std::string witness;  // smooth plane index, or the linear factor
  std::size_t planes_tried = 0;
  std::uint64_t prime = 0;
  std::uint64_t seed = 0;
};

/// A smooth plane section proves irreducibility (reducible plane cubics are
/// singular). Otherwise looks for a hyperplane contained in {f = 0} through
/// sampled points, whose gradient would be that hyperplane's covector.
IrreducibilityResult irreducible_heuristic(const CubicForm& f, std::uint64_t prime, std::uint64_t seed,
                                           std::size_t planes = 8);

/// True iff the ternary cubic with coefficients c (monomial_rank order over
/// 3 variables) defines a smooth plane curve, via the resultant of its
/// partial derivatives.
bool plane_cubic_smooth(const PrimeField& field, const Vec<PrimeField>& c);

}  // namespace hessiana
