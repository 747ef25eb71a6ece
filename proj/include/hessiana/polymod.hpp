#pragma once

#include <cstdint>
#include <vector>

#include "hessiana/field.hpp"

namespace hessiana {

/// Univariate polynomial over F_p, coefficients from low to high degree.
using PolyMod = std::vector<std::uint64_t>;

/// Distinct roots in F_p, ascending. Uses gcd with X^p - X followed by
/// random equal-degree splitting, so the result is deterministic given rng.
/// The zero polynomial has no well-defined root set and is rejected.
std::vector<std::uint64_t> roots_mod_p(const PrimeField& field, PolyMod f, Rng& rng);

}  // namespace hessiana
