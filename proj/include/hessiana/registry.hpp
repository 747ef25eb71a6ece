#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hessiana/cubic.hpp"
#include "hessiana/geometry.hpp"

namespace hessiana {

/// A registered cubic together with what the construction knows about its
/// singular locus.
struct NamedForm {
  std::string name;
  CubicForm form;
  WitnessGenerator witnesses;          // empty when none is known
  bool singular_locus_empty = false;   // smooth hypersurface by construction
  std::optional<int> severi_index;     // severi:i and its sections
  std::optional<std::vector<mpq_class>> section_covector;
};

// Names:
//   severi:I                 I in 1..4, Jordan determinant cubic
//   severi:I:section:O1|O2|O3  restriction to an orbit hyperplane
//   fermat:K                 sum of K cubes
//   gordan-noether           severi:1:section:O1
NamedForm named_form(const std::string& name);
bool is_registry_name(const std::string& name);
std::vector<std::string> registry_examples();

/// Rank-one witnesses of severi:I over F_p (always found at the hinted prime).
WitnessGenerator rank1_witnesses(int severi_index);

/// Rank-one points on Ker l, in section coordinates. Moves on to later primes
/// when the hinted one yields too few points. `special` points (Jordan
/// coordinates, in Ker l) are listed first.
WitnessGenerator section_witness_generator(int severi_index, std::vector<mpq_class> ell,
                                           std::vector<std::vector<mpq_class>> special = {});

/// f(g y) with witnesses mapped through g^{-1}; columns of g must be
/// invertible.
NamedForm transform_named(const NamedForm& base, const std::vector<std::vector<mpq_class>>& columns, std::string name);

}  // namespace hessiana
