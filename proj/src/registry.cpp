#include "hessiana/registry.hpp"

#include <regex>

#include "hessiana/jordan.hpp"
#include "hessiana/polymod.hpp"

namespace hessiana {

namespace {

using Span = std::span<const std::uint64_t>;

std::uint64_t dot(const PrimeField& F, const Vec<PrimeField>& ell, const Vec<PrimeField>& v) {
  std::uint64_t s = 0;
  for (std::size_t k = 0; k < v.size(); ++k) s = F.mul_add(ell[k], v[k], s);
  return s;
}

Vec<PrimeField> reduce(const PrimeField& F, const std::vector<mpq_class>& v) {
  Vec<PrimeField> out;
  for (const auto& x : v) out.push_back(F.from_rational(x));
  return out;
}

// Inverse of the matrix with the given columns, modulo p.
std::vector<Vec<PrimeField>> inverse_mod(const PrimeField& F, const std::vector<std::vector<mpq_class>>& columns) {
  const std::size_t n = columns.size();
  std::vector<Vec<PrimeField>> rows(n, Vec<PrimeField>(2 * n, 0));
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t r = 0; r < n; ++r) rows[r][c] = F.from_rational(columns[c][r]);
  for (std::size_t r = 0; r < n; ++r) rows[r][n + r] = 1;
  auto piv = rref(F, rows);
  if (piv.size() != n || piv.back() != n - 1)
    throw std::runtime_error("coordinate change is not invertible modulo " + std::to_string(F.modulus()));
  std::vector<Vec<PrimeField>> inv(n, Vec<PrimeField>(n));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) inv[r][c] = rows[r][n + c];
  return inv;
}

}  // namespace

WitnessGenerator rank1_witnesses(int severi_index) {
  const SeveriIndex idx(severi_index);
  return [idx](std::uint64_t prime, std::size_t count, std::uint64_t seed) {
    const PrimeField F(prime);
    Rng rng(seed);
    WitnessSet w{prime, {}, "rank-one points of severi:" + std::to_string(idx.i)};
    for (std::size_t k = 0; k < count; ++k) w.points.push_back(random_rank1_point(F, idx, rng));
    return w;
  };
}

WitnessGenerator section_witness_generator(int severi_index, std::vector<mpq_class> ell,
                                           std::vector<std::vector<mpq_class>> special) {
  const SeveriIndex idx(severi_index);
  return [idx, ell, special](std::uint64_t prime, std::size_t count, std::uint64_t seed) {
    const std::size_t d = idx.algebra_dim();
    WitnessSet ambient;
    std::uint64_t p = prime;
    for (int attempt = 0; attempt < 8; ++attempt, p = next_prime(p + 1)) {
      const PrimeField F(p);
      Rng rng = Rng(seed).fork(p);
      const auto L = reduce(F, ell);
      ambient = WitnessSet{p, {}, "rank-one points of severi:" + std::to_string(idx.i) + " on the hyperplane"};
      for (const auto& s : special) {
        if (ambient.points.size() >= count) break;
        ambient.points.push_back(reduce(F, s));
      }
      const std::size_t lines = 64 * count + 64;
      for (std::size_t line = 0; line < lines && ambient.points.size() < count; ++line) {
        const int chart = static_cast<int>(rng.below(3));
        const auto a = F.random_nonzero(rng);
        std::array<Vec<PrimeField>, 4> uw;
        for (auto& v : uw) {
          v.resize(d);
          for (auto& x : v) x = F.random(rng);
        }
        auto point = [&](std::uint64_t s) {
          Vec<PrimeField> u(d), w(d);
          for (std::size_t k = 0; k < d; ++k) {
            u[k] = F.mul_add(s, uw[2][k], uw[0][k]);
            w[k] = F.mul_add(s, uw[3][k], uw[1][k]);
          }
          return rank1_point(F, idx, chart, a, Span(u), Span(w));
        };
        // l(point(s)) is quadratic in s; interpolate from s = 0, 1, 2.
        const auto y0 = dot(F, L, point(0)), y1 = dot(F, L, point(1)), y2 = dot(F, L, point(2));
        const auto q2 = F.div(F.add(F.sub(y2, F.add(y1, y1)), y0), 2);
        const auto q1 = F.sub(F.sub(y1, y0), q2);
        std::vector<std::uint64_t> roots;
        if (y0 == 0 && q1 == 0 && q2 == 0) roots.push_back(F.random(rng));
        else roots = roots_mod_p(F, {y0, q1, q2}, rng);
        for (auto s : roots) {
          if (ambient.points.size() >= count) break;
          auto v = point(s);
          if (dot(F, L, v) != 0) throw std::logic_error("section witness left the hyperplane");
          ambient.points.push_back(std::move(v));
        }
      }
      if (ambient.points.size() >= count) break;
    }
    return section_witnesses(ambient, ell);
  };
}

NamedForm named_form(const std::string& name) {
  static const std::regex severi(R"(severi:([1-4]))");
  static const std::regex section(R"(severi:([1-4]):section:O([1-3]))");
  static const std::regex fermat(R"(fermat:([0-9]+))");
  std::smatch m;
  if (std::regex_match(name, m, severi)) {
    const int i = std::stoi(m[1]);
    NamedForm f{name, severi_cubic(SeveriIndex(i), FieldSpec::rational()), rank1_witnesses(i), false, i, std::nullopt};
    return f;
  }
  if (std::regex_match(name, m, section) || name == "gordan-noether") {
    const int i = name == "gordan-noether" ? 1 : std::stoi(m[1]);
    const int r = name == "gordan-noether" ? 1 : std::stoi(m[2]);
    const SeveriIndex idx(i);
    auto ell = orbit_hyperplane(idx, r);
    auto sec = hyperplane_section(severi_cubic(idx, FieldSpec::rational()), ell);
    std::vector<std::vector<mpq_class>> special;
    if (r == 2) {
      // diag(0, 0, 1): the rank-one point where the hyperplane is tangent.
      std::vector<mpq_class> t(idx.n_vars(), 0);
      t[jordan_alpha_index(2)] = 1;
      special.push_back(std::move(t));
    }
    return NamedForm{name, std::move(sec.form), section_witness_generator(i, ell, std::move(special)), false, i, ell};
  }
  if (std::regex_match(name, m, fermat)) {
    const unsigned long k = std::stoul(m[1]);
    if (k < 1 || k > 1000) throw ContractError("fermat:K needs 1 <= K <= 1000");
    CubicForm::Terms terms;
    for (std::size_t v = 0; v < k; ++v) terms[Monomial::of(v, v, v)] = 1;
    return NamedForm{name, CubicForm(k, FieldSpec::rational(), std::move(terms)), {}, true, std::nullopt, std::nullopt};
  }
  throw ContractError("unknown registry name '" + name + "'");
}

bool is_registry_name(const std::string& name) {
  try {
    (void)named_form(name);
    return true;
  } catch (const ContractError&) {
    return false;
  }
}

std::vector<std::string> registry_examples() {
  std::vector<std::string> out;
  for (int i = 1; i <= 4; ++i) {
    out.push_back("severi:" + std::to_string(i));
    for (int r = 1; r <= 3; ++r) out.push_back("severi:" + std::to_string(i) + ":section:O" + std::to_string(r));
  }
  out.push_back("fermat:3");
  out.push_back("fermat:4");
  out.push_back("gordan-noether");
  return out;
}

NamedForm transform_named(const NamedForm& base, const std::vector<std::vector<mpq_class>>& columns, std::string name) {
  NamedForm out{std::move(name), transform(base.form, columns), {}, base.singular_locus_empty, base.severi_index,
                std::nullopt};
  if (base.witnesses) {
    auto inner = base.witnesses;
    out.witnesses = [inner, columns](std::uint64_t prime, std::size_t count, std::uint64_t seed) {
      auto w = inner(prime, count, seed);
      const PrimeField F(w.prime);
      const auto inv = inverse_mod(F, columns);
      for (auto& v : w.points) {
        Vec<PrimeField> y(v.size(), 0);
        for (std::size_t r = 0; r < v.size(); ++r) y[r] = dot(F, inv[r], v);
        v = std::move(y);
      }
      w.source += " (transformed)";
      return w;
    };
  }
  return out;
}

}  // namespace hessiana
