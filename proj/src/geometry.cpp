#include "hessiana/geometry.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <sstream>
#include <stdexcept>

#include "hessiana/matrix.hpp"
#include "hessiana/polymod.hpp"

namespace hessiana {

namespace {

using Span = std::span<const std::uint64_t>;

Vec<PrimeField> random_vector(const PrimeField& F, std::size_t n, Rng& rng) {
  Vec<PrimeField> v(n);
  for (auto& x : v) x = F.random(rng);
  return v;
}

bool all_zero(const Vec<PrimeField>& v) {
  return std::all_of(v.begin(), v.end(), [](std::uint64_t x) { return x == 0; });
}

void require_nonzero(const CubicForm& f) {
  if (f.is_zero()) throw ContractError("the zero polynomial does not define a hypersurface");
}

// Ternary polynomials for the plane-curve resultant.
using Exp = std::array<int, 3>;
using Ternary = std::map<Exp, std::uint64_t>;

Ternary derivative(const PrimeField& F, const Ternary& p, int var) {
  Ternary d;
  for (const auto& [e, c] : p) {
    if (e[var] == 0) continue;
    Exp f = e;
    --f[var];
    auto v = F.mul(c, F.from_int(e[var]));
    auto& slot = d[f];
    slot = F.add(slot, v);
  }
  return d;
}

Ternary product(const PrimeField& F, const Ternary& a, const Ternary& b) {
  Ternary r;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) {
      Exp e{ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]};
      auto& slot = r[e];
      slot = F.mul_add(ca, cb, slot);
    }
  return r;
}

void accumulate(const PrimeField& F, Ternary& into, const Ternary& p, bool subtract) {
  for (const auto& [e, c] : p) {
    auto& slot = into[e];
    slot = subtract ? F.sub(slot, c) : F.add(slot, c);
  }
}

}  // namespace

Vec<PrimeField> sample_smooth_point(const FieldCubic<PrimeField>& f, Rng& rng, int retries) {
  const auto& F = f.field();
  const std::size_t n = f.n_vars();
  for (int attempt = 0; attempt < retries; ++attempt) {
    auto a = random_vector(F, n, rng);
    auto b = random_vector(F, n, rng);
    auto c = f.along_line(Span(a), Span(b));
    std::vector<std::uint64_t> ts;
    if (c[0] == 0 && c[1] == 0 && c[2] == 0 && c[3] == 0) {
      ts.push_back(F.random(rng));
    } else {
      ts = roots_mod_p(F, {c[0], c[1], c[2], c[3]}, rng);
    }
    for (auto t : ts) {
      Vec<PrimeField> y(n);
      for (std::size_t i = 0; i < n; ++i) y[i] = F.mul_add(t, b[i], a[i]);
      if (!all_zero(f.polar(Span(y)))) return y;
    }
  }
  throw std::runtime_error("no smooth point of the hypersurface found on " + std::to_string(retries) +
                           " random lines over F_" + std::to_string(F.modulus()) +
                           " (a random line meets a cubic hypersurface in a rational point with probability about 2/3)");
}

Vec<PrimeField> sample_point(const CubicForm& f, const PrimeField& field, const SamplerSpec& spec) {
  Rng rng(spec.seed);
  switch (spec.target) {
    case SamplerSpec::Target::ambient:
      return random_vector(field, f.n_vars(), rng);
    case SamplerSpec::Target::on_hypersurface:
      require_nonzero(f);
      return sample_smooth_point(FieldCubic<PrimeField>(f, field), rng, spec.retries);
    case SamplerSpec::Target::on_singular_locus: {
      if (!spec.witnesses) throw ContractError("singular-locus sampling needs a registered witness generator");
      auto w = spec.witnesses(field.modulus(), 1, spec.seed);
      if (w.points.empty()) throw std::runtime_error("witness generator returned no points");
      if (w.prime != field.modulus())
        throw std::runtime_error("witness generator moved to F_" + std::to_string(w.prime));
      return w.points.front();
    }
  }
  throw ContractError("unknown sampler target");
}

DefectEstimate polar_defect(const CubicForm& f, std::uint64_t prime, std::uint64_t seed, std::size_t samples) {
  if (samples == 0) throw ContractError("polar_defect needs at least one sample");
  const PrimeField F(prime);
  const FieldCubic<PrimeField> fc(f, F);
  Rng rng(seed);
  DefectEstimate d{f.n_vars(), prime, seed, samples, {}, 0};
  for (std::size_t s = 0; s < samples; ++s) {
    auto w = random_vector(F, f.n_vars(), rng);
    const std::size_t corank = f.n_vars() - fc.hessian_rank(Span(w));
    d.coranks.push_back(corank);
    d.value = std::min(d.value, corank);
  }
  d.error_bound = std::min(1.0, static_cast<double>(f.n_vars()) / static_cast<double>(prime));
  for (std::size_t s = 1; s < samples; ++s)
    d.error_bound *= static_cast<double>(f.n_vars()) / static_cast<double>(prime);
  return d;
}

DefectEstimate dual_defect(const CubicForm& f, std::uint64_t prime, std::uint64_t seed, std::size_t samples) {
  if (samples == 0) throw ContractError("dual_defect needs at least one sample");
  require_nonzero(f);
  const PrimeField F(prime);
  const FieldCubic<PrimeField> fc(f, F);
  Rng rng(seed);
  DefectEstimate d{f.n_vars(), prime, seed, samples, {}, 0};
  for (std::size_t s = 0; s < samples; ++s) {
    auto y = sample_smooth_point(fc, rng);
    const std::size_t corank = f.n_vars() - fc.hessian_rank(Span(y));
    d.coranks.push_back(corank);
    d.value = std::min(d.value, corank);
  }
  d.error_bound = std::min(1.0, static_cast<double>(samples * f.n_vars()) / static_cast<double>(prime));
  return d;
}

CorankProfile corank_profile(const CubicForm& f, std::uint64_t prime, std::uint64_t seed, std::size_t samples,
                             const WitnessSet* witnesses) {
  Rng root(seed);
  CorankProfile p;
  p.prime = prime;
  const auto pd = polar_defect(f, prime, root.fork(1).seed(), samples);
  const auto dd = dual_defect(f, prime, root.fork(2).seed(), samples);
  p.generic_corank = pd.value;
  p.on_Y_corank = dd.value;
  p.generic_samples = pd.samples;
  p.on_Y_samples = dd.samples;
  if (witnesses && !witnesses->points.empty()) {
    const PrimeField W(witnesses->prime);
    const FieldCubic<PrimeField> fc(f, W);
    std::size_t best = f.n_vars();
    for (const auto& v : witnesses->points) best = std::min(best, f.n_vars() - fc.hessian_rank(Span(v)));
    p.on_singular_corank = best;
    p.witness_prime = witnesses->prime;
    p.witness_samples = witnesses->points.size();
  }
  return p;
}

SmoothnessVerdict smooth_witness(const CubicForm& f, const WitnessSet& witnesses) {
  SmoothnessVerdict v;
  v.prime = witnesses.prime;
  v.witness_count = witnesses.points.size();
  if (witnesses.points.empty()) return v;
  const PrimeField F(witnesses.prime);
  const FieldCubic<PrimeField> fc(f, F);
  for (std::size_t k = 0; k < witnesses.points.size(); ++k) {
    const auto& w = witnesses.points[k];
    if (!all_zero(fc.polar(Span(w))))
      throw ContractError("witness " + std::to_string(k) + " is not in the singular locus (F_ww != 0)");
    v.ranks.push_back(fc.hessian_rank(Span(w)));
  }
  v.codimension = v.ranks.front();
  for (std::size_t k = 0; k < v.ranks.size(); ++k)
    if (v.ranks[k] != v.codimension) v.offending.push_back(k);
  v.smooth = v.offending.empty();
  return v;
}

SecantVerdict secant_check(const CubicForm& f, const WitnessSet& witnesses, std::size_t trials, std::uint64_t seed) {
  SecantVerdict v;
  const auto& pts = witnesses.points;
  if (pts.empty()) {
    v.vacuous = true;
    return v;
  }
  const PrimeField F(witnesses.prime);
  const FieldCubic<PrimeField> fc(f, F);
  Rng rng(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    std::size_t i = rng.below(pts.size()), j = rng.below(pts.size());
    if (pts.size() > 1)
      while (j == i) j = rng.below(pts.size());
    ++v.trials;
    for (int s = 0; s < 5; ++s) {
      const auto tau = F.random(rng);
      Vec<PrimeField> y(f.n_vars());
      for (std::size_t k = 0; k < y.size(); ++k) y[k] = F.mul_add(tau, pts[j][k], pts[i][k]);
      ++v.evaluations;
      if (fc.eval(Span(y)) != 0) ++v.failures;
    }
  }
  v.pass = v.failures == 0;
  return v;
}

Section hyperplane_section(const CubicForm& f, const std::vector<mpq_class>& ell) {
  if (ell.size() != f.n_vars())
    throw ContractError("covector has " + std::to_string(ell.size()) + " entries, form has " +
                        std::to_string(f.n_vars()) + " variables");
  auto it = std::find_if(ell.begin(), ell.end(), [](const mpq_class& x) { return x != 0; });
  if (it == ell.end()) throw ContractError("hyperplane section needs a nonzero covector");
  if (f.n_vars() < 2) throw ContractError("hyperplane section of a form in one variable is empty");
  const std::size_t p = static_cast<std::size_t>(it - ell.begin());
  std::vector<std::vector<mpq_class>> basis;
  for (std::size_t j = 0; j < ell.size(); ++j) {
    if (j == p) continue;
    std::vector<mpq_class> b(ell.size(), 0);
    b[j] = 1;
    b[p] = -ell[j] / ell[p];
    basis.push_back(std::move(b));
  }
  auto g = restrict_form(f, basis);
  return {std::move(g), std::move(basis), p};
}

WitnessSet section_witnesses(const WitnessSet& ambient, const std::vector<mpq_class>& ell) {
  const PrimeField F(ambient.prime);
  auto it = std::find_if(ell.begin(), ell.end(), [](const mpq_class& x) { return x != 0; });
  if (it == ell.end()) throw ContractError("section witnesses need a nonzero covector");
  const std::size_t p = static_cast<std::size_t>(it - ell.begin());
  WitnessSet out{ambient.prime, {}, ambient.source};
  for (const auto& v : ambient.points) {
    if (v.size() != ell.size()) throw ContractError("witness dimension does not match the covector");
    std::uint64_t s = 0;
    for (std::size_t k = 0; k < v.size(); ++k) s = F.mul_add(F.from_rational(ell[k]), v[k], s);
    if (s != 0) throw ContractError("witness does not lie on the hyperplane");
    Vec<PrimeField> w;
    for (std::size_t k = 0; k < v.size(); ++k)
      if (k != p) w.push_back(v[k]);
    out.points.push_back(std::move(w));
  }
  return out;
}

std::string to_string(Irreducibility v) {
  switch (v) {
    case Irreducibility::irreducible: return "irreducible";
    case Irreducibility::reducible: return "reducible";
    case Irreducibility::unverified: return "unverified";
  }
  return "unverified";
}

bool plane_cubic_smooth(const PrimeField& F, const Vec<PrimeField>& c) {
  const auto monos = all_cubic_monomials(3);
  if (c.size() != monos.size()) throw ContractError("plane cubic needs 10 coefficients");
  Ternary g;
  for (const auto& m : monos) {
    auto e = m.exponents(3);
    g[{e[0], e[1], e[2]}] = c[monomial_rank(m, 3)];
  }
  std::array<Ternary, 3> q;
  for (int i = 0; i < 3; ++i) q[i] = derivative(F, g, i);
  std::array<std::array<Ternary, 3>, 3> h;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) h[i][j] = derivative(F, q[i], j);
  // Jacobian determinant of (q0, q1, q2), a cubic.
  Ternary J;
  static constexpr int perm[6][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {0, 2, 1}, {2, 1, 0}, {1, 0, 2}};
  for (int s = 0; s < 6; ++s) {
    auto t = product(F, product(F, h[0][perm[s][0]], h[1][perm[s][1]]), h[2][perm[s][2]]);
    accumulate(F, J, t, s >= 3);
  }
  std::array<Ternary, 6> rows{q[0], q[1], q[2], derivative(F, J, 0), derivative(F, J, 1), derivative(F, J, 2)};
  static constexpr Exp quad[6] = {{2, 0, 0}, {0, 2, 0}, {0, 0, 2}, {1, 1, 0}, {1, 0, 1}, {0, 1, 1}};
  std::vector<std::uint64_t> M(36, 0);
  for (int r = 0; r < 6; ++r)
    for (int k = 0; k < 6; ++k) {
      auto it = rows[r].find(quad[k]);
      if (it != rows[r].end()) M[r * 6 + k] = it->second;
    }
  return dense_rank(F, 6, 6, std::move(M)) == 6;
}

IrreducibilityResult irreducible_heuristic(const CubicForm& f, std::uint64_t prime, std::uint64_t seed,
                                           std::size_t planes) {
  require_nonzero(f);
  IrreducibilityResult r;
  r.prime = prime;
  r.seed = seed;
  const std::size_t n = f.n_vars();
  if (n <= 2) {
    r.verdict = Irreducibility::reducible;
    r.witness = "a cubic in at most two variables splits into linear factors";
    return r;
  }
  const PrimeField F(prime);
  const FieldCubic<PrimeField> fc(f, F);
  Rng rng(seed);
  const auto monos = all_cubic_monomials(3);
  for (std::size_t k = 0; k < planes; ++k) {
    std::array<Vec<PrimeField>, 3> v;
    for (auto& x : v) x = random_vector(F, n, rng);
    Vec<PrimeField> c(monos.size(), 0);
    for (const auto& m : monos) {
      auto val = fc.trilinear(Span(v[m.index[0]]), Span(v[m.index[1]]), Span(v[m.index[2]]));
      c[monomial_rank(m, 3)] = F.mul(val, F.from_int(m.orderings()));
    }
    ++r.planes_tried;
    if (plane_cubic_smooth(F, c)) {
      r.verdict = Irreducibility::irreducible;
      r.witness = "smooth plane section " + std::to_string(k);
      return r;
    }
  }
  // On a hyperplane component {l = 0} the gradient is proportional to l, and
  // every line meets that component in a rational point.
  for (int line = 0; line < 8; ++line) {
    auto a = random_vector(F, n, rng);
    auto b = random_vector(F, n, rng);
    auto c = fc.along_line(Span(a), Span(b));
    if (c[0] == 0 && c[1] == 0 && c[2] == 0 && c[3] == 0) continue;
    for (auto t : roots_mod_p(F, {c[0], c[1], c[2], c[3]}, rng)) {
      Vec<PrimeField> y(n);
      for (std::size_t i = 0; i < n; ++i) y[i] = F.mul_add(t, b[i], a[i]);
      auto ell = fc.polar(Span(y));
      auto piv = std::find_if(ell.begin(), ell.end(), [](std::uint64_t x) { return x != 0; });
      if (piv == ell.end()) continue;
      const std::size_t p = static_cast<std::size_t>(piv - ell.begin());
      const auto inv = F.inv(ell[p]);
      for (auto& x : ell) x = F.mul(x, inv);
      bool contained = true;
      for (int probe = 0; probe < 4 && contained; ++probe) {
        auto z = random_vector(F, n, rng);
        std::uint64_t s = 0;
        for (std::size_t i = 0; i < n; ++i)
          if (i != p) s = F.mul_add(ell[i], z[i], s);
        z[p] = F.neg(s);
        contained = fc.eval(Span(z)) == 0;
      }
      if (!contained) continue;
      std::ostringstream w;
      w << "linear factor l = (";
      for (std::size_t i = 0; i < n; ++i) {
        if (i) w << ", ";
        auto q = rational_reconstruct(mpz_class(static_cast<unsigned long>(ell[i])), mpz_class(static_cast<unsigned long>(prime)));
        if (q) w << q->get_str();
        else w << ell[i] << " mod " << prime;
      }
      w << ")";
      r.verdict = Irreducibility::reducible;
      r.witness = w.str();
      return r;
    }
  }
  r.verdict = Irreducibility::unverified;
  r.witness = "no smooth plane section and no linear factor found";
  return r;
}

}  // namespace hessiana
