#include "doctest.h"

#include "hessiana/geometry.hpp"
#include "hessiana/jordan.hpp"
#include "hessiana/registry.hpp"
#include "oracle.hpp"

using namespace hessiana;

namespace {

using Span = std::span<const std::uint64_t>;

std::vector<std::vector<mpq_class>> random_invertible(Rng& rng, std::size_t n) {
  // unit lower times unit upper triangular: always invertible, dense enough
  std::vector<std::vector<mpq_class>> L(n, std::vector<mpq_class>(n, 0)), U = L;
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      if (r == c) {
        L[r][c] = 1;
        U[r][c] = static_cast<long>(rng.below(2) ? 1 : -1);
      } else if (r > c) {
        L[r][c] = static_cast<long>(rng.uniform_int(-2, 2));
      } else {
        U[r][c] = static_cast<long>(rng.uniform_int(-2, 2));
      }
    }
  // columns of L U
  std::vector<std::vector<mpq_class>> cols(n, std::vector<mpq_class>(n, 0));
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t k = 0; k < n; ++k) cols[c][r] += L[r][k] * U[k][c];
  return cols;
}

std::vector<mpq_class> random_covector(Rng& rng, std::size_t n) {
  std::vector<mpq_class> ell(n);
  for (auto& x : ell) x = static_cast<long>(rng.uniform_int(-9, 9));
  if (std::all_of(ell.begin(), ell.end(), [](const mpq_class& x) { return x == 0; })) ell[0] = 1;
  return ell;
}

bool is_zero_vec(const Vec<PrimeField>& v) {
  return std::all_of(v.begin(), v.end(), [](std::uint64_t x) { return x == 0; });
}

CubicForm random_cubic(Rng& rng, std::size_t n) {
  CubicForm::Terms t;
  for (const auto& m : all_cubic_monomials(n)) {
    const auto c = rng.uniform_int(-5, 5);
    if (c) t[m] = static_cast<long>(c);
  }
  return CubicForm(n, FieldSpec::rational(), std::move(t));
}

// w0 * (w1^2 + w2 w3)
CubicForm reducible_control() {
  return CubicForm(4, FieldSpec::rational(), {{Monomial::of(0, 1, 1), 1}, {Monomial::of(0, 2, 3), 1}});
}

constexpr std::uint64_t P = kDefaultPrime;

}  // namespace

TEST_CASE("sampling points") {
  const auto f4 = named_form("fermat:4");
  const PrimeField F(P);
  const FieldCubic<PrimeField> fc(f4.form, F);
  SamplerSpec on{SamplerSpec::Target::on_hypersurface, 5, 64, {}};
  for (int t = 0; t < 100; ++t) {
    on.seed = 5 + t;
    const auto y = sample_point(f4.form, F, on);
    CHECK(fc.eval(y) == 0);
    CHECK_FALSE(is_zero_vec(fc.polar(y)));
  }
  SamplerSpec amb{SamplerSpec::Target::ambient, 3, 64, {}};
  CHECK(sample_point(f4.form, F, amb).size() == 4);
  CHECK(sample_point(f4.form, F, amb) == sample_point(f4.form, F, amb));

  const auto s2 = named_form("severi:2");
  const FieldCubic<PrimeField> f2(s2.form, F);
  Rng rng(1);
  CHECK(f2.eval(rank2_point(F, SeveriIndex(2), rng)) == 0);
  SamplerSpec sing{SamplerSpec::Target::on_singular_locus, 9, 64, s2.witnesses};
  const auto v = sample_point(s2.form, F, sing);
  CHECK(is_zero_vec(f2.polar(v)));
  SamplerSpec none{SamplerSpec::Target::on_singular_locus, 9, 64, {}};
  CHECK_THROWS_AS(sample_point(s2.form, F, none), ContractError);
  // x^3 has no smooth point
  CubicForm cube(2, FieldSpec::rational(), {{Monomial::of(0, 0, 0), 1}});
  Rng r2(4);
  CHECK_THROWS_AS(sample_smooth_point(FieldCubic<PrimeField>(cube, F), r2, 8), std::runtime_error);
}

TEST_CASE("polar defect") {
  for (int i = 1; i <= 4; ++i) {
    const auto d = polar_defect(named_form("severi:" + std::to_string(i)).form, P, 17);
    CHECK(d.value == 0);
    CHECK(d.samples == 3);
    CHECK(d.prime == P);
    CHECK(d.error_bound > 0);
    CHECK(d.error_bound < 1e-20);
  }
  CHECK(polar_defect(named_form("gordan-noether").form, P, 17).value == 1);
  // a cone: a cubic in w0..w2 with w3 absent
  Rng rng(3);
  auto g = random_cubic(rng, 3);
  CubicForm cone(4, FieldSpec::rational(), g.terms());
  CHECK(polar_defect(cone, P, 17).value >= 1);
  CHECK_THROWS_AS(polar_defect(cone, P, 17, 0), ContractError);
  const CubicForm zero(3, FieldSpec::rational(), {});
  CHECK(polar_defect(zero, P, 1).value == 3);
  CHECK_THROWS_AS(dual_defect(zero, P, 1), ContractError);
}

TEST_CASE("dual defect") {
  const std::size_t expected[] = {2, 3, 5, 9};
  for (int i = 1; i <= 4; ++i) {
    const auto d = dual_defect(named_form("severi:" + std::to_string(i)).form, P, 23);
    CHECK(d.value == expected[i - 1]);
    CHECK(d.value == SeveriIndex(i).n() / 2 + 1);
    CHECK(d.coranks.size() == 3);
  }
  CHECK(dual_defect(named_form("fermat:4").form, P, 23).value == 0);
  CHECK(dual_defect(named_form("severi:1:section:O2").form, P, 23).value > 0);
}

TEST_CASE("corank profiles") {
  auto profile = [](const std::string& name) {
    const auto nf = named_form(name);
    WitnessSet w;
    const WitnessSet* wp = nullptr;
    if (nf.witnesses) {
      w = nf.witnesses(P, 20, 77);
      wp = &w;
    }
    return corank_profile(nf.form, P, 31, 3, wp);
  };
  auto p1 = profile("severi:1");
  CHECK(p1.generic_corank == 0);
  CHECK(p1.on_Y_corank == 2);
  REQUIRE(p1.on_singular_corank);
  CHECK(*p1.on_singular_corank == 3);
  auto p4 = profile("severi:4");
  CHECK(p4.generic_corank == 0);
  CHECK(p4.on_Y_corank == 9);
  REQUIRE(p4.on_singular_corank);
  CHECK(*p4.on_singular_corank == 17);
  auto f4 = profile("fermat:4");
  CHECK(f4.generic_corank == 0);
  CHECK(f4.on_Y_corank == 0);
  CHECK_FALSE(f4.on_singular_corank);
  for (const auto& name : registry_examples()) CHECK_MESSAGE(profile(name).monotone(), name);
}

TEST_CASE("defect relations across the registry") {
  Rng rng(100);
  for (const auto& name : registry_examples()) {
    const auto nf = named_form(name);
    const auto pd = polar_defect(nf.form, P, 41);
    const auto dd = dual_defect(nf.form, P, 42);
    CHECK_MESSAGE(dd.value >= pd.value, name);
    if (nf.severi_index && !nf.section_covector) {
      CHECK(pd.value == 0);
      CHECK(dd.value == pd.value + SeveriIndex(*nf.severi_index).n() / 2 + 1);
    }
    // invariance under coordinate change and scaling
    const int trials = nf.form.n_vars() > 15 ? 5 : 20;
    for (int t = 0; t < trials; ++t) {
      const auto g = random_invertible(rng, nf.form.n_vars());
      const auto moved = transform(nf.form, g).scaled(static_cast<long>(rng.uniform_int(1, 9)) * (t % 2 ? -1 : 1));
      CHECK_MESSAGE(polar_defect(moved, P, 43 + t).value == pd.value, name);
    }
  }
}

TEST_CASE("smoothness at witnesses") {
  const auto s1 = named_form("severi:1");
  const auto w = s1.witnesses(P, 50, 8);
  REQUIRE(w.points.size() == 50);
  const auto v = smooth_witness(s1.form, w);
  CHECK(v.smooth);
  CHECK(v.codimension == 3);
  CHECK(v.offending.empty());
  CHECK(v.witness_count == 50);

  for (int i = 1; i <= 2; ++i) {
    const auto sec = named_form("severi:" + std::to_string(i) + ":section:O2");
    const auto ws = sec.witnesses(P, 20, 8);
    const auto sv = smooth_witness(sec.form, ws);
    CHECK_FALSE(sv.smooth);
    CHECK_FALSE(sv.offending.empty());
    CHECK(sv.ranks[0] != sv.ranks[sv.offending[0]]);
  }

  WitnessSet one{w.prime, {w.points[0]}, "single"};
  CHECK(smooth_witness(s1.form, one).smooth);

  const PrimeField F(P);
  Rng rng(2);
  WitnessSet bad{P, {rank2_point(F, SeveriIndex(1), rng)}, "smooth point"};
  CHECK_THROWS_AS(smooth_witness(s1.form, bad), ContractError);
}

TEST_CASE("secant containment") {
  for (int i = 1; i <= 4; ++i) {
    const auto nf = named_form("severi:" + std::to_string(i));
    const auto v = secant_check(nf.form, nf.witnesses(P, 20, 3), 200, 4);
    CHECK(v.pass);
    CHECK_FALSE(v.vacuous);
    CHECK(v.trials == 200);
    CHECK(v.evaluations == 1000);
  }
  const auto empty = secant_check(named_form("fermat:4").form, WitnessSet{P, {}, "none"}, 200, 4);
  CHECK(empty.pass);
  CHECK(empty.vacuous);

  // reducible control with witnesses on {w0 = 0} and the quadric
  const auto f = reducible_control();
  const PrimeField F(P);
  const FieldCubic<PrimeField> fc(f, F);
  Rng rng(5);
  WitnessSet w{P, {}, "intersection"};
  while (w.points.size() < 20) {
    const auto a = F.random_nonzero(rng), b = F.random_nonzero(rng);
    // w1^2 + w2 w3 = 0 with w2 = b: w3 = -a^2 / b
    Vec<PrimeField> y{0, a, b, F.neg(F.div(F.mul(a, a), b))};
    REQUIRE(is_zero_vec(fc.polar(y)));
    w.points.push_back(y);
  }
  CHECK(secant_check(f, w, 200, 6).pass);
}

TEST_CASE("hyperplane sections") {
  Rng rng(7);
  for (int i = 1; i <= 4; ++i) {
    const auto f = named_form("severi:" + std::to_string(i)).form;
    for (int t = 0; t < 50; ++t) {
      const auto sec = hyperplane_section(f, random_covector(rng, f.n_vars()));
      CHECK(sec.form.n_vars() == f.n_vars() - 1);
      CHECK(polar_defect(sec.form, P, 50 + t).value == 0);
    }
  }
  const auto s1 = named_form("severi:1").form;
  CHECK(polar_defect(hyperplane_section(s1, orbit_hyperplane(SeveriIndex(1), 1)).form, P, 5).value == 1);

  // seeded cone: drop by exactly one along the cone direction
  for (int t = 0; t < 5; ++t) {
    const auto g = random_cubic(rng, 4);
    CubicForm cone(5, FieldSpec::rational(), g.terms());
    std::vector<mpq_class> ell(5, 0);
    ell[4] = 1;
    const auto before = polar_defect(cone, P, 60).value;
    const auto after = polar_defect(hyperplane_section(cone, ell).form, P, 61).value;
    CHECK(before == 1);
    CHECK(after + 1 == before);
  }

  std::vector<mpq_class> zero(6, 0);
  CHECK_THROWS_AS(hyperplane_section(s1, zero), ContractError);
  std::vector<mpq_class> shortv(5, 1);
  CHECK_THROWS_AS(hyperplane_section(s1, shortv), ContractError);

  // restriction to Ker l with the pivot dropped
  std::vector<mpq_class> ell{0, 2, -1, 0, 0, 0};
  const auto sec = hyperplane_section(s1, ell);
  CHECK(sec.pivot == 1);
  for (const auto& b : sec.basis) {
    mpq_class s = 0;
    for (int k = 0; k < 6; ++k) s += b[k] * ell[k];
    CHECK(s == 0);
  }
}

TEST_CASE("section witnesses") {
  const PrimeField F(P);
  const auto ell = orbit_hyperplane(SeveriIndex(2), 3);
  const auto nf = named_form("severi:2:section:O3");
  const auto w = nf.witnesses(P, 10, 1);
  CHECK(w.points.size() == 10);
  const FieldCubic<PrimeField> fc(nf.form, PrimeField(w.prime));
  for (const auto& v : w.points) {
    CHECK(v.size() == 8);
    CHECK(is_zero_vec(fc.polar(v)));
  }
  Vec<PrimeField> e(9, 0);
  for (std::size_t k = 0; k < 9; ++k)
    if (ell[k] != 0) {
      e[k] = 1;
      break;
    }
  WitnessSet off{P, {e}, "off"};
  CHECK_THROWS_AS(section_witnesses(off, ell), ContractError);
}

TEST_CASE("Euler identity at sampled smooth points") {
  const PrimeField F(P);
  for (const auto& name : registry_examples()) {
    const auto nf = named_form(name);
    const FieldCubic<PrimeField> fc(nf.form, F);
    const std::size_t n = nf.form.n_vars();
    Rng rng(11);
    for (int t = 0; t < 5; ++t) {
      const auto y = sample_smooth_point(fc, rng);
      const auto h = fc.hessian(y);
      const auto g = fc.gradient(y);
      CHECK_FALSE(is_zero_vec(g));
      for (std::size_t a = 0; a < n; ++a) {
        std::uint64_t s = 0;
        for (std::size_t b = 0; b < n; ++b) s = F.mul_add(h[a * n + b], y[b], s);
        CHECK(s == F.add(g[a], g[a]));
      }
    }
  }
}

TEST_CASE("plane cubic smoothness") {
  const PrimeField F(P);
  auto coeffs = [&](const CubicForm& f) { return coefficient_vector(f, F); };
  const CubicForm fermat3(3, FieldSpec::rational(),
                          {{Monomial::of(0, 0, 0), 1}, {Monomial::of(1, 1, 1), 1}, {Monomial::of(2, 2, 2), 1}});
  CHECK(plane_cubic_smooth(F, coeffs(fermat3)));
  // nodal: y^2 z - x^3 - x^2 z
  const CubicForm nodal(3, FieldSpec::rational(),
                        {{Monomial::of(1, 1, 2), 1}, {Monomial::of(0, 0, 0), -1}, {Monomial::of(0, 0, 2), -1}});
  CHECK_FALSE(plane_cubic_smooth(F, coeffs(nodal)));
  // cuspidal: y^2 z - x^3
  const CubicForm cusp(3, FieldSpec::rational(), {{Monomial::of(1, 1, 2), 1}, {Monomial::of(0, 0, 0), -1}});
  CHECK_FALSE(plane_cubic_smooth(F, coeffs(cusp)));
  // smooth Weierstrass: y^2 z - x^3 - x z^2 - z^3 (discriminant -4 - 27 != 0)
  const CubicForm ell(3, FieldSpec::rational(),
                      {{Monomial::of(1, 1, 2), 1}, {Monomial::of(0, 0, 0), -1}, {Monomial::of(0, 2, 2), -1},
                       {Monomial::of(2, 2, 2), -1}});
  CHECK(plane_cubic_smooth(F, coeffs(ell)));
  const CubicForm triangle(3, FieldSpec::rational(), {{Monomial::of(0, 1, 2), 1}});
  CHECK_FALSE(plane_cubic_smooth(F, coeffs(triangle)));
  const CubicForm conic_line(3, FieldSpec::rational(), {{Monomial::of(0, 0, 0), 1}, {Monomial::of(0, 1, 2), 1}});
  CHECK_FALSE(plane_cubic_smooth(F, coeffs(conic_line)));
  CHECK_THROWS_AS(plane_cubic_smooth(F, Vec<PrimeField>(9, 0)), ContractError);
}

TEST_CASE("irreducibility heuristic") {
  auto verdict = [](const CubicForm& f) { return irreducible_heuristic(f, P, 99); };
  CHECK(verdict(named_form("fermat:4").form).verdict == Irreducibility::irreducible);
  CHECK(verdict(named_form("severi:2").form).verdict == Irreducibility::irreducible);
  for (int i = 1; i <= 4; ++i)
    CHECK(verdict(named_form("severi:" + std::to_string(i)).form).verdict == Irreducibility::irreducible);
  const auto r = verdict(reducible_control());
  CHECK(r.verdict == Irreducibility::reducible);
  CHECK(r.witness == "linear factor l = (1, 0, 0, 0)");
  CHECK(verdict(named_form("fermat:2").form).verdict == Irreducibility::reducible);
  CHECK(to_string(Irreducibility::unverified) == "unverified");
}
