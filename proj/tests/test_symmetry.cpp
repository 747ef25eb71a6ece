#include <sstream>

#include "doctest.h"

#include "hessiana/jordan.hpp"
#include "hessiana/registry.hpp"
#include "hessiana/symmetry.hpp"
#include "oracle.hpp"

using namespace hessiana;

namespace {

const PrimeField F(kDefaultPrime);

ProlongationCandidate<PrimeField> to_prime(const ProlongationCandidate<RationalField>& c, const PrimeField& field) {
  auto out = ProlongationCandidate<PrimeField>::zero(field, c.n_vars);
  for (std::size_t k = 0; k < c.tensor.size(); ++k) out.tensor[k] = field.from_rational(c.tensor[k]);
  for (std::size_t k = 0; k < c.lambda.size(); ++k) out.lambda[k] = field.from_rational(c.lambda[k]);
  return out;
}

std::vector<std::vector<mpq_class>> random_invertible(Rng& rng, std::size_t n) {
  // identity plus a strictly upper part, then a row swap: invertible by construction
  std::vector<std::vector<mpq_class>> cols(n, std::vector<mpq_class>(n, 0));
  for (std::size_t c = 0; c < n; ++c) {
    cols[c][c] = 1;
    for (std::size_t r = 0; r < c; ++r) cols[c][r] = static_cast<long>(rng.uniform_int(-3, 3));
  }
  const std::size_t a = rng.below(n), b = rng.below(n);
  for (auto& col : cols) std::swap(col[a], col[b]);
  return cols;
}

std::string severi(int i) { return "severi:" + std::to_string(i); }

}  // namespace

TEST_CASE("aut basis") {
  for (const auto& name : {"severi:1", "severi:2", "fermat:3", "gordan-noether"}) {
    const auto f = named_form(name).form;
    const std::size_t n = f.n_vars();
    const auto basis = aut_basis(f, F);
    CHECK(basis.size() == aut_dimension(f, F));
    for (const auto& g : basis) CHECK(check_aut(f, g, F));
    // the identity scales F(w,w,w) by 1
    AutCandidate<PrimeField> id{n, Vec<PrimeField>(n * n, 0), 1};
    for (std::size_t k = 0; k < n; ++k) id.g[k * n + k] = 1;
    CHECK(check_aut(f, id, F));
    AutCandidate<PrimeField> wrong = id;
    wrong.c = 2;
    CHECK_FALSE(check_aut(f, wrong, F));
  }
}

TEST_CASE("aut dimension against an independent assembly") {
  const auto fermat3 = named_form("fermat:3").form;
  CHECK(aut_dimension(fermat3, PrimeField(kSecondPrime)) == 1);
  CHECK(oracle::aut_dimension(fermat3, kSecondPrime) == 1);
  const std::size_t expected[] = {9, 17, 36};
  for (int i = 1; i <= 3; ++i) {
    const auto f = named_form(severi(i)).form;
    const auto d = aut_dimension(f, F);
    CHECK(d == expected[i - 1]);
    CHECK(d == oracle::aut_dimension(f, kSecondPrime));
  }
  for (const auto& name : {"severi:1:section:O1", "severi:2:section:O2", "fermat:4", "gordan-noether"}) {
    const auto f = named_form(name).form;
    CHECK_MESSAGE(aut_dimension(f, F) == oracle::aut_dimension(f, kSecondPrime), name);
  }
}

TEST_CASE("aut1 dimension against an independent assembly") {
  const std::size_t expected[] = {6, 9, 15};
  for (int i = 1; i <= 3; ++i) {
    const auto f = named_form(severi(i)).form;
    CHECK(aut1_dimension(f, F) == expected[i - 1]);
    CHECK(aut1_dimension(f, F) == SeveriIndex(i).n_vars());
    CHECK(oracle::aut1_dimension(f, kSecondPrime) == expected[i - 1]);
  }
  for (int i = 1; i <= 2; ++i) {
    const auto f = named_form(severi(i) + ":section:O3").form;
    CHECK(aut1_dimension(f, F) == 0);
    CHECK(oracle::aut1_dimension(f, kSecondPrime) == 0);
  }
  CHECK(aut1_dimension(named_form("fermat:4").form, F) == 0);
  CHECK(oracle::aut1_dimension(named_form("fermat:4").form, kSecondPrime) == 0);
  const auto gn = named_form("gordan-noether").form;
  CHECK(aut1_dimension(gn, F) == oracle::aut1_dimension(gn, kSecondPrime));
}

TEST_CASE("reduced and direct routes agree") {
  for (const auto& name : registry_examples()) {
    const auto nf = named_form(name);
    if (nf.form.n_vars() > 15) continue;
    CHECK_MESSAGE(aut1_dimension(nf.form, F, Aut1Route::reduced) == aut1_dimension(nf.form, F, Aut1Route::direct),
                  name);
  }
  const CubicForm zero(3, FieldSpec::rational(), {});
  CHECK_THROWS_AS(aut_basis(zero, F), ContractError);
  CHECK_THROWS_AS(aut1_basis(zero, F), ContractError);
}

TEST_CASE("dimension certificates") {
  const std::uint64_t primes[] = {kDefaultPrime, kSecondPrime};
  const auto f = named_form("severi:2").form;
  const auto a = aut_dim(f, primes);
  CHECK(a.agree);
  CHECK(a.value == 17);
  CHECK(a.dims.size() == 2);
  const auto b = aut1_dim(f, primes);
  CHECK(b.agree);
  CHECK(b.value == 9);
  CHECK(b.route == "reduced");
  CHECK(aut1_dim(f, primes, Aut1Route::direct).route == "direct");
  CHECK_THROWS_AS(aut_dim(f, std::span<const std::uint64_t>{}), ContractError);
}

TEST_CASE("prolongation identities") {
  for (int i = 1; i <= 3; ++i) {
    const auto f = named_form(severi(i)).form;
    const auto explicit_q = explicit_prolongation(SeveriIndex(i));
    const auto v = verify_identities(f, explicit_q, RationalField{});
    CHECK(v.pass());
    CHECK(v.first_failure.empty());
    const auto explicit_p = to_prime(explicit_q, F);
    CHECK(verify_identities(f, explicit_p, F).pass());
    const auto basis = aut1_basis(f, F);
    for (const auto& c : basis) CHECK(verify_identities(f, c, F).pass());
    CHECK(in_span(F, basis, explicit_p));
  }
  const auto f = named_form("severi:1").form;
  CHECK(verify_identities(f, ProlongationCandidate<PrimeField>::zero(F, 6), F).pass());

  // A(u, w) = (u_0 w + w_0 u) / 2 is not a prolongation
  auto bad = ProlongationCandidate<PrimeField>::zero(F, 6);
  const auto half = F.inv(2);
  bad.at(0, 0, 0) = 1;
  for (std::size_t i = 1; i < 6; ++i) bad.at(i, 0, i) = half;
  bad.lambda[0] = 1;
  const auto v = verify_identities(f, bad, F);
  CHECK_FALSE(v.ef);
  CHECK_FALSE(v.pass());
  CHECK(v.first_failure.find("F(A(u,w),w,w) = lambda(u) f(w) fails") == 0);
  CHECK_FALSE(in_span(F, aut1_basis(f, F), bad));

  auto wrong_size = ProlongationCandidate<PrimeField>::zero(F, 5);
  CHECK_THROWS_AS(verify_identities(f, wrong_size, F), ContractError);
}

TEST_CASE("slices of prolongations are symmetries") {
  Rng rng(21);
  for (int i = 1; i <= 3; ++i) {
    const auto f = named_form(severi(i)).form;
    const std::size_t n = f.n_vars();
    for (const auto& c : aut1_basis(f, F)) {
      for (int t = 0; t < 3; ++t) {
        Vec<PrimeField> u(n);
        for (auto& x : u) x = F.random(rng);
        AutCandidate<PrimeField> g{n, c.slice(F, u), 0};
        for (std::size_t a = 0; a < n; ++a) g.c = F.mul_add(c.lambda[a], u[a], g.c);
        CHECK(check_aut(f, g, F));
      }
    }
  }
}

TEST_CASE("dimensions are invariant under coordinate change") {
  Rng rng(8);
  for (const auto& name : {"severi:1", "severi:2", "severi:1:section:O2", "gordan-noether", "fermat:4"}) {
    const auto f = named_form(name).form;
    const auto a = aut_dimension(f, F);
    const auto a1 = aut1_dimension(f, F);
    for (int t = 0; t < 5; ++t) {
      const auto g = transform(f, random_invertible(rng, f.n_vars())).scaled(t + 2);
      CHECK_MESSAGE(aut_dimension(g, F) == a, name);
      CHECK_MESSAGE(aut1_dimension(g, F) == a1, name);
    }
  }
}

TEST_CASE("basis text round trip") {
  const auto f = named_form("severi:1").form;
  const auto basis = aut1_basis(f, F);
  const auto text = export_basis(F, basis);
  CHECK(text.rfind("prolongation n_vars=6", 0) == 0);
  std::istringstream in(text);
  const auto back = parse_basis(F, in);
  REQUIRE(back.size() == basis.size());
  for (std::size_t k = 0; k < basis.size(); ++k) CHECK(back[k].coordinates() == basis[k].coordinates());

  const RationalField Q;
  const auto qbasis = aut1_basis(f, Q);
  CHECK(qbasis.size() == 6);
  for (const auto& c : qbasis) CHECK(verify_identities(f, c, Q).pass());
  std::istringstream qin(export_basis(Q, qbasis));
  const auto qback = parse_basis(Q, qin);
  REQUIRE(qback.size() == qbasis.size());
  for (std::size_t k = 0; k < qbasis.size(); ++k) CHECK(qback[k].coordinates() == qbasis[k].coordinates());

  std::istringstream mismatch(text);
  CHECK_THROWS(parse_basis(Q, mismatch));
  std::istringstream garbage("prolongation n_vars=2 field=Q count=1\ncandidate 0\nnonsense\n");
  CHECK_THROWS(parse_basis(Q, garbage));
}
