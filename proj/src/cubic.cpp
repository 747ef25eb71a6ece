#include "hessiana/cubic.hpp"

#include <cstdio>
#include <sstream>

#include "hessiana/cubic_io.hpp"

namespace hessiana {

Monomial Monomial::of(std::size_t a, std::size_t b, std::size_t c) {
  if (a > 0xFFFF || b > 0xFFFF || c > 0xFFFF) throw ContractError("variable index too large");
  std::array<std::uint16_t, 3> v{static_cast<std::uint16_t>(a), static_cast<std::uint16_t>(b),
                                 static_cast<std::uint16_t>(c)};
  std::sort(v.begin(), v.end());
  return Monomial{v};
}

int Monomial::orderings() const {
  if (index[0] == index[2]) return 1;
  if (index[0] == index[1] || index[1] == index[2]) return 3;
  return 6;
}

std::vector<int> Monomial::exponents(std::size_t n_vars) const {
  std::vector<int> e(n_vars, 0);
  for (auto i : index) ++e.at(i);
  return e;
}

std::size_t cubic_monomial_count(std::size_t n) { return n * (n + 1) * (n + 2) / 6; }

std::size_t monomial_rank(const Monomial& m, std::size_t n) {
  // Count sorted triples lexicographically smaller than m.
  const std::size_t i = m.index[0], j = m.index[1], k = m.index[2];
  std::size_t r = 0;
  for (std::size_t a = 0; a < i; ++a) {
    const std::size_t rest = n - a;  // choices for (b, c) with a <= b <= c < n
    r += rest * (rest + 1) / 2;
  }
  for (std::size_t b = i; b < j; ++b) r += n - b;
  r += k - j;
  return r;
}

std::vector<Monomial> all_cubic_monomials(std::size_t n) {
  std::vector<Monomial> out;
  out.reserve(cubic_monomial_count(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a; b < n; ++b)
      for (std::size_t c = b; c < n; ++c) out.push_back(Monomial::of(a, b, c));
  return out;
}

namespace {

mpq_class normalize(const mpq_class& c, const FieldSpec& field) {
  if (!field.is_prime()) return c;
  PrimeField F(field.prime);
  return F.to_rational(F.from_rational(c));
}

}  // namespace

CubicForm::CubicForm(std::size_t n_vars, FieldSpec field, Terms terms)
    : n_vars_(n_vars), field_(field), cache_(std::make_shared<Cache>()) {
  if (field_.is_prime()) FieldSpec::modular(field_.prime);
  for (auto& [m, c] : terms) {
    if (m.index[2] >= n_vars_) throw ContractError("monomial uses a variable beyond n_vars");
    mpq_class v = normalize(c, field_);
    if (sgn(v) != 0) terms_.emplace(m, v);
  }
}

mpq_class CubicForm::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? mpq_class(0) : it->second;
}

const TrilinearForm& CubicForm::trilinear() const {
  std::call_once(cache_->once, [this] { cache_->trilinear = std::make_unique<TrilinearForm>(polarize(*this)); });
  return *cache_->trilinear;
}

std::uint64_t CubicForm::content_hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : serialize_cubic(*this)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string CubicForm::hash_hex() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(content_hash()));
  return buf;
}

CubicForm CubicForm::scaled(const mpq_class& mu) const {
  Terms t;
  for (const auto& [m, c] : terms_) t.emplace(m, c * mu);
  return CubicForm(n_vars_, field_, std::move(t));
}

CubicForm CubicForm::reduced_mod(std::uint64_t p) const {
  if (field_.is_prime() && field_.prime != p)
    throw ContractError("cannot reduce a form over " + field_.to_string() + " modulo " + std::to_string(p));
  return CubicForm(n_vars_, FieldSpec::modular(p), terms_);
}

mpq_class TrilinearForm::value(std::size_t i, std::size_t j, std::size_t k) const {
  auto it = values_.find(Monomial::of(i, j, k));
  return it == values_.end() ? mpq_class(0) : it->second;
}

TrilinearForm polarize(const CubicForm& f) {
  if (f.field().is_prime() && f.field().prime <= 3) throw ContractError("polarization needs characteristic > 3");
  std::map<Monomial, mpq_class> values;
  for (const auto& [m, c] : f.terms()) values.emplace(m, normalize(c / m.orderings(), f.field()));
  return TrilinearForm(f.n_vars(), f.field(), std::move(values));
}

mpq_class eval_cubic(const CubicForm& f, std::span<const mpq_class> w) {
  if (w.size() != f.n_vars()) throw ContractError("eval_cubic: dimension mismatch");
  mpq_class s = 0;
  for (const auto& [m, c] : f.terms()) s += c * w[m.index[0]] * w[m.index[1]] * w[m.index[2]];
  return normalize(s, f.field());
}

std::vector<mpq_class> polar_covector(const TrilinearForm& t, std::span<const mpq_class> w) {
  if (w.size() != t.n_vars()) throw ContractError("polar_covector: dimension mismatch");
  std::vector<mpq_class> out(t.n_vars(), 0);
  for (const auto& [m, v] : t.values()) {
    std::array<std::uint16_t, 3> p = m.index;
    do {
      out[p[2]] += v * w[p[0]] * w[p[1]];
    } while (std::next_permutation(p.begin(), p.end()));
  }
  for (auto& x : out) x = normalize(x, t.field());
  return out;
}

CubicForm restrict_form(const CubicForm& f, const std::vector<std::vector<mpq_class>>& basis) {
  const std::size_t n = f.n_vars();
  const std::size_t m = basis.size();
  if (m > n) throw ContractError("restrict: more basis vectors than variables");
  for (const auto& b : basis)
    if (b.size() != n) throw ContractError("restrict: basis vector has wrong length");

  // Independence over the form's field.
  std::vector<SparseMatrix<RationalField>::Triplet> trip;
  for (std::size_t l = 0; l < m; ++l)
    for (std::size_t x = 0; x < n; ++x)
      if (sgn(basis[l][x]) != 0) trip.push_back({l, x, basis[l][x]});
  auto bm = SparseMatrix<RationalField>::from_triplets({}, m, n, std::move(trip));
  const std::size_t r = f.field().is_prime() ? rank(reduce_mod(bm, PrimeField(f.field().prime))) : rank(bm);
  if (r != m) throw ContractError("restrict: basis vectors are linearly dependent");

  // w_x = sum_l basis[l][x] y_l
  std::vector<std::vector<std::pair<std::uint16_t, mpq_class>>> lin(n);
  for (std::size_t l = 0; l < m; ++l)
    for (std::size_t x = 0; x < n; ++x)
      if (sgn(basis[l][x]) != 0) lin[x].push_back({static_cast<std::uint16_t>(l), basis[l][x]});

  CubicForm::Terms out;
  for (const auto& [mono, c] : f.terms()) {
    const auto& la = lin[mono.index[0]];
    const auto& lb = lin[mono.index[1]];
    const auto& lc = lin[mono.index[2]];
    for (const auto& [ia, ca] : la) {
      mpq_class pa = c * ca;
      for (const auto& [ib, cb] : lb) {
        mpq_class pb = pa * cb;
        for (const auto& [ic, cc] : lc) out[Monomial::of(ia, ib, ic)] += pb * cc;
      }
    }
  }
  return CubicForm(m, f.field(), std::move(out));
}

CubicForm transform(const CubicForm& f, const std::vector<std::vector<mpq_class>>& columns) {
  if (columns.size() != f.n_vars()) throw ContractError("transform: matrix must be square");
  return restrict_form(f, columns);
}

}  // namespace hessiana
