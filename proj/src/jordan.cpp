#include "hessiana/jordan.hpp"

#include <array>
#include <memory>

namespace hessiana {

CompositionAlgebra::CompositionAlgebra(std::size_t dim) : dim_(dim) {
  if (dim == 1) {
    table_ = {{0, 1}};
    norm_ = {1};
    return;
  }
  const auto& half = split(dim / 2);
  const std::size_t d = dim / 2;
  table_.resize(dim * dim);
  norm_.resize(dim);
  auto cs = [](std::size_t j) { return j == 0 ? 1 : -1; };
  for (std::size_t i = 0; i < d; ++i) {
    norm_[i] = half.norm_sign(i);
    norm_[d + i] = -half.norm_sign(i);
    for (std::size_t j = 0; j < d; ++j) {
      const auto ij = half.basis_product(i, j);
      const auto ji = half.basis_product(j, i);
      // (e_i, 0)(e_j, 0) = (e_i e_j, 0)
      table_[i * dim + j] = ij;
      // (e_i, 0)(0, e_j) = (0, e_j e_i)
      table_[i * dim + d + j] = {static_cast<std::uint8_t>(d + ji.index), ji.sign};
      // (0, e_i)(e_j, 0) = (0, e_i conj(e_j))
      table_[(d + i) * dim + j] = {static_cast<std::uint8_t>(d + ij.index), static_cast<std::int8_t>(ij.sign * cs(j))};
      // (0, e_i)(0, e_j) = (conj(e_j) e_i, 0)
      table_[(d + i) * dim + d + j] = {ji.index, static_cast<std::int8_t>(ji.sign * cs(j))};
    }
  }
}

const CompositionAlgebra& CompositionAlgebra::split(std::size_t dim) {
  switch (dim) {
    case 1: {
      static const CompositionAlgebra a(1);
      return a;
    }
    case 2: {
      static const CompositionAlgebra a(2);
      return a;
    }
    case 4: {
      static const CompositionAlgebra a(4);
      return a;
    }
    case 8: {
      static const CompositionAlgebra a(8);
      return a;
    }
  }
  throw ContractError("composition algebra dimension must be 1, 2, 4 or 8");
}

void CompositionAlgebra::check(std::size_t size) const {
  if (size != dim_)
    throw ContractError("element of dimension " + std::to_string(size) + " in algebra of dimension " + std::to_string(dim_));
}

SeveriIndex::SeveriIndex(int index) : i(index) {
  if (index < 1 || index > 4) throw ContractError("Severi index must be 1, 2, 3 or 4");
}

CubicForm severi_cubic(SeveriIndex idx, const FieldSpec& field) {
  const auto& alg = idx.algebra();
  const std::size_t d = alg.dim();
  CubicForm::Terms terms;
  terms[Monomial::of(0, 1, 2)] += 1;
  for (int r = 0; r < 3; ++r)
    for (std::size_t k = 0; k < d; ++k) {
      const std::size_t x = jordan_x_index(d, r, k);
      terms[Monomial::of(r, x, x)] -= alg.norm_sign(k);
    }
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      const auto p = alg.basis_product(i, j);
      for (std::size_t k = 0; k < d; ++k) {
        const auto q = alg.basis_product(p.index, k);
        if (q.index != 0) continue;
        terms[Monomial::of(jordan_x_index(d, 0, i), jordan_x_index(d, 1, j), jordan_x_index(d, 2, k))] +=
            2 * p.sign * q.sign;
      }
    }
  return CubicForm(idx.n_vars(), field, std::move(terms));
}

std::vector<mpq_class> orbit_hyperplane(SeveriIndex idx, int r) {
  if (r < 1 || r > 3) throw ContractError("orbit index must be 1, 2 or 3");
  std::vector<mpq_class> ell(idx.n_vars(), 0);
  for (int k = 0; k < r; ++k) ell[k] = 1;
  return ell;
}

ProlongationCandidate<RationalField> explicit_prolongation_chart(SeveriIndex idx) {
  if (idx.i > 3) throw ContractError("explicit prolongation: only i in {1,2,3} is supported");
  const RationalField Q;
  const std::size_t n = idx.n_vars(), m = idx.n();
  auto A = ProlongationCandidate<RationalField>::zero(Q, n);
  const mpq_class half(1, 2);
  Vec<RationalField> u(m), v(m);
  // w0-block and the symmetric w0 * w1 products.
  A.at(0, 0, 0) = 1;
  for (std::size_t k = 0; k < m; ++k) A.at(1 + k, 0, 1 + k) = half;
  // sigma is bilinear: its coefficients come from unit vectors.
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a; b < m; ++b) {
      std::fill(u.begin(), u.end(), 0);
      std::fill(v.begin(), v.end(), 0);
      u[a] = 1;
      v[b] = 1;
      auto k = sigma(Q, idx, std::span<const mpq_class>(u), std::span<const mpq_class>(v));
      for (std::size_t c = 0; c < k.size(); ++c)
        if (k[c] != 0) A.at(1 + m + c, 1 + a, 1 + b) = k[c];
    }
  return A;
}

namespace {

// Jordan <-> chart changes of coordinates are signed permutations.
struct SignedPermutation {
  std::vector<std::size_t> target;
  std::vector<int> sign;
};

SignedPermutation chart_from_jordan_map(SeveriIndex idx) {
  const RationalField Q;
  const std::size_t n = idx.n_vars();
  SignedPermutation s{std::vector<std::size_t>(n), std::vector<int>(n)};
  Vec<RationalField> e(n, 0);
  for (std::size_t j = 0; j < n; ++j) {
    std::fill(e.begin(), e.end(), 0);
    e[j] = 1;
    auto c = jordan_to_chart(Q, idx, std::span<const mpq_class>(e));
    for (std::size_t t = 0; t < n; ++t)
      if (c[t] != 0) {
        s.target[j] = t;
        s.sign[j] = c[t] > 0 ? 1 : -1;
      }
  }
  return s;
}

}  // namespace

ProlongationCandidate<RationalField> explicit_prolongation(SeveriIndex idx) {
  const RationalField Q;
  const std::size_t n = idx.n_vars();
  const auto chart = explicit_prolongation_chart(idx);
  const auto P = chart_from_jordan_map(idx);
  // x_J = sum_j x_j e_j maps to chart coordinates c_{P(j)} = s_j x_j, and a
  // chart output c maps back to Jordan coordinate j via s_j c_{P(j)}.
  auto A = ProlongationCandidate<RationalField>::zero(Q, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a; b < n; ++b) {
        const auto& v = chart.at(P.target[i], P.target[a], P.target[b]);
        if (v != 0) A.at(i, a, b) = v * (P.sign[i] * P.sign[a] * P.sign[b]);
      }
  // lambda from F(A(e_a, w), w, w) = lambda_a f(w) at a point with f != 0.
  const auto f = FieldCubic<RationalField>(severi_cubic(idx, FieldSpec::rational()), Q);
  Rng rng(0x5eed + idx.i);
  Vec<RationalField> w(n);
  for (;;) {
    for (auto& z : w) z = Q.random(rng);
    if (f.eval(std::span<const mpq_class>(w)) != 0) break;
  }
  const mpq_class fw = f.eval(std::span<const mpq_class>(w));
  const auto g = f.polar(std::span<const mpq_class>(w));
  Vec<RationalField> e(n, 0);
  for (std::size_t a = 0; a < n; ++a) {
    std::fill(e.begin(), e.end(), 0);
    e[a] = 1;
    auto y = A.apply(Q, std::span<const mpq_class>(e), std::span<const mpq_class>(w));
    mpq_class s = 0;
    for (std::size_t k = 0; k < n; ++k) s += g[k] * y[k];
    A.lambda[a] = s / fw;
  }
  return A;
}

}  // namespace hessiana
