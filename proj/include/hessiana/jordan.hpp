#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hessiana/cubic.hpp"
#include "hessiana/field.hpp"
#include "hessiana/matrix.hpp"
#include "hessiana/prolongation.hpp"

namespace hessiana {

/// Split composition algebra of dimension 1, 2, 4 or 8 obtained by repeated
/// Cayley-Dickson doubling (a,b)(c,d) = (ac + d'b, da + bc') with c' the
/// conjugate. The basis is orthogonal for the norm, n(e_k) = +-1.
class CompositionAlgebra {
 public:
  struct Product {
    std::uint8_t index;
    std::int8_t sign;
  };

  static const CompositionAlgebra& split(std::size_t dim);

  std::size_t dim() const { return dim_; }
  Product basis_product(std::size_t i, std::size_t j) const { return table_[i * dim_ + j]; }
  int norm_sign(std::size_t k) const { return norm_[k]; }

  template <class F>
  Vec<F> mul(const F& field, std::span<const typename F::value_type> a, std::span<const typename F::value_type> b) const {
    check(a.size());
    check(b.size());
    Vec<F> out(dim_, field.zero());
    for (std::size_t i = 0; i < dim_; ++i) {
      if (field.is_zero(a[i])) continue;
      for (std::size_t j = 0; j < dim_; ++j) {
        if (field.is_zero(b[j])) continue;
        const auto p = basis_product(i, j);
        auto t = field.mul(a[i], b[j]);
        out[p.index] = p.sign > 0 ? field.add(out[p.index], t) : field.sub(out[p.index], t);
      }
    }
    return out;
  }

  template <class F>
  Vec<F> conj(const F& field, std::span<const typename F::value_type> a) const {
    check(a.size());
    Vec<F> out(a.begin(), a.end());
    for (std::size_t k = 1; k < dim_; ++k) out[k] = field.neg(out[k]);
    return out;
  }

  /// Symmetric bilinear form with n(x, x) = n(x).
  template <class F>
  typename F::value_type norm_polar(const F& field, std::span<const typename F::value_type> a,
                                    std::span<const typename F::value_type> b) const {
    check(a.size());
    check(b.size());
    auto s = field.zero();
    for (std::size_t k = 0; k < dim_; ++k) {
      auto t = field.mul(a[k], b[k]);
      s = norm_[k] > 0 ? field.add(s, t) : field.sub(s, t);
    }
    return s;
  }

  template <class F>
  typename F::value_type norm(const F& field, std::span<const typename F::value_type> a) const {
    return norm_polar(field, a, a);
  }

  template <class F>
  typename F::value_type trace(const F& field, std::span<const typename F::value_type> a) const {
    check(a.size());
    return field.add(a[0], a[0]);
  }

 private:
  explicit CompositionAlgebra(std::size_t dim);
  void check(std::size_t size) const;

  std::size_t dim_;
  std::vector<Product> table_;
  std::vector<int> norm_;
};

/// i in {1,2,3,4}; n = 2^i, N = 3n/2 + 2, n_vars = N + 1.
struct SeveriIndex {
  int i = 1;

  explicit SeveriIndex(int index);
  std::size_t n() const { return std::size_t{1} << i; }
  std::size_t N() const { return 3 * n() / 2 + 2; }
  std::size_t n_vars() const { return N() + 1; }
  std::size_t algebra_dim() const { return n() / 2; }
  const CompositionAlgebra& algebra() const { return CompositionAlgebra::split(algebra_dim()); }
};

// Jordan coordinates: [a1, a2, a3, x1 (d), x2 (d), x3 (d)] with
//   A = [[a1, x3, x2'], [x3', a2, x1], [x2, x1', a3]].
template <class F>
struct HermitianJordanElement {
  std::array<typename F::value_type, 3> alpha{};
  std::array<Vec<F>, 3> x;

  static HermitianJordanElement from_coordinates(std::size_t d, std::span<const typename F::value_type> v) {
    if (v.size() != 3 + 3 * d) throw ContractError("Jordan coordinate vector has wrong length");
    HermitianJordanElement A;
    for (int r = 0; r < 3; ++r) {
      A.alpha[r] = v[r];
      A.x[r].assign(v.begin() + 3 + r * d, v.begin() + 3 + (r + 1) * d);
    }
    return A;
  }

  static HermitianJordanElement diagonal(const F& field, std::size_t d, typename F::value_type a1,
                                         typename F::value_type a2, typename F::value_type a3) {
    HermitianJordanElement A;
    A.alpha = {a1, a2, a3};
    for (auto& x : A.x) x.assign(d, field.zero());
    return A;
  }

  Vec<F> coordinates() const {
    Vec<F> v(alpha.begin(), alpha.end());
    for (const auto& xr : x) v.insert(v.end(), xr.begin(), xr.end());
    return v;
  }
};

inline std::size_t jordan_alpha_index(int r) { return static_cast<std::size_t>(r); }
inline std::size_t jordan_x_index(std::size_t d, int r, std::size_t k) { return 3 + r * d + k; }

template <class F>
typename F::value_type herm_det(const F& field, const CompositionAlgebra& alg, const HermitianJordanElement<F>& A) {
  auto det = field.mul(field.mul(A.alpha[0], A.alpha[1]), A.alpha[2]);
  for (int r = 0; r < 3; ++r) det = field.sub(det, field.mul(A.alpha[r], alg.norm(field, std::span(A.x[r]))));
  auto x12 = alg.mul(field, std::span(A.x[0]), std::span(A.x[1]));
  auto x123 = alg.mul(field, std::span(x12), std::span(A.x[2]));
  return field.add(det, alg.trace(field, std::span(x123)));
}

/// Gradient of the determinant repackaged as a Hermitian element.
template <class F>
HermitianJordanElement<F> herm_adjugate(const F& field, const CompositionAlgebra& alg, const HermitianJordanElement<F>& A) {
  const std::size_t d = alg.dim();
  HermitianJordanElement<F> G;
  for (int r = 0; r < 3; ++r) {
    const int s = (r + 1) % 3, t = (r + 2) % 3;
    G.alpha[r] = field.sub(field.mul(A.alpha[s], A.alpha[t]), alg.norm(field, std::span(A.x[r])));
  }
  Vec<F> e(d, field.zero());
  for (int r = 0; r < 3; ++r) {
    G.x[r].assign(d, field.zero());
    for (std::size_t k = 0; k < d; ++k) {
      std::fill(e.begin(), e.end(), field.zero());
      e[k] = field.one();
      std::array<std::span<const typename F::value_type>, 3> f{std::span(A.x[0]), std::span(A.x[1]), std::span(A.x[2])};
      f[r] = std::span(e);
      auto p = alg.mul(field, f[0], f[1]);
      auto q = alg.mul(field, std::span(p), f[2]);
      auto lin = alg.trace(field, std::span(q));
      auto two_a = field.add(A.alpha[r], A.alpha[r]);
      auto diag = field.mul(two_a, A.x[r][k]);
      G.x[r][k] = alg.norm_sign(k) > 0 ? field.sub(lin, diag) : field.add(lin, diag);
    }
  }
  return G;
}

CubicForm severi_cubic(SeveriIndex idx, const FieldSpec& field);

/// Rank-one point v^* v where v has the real entry a at position `chart`
/// (0, 1 or 2) and the remaining entries a*u, a*w in cyclic order after it.
/// Any two elements generate an associative subalgebra, so this is rank one
/// even for the octonions.
template <class F>
Vec<F> rank1_point(const F& field, SeveriIndex idx, int chart, typename F::value_type a,
                   std::span<const typename F::value_type> u, std::span<const typename F::value_type> w) {
  const auto& alg = idx.algebra();
  const std::size_t d = alg.dim();
  if (chart < 0 || chart > 2) throw ContractError("rank1_point: chart must be 0, 1 or 2");
  if (u.size() != d || w.size() != d) throw ContractError("rank1_point: element dimension mismatch");
  // Row v = (v0, v1, v2); entries M_rs = conj(v_r) v_s.
  std::array<Vec<F>, 3> v;
  Vec<F> one(d, field.zero());
  one[0] = field.one();
  v[chart] = one;
  v[(chart + 1) % 3].assign(u.begin(), u.end());
  v[(chart + 2) % 3].assign(w.begin(), w.end());
  auto entry = [&](int r, int s) {
    auto c = alg.conj(field, std::span<const typename F::value_type>(v[r]));
    auto m = alg.mul(field, std::span<const typename F::value_type>(c), std::span<const typename F::value_type>(v[s]));
    for (auto& z : m) z = field.mul(z, a);
    return m;
  };
  HermitianJordanElement<F> A;
  for (int r = 0; r < 3; ++r) A.alpha[r] = field.mul(a, alg.norm(field, std::span<const typename F::value_type>(v[r])));
  A.x[2] = entry(0, 1);  // M_12
  A.x[0] = entry(1, 2);  // M_23
  A.x[1] = entry(2, 0);  // M_31
  return A.coordinates();
}

template <class F>
Vec<F> rank1_point(const F& field, SeveriIndex idx, typename F::value_type a, std::span<const typename F::value_type> u,
                   std::span<const typename F::value_type> w) {
  return rank1_point(field, idx, 0, a, u, w);
}

template <class F>
Vec<F> random_rank1_point(const F& field, SeveriIndex idx, Rng& rng) {
  const std::size_t d = idx.algebra_dim();
  const int chart = static_cast<int>(rng.below(3));
  auto a = field.random_nonzero(rng);
  Vec<F> u(d), w(d);
  for (auto& z : u) z = field.random(rng);
  for (auto& z : w) z = field.random(rng);
  return rank1_point(field, idx, chart, a, std::span<const typename F::value_type>(u), std::span<const typename F::value_type>(w));
}

/// Sum of two random rank-one points whose polar covector is nonzero;
/// throws std::runtime_error after `max_tries` degenerate draws.
template <class F>
Vec<F> rank2_point(const F& field, SeveriIndex idx, Rng& rng, int max_tries = 32) {
  const auto f = FieldCubic<F>(severi_cubic(idx, field.spec()), field);
  for (int t = 0; t < max_tries; ++t) {
    auto p = random_rank1_point(field, idx, rng);
    auto q = random_rank1_point(field, idx, rng);
    for (std::size_t k = 0; k < p.size(); ++k) p[k] = field.add(p[k], q[k]);
    auto g = f.polar(std::span<const typename F::value_type>(p));
    for (const auto& z : g)
      if (!field.is_zero(z)) return p;
  }
  throw std::runtime_error("rank2_point: no smooth sample after bounded retries");
}

/// Covector a1 (r=1), a1+a2 (r=2), a1+a2+a3 (r=3) in Jordan coordinates.
std::vector<mpq_class> orbit_hyperplane(SeveriIndex idx, int r);

// Chart coordinates for w = (w0, w1, w2) in C + U + K, with U = A + A
// (u = (a, b)) and K = (k1, k2, k3):
//   chart  [w0, a (d), b (d), k1, k2 (d), k3]
//   Jordan a1 = w0, x3 = a, x2 = conj(b), a2 = k1, x1 = k2, a3 = k3.
// The image of psi(1 : a, b) is then the rank-one point of the row (1, a, b).
template <class F>
Vec<F> chart_to_jordan(const F& field, SeveriIndex idx, std::span<const typename F::value_type> c) {
  const std::size_t d = idx.algebra_dim();
  if (c.size() != 3 + 3 * d) throw ContractError("chart vector has wrong length");
  const auto& alg = idx.algebra();
  HermitianJordanElement<F> A;
  A.alpha = {c[0], c[1 + 2 * d], c[2 + 3 * d]};
  A.x[2].assign(c.begin() + 1, c.begin() + 1 + d);
  A.x[1] = alg.conj(field, c.subspan(1 + d, d));
  A.x[0].assign(c.begin() + 2 + 2 * d, c.begin() + 2 + 3 * d);
  return A.coordinates();
}

template <class F>
Vec<F> jordan_to_chart(const F& field, SeveriIndex idx, std::span<const typename F::value_type> j) {
  const std::size_t d = idx.algebra_dim();
  auto A = HermitianJordanElement<F>::from_coordinates(d, j);
  const auto& alg = idx.algebra();
  Vec<F> c;
  c.push_back(A.alpha[0]);
  c.insert(c.end(), A.x[2].begin(), A.x[2].end());
  auto b = alg.conj(field, std::span<const typename F::value_type>(A.x[1]));
  c.insert(c.end(), b.begin(), b.end());
  c.push_back(A.alpha[1]);
  c.insert(c.end(), A.x[0].begin(), A.x[0].end());
  c.push_back(A.alpha[2]);
  return c;
}

/// sigma(u, u') = (n(a, a'), (conj(a) b' + conj(a') b) / 2, n(b, b')) in K.
template <class F>
Vec<F> sigma(const F& field, SeveriIndex idx, std::span<const typename F::value_type> u,
             std::span<const typename F::value_type> v) {
  const auto& alg = idx.algebra();
  const std::size_t d = alg.dim();
  if (u.size() != 2 * d || v.size() != 2 * d) throw ContractError("sigma: dim u must be n");
  auto a = u.subspan(0, d), b = u.subspan(d, d), a2 = v.subspan(0, d), b2 = v.subspan(d, d);
  Vec<F> k;
  k.push_back(alg.norm_polar(field, a, a2));
  auto ca = alg.conj(field, a), ca2 = alg.conj(field, a2);
  auto m1 = alg.mul(field, std::span<const typename F::value_type>(ca), b2);
  auto m2 = alg.mul(field, std::span<const typename F::value_type>(ca2), b);
  const auto half = field.inv(field.from_int(2));
  for (std::size_t i = 0; i < d; ++i) k.push_back(field.mul(field.add(m1[i], m2[i]), half));
  k.push_back(alg.norm_polar(field, b, b2));
  return k;
}

/// psi(t : u) = (t^2, t u, sigma(u, u)) in chart coordinates; i <= 3.
template <class F>
Vec<F> psi_map(const F& field, SeveriIndex idx, typename F::value_type t, std::span<const typename F::value_type> u) {
  if (idx.i > 3) throw ContractError("psi_map: only i in {1,2,3} is supported");
  if (u.size() != idx.n()) throw ContractError("psi_map: dim u must be n");
  Vec<F> c;
  c.push_back(field.mul(t, t));
  for (const auto& z : u) c.push_back(field.mul(t, z));
  auto k = sigma(field, idx, u, u);
  c.insert(c.end(), k.begin(), k.end());
  return c;
}

/// A(w, w') = (w0 w0', (w0 w1' + w0' w1)/2, sigma(w1, w1')) in chart
/// coordinates; i <= 3.
ProlongationCandidate<RationalField> explicit_prolongation_chart(SeveriIndex idx);

/// The same tensor transported to Jordan coordinates, with lambda solved
/// from F(A(u,w),w,w) = lambda(u) f(w) and checked at sample points.
ProlongationCandidate<RationalField> explicit_prolongation(SeveriIndex idx);

}  // namespace hessiana
