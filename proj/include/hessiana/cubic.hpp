#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "hessiana/field.hpp"
#include "hessiana/matrix.hpp"

namespace hessiana {

/// Degree-3 monomial stored as a sorted triple of variable indices
/// (w_0^3 is {0,0,0}, w_0 w_1 w_2 is {0,1,2}).
struct Monomial {
  std::array<std::uint16_t, 3> index{};

  static Monomial of(std::size_t a, std::size_t b, std::size_t c);
  /// Number of distinct orderings of the triple: 1, 3 or 6.
  int orderings() const;
  std::vector<int> exponents(std::size_t n_vars) const;

  auto operator<=>(const Monomial&) const = default;
};

/// Number of degree-3 monomials in n variables.
std::size_t cubic_monomial_count(std::size_t n_vars);
/// Position of a monomial in the lexicographic enumeration of sorted triples.
std::size_t monomial_rank(const Monomial& m, std::size_t n_vars);
std::vector<Monomial> all_cubic_monomials(std::size_t n_vars);

class TrilinearForm;

/// Homogeneous cubic with exact coefficients. Over F_p coefficients are kept
/// as canonical integers in [0, p).
class CubicForm {
 public:
  using Terms = std::map<Monomial, mpq_class>;

  CubicForm(std::size_t n_vars, FieldSpec field, Terms terms);

  std::size_t n_vars() const { return n_vars_; }
  const FieldSpec& field() const { return field_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  mpq_class coefficient(const Monomial& m) const;

  /// Symmetric trilinear polarization F with F(w,w,w) = f(w); built once.
  const TrilinearForm& trilinear() const;

  std::uint64_t content_hash() const;
  std::string hash_hex() const;

  CubicForm scaled(const mpq_class& mu) const;
  CubicForm reduced_mod(std::uint64_t p) const;

  friend bool operator==(const CubicForm& a, const CubicForm& b) {
    return a.n_vars_ == b.n_vars_ && a.field_ == b.field_ && a.terms_ == b.terms_;
  }

 private:
  struct Cache {
    std::once_flag once;
    std::unique_ptr<TrilinearForm> trilinear;
  };

  std::size_t n_vars_;
  FieldSpec field_;
  Terms terms_;
  std::shared_ptr<Cache> cache_;
};

/// Symmetric trilinear form stored on sorted index triples. The value at a
/// triple equals coefficient / orderings, so that summing over all ordered
/// triples reproduces the cubic.
class TrilinearForm {
 public:
  TrilinearForm(std::size_t n_vars, FieldSpec field, std::map<Monomial, mpq_class> values)
      : n_vars_(n_vars), field_(field), values_(std::move(values)) {}

  std::size_t n_vars() const { return n_vars_; }
  const FieldSpec& field() const { return field_; }
  const std::map<Monomial, mpq_class>& values() const { return values_; }
  mpq_class value(std::size_t i, std::size_t j, std::size_t k) const;

 private:
  std::size_t n_vars_;
  FieldSpec field_;
  std::map<Monomial, mpq_class> values_;
};

TrilinearForm polarize(const CubicForm& f);

/// A cubic compiled into a concrete field for repeated evaluation. All
/// derivative conventions live here:
///   polar(w)   = F(w,w,.)        (the covector F_ww)
///   gradient   = 3 * polar
///   hessian(w) = classical second derivatives = 6 * F(w,.,.)
template <class F>
class FieldCubic {
 public:
  using value_type = typename F::value_type;

  FieldCubic(const CubicForm& f, F field) : field_(std::move(field)), n_(f.n_vars()) {
    check_field(f.field());
    for (const auto& [m, c] : f.terms()) {
      terms_.push_back({m.index[0], m.index[1], m.index[2], field_.from_rational(c)});
      const auto t = field_.from_rational(c / m.orderings());
      std::array<std::uint16_t, 3> p = m.index;
      do {
        perms_.push_back({p[0], p[1], p[2], t});
      } while (std::next_permutation(p.begin(), p.end()));
    }
  }

  const F& field() const { return field_; }
  std::size_t n_vars() const { return n_; }

  value_type eval(std::span<const value_type> w) const {
    check_dim(w);
    value_type s = field_.zero();
    for (const auto& t : terms_) s = field_.mul_add(field_.mul(t.c, w[t.a]), field_.mul(w[t.b], w[t.d]), s);
    return s;
  }

  value_type trilinear(std::span<const value_type> u, std::span<const value_type> v,
                       std::span<const value_type> w) const {
    check_dim(u);
    check_dim(v);
    check_dim(w);
    value_type s = field_.zero();
    for (const auto& t : perms_) s = field_.mul_add(field_.mul(t.c, u[t.a]), field_.mul(v[t.b], w[t.d]), s);
    return s;
  }

  Vec<F> polar(std::span<const value_type> w) const {
    check_dim(w);
    Vec<F> out(n_, field_.zero());
    for (const auto& t : perms_) out[t.d] = field_.mul_add(t.c, field_.mul(w[t.a], w[t.b]), out[t.d]);
    return out;
  }

  Vec<F> gradient(std::span<const value_type> w) const {
    auto g = polar(w);
    const auto three = field_.from_int(3);
    for (auto& x : g) x = field_.mul(x, three);
    return g;
  }

  /// Row-major n x n.
  Vec<F> hessian(std::span<const value_type> w) const {
    check_dim(w);
    Vec<F> h(n_ * n_, field_.zero());
    for (const auto& t : perms_) h[t.b * n_ + t.d] = field_.mul_add(t.c, w[t.a], h[t.b * n_ + t.d]);
    const auto six = field_.from_int(6);
    for (auto& x : h) x = field_.mul(x, six);
    return h;
  }

  std::size_t hessian_rank(std::span<const value_type> w) const { return dense_rank(field_, n_, n_, hessian(w)); }

  /// Coefficients (c0, c1, c2, c3) of f(a + t b) as a polynomial in t.
  std::array<value_type, 4> along_line(std::span<const value_type> a, std::span<const value_type> b) const {
    const auto pa = polar(a);
    const auto pb = polar(b);
    value_type aab = field_.zero(), abb = field_.zero();
    for (std::size_t i = 0; i < n_; ++i) {
      aab = field_.mul_add(pa[i], b[i], aab);
      abb = field_.mul_add(pb[i], a[i], abb);
    }
    const auto three = field_.from_int(3);
    return {eval(a), field_.mul(three, aab), field_.mul(three, abb), eval(b)};
  }

 private:
  struct Term {
    std::uint16_t a, b, d;
    value_type c;
  };

  void check_dim(std::span<const value_type> w) const {
    if (w.size() != n_) throw ContractError("point has " + std::to_string(w.size()) + " coordinates, form has " +
                                            std::to_string(n_) + " variables");
  }

  void check_field(const FieldSpec& spec) const {
    const FieldSpec target = field_.spec();
    if (spec.is_prime() && spec != target)
      throw ContractError("form over " + spec.to_string() + " cannot be evaluated in " + target.to_string());
  }

  F field_;
  std::size_t n_;
  std::vector<Term> terms_;
  std::vector<Term> perms_;
};

/// Exact value f(w) over the form's declared field.
mpq_class eval_cubic(const CubicForm& f, std::span<const mpq_class> w);
/// F_ww = F(w, w, .).
std::vector<mpq_class> polar_covector(const TrilinearForm& t, std::span<const mpq_class> w);

template <class F>
SparseMatrix<F> hessian_matrix(const CubicForm& f, const F& field, std::span<const typename F::value_type> w) {
  FieldCubic<F> fc(f, field);
  auto h = fc.hessian(w);
  return SparseMatrix<F>::from_dense(field, f.n_vars(), f.n_vars(), h);
}

/// Restriction to the span of `basis`: g(y) = f(sum_l y_l basis_l).
/// The basis must be linearly independent over the form's field.
CubicForm restrict_form(const CubicForm& f, const std::vector<std::vector<mpq_class>>& basis);

/// f(g y) for an invertible matrix g given by its columns.
CubicForm transform(const CubicForm& f, const std::vector<std::vector<mpq_class>>& columns);

/// Coefficient of every monomial (in monomial_rank order) as a dense field vector.
template <class F>
Vec<F> coefficient_vector(const CubicForm& f, const F& field) {
  Vec<F> v(cubic_monomial_count(f.n_vars()), field.zero());
  for (const auto& [m, c] : f.terms()) v[monomial_rank(m, f.n_vars())] = field.from_rational(c);
  return v;
}

}  // namespace hessiana
