#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hessiana/matrix.hpp"

namespace hessiana {

/// Index of the unordered pair {a, b} among the n(n+1)/2 pairs a <= b.
inline std::size_t pair_index(std::size_t a, std::size_t b, std::size_t n) {
  if (a > b) std::swap(a, b);
  return a * n - (a == 0 ? 0 : a * (a - 1) / 2) + (b - a);
}

inline std::size_t pair_count(std::size_t n) { return n * (n + 1) / 2; }

/// Infinitesimal linear symmetry g with F(gw, w, w) = c F(w, w, w).
template <class F>
struct AutCandidate {
  std::size_t n_vars = 0;
  Vec<F> g;  // row-major n x n
  typename F::value_type c{};

  typename F::value_type entry(std::size_t row, std::size_t col) const { return g[row * n_vars + col]; }
};

/// Symmetric A : Sym^2 W -> W with covector lambda, stored so that
/// A(x, y)_i = sum_{a,b} A[i][a,b] x_a y_b.
template <class F>
struct ProlongationCandidate {
  std::size_t n_vars = 0;
  Vec<F> tensor;  // index i * pair_count(n) + pair_index(a, b, n)
  Vec<F> lambda;

  static ProlongationCandidate zero(const F& field, std::size_t n) {
    return {n, Vec<F>(n * pair_count(n), field.zero()), Vec<F>(n, field.zero())};
  }

  static ProlongationCandidate from_coordinates(std::size_t n, std::span<const typename F::value_type> coords) {
    const std::size_t t = n * pair_count(n);
    if (coords.size() != t + n) throw ContractError("prolongation coordinate vector has wrong length");
    return {n, Vec<F>(coords.begin(), coords.begin() + t), Vec<F>(coords.begin() + t, coords.end())};
  }

  Vec<F> coordinates() const {
    Vec<F> out = tensor;
    out.insert(out.end(), lambda.begin(), lambda.end());
    return out;
  }

  typename F::value_type& at(std::size_t i, std::size_t a, std::size_t b) {
    return tensor[i * pair_count(n_vars) + pair_index(a, b, n_vars)];
  }
  const typename F::value_type& at(std::size_t i, std::size_t a, std::size_t b) const {
    return tensor[i * pair_count(n_vars) + pair_index(a, b, n_vars)];
  }

  /// A(x, y) for dense vectors.
  Vec<F> apply(const F& field, std::span<const typename F::value_type> x, std::span<const typename F::value_type> y) const {
    const std::size_t n = n_vars;
    Vec<F> out(n, field.zero());
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t a = 0; a < n; ++a) {
        if (field.is_zero(x[a])) continue;
        for (std::size_t b = 0; b < n; ++b) {
          const auto& v = at(i, a, b);
          if (!field.is_zero(v) && !field.is_zero(y[b])) out[i] = field.mul_add(field.mul(v, x[a]), y[b], out[i]);
        }
      }
    return out;
  }

  /// The endomorphism A(w, .) as a row-major n x n matrix.
  Vec<F> slice(const F& field, std::span<const typename F::value_type> w) const {
    const std::size_t n = n_vars;
    Vec<F> g(n * n, field.zero());
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) g[i * n + b] = field.mul_add(at(i, a, b), w[a], g[i * n + b]);
    return g;
  }

  bool is_zero(const F& field) const {
    for (const auto& v : tensor)
      if (!field.is_zero(v)) return false;
    for (const auto& v : lambda)
      if (!field.is_zero(v)) return false;
    return true;
  }
};

}  // namespace hessiana
