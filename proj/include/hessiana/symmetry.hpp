#pragma once

#include <cstdint>
#include <istream>
#include <span>
#include <string>
#include <vector>

#include "hessiana/cubic.hpp"
#include "hessiana/matrix.hpp"
#include "hessiana/prolongation.hpp"

namespace hessiana {

/// Linear system in the unknowns (g row-major, c): coefficients of
/// F(gw, w, w) - c f(w), one row per cubic monomial.
template <class F>
SparseMatrix<F> aut_system(const CubicForm& f, const F& field);

/// Basis of {(g, c)}, reduced row echelon in the coordinates (g, c).
template <class F>
std::vector<AutCandidate<F>> aut_basis(const CubicForm& f, const F& field);

/// F(gw, w, w) = c f(w) coefficientwise.
template <class F>
bool check_aut(const CubicForm& f, const AutCandidate<F>& g, const F& field);

enum class Aut1Route {
  reduced,  // slices A(e_a, .) expanded in an aut basis, plus symmetry
  direct,   // all (A, lambda) unknowns against every u_a * w^3 coefficient
};

/// Full system for the direct route; columns are ProlongationCandidate
/// coordinates.
template <class F>
SparseMatrix<F> aut1_direct_system(const CubicForm& f, const F& field);

template <class F>
std::vector<ProlongationCandidate<F>> aut1_basis(const CubicForm& f, const F& field, Aut1Route route = Aut1Route::reduced);

template <class F>
std::size_t aut_dimension(const CubicForm& f, const F& field);
template <class F>
std::size_t aut1_dimension(const CubicForm& f, const F& field, Aut1Route route = Aut1Route::reduced);

struct DimensionCertificate {
  std::vector<std::uint64_t> primes;
  std::vector<std::size_t> dims;
  std::size_t value = 0;  // maximum: the dimension can only jump up at special primes
  bool agree = true;
  std::string route;
};

DimensionCertificate aut_dim(const CubicForm& f, std::span<const std::uint64_t> primes);
DimensionCertificate aut1_dim(const CubicForm& f, std::span<const std::uint64_t> primes,
                              Aut1Route route = Aut1Route::reduced);

struct IdentityVerdict {
  bool ef = false;
  bool e1 = false;
  bool e2 = false;
  std::string first_failure;
  bool pass() const { return ef && e1 && e2; }
};

/// Coefficientwise check, as polynomials in (u, w), of
///   F(A(u,w),w,w)                  = lambda(u) F(w,w,w)
///   F(A(u,u),w,w) + 2F(A(u,w),u,w) = 3 lambda(u) F(u,w,w)
///   2F(A(u,u),u,w) + F(A(u,w),u,u) = 3 lambda(u) F(u,u,w)
template <class F>
IdentityVerdict verify_identities(const CubicForm& f, const ProlongationCandidate<F>& cand, const F& field);

/// True iff cand lies in the span of basis.
template <class F>
bool in_span(const F& field, const std::vector<ProlongationCandidate<F>>& basis, const ProlongationCandidate<F>& cand);

// Text export, one block per candidate:
//   prolongation n_vars=<n> field=<spec> count=<k>
//   candidate <t>
//   A[i][j,k] = <value>      (j <= k, nonzero entries only)
//   lambda[i] = <value>
template <class F>
std::string export_basis(const F& field, const std::vector<ProlongationCandidate<F>>& basis);
template <class F>
std::vector<ProlongationCandidate<F>> parse_basis(const F& field, std::istream& in);

}  // namespace hessiana
