#include "hessiana/symmetry.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <unordered_map>

#include "hessiana/cubic_io.hpp"

namespace hessiana {

namespace {

template <class F>
using Value = typename F::value_type;

template <class F>
struct Quadratic {
  std::size_t a, b;  // a <= b
  Value<F> c;
};

// F_k(w) = F(e_k, w, w) = (1/3) d f / d w_k as lists of quadratic terms.
template <class F>
std::vector<std::vector<Quadratic<F>>> polar_quadrics(const CubicForm& f, const F& field) {
  const std::size_t n = f.n_vars();
  const auto third = field.inv(field.from_int(3));
  std::vector<std::vector<Quadratic<F>>> out(n);
  for (const auto& [m, q] : f.terms()) {
    const auto c = field.from_rational(q);
    const auto& ix = m.index;
    for (int pos = 0; pos < 3; ++pos) {
      if (pos > 0 && ix[pos] == ix[pos - 1]) continue;
      int e = 0;
      for (int t = 0; t < 3; ++t) e += ix[t] == ix[pos];
      std::array<std::size_t, 2> rest{};
      int r = 0;
      bool skipped = false;
      for (int t = 0; t < 3; ++t) {
        if (!skipped && ix[t] == ix[pos]) {
          skipped = true;
          continue;
        }
        rest[r++] = ix[t];
      }
      out[ix[pos]].push_back({rest[0], rest[1], field.mul(field.mul(c, field.from_int(e)), third)});
    }
  }
  return out;
}

template <class F>
void require_form(const CubicForm& f, const F& field) {
  if (f.is_zero()) throw ContractError("the zero polynomial has no symmetry system");
  FieldCubic<F> check(f, field);  // rejects a form declared over a different prime
  (void)check;
}

template <class F>
std::size_t nullity(const SparseMatrix<F>& m) {
  return m.cols() - rank(m);
}

template <class F>
std::vector<ProlongationCandidate<F>> normalize(const F& field, std::size_t n, std::vector<Vec<F>> coords) {
  rref(field, coords);
  std::vector<ProlongationCandidate<F>> out;
  for (const auto& v : coords) out.push_back(ProlongationCandidate<F>::from_coordinates(n, std::span<const Value<F>>(v)));
  return out;
}

// Reduced route: unknowns x_{a,t} with A(e_a, .) = sum_t x_{a,t} g_t.
template <class F>
SparseMatrix<F> reduced_system(const F& field, std::size_t n, const std::vector<AutCandidate<F>>& aut) {
  const std::size_t m = aut.size();
  std::vector<typename SparseMatrix<F>::Triplet> trip;
  std::size_t row = 0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      for (std::size_t i = 0; i < n; ++i, ++row)
        for (std::size_t t = 0; t < m; ++t) {
          // (G_a)_{i,b} - (G_b)_{i,a}
          const auto& gib = aut[t].g[i * n + b];
          const auto& gia = aut[t].g[i * n + a];
          if (!field.is_zero(gib)) trip.push_back({row, a * m + t, gib});
          if (!field.is_zero(gia)) trip.push_back({row, b * m + t, field.neg(gia)});
        }
  return SparseMatrix<F>::from_triplets(field, row, n * m, std::move(trip));
}

template <class F>
Vec<F> reduced_to_coordinates(const F& field, std::size_t n, const std::vector<AutCandidate<F>>& aut,
                              const Vec<F>& x) {
  const std::size_t m = aut.size();
  auto A = ProlongationCandidate<F>::zero(field, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t t = 0; t < m; ++t) {
      const auto& xa = x[a * m + t];
      if (field.is_zero(xa)) continue;
      A.lambda[a] = field.mul_add(xa, aut[t].c, A.lambda[a]);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t b = a; b < n; ++b) {
          const auto& g = aut[t].g[i * n + b];
          if (!field.is_zero(g)) A.at(i, a, b) = field.mul_add(xa, g, A.at(i, a, b));
        }
    }
  return A.coordinates();
}

// Polynomials in 2n variables (u_0.., w_0..) of degree <= 4, keyed by the
// sorted variable list packed into bytes (index + 1, zero = empty).
using Key = std::uint64_t;

Key pack(std::array<std::uint8_t, 4> v, int deg) {
  std::sort(v.begin(), v.begin() + deg);
  Key k = 0;
  for (int i = 0; i < deg; ++i) k = (k << 8) | (v[i] + 1u);
  return k;
}

std::string describe(Key k, std::size_t n) {
  std::vector<std::string> parts;
  while (k) {
    const unsigned v = static_cast<unsigned>(k & 0xff) - 1;
    parts.push_back(v < n ? "u" + std::to_string(v) : "w" + std::to_string(v - n));
    k >>= 8;
  }
  std::reverse(parts.begin(), parts.end());
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? "*" : "") + parts[i];
  return s;
}

template <class F>
struct Poly {
  const F* field;
  std::unordered_map<Key, Value<F>> terms;

  void add(Key k, const Value<F>& c) {
    if (field->is_zero(c)) return;
    auto [it, fresh] = terms.try_emplace(k, c);
    if (!fresh) it->second = field->add(it->second, c);
  }
  std::optional<Key> first_nonzero() const {
    std::optional<Key> best;
    for (const auto& [k, c] : terms)
      if (!field->is_zero(c) && (!best || k < *best)) best = k;
    return best;
  }
};

template <class F>
struct PermTerm {
  std::uint8_t i, j, k;
  Value<F> t;
};

template <class F>
std::vector<PermTerm<F>> trilinear_terms(const CubicForm& f, const F& field) {
  std::vector<PermTerm<F>> out;
  for (const auto& [m, q] : f.terms()) {
    const auto t = field.from_rational(q / m.orderings());
    auto p = m.index;
    std::sort(p.begin(), p.end());
    do {
      out.push_back({static_cast<std::uint8_t>(p[0]), static_cast<std::uint8_t>(p[1]), static_cast<std::uint8_t>(p[2]), t});
    } while (std::next_permutation(p.begin(), p.end()));
  }
  return out;
}

}  // namespace

template <class F>
SparseMatrix<F> aut_system(const CubicForm& f, const F& field) {
  require_form(f, field);
  const std::size_t n = f.n_vars();
  const auto Fk = polar_quadrics(f, field);
  std::vector<typename SparseMatrix<F>::Triplet> trip;
  for (std::size_t k = 0; k < n; ++k)
    for (const auto& q : Fk[k])
      for (std::size_t l = 0; l < n; ++l) trip.push_back({monomial_rank(Monomial::of(q.a, q.b, l), n), k * n + l, q.c});
  for (const auto& [m, c] : f.terms()) trip.push_back({monomial_rank(m, n), n * n, field.neg(field.from_rational(c))});
  return SparseMatrix<F>::from_triplets(field, cubic_monomial_count(n), n * n + 1, std::move(trip));
}

template <class F>
std::vector<AutCandidate<F>> aut_basis(const CubicForm& f, const F& field) {
  const std::size_t n = f.n_vars();
  auto ns = rank_nullspace(aut_system(f, field));
  rref(field, ns.basis);
  std::vector<AutCandidate<F>> out;
  for (auto& v : ns.basis) {
    AutCandidate<F> g{n, Vec<F>(v.begin(), v.begin() + n * n), v[n * n]};
    out.push_back(std::move(g));
  }
  return out;
}

template <class F>
bool check_aut(const CubicForm& f, const AutCandidate<F>& g, const F& field) {
  const std::size_t n = f.n_vars();
  if (g.n_vars != n || g.g.size() != n * n) throw ContractError("aut candidate has wrong size");
  const auto sys = aut_system(f, field);
  Vec<F> x(g.g.begin(), g.g.end());
  x.push_back(g.c);
  auto r = sys.multiply(std::span<const Value<F>>(x));
  return std::all_of(r.begin(), r.end(), [&](const Value<F>& v) { return field.is_zero(v); });
}

template <class F>
SparseMatrix<F> aut1_direct_system(const CubicForm& f, const F& field) {
  require_form(f, field);
  const std::size_t n = f.n_vars(), M = cubic_monomial_count(n), P = pair_count(n);
  const auto Fk = polar_quadrics(f, field);
  std::vector<typename SparseMatrix<F>::Triplet> trip;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a; b < n; ++b) {
        const std::size_t col = i * P + pair_index(a, b, n);
        for (const auto& q : Fk[i]) {
          // u_a w_b F_i(w), and u_b w_a F_i(w) for the mirrored entry.
          trip.push_back({a * M + monomial_rank(Monomial::of(q.a, q.b, b), n), col, q.c});
          if (a != b) trip.push_back({b * M + monomial_rank(Monomial::of(q.a, q.b, a), n), col, q.c});
        }
      }
  for (std::size_t a = 0; a < n; ++a)
    for (const auto& [m, c] : f.terms())
      trip.push_back({a * M + monomial_rank(m, n), n * P + a, field.neg(field.from_rational(c))});
  return SparseMatrix<F>::from_triplets(field, n * M, n * P + n, std::move(trip));
}

template <class F>
std::vector<ProlongationCandidate<F>> aut1_basis(const CubicForm& f, const F& field, Aut1Route route) {
  const std::size_t n = f.n_vars();
  std::vector<Vec<F>> coords;
  if (route == Aut1Route::direct) {
    coords = rank_nullspace(aut1_direct_system(f, field)).basis;
  } else {
    const auto aut = aut_basis(f, field);
    for (const auto& x : rank_nullspace(reduced_system(field, n, aut)).basis)
      coords.push_back(reduced_to_coordinates(field, n, aut, x));
  }
  return normalize(field, n, std::move(coords));
}

template <class F>
std::size_t aut_dimension(const CubicForm& f, const F& field) {
  return nullity(aut_system(f, field));
}

template <class F>
std::size_t aut1_dimension(const CubicForm& f, const F& field, Aut1Route route) {
  if (route == Aut1Route::direct) return nullity(aut1_direct_system(f, field));
  const auto aut = aut_basis(f, field);
  return nullity(reduced_system(field, f.n_vars(), aut));
}

namespace {

std::string route_name(Aut1Route r) { return r == Aut1Route::direct ? "direct" : "reduced"; }

template <class Fn>
DimensionCertificate certify(std::span<const std::uint64_t> primes, Fn&& dim) {
  if (primes.empty()) throw ContractError("dimension certificate needs at least one prime");
  DimensionCertificate c;
  for (auto p : primes) {
    c.primes.push_back(p);
    c.dims.push_back(dim(PrimeField(p)));
  }
  c.value = *std::max_element(c.dims.begin(), c.dims.end());
  c.agree = std::all_of(c.dims.begin(), c.dims.end(), [&](std::size_t d) { return d == c.dims.front(); });
  return c;
}

}  // namespace

DimensionCertificate aut_dim(const CubicForm& f, std::span<const std::uint64_t> primes) {
  auto c = certify(primes, [&](const PrimeField& F) { return aut_dimension(f, F); });
  c.route = "aut";
  return c;
}

DimensionCertificate aut1_dim(const CubicForm& f, std::span<const std::uint64_t> primes, Aut1Route route) {
  auto c = certify(primes, [&](const PrimeField& F) { return aut1_dimension(f, F, route); });
  c.route = route_name(route);
  return c;
}

template <class F>
IdentityVerdict verify_identities(const CubicForm& f, const ProlongationCandidate<F>& cand, const F& field) {
  require_form(f, field);
  const std::size_t n = f.n_vars();
  if (cand.n_vars != n || cand.tensor.size() != n * pair_count(n) || cand.lambda.size() != n)
    throw ContractError("prolongation candidate does not match the form");
  if (2 * n >= 255) throw ContractError("form too large for identity expansion");
  const auto perms = trilinear_terms(f, field);
  const auto U = [](std::size_t a) { return static_cast<std::uint8_t>(a); };
  const auto W = [n](std::size_t b) { return static_cast<std::uint8_t>(n + b); };

  // Bilinear components A(x, y)_i as (coefficient, a, b) over ordered pairs.
  struct Bi {
    std::size_t a, b;
    Value<F> c;
  };
  std::vector<std::vector<Bi>> Ai(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        const auto& c = cand.at(i, a, b);
        if (!field.is_zero(c)) Ai[i].push_back({a, b, c});
      }

  const auto two = field.from_int(2), three = field.from_int(3);
  // sum_t coeff * F(A(x1,x2), y, z) with x/y/z drawn from u or w.
  auto add_FA = [&](Poly<F>& out, bool x1u, bool x2u, bool yu, bool zu, const Value<F>& scale) {
    for (const auto& p : perms)
      for (const auto& bi : Ai[p.i]) {
        std::array<std::uint8_t, 4> v{x1u ? U(bi.a) : W(bi.a), x2u ? U(bi.b) : W(bi.b), yu ? U(p.j) : W(p.j),
                                      zu ? U(p.k) : W(p.k)};
        out.add(pack(v, 4), field.mul(scale, field.mul(p.t, bi.c)));
      }
  };
  // - scale * lambda(u) F(x, y, z).
  auto sub_lambda = [&](Poly<F>& out, bool xu, bool yu, bool zu, const Value<F>& scale) {
    for (std::size_t a = 0; a < n; ++a) {
      if (field.is_zero(cand.lambda[a])) continue;
      const auto la = field.neg(field.mul(scale, cand.lambda[a]));
      for (const auto& p : perms) {
        std::array<std::uint8_t, 4> v{U(a), xu ? U(p.i) : W(p.i), yu ? U(p.j) : W(p.j), zu ? U(p.k) : W(p.k)};
        out.add(pack(v, 4), field.mul(la, p.t));
      }
    }
  };

  IdentityVerdict verdict;
  auto judge = [&](const Poly<F>& p, const char* name) {
    auto bad = p.first_nonzero();
    if (bad && verdict.first_failure.empty())
      verdict.first_failure = std::string(name) + " fails at coefficient of " + describe(*bad, n);
    return !bad;
  };

  const auto one = field.one();
  Poly<F> ef{&field, {}};
  add_FA(ef, true, false, false, false, one);
  sub_lambda(ef, false, false, false, one);
  verdict.ef = judge(ef, "F(A(u,w),w,w) = lambda(u) f(w)");

  Poly<F> e1{&field, {}};
  add_FA(e1, true, true, false, false, one);
  add_FA(e1, true, false, true, false, two);
  sub_lambda(e1, true, false, false, three);
  verdict.e1 = judge(e1, "first polarized identity");

  Poly<F> e2{&field, {}};
  add_FA(e2, true, true, true, false, two);
  add_FA(e2, true, false, true, true, one);
  sub_lambda(e2, true, true, false, three);
  verdict.e2 = judge(e2, "second polarized identity");
  return verdict;
}

template <class F>
bool in_span(const F& field, const std::vector<ProlongationCandidate<F>>& basis, const ProlongationCandidate<F>& cand) {
  std::vector<Vec<F>> rows;
  for (const auto& b : basis) rows.push_back(b.coordinates());
  auto base = rows;
  rref(field, base);
  rows.push_back(cand.coordinates());
  rref(field, rows);
  return rows.size() == base.size();
}

template <class F>
std::string export_basis(const F& field, const std::vector<ProlongationCandidate<F>>& basis) {
  std::ostringstream out;
  const std::size_t n = basis.empty() ? 0 : basis.front().n_vars;
  out << "prolongation n_vars=" << n << " field=" << field.spec().to_string() << " count=" << basis.size() << '\n';
  for (std::size_t t = 0; t < basis.size(); ++t) {
    const auto& A = basis[t];
    out << "candidate " << t << '\n';
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a; b < n; ++b) {
          const auto& v = A.at(i, a, b);
          if (!field.is_zero(v)) out << "A[" << i << "][" << a << ',' << b << "] = " << field.format(v) << '\n';
        }
    for (std::size_t i = 0; i < n; ++i)
      if (!field.is_zero(A.lambda[i])) out << "lambda[" << i << "] = " << field.format(A.lambda[i]) << '\n';
  }
  return out.str();
}

template <class F>
std::vector<ProlongationCandidate<F>> parse_basis(const F& field, std::istream& in) {
  std::string line;
  std::size_t lineno = 0, n = 0, count = 0;
  bool header = false;
  std::vector<ProlongationCandidate<F>> out;
  auto value = [&](const std::string& s) {
    try {
      return field.from_rational(parse_rational(s));
    } catch (const std::exception& e) {
      throw ParseError(lineno, e.what());
    }
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      char fs[64] = {0};
      if (std::sscanf(line.c_str(), "prolongation n_vars=%zu field=%63s count=%zu", &n, fs, &count) != 3)
        throw ParseError(lineno, "expected 'prolongation n_vars=<n> field=<spec> count=<k>'");
      if (!(FieldSpec::parse(fs) == field.spec())) throw ParseError(lineno, "basis field does not match");
      header = true;
      continue;
    }
    std::size_t t = 0, i = 0, a = 0, b = 0;
    char rest[256] = {0};
    if (std::sscanf(line.c_str(), "candidate %zu", &t) == 1 && line.rfind("candidate", 0) == 0) {
      if (t != out.size()) throw ParseError(lineno, "candidates must be numbered consecutively");
      out.push_back(ProlongationCandidate<F>::zero(field, n));
    } else if (std::sscanf(line.c_str(), "A[%zu][%zu,%zu] = %255s", &i, &a, &b, rest) == 4) {
      if (out.empty() || i >= n || a >= n || b >= n || a > b) throw ParseError(lineno, "bad tensor entry");
      out.back().at(i, a, b) = value(rest);
    } else if (std::sscanf(line.c_str(), "lambda[%zu] = %255s", &i, rest) == 2) {
      if (out.empty() || i >= n) throw ParseError(lineno, "bad lambda entry");
      out.back().lambda[i] = value(rest);
    } else {
      throw ParseError(lineno, "unrecognized line");
    }
  }
  if (!header) throw ParseError(lineno, "missing 'prolongation' header");
  if (out.size() != count) throw ParseError(lineno, "expected " + std::to_string(count) + " candidates");
  return out;
}

#define HESSIANA_INSTANTIATE(F)                                                                                    \
  template SparseMatrix<F> aut_system(const CubicForm&, const F&);                                                 \
  template std::vector<AutCandidate<F>> aut_basis(const CubicForm&, const F&);                                     \
  template bool check_aut(const CubicForm&, const AutCandidate<F>&, const F&);                                    \
  template SparseMatrix<F> aut1_direct_system(const CubicForm&, const F&);                                         \
  template std::vector<ProlongationCandidate<F>> aut1_basis(const CubicForm&, const F&, Aut1Route);               \
  template std::size_t aut_dimension(const CubicForm&, const F&);                                                  \
  template std::size_t aut1_dimension(const CubicForm&, const F&, Aut1Route);                                      \
  template IdentityVerdict verify_identities(const CubicForm&, const ProlongationCandidate<F>&, const F&);         \
  template bool in_span(const F&, const std::vector<ProlongationCandidate<F>>&, const ProlongationCandidate<F>&); \
  template std::string export_basis(const F&, const std::vector<ProlongationCandidate<F>>&);                       \
  template std::vector<ProlongationCandidate<F>> parse_basis(const F&, std::istream&);

HESSIANA_INSTANTIATE(PrimeField)
HESSIANA_INSTANTIATE(RationalField)

}  // namespace hessiana
