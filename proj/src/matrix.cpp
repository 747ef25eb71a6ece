#include "hessiana/matrix.hpp"

#include <cstdlib>
#include <functional>
#include <queue>
#include <thread>

namespace hessiana {

namespace {

// ---------------------------------------------------------------------------
// Sparse elimination modulo p

struct SparseElimination {
  struct PivotRow {
    std::uint32_t col;
    std::vector<std::uint32_t> cols;
    std::vector<std::uint64_t> vals;
  };
  std::vector<PivotRow> pivots;
  // Rows never chosen as pivots; after elimination they have no entries left
  // in columns below the pivot limit.
  std::vector<std::vector<std::uint32_t>> leftover_cols;
};

SparseElimination eliminate(const SparseMatrix<PrimeField>& m, std::size_t col_limit, bool keep_leftovers) {
  const PrimeField& F = m.field();
  const std::size_t nrows = m.rows();
  const std::size_t ncols = m.cols();

  std::vector<std::vector<std::uint32_t>> rc(nrows);
  std::vector<std::vector<std::uint64_t>> rv(nrows);
  std::vector<std::uint32_t> count(ncols, 0);
  std::vector<std::vector<std::uint32_t>> col_rows(ncols);
  for (std::size_t r = 0; r < nrows; ++r) {
    for (const auto& e : m.row(r)) {
      rc[r].push_back(e.col);
      rv[r].push_back(e.value);
      ++count[e.col];
      col_rows[e.col].push_back(static_cast<std::uint32_t>(r));
    }
  }
  std::vector<char> row_active(nrows, 1);
  std::vector<char> col_done(ncols, 0);

  using Key = std::pair<std::uint32_t, std::uint32_t>;  // (count, col)
  std::priority_queue<Key, std::vector<Key>, std::greater<>> heap;
  for (std::size_t c = 0; c < col_limit; ++c)
    if (count[c] > 0) heap.push({count[c], static_cast<std::uint32_t>(c)});

  auto contains = [&](std::uint32_t r, std::uint32_t c) -> std::ptrdiff_t {
    auto it = std::lower_bound(rc[r].begin(), rc[r].end(), c);
    return (it != rc[r].end() && *it == c) ? it - rc[r].begin() : -1;
  };

  std::vector<std::uint32_t> touched;
  std::vector<char> touched_flag(ncols, 0);
  auto touch = [&](std::uint32_t c) {
    if (!touched_flag[c]) {
      touched_flag[c] = 1;
      touched.push_back(c);
    }
  };

  std::vector<std::uint32_t> tmp_c;
  std::vector<std::uint64_t> tmp_v;
  SparseElimination out;

  while (!heap.empty()) {
    auto [cnt, c] = heap.top();
    heap.pop();
    if (col_done[c] || cnt != count[c] || cnt == 0) continue;

    // Compact the candidate list for column c.
    auto& cand = col_rows[c];
    std::vector<std::uint32_t> live;
    live.reserve(cand.size());
    for (auto r : cand)
      if (row_active[r] && contains(r, c) >= 0) live.push_back(r);
    std::sort(live.begin(), live.end());
    live.erase(std::unique(live.begin(), live.end()), live.end());
    cand = live;
    if (live.empty()) {
      count[c] = 0;
      continue;
    }

    std::uint32_t piv = live.front();
    for (auto r : live)
      if (rc[r].size() < rc[piv].size()) piv = r;

    const auto pc = rc[piv];
    const auto pv = rv[piv];
    const auto ppos = contains(piv, c);
    const std::uint64_t inv = F.inv(pv[ppos]);

    for (auto s : live) {
      if (s == piv) continue;
      const auto spos = contains(s, c);
      const std::uint64_t factor = F.neg(F.mul(rv[s][spos], inv));
      tmp_c.clear();
      tmp_v.clear();
      std::size_t i = 0, j = 0;
      const auto& sc = rc[s];
      const auto& sv = rv[s];
      while (i < sc.size() || j < pc.size()) {
        if (j == pc.size() || (i < sc.size() && sc[i] < pc[j])) {
          tmp_c.push_back(sc[i]);
          tmp_v.push_back(sv[i]);
          ++i;
        } else if (i == sc.size() || pc[j] < sc[i]) {
          // fill-in
          tmp_c.push_back(pc[j]);
          tmp_v.push_back(F.mul(factor, pv[j]));
          ++count[pc[j]];
          col_rows[pc[j]].push_back(s);
          touch(pc[j]);
          ++j;
        } else {
          std::uint64_t v = F.mul_add(factor, pv[j], sv[i]);
          if (v != 0) {
            tmp_c.push_back(sc[i]);
            tmp_v.push_back(v);
          } else {
            --count[sc[i]];
            touch(sc[i]);
          }
          ++i;
          ++j;
        }
      }
      rc[s].swap(tmp_c);
      rv[s].swap(tmp_v);
    }

    row_active[piv] = 0;
    for (auto col : pc) {
      --count[col];
      touch(col);
    }
    col_done[c] = 1;
    out.pivots.push_back({c, pc, pv});
    rc[piv].clear();
    rc[piv].shrink_to_fit();
    rv[piv].clear();
    rv[piv].shrink_to_fit();

    for (auto col : touched) {
      touched_flag[col] = 0;
      if (col < col_limit && !col_done[col] && count[col] > 0) heap.push({count[col], col});
    }
    touched.clear();
  }

  if (keep_leftovers)
    for (std::size_t r = 0; r < nrows; ++r)
      if (row_active[r] && !rc[r].empty()) out.leftover_cols.push_back(rc[r]);
  return out;
}

// Back substitution in reverse pivot order; `x` holds the free values on entry.
void back_substitute(const PrimeField& F, const SparseElimination& el, std::vector<std::uint64_t>& x) {
  for (auto it = el.pivots.rbegin(); it != el.pivots.rend(); ++it) {
    std::uint64_t acc = 0;
    std::uint64_t diag = 0;
    for (std::size_t k = 0; k < it->cols.size(); ++k) {
      if (it->cols[k] == it->col)
        diag = it->vals[k];
      else if (x[it->cols[k]] != 0)
        acc = F.mul_add(it->vals[k], x[it->cols[k]], acc);
    }
    x[it->col] = F.neg(F.div(acc, diag));
  }
}

// ---------------------------------------------------------------------------
// Fraction-free elimination over Z

struct BareissEchelon {
  std::vector<std::vector<mpz_class>> rows;  // echelon rows, zero rows dropped
  std::vector<std::size_t> pivot_cols;
};

std::vector<mpz_class> integer_row(const SparseMatrix<RationalField>& m, std::size_t r, std::size_t width) {
  mpz_class l = 1;
  for (const auto& e : m.row(r)) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), e.value.get_den_mpz_t());
  std::vector<mpz_class> out(width, 0);
  for (const auto& e : m.row(r)) out[e.col] = e.value.get_num() * (l / e.value.get_den());
  return out;
}

BareissEchelon bareiss(std::vector<std::vector<mpz_class>> a, std::size_t cols) {
  BareissEchelon out;
  const std::size_t rows = a.size();
  mpz_class prev = 1;
  std::size_t k = 0;
  for (std::size_t c = 0; c < cols && k < rows; ++c) {
    std::size_t p = k;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[k]);
    for (std::size_t i = k + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        a[i][j] = a[k][c] * a[i][j] - a[i][c] * a[k][j];
        mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
      }
      a[i][c] = 0;
    }
    prev = a[k][c];
    out.pivot_cols.push_back(c);
    ++k;
  }
  a.resize(k);
  out.rows = std::move(a);
  return out;
}

// Solves the echelon system with given free values (x sized to the echelon width).
void back_substitute(const BareissEchelon& e, std::vector<mpq_class>& x) {
  for (std::size_t k = e.rows.size(); k-- > 0;) {
    const std::size_t c = e.pivot_cols[k];
    mpq_class acc = 0;
    for (std::size_t j = c + 1; j < x.size(); ++j)
      if (e.rows[k][j] != 0 && sgn(x[j]) != 0) acc += mpq_class(e.rows[k][j]) * x[j];
    x[c] = -acc / mpq_class(e.rows[k][c]);
  }
}

}  // namespace

RankNullspace<PrimeField> rank_nullspace(const SparseMatrix<PrimeField>& m) {
  auto el = eliminate(m, m.cols(), false);
  RankNullspace<PrimeField> out;
  out.rank = el.pivots.size();
  std::vector<char> is_pivot(m.cols(), 0);
  for (const auto& p : el.pivots) is_pivot[p.col] = 1;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    std::vector<std::uint64_t> x(m.cols(), 0);
    x[f] = 1;
    back_substitute(m.field(), el, x);
    out.basis.push_back(std::move(x));
  }
  return out;
}

std::size_t rank(const SparseMatrix<PrimeField>& m) { return eliminate(m, m.cols(), false).pivots.size(); }

RankNullspace<RationalField> rank_nullspace(const SparseMatrix<RationalField>& m) {
  std::vector<std::vector<mpz_class>> a;
  a.reserve(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r)
    if (!m.row(r).empty()) a.push_back(integer_row(m, r, m.cols()));
  auto e = bareiss(std::move(a), m.cols());
  RankNullspace<RationalField> out;
  out.rank = e.rows.size();
  std::vector<char> is_pivot(m.cols(), 0);
  for (auto c : e.pivot_cols) is_pivot[c] = 1;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    std::vector<mpq_class> x(m.cols(), 0);
    x[f] = 1;
    back_substitute(e, x);
    out.basis.push_back(std::move(x));
  }
  return out;
}

std::size_t rank(const SparseMatrix<RationalField>& m) {
  std::vector<std::vector<mpz_class>> a;
  for (std::size_t r = 0; r < m.rows(); ++r)
    if (!m.row(r).empty()) a.push_back(integer_row(m, r, m.cols()));
  return bareiss(std::move(a), m.cols()).rows.size();
}

std::optional<Vec<PrimeField>> solve_linear(const SparseMatrix<PrimeField>& m, std::span<const std::uint64_t> b) {
  if (b.size() != m.rows()) throw ContractError("solve_linear: right-hand side has wrong length");
  const PrimeField& F = m.field();
  SparseMatrix<PrimeField> aug(F, m.rows(), m.cols() + 1);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    if (!F.contains(b[r])) throw ContractError("solve_linear: right-hand side is not in the matrix field");
    std::vector<SparseMatrix<PrimeField>::Entry> row(m.row(r).begin(), m.row(r).end());
    if (b[r] != 0) row.push_back({static_cast<std::uint32_t>(m.cols()), b[r]});
    aug.set_row(r, std::move(row));
  }
  auto el = eliminate(aug, m.cols(), true);
  if (!el.leftover_cols.empty()) return std::nullopt;
  std::vector<std::uint64_t> x(m.cols() + 1, 0);
  x[m.cols()] = F.neg(1);
  back_substitute(F, el, x);
  x.pop_back();
  return x;
}

std::optional<Vec<RationalField>> solve_linear(const SparseMatrix<RationalField>& m, std::span<const mpq_class> b) {
  if (b.size() != m.rows()) throw ContractError("solve_linear: right-hand side has wrong length");
  const std::size_t w = m.cols() + 1;
  std::vector<std::vector<mpz_class>> a;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    mpz_class l = b[r].get_den();
    for (const auto& e : m.row(r)) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), e.value.get_den_mpz_t());
    std::vector<mpz_class> row(w, 0);
    for (const auto& e : m.row(r)) row[e.col] = e.value.get_num() * (l / e.value.get_den());
    row[m.cols()] = b[r].get_num() * (l / b[r].get_den());
    a.push_back(std::move(row));
  }
  auto e = bareiss(std::move(a), w);
  if (!e.pivot_cols.empty() && e.pivot_cols.back() == m.cols()) return std::nullopt;
  std::vector<mpq_class> x(w, 0);
  x[m.cols()] = -1;
  back_substitute(e, x);
  x.pop_back();
  return x;
}

// ---------------------------------------------------------------------------
// Dense modular kernel

unsigned worker_threads() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("HESSIANA_THREADS")) {
    long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1) return std::min<unsigned>(hw, static_cast<unsigned>(cap));
  }
  return hw;
}

namespace {

void parallel_rows(std::size_t begin, std::size_t end, const std::function<void(std::size_t, std::size_t)>& body) {
  const unsigned threads = worker_threads();
  const std::size_t n = end > begin ? end - begin : 0;
  if (threads <= 1 || n < 64) {
    body(begin, end);
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (n + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    std::size_t lo = begin + t * chunk;
    std::size_t hi = std::min(end, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back(body, lo, hi);
  }
  for (auto& th : pool) th.join();
}

struct DenseEchelon {
  std::vector<std::size_t> pivot_cols;
};

// Gauss-Jordan when `full` is set, forward elimination otherwise.
DenseEchelon dense_eliminate(DenseModMatrix& m, bool full) {
  const PrimeField& F = m.field;
  DenseEchelon out;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < m.cols && rank < m.rows; ++c) {
    std::size_t p = rank;
    while (p < m.rows && m(p, c) == 0) ++p;
    if (p == m.rows) continue;
    if (p != rank) std::swap_ranges(&m(p, 0), &m(p, 0) + m.cols, &m(rank, 0));
    std::uint64_t* prow = &m(rank, 0);
    const std::uint64_t inv = F.inv(prow[c]);
    for (std::size_t k = c; k < m.cols; ++k) prow[k] = F.mul(prow[k], inv);
    const std::size_t first = full ? 0 : rank + 1;
    const std::size_t pr = rank;
    parallel_rows(first, m.rows, [&](std::size_t lo, std::size_t hi) {
      for (std::size_t r = lo; r < hi; ++r) {
        if (r == pr) continue;
        std::uint64_t* row = &m(r, 0);
        if (row[c] == 0) continue;
        const std::uint64_t factor = F.neg(row[c]);
        for (std::size_t k = c; k < m.cols; ++k) row[k] = F.mul_add(factor, prow[k], row[k]);
      }
    });
    out.pivot_cols.push_back(c);
    ++rank;
  }
  return out;
}

}  // namespace

RankNullspace<PrimeField> dense_rank_nullspace(DenseModMatrix m) {
  auto e = dense_eliminate(m, true);
  RankNullspace<PrimeField> out;
  out.rank = e.pivot_cols.size();
  std::vector<char> is_pivot(m.cols, 0);
  for (auto c : e.pivot_cols) is_pivot[c] = 1;
  for (std::size_t f = 0; f < m.cols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<std::uint64_t> x(m.cols, 0);
    x[f] = 1;
    for (std::size_t k = 0; k < out.rank; ++k) x[e.pivot_cols[k]] = m.field.neg(m(k, f));
    out.basis.push_back(std::move(x));
  }
  return out;
}

std::size_t dense_rank(DenseModMatrix m) { return dense_eliminate(m, false).pivot_cols.size(); }

SparseMatrix<PrimeField> reduce_mod(const SparseMatrix<RationalField>& m, const PrimeField& field) {
  SparseMatrix<PrimeField> out(field, m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    std::vector<SparseMatrix<PrimeField>::Entry> row;
    for (const auto& e : m.row(r)) {
      auto v = field.from_rational(e.value);
      if (v != 0) row.push_back({e.col, v});
    }
    out.set_row(r, std::move(row));
  }
  return out;
}

ModularRankCertificate modular_rank(const SparseMatrix<RationalField>& m, std::span<const std::uint64_t> primes) {
  ModularRankCertificate cert;
  for (auto p : primes) {
    PrimeField F(p);
    cert.primes.push_back(p);
    cert.ranks.push_back(rank(reduce_mod(m, F)));
  }
  for (auto r : cert.ranks) cert.value = std::max(cert.value, r);
  for (auto r : cert.ranks) cert.agree = cert.agree && r == cert.value;
  return cert;
}

std::optional<mpq_class> rational_reconstruct(const mpz_class& residue, const mpz_class& modulus) {
  mpz_class bound;
  mpz_class half = modulus / 2;
  mpz_sqrt(bound.get_mpz_t(), half.get_mpz_t());
  mpz_class r0 = modulus, r1 = residue % modulus;
  if (r1 < 0) r1 += modulus;
  mpz_class s0 = 0, s1 = 1;
  while (r1 > bound) {
    mpz_class q = r0 / r1;
    mpz_class t = r0 - q * r1;
    r0 = r1;
    r1 = t;
    t = s0 - q * s1;
    s0 = s1;
    s1 = t;
  }
  if (s1 == 0 || abs(s1) > bound) return std::nullopt;
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), r1.get_mpz_t(), s1.get_mpz_t());
  if (g != 1) return std::nullopt;
  mpq_class q(r1, s1);
  q.canonicalize();
  return q;
}

std::optional<std::vector<mpq_class>> reconstruct_from_two_primes(std::span<const std::uint64_t> a, std::uint64_t p,
                                                                  std::span<const std::uint64_t> b, std::uint64_t q) {
  if (a.size() != b.size()) throw ContractError("reconstruct: residue vectors differ in length");
  const mpz_class P(static_cast<unsigned long>(p)), Q(static_cast<unsigned long>(q));
  const mpz_class M = P * Q;
  mpz_class p_inv_mod_q;
  mpz_invert(p_inv_mod_q.get_mpz_t(), P.get_mpz_t(), Q.get_mpz_t());
  std::vector<mpq_class> out;
  out.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    // x = a + P * ((b - a) * P^{-1} mod Q)
    mpz_class diff = mpz_class(static_cast<unsigned long>(b[i])) - mpz_class(static_cast<unsigned long>(a[i]));
    mpz_class t = (diff * p_inv_mod_q) % Q;
    if (t < 0) t += Q;
    mpz_class x = mpz_class(static_cast<unsigned long>(a[i])) + P * t;
    auto r = rational_reconstruct(x, M);
    if (!r) return std::nullopt;
    out.push_back(*r);
  }
  return out;
}

}  // namespace hessiana
