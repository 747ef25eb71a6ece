#include "hessiana/polymod.hpp"

#include <algorithm>

namespace hessiana {

namespace {

void trim(PolyMod& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

// Remainder of a modulo b (b nonzero); returns quotient through q if given.
PolyMod divmod(const PrimeField& F, PolyMod a, const PolyMod& b, PolyMod* q = nullptr) {
  trim(a);
  const std::size_t db = b.size() - 1;
  const auto lead_inv = F.inv(b.back());
  if (q) q->assign(a.size() >= b.size() ? a.size() - db : 0, 0);
  while (a.size() >= b.size()) {
    const std::size_t shift = a.size() - b.size();
    const auto factor = F.mul(a.back(), lead_inv);
    if (q) (*q)[shift] = factor;
    for (std::size_t i = 0; i <= db; ++i) a[shift + i] = F.sub(a[shift + i], F.mul(factor, b[i]));
    trim(a);
  }
  return a;
}

PolyMod mulmod(const PrimeField& F, const PolyMod& a, const PolyMod& b, const PolyMod& m) {
  if (a.empty() || b.empty()) return {};
  PolyMod r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = F.mul_add(a[i], b[j], r[i + j]);
  return divmod(F, std::move(r), m);
}

PolyMod powmod(const PrimeField& F, PolyMod base, std::uint64_t e, const PolyMod& m) {
  PolyMod r = divmod(F, {1}, m);
  base = divmod(F, std::move(base), m);
  while (e) {
    if (e & 1) r = mulmod(F, r, base, m);
    base = mulmod(F, base, base, m);
    e >>= 1;
  }
  return r;
}

PolyMod gcd(const PrimeField& F, PolyMod a, PolyMod b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    PolyMod r = divmod(F, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    const auto inv = F.inv(a.back());
    for (auto& c : a) c = F.mul(c, inv);
  }
  return a;
}

void split(const PrimeField& F, const PolyMod& g, Rng& rng, std::vector<std::uint64_t>& roots) {
  if (g.size() <= 1) return;
  if (g.size() == 2) {
    roots.push_back(F.neg(F.div(g[0], g[1])));
    return;
  }
  for (;;) {
    const std::uint64_t delta = F.random(rng);
    PolyMod h = powmod(F, {delta, 1}, (F.modulus() - 1) / 2, g);
    if (h.empty()) h = {0};
    h[0] = F.sub(h[0], 1);
    PolyMod d = gcd(F, g, h);
    if (d.size() > 1 && d.size() < g.size()) {
      PolyMod q;
      divmod(F, g, d, &q);
      split(F, d, rng, roots);
      split(F, q, rng, roots);
      return;
    }
  }
}

}  // namespace

std::vector<std::uint64_t> roots_mod_p(const PrimeField& F, PolyMod f, Rng& rng) {
  trim(f);
  if (f.empty()) throw ContractError("roots_mod_p: zero polynomial");
  std::vector<std::uint64_t> roots;
  if (f.size() == 1) return roots;
  PolyMod xp = powmod(F, {0, 1}, F.modulus(), f);
  xp.resize(std::max<std::size_t>(xp.size(), 2), 0);
  xp[1] = F.sub(xp[1], 1);
  PolyMod g = gcd(F, f, xp);
  split(F, g, rng, roots);
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace hessiana
