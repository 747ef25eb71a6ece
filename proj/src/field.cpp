#include "hessiana/field.hpp"

#include <charconv>

namespace hessiana {

namespace {

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mul_mod(r, a, m);
    a = mul_mod(a, a, m);
    e >>= 1;
  }
  return r;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t small : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % small == 0) return n == small;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // Deterministic witness set for all 64-bit integers.
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

FieldSpec FieldSpec::modular(std::uint64_t p) {
  if (p <= 3 || !hessiana::is_prime(p)) throw ContractError("field prime must be a prime > 3, got " + std::to_string(p));
  if (p >= (1ULL << 32)) throw ContractError("field prime must be below 2^32, got " + std::to_string(p));
  return {Kind::prime, p};
}

std::string FieldSpec::to_string() const {
  return is_prime() ? "p:" + std::to_string(prime) : "rational";
}

FieldSpec FieldSpec::parse(std::string_view text) {
  if (text == "rational") return rational();
  if (text.size() > 2 && text.substr(0, 2) == "p:") {
    std::uint64_t p = 0;
    auto digits = text.substr(2);
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), p);
    if (ec != std::errc{} || ptr != digits.data() + digits.size())
      throw ContractError("malformed field spec '" + std::string(text) + "'");
    return modular(p);
  }
  throw ContractError("unknown field spec '" + std::string(text) + "' (expected rational or p:PRIME)");
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw ContractError("Rng::below: empty range");
  const std::uint64_t limit = ~0ULL - (~0ULL % bound);
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % bound;
}

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
  auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<std::int64_t>(span == 0 ? engine_() : below(span));
}

Rng Rng::fork(std::uint64_t stream) const {
  return Rng(splitmix64(seed_ ^ splitmix64(stream + 0x632BE59BD9B4E019ULL)));
}

std::uint64_t next_prime(std::uint64_t n) {
  if (n < 5) n = 5;
  while (!is_prime(n)) ++n;
  if (n >> 32) throw ContractError("next_prime: no prime below 2^32 at or after the given value");
  return n;
}

std::uint64_t random_prime(Rng& rng) {
  for (;;) {
    std::uint64_t candidate = (1ULL << 31) + rng.below(1ULL << 31);
    if (is_prime(candidate)) return candidate;
  }
}

PrimeField::PrimeField(std::uint64_t p) : p_(p) {
  FieldSpec::modular(p);
  barrett_ = ~0ULL / p;
}

PrimeField::value_type PrimeField::pow(value_type a, std::uint64_t e) const {
  value_type r = 1;
  while (e) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

PrimeField::value_type PrimeField::inv(value_type a) const {
  if (a == 0) throw std::domain_error("inverse of zero in F_" + std::to_string(p_));
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = static_cast<std::int64_t>(p_), new_r = static_cast<std::int64_t>(a);
  while (new_r != 0) {
    std::int64_t q = r / new_r;
    std::int64_t tmp = t - q * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - q * new_r;
    r = new_r;
    new_r = tmp;
  }
  if (t < 0) t += static_cast<std::int64_t>(p_);
  return static_cast<value_type>(t);
}

PrimeField::value_type PrimeField::from_int(std::int64_t v) const {
  std::int64_t m = v % static_cast<std::int64_t>(p_);
  if (m < 0) m += static_cast<std::int64_t>(p_);
  return static_cast<value_type>(m);
}

PrimeField::value_type PrimeField::from_rational(const mpq_class& q) const {
  mpz_class pz(static_cast<unsigned long>(p_));
  mpz_class num = q.get_num() % pz;
  if (num < 0) num += pz;
  mpz_class den = q.get_den() % pz;
  if (den == 0) throw std::domain_error("denominator " + q.get_den().get_str() + " vanishes modulo " + std::to_string(p_));
  return div(num.get_ui(), den.get_ui());
}

RationalField::value_type RationalField::inv(const value_type& a) const {
  if (sgn(a) == 0) throw std::domain_error("inverse of zero rational");
  return 1 / a;
}

mpq_class parse_rational(std::string_view text) {
  std::string s(text);
  auto valid_int = [](std::string_view part) {
    if (part.empty()) return false;
    std::size_t i = (part[0] == '-' || part[0] == '+') ? 1 : 0;
    if (i == part.size()) return false;
    for (; i < part.size(); ++i)
      if (part[i] < '0' || part[i] > '9') return false;
    return true;
  };
  auto slash = s.find('/');
  std::string num = s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!num.empty() && num[0] == '+') num.erase(0, 1);
  if (!valid_int(num) || !valid_int(den) || den[0] == '-' || den[0] == '+')
    throw ContractError("malformed rational '" + s + "'");
  mpq_class q{mpz_class(num), mpz_class(den)};
  if (q.get_den() == 0) throw ContractError("zero denominator in '" + s + "'");
  q.canonicalize();
  return q;
}

}  // namespace hessiana
