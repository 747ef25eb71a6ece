#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace hessiana {

/// Raised when an input violates a documented precondition.
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Base field of a form or matrix: the rationals or F_p with 3 < p < 2^32.
struct FieldSpec {
  enum class Kind { rational, prime };

  Kind kind = Kind::rational;
  std::uint64_t prime = 0;

  static FieldSpec rational() { return {}; }
  static FieldSpec modular(std::uint64_t p);

  bool is_prime() const { return kind == Kind::prime; }
  std::string to_string() const;
  static FieldSpec parse(std::string_view text);

  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;
};

bool is_prime(std::uint64_t n);
/// First prime above 2^31, and the next one (second-prime confirmations).
inline constexpr std::uint64_t kDefaultPrime = 2147483659ULL;
inline constexpr std::uint64_t kSecondPrime = 2147483693ULL;

/// Smallest prime >= n that is usable as a field modulus.
std::uint64_t next_prime(std::uint64_t n);

/// Deterministic random source. Uniform sampling is done here rather than
/// through <random> distributions so streams are identical across standard
/// libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, bound); bound > 0.
  std::uint64_t below(std::uint64_t bound);
  /// Uniform in [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  /// Child stream that depends only on (seed, stream), not on usage so far.
  Rng fork(std::uint64_t stream) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

/// Prime sampled uniformly from [2^31, 2^32).
std::uint64_t random_prime(Rng& rng);

class PrimeField {
 public:
  using value_type = std::uint64_t;

  explicit PrimeField(std::uint64_t p);

  std::uint64_t modulus() const { return p_; }
  FieldSpec spec() const { return FieldSpec::modular(p_); }

  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  bool is_zero(value_type a) const { return a == 0; }
  bool contains(value_type a) const { return a < p_; }

  value_type add(value_type a, value_type b) const {
    value_type s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  value_type sub(value_type a, value_type b) const { return a >= b ? a - b : a + p_ - b; }
  value_type neg(value_type a) const { return a == 0 ? 0 : p_ - a; }
  value_type mul(value_type a, value_type b) const { return reduce(a * b); }
  /// a*b + c for reduced operands; the sum stays below 2^64.
  value_type mul_add(value_type a, value_type b, value_type c) const { return reduce(a * b + c); }
  value_type inv(value_type a) const;
  value_type div(value_type a, value_type b) const { return mul(a, inv(b)); }
  value_type pow(value_type a, std::uint64_t e) const;

  value_type from_int(std::int64_t v) const;
  value_type from_rational(const mpq_class& q) const;
  mpq_class to_rational(value_type a) const { return mpq_class(mpz_class(static_cast<unsigned long>(a))); }
  std::string format(value_type a) const { return std::to_string(a); }
  value_type random(Rng& rng) const { return rng.below(p_); }
  value_type random_nonzero(Rng& rng) const { return 1 + rng.below(p_ - 1); }

  /// Barrett reduction of any 64-bit value.
  value_type reduce(std::uint64_t x) const {
    std::uint64_t q = static_cast<std::uint64_t>((static_cast<unsigned __int128>(x) * barrett_) >> 64);
    std::uint64_t r = x - q * p_;
    return r >= p_ ? r - p_ : r;
  }

  friend bool operator==(const PrimeField& a, const PrimeField& b) { return a.p_ == b.p_; }

 private:
  std::uint64_t p_;
  std::uint64_t barrett_;
};

class RationalField {
 public:
  using value_type = mpq_class;

  FieldSpec spec() const { return FieldSpec::rational(); }

  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  bool is_zero(const value_type& a) const { return sgn(a) == 0; }
  bool contains(const value_type&) const { return true; }

  value_type add(const value_type& a, const value_type& b) const { return a + b; }
  value_type sub(const value_type& a, const value_type& b) const { return a - b; }
  value_type neg(const value_type& a) const { return -a; }
  value_type mul(const value_type& a, const value_type& b) const { return a * b; }
  value_type mul_add(const value_type& a, const value_type& b, const value_type& c) const { return a * b + c; }
  value_type inv(const value_type& a) const;
  value_type div(const value_type& a, const value_type& b) const { return a * inv(b); }

  value_type from_int(std::int64_t v) const { return mpq_class(static_cast<long>(v)); }
  value_type from_rational(const mpq_class& q) const { return q; }
  mpq_class to_rational(const value_type& a) const { return a; }
  std::string format(const value_type& a) const { return a.get_str(); }
  /// Small integers keep exact computations cheap while staying generic.
  value_type random(Rng& rng) const { return from_int(rng.uniform_int(-50, 50)); }
  value_type random_nonzero(Rng& rng) const {
    std::int64_t v = rng.uniform_int(1, 50);
    return from_int(rng.below(2) ? v : -v);
  }

  friend bool operator==(const RationalField&, const RationalField&) { return true; }
};

mpq_class parse_rational(std::string_view text);

}  // namespace hessiana
