#pragma once

// Coefficient fields the rank pipeline is templated over: a prime field
// F_p with p < 2^31 (certified exact arithmetic) and double-precision
// reals (the floating backend). Both expose the same element-level API.

#include <cstdint>
#include <stdexcept>
#include <string>

namespace terracini {

namespace detail {

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t acc = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) acc = mulmod_u64(acc, base, m);
    base = mulmod_u64(base, base, m);
    exp >>= 1;
  }
  return acc;
}

}  // namespace detail

// Deterministic Miller-Rabin, valid for the whole 64-bit range.
inline bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int r = 0;
  while ((d & 1) == 0) { d >>= 1; ++r; }
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = detail::powmod_u64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < r; ++i) {
      x = detail::mulmod_u64(x, x, n);
      if (x == n - 1) { composite = false; break; }
    }
    if (composite) return false;
  }
  return true;
}

inline constexpr std::uint32_t kDefaultPrime = 2147483647u;  // 2^31 - 1
inline constexpr std::uint32_t kMinScanPrime = 1u << 30;

// Largest prime <= x. Used to derive independent moduli for repeated trials.
inline std::uint32_t prev_prime_u32(std::uint32_t x) {
  for (std::uint32_t v = x; v >= 2; --v) {
    if (is_prime_u64(v)) return v;
  }
  throw std::invalid_argument("prev_prime_u32: no prime <= x");
}

// idx-th prime counting down from 2^31 - 1 (idx = 0 gives 2^31 - 1 itself).
inline std::uint32_t nth_scan_prime(unsigned idx) {
  std::uint32_t p = kDefaultPrime;
  for (unsigned i = 0; i < idx; ++i) p = prev_prime_u32(p - 1);
  return p;
}

// F_p with canonical representatives in [0, p). Multiplication reduces a
// 64-bit product with one Barrett step (single high multiply), which is what
// keeps the elimination inner loop fast. Requires p prime, 2 <= p < 2^31.
class PrimeField {
 public:
  using Element = std::uint32_t;
  static constexpr bool exact = true;

  explicit PrimeField(std::uint32_t p) : p_(p) {
    if (p < 2 || (p >> 31) != 0)
      throw std::invalid_argument("PrimeField: modulus must satisfy 2 <= p < 2^31");
    if (!is_prime_u64(p))
      throw std::invalid_argument("PrimeField: modulus " + std::to_string(p) + " is not prime");
    barrett_ = static_cast<std::uint64_t>((static_cast<unsigned __int128>(1) << 64) / p_);
  }

  std::uint32_t modulus() const { return p_; }

  Element zero() const { return 0; }
  Element one() const { return p_ == 1 ? 0 : 1; }
  bool is_zero(Element a) const { return a == 0; }

  Element add(Element a, Element b) const {
    std::uint32_t s = a + b;  // no overflow: a, b < 2^31
    return s >= p_ ? s - p_ : s;
  }
  Element sub(Element a, Element b) const { return a >= b ? a - b : a + p_ - b; }
  Element neg(Element a) const { return a == 0 ? 0 : p_ - a; }

  // Reduce any 64-bit value mod p. One high multiply, one low multiply,
  // one conditional subtract (the Barrett quotient is off by at most 1).
  Element reduce_wide(std::uint64_t t) const {
    std::uint64_t q = static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(t) * barrett_) >> 64);
    std::uint64_t r = t - q * p_;
    if (r >= p_) r -= p_;
    return static_cast<Element>(r);
  }

  Element mul(Element a, Element b) const {
    return reduce_wide(static_cast<std::uint64_t>(a) * b);
  }

  Element pow(Element a, std::uint64_t e) const {
    Element acc = one(), base = a;
    while (e) {
      if (e & 1) acc = mul(acc, base);
      base = mul(base, base);
      e >>= 1;
    }
    return acc;
  }

  Element inv(Element a) const {
    if (a == 0) throw std::domain_error("PrimeField::inv: zero is not invertible");
    return pow(a, p_ - 2);
  }

  Element from_int(long long v) const {
    long long r = v % static_cast<long long>(p_);
    if (r < 0) r += p_;
    return static_cast<Element>(r);
  }

  std::string id() const { return "gf(" + std::to_string(p_) + ")"; }

 private:
  std::uint32_t p_;
  std::uint64_t barrett_;
};

struct RealField {
  using Element = double;
  static constexpr bool exact = false;

  Element zero() const { return 0.0; }
  Element one() const { return 1.0; }
  bool is_zero(Element a) const { return a == 0.0; }
  Element add(Element a, Element b) const { return a + b; }
  Element sub(Element a, Element b) const { return a - b; }
  Element neg(Element a) const { return -a; }
  Element mul(Element a, Element b) const { return a * b; }
  Element inv(Element a) const {
    if (a == 0.0) throw std::domain_error("RealField::inv: division by zero");
    return 1.0 / a;
  }
  Element from_int(long long v) const { return static_cast<double>(v); }
  std::string id() const { return "float64"; }
};

}  // namespace terracini
