#pragma once

#include <concepts>
#include <cstdint>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include <gmpxx.h>

#include "hhcat/errors.hpp"

namespace hhcat {

namespace detail {

using i128 = __int128;
using u128 = unsigned __int128;

inline u128 uabs128(i128 v) { return v < 0 ? u128(-v) : u128(v); }

inline u128 gcd128(u128 a, u128 b) {
  if (a == 0) return b;
  if (b == 0) return a;
  auto ctz = [](u128 v) {
    auto lo = static_cast<std::uint64_t>(v);
    if (lo != 0) return __builtin_ctzll(lo);
    return 64 + __builtin_ctzll(static_cast<std::uint64_t>(v >> 64));
  };
  int shift = ctz(a | b);
  a >>= ctz(a);
  do {
    b >>= ctz(b);
    if (a > b) std::swap(a, b);
    b -= a;
  } while (b != 0);
  return a << shift;
}

// Small values keep |num| and den below 2^62 so that every intermediate of
// one add or multiply fits in a signed 128-bit integer.
constexpr std::int64_t kSmallLimit = std::int64_t(1) << 62;

inline bool fits_small(i128 v) { return v > -i128(kSmallLimit) && v < i128(kSmallLimit); }

inline mpz_class mpz_from_i128(i128 v) {
  bool neg = v < 0;
  u128 u = uabs128(v);
  mpz_class hi(static_cast<unsigned long>(static_cast<std::uint64_t>(u >> 64)));
  mpz_class lo(static_cast<unsigned long>(static_cast<std::uint64_t>(u)));
  mpz_class r = (hi << 64) + lo;
  return neg ? mpz_class(-r) : r;
}

}  // namespace detail

// Exact rational number. Values whose numerator and denominator are small are
// kept inline; anything larger lives in a shared immutable mpq_class.
class Rational {
 public:
  Rational() = default;
  template <std::integral I>
  Rational(I n) {  // NOLINT: implicit by design
    assign_int(detail::i128(n));
  }
  Rational(long long n, long long d) {
    if (d == 0) throw Error("rational with zero denominator");
    assign(detail::i128(n), detail::i128(d));
  }
  explicit Rational(const mpq_class& q) { set_from_mpq(q); }

  static Rational parse(std::string_view text) {
    std::string s(text);
    auto slash = s.find('/');
    try {
      if (slash == std::string::npos) return Rational(mpq_class(mpz_class(s, 10)));
      mpz_class n(s.substr(0, slash), 10), d(s.substr(slash + 1), 10);
      if (d == 0) throw Error("rational with zero denominator: " + s);
      mpq_class q(n, d);
      q.canonicalize();
      return Rational(q);
    } catch (const std::invalid_argument&) {
      throw Error("not a rational number: '" + s + "'");
    }
  }

  bool is_zero() const { return !big_ && num_ == 0; }
  bool is_one() const { return !big_ && num_ == 1 && den_ == 1; }
  bool is_small() const { return !big_; }
  std::int64_t small_num() const { return num_; }
  std::int64_t small_den() const { return den_; }

  mpq_class to_mpq() const {
    if (big_) return *big_;
    return mpq_class(mpz_from_ll(num_), mpz_from_ll(den_));
  }

  std::string to_string() const {
    if (big_) return big_->get_str();
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  Rational operator-() const {
    if (big_) return Rational(mpq_class(-*big_));
    Rational r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
  }

  Rational inverse() const {
    if (is_zero()) throw Error("division by zero");
    if (big_) return Rational(mpq_class(1 / *big_));
    Rational r;
    if (num_ < 0) {
      r.num_ = -den_;
      r.den_ = -num_;
    } else {
      r.num_ = den_;
      r.den_ = num_;
    }
    return r;
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) {
      using detail::i128;
      if (a.den_ == 1 && b.den_ == 1) {
        Rational r;
        r.assign_int(i128(a.num_) + b.num_);
        return r;
      }
      if (a.den_ == b.den_) {
        Rational r;
        r.assign(i128(a.num_) + b.num_, i128(a.den_));
        return r;
      }
      Rational r;
      r.assign(i128(a.num_) * b.den_ + i128(b.num_) * a.den_, i128(a.den_) * b.den_);
      return r;
    }
    return Rational(mpq_class(a.to_mpq() + b.to_mpq()));
  }
  friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

  friend Rational operator*(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) {
      using detail::i128;
      if (a.num_ == 0 || b.num_ == 0) return Rational();
      if (a.den_ == 1 && b.den_ == 1) {
        Rational r;
        r.assign_int(i128(a.num_) * b.num_);
        return r;
      }
      Rational r;
      r.assign(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
      return r;
    }
    if (a.is_zero() || b.is_zero()) return Rational();
    return Rational(mpq_class(a.to_mpq() * b.to_mpq()));
  }
  friend Rational operator/(const Rational& a, const Rational& b) { return a * b.inverse(); }

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
    if (a.big_ && b.big_) return *a.big_ == *b.big_;
    return false;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

  static const char* field_name() { return "rationals"; }

 private:
  static mpz_class mpz_from_ll(long long v) {
    mpz_class z;
    mpz_set_si(z.get_mpz_t(), v);
    return z;
  }

  void set_big(mpq_class q) { big_ = std::make_shared<const mpq_class>(std::move(q)); }

  void set_from_mpq(const mpq_class& q) {
    const mpz_class& n = q.get_num();
    const mpz_class& d = q.get_den();
    if (n.fits_slong_p() && d.fits_slong_p()) {
      long nn = n.get_si(), dd = d.get_si();
      if (detail::fits_small(nn) && detail::fits_small(dd)) {
        num_ = nn;
        den_ = dd;
        big_.reset();
        return;
      }
    }
    num_ = 0;
    den_ = 1;
    set_big(q);
  }

  void assign_int(detail::i128 n) {
    if (detail::fits_small(n)) {
      num_ = static_cast<std::int64_t>(n);
      den_ = 1;
      big_.reset();
    } else {
      num_ = 0;
      den_ = 1;
      set_big(mpq_class(detail::mpz_from_i128(n)));
    }
  }

  void assign(detail::i128 n, detail::i128 d) {
    using detail::i128;
    using detail::u128;
    if (n == 0) {
      num_ = 0;
      den_ = 1;
      big_.reset();
      return;
    }
    if (d < 0) {
      n = -n;
      d = -d;
    }
    u128 g = detail::gcd128(detail::uabs128(n), u128(d));
    if (g > 1) {
      n /= i128(g);
      d /= i128(g);
    }
    if (detail::fits_small(n) && detail::fits_small(d)) {
      num_ = static_cast<std::int64_t>(n);
      den_ = static_cast<std::int64_t>(d);
      big_.reset();
    } else {
      num_ = 0;
      den_ = 1;
      mpq_class q(detail::mpz_from_i128(n), detail::mpz_from_i128(d));
      set_big(std::move(q));
    }
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  std::shared_ptr<const mpq_class> big_;
};

// Element of F_p. The modulus is per thread and set with ModP::Scope; values
// from different moduli must never meet.
class ModP {
 public:
  class Scope {
   public:
    explicit Scope(std::uint32_t p) : saved_(modulus_ref()) {
      if (!is_prime(p)) throw Error("prime field modulus is not a prime below 2^31: " + std::to_string(p));
      modulus_ref() = p;
    }
    ~Scope() { modulus_ref() = saved_; }
    Scope(const Scope&) = delete;
    Scope& operator=(const Scope&) = delete;

   private:
    std::uint32_t saved_;
  };

  ModP() = default;
  template <std::integral I>
  ModP(I v) {  // NOLINT
    detail::i128 p = modulus();
    detail::i128 r = detail::i128(v) % p;
    if (r < 0) r += p;
    v_ = static_cast<std::uint32_t>(r);
  }

  static std::uint32_t modulus() {
    std::uint32_t p = modulus_ref();
    if (p == 0) throw Error("prime field used outside a ModP::Scope");
    return p;
  }

  static bool is_prime(std::uint32_t p) {
    if (p < 2 || p >= (1u << 31)) return false;
    for (std::uint64_t d = 2; d * d <= p; ++d)
      if (p % d == 0) return false;
    return true;
  }

  static ModP from_rational(const Rational& r) {
    mpq_class q = r.to_mpq();
    mpz_class p(static_cast<unsigned long>(modulus()));
    mpz_class n = q.get_num() % p, d = q.get_den() % p;
    if (n < 0) n += p;
    if (d == 0) throw Error("rational " + r.to_string() + " has a denominator divisible by p");
    ModP nn, dd;
    nn.v_ = static_cast<std::uint32_t>(n.get_ui());
    dd.v_ = static_cast<std::uint32_t>(d.get_ui());
    return nn / dd;
  }

  std::uint32_t value() const { return v_; }
  bool is_zero() const { return v_ == 0; }
  bool is_one() const { return v_ == 1; }

  ModP operator-() const {
    ModP r;
    r.v_ = v_ == 0 ? 0 : modulus() - v_;
    return r;
  }
  ModP inverse() const {
    if (v_ == 0) throw Error("division by zero");
    std::uint64_t p = modulus(), base = v_, e = p - 2, acc = 1;
    while (e) {
      if (e & 1) acc = acc * base % p;
      base = base * base % p;
      e >>= 1;
    }
    ModP r;
    r.v_ = static_cast<std::uint32_t>(acc);
    return r;
  }

  friend ModP operator+(ModP a, ModP b) {
    std::uint32_t p = modulus();
    std::uint32_t s = a.v_ + b.v_;
    if (s >= p) s -= p;
    ModP r;
    r.v_ = s;
    return r;
  }
  friend ModP operator-(ModP a, ModP b) { return a + (-b); }
  friend ModP operator*(ModP a, ModP b) {
    ModP r;
    r.v_ = static_cast<std::uint32_t>(std::uint64_t(a.v_) * b.v_ % modulus());
    return r;
  }
  friend ModP operator/(ModP a, ModP b) { return a * b.inverse(); }
  ModP& operator+=(ModP o) { return *this = *this + o; }
  ModP& operator-=(ModP o) { return *this = *this - o; }
  ModP& operator*=(ModP o) { return *this = *this * o; }
  ModP& operator/=(ModP o) { return *this = *this / o; }
  friend bool operator==(ModP a, ModP b) { return a.v_ == b.v_; }
  friend bool operator!=(ModP a, ModP b) { return a.v_ != b.v_; }

  std::string to_string() const { return std::to_string(v_); }
  friend std::ostream& operator<<(std::ostream& os, ModP x) { return os << x.v_; }
  static const char* field_name() { return "prime field"; }

 private:
  static std::uint32_t& modulus_ref() {
    thread_local std::uint32_t p = 0;
    return p;
  }
  std::uint32_t v_ = 0;
};

template <class K>
concept Field = requires(K a, K b) {
  { a + b } -> std::convertible_to<K>;
  { a * b } -> std::convertible_to<K>;
  { a / b } -> std::convertible_to<K>;
  { -a } -> std::convertible_to<K>;
  { a.is_zero() } -> std::convertible_to<bool>;
  { a.inverse() } -> std::convertible_to<K>;
  { a.to_string() } -> std::convertible_to<std::string>;
  K(1);
};

// Maps an exact rational (as read from input) into K.
template <Field K>
K field_cast(const Rational& r);

template <>
inline Rational field_cast<Rational>(const Rational& r) { return r; }

template <>
inline ModP field_cast<ModP>(const Rational& r) { return ModP::from_rational(r); }

}  // namespace hhcat
