#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include "fpbasis/error.hpp"

namespace fpbasis {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Exact number of the form numerator / 2^exponent.
///
/// Canonical form is maintained after every operation: either the exponent is
/// zero or the numerator is odd, and zero is stored as 0 / 2^0.  Numerators
/// below 2^62 in magnitude live inline; larger ones spill to a BigInt.  The
/// choice is a function of the value, so equality stays structural.
class DyadicRational {
 public:
  DyadicRational() = default;
  DyadicRational(long long v) { set_from_big_if_needed(v); }  // NOLINT(google-explicit-constructor)
  explicit DyadicRational(BigInt v) { assign(std::move(v), 0); }
  DyadicRational(BigInt num, std::uint32_t exponent) { assign(std::move(num), exponent); }

  DyadicRational(const DyadicRational& o) : small_(o.small_), exp_(o.exp_) {
    if (o.big_) big_ = std::make_unique<BigInt>(*o.big_);
  }
  DyadicRational(DyadicRational&&) noexcept = default;
  DyadicRational& operator=(const DyadicRational& o) {
    if (this != &o) {
      small_ = o.small_;
      exp_ = o.exp_;
      big_ = o.big_ ? std::make_unique<BigInt>(*o.big_) : nullptr;
    }
    return *this;
  }
  DyadicRational& operator=(DyadicRational&&) noexcept = default;

  /// 2^e for any integer e.
  static DyadicRational pow2(int e) {
    if (e >= 0) return DyadicRational(BigInt(1) << e);
    return make_small(1, static_cast<std::uint32_t>(-e));
  }

  /// Parses "3", "-0.375", "3/8" or "-5/1024".  Decimal strings must be
  /// exactly representable; fraction denominators must be powers of two.
  static DyadicRational parse(std::string_view text);

  BigInt numerator() const { return big_ ? *big_ : BigInt(small_); }
  std::uint32_t exponent() const { return exp_; }

  /// True when the numerator is held inline; small_numerator() is then valid.
  bool is_small() const { return !big_; }
  std::int64_t small_numerator() const { return small_; }

  int sign() const { return big_ ? big_->sign() : (small_ > 0) - (small_ < 0); }
  bool is_zero() const { return !big_ && small_ == 0; }
  bool is_integer() const { return exp_ == 0; }

  /// this * 2^e, exact.
  DyadicRational ldexp(int e) const {
    if (is_zero()) return {};
    if (e < 0) {
      if (exp_ > 0) return with_exponent(exp_ + static_cast<std::uint32_t>(-e));  // odd numerator
      if (!big_) return from_small(small_, static_cast<std::uint32_t>(-e));
      return DyadicRational(*big_, static_cast<std::uint32_t>(-e));
    }
    const auto shift = static_cast<std::uint32_t>(e);
    if (shift <= exp_) return with_exponent(exp_ - shift);
    const std::uint32_t up = shift - exp_;
    if (!big_ && up < 62) {
      const std::int64_t mag = small_ < 0 ? -small_ : small_;
      if (mag < (std::int64_t{1} << (62 - up))) return make_small(small_ * (std::int64_t{1} << up), 0);
    }
    return DyadicRational(BigInt(numerator() << up), 0);
  }

  /// Largest integer not exceeding the value.
  BigInt floor() const {
    if (!big_) return BigInt(small_ >> exp_);  // arithmetic shift floors
    if (exp_ == 0) return *big_;
    // exp_ > 0 implies an odd numerator, so the value is never an integer here.
    if (big_->sign() >= 0) return *big_ >> exp_;
    return -(BigInt(-*big_) >> exp_) - 1;
  }

  /// floor() as a dyadic integer.
  DyadicRational floor_dyadic() const {
    if (!big_) return make_small(small_ >> exp_, 0);
    return DyadicRational(floor());
  }

  /// Smallest integer not below the value.
  BigInt ceil() const { return exp_ == 0 ? numerator() : floor() + 1; }

  double to_double() const {
    const double n = big_ ? big_->convert_to<double>() : static_cast<double>(small_);
    return std::ldexp(n, -static_cast<int>(exp_));
  }

  Rational to_rational() const {
    if (exp_ == 0) return Rational(numerator());
    return Rational(numerator(), BigInt(1) << exp_);
  }

  /// "n" for integers, "n/2^k" otherwise.
  std::string to_string() const {
    const std::string n = big_ ? big_->str() : std::to_string(small_);
    if (exp_ == 0) return n;
    return n + "/2^" + std::to_string(exp_);
  }

  DyadicRational operator-() const {
    if (!big_) return make_small(-small_, exp_);
    DyadicRational r;
    r.assign(BigInt(-*big_), exp_);
    return r;
  }

  friend DyadicRational abs(const DyadicRational& x) { return x.sign() < 0 ? -x : x; }

  friend DyadicRational operator+(const DyadicRational& a, const DyadicRational& b) {
    if (!a.big_ && !b.big_) {
      std::int64_t x = a.small_, y = b.small_;
      std::uint32_t e = a.exp_;
      bool ok = true;
      if (a.exp_ > b.exp_) {
        ok = shift_small(y, a.exp_ - b.exp_);
      } else if (b.exp_ > a.exp_) {
        ok = shift_small(x, b.exp_ - a.exp_);
        e = b.exp_;
      }
      std::int64_t sum = 0;
      if (ok && !__builtin_add_overflow(x, y, &sum)) return from_small(sum, e);
    }
    if (a.exp_ == b.exp_) return DyadicRational(a.numerator() + b.numerator(), a.exp_);
    if (a.exp_ > b.exp_) return DyadicRational(a.numerator() + (b.numerator() << (a.exp_ - b.exp_)), a.exp_);
    return DyadicRational((a.numerator() << (b.exp_ - a.exp_)) + b.numerator(), b.exp_);
  }
  friend DyadicRational operator-(const DyadicRational& a, const DyadicRational& b) {
    return a + (-b);
  }
  friend DyadicRational operator*(const DyadicRational& a, const DyadicRational& b) {
    if (!a.big_ && !b.big_) {
      std::int64_t prod = 0;
      if (!__builtin_mul_overflow(a.small_, b.small_, &prod)) return from_small(prod, a.exp_ + b.exp_);
    }
    return DyadicRational(a.numerator() * b.numerator(), a.exp_ + b.exp_);
  }
  DyadicRational& operator+=(const DyadicRational& o) { return *this = *this + o; }
  DyadicRational& operator-=(const DyadicRational& o) { return *this = *this - o; }
  DyadicRational& operator*=(const DyadicRational& o) { return *this = *this * o; }

  friend bool operator==(const DyadicRational& a, const DyadicRational& b) {
    if (a.exp_ != b.exp_ || bool(a.big_) != bool(b.big_)) return false;
    return a.big_ ? *a.big_ == *b.big_ : a.small_ == b.small_;
  }
  friend std::strong_ordering operator<=>(const DyadicRational& a, const DyadicRational& b) {
    if (!a.big_ && !b.big_) {
      if (a.exp_ == b.exp_) return a.small_ <=> b.small_;
      const std::uint32_t diff = a.exp_ > b.exp_ ? a.exp_ - b.exp_ : b.exp_ - a.exp_;
      if (diff < 64) {
        __int128 x = a.small_, y = b.small_;
        if (a.exp_ > b.exp_) y *= static_cast<__int128>(1) << diff;
        else x *= static_cast<__int128>(1) << diff;
        return x <=> y;
      }
    }
    int c = 0;
    if (a.exp_ == b.exp_) {
      c = a.numerator().compare(b.numerator());
    } else if (a.exp_ > b.exp_) {
      c = a.numerator().compare(BigInt(b.numerator() << (a.exp_ - b.exp_)));
    } else {
      c = BigInt(a.numerator() << (b.exp_ - a.exp_)).compare(b.numerator());
    }
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  static constexpr std::int64_t kSmallLimit = std::int64_t{1} << 62;

  static bool fits(std::int64_t v) { return v > -kSmallLimit && v < kSmallLimit; }

  /// v * 2^s in place; false on overflow of the inline range.
  static bool shift_small(std::int64_t& v, std::uint32_t s) {
    if (s >= 62) return v == 0;
    const std::int64_t mag = v < 0 ? -v : v;
    if (mag >= (kSmallLimit >> s)) return false;
    v *= std::int64_t{1} << s;
    return true;
  }

  /// Already canonical, inline numerator.
  static DyadicRational make_small(std::int64_t num, std::uint32_t exponent) {
    DyadicRational r;
    r.small_ = num;
    r.exp_ = num == 0 ? 0 : exponent;
    return r;
  }

  /// Any int64 numerator; normalizes and spills if needed.
  static DyadicRational from_small(std::int64_t num, std::uint32_t exponent) {
    if (!fits(num)) return DyadicRational(BigInt(num), exponent);
    if (num == 0) return {};
    if (exponent > 0) {
      const auto tz = static_cast<std::uint32_t>(__builtin_ctzll(static_cast<unsigned long long>(num)));
      const std::uint32_t shift = tz < exponent ? tz : exponent;
      num >>= shift;  // exact: the low bits are zero
      exponent -= shift;
    }
    return make_small(num, exponent);
  }

  DyadicRational with_exponent(std::uint32_t e) const {
    DyadicRational r(*this);
    r.exp_ = e;
    return r;
  }

  void set_from_big_if_needed(long long v) {
    if (fits(v)) {
      small_ = v;
    } else {
      big_ = std::make_unique<BigInt>(v);
    }
  }

  void assign(BigInt num, std::uint32_t exponent) {
    exp_ = exponent;
    if (num.is_zero()) {
      exp_ = 0;
      small_ = 0;
      big_.reset();
      return;
    }
    if (exp_ > 0) {
      const auto tz = static_cast<std::uint32_t>(boost::multiprecision::lsb(abs(num)));
      const std::uint32_t shift = tz < exp_ ? tz : exp_;
      if (shift > 0) {
        num = num.sign() < 0 ? BigInt(-(BigInt(-num) >> shift)) : BigInt(num >> shift);
        exp_ -= shift;
      }
    }
    if (num > -BigInt(kSmallLimit) && num < BigInt(kSmallLimit)) {
      small_ = num.convert_to<std::int64_t>();
      big_.reset();
    } else {
      small_ = 0;
      big_ = std::make_unique<BigInt>(std::move(num));
    }
  }

  std::int64_t small_ = 0;
  std::uint32_t exp_ = 0;
  std::unique_ptr<BigInt> big_;
};

/// Power-of-two exponent of a positive power of two, or nullopt.
inline std::optional<int> log2_exact(const DyadicRational& x) {
  if (x.sign() <= 0) return std::nullopt;
  const BigInt& n = x.numerator();
  const auto top = boost::multiprecision::msb(n);
  if (boost::multiprecision::lsb(n) != top) return std::nullopt;
  return static_cast<int>(top) - static_cast<int>(x.exponent());
}

inline DyadicRational DyadicRational::parse(std::string_view text) {
  auto fail = [&](const char* why) {
    return ParseError("invalid dyadic rational '" + std::string(text) + "': " + why);
  };
  if (text.empty()) throw fail("empty");
  std::string s(text);
  bool negative = false;
  std::size_t pos = 0;
  if (s[0] == '-' || s[0] == '+') {
    negative = s[0] == '-';
    pos = 1;
  }
  auto digits = [&](const std::string& d) {
    if (d.empty()) throw fail("missing digits");
    for (char ch : d)
      if (ch < '0' || ch > '9') throw fail("unexpected character");
    // cpp_int reads a leading zero as an octal prefix.
    const auto nz = d.find_first_not_of('0');
    return nz == std::string::npos ? BigInt(0) : BigInt(d.substr(nz));
  };
  DyadicRational value;
  if (auto slash = s.find('/'); slash != std::string::npos) {
    BigInt num = digits(s.substr(pos, slash - pos));
    const std::string den_text = s.substr(slash + 1);
    if (den_text.rfind("2^", 0) == 0) {  // the to_string form n/2^k
      const BigInt k = digits(den_text.substr(2));
      if (k > 1000000) throw fail("exponent too large");
      value = DyadicRational(num, k.convert_to<std::uint32_t>());
      return negative ? -value : value;
    }
    BigInt den = digits(den_text);
    if (den.is_zero()) throw fail("zero denominator");
    auto e = log2_exact(DyadicRational(den));
    if (!e) throw fail("denominator is not a power of two");
    value = DyadicRational(num, static_cast<std::uint32_t>(*e));
  } else if (auto dot = s.find('.'); dot != std::string::npos) {
    std::string int_part = s.substr(pos, dot - pos);
    std::string frac_part = s.substr(dot + 1);
    if (int_part.empty() && frac_part.empty()) throw fail("missing digits");
    BigInt num = digits(int_part + frac_part);
    const auto k = static_cast<unsigned>(frac_part.size());
    // num / 10^k = num / (2^k 5^k): exact iff 5^k divides num.
    BigInt five_k = boost::multiprecision::pow(BigInt(5), k);
    if (num % five_k != 0) throw fail("not exactly representable");
    value = DyadicRational(BigInt(num / five_k), k);
  } else {
    value = DyadicRational(digits(s.substr(pos)));
  }
  return negative ? -value : value;
}

inline std::ostream& operator<<(std::ostream& os, const DyadicRational& x) {
  return os << x.to_string();
}

/// Exact conversion of a rational with power-of-two denominator.
inline std::optional<DyadicRational> to_dyadic(const Rational& q) {
  const BigInt den = boost::multiprecision::denominator(q);
  auto e = log2_exact(DyadicRational(den));
  if (!e) return std::nullopt;
  return DyadicRational(BigInt(boost::multiprecision::numerator(q)),
                        static_cast<std::uint32_t>(*e));
}

}  // namespace fpbasis
