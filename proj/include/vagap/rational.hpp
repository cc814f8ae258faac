#pragma once

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>

namespace vagap {

/// Exact signed fraction used for argument weights and option scores, so
/// that summing contributions is order-independent.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  /// Converts a finite double through its shortest round-trip decimal form,
  /// so 0.1 becomes exactly 1/10. Throws std::invalid_argument on NaN/inf.
  static Rational from_double(double v);

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }

  double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }
  int sign() const noexcept { return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0); }
  bool is_zero() const noexcept { return num_ == 0; }
  Rational abs() const noexcept { return num_ < 0 ? Rational(-num_, den_) : *this; }

  std::string to_string() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a);
  Rational& operator+=(const Rational& o) { return *this = *this + o; }

  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace vagap
