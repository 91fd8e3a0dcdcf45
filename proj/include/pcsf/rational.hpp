#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace pcsf {

using Rational = mpq_class;

/// a/b in canonical form. mpq_class(a, b) leaves the fraction unreduced.
inline Rational frac(long a, long b) {
  Rational q(a, b);
  q.canonicalize();
  return q;
}

/// Parses "a", "a/b", "-a/b" or a finite decimal such as "0.125" exactly.
/// Throws ValidationError on malformed input.
Rational parse_rational(std::string_view text);

/// Canonical "a/b" (or "a" when the denominator is 1).
std::string to_string(const Rational& q);

double to_double(const Rational& q);

/// Nonnegative rational or +infinity. Infinite penalties force a pair to be
/// connected.
class Penalty {
public:
  Penalty() = default;
  Penalty(Rational v) : value_(std::move(v)) {}  // NOLINT(implicit)
  Penalty(long v) : value_(v) {}                  // NOLINT(implicit)

  static Penalty infinite() {
    Penalty p;
    p.infinite_ = true;
    return p;
  }

  bool is_infinite() const { return infinite_; }
  /// Finite value; zero when infinite.
  const Rational& value() const { return value_; }

  friend bool operator==(const Penalty& a, const Penalty& b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }

private:
  Rational value_{0};
  bool infinite_ = false;
};

/// "inf" or a rational.
Penalty parse_penalty(std::string_view text);
std::string to_string(const Penalty& p);

}  // namespace pcsf
