#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace qvwp {

// Exact rational step size.  Keeping s rational lets special spectral points
// such as z = -kappa - upsilon - n*s and half-step shifts be synthesized
// without accumulating drift across identities.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  constexpr Rational() = default;

  Rational(std::int64_t n, std::int64_t d = 1) : num(n), den(d) {
    if (den == 0) throw std::invalid_argument("Rational: zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  double to_double() const {
    return static_cast<double>(num) / static_cast<double>(den);
  }

  Rational half() const { return Rational(num, 2 * den); }
  Rational twice() const { return Rational(2 * num, den); }

  std::string str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
  }

  // Accepts "p" or "p/q" with optional sign on p.
  static Rational parse(const std::string& text) {
    auto slash = text.find('/');
    try {
      if (slash == std::string::npos) {
        std::size_t used = 0;
        std::int64_t n = std::stoll(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return Rational(n);
      }
      std::size_t used_n = 0, used_d = 0;
      std::int64_t n = std::stoll(text.substr(0, slash), &used_n);
      std::int64_t d = std::stoll(text.substr(slash + 1), &used_d);
      if (used_n != slash || used_d != text.size() - slash - 1)
        throw std::invalid_argument(text);
      return Rational(n, d);
    } catch (const std::invalid_argument&) {
      throw std::invalid_argument("Rational: cannot parse '" + text + "'");
    } catch (const std::out_of_range&) {
      throw std::invalid_argument("Rational: out of range '" + text + "'");
    }
  }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num == b.num && a.den == b.den;
  }
};

}  // namespace qvwp
