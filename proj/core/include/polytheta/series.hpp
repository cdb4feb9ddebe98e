#pragma once

// Truncated formal power series in q with exact int64 coefficients.
//
// A Series of order N stores the coefficients of q^0 .. q^(N-1) and says
// nothing about higher exponents. Binary operations truncate to the smaller
// input order. Every addition and multiplication is overflow-checked; a
// result that does not fit in int64 raises OverflowError.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace polytheta {

using Coeff = std::int64_t;

class Series {
 public:
  /// Zero series of the given order (order >= 1).
  explicit Series(std::size_t order);
  /// Takes ownership of the coefficient vector; order = coeffs.size() >= 1.
  explicit Series(std::vector<Coeff> coeffs);

  static Series one(std::size_t order);
  /// c * q^exponent, truncated (zero if exponent >= order).
  static Series monomial(std::size_t exponent, Coeff c, std::size_t order);

  std::size_t order() const noexcept { return coeffs_.size(); }
  Coeff operator[](std::size_t exponent) const { return coeffs_.at(exponent); }
  std::span<const Coeff> coeffs() const noexcept { return coeffs_; }

  std::size_t nonzero_count() const noexcept;
  bool is_zero() const noexcept;

  friend bool operator==(const Series&, const Series&) = default;

 private:
  std::vector<Coeff> coeffs_;
};

Coeff checked_add(Coeff a, Coeff b);
Coeff checked_mul(Coeff a, Coeff b);

Series series_add(const Series& a, const Series& b);
Series series_sub(const Series& a, const Series& b);
Series series_scale(const Series& s, Coeff c);

/// Cauchy product truncated at min(order). Iterates only over the nonzero
/// coefficients of the sparser factor.
Series series_mul(const Series& a, const Series& b);

/// Multiply by q^e, keeping the order of s.
Series series_shift(const Series& s, std::size_t e);

/// Substitute q -> q^k (k >= 1), keeping the order of s.
Series series_substitute(const Series& s, std::size_t k);

/// Keep only exponents below new_order (new_order <= s.order()).
Series series_truncate(const Series& s, std::size_t new_order);

inline Series operator+(const Series& a, const Series& b) { return series_add(a, b); }
inline Series operator-(const Series& a, const Series& b) { return series_sub(a, b); }
inline Series operator*(const Series& a, const Series& b) { return series_mul(a, b); }

struct Mismatch {
  std::size_t exponent;
  Coeff lhs;
  Coeff rhs;
};

struct SeriesComparison {
  bool equal;
  std::optional<Mismatch> first_difference;

  explicit operator bool() const noexcept { return equal; }
};

/// Compares coefficients of exponents < n. Throws DomainError when n exceeds
/// either order.
SeriesComparison series_equal_upto(const Series& a, const Series& b, std::size_t n);

}  // namespace polytheta
