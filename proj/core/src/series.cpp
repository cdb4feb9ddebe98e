#include "polytheta/series.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "polytheta/error.hpp"

namespace polytheta {

namespace {

void require_order(std::size_t order) {
  if (order == 0) throw DomainError("series order must be positive");
}

}  // namespace

Series::Series(std::size_t order) {
  require_order(order);
  coeffs_.assign(order, 0);
}

Series::Series(std::vector<Coeff> coeffs) : coeffs_(std::move(coeffs)) {
  require_order(coeffs_.size());
}

Series Series::one(std::size_t order) { return monomial(0, 1, order); }

Series Series::monomial(std::size_t exponent, Coeff c, std::size_t order) {
  Series s(order);
  if (exponent < order) s.coeffs_[exponent] = c;
  return s;
}

std::size_t Series::nonzero_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(coeffs_.begin(), coeffs_.end(), [](Coeff c) { return c != 0; }));
}

bool Series::is_zero() const noexcept {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](Coeff c) { return c == 0; });
}

Coeff checked_add(Coeff a, Coeff b) {
  Coeff r;
  if (__builtin_add_overflow(a, b, &r))
    throw OverflowError("coefficient overflow in addition: " + std::to_string(a) + " + " +
                        std::to_string(b));
  return r;
}

Coeff checked_mul(Coeff a, Coeff b) {
  Coeff r;
  if (__builtin_mul_overflow(a, b, &r))
    throw OverflowError("coefficient overflow in multiplication: " + std::to_string(a) +
                        " * " + std::to_string(b));
  return r;
}

Series series_add(const Series& a, const Series& b) {
  const std::size_t order = std::min(a.order(), b.order());
  std::vector<Coeff> out(order);
  for (std::size_t e = 0; e < order; ++e) out[e] = checked_add(a[e], b[e]);
  return Series(std::move(out));
}

Series series_sub(const Series& a, const Series& b) {
  return series_add(a, series_scale(b, -1));
}

Series series_scale(const Series& s, Coeff c) {
  std::vector<Coeff> out(s.order());
  for (std::size_t e = 0; e < s.order(); ++e) out[e] = checked_mul(s[e], c);
  return Series(std::move(out));
}

Series series_mul(const Series& a, const Series& b) {
  const std::size_t order = std::min(a.order(), b.order());
  const Series& sparse = a.nonzero_count() <= b.nonzero_count() ? a : b;
  const Series& dense = &sparse == &a ? b : a;

  std::vector<std::pair<std::size_t, Coeff>> terms;
  for (std::size_t e = 0; e < order; ++e)
    if (sparse[e] != 0) terms.emplace_back(e, sparse[e]);

  const auto dense_coeffs = dense.coeffs();
  std::vector<Coeff> out(order, 0);
  for (const auto& [e, c] : terms) {
    for (std::size_t j = 0; e + j < order; ++j) {
      const Coeff d = dense_coeffs[j];
      if (d == 0) continue;
      out[e + j] = checked_add(out[e + j], checked_mul(c, d));
    }
  }
  return Series(std::move(out));
}

Series series_shift(const Series& s, std::size_t e) {
  std::vector<Coeff> out(s.order(), 0);
  for (std::size_t n = 0; n + e < s.order(); ++n) out[n + e] = s[n];
  return Series(std::move(out));
}

Series series_substitute(const Series& s, std::size_t k) {
  if (k == 0) throw DomainError("substitution q -> q^k requires k >= 1");
  std::vector<Coeff> out(s.order(), 0);
  for (std::size_t n = 0; n * k < s.order(); ++n) out[n * k] = s[n];
  return Series(std::move(out));
}

Series series_truncate(const Series& s, std::size_t new_order) {
  if (new_order > s.order())
    throw DomainError("cannot truncate a series of order " + std::to_string(s.order()) +
                      " to larger order " + std::to_string(new_order));
  auto c = s.coeffs();
  return Series(std::vector<Coeff>(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(new_order)));
}

SeriesComparison series_equal_upto(const Series& a, const Series& b, std::size_t n) {
  if (n > a.order() || n > b.order())
    throw DomainError("comparison bound " + std::to_string(n) + " exceeds series order " +
                      std::to_string(std::min(a.order(), b.order())));
  for (std::size_t e = 0; e < n; ++e)
    if (a[e] != b[e]) return {false, Mismatch{e, a[e], b[e]}};
  return {true, std::nullopt};
}

}  // namespace polytheta
