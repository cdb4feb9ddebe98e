#include "polytheta/theta.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <utility>

#include "polytheta/error.hpp"

namespace polytheta {

namespace {

std::string atom_text(const ThetaAtom& a) {
  return "f(q^" + std::to_string(a.i) + ", q^" + std::to_string(a.j) + ")";
}

std::int64_t tri(std::int64_t n) { return n * (n + 1) / 2; }

// Rewrites f(q^x, q^y) with one negative exponent through the reindexing
// identity. Returns the exponent of the q-power pulled out in front.
std::int64_t reindex_nonnegative(ThetaAtom& a) {
  if (a.i + a.j < 1) throw DomainError("theta atom " + atom_text(a) + " has i + j < 1");
  if (a.i >= 0 && a.j >= 0) return 0;
  if (a.j < 0) std::swap(a.i, a.j);
  const std::int64_t period = a.i + a.j;
  const std::int64_t k = (-a.i + period - 1) / period;
  const std::int64_t delta = a.i * tri(k) + a.j * tri(k - 1);
  a.i += k * period;
  a.j -= k * period;
  return delta;
}

// Brings a term produced by dissection or splitting (which may hold atoms
// with a negative exponent) into canonical form.
ProductTerm normalize_derived(ProductTerm t, const char* what) {
  for (auto& a : t.atoms) t.shift += reindex_nonnegative(a);
  if (t.shift < 0)
    throw DomainError(std::string("unsupported ") + what + ": derived term has negative q-shift " +
                      std::to_string(t.shift));
  return canonicalize(std::move(t));
}

void check_atom_exponents(const ThetaAtom& a) {
  if (a.i < 0 || a.j < 0)
    throw DomainError("theta atom " + atom_text(a) + " has a negative exponent");
  if (a.i == 0 && a.j == 0) throw DomainError("theta atom f(1, 1) is not a power series");
}

}  // namespace

bool is_canonical(const ThetaAtom& a) noexcept { return a.i >= 1 && a.i <= a.j; }

ProductTerm canonicalize(ProductTerm t) {
  if (t.multiplier < 1) throw DomainError("product term multiplier must be positive");
  if (t.shift < 0) throw DomainError("product term q-shift must be nonnegative");
  if (t.atoms.empty()) throw DomainError("product term needs at least one theta atom");
  for (auto& a : t.atoms) {
    check_atom_exponents(a);
    if (a.i > a.j) std::swap(a.i, a.j);
    if (a.i == 0) {
      a = ThetaAtom{a.j, 3 * a.j};
      t.multiplier = checked_mul(t.multiplier, 2);
    }
  }
  std::sort(t.atoms.begin(), t.atoms.end());
  return t;
}

ThetaExpression canonicalize(const ThetaExpression& e) {
  ThetaExpression out;
  out.terms.reserve(e.terms.size());
  for (const auto& t : e.terms) out.terms.push_back(canonicalize(t));
  return out;
}

ThetaExpression combine_like_terms(const ThetaExpression& e) {
  std::map<std::pair<std::int64_t, std::vector<ThetaAtom>>, Coeff> merged;
  for (const auto& t : e.terms) {
    auto c = canonicalize(t);
    auto& slot = merged[{c.shift, c.atoms}];
    slot = checked_add(slot, c.multiplier);
  }
  ThetaExpression out;
  for (auto& [key, mult] : merged) out.terms.push_back(ProductTerm{mult, key.first, key.second});
  return out;
}

Series atom_series(const ThetaAtom& a, std::size_t order) {
  check_atom_exponents(a);
  const std::int64_t A = a.i + a.j;
  const std::int64_t B = a.i - a.j;
  const auto limit = static_cast<std::int64_t>(order);
  std::vector<Coeff> c(order, 0);
  // Both index directions: n >= 0 and n = -m for m >= 1.
  for (int sign : {1, -1}) {
    for (std::int64_t m = sign == 1 ? 0 : 1;; ++m) {
      const std::int64_t n = sign * m;
      const std::int64_t e = n * (A * n + B) / 2;
      if (e >= limit) {
        if (m >= 1) break;
        continue;
      }
      ++c[static_cast<std::size_t>(e)];
    }
  }
  return Series(std::move(c));
}

Series product_series(const ProductTerm& t, std::size_t order) {
  if (t.atoms.empty()) throw DomainError("product term needs at least one theta atom");
  if (t.shift < 0) throw DomainError("product term q-shift must be nonnegative");
  const auto shift = static_cast<std::size_t>(t.shift);
  if (shift >= order) return Series(order);
  const std::size_t inner = order - shift;
  Series prod = atom_series(t.atoms.front(), inner);
  for (std::size_t k = 1; k < t.atoms.size(); ++k) prod = prod * atom_series(t.atoms[k], inner);
  std::vector<Coeff> out(order, 0);
  for (std::size_t e = 0; e < inner; ++e) out[e + shift] = checked_mul(prod[e], t.multiplier);
  return Series(std::move(out));
}

Series expression_series(const ThetaExpression& e, std::size_t order) {
  Series total(order);
  for (const auto& t : e.terms) total = total + product_series(t, order);
  return total;
}

ThetaExpression dissect(const ThetaAtom& a, int n) {
  if (n < 2) throw DomainError("dissection modulus must be at least 2");
  if (!is_canonical(a)) throw DomainError("dissect expects a canonical atom, got " + atom_text(a));
  const std::int64_t i = a.i;
  const std::int64_t j = a.j;
  // U_r = a^{r(r+1)/2} b^{r(r-1)/2}, V_r = a^{r(r-1)/2} b^{r(r+1)/2}; the r-th
  // term is U_r f(U_{n+r}/U_r, V_{n-r}/U_r).
  auto u_exp = [&](std::int64_t r) { return i * tri(r) + j * tri(r - 1); };
  auto v_exp = [&](std::int64_t r) { return i * tri(r - 1) + j * tri(r); };
  ThetaExpression out;
  for (std::int64_t r = 0; r < n; ++r) {
    ProductTerm t{1, u_exp(r), {ThetaAtom{u_exp(n + r) - u_exp(r), v_exp(n - r) - u_exp(r)}}};
    out.terms.push_back(normalize_derived(std::move(t), "dissection"));
  }
  return out;
}

ThetaExpression product_split(const ThetaAtom& first, const ThetaAtom& second) {
  check_atom_exponents(first);
  check_atom_exponents(second);
  const auto [i1, j1] = first;
  const auto [i2, j2] = second;
  if (i1 + j1 != i2 + j2)
    throw DomainError("product split needs ab = cd, got " + atom_text(first) + " and " +
                      atom_text(second));
  ProductTerm even{1, 0, {ThetaAtom{i1 + i2, j1 + j2}, ThetaAtom{i1 + j2, j1 + i2}}};
  ProductTerm odd{1, i1, {ThetaAtom{j1 - i2, i1 + 2 * i2 + j2}, ThetaAtom{j1 - j2, i1 + i2 + 2 * j2}}};
  ThetaExpression out;
  out.terms.push_back(normalize_derived(std::move(even), "product split"));
  out.terms.push_back(normalize_derived(std::move(odd), "product split"));
  return out;
}

}  // namespace polytheta
