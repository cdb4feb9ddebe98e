#pragma once

// Symbolic Ramanujan theta functions f(q^i, q^j) and formal sums of their
// products, with the rewriting rules used to manipulate them:
//
//   f(a, b) = f(b, a)                       (argument symmetry)
//   f(1, a) = 2 f(a, a^3)                   (degenerate first argument)
//   f(a, b) = a^{k(k+1)/2} b^{k(k-1)/2} f(a(ab)^k, b(ab)^{-k})   (reindexing)
//
// The reindexing rule is used only internally by dissect() and
// product_split() to bring intermediate atoms with a negative exponent back
// to canonical form; user-facing atoms must have nonnegative exponents.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "polytheta/series.hpp"

namespace polytheta {

/// f(q^i, q^j). Canonical when 1 <= i <= j.
struct ThetaAtom {
  std::int64_t i = 0;
  std::int64_t j = 0;

  friend auto operator<=>(const ThetaAtom&, const ThetaAtom&) = default;
};

namespace atoms {
/// phi(q^k) = f(q^k, q^k)
constexpr ThetaAtom phi(std::int64_t k = 1) { return {k, k}; }
/// psi(q^k) = f(q^k, q^{3k})
constexpr ThetaAtom psi(std::int64_t k = 1) { return {k, 3 * k}; }
/// X(q^k) = f(q^k, q^{2k})
constexpr ThetaAtom X(std::int64_t k = 1) { return {k, 2 * k}; }
/// Y(q^k) = f(q^k, q^{5k})
constexpr ThetaAtom Y(std::int64_t k = 1) { return {k, 5 * k}; }
/// f(q^i, q^j) without any normalization.
constexpr ThetaAtom f(std::int64_t i, std::int64_t j) { return {i, j}; }
}  // namespace atoms

/// multiplier * q^shift * prod(atoms)
struct ProductTerm {
  Coeff multiplier = 1;
  std::int64_t shift = 0;
  std::vector<ThetaAtom> atoms;

  friend bool operator==(const ProductTerm&, const ProductTerm&) = default;
};

/// Formal sum of product terms; the empty sum is zero.
struct ThetaExpression {
  std::vector<ProductTerm> terms;

  friend bool operator==(const ThetaExpression&, const ThetaExpression&) = default;
};

bool is_canonical(const ThetaAtom& a) noexcept;

/// Sorts each atom to i <= j, rewrites f(1, q^j) as 2 f(q^j, q^{3j}) and sorts
/// the atom list. Throws DomainError on f(1, 1), negative exponents, a
/// multiplier < 1, a negative shift or an empty atom list.
ProductTerm canonicalize(ProductTerm t);
ThetaExpression canonicalize(const ThetaExpression& e);

/// Canonicalizes every term, merges terms with equal shift and atoms, and
/// orders terms by (shift, atoms).
ThetaExpression combine_like_terms(const ThetaExpression& e);

/// sum over n in Z of q^{i n(n+1)/2 + j n(n-1)/2}, truncated at order.
Series atom_series(const ThetaAtom& a, std::size_t order);

Series product_series(const ProductTerm& t, std::size_t order);
Series expression_series(const ThetaExpression& e, std::size_t order);

/// n-dissection of f(q^i, q^j) by the residue of the summation index mod n.
/// Returns n canonical terms whose sum expands to atom_series(a).
ThetaExpression dissect(const ThetaAtom& a, int n);

/// f(a,b) f(c,d) = f(ac,bd) f(ad,bc) + a f(b/c, ac^2 d) f(b/d, acd^2), ab = cd,
/// with a = q^{i1}, b = q^{j1}, c = q^{i2}, d = q^{j2}. Requires
/// i1 + j1 == i2 + j2. Returns two canonical terms.
ThetaExpression product_split(const ThetaAtom& first, const ThetaAtom& second);

}  // namespace polytheta
