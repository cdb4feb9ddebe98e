#pragma once

// Generalized polygonal numbers and finite sums c_1 f_1(x_1) + ... + c_k f_k(x_k)
// where every summand ranges over a family c * x(Ax + B)/2.
//
// Universality is only ever certified up to an explicit bound; verdicts carry
// that bound with them.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "polytheta/bitset.hpp"
#include "polytheta/series.hpp"

namespace polytheta {

/// The value family { coeff * x(A x + B)/2 : x in Z }. Construct through
/// make_quad_term() to get the invariants checked.
struct QuadTerm {
  Coeff coeff = 1;
  std::int64_t A = 1;
  std::int64_t B = 1;

  friend auto operator<=>(const QuadTerm&, const QuadTerm&) = default;
};

/// Checks coeff >= 1, A >= 1, A = B (mod 2) and |B| <= A (so every value is a
/// nonnegative integer).
QuadTerm make_quad_term(Coeff coeff, std::int64_t A, std::int64_t B);

struct PolygonalSum {
  std::vector<QuadTerm> terms;

  friend bool operator==(const PolygonalSum&, const PolygonalSum&) = default;
};

enum class VariableDomain { integers, naturals };

struct UniversalityVerdict {
  std::int64_t bound = 0;
  bool universal_up_to_bound = false;
  std::vector<std::int64_t> missing;
};

struct EquivalenceVerdict {
  bool equivalent = false;
  /// Least value <= bound represented by exactly one side.
  std::optional<std::int64_t> witness;
  /// True when the witness is represented by the first sum only.
  bool witness_in_first = false;
};

/// p_m(x) = ((m - 2) x^2 - (m - 4) x) / 2, m >= 3.
std::int64_t polygonal_value(int m, std::int64_t x);

/// c * p_m as a QuadTerm: A = m - 2, B = -(m - 4).
QuadTerm term_from_polygonal(Coeff c, int m);

/// Representation counts of a single term: coefficient e counts x in Z with
/// coeff * x(Ax+B)/2 = e.
Series term_series(const QuadTerm& t, std::size_t order,
                   VariableDomain domain = VariableDomain::integers);

/// Sorted distinct values of the term that do not exceed limit.
std::vector<std::int64_t> term_values(const QuadTerm& t, std::int64_t limit,
                                      VariableDomain domain = VariableDomain::integers);

/// Generating function of the number of representations, exponents 0..bound.
Series representation_series(const PolygonalSum& s, std::int64_t bound,
                             VariableDomain domain = VariableDomain::integers);

/// Bitset of {values of s} intersected with [0, bound], built by successive
/// sumsets with each term's value list.
Bitset value_set(const PolygonalSum& s, std::int64_t bound,
                 VariableDomain domain = VariableDomain::integers);

UniversalityVerdict certify_universal(const PolygonalSum& s, std::int64_t bound,
                                      VariableDomain domain = VariableDomain::integers);

EquivalenceVerdict equivalent_upto(const PolygonalSum& first, const PolygonalSum& second,
                                   std::int64_t bound,
                                   VariableDomain domain = VariableDomain::integers);

/// The two sides of  h(ah+b) + l(al+a-b) ~ a p_3(h) + l(al+a-2b)/2
/// for a >= 1 and 0 <= b <= a/2.
std::pair<PolygonalSum, PolygonalSum> rescale_equivalence(std::int64_t a, std::int64_t b);

/// Canonical label of a term's value family: scale * x(A'x + B')/2 with the
/// common factor pulled into scale, B' = |B'| and x(2x-1) identified with the
/// triangular family. Two terms with equal keys have equal value sets. Keys
/// order by family first (p3, p4, p5, ..., p8), then by scale.
struct TermKey {
  std::int64_t A;
  std::int64_t B;
  Coeff scale;

  friend auto operator<=>(const TermKey&, const TermKey&) = default;
};

using SumKey = std::vector<TermKey>;

TermKey canonical_key(const QuadTerm& t);
/// Sorted multiset of term keys.
SumKey canonical_key(const PolygonalSum& s);

/// Human notation such as "2p5 + 4p5 + p8 + p8", terms in input order. Terms
/// that are not polygonal print as "c*x(Ax+B)/2".
std::string describe(const PolygonalSum& s);
std::string describe(const SumKey& k);

}  // namespace polytheta
