#include "polytheta/polygonal.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "polytheta/error.hpp"

namespace polytheta {

namespace {

// coeff * x(Ax + B)/2, computed wide so large x cannot wrap silently.
__int128 term_value_wide(const QuadTerm& t, std::int64_t x) {
  const __int128 wx = x;
  return static_cast<__int128>(t.coeff) * (wx * (t.A * wx + t.B) / 2);
}

// Calls visit(value) for every x in the domain whose value is <= limit, in order
// of increasing |x| within each direction.
template <typename Visit>
void for_each_value(const QuadTerm& t, std::int64_t limit, VariableDomain domain, Visit&& visit) {
  const __int128 wide_limit = limit;
  for (std::int64_t x = 0;; ++x) {
    const __int128 v = term_value_wide(t, x);
    if (v > wide_limit) {
      if (x >= 1) break;
      continue;
    }
    visit(static_cast<std::int64_t>(v));
  }
  if (domain == VariableDomain::naturals) return;
  for (std::int64_t x = -1;; --x) {
    const __int128 v = term_value_wide(t, x);
    if (v > wide_limit) break;
    visit(static_cast<std::int64_t>(v));
  }
}

void require_bound(std::int64_t bound) {
  if (bound < 0) throw DomainError("bound must be nonnegative");
}

std::string family_text(std::int64_t A, std::int64_t B) {
  if (A == 1 && B == 1) return "p3";
  if (A - B == 2) return "p" + std::to_string(A + 2);
  return "x(" + std::to_string(A) + "x" + (B < 0 ? "-" : "+") + std::to_string(B < 0 ? -B : B) +
         ")/2";
}

std::string key_text(const TermKey& k) {
  std::string fam = family_text(k.A, k.B);
  if (k.scale == 1) return fam;
  if (fam.front() == 'p') return std::to_string(k.scale) + fam;
  return std::to_string(k.scale) + "*" + fam;
}

}  // namespace

QuadTerm make_quad_term(Coeff coeff, std::int64_t A, std::int64_t B) {
  if (coeff < 1) throw DomainError("term coefficient must be positive");
  if (A < 1) throw DomainError("term needs A >= 1 in x(Ax+B)/2");
  if ((A - B) % 2 != 0)
    throw DomainError("x(" + std::to_string(A) + "x+" + std::to_string(B) +
                      ")/2 is not integer-valued: A and B must have equal parity");
  if (B > A || B < -A)
    throw DomainError("x(" + std::to_string(A) + "x+" + std::to_string(B) +
                      ")/2 takes negative values: need |B| <= A");
  return QuadTerm{coeff, A, B};
}

std::int64_t polygonal_value(int m, std::int64_t x) {
  if (m < 3) throw DomainError("polygonal numbers need m >= 3, got " + std::to_string(m));
  const __int128 wx = x;
  const __int128 v = ((m - 2) * wx * wx - (m - 4) * wx) / 2;
  if (v > INT64_MAX || v < INT64_MIN) throw OverflowError("polygonal value out of range");
  return static_cast<std::int64_t>(v);
}

QuadTerm term_from_polygonal(Coeff c, int m) {
  if (m < 3) throw DomainError("polygonal numbers need m >= 3, got " + std::to_string(m));
  return make_quad_term(c, m - 2, -(m - 4));
}

Series term_series(const QuadTerm& t, std::size_t order, VariableDomain domain) {
  if (order == 0) throw DomainError("series order must be positive");
  std::vector<Coeff> c(order, 0);
  for_each_value(t, static_cast<std::int64_t>(order) - 1, domain,
                 [&](std::int64_t v) { ++c[static_cast<std::size_t>(v)]; });
  return Series(std::move(c));
}

std::vector<std::int64_t> term_values(const QuadTerm& t, std::int64_t limit, VariableDomain domain) {
  std::vector<std::int64_t> out;
  if (limit < 0) return out;
  for_each_value(t, limit, domain, [&](std::int64_t v) { out.push_back(v); });
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Series representation_series(const PolygonalSum& s, std::int64_t bound, VariableDomain domain) {
  require_bound(bound);
  if (s.terms.empty()) throw DomainError("polygonal sum needs at least one term");
  const auto order = static_cast<std::size_t>(bound) + 1;
  Series total = term_series(s.terms.front(), order, domain);
  for (std::size_t k = 1; k < s.terms.size(); ++k) total = total * term_series(s.terms[k], order, domain);
  return total;
}

Bitset value_set(const PolygonalSum& s, std::int64_t bound, VariableDomain domain) {
  require_bound(bound);
  if (s.terms.empty()) throw DomainError("polygonal sum needs at least one term");
  std::vector<std::vector<std::int64_t>> values;
  values.reserve(s.terms.size());
  for (const auto& t : s.terms) values.push_back(term_values(t, bound, domain));
  // Seed with the densest term so each later sumset pass shifts by fewer values.
  std::sort(values.begin(), values.end(),
            [](const auto& a, const auto& b) { return a.size() > b.size(); });

  const auto size = static_cast<std::size_t>(bound) + 1;
  Bitset reach(size);
  for (auto v : values.front()) reach.set(static_cast<std::size_t>(v));
  for (std::size_t k = 1; k < values.size(); ++k) {
    Bitset next(size);
    for (auto v : values[k]) next.or_shifted(reach, static_cast<std::size_t>(v));
    reach = std::move(next);
  }
  return reach;
}

UniversalityVerdict certify_universal(const PolygonalSum& s, std::int64_t bound, VariableDomain domain) {
  if (bound < 1) throw DomainError("certification bound must be at least 1");
  const Bitset reach = value_set(s, bound, domain);
  UniversalityVerdict v;
  v.bound = bound;
  for (auto pos : reach.unset_positions()) v.missing.push_back(static_cast<std::int64_t>(pos));
  v.universal_up_to_bound = v.missing.empty();
  return v;
}

EquivalenceVerdict equivalent_upto(const PolygonalSum& first, const PolygonalSum& second,
                                   std::int64_t bound, VariableDomain domain) {
  const Bitset a = value_set(first, bound, domain);
  const Bitset b = value_set(second, bound, domain);
  EquivalenceVerdict v;
  if (auto d = a.first_difference(b)) {
    v.witness = static_cast<std::int64_t>(*d);
    v.witness_in_first = a.test(*d);
  } else {
    v.equivalent = true;
  }
  return v;
}

std::pair<PolygonalSum, PolygonalSum> rescale_equivalence(std::int64_t a, std::int64_t b) {
  if (a < 1) throw DomainError("rescaling needs a >= 1");
  if (b < 0 || 2 * b > a) throw DomainError("rescaling needs 0 <= b <= a/2");
  PolygonalSum left{{make_quad_term(1, 2 * a, 2 * b), make_quad_term(1, 2 * a, 2 * (a - b))}};
  PolygonalSum right{{make_quad_term(a, 1, 1), make_quad_term(1, a, a - 2 * b)}};
  return {std::move(left), std::move(right)};
}

TermKey canonical_key(const QuadTerm& t) {
  const std::int64_t absB = t.B < 0 ? -t.B : t.B;
  const std::int64_t g = std::gcd(t.A, absB);
  const std::int64_t d = ((t.A / g - absB / g) % 2 == 0) ? g : g / 2;
  TermKey k{t.A / d, absB / d, checked_mul(t.coeff, d)};
  if (k.A == 4 && k.B == 2) {
    k.A = 1;
    k.B = 1;
  }
  return k;
}

SumKey canonical_key(const PolygonalSum& s) {
  SumKey k;
  k.reserve(s.terms.size());
  for (const auto& t : s.terms) k.push_back(canonical_key(t));
  std::sort(k.begin(), k.end());
  return k;
}

std::string describe(const PolygonalSum& s) {
  std::string out;
  for (const auto& t : s.terms) {
    if (!out.empty()) out += " + ";
    out += key_text(canonical_key(t));
  }
  return out;
}

std::string describe(const SumKey& k) {
  std::string out;
  for (const auto& t : k) {
    if (!out.empty()) out += " + ";
    out += key_text(t);
  }
  return out;
}

}  // namespace polytheta
