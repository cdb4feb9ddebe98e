#include "polytheta/transfer.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "polytheta/error.hpp"

namespace polytheta {

namespace {

std::vector<bool> covered_residues(const Decomposition& d) {
  std::vector<bool> covered(static_cast<std::size_t>(d.modulus), false);
  for (const auto& t : d.rhs) covered[static_cast<std::size_t>(t.shift)] = true;
  return covered;
}

// Checks that lhs coefficients vanish on residue classes without an rhs term.
std::optional<Mismatch> uncovered_residue_violation(const Decomposition& d, const Series& lhs,
                                                    std::size_t order) {
  const auto covered = covered_residues(d);
  const auto k = static_cast<std::size_t>(d.modulus);
  for (std::size_t e = 0; e < order; ++e)
    if (!covered[e % k] && lhs[e] != 0) return Mismatch{e, lhs[e], 0};
  return std::nullopt;
}

std::string mismatch_text(const Mismatch& m) {
  return "first difference at q^" + std::to_string(m.exponent) + ": lhs " + std::to_string(m.lhs) +
         ", rhs " + std::to_string(m.rhs);
}

ProductTerm reduced_term(const ProductTerm& t, std::int64_t k) {
  ProductTerm r{1, 0, {}};
  for (const auto& a : t.atoms) r.atoms.push_back(ThetaAtom{a.i / k, a.j / k});
  return r;
}

}  // namespace

void validate_decomposition(const Decomposition& d) {
  if (d.lhs.multiplier != 1 || d.lhs.shift != 0)
    throw DomainError("decomposition lhs must have multiplier 1 and no q-shift");
  if (d.lhs.atoms.empty()) throw DomainError("decomposition lhs needs at least one atom");
  if (d.modulus < 1) throw DomainError("decomposition modulus must be positive");
  if (d.rhs.empty()) throw DomainError("decomposition rhs is empty");
  for (const auto& a : d.lhs.atoms)
    if (a.i < 0 || a.j < 0 || a.i + a.j < 1) throw DomainError("decomposition lhs atom is not a power series");

  std::vector<bool> seen(static_cast<std::size_t>(d.modulus), false);
  for (const auto& t : d.rhs) {
    if (t.shift < 0 || t.shift >= d.modulus)
      throw DomainError("rhs q-shift " + std::to_string(t.shift) + " outside 0.." +
                        std::to_string(d.modulus - 1));
    if (seen[static_cast<std::size_t>(t.shift)])
      throw DomainError("two rhs terms share q-shift " + std::to_string(t.shift));
    seen[static_cast<std::size_t>(t.shift)] = true;
    if (t.multiplier < 1) throw DomainError("rhs multiplier must be positive");
    if (t.atoms.size() != d.lhs.atoms.size())
      throw DomainError("rhs term with q-shift " + std::to_string(t.shift) + " has " +
                        std::to_string(t.atoms.size()) + " atoms, lhs has " +
                        std::to_string(d.lhs.atoms.size()));
    for (const auto& a : t.atoms) {
      if (a.i < 0 || a.j < 0 || a.i + a.j < 1)
        throw DomainError("rhs atom is not a power series");
      if (a.i % d.modulus != 0 || a.j % d.modulus != 0)
        throw DomainError("rhs atom f(q^" + std::to_string(a.i) + ", q^" + std::to_string(a.j) +
                          ") is not a series in q^" + std::to_string(d.modulus));
    }
  }
}

DecompositionCheck verify_decomposition(const Decomposition& d, std::size_t order) {
  validate_decomposition(d);
  const Series lhs = product_series(d.lhs, order);
  Series rhs(order);
  for (const auto& t : d.rhs) rhs = rhs + product_series(t, order);

  DecompositionCheck out;
  const auto cmp = series_equal_upto(lhs, rhs, order);
  if (!cmp) {
    out.mismatch = cmp.first_difference;
    out.detail = mismatch_text(*cmp.first_difference);
    return out;
  }
  if (auto bad = uncovered_residue_violation(d, lhs, order)) {
    out.mismatch = bad;
    out.detail = "residue class " + std::to_string(bad->exponent % d.modulus) +
                 " has no rhs term but lhs coefficient " + std::to_string(bad->lhs) + " at q^" +
                 std::to_string(bad->exponent);
    return out;
  }
  out.holds = true;
  out.detail = "equal to order " + std::to_string(order);
  return out;
}

DecompositionCheck check_residue_identity(const Decomposition& d, std::size_t order) {
  validate_decomposition(d);
  const Series lhs = product_series(d.lhs, order);
  const auto k = static_cast<std::size_t>(d.modulus);
  DecompositionCheck out;
  for (const auto& t : d.rhs) {
    const auto s = static_cast<std::size_t>(t.shift);
    if (s >= order) continue;
    const std::size_t count = (order - s + k - 1) / k;
    const Series reduced = product_series(reduced_term(t, d.modulus), count);
    for (std::size_t m = 0; m < count; ++m) {
      const std::size_t e = k * m + s;
      const Coeff expected = checked_mul(t.multiplier, reduced[m]);
      if (lhs[e] != expected) {
        out.mismatch = Mismatch{e, lhs[e], expected};
        out.detail = "residue " + std::to_string(s) + ", m = " + std::to_string(m) + ": " +
                     mismatch_text(*out.mismatch);
        return out;
      }
    }
  }
  if (auto bad = uncovered_residue_violation(d, lhs, order)) {
    out.mismatch = bad;
    out.detail = "uncovered residue class " + std::to_string(bad->exponent % k) +
                 " has nonzero lhs coefficient";
    return out;
  }
  out.holds = true;
  out.detail = "per-residue identity holds to order " + std::to_string(order);
  return out;
}

QuadTerm atom_to_quad_term(const ThetaAtom& a, std::int64_t divisor) {
  if (divisor < 1) throw DomainError("divisor must be positive");
  if (a.i % divisor != 0 || a.j % divisor != 0)
    throw DomainError("atom exponents not divisible by " + std::to_string(divisor));
  const std::int64_t i = a.i / divisor;
  const std::int64_t j = a.j / divisor;
  return make_quad_term(1, i + j, i - j);
}

TransferRecord derive_sums(const Decomposition& d, std::string source) {
  validate_decomposition(d);
  TransferRecord rec;
  rec.modulus = d.modulus;
  rec.source = std::move(source);
  for (const auto& a : d.lhs.atoms) rec.lhs_sum.terms.push_back(atom_to_quad_term(a));
  for (const auto& t : d.rhs) {
    PolygonalSum s;
    for (const auto& a : t.atoms) s.terms.push_back(atom_to_quad_term(a, d.modulus));
    rec.rhs_sums.push_back(std::move(s));
    rec.rhs_shifts.push_back(t.shift);
  }
  return rec;
}

bool TransferReport::all_rhs_certified() const noexcept {
  return std::all_of(rhs.begin(), rhs.end(),
                     [](const RhsTransfer& r) { return r.direct.universal_up_to_bound; });
}

TransferReport transfer_universality(const TransferRecord& rec, const SumKeySet& base,
                                     std::int64_t bound) {
  TransferReport report;
  report.lhs_from_base = base.count(canonical_key(rec.lhs_sum)) > 0;
  report.lhs_direct = certify_universal(rec.lhs_sum, bound);
  const bool lhs_ok = report.lhs_from_base || report.lhs_direct.universal_up_to_bound;

  bool inconsistent = false;
  for (std::size_t r = 0; r < rec.rhs_sums.size(); ++r) {
    RhsTransfer row;
    row.sum = rec.rhs_sums[r];
    row.shift = rec.rhs_shifts.at(r);
    row.direct = certify_universal(row.sum, bound);
    if (lhs_ok && bound >= row.shift) {
      row.derived_bound = (bound - row.shift) / rec.modulus;
      row.inconsistent = !row.direct.missing.empty() && row.direct.missing.front() <= row.derived_bound;
    }
    inconsistent = inconsistent || row.inconsistent;
    report.rhs.push_back(std::move(row));
  }

  if (!lhs_ok) {
    report.status = TransferStatus::refused;
    report.detail = "lhs " + describe(rec.lhs_sum) + " is not universal up to " +
                    std::to_string(bound) + " (first missing " +
                    std::to_string(report.lhs_direct.missing.front()) + ")";
  } else if (inconsistent) {
    report.status = TransferStatus::inconsistent;
    report.detail = "an rhs sum misses a value its residue class guarantees";
  } else {
    report.status = TransferStatus::propagated;
    report.detail = std::string("lhs ") + (report.lhs_from_base ? "is a base fact" : "certified directly") +
                    "; " + std::to_string(report.rhs.size()) + " rhs sums inherit universality";
  }
  return report;
}

BiconditionalCheck check_biconditional(const Decomposition& d, std::int64_t n) {
  if (n < 0) throw DomainError("biconditional bound must be nonnegative");
  const TransferRecord rec = derive_sums(d);
  BiconditionalCheck out;
  out.rhs_bound = n;
  out.lhs_bound = d.modulus * n + d.modulus - 1;
  out.lhs_universal = certify_universal(rec.lhs_sum, out.lhs_bound).universal_up_to_bound;
  const auto covered = covered_residues(d);
  bool all = std::all_of(covered.begin(), covered.end(), [](bool b) { return b; });
  for (const auto& s : rec.rhs_sums) {
    if (!all) break;
    all = n == 0 ? true : certify_universal(s, n).universal_up_to_bound;
  }
  out.rhs_all_universal = all;
  return out;
}

}  // namespace polytheta
