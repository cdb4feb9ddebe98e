#pragma once

// Universality transfer through k-dissections of theta products.
//
// A decomposition states
//
//   prod_s f(q^{g_s}, q^{h_s}) = sum_r m_r q^{r-1} prod_s f(q^{k a_{s,r}}, q^{k b_{s,r}})
//
// with every right-hand product a series in q^k. Reading each atom
// f(q^i, q^j) as the value family x((i+j)x + i-j)/2, the left-hand sum
// represents k*n + (r-1) exactly when the r-th right-hand sum represents n,
// so universality moves between the two sides residue by residue.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "polytheta/polygonal.hpp"
#include "polytheta/series.hpp"
#include "polytheta/theta.hpp"

namespace polytheta {

struct Decomposition {
  ProductTerm lhs;
  std::int64_t modulus = 1;
  std::vector<ProductTerm> rhs;

  friend bool operator==(const Decomposition&, const Decomposition&) = default;
};

/// Throws DomainError unless: lhs has multiplier 1, shift 0 and at least one
/// atom; modulus >= 1; rhs is nonempty; rhs shifts are distinct and lie in
/// [0, modulus); every rhs term has as many atoms as lhs, all canonical with
/// exponents divisible by the modulus.
void validate_decomposition(const Decomposition& d);

struct DecompositionCheck {
  bool holds = false;
  std::optional<Mismatch> mismatch;
  std::string detail;
};

/// Exact series equality of both sides below order, plus the residue
/// refinement: exponents in residue classes with no rhs term have zero lhs
/// coefficient.
DecompositionCheck verify_decomposition(const Decomposition& d, std::size_t order);

/// The per-residue mechanism itself: for every rhs term with shift s and every
/// m with k*m + s < order, lhs[k*m + s] equals multiplier times the
/// coefficient at m of the rhs product taken with all exponents divided by k.
DecompositionCheck check_residue_identity(const Decomposition& d, std::size_t order);

QuadTerm atom_to_quad_term(const ThetaAtom& a, std::int64_t divisor = 1);

struct TransferRecord {
  PolygonalSum lhs_sum;
  std::vector<PolygonalSum> rhs_sums;
  /// rhs_shifts[r] is the residue class mod modulus that rhs_sums[r] governs.
  std::vector<std::int64_t> rhs_shifts;
  std::int64_t modulus = 1;
  std::string source;
};

TransferRecord derive_sums(const Decomposition& d, std::string source = {});

struct RhsTransfer {
  PolygonalSum sum;
  std::int64_t shift = 0;
  /// Bound up to which the lhs verdict alone guarantees this sum.
  std::int64_t derived_bound = -1;
  UniversalityVerdict direct;
  bool inconsistent = false;
};

enum class TransferStatus { propagated, refused, inconsistent };

struct TransferReport {
  TransferStatus status = TransferStatus::refused;
  bool lhs_from_base = false;
  UniversalityVerdict lhs_direct;
  std::vector<RhsTransfer> rhs;
  std::string detail;

  bool all_rhs_certified() const noexcept;
};

using SumKeySet = std::set<SumKey>;

/// If the lhs sum is certified (a member of base, or directly up to bound),
/// passes universality to every rhs sum and cross-checks each one by direct
/// certification. An rhs sum that misses a value below its derived bound while
/// the lhs passed is reported as an inconsistency.
TransferReport transfer_universality(const TransferRecord& rec, const SumKeySet& base,
                                     std::int64_t bound);

struct BiconditionalCheck {
  std::int64_t rhs_bound = 0;
  std::int64_t lhs_bound = 0;
  bool lhs_universal = false;
  bool rhs_all_universal = false;

  bool holds() const noexcept { return lhs_universal == rhs_all_universal; }
};

/// lhs universal up to k*n + k - 1  <=>  every rhs universal up to n.
BiconditionalCheck check_biconditional(const Decomposition& d, std::int64_t n);

}  // namespace polytheta
