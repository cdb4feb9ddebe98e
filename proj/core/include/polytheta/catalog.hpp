#pragma once

// The identity catalog: curated entries loaded from text files, and the
// runner that checks every entry and propagates universality through the
// verified decompositions and equivalences.
//
// File format, one block per entry:
//
//   [Q1] kind: decomposition ref: "where it comes from"
//   lhs: Y(q)*Y(q^2)*Y(q^4)^2
//   modulus: 4
//   rhs: X(q^8)*X(q^16)*Y(q^4)^2
//   rhs: q*X(q^16)*Y(q^4)^3
//
// Fields by kind:
//   identity       lhs: <expression>   rhs: <expression>  (rhs may repeat; terms are summed)
//   decomposition  lhs: <term>   modulus: <k>   rhs: <term> (one per residue class)
//   equivalence    sum: <sum> (>= 2, ordered chain)  or  rescale: <a> <b>
//                  optional  claim: universal
//   base-fact      sum: <sum>
//   target-sum     sum: <sum>   optional  via: <key of a decomposition or equivalence>
//
// '#' starts a comment; blank lines are ignored.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "polytheta/error.hpp"
#include "polytheta/polygonal.hpp"
#include "polytheta/theta.hpp"
#include "polytheta/transfer.hpp"

namespace polytheta {

class CatalogError : public Error {
 public:
  using Error::Error;
};

enum class EntryKind { identity, decomposition, equivalence, base_fact, target_sum };

std::string_view kind_name(EntryKind k) noexcept;
std::optional<EntryKind> parse_kind(std::string_view text) noexcept;

struct IdentityPayload {
  ThetaExpression lhs;
  ThetaExpression rhs;

  friend bool operator==(const IdentityPayload&, const IdentityPayload&) = default;
};

struct EquivalencePayload {
  /// Ordered chain; adjacent members are claimed to have equal value sets.
  std::vector<PolygonalSum> members;
  /// Set when the pair was generated by rescale_equivalence(a, b).
  std::optional<std::pair<std::int64_t, std::int64_t>> rescale;
  /// Every member is additionally claimed universal.
  bool claims_universal = false;

  friend bool operator==(const EquivalencePayload&, const EquivalencePayload&) = default;
};

struct SumPayload {
  PolygonalSum sum;
  /// Target sums only: the entry the sum is claimed to follow from.
  std::string via;

  friend bool operator==(const SumPayload&, const SumPayload&) = default;
};

using Payload = std::variant<IdentityPayload, Decomposition, EquivalencePayload, SumPayload>;

struct CatalogEntry {
  std::string key;
  EntryKind kind = EntryKind::identity;
  std::string ref;
  Payload payload;
  std::string file;
  std::size_t line = 0;

  const IdentityPayload& identity() const { return std::get<IdentityPayload>(payload); }
  const Decomposition& decomposition() const { return std::get<Decomposition>(payload); }
  const EquivalencePayload& equivalence() const { return std::get<EquivalencePayload>(payload); }
  const SumPayload& sum() const { return std::get<SumPayload>(payload); }
};

/// Orders keys by comparing digit runs numerically: Q1 < Q1a < Q2 < Q10.
bool natural_key_less(std::string_view a, std::string_view b);

class Catalog {
 public:
  Catalog() = default;
  /// Throws CatalogError on duplicate keys or a `via` that does not name a
  /// decomposition or equivalence.
  explicit Catalog(std::vector<CatalogEntry> entries);

  const std::vector<CatalogEntry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  const CatalogEntry* find(std::string_view key) const;
  std::vector<const CatalogEntry*> of_kind(EntryKind k) const;

 private:
  std::vector<CatalogEntry> entries_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

/// Parses the block format above. Every payload is validated; errors carry
/// source_name:line:column.
std::vector<CatalogEntry> parse_catalog_text(std::string_view text, const std::string& source_name);

/// Loads a single file, or every *.cat file of a directory in name order.
Catalog load_catalog(const std::filesystem::path& path);
/// Loads from default_catalog_path().
Catalog load_catalog();

/// $POLYTHETA_CATALOG if set, else the source-tree catalog if present, else
/// the installed one.
std::filesystem::path default_catalog_path();

/// Normalized block text of the entries in catalog order.
std::string serialize_catalog(const std::vector<CatalogEntry>& entries);

// ---- propagation ----

/// sum key -> keys of the entries that establish it (base facts,
/// decompositions, equivalences), in the order they were found.
struct Propagation {
  std::map<SumKey, std::vector<std::string>> established;

  bool is_established(const SumKey& k) const { return established.count(k) > 0; }
  const std::vector<std::string>* derivations(const SumKey& k) const;
};

/// Fixpoint over immutable records: starting from the given base-fact keys,
/// a listed decomposition whose lhs sum is established establishes all its
/// rhs sums, and a listed equivalence with an established member
/// establishes every member. Every derivation of a sum is kept.
Propagation propagate(const Catalog& catalog, const std::set<std::string>& base_keys,
                      const std::set<std::string>& decomposition_keys,
                      const std::set<std::string>& equivalence_keys);

// ---- runner ----

enum class RowStatus { pass, fail, insufficient_order };
std::string_view status_name(RowStatus s) noexcept;

struct ReportRow {
  std::string key;
  EntryKind kind = EntryKind::identity;
  RowStatus status = RowStatus::fail;
  std::string detail;
};

struct RunOptions {
  std::size_t order = 1000;
  std::int64_t bound = 50000;
  unsigned workers = 1;
  /// Bound N for the per-decomposition biconditional check; 0 picks the
  /// largest N with k*N + k - 1 <= bound.
  std::int64_t biconditional_bound = 0;
};

struct CatalogReport {
  RunOptions options;
  /// Sorted by natural key order.
  std::vector<ReportRow> rows;

  bool all_pass() const noexcept;
  std::size_t count(RowStatus s) const noexcept;
};

struct Selection {
  std::optional<EntryKind> kind;
  /// Keep only keys starting with one of these prefixes (empty: all).
  std::vector<std::string> key_prefixes;
  /// Keep only these exact keys (empty: all).
  std::set<std::string> keys;

  bool accepts(const CatalogEntry& e) const;
};

/// Produces a row for every entry the selection accepts. Entries outside the
/// selection are still checked when propagation depends on them.
CatalogReport run_catalog(const Catalog& catalog, const RunOptions& options,
                          const Selection& selection = {});

}  // namespace polytheta
