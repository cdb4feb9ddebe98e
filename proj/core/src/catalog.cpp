#include "polytheta/catalog.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

#include "polytheta/dsl.hpp"

namespace polytheta {

namespace fs = std::filesystem;

// ---------------------------------------------------------------- kinds

std::string_view kind_name(EntryKind k) noexcept {
  switch (k) {
    case EntryKind::identity: return "identity";
    case EntryKind::decomposition: return "decomposition";
    case EntryKind::equivalence: return "equivalence";
    case EntryKind::base_fact: return "base-fact";
    case EntryKind::target_sum: return "target-sum";
  }
  return "unknown";
}

std::optional<EntryKind> parse_kind(std::string_view text) noexcept {
  for (auto k : {EntryKind::identity, EntryKind::decomposition, EntryKind::equivalence,
                 EntryKind::base_fact, EntryKind::target_sum})
    if (kind_name(k) == text) return k;
  return std::nullopt;
}

std::string_view status_name(RowStatus s) noexcept {
  switch (s) {
    case RowStatus::pass: return "pass";
    case RowStatus::fail: return "fail";
    case RowStatus::insufficient_order: return "insufficient-order";
  }
  return "unknown";
}

bool natural_key_less(std::string_view a, std::string_view b) {
  std::size_t i = 0, j = 0;
  auto digit = [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; };
  while (i < a.size() && j < b.size()) {
    if (digit(a[i]) && digit(b[j])) {
      std::size_t ie = i, je = j;
      while (ie < a.size() && digit(a[ie])) ++ie;
      while (je < b.size() && digit(b[je])) ++je;
      std::string_view da = a.substr(i, ie - i), db = b.substr(j, je - j);
      while (da.size() > 1 && da.front() == '0') da.remove_prefix(1);
      while (db.size() > 1 && db.front() == '0') db.remove_prefix(1);
      if (da.size() != db.size()) return da.size() < db.size();
      if (da != db) return da < db;
      i = ie;
      j = je;
      continue;
    }
    if (a[i] != b[j]) return a[i] < b[j];
    ++i;
    ++j;
  }
  if ((a.size() - i) != (b.size() - j)) return (a.size() - i) < (b.size() - j);
  return a < b;
}

// ---------------------------------------------------------------- Catalog

Catalog::Catalog(std::vector<CatalogEntry> entries) : entries_(std::move(entries)) {
  for (std::size_t n = 0; n < entries_.size(); ++n) {
    const auto& e = entries_[n];
    auto [it, inserted] = index_.emplace(e.key, n);
    if (!inserted) {
      const auto& first = entries_[it->second];
      throw CatalogError(e.file + ":" + std::to_string(e.line) + ": duplicate key '" + e.key +
                         "' (first defined at " + first.file + ":" + std::to_string(first.line) + ")");
    }
  }
  for (const auto& e : entries_) {
    if (e.kind != EntryKind::target_sum || e.sum().via.empty()) continue;
    const CatalogEntry* src = find(e.sum().via);
    if (!src || (src->kind != EntryKind::decomposition && src->kind != EntryKind::equivalence))
      throw CatalogError(e.file + ":" + std::to_string(e.line) + ": via '" + e.sum().via +
                         "' does not name a decomposition or equivalence");
  }
}

const CatalogEntry* Catalog::find(std::string_view key) const {
  auto it = index_.find(key);
  return it == index_.end() ? nullptr : &entries_[it->second];
}

std::vector<const CatalogEntry*> Catalog::of_kind(EntryKind k) const {
  std::vector<const CatalogEntry*> out;
  for (const auto& e : entries_)
    if (e.kind == k) out.push_back(&e);
  return out;
}

// ---------------------------------------------------------------- parsing

namespace {

struct Field {
  std::string name;
  std::string value;
  std::size_t line;
  std::size_t value_column;
};

struct Block {
  std::string key;
  std::string kind;
  std::string ref;
  std::size_t line;
  std::vector<Field> fields;
};

[[noreturn]] void fail_at(const std::string& source, std::size_t line, std::size_t col,
                          const std::string& message) {
  throw CatalogError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + message);
}

std::size_t skip_space(std::string_view s, std::size_t p) {
  while (p < s.size() && (s[p] == ' ' || s[p] == '\t')) ++p;
  return p;
}

std::string_view rstrip(std::string_view s) {
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

// Reads `name:` at p and returns the name, leaving p after the colon.
std::string expect_label(std::string_view s, std::size_t& p, const std::string& source, std::size_t line) {
  const std::size_t start = p;
  while (p < s.size() && (std::isalnum(static_cast<unsigned char>(s[p])) || s[p] == '-' || s[p] == '_')) ++p;
  if (p == start || p >= s.size() || s[p] != ':')
    fail_at(source, line, start + 1, "expected 'name:'");
  std::string name(s.substr(start, p - start));
  ++p;
  return name;
}

Block parse_header(std::string_view s, const std::string& source, std::size_t line) {
  Block b;
  b.line = line;
  std::size_t p = 1;
  const std::size_t close = s.find(']');
  if (close == std::string_view::npos) fail_at(source, line, 1, "unterminated '[key]'");
  b.key = std::string(s.substr(p, close - p));
  if (b.key.empty() || b.key.find_first_of(" \t") != std::string::npos)
    fail_at(source, line, 2, "entry key must be nonempty and contain no spaces");
  p = skip_space(s, close + 1);
  while (p < s.size()) {
    const std::size_t label_col = p + 1;
    const std::string label = expect_label(s, p, source, line);
    p = skip_space(s, p);
    if (label == "kind") {
      const std::size_t start = p;
      while (p < s.size() && s[p] != ' ' && s[p] != '\t') ++p;
      b.kind = std::string(s.substr(start, p - start));
    } else if (label == "ref") {
      if (p >= s.size() || s[p] != '"') fail_at(source, line, p + 1, "ref must be a quoted string");
      const std::size_t end = s.find('"', p + 1);
      if (end == std::string_view::npos) fail_at(source, line, p + 1, "unterminated ref string");
      b.ref = std::string(s.substr(p + 1, end - p - 1));
      p = end + 1;
    } else {
      fail_at(source, line, label_col, "unknown header field '" + label + "'");
    }
    p = skip_space(s, p);
  }
  if (b.kind.empty()) fail_at(source, line, 1, "entry '" + b.key + "' has no kind");
  return b;
}

const Field* single(const Block& b, const std::string& name, const std::string& source, bool required) {
  const Field* found = nullptr;
  for (const auto& f : b.fields) {
    if (f.name != name) continue;
    if (found) fail_at(source, f.line, 1, "field '" + name + "' given twice");
    found = &f;
  }
  if (!found && required) fail_at(source, b.line, 1, "entry '" + b.key + "' needs a '" + name + ":' line");
  return found;
}

std::vector<const Field*> repeated(const Block& b, const std::string& name) {
  std::vector<const Field*> out;
  for (const auto& f : b.fields)
    if (f.name == name) out.push_back(&f);
  return out;
}

void allow_only(const Block& b, std::initializer_list<std::string_view> names, const std::string& source) {
  for (const auto& f : b.fields)
    if (std::find(names.begin(), names.end(), f.name) == names.end())
      fail_at(source, f.line, 1, "field '" + f.name + "' not allowed for kind " + b.kind);
}

TextOrigin origin_of(const Field& f) { return TextOrigin{f.line, f.value_column}; }

template <typename Fn>
auto with_source(const std::string& source, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ParseError& e) {
    throw CatalogError(source + ":" + e.what());
  }
}

std::int64_t parse_int_field(const Field& f, const std::string& source) {
  std::int64_t v = 0;
  std::istringstream in(f.value);
  if (!(in >> v) || !(in >> std::ws).eof())
    fail_at(source, f.line, f.value_column, "expected an integer");
  return v;
}

Payload build_payload(const Block& b, EntryKind kind, const std::string& source) {
  switch (kind) {
    case EntryKind::identity: {
      allow_only(b, {"lhs", "rhs"}, source);
      IdentityPayload p;
      const Field* lhs = single(b, "lhs", source, true);
      p.lhs = with_source(source, [&] { return parse_theta_expression(lhs->value, origin_of(*lhs)); });
      const auto rhs = repeated(b, "rhs");
      if (rhs.empty()) fail_at(source, b.line, 1, "identity needs at least one 'rhs:' line");
      for (const Field* f : rhs) {
        auto part = with_source(source, [&] { return parse_theta_expression(f->value, origin_of(*f)); });
        p.rhs.terms.insert(p.rhs.terms.end(), part.terms.begin(), part.terms.end());
      }
      try {
        (void)canonicalize(p.lhs);
        (void)canonicalize(p.rhs);
      } catch (const DomainError& e) {
        fail_at(source, b.line, 1, e.what());
      }
      return p;
    }
    case EntryKind::decomposition: {
      allow_only(b, {"lhs", "rhs", "modulus"}, source);
      Decomposition d;
      const Field* lhs = single(b, "lhs", source, true);
      d.lhs = with_source(source, [&] { return parse_product_term(lhs->value, origin_of(*lhs)); });
      d.modulus = parse_int_field(*single(b, "modulus", source, true), source);
      for (const Field* f : repeated(b, "rhs"))
        d.rhs.push_back(with_source(source, [&] { return parse_product_term(f->value, origin_of(*f)); }));
      try {
        validate_decomposition(d);
      } catch (const DomainError& e) {
        fail_at(source, b.line, 1, e.what());
      }
      return d;
    }
    case EntryKind::equivalence: {
      allow_only(b, {"sum", "rescale", "claim"}, source);
      EquivalencePayload p;
      const auto sums = repeated(b, "sum");
      const Field* rescale = single(b, "rescale", source, false);
      if (rescale && !sums.empty()) fail_at(source, rescale->line, 1, "give either rescale: or sum: lines");
      if (rescale) {
        std::istringstream in(rescale->value);
        std::int64_t a = 0, c = 0;
        if (!(in >> a >> c) || !(in >> std::ws).eof())
          fail_at(source, rescale->line, rescale->value_column, "rescale needs two integers a b");
        try {
          auto [l, r] = rescale_equivalence(a, c);
          p.members = {std::move(l), std::move(r)};
        } catch (const DomainError& e) {
          fail_at(source, rescale->line, rescale->value_column, e.what());
        }
        p.rescale = std::make_pair(a, c);
      } else {
        if (sums.size() < 2) fail_at(source, b.line, 1, "equivalence needs at least two 'sum:' lines");
        for (const Field* f : sums)
          p.members.push_back(with_source(source, [&] { return parse_polygonal_sum(f->value, origin_of(*f)); }));
      }
      if (const Field* claim = single(b, "claim", source, false)) {
        if (claim->value != "universal") fail_at(source, claim->line, claim->value_column, "claim must be 'universal'");
        p.claims_universal = true;
      }
      return p;
    }
    case EntryKind::base_fact:
    case EntryKind::target_sum: {
      if (kind == EntryKind::base_fact) allow_only(b, {"sum"}, source);
      else allow_only(b, {"sum", "via"}, source);
      SumPayload p;
      const Field* f = single(b, "sum", source, true);
      p.sum = with_source(source, [&] { return parse_polygonal_sum(f->value, origin_of(*f)); });
      if (const Field* via = single(b, "via", source, false)) p.via = via->value;
      return p;
    }
  }
  fail_at(source, b.line, 1, "unhandled kind");
}

CatalogEntry finish(const Block& b, const std::string& source) {
  const auto kind = parse_kind(b.kind);
  if (!kind) fail_at(source, b.line, 1, "unknown kind '" + b.kind + "'");
  CatalogEntry e;
  e.key = b.key;
  e.kind = *kind;
  e.ref = b.ref;
  e.file = source;
  e.line = b.line;
  e.payload = build_payload(b, *kind, source);
  return e;
}

}  // namespace

std::vector<CatalogEntry> parse_catalog_text(std::string_view text, const std::string& source_name) {
  std::vector<CatalogEntry> out;
  std::optional<Block> current;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = rstrip(line);
    const std::size_t first = skip_space(line, 0);
    if (first == line.size()) {
      if (end == text.size()) break;
      continue;
    }
    if (line[first] == '[') {
      if (current) out.push_back(finish(*current, source_name));
      current = parse_header(line.substr(first), source_name, line_no);
    } else {
      if (!current) fail_at(source_name, line_no, first + 1, "field line before any '[key]' header");
      std::size_t p = first;
      Field f;
      f.name = expect_label(line, p, source_name, line_no);
      p = skip_space(line, p);
      f.value = std::string(line.substr(p));
      f.line = line_no;
      f.value_column = p + 1;
      if (f.value.empty()) fail_at(source_name, line_no, p + 1, "field '" + f.name + "' has no value");
      current->fields.push_back(std::move(f));
    }
    if (end == text.size()) break;
  }
  if (current) out.push_back(finish(*current, source_name));
  return out;
}

Catalog load_catalog(const fs::path& path) {
  std::vector<fs::path> files;
  std::error_code ec;
  if (fs::is_directory(path, ec)) {
    for (const auto& de : fs::directory_iterator(path))
      if (de.is_regular_file() && de.path().extension() == ".cat") files.push_back(de.path());
    std::sort(files.begin(), files.end());
    if (files.empty()) throw CatalogError("no .cat files in " + path.string());
  } else if (fs::is_regular_file(path, ec)) {
    files.push_back(path);
  } else {
    throw CatalogError("catalog path not found: " + path.string());
  }
  std::vector<CatalogEntry> all;
  for (const auto& f : files) {
    std::ifstream in(f, std::ios::binary);
    if (!in) throw CatalogError("cannot read " + f.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    auto entries = parse_catalog_text(buf.str(), f.filename().string());
    all.insert(all.end(), std::make_move_iterator(entries.begin()), std::make_move_iterator(entries.end()));
  }
  return Catalog(std::move(all));
}

fs::path default_catalog_path() {
  if (const char* env = std::getenv("POLYTHETA_CATALOG"); env && *env) return fs::path(env);
#ifdef POLYTHETA_BUILD_CATALOG_DIR
  if (std::error_code ec; fs::is_directory(POLYTHETA_BUILD_CATALOG_DIR, ec)) return POLYTHETA_BUILD_CATALOG_DIR;
#endif
#ifdef POLYTHETA_INSTALL_CATALOG_DIR
  return POLYTHETA_INSTALL_CATALOG_DIR;
#else
  return "catalog";
#endif
}

Catalog load_catalog() { return load_catalog(default_catalog_path()); }

std::string serialize_catalog(const std::vector<CatalogEntry>& entries) {
  std::string out;
  for (const auto& e : entries) {
    if (!out.empty()) out += "\n";
    out += "[" + e.key + "] kind: " + std::string(kind_name(e.kind)) + " ref: \"" + e.ref + "\"\n";
    switch (e.kind) {
      case EntryKind::identity: {
        out += "lhs: " + serialize(e.identity().lhs) + "\n";
        for (const auto& t : e.identity().rhs.terms) out += "rhs: " + serialize(t) + "\n";
        break;
      }
      case EntryKind::decomposition: {
        const auto& d = e.decomposition();
        out += "lhs: " + serialize(d.lhs) + "\n";
        out += "modulus: " + std::to_string(d.modulus) + "\n";
        for (const auto& t : d.rhs) out += "rhs: " + serialize(t) + "\n";
        break;
      }
      case EntryKind::equivalence: {
        const auto& p = e.equivalence();
        if (p.rescale) out += "rescale: " + std::to_string(p.rescale->first) + " " + std::to_string(p.rescale->second) + "\n";
        else
          for (const auto& s : p.members) out += "sum: " + serialize(s) + "\n";
        if (p.claims_universal) out += "claim: universal\n";
        break;
      }
      case EntryKind::base_fact:
      case EntryKind::target_sum: {
        out += "sum: " + serialize(e.sum().sum) + "\n";
        if (!e.sum().via.empty()) out += "via: " + e.sum().via + "\n";
        break;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------- propagation

const std::vector<std::string>* Propagation::derivations(const SumKey& k) const {
  auto it = established.find(k);
  return it == established.end() ? nullptr : &it->second;
}

Propagation propagate(const Catalog& catalog, const std::set<std::string>& base_keys,
                      const std::set<std::string>& decomposition_keys,
                      const std::set<std::string>& equivalence_keys) {
  Propagation prop;
  auto add = [&](const SumKey& k, const std::string& source) {
    auto& list = prop.established[k];
    if (std::find(list.begin(), list.end(), source) != list.end()) return false;
    list.push_back(source);
    return true;
  };

  for (const auto& key : base_keys) {
    const CatalogEntry* e = catalog.find(key);
    if (e && e->kind == EntryKind::base_fact) add(canonical_key(e->sum().sum), key);
  }

  struct DecompKeys {
    const std::string* key;
    SumKey lhs;
    std::vector<SumKey> rhs;
  };
  std::vector<DecompKeys> decomps;
  for (const auto& key : decomposition_keys) {
    const CatalogEntry* e = catalog.find(key);
    if (!e || e->kind != EntryKind::decomposition) continue;
    const TransferRecord rec = derive_sums(e->decomposition(), e->key);
    DecompKeys dk{&e->key, canonical_key(rec.lhs_sum), {}};
    for (const auto& s : rec.rhs_sums) dk.rhs.push_back(canonical_key(s));
    decomps.push_back(std::move(dk));
  }
  struct EquivKeys {
    const std::string* key;
    std::vector<SumKey> members;
  };
  std::vector<EquivKeys> equivs;
  for (const auto& key : equivalence_keys) {
    const CatalogEntry* e = catalog.find(key);
    if (!e || e->kind != EntryKind::equivalence) continue;
    EquivKeys ek{&e->key, {}};
    for (const auto& s : e->equivalence().members) ek.members.push_back(canonical_key(s));
    equivs.push_back(std::move(ek));
  }

  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& d : decomps) {
      if (!prop.is_established(d.lhs)) continue;
      for (const auto& r : d.rhs) changed = add(r, *d.key) || changed;
    }
    for (const auto& q : equivs) {
      for (std::size_t m = 0; m < q.members.size(); ++m) {
        bool other = false;
        for (std::size_t n = 0; n < q.members.size() && !other; ++n)
          other = n != m && q.members[n] != q.members[m] && prop.is_established(q.members[n]);
        if (other) changed = add(q.members[m], *q.key) || changed;
      }
    }
  }
  return prop;
}

// ---------------------------------------------------------------- runner

bool Selection::accepts(const CatalogEntry& e) const {
  if (kind && e.kind != *kind) return false;
  if (!keys.empty() && keys.count(e.key) == 0) return false;
  if (!key_prefixes.empty() &&
      std::none_of(key_prefixes.begin(), key_prefixes.end(),
                   [&](const std::string& p) { return e.key.rfind(p, 0) == 0; }))
    return false;
  return true;
}

bool CatalogReport::all_pass() const noexcept {
  return std::all_of(rows.begin(), rows.end(), [](const ReportRow& r) { return r.status == RowStatus::pass; });
}

std::size_t CatalogReport::count(RowStatus s) const noexcept {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [s](const ReportRow& r) { return r.status == s; }));
}

namespace {

void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& fn) {
  const unsigned threads = std::max(1U, std::min<unsigned>(workers, static_cast<unsigned>(n)));
  if (threads <= 1) {
    for (std::size_t k = 0; k < n; ++k) fn(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < n; k = next++) fn(k);
    });
  for (auto& th : pool) th.join();
}

std::string list_missing(const std::vector<std::int64_t>& missing, std::size_t limit = 10) {
  std::string out;
  for (std::size_t k = 0; k < missing.size() && k < limit; ++k) {
    if (k) out += ", ";
    out += std::to_string(missing[k]);
  }
  if (missing.size() > limit) out += ", ... (" + std::to_string(missing.size()) + " in total)";
  return out;
}

std::int64_t max_shift(const ThetaExpression& e) {
  std::int64_t m = 0;
  for (const auto& t : e.terms) m = std::max(m, t.shift);
  return m;
}

ReportRow check_identity(const CatalogEntry& e, std::size_t order) {
  ReportRow row{e.key, e.kind, RowStatus::fail, {}};
  const auto& p = e.identity();
  const std::int64_t shift = std::max(max_shift(p.lhs), max_shift(p.rhs));
  if (static_cast<std::int64_t>(order) <= shift) {
    row.status = RowStatus::insufficient_order;
    row.detail = "order " + std::to_string(order) + " does not reach q-shift " + std::to_string(shift);
    return row;
  }
  const Series lhs = expression_series(p.lhs, order);
  const Series rhs = expression_series(p.rhs, order);
  const auto cmp = series_equal_upto(lhs, rhs, order);
  if (cmp) {
    row.status = RowStatus::pass;
    row.detail = "equal to order " + std::to_string(order);
  } else {
    const auto& m = *cmp.first_difference;
    row.detail = "first difference at q^" + std::to_string(m.exponent) + ": lhs " + std::to_string(m.lhs) +
                 ", rhs " + std::to_string(m.rhs);
  }
  return row;
}

ReportRow check_decomposition(const CatalogEntry& e, const RunOptions& opt) {
  ReportRow row{e.key, e.kind, RowStatus::fail, {}};
  const auto& d = e.decomposition();
  std::int64_t shift = 0;
  for (const auto& t : d.rhs) shift = std::max(shift, t.shift);
  if (static_cast<std::int64_t>(opt.order) <= shift) {
    row.status = RowStatus::insufficient_order;
    row.detail = "order " + std::to_string(opt.order) + " does not reach q-shift " + std::to_string(shift);
    return row;
  }
  const auto series = verify_decomposition(d, opt.order);
  if (!series.holds) {
    row.detail = "series check failed: " + series.detail;
    return row;
  }
  const auto residue = check_residue_identity(d, opt.order);
  if (!residue.holds) {
    row.detail = "residue identity failed: " + residue.detail;
    return row;
  }
  const TransferRecord rec = derive_sums(d, e.key);
  const TransferReport tr = transfer_universality(rec, {}, opt.bound);
  std::string sums;
  for (const auto& r : tr.rhs) {
    if (!sums.empty()) sums += "; ";
    sums += describe(r.sum);
  }
  if (tr.status != TransferStatus::propagated) {
    row.detail = "transfer " + std::string(tr.status == TransferStatus::refused ? "refused" : "inconsistent") +
                 ": " + tr.detail;
    return row;
  }
  if (!tr.all_rhs_certified()) {
    for (const auto& r : tr.rhs)
      if (!r.direct.universal_up_to_bound) {
        row.detail = "rhs " + describe(r.sum) + " misses " + list_missing(r.direct.missing);
        return row;
      }
  }
  std::int64_t n = opt.biconditional_bound;
  if (n <= 0) n = (opt.bound - d.modulus + 1) / d.modulus;
  if (n >= 1) {
    const auto bic = check_biconditional(d, n);
    if (!bic.holds()) {
      row.detail = "biconditional fails at N = " + std::to_string(n) + " (lhs " +
                   (bic.lhs_universal ? "universal" : "not universal") + ", rhs " +
                   (bic.rhs_all_universal ? "all universal" : "not all universal") + ")";
      return row;
    }
  }
  row.status = RowStatus::pass;
  row.detail = "equal to order " + std::to_string(opt.order) + "; " + describe(rec.lhs_sum) + " => " + sums;
  return row;
}

ReportRow check_equivalence(const CatalogEntry& e, std::int64_t bound) {
  ReportRow row{e.key, e.kind, RowStatus::fail, {}};
  const auto& p = e.equivalence();
  for (std::size_t k = 0; k + 1 < p.members.size(); ++k) {
    const auto v = equivalent_upto(p.members[k], p.members[k + 1], bound);
    if (!v.equivalent) {
      row.detail = describe(p.members[k]) + " vs " + describe(p.members[k + 1]) + ": " +
                   std::to_string(*v.witness) + " represented only by the " +
                   (v.witness_in_first ? "first" : "second");
      return row;
    }
  }
  if (p.claims_universal) {
    for (const auto& s : p.members) {
      const auto u = certify_universal(s, bound);
      if (!u.universal_up_to_bound) {
        row.detail = describe(s) + " misses " + list_missing(u.missing);
        return row;
      }
    }
  }
  row.status = RowStatus::pass;
  row.detail = std::to_string(p.members.size()) + " members equal up to " + std::to_string(bound) +
               (p.claims_universal ? ", all universal" : "");
  return row;
}

ReportRow check_base(const CatalogEntry& e, std::int64_t bound) {
  ReportRow row{e.key, e.kind, RowStatus::fail, {}};
  const auto u = certify_universal(e.sum().sum, bound);
  if (u.universal_up_to_bound) {
    row.status = RowStatus::pass;
    row.detail = describe(e.sum().sum) + " universal up to " + std::to_string(bound);
  } else {
    row.detail = describe(e.sum().sum) + " misses " + list_missing(u.missing);
  }
  return row;
}

bool listed_in_theorem(const Catalog& catalog, const SumKey& k) {
  for (const auto& e : catalog.entries()) {
    if (e.kind == EntryKind::target_sum && !e.sum().via.empty() && canonical_key(e.sum().sum) == k) return true;
    if (e.kind == EntryKind::equivalence && e.equivalence().claims_universal)
      for (const auto& s : e.equivalence().members)
        if (canonical_key(s) == k) return true;
  }
  return false;
}

ReportRow check_target(const Catalog& catalog, const CatalogEntry& e, const Propagation& prop,
                       std::int64_t bound) {
  ReportRow row{e.key, e.kind, RowStatus::fail, {}};
  const auto& p = e.sum();
  const SumKey key = canonical_key(p.sum);
  const auto u = certify_universal(p.sum, bound);
  if (!u.universal_up_to_bound) {
    row.detail = describe(p.sum) + " misses " + list_missing(u.missing);
    return row;
  }
  const auto* derivs = prop.derivations(key);
  if (!derivs && p.via.empty()) {
    // Listed sums without a claimed derivation only need certification.
    row.status = RowStatus::pass;
    row.detail = describe(p.sum) + " universal up to " + std::to_string(bound) +
                 "; not reached by propagation" +
                 (listed_in_theorem(catalog, key) ? "" : " and not in any theorem list");
    return row;
  }
  if (!derivs) {
    row.detail = describe(p.sum) + " universal up to " + std::to_string(bound) +
                 " but not reached by propagation from the certified base facts";
    return row;
  }
  std::string others;
  for (const auto& d : *derivs) {
    if (d == p.via) continue;
    if (!others.empty()) others += ", ";
    others += d;
  }
  if (!p.via.empty() && std::find(derivs->begin(), derivs->end(), p.via) == derivs->end()) {
    row.detail = describe(p.sum) + " is not derived by " + p.via + " (derived by " + others + ")";
    return row;
  }
  row.status = RowStatus::pass;
  row.detail = describe(p.sum) + " universal up to " + std::to_string(bound);
  if (p.via.empty() && !listed_in_theorem(catalog, key)) row.detail += "; not in any theorem list";
  if (!p.via.empty()) row.detail += "; via " + p.via;
  if (!others.empty()) row.detail += (p.via.empty() ? "; derived by " : "; also derived by ") + others;
  return row;
}

}  // namespace

CatalogReport run_catalog(const Catalog& catalog, const RunOptions& options, const Selection& selection) {
  if (options.order < 1) throw DomainError("order must be positive");
  if (options.bound < 1) throw DomainError("bound must be positive");

  const auto& entries = catalog.entries();
  std::vector<bool> selected(entries.size());
  bool need_propagation = false;
  for (std::size_t k = 0; k < entries.size(); ++k) {
    selected[k] = selection.accepts(entries[k]);
    if (selected[k] && entries[k].kind == EntryKind::target_sum) need_propagation = true;
  }

  // Phase one: everything that does not depend on propagation.
  std::vector<std::size_t> first;
  for (std::size_t k = 0; k < entries.size(); ++k)
    if (entries[k].kind != EntryKind::target_sum && (selected[k] || need_propagation)) first.push_back(k);

  std::vector<std::optional<ReportRow>> results(entries.size());
  auto guarded = [&](std::size_t idx, const std::function<ReportRow()>& fn) {
    try {
      results[idx] = fn();
    } catch (const std::exception& ex) {
      results[idx] = ReportRow{entries[idx].key, entries[idx].kind, RowStatus::fail,
                               std::string("error: ") + ex.what()};
    }
  };
  parallel_for(first.size(), options.workers, [&](std::size_t n) {
    const std::size_t idx = first[n];
    const auto& e = entries[idx];
    guarded(idx, [&] {
      switch (e.kind) {
        case EntryKind::identity: return check_identity(e, options.order);
        case EntryKind::decomposition: return check_decomposition(e, options);
        case EntryKind::equivalence: return check_equivalence(e, options.bound);
        case EntryKind::base_fact: return check_base(e, options.bound);
        case EntryKind::target_sum: break;
      }
      return ReportRow{e.key, e.kind, RowStatus::fail, "unexpected kind"};
    });
  });

  if (need_propagation) {
    std::set<std::string> bases, decomps, equivs;
    for (std::size_t k = 0; k < entries.size(); ++k) {
      if (!results[k] || results[k]->status != RowStatus::pass) continue;
      switch (entries[k].kind) {
        case EntryKind::base_fact: bases.insert(entries[k].key); break;
        case EntryKind::decomposition: decomps.insert(entries[k].key); break;
        case EntryKind::equivalence: equivs.insert(entries[k].key); break;
        default: break;
      }
    }
    const Propagation prop = propagate(catalog, bases, decomps, equivs);
    std::vector<std::size_t> second;
    for (std::size_t k = 0; k < entries.size(); ++k)
      if (selected[k] && entries[k].kind == EntryKind::target_sum) second.push_back(k);
    parallel_for(second.size(), options.workers, [&](std::size_t n) {
      const std::size_t idx = second[n];
      guarded(idx, [&] { return check_target(catalog, entries[idx], prop, options.bound); });
    });
  }

  CatalogReport report;
  report.options = options;
  for (std::size_t k = 0; k < entries.size(); ++k)
    if (selected[k] && results[k]) report.rows.push_back(std::move(*results[k]));
  std::sort(report.rows.begin(), report.rows.end(),
            [](const ReportRow& a, const ReportRow& b) { return natural_key_less(a.key, b.key); });
  return report;
}

}  // namespace polytheta
