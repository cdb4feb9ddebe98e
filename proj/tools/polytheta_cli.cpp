#include "polytheta_cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "polytheta/catalog.hpp"
#include "polytheta/dsl.hpp"
#include "polytheta/polygonal.hpp"
#include "polytheta/theta.hpp"

namespace polytheta::cli {

namespace {

using nlohmann::json;

constexpr const char* kSchema = "polytheta-report/1";

enum class Format { human, report };

struct Config {
  std::size_t order = 1000;
  std::int64_t bound = 50000;
  unsigned workers = std::max(1U, std::thread::hardware_concurrency());
  Format format = Format::human;
  std::string catalog;
};

struct Usage {
  std::string message;
};

json config_json(const Config& c) {
  return json{{"order", c.order}, {"bound", c.bound}, {"workers", c.workers}};
}

std::string missing_text(const std::vector<std::int64_t>& missing, std::size_t limit = 20) {
  std::string out;
  for (std::size_t k = 0; k < missing.size() && k < limit; ++k) {
    if (k) out += ", ";
    out += std::to_string(missing[k]);
  }
  if (missing.size() > limit) out += ", ... (" + std::to_string(missing.size()) + " in total)";
  return out;
}

// Prints the offending text with carets under the span.
void print_parse_error(std::ostream& err, const ParseError& e, const std::string& text) {
  err << "error: " << e.what() << "\n";
  if (e.span().line != 1 || text.find('\n') != std::string::npos) return;
  err << "  " << text << "\n  ";
  const std::size_t start = e.span().col_start;
  const std::size_t end = std::max(e.span().col_end, start);
  err << std::string(start > 0 ? start - 1 : 0, ' ') << std::string(end - start + 1, '^') << "\n";
}

Catalog open_catalog(const Config& c) {
  if (!c.catalog.empty()) return load_catalog(std::filesystem::path(c.catalog));
  return load_catalog();
}

int emit_report(std::ostream& out, const Config& c, const std::string& command, const CatalogReport& rep) {
  if (c.format == Format::report) {
    json records = json::array();
    for (const auto& r : rep.rows)
      records.push_back(json{{"key", r.key},
                             {"kind", std::string(kind_name(r.kind))},
                             {"status", std::string(status_name(r.status))},
                             {"detail", r.detail}});
    json doc{{"schema", kSchema},
             {"command", command},
             {"config", config_json(c)},
             {"records", records},
             {"summary",
              {{"total", rep.rows.size()},
               {"pass", rep.count(RowStatus::pass)},
               {"fail", rep.count(RowStatus::fail)},
               {"insufficient-order", rep.count(RowStatus::insufficient_order)}}}};
    out << doc.dump(2) << "\n";
  } else {
    std::size_t width = 0;
    for (const auto& r : rep.rows) width = std::max(width, r.key.size());
    for (const auto& r : rep.rows) {
      const std::string status(status_name(r.status));
      out << status << std::string(20 - status.size(), ' ') << r.key << std::string(width - r.key.size() + 2, ' ') << r.detail << "\n";
    }
    out << rep.rows.size() << " rows: " << rep.count(RowStatus::pass) << " pass, "
        << rep.count(RowStatus::fail) << " fail";
    if (const auto n = rep.count(RowStatus::insufficient_order)) out << ", " << n << " insufficient-order";
    out << " (order " << c.order << ", bound " << c.bound << ")\n";
  }
  return rep.all_pass() && !rep.rows.empty() ? exit_ok : exit_failure;
}

RunOptions run_options(const Config& c) {
  RunOptions o;
  o.order = c.order;
  o.bound = c.bound;
  o.workers = c.workers;
  return o;
}

// ---------------------------------------------------------------- commands

int cmd_expand(std::ostream& out, const Config& c, const std::string& text) {
  const ThetaExpression e = parse_theta_expression(text);
  const Series s = expression_series(e, c.order);
  std::vector<std::pair<std::size_t, Coeff>> nz;
  for (std::size_t k = 0; k < s.order(); ++k)
    if (s[k] != 0) nz.emplace_back(k, s[k]);
  if (c.format == Format::report) {
    json coeffs = json::array();
    for (auto [k, v] : nz) coeffs.push_back(json::array({k, v}));
    out << json{{"schema", kSchema}, {"command", "expand"}, {"config", config_json(c)},
                {"expression", serialize(e)}, {"coefficients", coeffs}}
               .dump(2)
        << "\n";
  } else {
    for (std::size_t k = 0; k < nz.size(); ++k) out << (k ? " " : "") << nz[k].first << ":" << nz[k].second;
    out << "\n";
  }
  return exit_ok;
}

int cmd_verify(std::ostream& out, const Config& c, const std::vector<std::string>& targets) {
  Selection sel;
  std::optional<Catalog> own;
  bool all = false;
  for (const auto& t : targets) {
    if (t == "all") {
      all = true;
    } else if (std::filesystem::is_regular_file(t)) {
      if (own) throw Usage{"give at most one catalog file to verify"};
      own = load_catalog(std::filesystem::path(t));
    } else {
      sel.keys.insert(t);
    }
  }
  Catalog cat = own ? std::move(*own) : open_catalog(c);
  for (const auto& k : sel.keys) {
    const CatalogEntry* e = cat.find(k);
    if (!e) throw Usage{"unknown catalog key '" + k + "'"};
    if (e->kind != EntryKind::identity && e->kind != EntryKind::decomposition)
      throw Usage{"'" + k + "' is a " + std::string(kind_name(e->kind)) + ", not an identity or decomposition"};
  }
  if (all || own) sel.keys.clear();
  CatalogReport rep;
  for (auto kind : {EntryKind::identity, EntryKind::decomposition}) {
    Selection s = sel;
    s.kind = kind;
    auto part = run_catalog(cat, run_options(c), s);
    rep.rows.insert(rep.rows.end(), part.rows.begin(), part.rows.end());
  }
  std::sort(rep.rows.begin(), rep.rows.end(),
            [](const ReportRow& a, const ReportRow& b) { return natural_key_less(a.key, b.key); });
  return emit_report(out, c, "verify", rep);
}

int cmd_universal(std::ostream& out, const Config& c, const std::string& text) {
  const PolygonalSum s = parse_polygonal_sum(text);
  const auto v = certify_universal(s, c.bound);
  const std::string detail = v.universal_up_to_bound
                                 ? "universal up to " + std::to_string(c.bound)
                                 : "not universal up to " + std::to_string(c.bound) + "; missing " + missing_text(v.missing);
  if (c.format == Format::report) {
    json rec{{"key", serialize(s)}, {"kind", "universal"}, {"status", v.universal_up_to_bound ? "pass" : "fail"},
             {"detail", detail}};
    json missing = json::array();
    for (std::size_t k = 0; k < v.missing.size() && k < 100; ++k) missing.push_back(v.missing[k]);
    rec["missing"] = missing;
    out << json{{"schema", kSchema}, {"command", "universal"}, {"config", config_json(c)}, {"records", {rec}}}.dump(2)
        << "\n";
  } else {
    out << describe(s) << ": " << detail << "\n";
  }
  return v.universal_up_to_bound ? exit_ok : exit_failure;
}

int cmd_equiv(std::ostream& out, const Config& c, const std::string& a_text, const std::string& b_text) {
  const PolygonalSum a = parse_polygonal_sum(a_text);
  const PolygonalSum b = parse_polygonal_sum(b_text);
  const auto v = equivalent_upto(a, b, c.bound);
  std::string detail;
  if (v.equivalent) {
    detail = "equal value sets up to " + std::to_string(c.bound);
  } else {
    detail = "differ: witness " + std::to_string(*v.witness) + " is represented by the " +
             (v.witness_in_first ? "first" : "second") + " sum only";
  }
  if (c.format == Format::report) {
    json rec{{"key", serialize(a) + " ~ " + serialize(b)}, {"kind", "equivalence"},
             {"status", v.equivalent ? "pass" : "fail"}, {"detail", detail}};
    if (v.witness) rec["witness"] = *v.witness;
    out << json{{"schema", kSchema}, {"command", "equiv"}, {"config", config_json(c)}, {"records", {rec}}}.dump(2)
        << "\n";
  } else {
    out << describe(a) << " ~ " << describe(b) << ": " << detail << "\n";
  }
  return v.equivalent ? exit_ok : exit_failure;
}

const std::map<std::string, std::string>& theorem_prefixes() {
  static const std::map<std::string, std::string> m{
      {"thm3.1", "thm3.1-row-"},
      {"thm3.2", "thm3.2-row-"},
      {"thm3.3", "thm3.3-row-"},
      {"thm3.4", "thm3.4-chain-"},
      {"section1-catalog", "sec1-item-"},
  };
  return m;
}

int cmd_reproduce(std::ostream& out, const Config& c, const std::string& id) {
  const auto& m = theorem_prefixes();
  const auto it = m.find(id);
  if (it == m.end()) throw Usage{"unknown theorem id '" + id + "'"};
  const Catalog cat = open_catalog(c);
  Selection sel;
  sel.key_prefixes = {it->second};
  return emit_report(out, c, "reproduce " + id, run_catalog(cat, run_options(c), sel));
}

int cmd_run(std::ostream& out, const Config& c, const std::string& kind) {
  const Catalog cat = open_catalog(c);
  Selection sel;
  if (!kind.empty()) {
    sel.kind = parse_kind(kind);
    if (!sel.kind) throw Usage{"unknown kind '" + kind + "'"};
  }
  return emit_report(out, c, kind.empty() ? "run" : "run --kind " + kind, run_catalog(cat, run_options(c), sel));
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Config cfg;
  std::string format = "human";

  CLI::App app{"Theta-function identities and universal polygonal sums"};
  app.name("polytheta");
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--order", cfg.order, "Series truncation order (coefficients q^0 .. q^(order-1))")
      ->check(CLI::Range(std::size_t{2}, std::size_t{100'000'000}));
  app.add_option("--bound", cfg.bound, "Certify universality for 0 .. bound")
      ->check(CLI::Range(std::int64_t{1}, std::int64_t{2'000'000'000}));
  app.add_option("--workers", cfg.workers, "Parallel workers for batch commands")
      ->check(CLI::Range(1U, 1024U));
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"human", "report"}));
  app.add_option("--catalog", cfg.catalog, "Catalog file or directory (default: $POLYTHETA_CATALOG)");

  std::string expr, sum_a, sum_b, theorem, kind;
  std::vector<std::string> targets;

  auto* expand = app.add_subcommand("expand", "Print the nonzero coefficients of a theta expression");
  expand->add_option("expression", expr, "Theta expression, e.g. \"phi(q)^2\"")->required();

  auto* verify = app.add_subcommand("verify", "Verify catalog identities and decompositions");
  verify->add_option("targets", targets, "Catalog keys, a catalog file, or 'all'")->required();

  auto* universal = app.add_subcommand("universal", "Certify a polygonal sum universal up to the bound");
  universal->add_option("sum", sum_a, "Polygonal sum, e.g. \"p5 + p5 + p5 + 4*p5\"")->required();

  auto* equiv = app.add_subcommand("equiv", "Compare the value sets of two sums up to the bound");
  equiv->add_option("first", sum_a, "First sum")->required();
  equiv->add_option("second", sum_b, "Second sum")->required();

  auto* reproduce = app.add_subcommand("reproduce", "Reproduce a theorem's list of universal sums");
  reproduce->add_option("theorem", theorem, "thm3.1, thm3.2, thm3.3, thm3.4 or section1-catalog")->required();

  auto* runall = app.add_subcommand("run", "Check every catalog entry");
  runall->add_option("--kind", kind, "Only rows of this kind");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err) == 0 ? exit_ok : exit_usage;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return exit_usage;
  }
  cfg.format = format == "report" ? Format::report : Format::human;

  std::string parsed_text;
  try {
    if (*expand) {
      parsed_text = expr;
      return cmd_expand(out, cfg, expr);
    }
    if (*verify) return cmd_verify(out, cfg, targets);
    if (*universal) {
      parsed_text = sum_a;
      return cmd_universal(out, cfg, sum_a);
    }
    if (*equiv) {
      parsed_text = sum_a;
      try {
        parse_polygonal_sum(sum_a);
      } catch (const ParseError& e) {
        print_parse_error(err, e, sum_a);
        return exit_usage;
      }
      parsed_text = sum_b;
      return cmd_equiv(out, cfg, sum_a, sum_b);
    }
    if (*reproduce) return cmd_reproduce(out, cfg, theorem);
    if (*runall) return cmd_run(out, cfg, kind);
  } catch (const ParseError& e) {
    print_parse_error(err, e, parsed_text);
    return exit_usage;
  } catch (const Usage& u) {
    err << "error: " << u.message << "\n";
    return exit_usage;
  } catch (const CatalogError& e) {
    err << "catalog error: " << e.what() << "\n";
    return exit_usage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_failure;
  }
  return exit_usage;
}

}  // namespace polytheta::cli
