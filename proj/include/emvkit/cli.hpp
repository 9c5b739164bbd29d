#pragma once

// Command-line front end.  Exit codes: 0 pass, 1 law failure, 2 usage or
// parse error, 3 no square root, 4 internal invariant breach.

#include "emvkit/laws.hpp"
#include "emvkit/represent.hpp"
#include "emvkit/sqrt.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdlib>
#include <ostream>
#include <string>
#include <vector>

namespace emv {

namespace cli_exit {
inline constexpr int ok = 0;
inline constexpr int law_failure = 1;
inline constexpr int usage = 2;
inline constexpr int no_root = 3;
inline constexpr int internal = 4;
}  // namespace cli_exit

namespace detail {

struct CliOptions {
  std::string descriptor;
  std::string element;
  std::string suite;
  std::string format = "text";
  bool table = false;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  Budget budget;
};

inline nlohmann::json witness_json(const Algebra& m, const Witness& w) {
  nlohmann::json chain = nlohmann::json::array();
  for (const auto& y : w.chain) chain.push_back(m.format(y));
  return {{"kind", witness_kind_name(w.kind)}, {"x", m.format(w.x)}, {"chain", chain}, {"message", w.message}};
}

/// Builds the square root and re-derives it: positive verdicts are verified
/// on the truncation, negative ones are re-checked from their witness.
inline ExistenceVerdict checked_build(const Algebra& m, const Budget& budget) {
  ExistenceVerdict v = sqrt_build(m, budget);
  if (v.exists) {
    const VerifyReport rep = verify_sqrt(m, *v.root, budget);
    if (!rep.ok) throw InvariantError("constructed square root fails verification: " + rep.failure);
  } else if (!recheck(m, v, budget)) {
    throw InvariantError("non-existence witness does not re-check: " + v.witness.message);
  }
  return v;
}

inline int report_no_root(const Algebra& m, const ExistenceVerdict& v, const CliOptions& o, std::ostream& out) {
  if (o.format == "json") {
    out << nlohmann::json{{"algebra", m.name()}, {"exists", false}, {"witness", witness_json(m, v.witness)}}.dump(2) << "\n";
  } else {
    out << "no square root on " << m.name() << "\n";
    out << "witness=" << witness_kind_name(v.witness.kind) << ": " << v.witness.message << "\n";
  }
  return cli_exit::no_root;
}

inline int cmd_sqrt(const CliOptions& o, std::ostream& out) {
  const AlgebraPtr m = make_algebra(o.descriptor);
  const ExistenceVerdict v = checked_build(*m, o.budget);
  if (!v.exists) return report_no_root(*m, v, o, out);
  const SquareRoot& r = *v.root;
  const bool strict = is_strict(*m, r, o.budget).strict;
  const std::string form = form_name(r.form);
  nlohmann::json j = {{"algebra", m->name()}, {"exists", true}, {"form", form}, {"r0", m->format(r.r0)}, {"strict", strict}};
  std::string text;
  if (!o.element.empty()) {
    const Element x = m->parse_element(o.element);
    m->require(x);
    const Element rx = apply(*m, r, x);
    j["x"] = m->format(x);
    j["value"] = m->format(rx);
    text = m->format(rx) + ", form=" + form + ", strict=" + (strict ? "true" : "false") + "\n";
  } else {
    text = "form=" + form + ", r(0)=" + m->format(r.r0) + ", strict=" + (strict ? "true" : "false") + "\n";
  }
  if (o.table) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& x : m->enumerate(o.budget).elements) {
      const Element rx = apply(*m, r, x);
      rows.push_back({m->format(x), m->format(rx)});
      text += m->format(x) + "\t" + m->format(rx) + "\n";
    }
    j["table"] = rows;
  }
  out << (o.format == "json" ? j.dump(2) + "\n" : text);
  return cli_exit::ok;
}

inline int cmd_classify(const CliOptions& o, std::ostream& out) {
  const AlgebraPtr m = make_algebra(o.descriptor);
  const ExistenceVerdict v = checked_build(*m, o.budget);
  if (!v.exists) return report_no_root(*m, v, o, out);
  const Classification c = classify(*m, *v.root, o.budget);
  if (o.format == "json") {
    nlohmann::json j = {{"algebra", m->name()}, {"tag", classification_name(c.tag)}, {"text", c.text}};
    if (c.w) {
      j["boolean"] = c.boolean_part;
      j["strict"] = c.strict_part;
      j["w"] = m->format(*c.w);
    }
    out << j.dump(2) << "\n";
  } else {
    out << c.text << "\n";
  }
  return cli_exit::ok;
}

inline int cmd_decompose(const CliOptions& o, std::ostream& out) {
  const AlgebraPtr m = make_algebra(o.descriptor);
  const ExistenceVerdict v = checked_build(*m, o.budget);
  if (!v.exists) return report_no_root(*m, v, o, out);
  const Decomposition d = decompose(*m, *v.root, o.budget);
  const DecompositionReport rep = verify_decomposition(*m, *v.root, d, o.budget);
  if (!rep.ok) throw InvariantError("decomposition fails: " + rep.failure);
  nlohmann::json j = {{"algebra", m->name()},
                      {"boolean", d.classification.boolean_part},
                      {"strict", d.classification.strict_part},
                      {"e", m->format(d.e)},
                      {"w", m->format(*d.classification.w)},
                      {"checked", rep.checked},
                      {"boolean_size", rep.boolean_size},
                      {"boolean_atoms", rep.boolean_atoms}};
  std::string text = "M1=" + d.classification.boolean_part + " (" + std::to_string(rep.boolean_size) +
                     " elements sampled, " + std::to_string(rep.boolean_atoms) + " atoms)\n" +
                     "M2=" + d.classification.strict_part + "\n" + "e=" + m->format(d.e) + ", w=" +
                     m->format(*d.classification.w) + "\n";
  if (!o.element.empty()) {
    const Element x = m->parse_element(o.element);
    m->require(x);
    const auto [x1, x2] = d.split(*m, x);
    j["x"] = m->format(x);
    j["split"] = {m->format(x1), m->format(x2)};
    text += m->format(x) + " -> (" + m->format(x1) + ", " + m->format(x2) + ")\n";
  }
  out << (o.format == "json" ? j.dump(2) + "\n" : text);
  return cli_exit::ok;
}

inline int cmd_represent(const CliOptions& o, std::ostream& out) {
  const AlgebraPtr m = make_algebra(o.descriptor);
  const auto n = represent_top(m);
  const IdealReport ideal = check_ideal(*n, o.budget);
  if (!ideal.ideal || !ideal.maximal) throw InvariantError("M is not a maximal ideal of N: " + ideal.failure);
  const std::string desc = describe_representation(*m);
  const ExistenceVerdict v = checked_build(*m, o.budget);
  std::string root_text;
  nlohmann::json j = {{"algebra", m->name()}, {"representation", desc}, {"top", n->format(n->top())}};
  if (v.exists) {
    const SquareRoot ext = extend_sqrt(*n, *v.root, o.budget);
    const SquareRoot back = restrict_sqrt(*n, ext, o.budget);
    for (const auto& x : m->enumerate(o.budget).elements)
      if (apply(*m, back, x) != apply(*m, *v.root, x)) throw InvariantError("extend-then-restrict differs at " + m->format(x));
    root_text = describe_root(*n, ext, o.budget);
    j["R"] = root_text;
    j["R0"] = n->format(ext.r0);
  } else {
    root_text = "none";
    j["R"] = nullptr;
    j["witness"] = witness_json(*m, v.witness);
  }
  if (o.format == "json") {
    out << j.dump(2) << "\n";
  } else {
    out << desc << "; R=" << root_text << "\n";
    out << "top=" << n->format(n->top()) << "\n";
    if (!v.exists) out << "witness=" << witness_kind_name(v.witness.kind) << ": " << v.witness.message << "\n";
  }
  return cli_exit::ok;
}

inline int cmd_check(const CliOptions& o, std::ostream& out) {
  const AlgebraPtr m = make_algebra(o.descriptor);
  Budget budget = o.budget;
  if (o.samples) budget.samples = o.samples;
  if (!o.suite.empty() && !find_suite(law_catalog(), o.suite)) throw DomainError("unknown suite '" + o.suite + "'");
  const ExistenceVerdict v = sqrt_build(*m, budget);
  const LawContext ctx = make_context(m, v.exists ? v.root : std::nullopt, budget, o.seed);
  const auto reports = run_catalog(ctx, o.suite);
  const CatalogSummary s = summarize(reports);
  if (o.format == "json") {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : reports) arr.push_back(to_json(r));
    out << nlohmann::json{{"algebra", m->name()},
                          {"seed", o.seed},
                          {"reports", arr},
                          {"summary", {{"pass", s.pass}, {"fail", s.fail}, {"skipped", s.skipped}}}}
               .dump(2)
        << "\n";
  } else {
    for (const auto& r : reports) out << to_line(r) << "\n";
    out << "summary: pass=" << s.pass << " fail=" << s.fail << " skipped=" << s.skipped << "\n";
  }
  return s.fail ? cli_exit::law_failure : cli_exit::ok;
}

inline int cmd_parse(const CliOptions& o, std::ostream& out) {
  const Descriptor d = emv::parse_descriptor(o.descriptor);
  nlohmann::json j = {{"algebra", to_string(d)}};
  std::string text = to_string(d) + "\n";
  if (!o.element.empty()) {
    const AlgebraPtr m = make_algebra(d);
    const Element x = m->parse_element(o.element);
    m->require(x);
    j["element"] = m->format(x);
    text += m->format(x) + "\n";
  }
  out << (o.format == "json" ? j.dump(2) + "\n" : text);
  return cli_exit::ok;
}

}  // namespace detail

/// Runs one command; args excludes the program name.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  detail::CliOptions o;
  CLI::App app{"Square roots on EMV-algebras", "emvkit"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  auto common = [&](CLI::App* sub, bool element) {
    sub->add_option("algebra", o.descriptor, "algebra descriptor, e.g. \"product(bool(2),dyadic)\"")->required();
    if (element) sub->add_option("-x", o.element, "element literal");
    sub->add_option("--max-denom-exp", o.budget.max_denom_exp, "dyadic and p-adic denominators p^e, e <= E");
    sub->add_option("--max-set", o.budget.max_set, "finite subsets of {1..N}");
    sub->add_option("--lex-bound", o.budget.lex_bound, "Chang infinitesimals |lo| <= L");
    sub->add_option("--max-support", o.budget.max_support, "sum supports within {1..S}");
    sub->add_option("--format", o.format, "text or json")->check(CLI::IsMember({"text", "json"}));
  };
  CLI::App* sqrt_cmd = app.add_subcommand("sqrt", "construct the square root or explain why none exists");
  common(sqrt_cmd, true);
  sqrt_cmd->add_flag("--table", o.table, "print r(x) for every enumerated x");
  CLI::App* classify_cmd = app.add_subcommand("classify", "generalized Boolean, strict, or a product of both");
  common(classify_cmd, false);
  CLI::App* decompose_cmd = app.add_subcommand("decompose", "split into Boolean and strict parts");
  common(decompose_cmd, true);
  CLI::App* represent_cmd = app.add_subcommand("represent", "adjoin a top element and extend the square root");
  common(represent_cmd, false);
  CLI::App* check_cmd = app.add_subcommand("check", "run the law catalog");
  common(check_cmd, false);
  check_cmd->add_option("--suite", o.suite, "run a single suite");
  check_cmd->add_option("--seed", o.seed, "sampling seed (EMVKIT_SEED overrides)");
  check_cmd->add_option("--budget", o.samples, "sampled tuples per suite");
  CLI::App* parse_cmd = app.add_subcommand("parse", "print the canonical form of a descriptor and element");
  common(parse_cmd, true);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return cli_exit::ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return cli_exit::ok;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return cli_exit::usage;
  }
  if (const char* env = std::getenv("EMVKIT_SEED"); env && *env) {
    try {
      o.seed = std::stoull(env);
    } catch (const std::exception&) {
      err << "usage error: EMVKIT_SEED must be a non-negative integer\n";
      return cli_exit::usage;
    }
  }

  try {
    if (sqrt_cmd->parsed()) return detail::cmd_sqrt(o, out);
    if (classify_cmd->parsed()) return detail::cmd_classify(o, out);
    if (decompose_cmd->parsed()) return detail::cmd_decompose(o, out);
    if (represent_cmd->parsed()) return detail::cmd_represent(o, out);
    if (check_cmd->parsed()) return detail::cmd_check(o, out);
    if (parse_cmd->parsed()) return detail::cmd_parse(o, out);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return cli_exit::usage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return cli_exit::usage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return cli_exit::internal;
  }
  return cli_exit::usage;
}

}  // namespace emv
