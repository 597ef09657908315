#pragma once

// Typed STRIPS PDDL with optional unit-free action costs
// (`(increase (total-cost) k)`). Anything richer is rejected with a
// positioned diagnostic rather than silently approximated.

#include <algorithm>
#include <compare>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mrx/sexpr.hpp"

namespace mrx {

inline constexpr std::string_view kRootType = "object";

/// A predicate applied to arguments. Arguments are object names in ground
/// atoms and `?var` / constant names in schema atoms.
struct Atom {
  std::string predicate;
  std::vector<std::string> args;

  auto operator<=>(const Atom&) const = default;
  bool operator==(const Atom&) const = default;
};

inline std::string to_pddl(const Atom& a) {
  std::string s = "(" + a.predicate;
  for (const auto& arg : a.args) s += " " + arg;
  return s + ")";
}

struct TypedName {
  std::string name;
  std::string type{kRootType};

  auto operator<=>(const TypedName&) const = default;
  bool operator==(const TypedName&) const = default;
};

struct PredicateDecl {
  std::string name;
  std::vector<TypedName> params;

  bool operator==(const PredicateDecl&) const = default;
};

struct ActionSchema {
  std::string name;
  std::vector<TypedName> parameters;
  std::set<Atom> preconditions;
  std::set<Atom> add_effects;
  std::set<Atom> del_effects;
  int cost = 1;

  bool operator==(const ActionSchema&) const = default;
};

struct Domain {
  std::string name;
  std::set<std::string> requirements;
  /// Child type -> parent type. `object` is implicit and never a key.
  std::map<std::string, std::string> types;
  std::map<std::string, PredicateDecl> predicates;
  /// Constant name -> type.
  std::map<std::string, std::string> constants;
  std::map<std::string, ActionSchema> schemas;

  bool operator==(const Domain&) const = default;

  bool has_type(std::string_view t) const {
    return t == kRootType || types.count(std::string(t)) > 0;
  }

  /// True when `sub` equals `super` or descends from it.
  bool is_subtype(std::string sub, std::string_view super) const {
    for (std::size_t guard = 0; guard <= types.size() + 1; ++guard) {
      if (sub == super) return true;
      if (sub == kRootType) return false;
      auto it = types.find(sub);
      if (it == types.end()) return false;
      sub = it->second;
    }
    return false;
  }
};

struct Problem {
  std::string name;
  std::string domain_name;
  /// Object name -> type.
  std::map<std::string, std::string> objects;
  std::set<Atom> init;
  std::set<Atom> goal;

  bool operator==(const Problem&) const = default;
};

/// A complete planning model: domain plus one problem over it.
struct LiftedModel {
  Domain domain;
  Problem problem;

  bool operator==(const LiftedModel&) const = default;

  /// Constants and problem objects together, name -> type.
  std::map<std::string, std::string> all_objects() const {
    auto out = domain.constants;
    for (const auto& [n, t] : problem.objects) out.emplace(n, t);
    return out;
  }
};

struct PddlText {
  std::string domain;
  std::string problem;
};

namespace detail {

inline bool is_variable(std::string_view s) { return !s.empty() && s[0] == '?'; }

class PddlParser {
 public:
  explicit PddlParser(std::string file) : file_(std::move(file)) {}

  Domain parse_domain(std::string_view text) {
    const SExpr& root = single_define(text, "domain");
    Domain d;
    d.name = name_of(root.items[1], "domain");
    for (std::size_t i = 2; i < root.items.size(); ++i) {
      const SExpr& sec = root.items[i];
      if (!sec.is_list || sec.items.empty() || !sec.items[0].is_atom())
        fail(PddlErrorKind::Syntax, sec.pos, "expected a domain section");
      const std::string& key = sec.items[0].atom;
      if (key == ":requirements") {
        parse_requirements(sec, d);
      } else if (key == ":types") {
        parse_types(sec, d);
      } else if (key == ":constants") {
        for (const auto& tn : typed_list(sec, 1, false)) {
          if (!d.constants.emplace(tn.name, tn.type).second)
            fail(PddlErrorKind::Semantic, sec.pos, "duplicate constant '" + tn.name + "'");
        }
      } else if (key == ":predicates") {
        for (std::size_t j = 1; j < sec.items.size(); ++j) {
          const SExpr& p = sec.items[j];
          if (!p.is_list || p.items.empty() || !p.items[0].is_atom())
            fail(PddlErrorKind::Syntax, p.pos, "expected a predicate declaration");
          PredicateDecl decl{p.items[0].atom, typed_list(p, 1, true)};
          if (d.predicates.count(decl.name))
            fail(PddlErrorKind::Semantic, p.pos, "duplicate predicate '" + decl.name + "'");
          d.predicates.emplace(decl.name, std::move(decl));
        }
      } else if (key == ":functions") {
        parse_functions(sec);
      } else if (key == ":action") {
        ActionSchema a = parse_action(sec, d);
        if (d.schemas.count(a.name))
          fail(PddlErrorKind::Semantic, sec.pos, "duplicate action '" + a.name + "'");
        if (explicit_cost_) d.requirements.insert(":action-costs");
        d.schemas.emplace(a.name, std::move(a));
      } else {
        fail(PddlErrorKind::Unsupported, sec.pos, "domain section '" + key + "'");
      }
    }
    validate_domain(d, root.pos);
    return d;
  }

  LiftedModel parse_problem(std::string_view text, const Domain& domain) {
    const SExpr& root = single_define(text, "problem");
    LiftedModel m;
    m.domain = domain;
    Problem& p = m.problem;
    p.name = name_of(root.items[1], "problem");
    std::vector<std::pair<const SExpr*, bool>> atom_lists;  // (section, is_goal)
    for (std::size_t i = 2; i < root.items.size(); ++i) {
      const SExpr& sec = root.items[i];
      if (!sec.is_list || sec.items.empty() || !sec.items[0].is_atom())
        fail(PddlErrorKind::Syntax, sec.pos, "expected a problem section");
      const std::string& key = sec.items[0].atom;
      if (key == ":domain") {
        if (sec.items.size() != 2 || !sec.items[1].is_atom())
          fail(PddlErrorKind::Syntax, sec.pos, "malformed :domain");
        p.domain_name = sec.items[1].atom;
        if (p.domain_name != domain.name)
          fail(PddlErrorKind::Semantic, sec.items[1].pos,
               "problem refers to domain '" + p.domain_name + "' but domain is '" +
                   domain.name + "'");
      } else if (key == ":objects") {
        for (const auto& tn : typed_list(sec, 1, false)) {
          if (!domain.has_type(tn.type))
            fail(PddlErrorKind::Semantic, sec.pos, "undeclared type '" + tn.type + "'");
          if (domain.constants.count(tn.name) || !p.objects.emplace(tn.name, tn.type).second)
            fail(PddlErrorKind::Semantic, sec.pos, "duplicate object '" + tn.name + "'");
        }
      } else if (key == ":init") {
        atom_lists.emplace_back(&sec, false);
      } else if (key == ":goal") {
        atom_lists.emplace_back(&sec, true);
      } else if (key == ":metric") {
        check_metric(sec);
      } else if (key == ":requirements") {
        Domain scratch;
        parse_requirements(sec, scratch);
      } else {
        fail(PddlErrorKind::Unsupported, sec.pos, "problem section '" + key + "'");
      }
    }
    if (p.domain_name.empty()) p.domain_name = domain.name;
    const auto objects = m.all_objects();
    for (const auto& [sec, is_goal] : atom_lists) {
      if (is_goal) {
        if (sec->items.size() > 2)
          fail(PddlErrorKind::Syntax, sec->pos, ":goal takes a single formula");
        if (sec->items.size() == 2)
          collect_conjunction(sec->items[1], "goal", [&](const SExpr& e) {
            p.goal.insert(ground_atom(e, domain, objects));
          });
      } else {
        for (std::size_t j = 1; j < sec->items.size(); ++j) {
          const SExpr& e = sec->items[j];
          if (e.headed("=")) {
            check_total_cost_init(e);
            continue;
          }
          if (e.headed("not"))
            fail(PddlErrorKind::Unsupported, e.pos, "negative literal in :init");
          p.init.insert(ground_atom(e, domain, objects));
        }
      }
    }
    return m;
  }

 private:
  [[noreturn]] void fail(PddlErrorKind k, SourcePos pos, const std::string& msg) const {
    throw PddlError(k, pos, msg, file_);
  }

  const SExpr& single_define(std::string_view text, std::string_view what) {
    exprs_ = read_sexprs(text, file_);
    if (exprs_.size() != 1)
      fail(PddlErrorKind::Syntax, exprs_.empty() ? SourcePos{} : exprs_[1].pos,
           "expected exactly one (define ...) form");
    const SExpr& root = exprs_[0];
    if (!root.headed("define") || root.items.size() < 2)
      fail(PddlErrorKind::Syntax, root.pos, "expected (define ...)");
    const SExpr& head = root.items[1];
    if (!head.headed(what) || head.items.size() != 2 || !head.items[1].is_atom())
      fail(PddlErrorKind::Syntax, head.pos, "expected (" + std::string(what) + " <name>)");
    return root;
  }

  std::string name_of(const SExpr& head, std::string_view) const { return head.items[1].atom; }

  void parse_requirements(const SExpr& sec, Domain& d) const {
    for (std::size_t j = 1; j < sec.items.size(); ++j) {
      const SExpr& r = sec.items[j];
      if (!r.is_atom()) fail(PddlErrorKind::Syntax, r.pos, "expected a requirement flag");
      if (r.atom != ":strips" && r.atom != ":typing" && r.atom != ":action-costs")
        fail(PddlErrorKind::Unsupported, r.pos, "requirement '" + r.atom + "'");
      d.requirements.insert(r.atom);
    }
  }

  void parse_types(const SExpr& sec, Domain& d) const {
    for (const auto& tn : typed_list(sec, 1, false)) {
      if (tn.name == kRootType) continue;
      if (d.types.count(tn.name) && d.types[tn.name] != tn.type)
        fail(PddlErrorKind::Semantic, sec.pos, "type '" + tn.name + "' declared twice");
      d.types[tn.name] = tn.type;
    }
    // Parents named only on the right of '-' are implicitly object subtypes.
    std::vector<std::string> implicit;
    for (const auto& [child, parent] : d.types)
      if (parent != kRootType && !d.types.count(parent)) implicit.push_back(parent);
    for (const auto& t : implicit) d.types.emplace(t, std::string(kRootType));
    for (const auto& [child, parent] : d.types) {
      std::string cur = child;
      for (std::size_t n = 0; cur != kRootType; ++n) {
        if (n > d.types.size()) fail(PddlErrorKind::Semantic, sec.pos, "cyclic type hierarchy at '" + child + "'");
        cur = d.types.at(cur);
      }
    }
  }

  void parse_functions(const SExpr& sec) const {
    for (std::size_t j = 1; j < sec.items.size(); ++j) {
      const SExpr& f = sec.items[j];
      if (f.is_atom()) {
        if (f.atom == "-" && j + 1 < sec.items.size() && sec.items[j + 1].is_atom("number")) {
          ++j;
          continue;
        }
        fail(PddlErrorKind::Syntax, f.pos, "unexpected '" + f.atom + "' in :functions");
      }
      if (!(f.items.size() == 1 && f.items[0].is_atom("total-cost")))
        fail(PddlErrorKind::Unsupported, f.pos, "numeric fluents other than (total-cost)");
    }
  }

  void check_metric(const SExpr& sec) const {
    if (sec.items.size() == 3 && sec.items[1].is_atom("minimize") && sec.items[2].is_list &&
        sec.items[2].items.size() == 1 && sec.items[2].items[0].is_atom("total-cost"))
      return;
    fail(PddlErrorKind::Unsupported, sec.pos, "metric other than (minimize (total-cost))");
  }

  void check_total_cost_init(const SExpr& e) const {
    if (e.items.size() == 3 && e.items[1].is_list && e.items[1].items.size() == 1 &&
        e.items[1].items[0].is_atom("total-cost") && e.items[2].is_atom())
      return;
    fail(PddlErrorKind::Unsupported, e.pos, "numeric initialisation other than (total-cost)");
  }

  /// `a b - t c` style lists; untyped names get `object`.
  std::vector<TypedName> typed_list(const SExpr& list, std::size_t from, bool vars) const {
    std::vector<TypedName> out;
    std::size_t pending = 0;
    for (std::size_t j = from; j < list.items.size(); ++j) {
      const SExpr& e = list.items[j];
      if (!e.is_atom()) {
        if (e.headed("either")) fail(PddlErrorKind::Unsupported, e.pos, "either-types");
        fail(PddlErrorKind::Syntax, e.pos, "expected a name in typed list");
      }
      if (e.atom == "-") {
        if (j + 1 >= list.items.size() || !list.items[j + 1].is_atom()) {
          if (j + 1 < list.items.size() && list.items[j + 1].headed("either"))
            fail(PddlErrorKind::Unsupported, list.items[j + 1].pos, "either-types");
          fail(PddlErrorKind::Syntax, e.pos, "expected a type after '-'");
        }
        if (pending == 0) fail(PddlErrorKind::Syntax, e.pos, "type without names");
        const std::string& t = list.items[j + 1].atom;
        for (std::size_t k = out.size() - pending; k < out.size(); ++k) out[k].type = t;
        pending = 0;
        ++j;
        continue;
      }
      if (vars != is_variable(e.atom))
        fail(PddlErrorKind::Syntax, e.pos,
             vars ? "expected a ?variable, got '" + e.atom + "'"
                  : "unexpected variable '" + e.atom + "'");
      out.push_back({e.atom, std::string(kRootType)});
      ++pending;
    }
    return out;
  }

  template <class Fn>
  void collect_conjunction(const SExpr& f, std::string_view where, Fn&& fn) const {
    if (f.is_atom()) fail(PddlErrorKind::Syntax, f.pos, "expected a formula in " + std::string(where));
    if (f.items.empty()) return;
    if (!f.items[0].is_atom()) fail(PddlErrorKind::Syntax, f.pos, "malformed formula");
    const std::string& h = f.items[0].atom;
    if (h == "and") {
      for (std::size_t j = 1; j < f.items.size(); ++j) collect_conjunction(f.items[j], where, fn);
      return;
    }
    if (h == "not")
      fail(PddlErrorKind::Unsupported, f.pos, "negative " + std::string(where) + " (negation)");
    if (h == "or" || h == "imply" || h == "forall" || h == "exists" || h == "when" || h == "=")
      fail(PddlErrorKind::Unsupported, f.pos, "'" + h + "' in " + std::string(where));
    fn(f);
  }

  ActionSchema parse_action(const SExpr& sec, const Domain& d) const {
    if (sec.items.size() < 2 || !sec.items[1].is_atom())
      fail(PddlErrorKind::Syntax, sec.pos, "action without a name");
    ActionSchema a;
    a.name = sec.items[1].atom;
    const SExpr* pre = nullptr;
    const SExpr* eff = nullptr;
    for (std::size_t j = 2; j < sec.items.size(); j += 2) {
      const SExpr& k = sec.items[j];
      if (!k.is_atom() || j + 1 >= sec.items.size())
        fail(PddlErrorKind::Syntax, k.pos, "expected :keyword value pairs in action");
      const SExpr& v = sec.items[j + 1];
      if (k.atom == ":parameters") {
        if (!v.is_list) fail(PddlErrorKind::Syntax, v.pos, "expected parameter list");
        a.parameters = typed_list(v, 0, true);
      } else if (k.atom == ":precondition") {
        pre = &v;
      } else if (k.atom == ":effect") {
        eff = &v;
      } else {
        fail(PddlErrorKind::Unsupported, k.pos, "action field '" + k.atom + "'");
      }
    }
    std::map<std::string, std::string> vars;
    for (const auto& p : a.parameters) {
      if (!d.has_type(p.type))
        fail(PddlErrorKind::Semantic, sec.pos, "undeclared type '" + p.type + "'");
      if (!vars.emplace(p.name, p.type).second)
        fail(PddlErrorKind::Semantic, sec.pos, "duplicate parameter '" + p.name + "'");
    }
    if (pre)
      collect_conjunction(*pre, "precondition",
                          [&](const SExpr& e) { a.preconditions.insert(schema_atom(e, d, vars)); });
    bool cost_seen = false;
    if (eff) parse_effect(*eff, d, vars, a, cost_seen, false);
    for (const auto& at : a.add_effects)
      if (a.del_effects.count(at))
        fail(PddlErrorKind::Semantic, eff->pos,
             "atom " + to_pddl(at) + " is both added and deleted by '" + a.name + "'");
    return a;
  }

  void parse_effect(const SExpr& f, const Domain& d, const std::map<std::string, std::string>& vars,
                    ActionSchema& a, bool& cost_seen, bool negated) const {
    if (f.is_atom()) fail(PddlErrorKind::Syntax, f.pos, "expected an effect formula");
    if (f.items.empty()) return;
    if (!f.items[0].is_atom()) fail(PddlErrorKind::Syntax, f.pos, "malformed effect");
    const std::string& h = f.items[0].atom;
    if (h == "and" && !negated) {
      for (std::size_t j = 1; j < f.items.size(); ++j) parse_effect(f.items[j], d, vars, a, cost_seen, false);
      return;
    }
    if (h == "not" && !negated) {
      if (f.items.size() != 2) fail(PddlErrorKind::Syntax, f.pos, "not takes one argument");
      parse_effect(f.items[1], d, vars, a, cost_seen, true);
      return;
    }
    if (h == "increase" && !negated) {
      if (f.items.size() != 3 || !f.items[1].is_list || f.items[1].items.size() != 1 ||
          !f.items[1].items[0].is_atom("total-cost"))
        fail(PddlErrorKind::Unsupported, f.pos, "increase of a fluent other than (total-cost)");
      const SExpr& v = f.items[2];
      if (!v.is_atom() || v.atom.empty() ||
          !std::all_of(v.atom.begin(), v.atom.end(), [](char c) { return c >= '0' && c <= '9'; }))
        fail(PddlErrorKind::Unsupported, v.pos, "non-constant action cost");
      if (cost_seen) fail(PddlErrorKind::Semantic, f.pos, "action cost given twice");
      cost_seen = true;
      explicit_cost_ = true;
      a.cost = std::stoi(v.atom);
      return;
    }
    if (h == "when" || h == "forall" || h == "and" || h == "not" || h == "decrease" ||
        h == "assign" || h == "scale-up" || h == "scale-down" || h == "oneof")
      fail(PddlErrorKind::Unsupported, f.pos, "'" + h + "' in effect");
    Atom at = schema_atom(f, d, vars);
    (negated ? a.del_effects : a.add_effects).insert(std::move(at));
  }

  Atom schema_atom(const SExpr& e, const Domain& d, const std::map<std::string, std::string>& vars) const {
    Atom at = raw_atom(e);
    auto pit = d.predicates.find(at.predicate);
    if (pit == d.predicates.end())
      fail(PddlErrorKind::Semantic, e.pos, "undeclared predicate '" + at.predicate + "'");
    check_arity(e, pit->second, at);
    for (std::size_t k = 0; k < at.args.size(); ++k) {
      const std::string& arg = at.args[k];
      std::string type;
      if (is_variable(arg)) {
        auto vit = vars.find(arg);
        if (vit == vars.end())
          fail(PddlErrorKind::Semantic, e.items[k + 1].pos, "variable '" + arg + "' is not a parameter");
        type = vit->second;
      } else {
        auto cit = d.constants.find(arg);
        if (cit == d.constants.end())
          fail(PddlErrorKind::UndeclaredObject, e.items[k + 1].pos, "undeclared constant '" + arg + "'");
        type = cit->second;
      }
      check_arg_type(e.items[k + 1].pos, d, type, pit->second.params[k].type, arg);
    }
    return at;
  }

  Atom ground_atom(const SExpr& e, const Domain& d, const std::map<std::string, std::string>& objects) const {
    Atom at = raw_atom(e);
    auto pit = d.predicates.find(at.predicate);
    if (pit == d.predicates.end())
      fail(PddlErrorKind::Semantic, e.pos, "undeclared predicate '" + at.predicate + "'");
    check_arity(e, pit->second, at);
    for (std::size_t k = 0; k < at.args.size(); ++k) {
      auto oit = objects.find(at.args[k]);
      if (oit == objects.end())
        fail(PddlErrorKind::UndeclaredObject, e.items[k + 1].pos, "undeclared object '" + at.args[k] + "'");
      check_arg_type(e.items[k + 1].pos, d, oit->second, pit->second.params[k].type, at.args[k]);
    }
    return at;
  }

  Atom raw_atom(const SExpr& e) const {
    if (!e.is_list || e.items.empty() || !e.items[0].is_atom())
      fail(PddlErrorKind::Syntax, e.pos, "expected an atom");
    Atom at{e.items[0].atom, {}};
    for (std::size_t k = 1; k < e.items.size(); ++k) {
      if (!e.items[k].is_atom()) fail(PddlErrorKind::Unsupported, e.items[k].pos, "nested terms");
      at.args.push_back(e.items[k].atom);
    }
    return at;
  }

  void check_arity(const SExpr& e, const PredicateDecl& decl, const Atom& at) const {
    if (decl.params.size() != at.args.size())
      fail(PddlErrorKind::Semantic, e.pos,
           "predicate '" + decl.name + "' expects " + std::to_string(decl.params.size()) +
               " arguments, got " + std::to_string(at.args.size()));
  }

  void check_arg_type(SourcePos pos, const Domain& d, const std::string& actual,
                      const std::string& expected, const std::string& arg) const {
    if (!d.is_subtype(actual, expected))
      fail(PddlErrorKind::Semantic, pos,
           "'" + arg + "' of type '" + actual + "' where '" + expected + "' is expected");
  }

  void validate_domain(const Domain& d, SourcePos pos) const {
    auto check = [&](const std::string& t, const std::string& what) {
      if (!d.has_type(t))
        fail(PddlErrorKind::Semantic, pos, "undeclared type '" + t + "' in " + what);
    };
    for (const auto& [n, t] : d.constants) check(t, "constant '" + n + "'");
    for (const auto& [n, p] : d.predicates)
      for (const auto& tn : p.params) check(tn.type, "predicate '" + n + "'");
    for (const auto& [n, s] : d.schemas)
      for (const auto& tn : s.parameters) check(tn.type, "action '" + n + "'");
  }

  std::string file_;
  std::vector<SExpr> exprs_;
  mutable bool explicit_cost_ = false;
};

inline void emit_typed(std::ostream& os, const std::vector<TypedName>& names) {
  bool first = true;
  for (const auto& tn : names) {
    if (!first) os << ' ';
    first = false;
    os << tn.name << " - " << tn.type;
  }
}

inline void emit_conjunction(std::ostream& os, const std::vector<std::string>& parts) {
  if (parts.empty()) {
    os << "()";
  } else if (parts.size() == 1) {
    os << parts[0];
  } else {
    os << "(and";
    for (const auto& p : parts) os << ' ' << p;
    os << ')';
  }
}

inline bool uses_costs(const Domain& d) {
  if (d.requirements.count(":action-costs")) return true;
  return std::any_of(d.schemas.begin(), d.schemas.end(),
                     [](const auto& kv) { return kv.second.cost != 1; });
}

}  // namespace detail

/// Parses a domain file. Throws PddlError on syntax errors, unsupported
/// constructs and semantic violations.
inline Domain parse_domain(std::string_view text, const std::string& file = "<domain>") {
  return detail::PddlParser(file).parse_domain(text);
}

/// Parses a problem file against an already parsed domain.
inline LiftedModel parse_problem(std::string_view text, const Domain& domain,
                                 const std::string& file = "<problem>") {
  return detail::PddlParser(file).parse_problem(text, domain);
}

inline std::string emit_domain(const Domain& d) {
  std::ostringstream os;
  const bool costs = detail::uses_costs(d);
  os << "(define (domain " << d.name << ")\n";
  auto reqs = d.requirements;
  if (costs) reqs.insert(":action-costs");
  if (!reqs.empty()) {
    os << "  (:requirements";
    for (const auto& r : reqs) os << ' ' << r;
    os << ")\n";
  }
  if (!d.types.empty()) {
    os << "  (:types";
    for (const auto& [child, parent] : d.types) os << ' ' << child << " - " << parent;
    os << ")\n";
  }
  if (!d.constants.empty()) {
    os << "  (:constants";
    for (const auto& [n, t] : d.constants) os << ' ' << n << " - " << t;
    os << ")\n";
  }
  if (!d.predicates.empty()) {
    os << "  (:predicates";
    for (const auto& [n, p] : d.predicates) {
      os << "\n    (" << n;
      if (!p.params.empty()) os << ' ';
      detail::emit_typed(os, p.params);
      os << ')';
    }
    os << ")\n";
  }
  if (costs) os << "  (:functions (total-cost) - number)\n";
  for (const auto& [n, a] : d.schemas) {
    os << "  (:action " << n << "\n    :parameters (";
    detail::emit_typed(os, a.parameters);
    os << ")\n    :precondition ";
    std::vector<std::string> pre;
    for (const auto& at : a.preconditions) pre.push_back(to_pddl(at));
    detail::emit_conjunction(os, pre);
    os << "\n    :effect ";
    std::vector<std::string> eff;
    for (const auto& at : a.add_effects) eff.push_back(to_pddl(at));
    for (const auto& at : a.del_effects) eff.push_back("(not " + to_pddl(at) + ")");
    if (costs) eff.push_back("(increase (total-cost) " + std::to_string(a.cost) + ")");
    detail::emit_conjunction(os, eff);
    os << ")\n";
  }
  os << ")\n";
  return os.str();
}

inline std::string emit_problem(const LiftedModel& m) {
  std::ostringstream os;
  const bool costs = detail::uses_costs(m.domain);
  os << "(define (problem " << m.problem.name << ")\n";
  os << "  (:domain " << m.domain.name << ")\n";
  if (!m.problem.objects.empty()) {
    os << "  (:objects";
    for (const auto& [n, t] : m.problem.objects) os << ' ' << n << " - " << t;
    os << ")\n";
  }
  os << "  (:init";
  for (const auto& at : m.problem.init) os << "\n    " << to_pddl(at);
  if (costs) os << "\n    (= (total-cost) 0)";
  os << ")\n  (:goal ";
  std::vector<std::string> goal;
  for (const auto& at : m.problem.goal) goal.push_back(to_pddl(at));
  if (goal.empty()) {
    os << "(and)";
  } else {
    os << "(and";
    for (const auto& g : goal) os << ' ' << g;
    os << ')';
  }
  os << ")\n";
  if (costs) os << "  (:metric minimize (total-cost))\n";
  os << ")\n";
  return os.str();
}

/// Serialises a model back to PDDL. Round-trip stable under parse.
inline PddlText emit_pddl(const LiftedModel& m) { return {emit_domain(m.domain), emit_problem(m)}; }

}  // namespace mrx
