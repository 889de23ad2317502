#pragma once

// Boolean formulas over literals, with prefix-notation text:
//   true | false | vK | (not F) | (and F ...) | (or F ...)
// A negative literal may also be written -vK or ~vK.

#include <cctype>
#include <memory>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "qbfscc/core.hpp"

namespace qbfscc {

class Formula {
 public:
  enum class Kind { constant, literal, conj, disj, negation };

  Formula() : Formula(constant(true)) {}

  static Formula constant(bool value) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::constant;
    n->value = value;
    return Formula(std::move(n));
  }
  static Formula lit(Literal l) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::literal;
    n->literal = l;
    n->vars = {l.var()};
    return Formula(std::move(n));
  }
  static Formula var(VarId v) { return lit(Literal(v, true)); }
  static Formula conj(std::vector<Formula> kids) { return nary(Kind::conj, std::move(kids)); }
  static Formula disj(std::vector<Formula> kids) { return nary(Kind::disj, std::move(kids)); }
  static Formula negation(Formula f) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::negation;
    n->vars = f.vars();
    n->kids.push_back(std::move(f));
    return Formula(std::move(n));
  }

  static Formula from_clause(const Clause& c) {
    std::vector<Formula> kids;
    for (Literal l : c) kids.push_back(lit(l));
    if (kids.empty()) return constant(false);
    if (kids.size() == 1) return kids.front();
    return disj(std::move(kids));
  }
  static Formula from_cnf(std::span<const Clause> cnf) {
    std::vector<Formula> kids;
    for (const auto& c : cnf) kids.push_back(from_clause(c));
    if (kids.empty()) return constant(true);
    if (kids.size() == 1) return kids.front();
    return conj(std::move(kids));
  }

  Kind kind() const { return node_->kind; }
  bool value() const { return node_->value; }
  Literal literal() const { return node_->literal; }
  const std::vector<Formula>& children() const { return node_->kids; }
  /// Sorted variable set.
  const std::vector<VarId>& vars() const { return node_->vars; }

  bool is_true() const { return kind() == Kind::constant && value(); }
  bool is_false() const { return kind() == Kind::constant && !value(); }

  /// Value under τ; every variable of the formula must be bound.
  bool eval(const Assignment& tau) const {
    switch (kind()) {
      case Kind::constant:
        return value();
      case Kind::literal: {
        auto b = tau.value(literal().var());
        if (!b) throw Error("formula evaluated under a partial assignment");
        return literal().satisfied_by(*b);
      }
      case Kind::conj:
        for (const auto& k : children())
          if (!k.eval(tau)) return false;
        return true;
      case Kind::disj:
        for (const auto& k : children())
          if (k.eval(tau)) return true;
        return false;
      case Kind::negation:
        return !children().front().eval(tau);
    }
    return false;
  }

  /// Fast evaluation against a dense assignment that binds every variable.
  bool eval(const DenseAssignment& tau) const {
    switch (kind()) {
      case Kind::constant:
        return value();
      case Kind::literal: {
        int v = tau.value(literal());
        if (v < 0) throw Error("formula evaluated under a partial assignment");
        return v == 1;
      }
      case Kind::conj:
        for (const auto& k : children())
          if (!k.eval(tau)) return false;
        return true;
      case Kind::disj:
        for (const auto& k : children())
          if (k.eval(tau)) return true;
        return false;
      case Kind::negation:
        return !children().front().eval(tau);
    }
    return false;
  }

  /// F[τ] with constant propagation.
  Formula restrict(const Assignment& tau) const {
    switch (kind()) {
      case Kind::constant:
        return *this;
      case Kind::literal: {
        auto b = tau.value(literal().var());
        if (!b) return *this;
        return constant(literal().satisfied_by(*b));
      }
      case Kind::negation: {
        Formula k = children().front().restrict(tau);
        if (k.kind() == Kind::constant) return constant(!k.value());
        return negation(std::move(k));
      }
      case Kind::conj:
      case Kind::disj: {
        bool absorbing = kind() == Kind::disj;
        std::vector<Formula> kept;
        for (const auto& k : children()) {
          Formula r = k.restrict(tau);
          if (r.kind() == Kind::constant) {
            if (r.value() == absorbing) return constant(absorbing);
            continue;
          }
          kept.push_back(std::move(r));
        }
        if (kept.empty()) return constant(!absorbing);
        if (kept.size() == 1) return kept.front();
        return nary(kind(), std::move(kept));
      }
    }
    return *this;
  }

  std::string to_string() const {
    switch (kind()) {
      case Kind::constant:
        return value() ? "true" : "false";
      case Kind::literal:
        return literal().positive() ? "v" + std::to_string(literal().var())
                                    : "(not v" + std::to_string(literal().var()) + ")";
      case Kind::negation:
        return "(not " + children().front().to_string() + ")";
      case Kind::conj:
      case Kind::disj: {
        std::string s = kind() == Kind::conj ? "(and" : "(or";
        for (const auto& k : children()) s += " " + k.to_string();
        return s + ")";
      }
    }
    return {};
  }

  static Formula parse(std::string_view text) {
    std::size_t pos = 0;
    Formula f = parse_at(text, pos);
    skip_ws(text, pos);
    if (pos != text.size()) throw ParseError("trailing text after formula: '" + std::string(text.substr(pos)) + "'");
    return f;
  }

  /// Structural equality.
  bool operator==(const Formula& o) const {
    if (node_ == o.node_) return true;
    if (kind() != o.kind()) return false;
    switch (kind()) {
      case Kind::constant:
        return value() == o.value();
      case Kind::literal:
        return literal() == o.literal();
      default:
        return children() == o.children();
    }
  }

 private:
  struct Node {
    Kind kind = Kind::constant;
    bool value = true;
    Literal literal;
    std::vector<Formula> kids;
    std::vector<VarId> vars;
  };

  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static Formula nary(Kind kind, std::vector<Formula> kids) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    for (const auto& k : kids) n->vars.insert(n->vars.end(), k.vars().begin(), k.vars().end());
    std::sort(n->vars.begin(), n->vars.end());
    n->vars.erase(std::unique(n->vars.begin(), n->vars.end()), n->vars.end());
    n->kids = std::move(kids);
    return Formula(std::move(n));
  }

  static void skip_ws(std::string_view t, std::size_t& pos) {
    while (pos < t.size() && std::isspace(static_cast<unsigned char>(t[pos]))) ++pos;
  }

  static std::string token(std::string_view t, std::size_t& pos) {
    skip_ws(t, pos);
    std::size_t start = pos;
    while (pos < t.size() && !std::isspace(static_cast<unsigned char>(t[pos])) && t[pos] != '(' && t[pos] != ')') ++pos;
    return std::string(t.substr(start, pos - start));
  }

  static Formula parse_atom(const std::string& tok) {
    if (tok == "true") return constant(true);
    if (tok == "false") return constant(false);
    bool neg = false;
    std::string_view s = tok;
    if (!s.empty() && (s[0] == '-' || s[0] == '~')) {
      neg = true;
      s.remove_prefix(1);
    }
    if (s.size() < 2 || s[0] != 'v') throw ParseError("bad formula atom '" + tok + "'");
    VarId v = 0;
    for (char ch : s.substr(1)) {
      if (!std::isdigit(static_cast<unsigned char>(ch))) throw ParseError("bad formula atom '" + tok + "'");
      v = v * 10 + static_cast<VarId>(ch - '0');
    }
    if (v == 0) throw ParseError("variable 0 in formula");
    return lit(Literal(v, !neg));
  }

  static Formula parse_at(std::string_view t, std::size_t& pos) {
    skip_ws(t, pos);
    if (pos >= t.size()) throw ParseError("unexpected end of formula");
    if (t[pos] != '(') {
      std::string tok = token(t, pos);
      if (tok.empty()) throw ParseError("unexpected ')' in formula");
      return parse_atom(tok);
    }
    ++pos;
    std::string op = token(t, pos);
    std::vector<Formula> kids;
    for (;;) {
      skip_ws(t, pos);
      if (pos >= t.size()) throw ParseError("unbalanced parentheses in formula");
      if (t[pos] == ')') {
        ++pos;
        break;
      }
      kids.push_back(parse_at(t, pos));
    }
    if (op == "not") {
      if (kids.size() != 1) throw ParseError("'not' takes exactly one argument");
      if (kids[0].kind() == Kind::literal) return lit(kids[0].literal().negated());
      return negation(std::move(kids[0]));
    }
    if (op == "and" || op == "or") {
      if (kids.empty()) return constant(op == "and");
      if (kids.size() == 1) return kids.front();
      return nary(op == "and" ? Kind::conj : Kind::disj, std::move(kids));
    }
    throw ParseError("unknown formula operator '" + op + "'");
  }

  std::shared_ptr<const Node> node_;
};

}  // namespace qbfscc
