#pragma once

// Translation of modality-free formulas to SMT-LIB 2 over the reals.
// Validity scripts assert the negation of the goal; rational constants
// are printed exactly, either as decimals or as (/ p q), never as binary
// floats.

#include "dgl/ast.hpp"

#include <set>
#include <stdexcept>
#include <string>

namespace dgl {

namespace smt_detail {

inline bool needs_quoting(const std::string& name) {
  static const std::set<std::string> reserved = {
      "let", "forall", "exists", "as", "par", "match", "and", "or", "not", "xor",
      "ite", "distinct", "assert", "div", "mod", "abs", "select", "store",
      "to_real", "to_int", "is_int", "Real", "Int", "Bool", "Array", "String"};
  return reserved.count(name) > 0;
}

inline std::string symbol(const Ident& name) {
  return needs_quoting(name) ? "|" + name + "|" : name;
}

inline std::string rational_literal(const Rational& r) {
  bool negative = r < 0;
  Rational abs = negative ? Rational(-r) : r;
  std::string body;
  if (is_integer(abs)) {
    body = rat_num(abs).str() + ".0";
  } else {
    body = "(/ " + rat_num(abs).str() + ".0 " + rat_den(abs).str() + ".0)";
  }
  return negative ? "(- " + body + ")" : body;
}

inline std::string term_sexpr(const TermPtr& t) {
  switch (t->kind) {
    case TermKind::Var: return symbol(t->var);
    case TermKind::Num: return rational_literal(t->value);
    case TermKind::Neg: return "(- " + term_sexpr(t->lhs) + ")";
    case TermKind::Add: return "(+ " + term_sexpr(t->lhs) + " " + term_sexpr(t->rhs) + ")";
    case TermKind::Sub: return "(- " + term_sexpr(t->lhs) + " " + term_sexpr(t->rhs) + ")";
    case TermKind::Mul: return "(* " + term_sexpr(t->lhs) + " " + term_sexpr(t->rhs) + ")";
    case TermKind::Div: return "(/ " + term_sexpr(t->lhs) + " " + term_sexpr(t->rhs) + ")";
    case TermKind::Pow: {
      if (t->exponent == 0) return "1.0";
      std::string base = term_sexpr(t->lhs);
      if (t->exponent == 1) return base;
      std::string s = "(*";
      for (unsigned i = 0; i < t->exponent; ++i) s += " " + base;
      return s + ")";
    }
  }
  return "0.0";
}

inline std::string formula_sexpr(const FormulaPtr& f) {
  switch (f->kind) {
    case FormulaKind::True: return "true";
    case FormulaKind::False: return "false";
    case FormulaKind::Cmp: {
      std::string a = term_sexpr(f->t_lhs), b = term_sexpr(f->t_rhs);
      switch (f->rel) {
        case RelOp::Eq: return "(= " + a + " " + b + ")";
        case RelOp::Ne: return "(not (= " + a + " " + b + "))";
        case RelOp::Lt: return "(< " + a + " " + b + ")";
        case RelOp::Le: return "(<= " + a + " " + b + ")";
        case RelOp::Gt: return "(> " + a + " " + b + ")";
        default: return "(>= " + a + " " + b + ")";
      }
    }
    case FormulaKind::Not: return "(not " + formula_sexpr(f->f_lhs) + ")";
    case FormulaKind::And: return "(and " + formula_sexpr(f->f_lhs) + " " + formula_sexpr(f->f_rhs) + ")";
    case FormulaKind::Or: return "(or " + formula_sexpr(f->f_lhs) + " " + formula_sexpr(f->f_rhs) + ")";
    case FormulaKind::Imply: return "(=> " + formula_sexpr(f->f_lhs) + " " + formula_sexpr(f->f_rhs) + ")";
    case FormulaKind::Equiv: return "(= " + formula_sexpr(f->f_lhs) + " " + formula_sexpr(f->f_rhs) + ")";
    case FormulaKind::Forall:
      return "(forall ((" + symbol(f->binder) + " Real)) " + formula_sexpr(f->f_lhs) + ")";
    case FormulaKind::Exists:
      return "(exists ((" + symbol(f->binder) + " Real)) " + formula_sexpr(f->f_lhs) + ")";
    case FormulaKind::Diamond:
    case FormulaKind::Box:
      throw std::logic_error("modalities have no SMT-LIB translation; run symbolic execution first");
  }
  return "false";
}

inline std::string declarations(const FormulaPtr& f) {
  std::string out;
  for (const auto& v : free_vars(f))  // std::set iteration: sorted, deterministic
    out += "(declare-const " + symbol(v) + " Real)\n";
  return out;
}

}  // namespace smt_detail

// Validity script: unsat of the negation means the goal is valid.
inline std::string to_smtlib(const FormulaPtr& goal) {
  return "(set-logic ALL)\n" + smt_detail::declarations(goal) +
         "(assert (not " + smt_detail::formula_sexpr(goal) + "))\n(check-sat)\n";
}

// Satisfiability script: used for the assumption-consistency probe.
inline std::string to_smtlib_sat(const FormulaPtr& f) {
  return "(set-logic ALL)\n" + smt_detail::declarations(f) +
         "(assert " + smt_detail::formula_sexpr(f) + ")\n(check-sat)\n";
}

}  // namespace dgl
