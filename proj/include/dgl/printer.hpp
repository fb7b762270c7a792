#pragma once

// Deterministic ASCII rendering of the IR. The contract with the parser:
// print_formula output always reparses, and reparsing yields a
// structurally identical tree whenever every numeric literal has a finite
// decimal form (other rationals print as p/q, which reads back as a
// division with the same value).

#include "dgl/ast.hpp"

#include <string>

namespace dgl {

namespace detail {

// Term precedence: atoms 100, ^ 90, unary - 80, * / 70, + - 60.
inline int term_prec(const TermPtr& t) {
  switch (t->kind) {
    case TermKind::Var:
    case TermKind::Num: return 100;
    case TermKind::Pow: return 90;
    case TermKind::Neg: return 80;
    case TermKind::Mul:
    case TermKind::Div: return 70;
    default: return 60;
  }
}

inline std::string print_num(const Term& t) {
  if (!t.literal.empty()) return t.literal;
  if (is_integer(t.value)) return rat_num(t.value).str();
  if (has_finite_decimal(t.value)) return to_decimal_string(t.value);
  return rat_num(t.value).str() + "/" + rat_den(t.value).str();
}

inline std::string print_term_at(const TermPtr& t, int min_prec) {
  std::string s;
  switch (t->kind) {
    case TermKind::Var: s = t->var; break;
    case TermKind::Num: s = print_num(*t); break;
    case TermKind::Neg: s = "-" + print_term_at(t->lhs, 80); break;
    case TermKind::Pow:
      s = print_term_at(t->lhs, 100) + "^" + std::to_string(t->exponent);
      break;
    case TermKind::Add:
      s = print_term_at(t->lhs, 60) + "+" + print_term_at(t->rhs, 61);
      break;
    case TermKind::Sub:
      s = print_term_at(t->lhs, 60) + "-" + print_term_at(t->rhs, 61);
      break;
    case TermKind::Mul:
      s = print_term_at(t->lhs, 70) + "*" + print_term_at(t->rhs, 71);
      break;
    case TermKind::Div:
      s = print_term_at(t->lhs, 70) + "/" + print_term_at(t->rhs, 71);
      break;
  }
  if (term_prec(t) < min_prec) return "(" + s + ")";
  return s;
}

}  // namespace detail

inline std::string print_term(const TermPtr& t) { return detail::print_term_at(t, 0); }

inline std::string print_rel(RelOp op) {
  switch (op) {
    case RelOp::Eq: return "=";
    case RelOp::Ne: return "!=";
    case RelOp::Lt: return "<";
    case RelOp::Le: return "<=";
    case RelOp::Gt: return ">";
    default: return ">=";
  }
}

std::string print_formula(const FormulaPtr& f);

namespace detail {

inline std::string print_game_at(const GamePtr& g, int min_prec);

inline std::string print_game_seq(const GamePtr& g) {
  // Statements joined by "; "; callers add the delimiter that follows.
  if (g->kind == GameKind::Seq)
    return print_game_at(g->lhs, 21) + "; " + print_game_seq(g->rhs);
  return print_game_at(g, 20);
}

// Formula precedence: atoms 100/50, quantifiers+modalities 45, ! 40,
// & 30, | 25, -> 20, <-> 15. & | -> <-> are right-associative.
inline int formula_prec(const FormulaPtr& f) {
  switch (f->kind) {
    case FormulaKind::True:
    case FormulaKind::False: return 100;
    case FormulaKind::Cmp: return 50;
    case FormulaKind::Forall:
    case FormulaKind::Exists:
    case FormulaKind::Diamond:
    case FormulaKind::Box: return 45;
    case FormulaKind::Not: return 40;
    case FormulaKind::And: return 30;
    case FormulaKind::Or: return 25;
    case FormulaKind::Imply: return 20;
    default: return 15;
  }
}

inline std::string print_formula_at(const FormulaPtr& f, int min_prec) {
  std::string s;
  switch (f->kind) {
    case FormulaKind::True: s = "true"; break;
    case FormulaKind::False: s = "false"; break;
    case FormulaKind::Cmp:
      s = print_term(f->t_lhs) + " " + print_rel(f->rel) + " " + print_term(f->t_rhs);
      break;
    case FormulaKind::Not: {
      const auto& a = f->f_lhs;
      bool parens = formula_prec(a) < 40 || a->kind == FormulaKind::Cmp;
      s = "!" + (parens ? "(" + print_formula_at(a, 0) + ")" : print_formula_at(a, 40));
      break;
    }
    case FormulaKind::Forall:
    case FormulaKind::Exists:
      s = (f->kind == FormulaKind::Forall ? "\\forall " : "\\exists ") + f->binder +
          " (" + print_formula_at(f->f_lhs, 0) + ")";
      break;
    case FormulaKind::Diamond:
    case FormulaKind::Box: {
      const char* open = f->kind == FormulaKind::Diamond ? "<" : "[";
      const char* close = f->kind == FormulaKind::Diamond ? ";>" : ";]";
      s = open + print_game_seq(f->game) + close + " " + print_formula_at(f->f_lhs, 45);
      break;
    }
    case FormulaKind::And:
      s = print_formula_at(f->f_lhs, 31) + " & " + print_formula_at(f->f_rhs, 30);
      break;
    case FormulaKind::Or:
      s = print_formula_at(f->f_lhs, 26) + " | " + print_formula_at(f->f_rhs, 25);
      break;
    case FormulaKind::Imply:
      s = print_formula_at(f->f_lhs, 21) + " -> " + print_formula_at(f->f_rhs, 20);
      break;
    case FormulaKind::Equiv:
      s = print_formula_at(f->f_lhs, 16) + " <-> " + print_formula_at(f->f_rhs, 15);
      break;
  }
  if (formula_prec(f) < min_prec) return "(" + s + ")";
  return s;
}

// Game precedence: atoms 100, ; 20, ++ 10 (both right-associative).
inline int game_prec(const GamePtr& g) {
  switch (g->kind) {
    case GameKind::Seq: return 20;
    case GameKind::Choice: return 10;
    default: return 100;
  }
}

inline std::string print_game_at(const GamePtr& g, int min_prec) {
  std::string s;
  switch (g->kind) {
    case GameKind::Assign:
      s = g->var + " := " + print_term(g->term);
      break;
    case GameKind::AssignAny:
      s = g->var + " := *";
      break;
    case GameKind::Test:
      s = "?" + print_formula_at(g->formula, 0);
      break;
    case GameKind::Ode: {
      s = "{";
      for (size_t i = 0; i < g->odes.size(); ++i) {
        if (i) s += ", ";
        s += g->odes[i].var + "' = " + print_term(g->odes[i].rhs);
      }
      if (g->formula) s += " & " + print_formula_at(g->formula, 0);
      s += "}";
      break;
    }
    case GameKind::Seq:
      s = print_game_at(g->lhs, 21) + "; " + print_game_at(g->rhs, 20);
      break;
    case GameKind::Choice:
      s = print_game_at(g->lhs, 11) + " ++ " + print_game_at(g->rhs, 10);
      break;
    case GameKind::Loop:
      s = "{" + print_game_at(g->lhs, 0) + "}*";
      break;
    case GameKind::Dual:
      s = "{" + print_game_at(g->lhs, 0) + "}^@";
      break;
  }
  if (game_prec(g) < min_prec) return "{" + s + "}";
  return s;
}

}  // namespace detail

inline std::string print_formula(const FormulaPtr& f) {
  return detail::print_formula_at(f, 0);
}

inline std::string print_game(const GamePtr& g) {
  return detail::print_game_at(g, 0);
}

}  // namespace dgl
