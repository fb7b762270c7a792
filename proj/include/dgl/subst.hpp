#pragma once

// Capture-avoiding substitution on terms and formulas, plus fresh-name
// generation. Simultaneous substitution is what the ODE rule needs: the
// solved values all refer to the pre-state, so substituting them one at a
// time would let one solution rewrite another's coefficients.

#include "dgl/ast.hpp"

#include <map>
#include <string>

namespace dgl {

// First of base, base1, base2, ... not present in avoid.
inline Ident fresh(const std::string& base, const IdentSet& avoid) {
  if (!avoid.count(base)) return base;
  for (unsigned i = 1;; ++i) {
    Ident candidate = base + std::to_string(i);
    if (!avoid.count(candidate)) return candidate;
  }
}

using TermSubst = std::map<Ident, TermPtr>;

inline TermPtr substitute(const TermPtr& t, const TermSubst& subst) {
  bool relevant = false;
  for (const auto& [x, _] : subst)
    if (t->free.count(x)) { relevant = true; break; }
  if (!relevant) return t;
  switch (t->kind) {
    case TermKind::Var: {
      auto it = subst.find(t->var);
      return it == subst.end() ? t : it->second;
    }
    case TermKind::Num: return t;
    case TermKind::Neg: return neg(substitute(t->lhs, subst));
    case TermKind::Pow: return Term::mk_pow(substitute(t->lhs, subst), t->exponent);
    default:
      return Term::binary(t->kind, substitute(t->lhs, subst), substitute(t->rhs, subst));
  }
}

namespace detail {

inline GamePtr substitute_game(const GamePtr& g, const TermSubst& subst);

inline FormulaPtr substitute_formula(const FormulaPtr& f, const TermSubst& subst) {
  bool relevant = false;
  for (const auto& [x, _] : subst)
    if (f->free.count(x)) { relevant = true; break; }
  if (!relevant) return f;
  switch (f->kind) {
    case FormulaKind::True:
    case FormulaKind::False:
      return f;
    case FormulaKind::Cmp:
      return Formula::mk_cmp(substitute(f->t_lhs, subst), f->rel, substitute(f->t_rhs, subst));
    case FormulaKind::Not:
      return Formula::mk_not(substitute_formula(f->f_lhs, subst));
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Imply:
    case FormulaKind::Equiv:
      return Formula::connective(f->kind, substitute_formula(f->f_lhs, subst),
                                 substitute_formula(f->f_rhs, subst));
    case FormulaKind::Forall:
    case FormulaKind::Exists: {
      TermSubst inner = subst;
      inner.erase(f->binder);
      if (inner.empty()) return f;
      // Rename the binder when a replacement mentions it.
      bool capture = false;
      for (const auto& [x, e] : inner)
        if (f->f_lhs->free.count(x) && e->free.count(f->binder)) { capture = true; break; }
      Ident binder = f->binder;
      FormulaPtr body = f->f_lhs;
      if (capture) {
        IdentSet avoid = body->free;
        for (const auto& [x, e] : inner) {
          avoid.insert(x);
          avoid.insert(e->free.begin(), e->free.end());
        }
        Ident renamed = fresh(binder, avoid);
        body = substitute_formula(body, TermSubst{{binder, Term::mk_var(renamed)}});
        binder = renamed;
      }
      return Formula::quantifier(f->kind, binder, substitute_formula(body, inner));
    }
    case FormulaKind::Diamond:
    case FormulaKind::Box:
      // Plain occurrence replacement. Callers substitute into modalities
      // only when no replaced variable is written by the game (the
      // symbolic executor works strictly on modality-free formulas).
      for (const auto& [x, e] : subst) {
        (void)e;
        assert(!f->game->written.count(x) &&
               "substitution into a game that writes the substituted variable");
      }
      return Formula::modality(f->kind, substitute_game(f->game, subst),
                               substitute_formula(f->f_lhs, subst));
  }
  return f;
}

inline GamePtr substitute_game(const GamePtr& g, const TermSubst& subst) {
  bool relevant = false;
  for (const auto& [x, _] : subst)
    if (g->free.count(x)) { relevant = true; break; }
  if (!relevant) return g;
  switch (g->kind) {
    case GameKind::Assign:
      return Game::mk_assign(g->var, substitute(g->term, subst));
    case GameKind::AssignAny:
      return g;
    case GameKind::Test:
      return Game::mk_test(substitute_formula(g->formula, subst));
    case GameKind::Ode: {
      std::vector<OdeEquation> eqs;
      eqs.reserve(g->odes.size());
      for (const auto& eq : g->odes)
        eqs.push_back({eq.var, substitute(eq.rhs, subst)});
      FormulaPtr dom = g->formula ? substitute_formula(g->formula, subst) : nullptr;
      return Game::mk_ode(std::move(eqs), std::move(dom));
    }
    case GameKind::Seq:
      return Game::mk_seq(substitute_game(g->lhs, subst), substitute_game(g->rhs, subst));
    case GameKind::Choice:
      return Game::mk_choice(substitute_game(g->lhs, subst), substitute_game(g->rhs, subst));
    case GameKind::Loop:
      return Game::mk_loop(substitute_game(g->lhs, subst));
    case GameKind::Dual:
      return Game::mk_dual(substitute_game(g->lhs, subst));
  }
  return g;
}

}  // namespace detail

inline FormulaPtr substitute(const FormulaPtr& f, const TermSubst& subst) {
  return detail::substitute_formula(f, subst);
}

inline TermPtr substitute(const TermPtr& t, const Ident& x, const TermPtr& e) {
  return substitute(t, TermSubst{{x, e}});
}
inline FormulaPtr substitute(const FormulaPtr& f, const Ident& x, const TermPtr& e) {
  return substitute(f, TermSubst{{x, e}});
}

}  // namespace dgl
