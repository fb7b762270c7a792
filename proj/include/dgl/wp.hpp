#pragma once

// Backward symbolic execution: the first-order weakest precondition of
// <game>post, and of [game]post via the player duality, for loop-free
// games with solvable dynamics. The result carries no modalities; beyond
// folding true/false units of conjunction and disjunction nothing is
// simplified, since simplification bugs here are soundness bugs.

#include "dgl/ast.hpp"
#include "dgl/ode.hpp"
#include "dgl/printer.hpp"
#include "dgl/subst.hpp"

#include <optional>
#include <utility>

namespace dgl {

struct WpResult {
  FormulaPtr formula;  // modality-free on success
  std::optional<ToolFailureReason> failure;
  bool ok() const { return formula != nullptr; }

  static WpResult success(FormulaPtr f) { return {std::move(f), std::nullopt}; }
  static WpResult fail(ToolFailureReason r) { return {nullptr, std::move(r)}; }
};

namespace detail {

inline void collect_idents(const TermPtr& t, IdentSet& out) {
  out.insert(t->free.begin(), t->free.end());
}
void collect_idents(const GamePtr& g, IdentSet& out);

inline void collect_idents(const FormulaPtr& f, IdentSet& out) {
  switch (f->kind) {
    case FormulaKind::True:
    case FormulaKind::False:
      return;
    case FormulaKind::Cmp:
      collect_idents(f->t_lhs, out);
      collect_idents(f->t_rhs, out);
      return;
    case FormulaKind::Not:
      collect_idents(f->f_lhs, out);
      return;
    case FormulaKind::Forall:
    case FormulaKind::Exists:
      out.insert(f->binder);
      collect_idents(f->f_lhs, out);
      return;
    case FormulaKind::Diamond:
    case FormulaKind::Box:
      collect_idents(f->game, out);
      collect_idents(f->f_lhs, out);
      return;
    default:
      collect_idents(f->f_lhs, out);
      collect_idents(f->f_rhs, out);
  }
}

inline void collect_idents(const GamePtr& g, IdentSet& out) {
  out.insert(g->free.begin(), g->free.end());
  switch (g->kind) {
    case GameKind::Test:
      collect_idents(g->formula, out);
      return;
    case GameKind::Ode:
      if (g->formula) collect_idents(g->formula, out);
      return;
    case GameKind::Seq:
    case GameKind::Choice:
      collect_idents(g->lhs, out);
      collect_idents(g->rhs, out);
      return;
    case GameKind::Loop:
    case GameKind::Dual:
      collect_idents(g->lhs, out);
      return;
    default:
      return;
  }
}

struct WpContext {
  IdentSet avoid;  // grows as fresh duration variables are handed out
};

inline WpResult wp_rec(const GamePtr& g, const FormulaPtr& post, bool diamond_player,
                       WpContext& ctx) {
  switch (g->kind) {
    case GameKind::Assign:
      return WpResult::success(substitute(post, g->var, g->term));
    case GameKind::AssignAny:
      return WpResult::success(diamond_player ? exists(g->var, post) : forall(g->var, post));
    case GameKind::Test:
      return WpResult::success(diamond_player ? mk_and(g->formula, post)
                                              : f_imply(g->formula, post));
    case GameKind::Seq: {
      WpResult inner = wp_rec(g->rhs, post, diamond_player, ctx);
      if (!inner.ok()) return inner;
      return wp_rec(g->lhs, inner.formula, diamond_player, ctx);
    }
    case GameKind::Choice: {
      WpResult a = wp_rec(g->lhs, post, diamond_player, ctx);
      if (!a.ok()) return a;
      WpResult b = wp_rec(g->rhs, post, diamond_player, ctx);
      if (!b.ok()) return b;
      return WpResult::success(diamond_player ? mk_or(a.formula, b.formula)
                                              : mk_and(a.formula, b.formula));
    }
    case GameKind::Dual:
      // <a^@>P = [a]P and [a^@]P = <a>P.
      return wp_rec(g->lhs, post, !diamond_player, ctx);
    case GameKind::Loop:
      return WpResult::fail({ToolFailureReason::Kind::LoopUnsupported,
                             "loop game {" + print_game(g->lhs) + "}* has no loop-free precondition"});
    case GameKind::Ode: {
      OdeResult solved = solve_ode(g->odes, ctx.avoid);
      if (!solved.ok()) return WpResult::fail(solved.failure);
      const OdeSolution& sol = *solved.solution;
      ctx.avoid.insert(sol.tau);
      TermPtr tau_var = Term::mk_var(sol.tau);
      FormulaPtr post_at_tau = substitute(post, sol.values_at_tau());
      FormulaPtr tau_nonneg = Formula::mk_cmp(tau_var, RelOp::Ge, Term::mk_num(0));

      FormulaPtr domain_holds;  // forall s in [0, tau], domain at s
      if (g->formula && !is_true(g->formula)) {
        Ident s = fresh(kSamplePrefix, ctx.avoid);
        ctx.avoid.insert(s);
        TermPtr s_var = Term::mk_var(s);
        FormulaPtr domain_at_s = substitute(g->formula, sol.values_at(s_var));
        FormulaPtr s_in_range = f_and(Formula::mk_cmp(Term::mk_num(0), RelOp::Le, s_var),
                                      Formula::mk_cmp(s_var, RelOp::Le, tau_var));
        domain_holds = forall(s, f_imply(s_in_range, domain_at_s));
      }

      if (diamond_player) {
        FormulaPtr body = domain_holds ? mk_and(tau_nonneg, mk_and(domain_holds, post_at_tau))
                                       : mk_and(tau_nonneg, post_at_tau);
        return WpResult::success(exists(sol.tau, body));
      }
      FormulaPtr condition = domain_holds ? mk_and(tau_nonneg, domain_holds) : tau_nonneg;
      return WpResult::success(forall(sol.tau, f_imply(condition, post_at_tau)));
    }
  }
  return WpResult::fail({ToolFailureReason::Kind::Other, "unhandled game construct"});
}

inline WpResult wp_entry(const GamePtr& g, const FormulaPtr& post, bool diamond_player) {
  if (contains_modality(post))
    return WpResult::fail({ToolFailureReason::Kind::Other, "postcondition contains a modality"});
  WpContext ctx;
  collect_idents(g, ctx.avoid);
  collect_idents(post, ctx.avoid);
  return wp_rec(g, post, diamond_player, ctx);
}

}  // namespace detail

// Condition under which Angel can win <g>post.
inline WpResult wp_diamond(const GamePtr& g, const FormulaPtr& post) {
  return detail::wp_entry(g, post, true);
}

// Condition under which Angel wins [g]post, i.e. against every Demon run.
inline WpResult wp_box(const GamePtr& g, const FormulaPtr& post) {
  return detail::wp_entry(g, post, false);
}

}  // namespace dgl
