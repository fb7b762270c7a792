#pragma once

// Abstract syntax of differential game logic: terms of first-order real
// arithmetic, hybrid games, and modal formulas over them. Nodes are
// immutable and shared; free/written variable sets are computed once at
// construction so occurrence checks are O(1) lookups afterwards.

#include "dgl/rational.hpp"

#include <cassert>
#include <cctype>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace dgl {

using Ident = std::string;
using IdentSet = std::set<Ident>;

inline bool is_valid_ident(const std::string& s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

// Prefixes reserved for durations introduced by the symbolic executor.
// fresh() additionally avoids every identifier in scope, so a model that
// does use such a name still cannot capture a generated one.
inline constexpr const char* kTauPrefix = "tau_";
inline constexpr const char* kSamplePrefix = "s_";

/* ---------------------------------------------------------------- terms */

enum class TermKind { Var, Num, Neg, Add, Sub, Mul, Div, Pow };

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  TermKind kind;
  Ident var;            // Var
  Rational value;       // Num
  std::string literal;  // Num: source spelling, empty if synthesized
  TermPtr lhs, rhs;     // binary nodes; Neg and Pow use lhs only
  unsigned exponent = 0;  // Pow, always a literal nonnegative integer
  IdentSet free;

  static TermPtr mk_var(Ident name) {
    auto t = std::make_shared<Term>();
    t->kind = TermKind::Var;
    t->free.insert(name);
    t->var = std::move(name);
    return t;
  }
  static TermPtr mk_num(Rational v, std::string lit = "") {
    auto t = std::make_shared<Term>();
    t->kind = TermKind::Num;
    t->value = std::move(v);
    t->literal = std::move(lit);
    return t;
  }
  static TermPtr mk_num(long v) { return mk_num(Rational(v)); }
  static TermPtr unary(TermKind k, TermPtr a) {
    assert(k == TermKind::Neg);
    auto t = std::make_shared<Term>();
    t->kind = k;
    t->free = a->free;
    t->lhs = std::move(a);
    return t;
  }
  static TermPtr binary(TermKind k, TermPtr a, TermPtr b) {
    auto t = std::make_shared<Term>();
    t->kind = k;
    t->free = a->free;
    t->free.insert(b->free.begin(), b->free.end());
    t->lhs = std::move(a);
    t->rhs = std::move(b);
    return t;
  }
  static TermPtr mk_pow(TermPtr base, unsigned exp) {
    auto t = std::make_shared<Term>();
    t->kind = TermKind::Pow;
    t->free = base->free;
    t->lhs = std::move(base);
    t->exponent = exp;
    return t;
  }
};

inline TermPtr neg(TermPtr a) { return Term::unary(TermKind::Neg, std::move(a)); }
inline TermPtr add(TermPtr a, TermPtr b) { return Term::binary(TermKind::Add, std::move(a), std::move(b)); }
inline TermPtr sub(TermPtr a, TermPtr b) { return Term::binary(TermKind::Sub, std::move(a), std::move(b)); }
inline TermPtr mul(TermPtr a, TermPtr b) { return Term::binary(TermKind::Mul, std::move(a), std::move(b)); }
inline TermPtr div(TermPtr a, TermPtr b) { return Term::binary(TermKind::Div, std::move(a), std::move(b)); }

/* ------------------------------------------------------------ games ---- */

enum class GameKind { Assign, AssignAny, Test, Ode, Seq, Choice, Loop, Dual };

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Game;
using GamePtr = std::shared_ptr<const Game>;

struct OdeEquation {
  Ident var;    // evolves as var' = rhs
  TermPtr rhs;
};

struct Game {
  GameKind kind;
  Ident var;                      // Assign / AssignAny target
  TermPtr term;                   // Assign rhs
  FormulaPtr formula;             // Test condition; Ode domain (may be null)
  std::vector<OdeEquation> odes;  // Ode, nonempty, pairwise distinct vars
  GamePtr lhs, rhs;               // Seq/Choice; Loop/Dual use lhs only
  IdentSet free;     // every identifier occurring (assignment targets included)
  IdentSet written;  // assignment targets and ODE-bound variables

  static GamePtr mk_assign(Ident x, TermPtr e);
  static GamePtr mk_assign_any(Ident x);
  static GamePtr mk_test(FormulaPtr f);
  static GamePtr mk_ode(std::vector<OdeEquation> eqs, FormulaPtr domain);
  static GamePtr mk_seq(GamePtr a, GamePtr b);
  static GamePtr mk_choice(GamePtr a, GamePtr b);
  static GamePtr mk_loop(GamePtr a);
  static GamePtr mk_dual(GamePtr a);
};

/* --------------------------------------------------------- formulas ---- */

enum class FormulaKind {
  True, False, Cmp, Not, And, Or, Imply, Equiv, Forall, Exists, Diamond, Box
};

enum class RelOp { Eq, Ne, Lt, Le, Gt, Ge };

struct Formula {
  FormulaKind kind;
  RelOp rel = RelOp::Eq;  // Cmp
  TermPtr t_lhs, t_rhs;   // Cmp
  FormulaPtr f_lhs, f_rhs;  // connectives; Not and binder bodies use f_lhs
  Ident binder;             // Forall / Exists
  GamePtr game;             // Diamond / Box
  IdentSet free;

  static FormulaPtr mk_true() {
    auto f = std::make_shared<Formula>();
    f->kind = FormulaKind::True;
    return f;
  }
  static FormulaPtr mk_false() {
    auto f = std::make_shared<Formula>();
    f->kind = FormulaKind::False;
    return f;
  }
  static FormulaPtr mk_cmp(TermPtr a, RelOp op, TermPtr b) {
    auto f = std::make_shared<Formula>();
    f->kind = FormulaKind::Cmp;
    f->rel = op;
    f->free = a->free;
    f->free.insert(b->free.begin(), b->free.end());
    f->t_lhs = std::move(a);
    f->t_rhs = std::move(b);
    return f;
  }
  static FormulaPtr mk_not(FormulaPtr a) {
    auto f = std::make_shared<Formula>();
    f->kind = FormulaKind::Not;
    f->free = a->free;
    f->f_lhs = std::move(a);
    return f;
  }
  static FormulaPtr connective(FormulaKind k, FormulaPtr a, FormulaPtr b) {
    auto f = std::make_shared<Formula>();
    f->kind = k;
    f->free = a->free;
    f->free.insert(b->free.begin(), b->free.end());
    f->f_lhs = std::move(a);
    f->f_rhs = std::move(b);
    return f;
  }
  static FormulaPtr quantifier(FormulaKind k, Ident x, FormulaPtr body) {
    assert(k == FormulaKind::Forall || k == FormulaKind::Exists);
    auto f = std::make_shared<Formula>();
    f->kind = k;
    f->free = body->free;
    f->free.erase(x);
    f->binder = std::move(x);
    f->f_lhs = std::move(body);
    return f;
  }
  static FormulaPtr modality(FormulaKind k, GamePtr g, FormulaPtr post) {
    assert(k == FormulaKind::Diamond || k == FormulaKind::Box);
    auto f = std::make_shared<Formula>();
    f->kind = k;
    f->free = g->free;
    f->free.insert(post->free.begin(), post->free.end());
    f->game = std::move(g);
    f->f_lhs = std::move(post);
    return f;
  }
};

inline FormulaPtr f_and(FormulaPtr a, FormulaPtr b) { return Formula::connective(FormulaKind::And, std::move(a), std::move(b)); }
inline FormulaPtr f_or(FormulaPtr a, FormulaPtr b) { return Formula::connective(FormulaKind::Or, std::move(a), std::move(b)); }
inline FormulaPtr f_imply(FormulaPtr a, FormulaPtr b) { return Formula::connective(FormulaKind::Imply, std::move(a), std::move(b)); }
inline FormulaPtr f_equiv(FormulaPtr a, FormulaPtr b) { return Formula::connective(FormulaKind::Equiv, std::move(a), std::move(b)); }
inline FormulaPtr forall(Ident x, FormulaPtr body) { return Formula::quantifier(FormulaKind::Forall, std::move(x), std::move(body)); }
inline FormulaPtr exists(Ident x, FormulaPtr body) { return Formula::quantifier(FormulaKind::Exists, std::move(x), std::move(body)); }
inline FormulaPtr diamond(GamePtr g, FormulaPtr post) { return Formula::modality(FormulaKind::Diamond, std::move(g), std::move(post)); }
inline FormulaPtr box(GamePtr g, FormulaPtr post) { return Formula::modality(FormulaKind::Box, std::move(g), std::move(post)); }

/* ----------------------------------------------- game factory bodies --- */

inline GamePtr Game::mk_assign(Ident x, TermPtr e) {
  auto g = std::make_shared<Game>();
  g->kind = GameKind::Assign;
  g->free = e->free;
  g->free.insert(x);
  g->written.insert(x);
  g->var = std::move(x);
  g->term = std::move(e);
  return g;
}

inline GamePtr Game::mk_assign_any(Ident x) {
  auto g = std::make_shared<Game>();
  g->kind = GameKind::AssignAny;
  g->free.insert(x);
  g->written.insert(x);
  g->var = std::move(x);
  return g;
}

inline GamePtr Game::mk_test(FormulaPtr f) {
  auto g = std::make_shared<Game>();
  g->kind = GameKind::Test;
  g->free = f->free;
  g->formula = std::move(f);
  return g;
}

inline GamePtr Game::mk_ode(std::vector<OdeEquation> eqs, FormulaPtr domain) {
  assert(!eqs.empty());
  auto g = std::make_shared<Game>();
  g->kind = GameKind::Ode;
  for (const auto& eq : eqs) {
    g->free.insert(eq.var);
    g->free.insert(eq.rhs->free.begin(), eq.rhs->free.end());
    assert(!g->written.count(eq.var) && "ODE-bound identifiers must be distinct");
    g->written.insert(eq.var);
  }
  if (domain) g->free.insert(domain->free.begin(), domain->free.end());
  g->odes = std::move(eqs);
  g->formula = std::move(domain);
  return g;
}

inline GamePtr Game::mk_seq(GamePtr a, GamePtr b) {
  auto g = std::make_shared<Game>();
  g->kind = GameKind::Seq;
  g->free = a->free;
  g->free.insert(b->free.begin(), b->free.end());
  g->written = a->written;
  g->written.insert(b->written.begin(), b->written.end());
  g->lhs = std::move(a);
  g->rhs = std::move(b);
  return g;
}

inline GamePtr Game::mk_choice(GamePtr a, GamePtr b) {
  auto g = std::make_shared<Game>();
  g->kind = GameKind::Choice;
  g->free = a->free;
  g->free.insert(b->free.begin(), b->free.end());
  g->written = a->written;
  g->written.insert(b->written.begin(), b->written.end());
  g->lhs = std::move(a);
  g->rhs = std::move(b);
  return g;
}

inline GamePtr Game::mk_loop(GamePtr a) {
  auto g = std::make_shared<Game>();
  g->kind = GameKind::Loop;
  g->free = a->free;
  g->written = a->written;
  g->lhs = std::move(a);
  return g;
}

inline GamePtr Game::mk_dual(GamePtr a) {
  auto g = std::make_shared<Game>();
  g->kind = GameKind::Dual;
  g->free = a->free;
  g->written = a->written;
  g->lhs = std::move(a);
  return g;
}

/* ------------------------------------------------ structural equality -- */

bool equal(const GamePtr& a, const GamePtr& b);
bool equal(const FormulaPtr& a, const FormulaPtr& b);

inline bool equal(const TermPtr& a, const TermPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case TermKind::Var: return a->var == b->var;
    case TermKind::Num: return a->value == b->value;  // literal spelling is cosmetic
    case TermKind::Neg: return equal(a->lhs, b->lhs);
    case TermKind::Pow: return a->exponent == b->exponent && equal(a->lhs, b->lhs);
    default: return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
  }
}

inline bool equal(const GamePtr& a, const GamePtr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case GameKind::Assign: return a->var == b->var && equal(a->term, b->term);
    case GameKind::AssignAny: return a->var == b->var;
    case GameKind::Test: return equal(a->formula, b->formula);
    case GameKind::Ode: {
      if (a->odes.size() != b->odes.size()) return false;
      for (size_t i = 0; i < a->odes.size(); ++i)
        if (a->odes[i].var != b->odes[i].var || !equal(a->odes[i].rhs, b->odes[i].rhs))
          return false;
      bool ad = a->formula != nullptr, bd = b->formula != nullptr;
      if (ad != bd) return false;
      return !ad || equal(a->formula, b->formula);
    }
    case GameKind::Seq:
    case GameKind::Choice:
      return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
    case GameKind::Loop:
    case GameKind::Dual:
      return equal(a->lhs, b->lhs);
  }
  return false;
}

inline bool equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case FormulaKind::True:
    case FormulaKind::False:
      return true;
    case FormulaKind::Cmp:
      return a->rel == b->rel && equal(a->t_lhs, b->t_lhs) && equal(a->t_rhs, b->t_rhs);
    case FormulaKind::Not:
      return equal(a->f_lhs, b->f_lhs);
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Imply:
    case FormulaKind::Equiv:
      return equal(a->f_lhs, b->f_lhs) && equal(a->f_rhs, b->f_rhs);
    case FormulaKind::Forall:
    case FormulaKind::Exists:
      return a->binder == b->binder && equal(a->f_lhs, b->f_lhs);
    case FormulaKind::Diamond:
    case FormulaKind::Box:
      return equal(a->game, b->game) && equal(a->f_lhs, b->f_lhs);
  }
  return false;
}

inline bool is_true(const FormulaPtr& f) { return f && f->kind == FormulaKind::True; }
inline bool is_false(const FormulaPtr& f) { return f && f->kind == FormulaKind::False; }

// Conjunction/disjunction with true/false units folded away. This is the
// only simplification the executor performs; everything else is the
// solver's job.
inline FormulaPtr mk_and(FormulaPtr a, FormulaPtr b) {
  if (is_true(a)) return b;
  if (is_true(b)) return a;
  if (is_false(a)) return a;
  if (is_false(b)) return b;
  return f_and(std::move(a), std::move(b));
}
inline FormulaPtr mk_or(FormulaPtr a, FormulaPtr b) {
  if (is_false(a)) return b;
  if (is_false(b)) return a;
  if (is_true(a)) return a;
  if (is_true(b)) return b;
  return f_or(std::move(a), std::move(b));
}

inline bool contains_modality(const FormulaPtr& f) {
  switch (f->kind) {
    case FormulaKind::Diamond:
    case FormulaKind::Box:
      return true;
    case FormulaKind::True:
    case FormulaKind::False:
    case FormulaKind::Cmp:
      return false;
    case FormulaKind::Not:
    case FormulaKind::Forall:
    case FormulaKind::Exists:
      return contains_modality(f->f_lhs);
    default:
      return contains_modality(f->f_lhs) || contains_modality(f->f_rhs);
  }
}

/* ------------------------------------------------- variable queries ---- */

// Identifiers occurring free. Note the read/write distinction: an
// assignment or ODE binds its variable for write analysis (written_vars)
// but the occurrence itself counts as free here, since the pre-state
// value is in scope. Only Forall/Exists remove identifiers.
inline const IdentSet& free_vars(const TermPtr& t) { return t->free; }
inline const IdentSet& free_vars(const FormulaPtr& f) { return f->free; }
inline const IdentSet& free_vars(const GamePtr& g) { return g->free; }

// Assignment targets and ODE-bound variables, through every composite.
inline const IdentSet& written_vars(const GamePtr& g) { return g->written; }

}  // namespace dgl
