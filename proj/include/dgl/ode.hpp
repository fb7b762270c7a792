#pragma once

// Closed-form solving of polynomial ODE systems whose dependency graph
// among bound variables is acyclic. Such systems integrate exactly to
// polynomials in the duration variable; anything cyclic (x' = y, y' = -x)
// or non-polynomial is reported as a tool failure rather than
// approximated.

#include "dgl/ast.hpp"
#include "dgl/polynomial.hpp"
#include "dgl/printer.hpp"
#include "dgl/subst.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <string>
#include <vector>

namespace dgl {

struct ToolFailureReason {
  enum class Kind { LoopUnsupported, NonSolvableODE, NonPolynomialRHS, DivisionInODE, Other };
  Kind kind = Kind::Other;
  std::string detail;
};

inline const char* tool_failure_kind_name(ToolFailureReason::Kind k) {
  switch (k) {
    case ToolFailureReason::Kind::LoopUnsupported: return "loop_unsupported";
    case ToolFailureReason::Kind::NonSolvableODE: return "non_solvable_ode";
    case ToolFailureReason::Kind::NonPolynomialRHS: return "non_polynomial_rhs";
    case ToolFailureReason::Kind::DivisionInODE: return "division_in_ode";
    case ToolFailureReason::Kind::Other: return "other";
  }
  return "other";
}

struct OdeSolution {
  Ident tau;  // fresh duration variable
  // Per bound variable: value at time tau, polynomial in tau with
  // coefficients over pre-state terms. value_term is the grouped
  // rendering (initial value first, then ascending powers of tau).
  std::map<Ident, Polynomial> value_poly;
  std::map<Ident, TermPtr> value_term;

  // Value terms with tau replaced by another time expression.
  TermSubst values_at(const TermPtr& time) const {
    TermSubst subst;
    for (const auto& [v, t] : value_term)
      subst.emplace(v, substitute(t, tau, time));
    return subst;
  }
  TermSubst values_at_tau() const {
    TermSubst subst;
    for (const auto& [v, t] : value_term) subst.emplace(v, t);
    return subst;
  }
};

struct OdeResult {
  std::optional<OdeSolution> solution;
  ToolFailureReason failure;
  bool ok() const { return solution.has_value(); }
};

namespace detail {

// Grouped rendering: x + v*tau + (a/2)*tau^2 ... keeps the initial value
// in front, which is what the golden outputs expect.
inline TermPtr solution_to_term(const Polynomial& p, const Ident& tau) {
  unsigned deg = p.degree(tau);
  TermPtr acc;
  for (unsigned k = 0; k <= deg; ++k) {
    Polynomial ck = p.coefficient(tau, k);
    if (ck.is_zero()) continue;
    bool negative = false;
    if (ck.terms.size() == 1 && ck.terms.begin()->second < 0) {
      negative = true;
      ck = -ck;
    }
    TermPtr piece;
    if (k == 0) {
      piece = ck.to_term();
    } else {
      TermPtr tau_pow = k == 1 ? Term::mk_var(tau) : Term::mk_pow(Term::mk_var(tau), k);
      if (ck.terms.size() == 1 && ck.terms.begin()->first.empty() &&
          ck.terms.begin()->second == 1)
        piece = tau_pow;  // coefficient 1
      else
        piece = mul(ck.to_term(), tau_pow);
    }
    if (!acc) acc = negative ? neg(piece) : piece;
    else acc = negative ? sub(acc, piece) : add(acc, piece);
  }
  return acc ? acc : Term::mk_num(0);
}

}  // namespace detail

// Solves {v1' = f1, ..., vn' = fn}. The dependency graph has an edge
// v -> w when bound variable w occurs in v's right-hand side; acyclic
// graphs are solved in topological order by exact integration.
inline OdeResult solve_ode(const std::vector<OdeEquation>& system,
                           const IdentSet& extra_avoid = {}) {
  OdeResult result;
  if (system.empty()) {
    result.failure = {ToolFailureReason::Kind::Other, "empty differential equation system"};
    return result;
  }

  IdentSet bound;
  for (const auto& eq : system) bound.insert(eq.var);

  // Convert right-hand sides, classifying division failures.
  std::map<Ident, Polynomial> rhs;
  for (const auto& eq : system) {
    PolyConversion conv = term_to_poly(eq.rhs);
    if (!conv.ok()) {
      bool touches_bound = false;
      for (const auto& v : conv.divisor_vars)
        if (bound.count(v)) { touches_bound = true; break; }
      std::string where = "right-hand side of " + eq.var + "' = " + print_term(eq.rhs) + ": " + conv.detail;
      if (touches_bound)
        result.failure = {ToolFailureReason::Kind::NonPolynomialRHS,
                          where + " over an ODE-bound variable"};
      else
        result.failure = {ToolFailureReason::Kind::DivisionInODE, where};
      return result;
    }
    rhs.emplace(eq.var, std::move(*conv.poly));
  }

  // Kahn's algorithm over dependencies on bound variables.
  std::map<Ident, IdentSet> deps;
  for (const auto& eq : system) {
    IdentSet d;
    for (const auto& v : rhs.at(eq.var).variables())
      if (bound.count(v)) d.insert(v);
    deps.emplace(eq.var, std::move(d));
  }
  std::vector<Ident> order;
  IdentSet remaining = bound;
  while (!remaining.empty()) {
    Ident next;
    bool found = false;
    for (const auto& v : remaining) {
      bool ready = true;
      for (const auto& d : deps.at(v))
        if (remaining.count(d)) { ready = false; break; }
      if (ready) { next = v; found = true; break; }
    }
    if (!found) {
      std::string cycle;
      for (const auto& v : remaining) cycle += (cycle.empty() ? "" : ", ") + v;
      result.failure = {ToolFailureReason::Kind::NonSolvableODE,
                        "cyclic dependency among {" + cycle + "}; no polynomial solution"};
      return result;
    }
    order.push_back(next);
    remaining.erase(next);
  }

  IdentSet avoid = extra_avoid;
  for (const auto& eq : system) {
    avoid.insert(eq.var);
    avoid.insert(eq.rhs->free.begin(), eq.rhs->free.end());
  }
  OdeSolution sol;
  sol.tau = fresh(kTauPrefix, avoid);

  for (const auto& v : order) {
    Polynomial f = rhs.at(v);
    for (const auto& w : deps.at(v)) f = f.substituted(w, sol.value_poly.at(w));
    Polynomial integrated = Polynomial::variable(v) + f.antiderivative(sol.tau);
    sol.value_poly.emplace(v, std::move(integrated));
  }

#ifndef NDEBUG
  // Solution invariants: value at tau = 0 is the pre-state variable, and
  // the formal derivative matches the substituted right-hand side.
  for (const auto& v : order) {
    const Polynomial& pv = sol.value_poly.at(v);
    assert(pv.substituted(sol.tau, Polynomial::constant(Rational(0))) == Polynomial::variable(v));
    Polynomial expected_rhs = rhs.at(v);
    for (const auto& w : bound)
      expected_rhs = expected_rhs.substituted(w, sol.value_poly.at(w));
    assert(pv.derivative(sol.tau) == expected_rhs);
  }
#endif

  for (const auto& [v, p] : sol.value_poly)
    sol.value_term.emplace(v, detail::solution_to_term(p, sol.tau));

  result.solution = std::move(sol);
  return result;
}

}  // namespace dgl
