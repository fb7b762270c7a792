#pragma once

// Sparse multivariate polynomials over exact rationals. This is the
// normal form behind ODE solving: conversion from terms, formal
// derivative/antiderivative, and substitution of polynomials for
// variables. Ordering of the underlying maps makes every operation
// deterministic.

#include "dgl/ast.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>

namespace dgl {

using Monomial = std::map<Ident, unsigned>;  // variable -> exponent > 0

class Polynomial {
 public:
  std::map<Monomial, Rational> terms;  // monomial -> nonzero coefficient

  Polynomial() = default;

  static Polynomial constant(Rational c) {
    Polynomial p;
    if (c != 0) p.terms.emplace(Monomial{}, std::move(c));
    return p;
  }
  static Polynomial variable(const Ident& x) {
    Polynomial p;
    p.terms.emplace(Monomial{{x, 1}}, Rational(1));
    return p;
  }

  bool is_zero() const { return terms.empty(); }

  bool is_constant() const {
    return terms.empty() || (terms.size() == 1 && terms.begin()->first.empty());
  }

  Rational constant_value() const {
    return terms.empty() ? Rational(0) : terms.begin()->second;
  }

  IdentSet variables() const {
    IdentSet out;
    for (const auto& [mono, _] : terms)
      for (const auto& [v, e] : mono) out.insert(v);
    return out;
  }

  void add_term(const Monomial& mono, const Rational& coeff) {
    if (coeff == 0) return;
    auto [it, inserted] = terms.emplace(mono, coeff);
    if (!inserted) {
      it->second += coeff;
      if (it->second == 0) terms.erase(it);
    }
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    Polynomial out = a;
    for (const auto& [m, c] : b.terms) out.add_term(m, c);
    return out;
  }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    Polynomial out = a;
    for (const auto& [m, c] : b.terms) out.add_term(m, -c);
    return out;
  }
  friend Polynomial operator-(const Polynomial& a) {
    Polynomial out;
    for (const auto& [m, c] : a.terms) out.terms.emplace(m, -c);
    return out;
  }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial out;
    for (const auto& [ma, ca] : a.terms)
      for (const auto& [mb, cb] : b.terms) {
        Monomial m = ma;
        for (const auto& [v, e] : mb) m[v] += e;
        out.add_term(m, ca * cb);
      }
    return out;
  }
  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.terms == b.terms;
  }

  Polynomial scaled(const Rational& c) const {
    Polynomial out;
    if (c == 0) return out;
    for (const auto& [m, k] : terms) out.terms.emplace(m, k * c);
    return out;
  }

  Polynomial pow(unsigned e) const {
    Polynomial result = constant(Rational(1));
    Polynomial base = *this;
    while (e) {
      if (e & 1) result = result * base;
      base = base * base;
      e >>= 1;
    }
    return result;
  }

  Polynomial derivative(const Ident& x) const {
    Polynomial out;
    for (const auto& [m, c] : terms) {
      auto it = m.find(x);
      if (it == m.end()) continue;
      Monomial reduced = m;
      if (it->second == 1) reduced.erase(x);
      else --reduced[x];
      out.add_term(reduced, c * Rational(it->second));
    }
    return out;
  }

  Polynomial antiderivative(const Ident& x) const {
    Polynomial out;
    for (const auto& [m, c] : terms) {
      Monomial raised = m;
      unsigned k = ++raised[x];
      out.add_term(raised, c / Rational(k));
    }
    return out;
  }

  // Replaces x by the given polynomial.
  Polynomial substituted(const Ident& x, const Polynomial& value) const {
    Polynomial out;
    std::map<unsigned, Polynomial> powers;  // exponent -> value^exponent
    for (const auto& [m, c] : terms) {
      auto it = m.find(x);
      if (it == m.end()) {
        out.add_term(m, c);
        continue;
      }
      Monomial rest = m;
      rest.erase(x);
      auto [pit, inserted] = powers.try_emplace(it->second);
      if (inserted) pit->second = value.pow(it->second);
      Polynomial part = pit->second;
      Polynomial factor;
      factor.terms.emplace(rest, c);
      out = out + factor * part;
    }
    return out;
  }

  // Degree in one variable; 0 for polynomials not mentioning it.
  unsigned degree(const Ident& x) const {
    unsigned d = 0;
    for (const auto& [m, _] : terms) {
      auto it = m.find(x);
      if (it != m.end() && it->second > d) d = it->second;
    }
    return d;
  }

  // Coefficient of x^k, a polynomial in the remaining variables.
  Polynomial coefficient(const Ident& x, unsigned k) const {
    Polynomial out;
    for (const auto& [m, c] : terms) {
      auto it = m.find(x);
      unsigned e = it == m.end() ? 0 : it->second;
      if (e != k) continue;
      Monomial rest = m;
      rest.erase(x);
      out.add_term(rest, c);
    }
    return out;
  }

  // Canonical term form: monomials in map order, folded with +/- by
  // coefficient sign so output never prints "+-".
  TermPtr to_term() const {
    if (terms.empty()) return Term::mk_num(0);
    TermPtr acc;
    for (const auto& [m, c] : terms) {
      bool negative = c < 0;
      TermPtr piece = monomial_term(m, negative ? -c : c);
      if (!acc) acc = negative ? neg(piece) : piece;
      else acc = negative ? sub(acc, piece) : add(acc, piece);
    }
    return acc;
  }

 private:
  static TermPtr monomial_term(const Monomial& m, const Rational& coeff) {
    TermPtr acc;
    if (coeff != 1 || m.empty()) acc = Term::mk_num(coeff);
    for (const auto& [v, e] : m) {
      TermPtr f = e == 1 ? Term::mk_var(v) : Term::mk_pow(Term::mk_var(v), e);
      acc = acc ? mul(acc, f) : f;
    }
    return acc;
  }
};

// Term -> polynomial conversion. Division is folded into coefficients
// when the divisor normalizes to a nonzero constant; anything else is
// reported, with the divisor's variables, so the ODE solver can pick the
// right failure kind.
struct PolyConversion {
  std::optional<Polynomial> poly;
  bool division_failure = false;
  IdentSet divisor_vars;  // empty for division by the constant zero
  std::string detail;
  bool ok() const { return poly.has_value(); }
};

inline PolyConversion term_to_poly(const TermPtr& t) {
  PolyConversion out;
  switch (t->kind) {
    case TermKind::Var:
      out.poly = Polynomial::variable(t->var);
      return out;
    case TermKind::Num:
      out.poly = Polynomial::constant(t->value);
      return out;
    case TermKind::Neg: {
      PolyConversion a = term_to_poly(t->lhs);
      if (!a.ok()) return a;
      out.poly = -*a.poly;
      return out;
    }
    case TermKind::Pow: {
      PolyConversion a = term_to_poly(t->lhs);
      if (!a.ok()) return a;
      out.poly = a.poly->pow(t->exponent);
      return out;
    }
    case TermKind::Div: {
      PolyConversion num = term_to_poly(t->lhs);
      if (!num.ok()) return num;
      PolyConversion den = term_to_poly(t->rhs);
      if (!den.ok()) return den;
      if (!den.poly->is_constant()) {
        out.division_failure = true;
        out.divisor_vars = den.poly->variables();
        out.detail = "division by a non-constant term";
        return out;
      }
      if (den.poly->is_zero()) {
        out.division_failure = true;
        out.detail = "division by the constant zero";
        return out;
      }
      out.poly = num.poly->scaled(Rational(1) / den.poly->constant_value());
      return out;
    }
    default: {
      PolyConversion a = term_to_poly(t->lhs);
      if (!a.ok()) return a;
      PolyConversion b = term_to_poly(t->rhs);
      if (!b.ok()) return b;
      if (t->kind == TermKind::Add) out.poly = *a.poly + *b.poly;
      else if (t->kind == TermKind::Sub) out.poly = *a.poly - *b.poly;
      else out.poly = *a.poly * *b.poly;
      return out;
    }
  }
}

}  // namespace dgl
