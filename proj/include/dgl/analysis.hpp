#pragma once

// Static checks ahead of symbolic execution: peel the assumption spine
// off a candidate model, and enforce the anti-stasis minimum-write rule
// that blocks "empty game" models encoding the answer directly in the
// win condition.

#include "dgl/ast.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dgl {

struct SplitModel {
  std::vector<FormulaPtr> assumption_list;  // in source order, may be empty
  FormulaPtr assumptions;  // conjunction of the above; `true` when empty
  FormulaPtr modality;     // the Diamond/Box node itself
  bool diamond = true;
  GamePtr game;
  FormulaPtr post;

  // Rebuilds the original formula; identity on the accepted shape.
  FormulaPtr reassemble() const {
    FormulaPtr f = modality;
    for (auto it = assumption_list.rbegin(); it != assumption_list.rend(); ++it)
      f = f_imply(*it, f);
    return f;
  }
};

struct SplitResult {
  std::optional<SplitModel> model;
  std::string error;
  bool ok() const { return model.has_value(); }
};

// Accepts A1 -> (A2 -> (... -> M)) with each Ai modality-free and M a
// single Diamond/Box; anything else is a shape rejection with a message
// the LLM can act on.
inline SplitResult split_assumptions(const FormulaPtr& f) {
  SplitModel out;
  FormulaPtr cursor = f;
  while (cursor->kind == FormulaKind::Imply) {
    if (contains_modality(cursor->f_lhs))
      return {std::nullopt,
              "model is not of shape assumptions -> <game> goal: an assumption contains a modality"};
    out.assumption_list.push_back(cursor->f_lhs);
    cursor = cursor->f_rhs;
  }
  if (cursor->kind != FormulaKind::Diamond && cursor->kind != FormulaKind::Box) {
    if (contains_modality(cursor))
      return {std::nullopt,
              "model is not of shape assumptions -> <game> goal: the modality is nested inside "
              "another connective"};
    return {std::nullopt,
            "model is not of shape assumptions -> <game> goal: no modality found"};
  }
  out.modality = cursor;
  out.diamond = cursor->kind == FormulaKind::Diamond;
  out.game = cursor->game;
  out.post = cursor->f_lhs;
  out.assumptions = Formula::mk_true();
  for (const auto& a : out.assumption_list) out.assumptions = mk_and(out.assumptions, a);
  return {std::move(out), ""};
}

struct StasisResult {
  bool pass = false;
  IdentSet written;
  std::string detail;
};

// Pass iff at least min_writes distinct variables are written; monotone
// in min_writes by construction.
inline StasisResult stasis_check(const GamePtr& g, unsigned min_writes) {
  StasisResult r;
  r.written = written_vars(g);
  r.pass = r.written.size() >= min_writes;
  if (!r.pass) {
    std::string names;
    for (const auto& v : r.written) names += (names.empty() ? "" : ", ") + v;
    r.detail = "only " + std::to_string(r.written.size()) + " variable(s) written {" + names +
               "}; the benchmark requires at least " + std::to_string(min_writes);
  }
  return r;
}

}  // namespace dgl
