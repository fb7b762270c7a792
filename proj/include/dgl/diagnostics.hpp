#pragma once

// Parse diagnostics: position-carrying records whose messages double as
// the remedial feedback strings fed back to the LLM. Messages are single
// sentences, deterministic for a given (code, parameters) pair.

#include <cstddef>
#include <string>
#include <vector>

namespace dgl {

enum class DiagnosticCode {
  UnicodeChar,
  UnbalancedDelimiter,
  UnknownToken,
  MissingSemicolon,
  BadModality,
  BadODE,
  TrailingInput,
  Other,
};

inline const char* diagnostic_code_name(DiagnosticCode c) {
  switch (c) {
    case DiagnosticCode::UnicodeChar: return "unicode_char";
    case DiagnosticCode::UnbalancedDelimiter: return "unbalanced_delimiter";
    case DiagnosticCode::UnknownToken: return "unknown_token";
    case DiagnosticCode::MissingSemicolon: return "missing_semicolon";
    case DiagnosticCode::BadModality: return "bad_modality";
    case DiagnosticCode::BadODE: return "bad_ode";
    case DiagnosticCode::TrailingInput: return "trailing_input";
    case DiagnosticCode::Other: return "other";
  }
  return "other";
}

struct SourceSpan {
  size_t start = 0;  // byte offsets into the original input, start <= end
  size_t end = 0;
};

struct Diagnostic {
  DiagnosticCode code = DiagnosticCode::Other;
  std::string message;
  size_t offset = 0;  // byte offset of the offending slice
  size_t line = 1;
  size_t column = 1;
  std::string excerpt;  // offending source slice
};

using Diagnostics = std::vector<Diagnostic>;

}  // namespace dgl
