#pragma once

#include <stdexcept>
#include <string>

namespace uniflow {

enum class Errc {
  ok = 0,
  spec_mismatch,
  basis_expansion,
  not_nilpotent,
  two_step_violated,
  indiscrete_span,
  degenerate_gram,
  box_too_large,
  budget_exceeded,
  precondition,
  condition_star,
  invalid_config,
  io_failure,
  internal,
};

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }

private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::ok: return "ok";
    case Errc::spec_mismatch: return "spec_mismatch";
    case Errc::basis_expansion: return "basis_expansion";
    case Errc::not_nilpotent: return "not_nilpotent";
    case Errc::two_step_violated: return "two_step_violated";
    case Errc::indiscrete_span: return "indiscrete_span";
    case Errc::degenerate_gram: return "degenerate_gram";
    case Errc::box_too_large: return "box_too_large";
    case Errc::budget_exceeded: return "budget_exceeded";
    case Errc::precondition: return "precondition";
    case Errc::condition_star: return "condition_star";
    case Errc::invalid_config: return "invalid_config";
    case Errc::io_failure: return "io_failure";
    case Errc::internal: return "internal";
  }
  return "unknown";
}

}  // namespace uniflow
