#ifndef ABSPROG_ERROR_HPP
#define ABSPROG_ERROR_HPP

#include <stdexcept>
#include <string>

namespace absprog {

// Failure categories surfaced by library operations. Validation results and
// check verdicts are ordinary data, not errors; these are contract breaches.
enum class Errc {
  budget_exceeded,
  unknown_state,
  not_a_superstate,
  not_a_subspace,
  name_collision,
  incomplete_auxiliary_map,
  variable_already_in_base,
  auxiliary_domain_mismatch,
  inapplicable_step,
  recursive_call_graph,
  multi_output_callee,
  space_mismatch,
  parse_error,
  invalid_state,
  invalid_argument,
  io_error,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, std::string message) {
  throw Error(code, std::move(message));
}

}  // namespace absprog

#endif
