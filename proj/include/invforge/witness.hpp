#ifndef INVFORGE_WITNESS_HPP
#define INVFORGE_WITNESS_HPP

#include "invforge/cminus.hpp"
#include "invforge/errors.hpp"
#include "invforge/expr.hpp"

#include <string>

namespace invforge::witness {

struct witness_error : error {
  using error::error;
};

/// Minimal-parenthesis C spelling of an invariant. `==>` has no C form and
/// is rewritten via material implication into `(!(a)) || (b)`.
std::string c_expr(const expr& e);
inline std::string c_expr(const expr_ptr& e) { return c_expr(*e); }

struct document {
  std::string graphml;
  std::string invariant;  // C spelling placed at the loop-head node
  int loop_line = 0;      // 1-based line of the loop header
};

/// Correctness-witness automaton for one task: entry node, a loop-head node
/// carrying the invariant, and a sink. `program_file` names the source the
/// witness refers to; `source` is that file's content (hashed into the
/// document).
document export_witness(const cminus::program& p, const expr_ptr& inv,
                        const std::string& program_file,
                        const std::string& source);

/// Structural schema check: correctness witness-type, required graph data,
/// exactly one entry node, exactly one node carrying an invariant, and all
/// edges referencing declared nodes. Throws witness_error with the first
/// violation.
void validate_document(const std::string& graphml);

}  // namespace invforge::witness

#endif
