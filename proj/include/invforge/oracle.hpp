#ifndef INVFORGE_ORACLE_HPP
#define INVFORGE_ORACLE_HPP

#include "invforge/acsl.hpp"
#include "invforge/cminus.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>

namespace invforge::oracle {

/// Enumeration bounds for the brute-force checks. Input enumeration
/// (established) and state enumeration (inductive, useful) carry separate
/// ranges with identical defaults. Checks degrade to Unknown once the
/// explored-state budget is exhausted.
struct domain_config {
  bigint nondet_unsigned_lo = 0, nondet_unsigned_hi = 16;
  bigint nondet_signed_lo = -8, nondet_signed_hi = 8;
  bigint state_unsigned_lo = 0, state_unsigned_hi = 16;
  bigint state_signed_lo = -8, state_signed_hi = 8;
  std::uint64_t max_states = 1000000;
};

/// Counterexamples are lifted to mathematical integers keyed by variable
/// name; together with the program's declared types they reconstruct the
/// exact machine state.
using cex_map = std::map<std::string, bigint>;

enum class validation_kind {
  valid,
  parse_failed,
  unsupported,
  not_established,
  not_inductive,
  undefined_semantics,
  unknown,
};

struct validation_verdict {
  validation_kind kind = validation_kind::unknown;
  std::string symbol;   // unsupported: the offending symbol
  std::string message;  // parse message / undefinedness or budget reason
  std::optional<cex_map> cex;  // inputs for not_established, a full state
                               // for not_inductive / undefined_semantics
  std::uint64_t states_explored = 0;
  domain_config domain;

  bool ok() const { return kind == validation_kind::valid; }
};

enum class usefulness_kind { useful, not_useful, unknown };

struct usefulness_verdict {
  usefulness_kind kind = usefulness_kind::unknown;
  std::string message;
  std::optional<cex_map> cex;  // satisfies inv and ¬condition, fails assertion
  std::uint64_t states_explored = 0;
  domain_config domain;

  bool ok() const { return kind == usefulness_kind::useful; }
};

const char* validation_kind_name(validation_kind k);
const char* usefulness_kind_name(usefulness_kind k);

/// Established: the invariant holds at the loop head for every nondet input
/// vector (within range) whose prologue run reaches the loop.
validation_verdict check_established(const cminus::program& p,
                                     const expr_ptr& inv,
                                     const domain_config& d);

/// Inductive: from every enumerated state satisfying the invariant and the
/// loop condition, one body execution leads to a state satisfying the
/// invariant again. Successor states may leave the enumeration range; the
/// invariant is still evaluated on them exactly.
validation_verdict check_inductive(const cminus::program& p,
                                   const expr_ptr& inv,
                                   const domain_config& d);

/// Full validity check of a candidate: parse and scope first, then
/// established, then inductive; the first failure decides.
validation_verdict validate(const cminus::program& p,
                            const acsl::invariant_text& candidate,
                            const domain_config& d);

/// Useful: at every enumerated state satisfying the invariant but not the
/// loop condition, the post-loop assertion holds. Expects a Valid
/// invariant; with the trivial invariant `1` this becomes the baseline
/// "verify without invariant" check.
usefulness_verdict check_useful(const cminus::program& p, const expr_ptr& inv,
                                const domain_config& d);

/// The always-true invariant used for baseline verification.
expr_ptr trivial_invariant();

}  // namespace invforge::oracle

#endif
