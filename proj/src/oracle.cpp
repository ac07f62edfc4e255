#include "invforge/oracle.hpp"

#include <algorithm>
#include <utility>
#include <vector>

namespace invforge::oracle {

namespace {

// One enumerated variable: its values in magnitude order (0, 1, -1, 2, ...)
// so small counterexamples are found first and verdicts are deterministic.
struct axis {
  std::string name;
  ctype type;
  std::vector<machine_value> values;
};

std::vector<machine_value> range_values(ctype t, const bigint& lo,
                                        const bigint& hi) {
  std::vector<bigint> raw;
  for (bigint v = lo; v <= hi; ++v)
    raw.push_back(v);
  std::stable_sort(raw.begin(), raw.end(), [](const bigint& a,
                                              const bigint& b) {
    bigint aa = a < 0 ? bigint(-a) : a;
    bigint bb = b < 0 ? bigint(-b) : b;
    if (aa != bb)
      return aa < bb;
    return (a >= 0) > (b >= 0);  // nonnegative first on equal magnitude
  });
  std::vector<machine_value> out;
  out.reserve(raw.size());
  for (const bigint& v : raw)
    out.push_back(truncate_to(t, v));
  return out;
}

std::vector<axis> make_axes(const std::vector<cminus::var_decl>& vars,
                            const domain_config& d, bool nondet_ranges) {
  std::vector<axis> axes;
  axes.reserve(vars.size());
  for (const auto& v : vars) {
    const bigint& lo = v.type == ctype::u32
                           ? (nondet_ranges ? d.nondet_unsigned_lo
                                            : d.state_unsigned_lo)
                           : (nondet_ranges ? d.nondet_signed_lo
                                            : d.state_signed_lo);
    const bigint& hi = v.type == ctype::u32
                           ? (nondet_ranges ? d.nondet_unsigned_hi
                                            : d.state_unsigned_hi)
                           : (nondet_ranges ? d.nondet_signed_hi
                                            : d.state_signed_hi);
    axes.push_back({v.name, v.type, range_values(v.type, lo, hi)});
  }
  return axes;
}

// Odometer over the axes, rightmost (last-declared) variable fastest.
bool advance(std::vector<std::size_t>& idx, const std::vector<axis>& axes) {
  for (std::size_t i = axes.size(); i-- > 0;) {
    if (++idx[i] < axes[i].values.size())
      return true;
    idx[i] = 0;
  }
  return false;
}

cex_map lift_state(const state& s) {
  cex_map out;
  for (const auto& [name, v] : s)
    out[name] = lift(v);
  return out;
}

state tuple_state(const std::vector<axis>& axes,
                  const std::vector<std::size_t>& idx) {
  state s;
  for (std::size_t i = 0; i < axes.size(); ++i)
    s[axes[i].name] = axes[i].values[idx[i]];
  return s;
}

constexpr const char* budget_message = "state budget exhausted";

}  // namespace

const char* validation_kind_name(validation_kind k) {
  switch (k) {
    case validation_kind::valid: return "valid";
    case validation_kind::parse_failed: return "parse-failed";
    case validation_kind::unsupported: return "unsupported";
    case validation_kind::not_established: return "not-established";
    case validation_kind::not_inductive: return "not-inductive";
    case validation_kind::undefined_semantics: return "undefined-semantics";
    case validation_kind::unknown: return "unknown";
  }
  return "unknown";
}

const char* usefulness_kind_name(usefulness_kind k) {
  switch (k) {
    case usefulness_kind::useful: return "useful";
    case usefulness_kind::not_useful: return "not-useful";
    case usefulness_kind::unknown: return "unknown";
  }
  return "unknown";
}

validation_verdict check_established(const cminus::program& p,
                                     const expr_ptr& inv,
                                     const domain_config& d) {
  validation_verdict v;
  v.domain = d;
  std::vector<axis> axes = make_axes(p.nondet_variables(), d, true);
  std::vector<std::size_t> idx(axes.size(), 0);

  do {
    if (v.states_explored >= d.max_states) {
      v.kind = validation_kind::unknown;
      v.message = budget_message;
      return v;
    }
    ++v.states_explored;

    std::map<std::string, bigint> inputs;
    for (std::size_t i = 0; i < axes.size(); ++i)
      inputs[axes[i].name] = lift(axes[i].values[idx[i]]);

    cminus::prologue_result r = cminus::run_prologue(p, inputs);
    const auto* reached = std::get_if<cminus::prologue_reached>(&r);
    if (!reached)
      continue;  // early return or runtime fault: the loop is not reached

    acsl::eval_result e = acsl::eval(inv, reached->s);
    if (e.is_undefined()) {
      v.kind = validation_kind::undefined_semantics;
      v.message = e.reason;
      v.cex = lift_state(reached->s);
      return v;
    }
    if (e.is_false()) {
      v.kind = validation_kind::not_established;
      v.cex = std::move(inputs);
      return v;
    }
  } while (advance(idx, axes));

  v.kind = validation_kind::valid;
  return v;
}

validation_verdict check_inductive(const cminus::program& p,
                                   const expr_ptr& inv,
                                   const domain_config& d) {
  validation_verdict v;
  v.domain = d;
  std::vector<axis> axes = make_axes(p.scope(), d, false);
  std::vector<std::size_t> idx(axes.size(), 0);

  do {
    if (v.states_explored >= d.max_states) {
      v.kind = validation_kind::unknown;
      v.message = budget_message;
      return v;
    }
    ++v.states_explored;

    state s = tuple_state(axes, idx);
    acsl::eval_result pre = acsl::eval(inv, s);
    if (pre.is_undefined()) {
      v.kind = validation_kind::undefined_semantics;
      v.message = pre.reason;
      v.cex = lift_state(s);
      return v;
    }
    if (!pre.is_true())
      continue;

    cminus::cond_value c = cminus::eval_condition(p.task_loop.condition, s);
    if (!c.ok || !c.truth)
      continue;  // no step from here (faulting conditions cannot iterate)

    cminus::step_result step = cminus::step_body(p, s);
    const auto* ok = std::get_if<cminus::step_ok>(&step);
    if (!ok)
      continue;  // body faults abort execution; no successor to judge

    acsl::eval_result post = acsl::eval(inv, ok->s);
    if (post.is_undefined()) {
      v.kind = validation_kind::undefined_semantics;
      v.message = post.reason + " (after one iteration)";
      v.cex = lift_state(ok->s);
      return v;
    }
    if (post.is_false()) {
      v.kind = validation_kind::not_inductive;
      v.cex = lift_state(s);
      return v;
    }
  } while (advance(idx, axes));

  v.kind = validation_kind::valid;
  return v;
}

validation_verdict validate(const cminus::program& p,
                            const acsl::invariant_text& candidate,
                            const domain_config& d) {
  validation_verdict v;
  v.domain = d;
  if (!candidate.parsed_ok()) {
    const auto& f = candidate.failure;
    if (f && f->unsupported) {
      v.kind = validation_kind::unsupported;
      v.symbol = f->symbol;
      v.message = f->message;
    } else {
      v.kind = validation_kind::parse_failed;
      v.message = f ? f->message : "unparsable candidate";
    }
    return v;
  }

  std::set<std::string> unknown = acsl::free_vars(candidate.parsed);
  for (const auto& var : p.scope())
    unknown.erase(var.name);
  if (!unknown.empty()) {
    v.kind = validation_kind::unsupported;
    v.symbol = *unknown.begin();
    v.message = "identifier not in scope at the loop head";
    return v;
  }

  validation_verdict est = check_established(p, candidate.parsed, d);
  if (!est.ok())
    return est;
  validation_verdict ind = check_inductive(p, candidate.parsed, d);
  ind.states_explored += est.states_explored;
  return ind;
}

usefulness_verdict check_useful(const cminus::program& p, const expr_ptr& inv,
                                const domain_config& d) {
  usefulness_verdict v;
  v.domain = d;
  std::vector<axis> axes = make_axes(p.scope(), d, false);
  std::vector<std::size_t> idx(axes.size(), 0);

  do {
    if (v.states_explored >= d.max_states) {
      v.kind = usefulness_kind::unknown;
      v.message = budget_message;
      return v;
    }
    ++v.states_explored;

    state s = tuple_state(axes, idx);
    acsl::eval_result pre = acsl::eval(inv, s);
    if (pre.is_undefined()) {
      v.kind = usefulness_kind::unknown;
      v.message = "invariant undefined at " + format_state(s) + ": " +
                  pre.reason;
      return v;
    }
    if (!pre.is_true())
      continue;

    cminus::cond_value c = cminus::eval_condition(p.task_loop.condition, s);
    if (!c.ok || c.truth)
      continue;  // still looping (or crashed); not a loop-exit state

    cminus::cond_value a = cminus::eval_condition(p.post_assertion, s);
    if (!a.ok) {
      v.kind = usefulness_kind::unknown;
      v.message = "assertion faulted at " + format_state(s) + ": " + a.fault;
      return v;
    }
    if (!a.truth) {
      v.kind = usefulness_kind::not_useful;
      v.cex = lift_state(s);
      return v;
    }
  } while (advance(idx, axes));

  v.kind = usefulness_kind::useful;
  return v;
}

expr_ptr trivial_invariant() {
  static const expr_ptr one = mk_literal(1);
  return one;
}

}  // namespace invforge::oracle
