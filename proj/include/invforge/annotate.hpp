#ifndef INVFORGE_ANNOTATE_HPP
#define INVFORGE_ANNOTATE_HPP

#include "invforge/cminus.hpp"
#include "invforge/errors.hpp"
#include "invforge/expr.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace invforge::annotate {

/// Placeholder spellings: [mask] in working copies, [invariant] in prompts.
inline constexpr std::string_view mask_token = "[mask]";
inline constexpr std::string_view prompt_token = "[invariant]";

struct strip_result {
  std::string source;                // text with annotation lines removed
  std::vector<std::string> removed;  // invariant bodies, in file order
};

/// Removes every `//@ loop invariant E;` line (whole-line annotations only)
/// and reports the removed invariant texts.
strip_result strip_annotations(std::string_view source);

bool has_mask(std::string_view source);

/// Inserts `//@ loop invariant [mask];` directly above the given 1-based
/// line, copying that line's indentation. Throws already_masked_error when
/// the source already contains the placeholder.
std::string insert_mask(std::string_view source, int loop_header_line);

/// Prompt rendering of a masked source: [mask] becomes [invariant].
std::string render_for_prompt(std::string_view masked);

/// Replaces the placeholder with the canonical spelling of inv. Every free
/// variable of inv must be declared in p's loop-head scope; otherwise
/// scope_error lists the unknown identifiers. Throws error when masked has
/// no placeholder line.
std::string instantiate(std::string_view masked, const cminus::program& p,
                        const expr_ptr& inv);

}  // namespace invforge::annotate

#endif
