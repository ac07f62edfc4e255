#ifndef INVFORGE_ERRORS_HPP
#define INVFORGE_ERRORS_HPP

#include <set>
#include <stdexcept>
#include <string>

namespace invforge {

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Source text could not be parsed at all.
struct parse_error : error {
  parse_error(int line_, std::string msg)
      : error("parse error at line " + std::to_string(line_) + ": " + msg),
        line(line_),
        message(std::move(msg)) {}
  int line;
  std::string message;
};

/// Source text is well-formed C but outside the supported subset.
struct unsupported_construct : error {
  unsupported_construct(std::string construct_, int line_)
      : error("unsupported construct at line " + std::to_string(line_) + ": " +
              construct_),
        construct(std::move(construct_)),
        line(line_) {}
  std::string construct;
  int line;
};

/// An invariant references identifiers not in scope at the loop head.
struct scope_error : error {
  explicit scope_error(std::set<std::string> vars_)
      : error(build_message(vars_)), vars(std::move(vars_)) {}
  std::set<std::string> vars;

 private:
  static std::string build_message(const std::set<std::string>& vars) {
    std::string msg = "identifiers out of scope:";
    for (const auto& v : vars)
      msg += " " + v;
    return msg;
  }
};

/// Masking a source that already carries the placeholder line.
struct already_masked_error : error {
  already_masked_error() : error("source already contains the mask placeholder") {}
};

/// Transport or endpoint failure while sampling a generator.
struct generation_error : error {
  generation_error(std::string what_, int status_ = 0)
      : error(std::move(what_)), status(status_) {}
  int status;
};

}  // namespace invforge

#endif
