#include "invforge/machine.hpp"

#include <sstream>

namespace invforge {

const char* ctype_name(ctype t) {
  return t == ctype::u32 ? "unsigned int" : "int";
}

machine_value make_i32(std::int32_t v) {
  return machine_value{static_cast<std::uint32_t>(v), ctype::i32};
}

machine_value make_u32(std::uint32_t v) {
  return machine_value{v, ctype::u32};
}

bigint lift(machine_value v) {
  if (v.type == ctype::u32)
    return bigint(v.bits);
  return bigint(static_cast<std::int32_t>(v.bits));
}

machine_value truncate_to(ctype t, const bigint& v) {
  // Two's complement wraparound: keep the low 32 bits.
  static const bigint two32 = bigint(1) << 32;
  bigint m = v % two32;
  if (m < 0)
    m += two32;
  return machine_value{static_cast<std::uint32_t>(m), t};
}

std::string format_state(const state& s) {
  std::ostringstream out;
  bool first = true;
  for (const auto& [name, value] : s) {
    if (!first)
      out << ", ";
    first = false;
    out << name << "=" << lift(value);
  }
  return out.str();
}

}  // namespace invforge
