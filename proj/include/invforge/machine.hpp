#ifndef INVFORGE_MACHINE_HPP
#define INVFORGE_MACHINE_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <map>
#include <string>

namespace invforge {

using bigint = boost::multiprecision::cpp_int;

/// The two machine integer types of the supported C subset.
enum class ctype { i32, u32 };

const char* ctype_name(ctype t);

/// A 32-bit machine integer tagged with its declared C type.
/// Arithmetic on machine values wraps modulo 2^32; the tag decides how the
/// bit pattern is read (two's complement vs. plain binary).
struct machine_value {
  std::uint32_t bits = 0;
  ctype type = ctype::i32;

  friend bool operator==(const machine_value&, const machine_value&) = default;
};

machine_value make_i32(std::int32_t v);
machine_value make_u32(std::uint32_t v);

/// Lifts a machine value to the mathematical integer it denotes:
/// u32 -> [0, 2^32-1], i32 -> [-2^31, 2^31-1].
bigint lift(machine_value v);

/// Truncates a mathematical integer back into a machine value of the given
/// type (two's complement wraparound).
machine_value truncate_to(ctype t, const bigint& v);

/// Execution state: one machine value per declared variable.
/// Ordered map so iteration (printing, serialization) is deterministic.
using state = std::map<std::string, machine_value>;

std::string format_state(const state& s);

}  // namespace invforge

#endif
