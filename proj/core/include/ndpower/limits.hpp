#pragma once

#include <cstdint>

namespace ndpower::limits
{

/* Absolute representation cap on any truth table: 2^26 bits = 8 MiB. */
inline constexpr std::uint32_t hard_max_arity = 26u;

/*! \brief Maximum arity of a gate function in a base (default 6).
 *
 * Closure computation and witness search are double-exponential in gate
 * arity; base files and programmatic base construction reject gates above
 * this bound.
 */
std::uint32_t max_gate_arity();
void set_max_gate_arity( std::uint32_t value );

/*! \brief Maximum total inputs (n + m) for exhaustive oracle operations
 * (default 20). Truth tables, equivalence checks and existential
 * evaluation enumerate 2^(n+m) assignments and refuse anything larger.
 */
std::uint32_t exhaustive_input_bound();
void set_exhaustive_input_bound( std::uint32_t value );

/* Largest arity a bool_fun may carry under the current configuration. */
std::uint32_t max_fun_arity();

} // namespace ndpower::limits
