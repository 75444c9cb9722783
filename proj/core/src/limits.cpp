#include "ndpower/limits.hpp"

#include <algorithm>
#include <atomic>

#include "ndpower/errors.hpp"

namespace ndpower::limits
{

namespace
{
std::atomic<std::uint32_t> gate_arity{ 6u };
std::atomic<std::uint32_t> input_bound{ 20u };
} // namespace

std::uint32_t max_gate_arity()
{
  return gate_arity.load( std::memory_order_relaxed );
}

void set_max_gate_arity( std::uint32_t value )
{
  if ( value > hard_max_arity )
  {
    throw precondition_error( "max_gate_arity exceeds hard cap of " + std::to_string( hard_max_arity ) );
  }
  gate_arity.store( value, std::memory_order_relaxed );
}

std::uint32_t exhaustive_input_bound()
{
  return input_bound.load( std::memory_order_relaxed );
}

void set_exhaustive_input_bound( std::uint32_t value )
{
  if ( value > hard_max_arity )
  {
    throw precondition_error( "exhaustive_input_bound exceeds hard cap of " + std::to_string( hard_max_arity ) );
  }
  input_bound.store( value, std::memory_order_relaxed );
}

std::uint32_t max_fun_arity()
{
  return std::max( max_gate_arity(), exhaustive_input_bound() );
}

} // namespace ndpower::limits
