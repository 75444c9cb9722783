#pragma once

#include <cassert>
#include <cstdint>
#include <vector>

#include "ndpower/bool_fun.hpp"
#include "ndpower/circuit.hpp"

namespace ndpower::detail
{

/* Bit-parallel values of one signal over all 2^vars assignments. */
using sim_table = std::vector<std::uint64_t>;

inline std::uint64_t sim_words( std::uint32_t vars )
{
  return vars < 6u ? 1u : ( std::uint64_t( 1 ) << ( vars - 6u ) );
}

inline std::uint64_t sim_tail_mask( std::uint32_t vars )
{
  return vars >= 6u ? ~std::uint64_t( 0 ) : ( ( std::uint64_t( 1 ) << ( std::uint64_t( 1 ) << vars ) ) - 1u );
}

inline sim_table sim_constant( std::uint32_t vars, bool value )
{
  sim_table t( sim_words( vars ), value ? ~std::uint64_t( 0 ) : 0u );
  if ( value )
  {
    t.back() &= sim_tail_mask( vars );
  }
  return t;
}

inline sim_table sim_projection( std::uint32_t vars, std::uint32_t var0 )
{
  static constexpr std::uint64_t low_masks[] = {
      0xaaaaaaaaaaaaaaaaull, 0xccccccccccccccccull, 0xf0f0f0f0f0f0f0f0ull,
      0xff00ff00ff00ff00ull, 0xffff0000ffff0000ull, 0xffffffff00000000ull };
  sim_table t( sim_words( vars ) );
  if ( var0 < 6u )
  {
    for ( auto& w : t )
    {
      w = low_masks[var0];
    }
  }
  else
  {
    for ( std::uint64_t w = 0u; w < t.size(); ++w )
    {
      t[w] = ( ( w >> ( var0 - 6u ) ) & 1u ) ? ~std::uint64_t( 0 ) : 0u;
    }
  }
  t.back() &= sim_tail_mask( vars );
  return t;
}

/* Applies a gate function to operand signals; gate arity is at most 6,
 * so the set of 1-rows of its table fits a scan of one word. */
inline sim_table sim_gate( const bool_fun& fun, const std::vector<const sim_table*>& ops, std::uint32_t vars )
{
  assert( fun.arity() == ops.size() );
  std::vector<std::uint32_t> on_rows;
  for ( std::uint64_t row = 0u; row < fun.table_size(); ++row )
  {
    if ( fun.bit( row ) )
    {
      on_rows.push_back( static_cast<std::uint32_t>( row ) );
    }
  }
  sim_table out( sim_words( vars ), 0u );
  for ( std::uint64_t w = 0u; w < out.size(); ++w )
  {
    std::uint64_t acc = 0u;
    for ( const std::uint32_t row : on_rows )
    {
      std::uint64_t term = ~std::uint64_t( 0 );
      for ( std::size_t j = 0u; j < ops.size(); ++j )
      {
        const std::uint64_t v = ( *ops[j] )[w];
        term &= ( ( row >> j ) & 1u ) ? v : ~v;
      }
      acc |= term;
    }
    out[w] = acc;
  }
  out.back() &= sim_tail_mask( vars );
  return out;
}

/* Copies `sub` (m = 0, same base as dst) into dst; sub's input variable v
 * is wired to dst node input_map[v-1]. Returns the dst node computing
 * sub's output. Node names of sub are dropped. */
std::uint32_t splice( circuit& dst, const circuit& sub, const std::vector<std::uint32_t>& input_map );

} // namespace ndpower::detail
