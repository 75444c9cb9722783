#include "ndpower/classify.hpp"

#include <algorithm>

#include "ndpower/errors.hpp"

namespace ndpower
{

namespace
{

bool all_gates( const gate_base& base, bool ( *predicate )( const bool_fun& ) )
{
  return std::all_of( base.gates().begin(), base.gates().end(),
                      [predicate]( const gate& g ) { return predicate( g.fun ); } );
}

} // namespace

bool is_complete( const gate_base& base )
{
  return !all_gates( base, preserves_zero ) && !all_gates( base, preserves_one ) &&
         !all_gates( base, is_monotone ) && !all_gates( base, is_affine ) &&
         !all_gates( base, is_self_dual );
}

power_classification classify( const gate_base& base )
{
  power_classification result;
  result.complete = is_complete( base );

  const auto unary = closure( base, 1u, false );
  result.has_both_constants =
      unary.contains( bool_fun::constant( 1u, false ) ) && unary.contains( bool_fun::constant( 1u, true ) );

  if ( all_gates( base, is_monotone ) )
  {
    result.verdict = power_verdict::lacks;
    result.reason = lacks_reason::monotone;
    return result;
  }
  if ( all_gates( base, is_affine ) )
  {
    result.verdict = power_verdict::lacks;
    result.reason = lacks_reason::linear;
    return result;
  }
  if ( all_gates( base, is_self_dual ) )
  {
    result.verdict = power_verdict::lacks;
    result.reason = lacks_reason::self_dual;
    return result;
  }

  result.verdict = power_verdict::full;
  const std::vector<bool_fun> gadgets{ fun_and_or_not(), fun_or_and_not() };
  const auto search = closure_until( base, 3u, false, gadgets );
  for ( std::size_t g = 0u; g < gadgets.size(); ++g )
  {
    if ( const auto* m = search.member( gadgets[g] ) )
    {
      result.gadget = g == 0u ? full_gadget::and_or_not : full_gadget::or_and_not;
      result.witness = m->witness;
      return result;
    }
  }
  throw oracle_error( "full-power base derives neither ternary gadget at arity 3" );
}

} // namespace ndpower
