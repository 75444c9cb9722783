#include <doctest.h>

#include <algorithm>
#include <set>
#include <string>

#include <ndpower/closure.hpp>
#include <ndpower/errors.hpp>
#include <ndpower/limits.hpp>

using namespace ndpower;

namespace
{

std::set<std::string> member_tables( const clone_closure& cl, std::uint32_t arity )
{
  std::set<std::string> out;
  for ( const auto& m : cl.members( arity ) )
  {
    out.insert( m.fun.to_bits() );
  }
  return out;
}

/* every witness must be a constant-count-respecting circuit computing its
 * advertised table */
void check_witnesses( const clone_closure& cl, std::uint32_t arity )
{
  for ( const auto& m : cl.members( arity ) )
  {
    CHECK( truth_table( m.witness, semantics::deterministic ) == m.fun );
    CHECK( m.witness.num_gates() == m.cost );
    if ( !cl.constants_allowed() )
    {
      CHECK( !m.witness.has_constants() );
    }
  }
}

} // namespace

TEST_CASE( "closure of a single AND gate" )
{
  gate_base base( { gate{ "AND", fun_and() } } );
  const auto cl = closure( base, 2u, false );
  CHECK( cl.reached_fixpoint() );

  CHECK( member_tables( cl, 0u ).empty() );
  CHECK( member_tables( cl, 1u ) == std::set<std::string>{ "01" } );
  CHECK( member_tables( cl, 2u ) == std::set<std::string>{ "0001", "0011", "0101" } );

  CHECK( cl.member( bool_fun::projection( 2u, 1u ) )->cost == 0u );
  CHECK( cl.member( fun_and() )->cost == 1u );
  CHECK( cl.member( fun_or() ) == nullptr );
  CHECK( cl.contains( fun_and() ) );
  CHECK( !cl.contains( fun_or() ) );
  check_witnesses( cl, 2u );
}

TEST_CASE( "a NAND gate generates everything" )
{
  gate_base base( { gate{ "NAND", fun_nand() } } );
  const auto cl = closure( base, 2u, false );
  CHECK( cl.members( 2u ).size() == 16u );
  CHECK( cl.members( 1u ).size() == 4u );
  /* without constant leaves nothing is expressible over zero variables */
  CHECK( cl.members( 0u ).empty() );
  CHECK( cl.member( fun_not() )->cost == 1u );
  CHECK( cl.member( fun_and() )->cost == 2u );
  check_witnesses( cl, 2u );
  check_witnesses( cl, 1u );
}

TEST_CASE( "self-dual generator reaches exactly the self-dual functions" )
{
  gate_base base( { gate{ "D", fun_self_dual_generator() } } );
  const auto cl = closure( base, 3u, false );

  /* arity 2: projections and their negations only */
  CHECK( member_tables( cl, 2u ) ==
         std::set<std::string>{ "0011", "0101", "1010", "1100" } );

  const auto& members3 = cl.members( 3u );
  CHECK( members3.size() == 16u );
  for ( const auto& m : members3 )
  {
    CHECK( is_self_dual( m.fun ) );
  }
  check_witnesses( cl, 3u );
}

TEST_CASE( "monotone generators stay monotone" )
{
  gate_base base( { gate{ "AND", fun_and() }, gate{ "OR", fun_or() },
                    gate{ "ONE", bool_fun::constant( 0u, true ) },
                    gate{ "ZERO", bool_fun::constant( 0u, false ) } } );
  const auto cl = closure( base, 2u, false );
  CHECK( cl.members( 2u ).size() == 6u );
  for ( const auto& m : cl.members( 2u ) )
  {
    CHECK( is_monotone( m.fun ) );
  }
}

TEST_CASE( "allowing constant leaves changes the reachable set" )
{
  gate_base base( { gate{ "G", fun_and_or_not() } } );
  const auto with = closure( base, 2u, true );
  CHECK( with.constants_allowed() );
  CHECK( with.members( 2u ).size() == 16u );

  /* without constants the gadget still negates (x AND (x OR NOT x)) is x,
   * but x AND (y OR NOT y)... arity-2 reachable set is strictly smaller */
  const auto without = closure( base, 2u, false );
  CHECK( without.members( 2u ).size() < 16u );

  gate_base lin( { gate{ "XOR", fun_xor() } } );
  const auto cl = closure( lin, 1u, false );
  CHECK( member_tables( cl, 1u ) == std::set<std::string>{ "01", "00" } );
  CHECK( cl.member( bool_fun::constant( 1u, false ) )->cost == 1u );
}

TEST_CASE( "conversion constant is the worst witness cost at the bound arity" )
{
  gate_base base( { gate{ "NAND", fun_nand() } } );
  const auto cl = closure( base, 2u, false );
  const auto k = cl.conversion_constant();
  CHECK( k >= 1u );
  std::uint32_t worst = 0u;
  for ( const auto& m : cl.members( 2u ) )
  {
    CHECK( m.cost <= k );
    worst = std::max( worst, m.cost );
  }
  CHECK( worst == k );
}

TEST_CASE( "targeted closure stops early" )
{
  gate_base base( { gate{ "NAND", fun_nand() } } );
  const auto cl = closure_until( base, 2u, false, { fun_not() } );
  CHECK( cl.contains( fun_not() ) );
  CHECK( !cl.reached_fixpoint() );
  CHECK( cl.member( fun_not() )->cost == 1u );

  /* unreachable target: runs to the fixpoint and reports absence */
  gate_base mono( { gate{ "AND", fun_and() } } );
  const auto cl2 = closure_until( mono, 2u, false, { fun_not() } );
  CHECK( !cl2.contains( fun_not() ) );
  CHECK( cl2.reached_fixpoint() );
}

TEST_CASE( "closure preconditions" )
{
  gate_base base( { gate{ "D", fun_self_dual_generator() } } );
  CHECK_THROWS_AS( closure( base, limits::max_gate_arity() + 1u, false ), precondition_error );

  /* an arity bound below the widest gate is legal: the gate is applied to
   * lower-arity members */
  const auto low = closure( base, 2u, false );
  CHECK( low.members( 2u ).size() == 4u );

  const auto cl = closure( base, 3u, false );
  CHECK_THROWS_AS( cl.members( 4u ), precondition_error );
  CHECK_THROWS_AS( cl.contains( bool_fun::from_bits( 4u, "0000000000000001" ) ), precondition_error );
}
