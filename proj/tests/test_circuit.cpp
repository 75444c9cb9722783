#include <doctest.h>

#include <random>

#include <ndpower/circuit.hpp>
#include <ndpower/errors.hpp>
#include <ndpower/limits.hpp>

#include "support/generators.hpp"

using namespace ndpower;

namespace
{

gate_base aon()
{
  return gate_base( { gate{ "AND", fun_and() }, gate{ "OR", fun_or() }, gate{ "NOT", fun_not() } } );
}

circuit x_and_y()
{
  gate_base base( { gate{ "AND", fun_and() } } );
  circuit c( base, 1u, 1u );
  const auto x = c.add_input( 1u );
  const auto y = c.add_nondet( 1u );
  c.set_output( c.add_gate( std::size_t( 0 ), { x, y } ) );
  return c;
}

} // namespace

TEST_CASE( "evaluation under both semantics" )
{
  const circuit c = x_and_y();
  CHECK( !eval_det( c, assignment{ 1u, 1u }, assignment{ 0u, 1u } ) );
  CHECK( eval_det( c, assignment{ 1u, 1u }, assignment{ 1u, 1u } ) );
  CHECK( eval_nondet( c, assignment{ 1u, 1u } ) );
  CHECK( !eval_nondet( c, assignment{ 0u, 1u } ) );

  const auto det = truth_table( c, semantics::deterministic );
  CHECK( det.arity() == 2u );
  CHECK( det == fun_and() );
  const auto ex = truth_table( c, semantics::nondeterministic );
  CHECK( ex.arity() == 1u );
  CHECK( ex == bool_fun::projection( 1u, 1u ) );
}

TEST_CASE( "nondeterministic fold over many witnesses" )
{
  /* OR of four nondeterministic inputs ANDed with x1: existential table
   * is x1 as soon as any y can be raised. */
  gate_base base( { gate{ "AND", fun_and() }, gate{ "OR", fun_or() } } );
  circuit c( base, 1u, 4u );
  const auto x = c.add_input( 1u );
  auto acc = c.add_nondet( 1u );
  for ( std::uint32_t j = 2u; j <= 4u; ++j )
  {
    acc = c.add_gate( std::size_t( 1 ), { acc, c.add_nondet( j ) } );
  }
  c.set_output( c.add_gate( std::size_t( 0 ), { x, acc } ) );
  CHECK( truth_table( c, semantics::nondeterministic ) == bool_fun::projection( 1u, 1u ) );
}

TEST_CASE( "truth table agrees with scalar evaluation on wide circuits" )
{
  std::mt19937_64 rng( 17u );
  const gate_base base = aon();
  for ( int round = 0; round < 5; ++round )
  {
    const ndtest::gen_options opt{ 7u, 2u, 20u, false };
    const circuit c = ndtest::random_circuit( rng, base, opt );
    const auto table = truth_table( c, semantics::deterministic );
    REQUIRE( table.arity() == 9u );
    for ( std::uint64_t idx = 0u; idx < 512u; idx += 7u )
    {
      const assignment x{ idx & 0x7fu, 7u };
      const assignment y{ idx >> 7u, 2u };
      CHECK( table.bit( idx ) == eval_det( c, x, y ) );
    }
    const auto ex = truth_table( c, semantics::nondeterministic );
    for ( std::uint64_t idx = 0u; idx < 128u; idx += 5u )
    {
      CHECK( ex.bit( idx ) == eval_nondet( c, assignment{ idx, 7u } ) );
    }
  }
}

TEST_CASE( "circuit text format round trips" )
{
  const std::string text = "inputs n=2 m=1\n"
                           "x1 = input 1\n"
                           "x2 = input 2\n"
                           "y = nondet 1\n"
                           "c0 = const 0\n"
                           "a = AND x1 y\n"
                           "b = OR a c0\n"
                           "r = NOT b\n"
                           "output r\n";
  const circuit c = parse_circuit( text, aon() );
  CHECK( c.num_inputs() == 2u );
  CHECK( c.num_nondet() == 1u );
  CHECK( c.num_gates() == 3u );
  CHECK( c.has_constants() );

  const circuit back = parse_circuit( serialize_circuit( c ), aon() );
  CHECK( back == c );
  CHECK( !find_counterexample( c, semantics::deterministic, back, semantics::deterministic ) );
}

TEST_CASE( "serializer invents names without colliding" )
{
  gate_base base( { gate{ "AND", fun_and() } } );
  circuit c( base, 2u, 0u );
  const auto a = c.add_input( 1u );
  const auto b = c.add_input( 2u );
  c.set_node_name( b, "t2" );
  c.set_output( c.add_gate( std::size_t( 0 ), { a, b } ) );
  const circuit back = parse_circuit( serialize_circuit( c ), base );
  CHECK( truth_table( back, semantics::deterministic ) == fun_and() );
}

TEST_CASE( "parse errors" )
{
  const gate_base base = aon();
  CHECK_THROWS_WITH_AS( parse_circuit( "x = input 1\n", base ), doctest::Contains( "line 1" ),
                        parse_error );
  CHECK_THROWS_AS( parse_circuit( "inputs n=1 m=0\nx = input 2\noutput x\n", base ), parse_error );
  CHECK_THROWS_AS( parse_circuit( "inputs n=1 m=0\nx = input 1\ny = AND x z\noutput y\n", base ),
                   parse_error );
  CHECK_THROWS_AS( parse_circuit( "inputs n=1 m=0\nx = input 1\nx = input 1\noutput x\n", base ),
                   parse_error );
  CHECK_THROWS_AS( parse_circuit( "inputs n=1 m=0\nx = input 1\ny = XYZ x\noutput y\n", base ),
                   parse_error );
  CHECK_THROWS_AS( parse_circuit( "inputs n=1 m=0\nx = input 1\ny = NOT x x\noutput y\n", base ),
                   parse_error );
  CHECK_THROWS_AS( parse_circuit( "inputs n=1 m=0\nx = input 1\n", base ), parse_error );
  CHECK_THROWS_WITH_AS(
      parse_circuit( "inputs n=1 m=0\nx = input 1\noutput x\ny = NOT x\n", base ),
      doctest::Contains( "after output" ), parse_error );
}

TEST_CASE( "builders enforce preconditions" )
{
  const gate_base base = aon();
  circuit c( base, 1u, 0u );
  CHECK_THROWS_AS( c.add_input( 2u ), precondition_error );
  CHECK_THROWS_AS( c.add_nondet( 1u ), precondition_error );
  const auto x = c.add_input( 1u );
  CHECK_THROWS_AS( c.add_gate( std::size_t( 0 ), { x } ), precondition_error );
  CHECK_THROWS_AS( c.add_gate( std::size_t( 9 ), { x, x } ), precondition_error );
  CHECK_THROWS_AS( c.add_gate( std::size_t( 0 ), { x, 77u } ), precondition_error );
  CHECK_THROWS_AS( c.set_output( 55u ), precondition_error );
  CHECK_THROWS_AS( c.output(), precondition_error );
  c.set_output( x );
  CHECK( c.output() == x );
}

TEST_CASE( "validation reports underivable constants and unreachable nodes" )
{
  gate_base base( { gate{ "AND", fun_and() } } );
  circuit c( base, 1u, 0u );
  const auto x = c.add_input( 1u );
  c.add_constant( true );
  c.set_output( x );
  const auto report = validate( c );
  CHECK( report.ok() );
  REQUIRE( report.warnings.size() == 2u );
  CHECK( report.warnings[0].find( "constant" ) != std::string::npos );
  CHECK( report.warnings[1].find( "unreachable" ) != std::string::npos );

  /* NAND derives both constants, so the same shape only warns about
   * reachability. */
  gate_base nand( { gate{ "NAND", fun_nand() } } );
  circuit c2( nand, 1u, 0u );
  const auto x2 = c2.add_input( 1u );
  c2.add_constant( true );
  c2.set_output( x2 );
  REQUIRE( validate( c2 ).warnings.size() == 1u );
  CHECK( validate( c2 ).warnings[0].find( "unreachable" ) != std::string::npos );
}

TEST_CASE( "counterexamples are the first differing assignment" )
{
  gate_base base( { gate{ "AND", fun_and() }, gate{ "OR", fun_or() } } );
  circuit a( base, 2u, 0u );
  a.set_output( a.add_gate( std::size_t( 0 ), { a.add_input( 1u ), a.add_input( 2u ) } ) );
  circuit b( base, 2u, 0u );
  b.set_output( b.add_gate( std::size_t( 1 ), { b.add_input( 1u ), b.add_input( 2u ) } ) );
  const auto cex = find_counterexample( a, semantics::deterministic, b, semantics::deterministic );
  REQUIRE( cex.has_value() );
  CHECK( cex->bits == 1u );
  CHECK( cex->width == 2u );

  /* deterministic table of a has arity 2, existential table of a2 has
   * arity 1: mismatched domains are rejected. */
  circuit a2( base, 1u, 1u );
  a2.set_output( a2.add_gate( std::size_t( 0 ), { a2.add_input( 1u ), a2.add_nondet( 1u ) } ) );
  CHECK_THROWS_AS(
      find_counterexample( a, semantics::deterministic, a2, semantics::nondeterministic ).has_value(),
      precondition_error );
}

TEST_CASE( "separating input search over circuits" )
{
  const circuit c = x_and_y();
  CHECK( find_separating_input( c, true ) == 1u );
  gate_base base( { gate{ "OR", fun_or() } } );
  circuit d( base, 2u, 0u );
  d.set_output( d.add_gate( std::size_t( 0 ), { d.add_input( 1u ), d.add_input( 2u ) } ) );
  CHECK( find_separating_input( d, true ) == std::nullopt );
  CHECK( find_separating_input( d, false ) == 1u );
}

TEST_CASE( "exhaustive bound guards table construction" )
{
  const auto saved = limits::exhaustive_input_bound();
  limits::set_exhaustive_input_bound( 3u );
  gate_base base( { gate{ "AND", fun_and() } } );
  circuit c( base, 4u, 0u );
  auto acc = c.add_input( 1u );
  for ( std::uint32_t v = 2u; v <= 4u; ++v )
  {
    acc = c.add_gate( std::size_t( 0 ), { acc, c.add_input( v ) } );
  }
  c.set_output( acc );
  CHECK_THROWS_AS( truth_table( c, semantics::deterministic ), precondition_error );
  limits::set_exhaustive_input_bound( saved );
  CHECK( truth_table( c, semantics::deterministic ).arity() == 4u );
}
