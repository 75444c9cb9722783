#include <benchmark/benchmark.h>

#include <ndpower/classify.hpp>
#include <ndpower/transform.hpp>

using namespace ndpower;

namespace
{

circuit wide_chain( std::uint32_t n, std::uint32_t m )
{
  gate_base base( { gate{ "AND", fun_and() }, gate{ "OR", fun_or() } } );
  circuit c( base, n, m );
  std::uint32_t acc = c.add_input( 1u );
  for ( std::uint32_t v = 2u; v <= n; ++v )
  {
    acc = c.add_gate( v % 2u == 0u ? "OR" : "AND", { acc, c.add_input( v ) } );
  }
  for ( std::uint32_t j = 1u; j <= m; ++j )
  {
    acc = c.add_gate( j % 2u == 0u ? "AND" : "OR", { acc, c.add_nondet( j ) } );
  }
  c.set_output( acc );
  return c;
}

void BM_truth_table_sixteen_vars( benchmark::State& state )
{
  const circuit c = wide_chain( 12u, 4u );
  for ( auto _ : state )
  {
    benchmark::DoNotOptimize( truth_table( c, semantics::deterministic ) );
  }
}
BENCHMARK( BM_truth_table_sixteen_vars );

void BM_exists_table_sixteen_vars( benchmark::State& state )
{
  const circuit c = wide_chain( 12u, 4u );
  for ( auto _ : state )
  {
    benchmark::DoNotOptimize( truth_table( c, semantics::nondeterministic ) );
  }
}
BENCHMARK( BM_exists_table_sixteen_vars );

void BM_closure_nand_arity3( benchmark::State& state )
{
  gate_base base( { gate{ "NAND", fun_nand() } } );
  for ( auto _ : state )
  {
    benchmark::DoNotOptimize( closure( base, 3u, false ) );
  }
}
BENCHMARK( BM_closure_nand_arity3 );

void BM_classify_single_gadget( benchmark::State& state )
{
  gate_base base( { gate{ "G", fun_and_or_not() } } );
  for ( auto _ : state )
  {
    benchmark::DoNotOptimize( classify( base ) );
  }
}
BENCHMARK( BM_classify_single_gadget );

void BM_not_eliminate_chain( benchmark::State& state )
{
  gate_base base( { gate{ "AND", fun_and() }, gate{ "OR", fun_or() },
                    gate{ "NOT", fun_not() } } );
  circuit c( base, 8u, 0u );
  std::uint32_t acc = c.add_input( 1u );
  for ( std::uint32_t v = 2u; v <= 8u; ++v )
  {
    const auto neg = c.add_gate( "NOT", { c.add_input( v ) } );
    const auto inner = c.add_gate( "OR", { neg, acc } );
    acc = c.add_gate( "AND", { acc, inner } );
  }
  c.set_output( acc );
  for ( auto _ : state )
  {
    benchmark::DoNotOptimize( not_eliminate_conj( c ) );
  }
}
BENCHMARK( BM_not_eliminate_chain );

} // namespace

BENCHMARK_MAIN();
