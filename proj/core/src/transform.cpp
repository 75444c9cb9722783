#include "ndpower/transform.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <optional>
#include <unordered_map>

#include "ndpower/errors.hpp"
#include "ndpower/limits.hpp"
#include "sim.hpp"

namespace ndpower
{

namespace
{

bool within_bound( std::uint32_t vars )
{
  return vars <= limits::exhaustive_input_bound();
}

void require_gates( const gate_base& base, bool ( *predicate )( const bool_fun& ), const char* what )
{
  for ( const auto& g : base.gates() )
  {
    if ( !predicate( g.fun ) )
    {
      throw precondition_error( std::string( what ) + ": gate '" + g.name + "' violates the base class" );
    }
  }
}

void check_equal_tables( const bool_fun& expect, const circuit& out, const char* what )
{
  if ( !( truth_table( out, semantics::deterministic ) == expect ) )
  {
    throw oracle_error( std::string( what ) + ": output table differs from the expected function" );
  }
}

/* Shared walk for the transforms that keep the node structure: copies
 * every node, letting `leaf` decide what replaces input/nondet/constant
 * nodes. Node names survive the copy. */
template<typename LeafFn>
circuit copy_with_leaves( const circuit& c, gate_base target, std::uint32_t n, std::uint32_t m, LeafFn&& leaf )
{
  circuit out( std::move( target ), n, m );
  std::vector<std::uint32_t> mapped( c.nodes().size(), 0u );
  for ( std::size_t id = 0u; id < c.nodes().size(); ++id )
  {
    const auto& node = c.nodes()[id];
    if ( node.kind == circuit::node_kind::gate )
    {
      std::vector<std::uint32_t> ops;
      ops.reserve( node.operands.size() );
      for ( const auto op : node.operands )
      {
        ops.push_back( mapped[op] );
      }
      mapped[id] = out.add_gate( node.index, std::move( ops ) );
    }
    else
    {
      mapped[id] = leaf( out, node );
    }
    if ( !node.name.empty() )
    {
      out.set_node_name( mapped[id], node.name );
    }
  }
  out.set_output( mapped[c.output()] );
  return out;
}

} // namespace

affine_form extract_affine( const circuit& c )
{
  require_gates( c.base(), is_affine, "extract_affine" );
  const std::uint32_t n = c.num_inputs();
  const std::uint32_t m = c.num_nondet();

  affine_form form;
  form.c = eval_det( c, assignment{ 0u, n }, assignment{ 0u, m } );
  form.a.resize( n );
  form.b.resize( m );
  std::uint64_t a_mask = 0u;
  std::uint64_t b_mask = 0u;
  for ( std::uint32_t i = 0u; i < n; ++i )
  {
    form.a[i] = eval_det( c, assignment{ std::uint64_t( 1 ) << i, n }, assignment{ 0u, m } ) != form.c;
    a_mask |= form.a[i] ? std::uint64_t( 1 ) << i : 0u;
  }
  for ( std::uint32_t j = 0u; j < m; ++j )
  {
    form.b[j] = eval_det( c, assignment{ 0u, n }, assignment{ std::uint64_t( 1 ) << j, m } ) != form.c;
    b_mask |= form.b[j] ? std::uint64_t( 1 ) << j : 0u;
  }

  const bool_fun table = truth_table( c, semantics::deterministic );
  for ( std::uint64_t idx = 0u; idx < table.table_size(); ++idx )
  {
    const bool expect =
        form.c ^ ( std::popcount( idx & a_mask ) & 1 ) ^ ( std::popcount( ( idx >> n ) & b_mask ) & 1 );
    if ( table.bit( idx ) != expect )
    {
      throw oracle_error( "extract_affine: circuit is not affine although every gate is; "
                          "the precondition was violated" );
    }
  }
  return form;
}

circuit convert_base( const circuit& c, const clone_closure& target )
{
  std::vector<const clone_member*> rewrites( c.base().size(), nullptr );
  std::uint32_t max_witness = 0u;
  for ( std::size_t i = 0u; i < c.base().size(); ++i )
  {
    const auto& g = c.base()[i];
    if ( g.fun.arity() > target.arity_bound() )
    {
      throw precondition_error( "convert_base: gate '" + g.name + "' has arity " +
                                std::to_string( g.fun.arity() ) + " but the closure bound is " +
                                std::to_string( target.arity_bound() ) );
    }
    rewrites[i] = target.member( g.fun );
    if ( rewrites[i] == nullptr )
    {
      throw precondition_error( "convert_base: gate '" + g.name + "' (table " + g.fun.to_bits() +
                                ") is not a member of the target closure" );
    }
    max_witness = std::max( max_witness, rewrites[i]->cost );
  }

  circuit out( target.base(), c.num_inputs(), c.num_nondet() );
  std::vector<std::uint32_t> mapped( c.nodes().size(), 0u );
  for ( std::size_t id = 0u; id < c.nodes().size(); ++id )
  {
    const auto& node = c.nodes()[id];
    switch ( node.kind )
    {
      case circuit::node_kind::input:
        mapped[id] = out.add_input( node.index );
        break;
      case circuit::node_kind::nondet:
        mapped[id] = out.add_nondet( node.index );
        break;
      case circuit::node_kind::constant:
        mapped[id] = out.add_constant( node.value );
        break;
      case circuit::node_kind::gate:
      {
        std::vector<std::uint32_t> input_map;
        input_map.reserve( node.operands.size() );
        for ( const auto op : node.operands )
        {
          input_map.push_back( mapped[op] );
        }
        mapped[id] = detail::splice( out, rewrites[node.index]->witness, input_map );
        break;
      }
    }
    if ( !node.name.empty() && node.kind != circuit::node_kind::gate )
    {
      out.set_node_name( mapped[id], node.name );
    }
  }
  out.set_output( mapped[c.output()] );

  if ( out.num_gates() > std::uint64_t( max_witness ) * c.num_gates() )
  {
    throw oracle_error( "convert_base: size bound violated" );
  }
  if ( within_bound( c.num_inputs() + c.num_nondet() ) )
  {
    check_equal_tables( truth_table( c, semantics::deterministic ), out, "convert_base" );
  }
  return out;
}

circuit determinize_monotone( const circuit& c )
{
  require_gates( c.base(), is_monotone, "determinize_monotone" );

  circuit out = copy_with_leaves( c, c.base(), c.num_inputs(), 0u,
                                  []( circuit& dst, const circuit::node& node ) {
                                    switch ( node.kind )
                                    {
                                      case circuit::node_kind::input:
                                        return dst.add_input( node.index );
                                      case circuit::node_kind::nondet:
                                        return dst.add_constant( true );
                                      default:
                                        return dst.add_constant( node.value );
                                    }
                                  } );

  assert( out.num_gates() == c.num_gates() );
  if ( within_bound( c.num_inputs() + c.num_nondet() ) )
  {
    check_equal_tables( truth_table( c, semantics::nondeterministic ), out, "determinize_monotone" );
  }
  return out;
}

circuit determinize_self_dual( const circuit& c )
{
  require_gates( c.base(), is_self_dual, "determinize_self_dual" );
  if ( c.num_inputs() < 1u )
  {
    throw precondition_error( "determinize_self_dual: n >= 1 required" );
  }
  if ( c.has_constants() )
  {
    /* A constant node is not a self-dual gate; substituting x_1 for y
     * around constants produces wrong circuits, so they are rejected
     * rather than silently mis-handled. */
    throw precondition_error( "determinize_self_dual: constant nodes are not allowed" );
  }

  const bool_fun exist = truth_table( c, semantics::nondeterministic );
  if ( !is_self_dual( exist ) )
  {
    const std::uint64_t all = exist.table_size() - 1u;
    for ( std::uint64_t x = 0u; x < exist.table_size(); ++x )
    {
      if ( exist.bit( x ) == exist.bit( all - x ) )
      {
        throw not_self_dual_error( x, c.num_inputs(),
                                   "determinize_self_dual: existential table is not self-dual, f(x) = "
                                   "f(complement of x) for x = " +
                                       assignment{ x, c.num_inputs() }.to_string() );
      }
    }
  }

  circuit out = copy_with_leaves( c, c.base(), c.num_inputs(), 0u,
                                  []( circuit& dst, const circuit::node& node ) {
                                    return node.kind == circuit::node_kind::input
                                               ? dst.add_input( node.index )
                                               : dst.add_input( 1u );
                                  } );

  assert( out.num_gates() == c.num_gates() );
  check_equal_tables( exist, out, "determinize_self_dual" );
  return out;
}

namespace
{

/* Witness costs for the chain planner; absent members count as
 * unrealizable. */
struct chain_plan
{
  std::uint32_t xnor_combines;
  bool trailing_not;
};

std::optional<chain_plan> plan_chain( std::uint32_t k, bool constant, const clone_member* xor_w,
                                      const clone_member* xnor_w, const clone_member* not_w )
{
  constexpr std::uint32_t inf = ~std::uint32_t( 0 );
  std::optional<chain_plan> best;
  std::uint32_t best_cost = inf;
  for ( const bool trailing : { false, true } )
  {
    if ( trailing && not_w == nullptr )
    {
      continue;
    }
    for ( std::uint32_t j = 0u; j + 1u <= k; ++j )
    {
      if ( ( ( j & 1u ) != 0u ) != ( constant ^ trailing ) )
      {
        continue;
      }
      if ( j > 0u && xnor_w == nullptr )
      {
        continue;
      }
      if ( k - 1u - j > 0u && xor_w == nullptr )
      {
        continue;
      }
      const std::uint32_t cost = j * ( xnor_w ? xnor_w->cost : 0u ) +
                                 ( k - 1u - j ) * ( xor_w ? xor_w->cost : 0u ) +
                                 ( trailing ? not_w->cost : 0u );
      if ( cost < best_cost )
      {
        best_cost = cost;
        best = chain_plan{ j, trailing };
      }
    }
  }
  return best;
}

/* True when some gate of `w` reads an input node, or the output is one;
 * only then does a splice of `w` need real input operands. */
bool witness_reads_inputs( const circuit& w )
{
  for ( const auto& nd : w.nodes() )
  {
    if ( nd.kind != circuit::node_kind::gate )
    {
      continue;
    }
    for ( const auto op : nd.operands )
    {
      if ( w.nodes()[op].kind == circuit::node_kind::input )
      {
        return true;
      }
    }
  }
  return w.nodes()[w.output()].kind == circuit::node_kind::input;
}

/* Builds a circuit node computing a constant over the target base,
 * preferring a derived realization and falling back to a Const node. */
std::uint32_t realize_constant( circuit& out, const gate_base& target, bool value )
{
  if ( out.num_inputs() >= 1u )
  {
    const auto cl = closure( target, 1u, false );
    if ( const auto* m = cl.member( bool_fun::constant( 1u, value ) ) )
    {
      const std::uint32_t x1 = witness_reads_inputs( m->witness ) ? out.add_input( 1u ) : 0u;
      return detail::splice( out, m->witness, { x1 } );
    }
  }
  else
  {
    const auto cl = closure( target, 0u, false );
    if ( const auto* m = cl.member( bool_fun::constant( 0u, value ) ) )
    {
      return detail::splice( out, m->witness, {} );
    }
  }
  return out.add_constant( value );
}

} // namespace

circuit determinize_linear( const circuit& c, const gate_base& target_base )
{
  require_gates( target_base, is_affine, "determinize_linear (target base)" );
  const affine_form form = extract_affine( c );
  const std::uint32_t n = c.num_inputs();

  circuit out( target_base, n, 0u );

  std::vector<std::uint32_t> terms;
  for ( std::uint32_t i = 0u; i < n; ++i )
  {
    if ( form.a[i] )
    {
      terms.push_back( i + 1u );
    }
  }
  const bool live_nondet = std::find( form.b.begin(), form.b.end(), true ) != form.b.end();

  if ( live_nondet || terms.empty() )
  {
    /* A live y coefficient lets the existential choice hit both parities,
     * so the function collapses to constant 1. */
    out.set_output( realize_constant( out, target_base, live_nondet ? true : form.c ) );
  }
  else
  {
    const auto cl2 = closure( target_base, 2u, false );
    const auto cl1 = closure( target_base, 1u, false );
    const auto* xor_w = cl2.member( fun_xor() );
    const auto* xnor_w = cl2.member( fun_xnor() );
    const auto* not_w = cl1.member( fun_not() );
    const auto k = static_cast<std::uint32_t>( terms.size() );
    const auto plan = plan_chain( k, form.c, xor_w, xnor_w, not_w );
    if ( !plan )
    {
      throw precondition_error( "determinize_linear: the existential function is not representable "
                                "over the target base" );
    }
    std::vector<std::uint32_t> leaves;
    leaves.reserve( k );
    for ( const auto v : terms )
    {
      leaves.push_back( out.add_input( v ) );
    }
    std::uint32_t cur = leaves[0];
    for ( std::uint32_t t = 1u; t < k; ++t )
    {
      const auto* w = t <= plan->xnor_combines ? xnor_w : xor_w;
      cur = detail::splice( out, w->witness, { cur, leaves[t] } );
    }
    if ( plan->trailing_not )
    {
      cur = detail::splice( out, not_w->witness, { cur } );
    }
    out.set_output( cur );
  }

  const bool_fun exist = truth_table( c, semantics::nondeterministic );
  check_equal_tables( exist, out, "determinize_linear" );
  if ( out.num_gates() > n + 1u )
  {
    throw oracle_error( "determinize_linear: size bound n + 1 violated" );
  }
  return out;
}

namespace
{

circuit lift_impl( const circuit& c, const clone_closure& gadget_closure, bool conjunctive )
{
  const char* what = conjunctive ? "lift_and" : "lift_or";
  if ( gadget_closure.constants_allowed() )
  {
    throw precondition_error( std::string( what ) + ": requires a constants-free closure, or witness "
                                                    "splices could reintroduce constants" );
  }
  if ( gadget_closure.arity_bound() < 3u )
  {
    throw precondition_error( std::string( what ) + ": closure arity bound must be at least 3" );
  }
  const bool_fun wrap_fun = conjunctive ? fun_and_or() : fun_or_and();
  const bool_fun gadget_fun = conjunctive ? fun_and_or_not() : fun_or_and_not();
  const auto* wrap = gadget_closure.member( wrap_fun );
  if ( wrap == nullptr || !gadget_closure.contains( gadget_fun ) )
  {
    throw precondition_error( std::string( what ) + ": gadget functions missing from the closure" );
  }

  const auto& gb = gadget_closure.base();
  std::vector<std::uint32_t> gate_map( c.base().size(), 0u );
  for ( std::size_t i = 0u; i < c.base().size(); ++i )
  {
    const auto target = gb.index_of_fun( c.base()[i].fun );
    if ( !target )
    {
      throw precondition_error( std::string( what ) + ": gate '" + c.base()[i].name +
                                "' is not a gadget-base gate" );
    }
    gate_map[i] = static_cast<std::uint32_t>( *target );
  }

  const std::uint32_t n = c.num_inputs();
  const std::uint32_t m = c.num_nondet();
  circuit out( gb, n + 2u, m );
  const std::uint32_t xp = out.add_input( n + 1u );
  const std::uint32_t xpp = out.add_input( n + 2u );
  /* lift_and masks with x' = 1, x'' = 0 on the nominal rows; lift_or
   * works dually, so the constants swap their replacements. */
  const std::uint32_t one_node = conjunctive ? xp : xpp;
  const std::uint32_t zero_node = conjunctive ? xpp : xp;

  std::vector<std::uint32_t> mapped( c.nodes().size(), 0u );
  for ( std::size_t id = 0u; id < c.nodes().size(); ++id )
  {
    const auto& node = c.nodes()[id];
    switch ( node.kind )
    {
      case circuit::node_kind::input:
        mapped[id] = out.add_input( node.index );
        break;
      case circuit::node_kind::nondet:
        mapped[id] = out.add_nondet( node.index );
        break;
      case circuit::node_kind::constant:
        mapped[id] = node.value ? one_node : zero_node;
        break;
      case circuit::node_kind::gate:
      {
        std::vector<std::uint32_t> ops;
        ops.reserve( node.operands.size() );
        for ( const auto op : node.operands )
        {
          ops.push_back( mapped[op] );
        }
        mapped[id] = out.add_gate( gate_map[node.index], std::move( ops ) );
        break;
      }
    }
  }
  out.set_output( detail::splice( out, wrap->witness, { xp, mapped[c.output()], xpp } ) );

  if ( out.has_constants() )
  {
    throw oracle_error( std::string( what ) + ": output is not constant-free" );
  }
  if ( within_bound( n + 2u + m ) )
  {
    const bool_fun before = truth_table( c, semantics::deterministic );
    const bool_fun after = truth_table( out, semantics::deterministic );
    for ( std::uint64_t x = 0u; x < ( std::uint64_t( 1 ) << n ); ++x )
    {
      for ( std::uint64_t y = 0u; y < ( std::uint64_t( 1 ) << m ); ++y )
      {
        const auto row = [&]( std::uint64_t xp_v, std::uint64_t xpp_v ) {
          return after.bit( x | ( xp_v << n ) | ( xpp_v << ( n + 1u ) ) | ( y << ( n + 2u ) ) );
        };
        const bool original = before.bit( x | ( y << n ) );
        const bool nominal = conjunctive ? row( 1u, 0u ) : row( 0u, 1u );
        const bool forced_hi = conjunctive ? row( 1u, 1u ) : ( row( 1u, 0u ) && row( 1u, 1u ) );
        const bool forced_lo = conjunctive ? ( !row( 0u, 0u ) && !row( 0u, 1u ) ) : !row( 0u, 0u );
        if ( nominal != original || !forced_hi || !forced_lo )
        {
          throw oracle_error( std::string( what ) + ": padded-language contract violated" );
        }
      }
    }
    if ( m > 0u )
    {
      const bool_fun before_e = truth_table( c, semantics::nondeterministic );
      const bool_fun after_e = truth_table( out, semantics::nondeterministic );
      for ( std::uint64_t x = 0u; x < ( std::uint64_t( 1 ) << n ); ++x )
      {
        const auto row = [&]( std::uint64_t xp_v, std::uint64_t xpp_v ) {
          return after_e.bit( x | ( xp_v << n ) | ( xpp_v << ( n + 1u ) ) );
        };
        const bool original = before_e.bit( x );
        const bool nominal = conjunctive ? row( 1u, 0u ) : row( 0u, 1u );
        const bool forced_hi = conjunctive ? row( 1u, 1u ) : ( row( 1u, 0u ) && row( 1u, 1u ) );
        const bool forced_lo = conjunctive ? ( !row( 0u, 0u ) && !row( 0u, 1u ) ) : !row( 0u, 0u );
        if ( nominal != original || !forced_hi || !forced_lo )
        {
          throw oracle_error( std::string( what ) + ": existential contract violated" );
        }
      }
    }
  }
  return out;
}

} // namespace

circuit lift_and( const circuit& c, const clone_closure& gadget_closure )
{
  return lift_impl( c, gadget_closure, true );
}

circuit lift_or( const circuit& c, const clone_closure& gadget_closure )
{
  return lift_impl( c, gadget_closure, false );
}

namespace
{

circuit not_eliminate_impl( const circuit& c, bool conjunctive )
{
  const char* what = conjunctive ? "not_eliminate_conj" : "not_eliminate_disj";
  if ( c.num_nondet() != 0u )
  {
    throw precondition_error( std::string( what ) + ": m = 0 required" );
  }
  if ( c.num_inputs() < 1u )
  {
    throw precondition_error( std::string( what ) + ": n >= 1 required" );
  }
  if ( c.has_constants() )
  {
    /* The rewrite argument needs the circuit value at the all-ones
     * (all-zeros) assignment to be reproduced gate by gate; constant
     * nodes break that induction. */
    throw precondition_error( std::string( what ) + ": constant nodes are not allowed" );
  }
  enum class role
  {
    conj_gate,
    disj_gate,
    negation
  };
  std::vector<role> roles( c.base().size() );
  for ( std::size_t i = 0u; i < c.base().size(); ++i )
  {
    const auto& fun = c.base()[i].fun;
    if ( fun == fun_and() )
    {
      roles[i] = role::conj_gate;
    }
    else if ( fun == fun_or() )
    {
      roles[i] = role::disj_gate;
    }
    else if ( fun == fun_not() )
    {
      roles[i] = role::negation;
    }
    else
    {
      throw precondition_error( std::string( what ) + ": gate '" + c.base()[i].name +
                                "' is not AND, OR or NOT" );
    }
  }

  const bool_fun table = truth_table( c, semantics::deterministic );
  if ( conjunctive && !preserves_one( table ) )
  {
    throw precondition_error( std::string( what ) + ": table is not 1-reproducing, f(1,...,1) = 0" );
  }
  if ( !conjunctive && !preserves_zero( table ) )
  {
    throw precondition_error( std::string( what ) + ": table is not 0-reproducing, f(0,...,0) = 1" );
  }

  const gate_base target( { gate{ "AND", fun_and() }, gate{ "OR", fun_or() },
                            gate{ conjunctive ? "XNOR" : "XOR", conjunctive ? fun_xnor() : fun_xor() } } );
  const std::uint32_t and_idx = 0u;
  const std::uint32_t or_idx = 1u;
  const std::uint32_t mix_idx = 2u;

  const std::uint32_t n = c.num_inputs();
  circuit out( target, n, 0u );
  for ( std::uint32_t v = 1u; v <= n; ++v )
  {
    out.add_input( v );
  }

  const bool has_negation = std::any_of( c.nodes().begin(), c.nodes().end(), [&]( const circuit::node& nd ) {
    return nd.kind == circuit::node_kind::gate && roles[nd.index] == role::negation;
  } );

  /* t detects the distinguished assignment: all-ones for the conjunctive
   * pipeline, any-one for the disjunctive one. Omitted when no NOT gate
   * needs it. */
  std::uint32_t t_node = 0u;
  if ( has_negation )
  {
    t_node = 0u;
    for ( std::uint32_t v = 2u; v <= n; ++v )
    {
      t_node = out.add_gate( conjunctive ? and_idx : or_idx, { t_node, v - 1u } );
    }
  }

  std::vector<std::uint32_t> mapped( c.nodes().size(), 0u );
  for ( std::size_t id = 0u; id < c.nodes().size(); ++id )
  {
    const auto& node = c.nodes()[id];
    if ( node.kind == circuit::node_kind::input )
    {
      mapped[id] = node.index - 1u;
      continue;
    }
    assert( node.kind == circuit::node_kind::gate );
    switch ( roles[node.index] )
    {
      case role::conj_gate:
        mapped[id] = out.add_gate( and_idx, { mapped[node.operands[0]], mapped[node.operands[1]] } );
        break;
      case role::disj_gate:
        mapped[id] = out.add_gate( or_idx, { mapped[node.operands[0]], mapped[node.operands[1]] } );
        break;
      case role::negation:
        mapped[id] = out.add_gate( mix_idx, { mapped[node.operands[0]], t_node } );
        break;
    }
  }
  out.set_output( mapped[c.output()] );

  if ( out.num_gates() > c.num_gates() + n - 1u )
  {
    throw oracle_error( std::string( what ) + ": size bound violated" );
  }
  check_equal_tables( table, out, what );
  return out;
}

} // namespace

circuit not_eliminate_conj( const circuit& c )
{
  return not_eliminate_impl( c, true );
}

circuit not_eliminate_disj( const circuit& c )
{
  return not_eliminate_impl( c, false );
}

circuit compile_to_separating_base( const circuit& c, const gate_base& base, bool polarity,
                                    const clone_closure& closure_with_const )
{
  const char* what = "compile_to_separating_base";
  if ( c.num_nondet() != 0u )
  {
    throw precondition_error( std::string( what ) + ": m = 0 required" );
  }
  const std::uint32_t n = c.num_inputs();
  const bool_fun table = truth_table( c, semantics::deterministic );

  if ( polarity ? !preserves_one( table ) : !preserves_zero( table ) )
  {
    throw precondition_error( std::string( what ) + ": table is not " + ( polarity ? "1" : "0" ) +
                              "-reproducing" );
  }
  const auto sep = separating_index( table, polarity );
  if ( !sep )
  {
    /* Every variable has a row of the relevant polarity that contradicts
     * it; report one such row per variable. */
    std::string detail = std::string( what ) + ": no " + ( polarity ? "1" : "0" ) + "-separating input;";
    for ( std::uint32_t v = 0u; v < n; ++v )
    {
      for ( std::uint64_t idx = 0u; idx < table.table_size(); ++idx )
      {
        if ( table.bit( idx ) == polarity && ( ( idx >> v ) & 1u ) != ( polarity ? 1u : 0u ) )
        {
          detail += " x" + std::to_string( v + 1u ) + " fails on row " +
                    assignment{ idx, n }.to_string() + ";";
          break;
        }
      }
    }
    throw precondition_error( detail );
  }
  const std::uint32_t sep_var = *sep;

  for ( const auto& g : base.gates() )
  {
    if ( polarity ? !preserves_one( g.fun ) : !preserves_zero( g.fun ) )
    {
      throw precondition_error( std::string( what ) + ": base gate '" + g.name + "' does not preserve " +
                                ( polarity ? "1" : "0" ) );
    }
  }
  if ( closure_with_const.constants_allowed() )
  {
    throw precondition_error( std::string( what ) +
                              ": closure_with_const must be built from the base plus a single arity-0 "
                              "constant gate, not with free constants" );
  }
  /* Extra gates beyond the output base may only be the injected
   * constant. */
  std::vector<std::optional<std::size_t>> cwc_to_base( closure_with_const.base().size() );
  for ( std::size_t i = 0u; i < closure_with_const.base().size(); ++i )
  {
    const auto& g = closure_with_const.base()[i];
    cwc_to_base[i] = base.index_of_fun( g.fun );
    if ( !cwc_to_base[i] && !( g.fun.arity() == 0u && g.fun.bit( 0u ) == polarity ) )
    {
      throw precondition_error( std::string( what ) + ": closure base gate '" + g.name +
                                "' is neither a target base gate nor the constant " +
                                ( polarity ? "1" : "0" ) );
    }
  }
  if ( closure_with_const.arity_bound() < 2u )
  {
    throw precondition_error( std::string( what ) + ": closure arity bound must be at least 2" );
  }
  const bool_fun mix = polarity ? fun_xnor() : fun_xor();
  if ( !closure_with_const.contains( fun_and() ) || !closure_with_const.contains( fun_or() ) ||
       !closure_with_const.contains( mix ) )
  {
    throw precondition_error( std::string( what ) + ": closure lacks AND, OR or " +
                              ( polarity ? "XNOR" : "XOR" ) + " members" );
  }

  const bool_fun wrap_fun = polarity ? fun_and_or() : fun_or_and();
  const auto pure3 = closure_until( base, 3u, false, { wrap_fun } );
  const auto* wrap = pure3.member( wrap_fun );
  if ( wrap == nullptr )
  {
    throw precondition_error( std::string( what ) + ": base cannot express x " +
                              ( polarity ? "AND (y OR z)" : "OR (y AND z)" ) + " without constants" );
  }

  const circuit rewritten = polarity ? not_eliminate_conj( c ) : not_eliminate_disj( c );
  const circuit converted = convert_base( rewritten, closure_with_const );

  circuit out( base, n, 0u );
  std::vector<std::uint32_t> input_node( n, 0u );
  std::vector<bool> input_seen( n, false );
  std::vector<std::uint32_t> mapped( converted.nodes().size(), 0u );
  for ( std::size_t id = 0u; id < converted.nodes().size(); ++id )
  {
    const auto& node = converted.nodes()[id];
    switch ( node.kind )
    {
      case circuit::node_kind::input:
        mapped[id] = out.add_input( node.index );
        if ( !input_seen[node.index - 1u] )
        {
          input_seen[node.index - 1u] = true;
          input_node[node.index - 1u] = mapped[id];
        }
        break;
      case circuit::node_kind::nondet:
      case circuit::node_kind::constant:
        throw oracle_error( std::string( what ) + ": converted circuit has unexpected leaf nodes" );
      case circuit::node_kind::gate:
      {
        if ( cwc_to_base[node.index] )
        {
          std::vector<std::uint32_t> ops;
          ops.reserve( node.operands.size() );
          for ( const auto op : node.operands )
          {
            ops.push_back( mapped[op] );
          }
          mapped[id] = out.add_gate( static_cast<std::uint32_t>( *cwc_to_base[node.index] ),
                                     std::move( ops ) );
        }
        else
        {
          /* The injected constant gate: substitute the separating input,
           * which equals the constant on every row that matters. */
          assert( input_seen[sep_var - 1u] );
          mapped[id] = input_node[sep_var - 1u];
        }
        break;
      }
    }
  }
  const std::uint32_t body = mapped[converted.output()];
  assert( input_seen[sep_var - 1u] );
  out.set_output( detail::splice( out, wrap->witness, { input_node[sep_var - 1u], body, body } ) );

  if ( out.has_constants() )
  {
    throw oracle_error( std::string( what ) + ": output is not constant-free" );
  }
  check_equal_tables( table, out, what );
  return out;
}

} // namespace ndpower
