#include "ndpower/circuit.hpp"

#include <algorithm>
#include <cassert>
#include <charconv>
#include <cctype>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "ndpower/closure.hpp"
#include "ndpower/errors.hpp"
#include "ndpower/limits.hpp"
#include "sim.hpp"

namespace ndpower
{

namespace
{

using detail::sim_constant;
using detail::sim_gate;
using detail::sim_projection;
using detail::sim_table;
using detail::sim_words;

void check_exhaustive( std::uint32_t vars, const char* what )
{
  if ( vars > limits::exhaustive_input_bound() )
  {
    throw precondition_error( std::string( what ) + " enumerates " + std::to_string( vars ) +
                              " variables, bound is " + std::to_string( limits::exhaustive_input_bound() ) );
  }
}

/*! \brief Simulates all nodes over 2^vars assignments.
 *
 * `input_var` / `nondet_var` map a node's 1-based variable index to a
 * 0-based simulation variable, or to a fixed constant when negative
 * (encoded as -1 - bit).
 */
sim_table simulate( const circuit& c, std::uint32_t vars, const std::vector<std::int32_t>& input_var,
                    const std::vector<std::int32_t>& nondet_var )
{
  std::vector<sim_table> values( c.nodes().size() );
  std::vector<const sim_table*> ops;
  for ( std::size_t id = 0u; id < c.nodes().size(); ++id )
  {
    const auto& n = c.nodes()[id];
    switch ( n.kind )
    {
      case circuit::node_kind::input:
      case circuit::node_kind::nondet:
      {
        const auto& map = n.kind == circuit::node_kind::input ? input_var : nondet_var;
        const std::int32_t v = map[n.index - 1u];
        values[id] = v >= 0 ? sim_projection( vars, static_cast<std::uint32_t>( v ) )
                            : sim_constant( vars, ( -1 - v ) != 0 );
        break;
      }
      case circuit::node_kind::constant:
        values[id] = sim_constant( vars, n.value );
        break;
      case circuit::node_kind::gate:
      {
        ops.clear();
        for ( const auto op : n.operands )
        {
          ops.push_back( &values[op] );
        }
        values[id] = sim_gate( c.base()[n.index].fun, ops, vars );
        break;
      }
    }
  }
  return values[c.output()];
}

void require_valid_shape( const circuit& c, const char* what )
{
  if ( !c.has_output() )
  {
    throw precondition_error( std::string( what ) + ": circuit has no output" );
  }
}

} // namespace

circuit::circuit( gate_base base, std::uint32_t num_inputs, std::uint32_t num_nondet )
    : base_( std::move( base ) ), num_inputs_( num_inputs ), num_nondet_( num_nondet )
{
}

std::uint32_t circuit::add_input( std::uint32_t var )
{
  if ( var < 1u || var > num_inputs_ )
  {
    throw precondition_error( "input index " + std::to_string( var ) + " out of range, n = " +
                              std::to_string( num_inputs_ ) );
  }
  nodes_.push_back( node{ node_kind::input, var, false, {}, {} } );
  return static_cast<std::uint32_t>( nodes_.size() - 1u );
}

std::uint32_t circuit::add_nondet( std::uint32_t var )
{
  if ( var < 1u || var > num_nondet_ )
  {
    throw precondition_error( "nondet index " + std::to_string( var ) + " out of range, m = " +
                              std::to_string( num_nondet_ ) );
  }
  nodes_.push_back( node{ node_kind::nondet, var, false, {}, {} } );
  return static_cast<std::uint32_t>( nodes_.size() - 1u );
}

std::uint32_t circuit::add_constant( bool value )
{
  nodes_.push_back( node{ node_kind::constant, 0u, value, {}, {} } );
  return static_cast<std::uint32_t>( nodes_.size() - 1u );
}

std::uint32_t circuit::add_gate( std::size_t gate_index, std::vector<std::uint32_t> operands )
{
  if ( gate_index >= base_.size() )
  {
    throw precondition_error( "gate index out of range" );
  }
  const auto& g = base_[gate_index];
  if ( operands.size() != g.fun.arity() )
  {
    throw precondition_error( "gate '" + g.name + "' expects " + std::to_string( g.fun.arity() ) +
                              " operands, got " + std::to_string( operands.size() ) );
  }
  for ( const auto op : operands )
  {
    if ( op >= nodes_.size() )
    {
      throw precondition_error( "operand id " + std::to_string( op ) + " out of range" );
    }
  }
  nodes_.push_back( node{ node_kind::gate, static_cast<std::uint32_t>( gate_index ), false,
                          std::move( operands ), {} } );
  return static_cast<std::uint32_t>( nodes_.size() - 1u );
}

std::uint32_t circuit::add_gate( std::string_view gate_name, std::vector<std::uint32_t> operands )
{
  const auto index = base_.index_of( gate_name );
  if ( !index )
  {
    throw precondition_error( "unknown gate '" + std::string( gate_name ) + "'" );
  }
  return add_gate( *index, std::move( operands ) );
}

void circuit::set_output( std::uint32_t id )
{
  if ( id >= nodes_.size() )
  {
    throw precondition_error( "output id out of range" );
  }
  output_ = id;
}

void circuit::set_node_name( std::uint32_t id, std::string name )
{
  if ( id >= nodes_.size() )
  {
    throw precondition_error( "node id out of range" );
  }
  if ( !name.empty() && !is_valid_identifier( name ) )
  {
    throw precondition_error( "invalid node name '" + name + "'" );
  }
  nodes_[id].name = std::move( name );
}

std::uint32_t circuit::output() const
{
  if ( !output_ )
  {
    throw precondition_error( "circuit has no output" );
  }
  return *output_;
}

std::uint32_t circuit::num_gates() const
{
  std::uint32_t count = 0u;
  for ( const auto& n : nodes_ )
  {
    count += n.kind == node_kind::gate ? 1u : 0u;
  }
  return count;
}

bool circuit::has_constants() const
{
  return std::any_of( nodes_.begin(), nodes_.end(),
                      []( const node& n ) { return n.kind == node_kind::constant; } );
}

bool circuit::has_nondet_nodes() const
{
  return std::any_of( nodes_.begin(), nodes_.end(),
                      []( const node& n ) { return n.kind == node_kind::nondet; } );
}

validation_report validate( const circuit& c )
{
  validation_report report;
  const auto& nodes = c.nodes();

  /* Constant nodes are legal everywhere, but flag the ones the base
   * cannot express itself; unary closures have at most 4 members, so
   * this stays cheap. */
  std::optional<clone_closure> unary;
  const auto base_expresses = [&]( bool value ) {
    if ( !unary )
    {
      unary = closure( c.base(), 1u, false );
    }
    return unary->contains( bool_fun::constant( 1u, value ) );
  };

  std::unordered_set<std::string_view> names;
  for ( std::size_t id = 0u; id < nodes.size(); ++id )
  {
    const auto& n = nodes[id];
    const std::string where = "node " + std::to_string( id );
    if ( !n.name.empty() && !names.insert( n.name ).second )
    {
      report.violations.push_back( where + ": duplicate name '" + n.name + "'" );
    }
    switch ( n.kind )
    {
      case circuit::node_kind::input:
        if ( n.index < 1u || n.index > c.num_inputs() )
        {
          report.violations.push_back( where + ": input index " + std::to_string( n.index ) + " out of range" );
        }
        break;
      case circuit::node_kind::nondet:
        if ( n.index < 1u || n.index > c.num_nondet() )
        {
          report.violations.push_back( where + ": nondet index " + std::to_string( n.index ) + " out of range" );
        }
        break;
      case circuit::node_kind::constant:
        if ( !base_expresses( n.value ) )
        {
          report.warnings.push_back( where + ": constant " + std::to_string( n.value ? 1 : 0 ) +
                                     " is not derivable from the base" );
        }
        break;
      case circuit::node_kind::gate:
      {
        if ( n.index >= c.base().size() )
        {
          report.violations.push_back( where + ": gate index out of range" );
          break;
        }
        if ( n.operands.size() != c.base()[n.index].fun.arity() )
        {
          report.violations.push_back( where + ": gate '" + c.base()[n.index].name + "' expects " +
                                       std::to_string( c.base()[n.index].fun.arity() ) + " operands" );
        }
        for ( const auto op : n.operands )
        {
          if ( op >= id )
          {
            report.violations.push_back( where + ": operand " + std::to_string( op ) +
                                         " does not precede the node" );
          }
        }
        break;
      }
    }
  }
  if ( !c.has_output() )
  {
    report.violations.push_back( "circuit has no output" );
    return report;
  }
  if ( c.output() >= nodes.size() )
  {
    report.violations.push_back( "output id out of range" );
    return report;
  }
  if ( report.violations.empty() )
  {
    std::vector<bool> reached( nodes.size(), false );
    std::vector<std::uint32_t> stack{ c.output() };
    while ( !stack.empty() )
    {
      const auto id = stack.back();
      stack.pop_back();
      if ( reached[id] )
      {
        continue;
      }
      reached[id] = true;
      for ( const auto op : nodes[id].operands )
      {
        stack.push_back( op );
      }
    }
    for ( std::size_t id = 0u; id < nodes.size(); ++id )
    {
      if ( !reached[id] )
      {
        report.warnings.push_back( "node " + std::to_string( id ) + ": unreachable from the output" );
      }
    }
  }
  return report;
}

bool eval_det( const circuit& c, assignment x, assignment y )
{
  require_valid_shape( c, "eval_det" );
  if ( x.width != c.num_inputs() || y.width != c.num_nondet() )
  {
    throw precondition_error( "eval_det: assignment widths (" + std::to_string( x.width ) + ", " +
                              std::to_string( y.width ) + ") do not match (n, m) = (" +
                              std::to_string( c.num_inputs() ) + ", " + std::to_string( c.num_nondet() ) + ")" );
  }
  const auto& nodes = c.nodes();
  std::vector<char> values( nodes.size(), 0 );
  for ( std::size_t id = 0u; id < nodes.size(); ++id )
  {
    const auto& n = nodes[id];
    switch ( n.kind )
    {
      case circuit::node_kind::input:
        values[id] = x.value( n.index );
        break;
      case circuit::node_kind::nondet:
        values[id] = y.value( n.index );
        break;
      case circuit::node_kind::constant:
        values[id] = n.value;
        break;
      case circuit::node_kind::gate:
      {
        std::uint64_t row = 0u;
        for ( std::size_t j = 0u; j < n.operands.size(); ++j )
        {
          row |= static_cast<std::uint64_t>( values[n.operands[j]] ) << j;
        }
        values[id] = c.base()[n.index].fun.bit( row );
        break;
      }
    }
  }
  return values[c.output()];
}

bool eval_nondet( const circuit& c, assignment x )
{
  require_valid_shape( c, "eval_nondet" );
  if ( x.width != c.num_inputs() )
  {
    throw precondition_error( "eval_nondet: assignment width does not match n" );
  }
  const std::uint32_t m = c.num_nondet();
  check_exhaustive( m, "eval_nondet" );

  /* Simulate over the nondeterministic inputs only, fixing the regular
   * inputs to the given assignment. */
  std::vector<std::int32_t> input_var( c.num_inputs() );
  for ( std::uint32_t i = 0u; i < c.num_inputs(); ++i )
  {
    input_var[i] = -1 - static_cast<std::int32_t>( x.value( i + 1u ) ? 1 : 0 );
  }
  std::vector<std::int32_t> nondet_var( m );
  for ( std::uint32_t j = 0u; j < m; ++j )
  {
    nondet_var[j] = static_cast<std::int32_t>( j );
  }
  const sim_table out = simulate( c, m, input_var, nondet_var );
  return std::any_of( out.begin(), out.end(), []( std::uint64_t w ) { return w != 0u; } );
}

bool_fun truth_table( const circuit& c, semantics sem )
{
  require_valid_shape( c, "truth_table" );
  const std::uint32_t n = c.num_inputs();
  const std::uint32_t m = c.num_nondet();
  check_exhaustive( n + m, "truth_table" );

  std::vector<std::int32_t> input_var( n );
  for ( std::uint32_t i = 0u; i < n; ++i )
  {
    input_var[i] = static_cast<std::int32_t>( i );
  }
  std::vector<std::int32_t> nondet_var( m );
  for ( std::uint32_t j = 0u; j < m; ++j )
  {
    nondet_var[j] = static_cast<std::int32_t>( n + j );
  }
  sim_table det = simulate( c, n + m, input_var, nondet_var );
  if ( sem == semantics::deterministic )
  {
    return bool_fun::from_words( n + m, std::move( det ) );
  }

  /* Existential fold: OR together the 2^m chunks of 2^n bits. */
  if ( n >= 6u )
  {
    const std::uint64_t chunk = sim_words( n );
    sim_table out( chunk, 0u );
    for ( std::uint64_t w = 0u; w < det.size(); ++w )
    {
      out[w % chunk] |= det[w];
    }
    return bool_fun::from_words( n, std::move( out ) );
  }
  std::uint64_t acc = 0u;
  for ( const std::uint64_t w : det )
  {
    acc |= w;
  }
  for ( std::uint32_t s = 32u; s >= ( 1u << n ) && s >= 1u; s >>= 1u )
  {
    acc |= acc >> s;
  }
  return bool_fun::from_word( n, acc );
}

std::optional<assignment> find_counterexample( const circuit& a, semantics sem_a, const circuit& b,
                                               semantics sem_b )
{
  const auto fa = truth_table( a, sem_a );
  const auto fb = truth_table( b, sem_b );
  if ( fa.arity() != fb.arity() )
  {
    throw precondition_error( "find_counterexample: functions have different arities (" +
                              std::to_string( fa.arity() ) + " vs " + std::to_string( fb.arity() ) + ")" );
  }
  for ( std::uint64_t i = 0u; i < fa.table_size(); ++i )
  {
    if ( fa.bit( i ) != fb.bit( i ) )
    {
      return assignment{ i, fa.arity() };
    }
  }
  return std::nullopt;
}

std::optional<std::uint32_t> find_separating_input( const circuit& c, bool polarity )
{
  return separating_index( truth_table( c, semantics::nondeterministic ), polarity );
}

namespace
{

std::vector<std::string_view> tokenize_line( std::string_view line )
{
  if ( const auto hash = line.find( '#' ); hash != std::string_view::npos )
  {
    line = line.substr( 0u, hash );
  }
  std::vector<std::string_view> tokens;
  std::size_t i = 0u;
  while ( i < line.size() )
  {
    while ( i < line.size() && std::isspace( static_cast<unsigned char>( line[i] ) ) )
    {
      ++i;
    }
    const std::size_t start = i;
    while ( i < line.size() && !std::isspace( static_cast<unsigned char>( line[i] ) ) )
    {
      ++i;
    }
    if ( i > start )
    {
      tokens.push_back( line.substr( start, i - start ) );
    }
  }
  return tokens;
}

std::uint32_t parse_uint_or_throw( std::string_view token, std::size_t line_no, const char* what )
{
  std::uint32_t value = 0u;
  const auto* begin = token.data();
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars( begin, end, value );
  if ( ec != std::errc() || ptr != end )
  {
    throw parse_error( line_no, std::string( "invalid " ) + what + " '" + std::string( token ) + "'" );
  }
  return value;
}

std::uint32_t parse_header_field( std::string_view token, char key, std::size_t line_no )
{
  if ( token.size() < 3u || token[0] != key || token[1] != '=' )
  {
    throw parse_error( line_no, std::string( "expected '" ) + key + "=<int>', got '" + std::string( token ) +
                                    "'" );
  }
  return parse_uint_or_throw( token.substr( 2u ), line_no, "count" );
}

} // namespace

circuit parse_circuit( std::string_view text, const gate_base& base )
{
  std::optional<circuit> c;
  std::unordered_map<std::string, std::uint32_t> ids;
  bool output_seen = false;

  std::size_t line_no = 0u;
  std::size_t pos = 0u;
  while ( pos <= text.size() )
  {
    const std::size_t eol = text.find( '\n', pos );
    const std::string_view line =
        text.substr( pos, eol == std::string_view::npos ? text.size() - pos : eol - pos );
    pos = eol == std::string_view::npos ? text.size() + 1u : eol + 1u;
    ++line_no;

    const auto tokens = tokenize_line( line );
    if ( tokens.empty() )
    {
      continue;
    }
    if ( output_seen )
    {
      throw parse_error( line_no, "statement after output" );
    }
    if ( !c )
    {
      if ( tokens[0] != "inputs" || tokens.size() != 3u )
      {
        throw parse_error( line_no, "expected 'inputs n=<int> m=<int>'" );
      }
      const auto n = parse_header_field( tokens[1], 'n', line_no );
      const auto m = parse_header_field( tokens[2], 'm', line_no );
      c.emplace( base, n, m );
      continue;
    }
    if ( tokens[0] == "output" )
    {
      if ( tokens.size() != 2u )
      {
        throw parse_error( line_no, "expected 'output <name>'" );
      }
      const auto it = ids.find( std::string( tokens[1] ) );
      if ( it == ids.end() )
      {
        throw parse_error( line_no, "undefined node '" + std::string( tokens[1] ) + "'" );
      }
      c->set_output( it->second );
      output_seen = true;
      continue;
    }
    if ( tokens.size() < 3u || tokens[1] != "=" )
    {
      throw parse_error( line_no, "expected '<name> = <kind> ...'" );
    }
    const std::string name( tokens[0] );
    if ( !is_valid_identifier( name ) )
    {
      throw parse_error( line_no, "invalid node name '" + name + "'" );
    }
    if ( ids.count( name ) )
    {
      throw parse_error( line_no, "duplicate node name '" + name + "'" );
    }
    const std::string_view kind = tokens[2];
    std::uint32_t id = 0u;
    try
    {
      if ( kind == "input" || kind == "nondet" )
      {
        if ( tokens.size() != 4u )
        {
          throw parse_error( line_no, std::string( "expected '<name> = " ) + std::string( kind ) + " <index>'" );
        }
        const auto var = parse_uint_or_throw( tokens[3], line_no, "index" );
        id = kind == "input" ? c->add_input( var ) : c->add_nondet( var );
      }
      else if ( kind == "const" )
      {
        if ( tokens.size() != 4u || ( tokens[3] != "0" && tokens[3] != "1" ) )
        {
          throw parse_error( line_no, "expected '<name> = const <0|1>'" );
        }
        id = c->add_constant( tokens[3] == "1" );
      }
      else
      {
        if ( !base.index_of( kind ) )
        {
          throw parse_error( line_no, "unknown gate '" + std::string( kind ) + "'" );
        }
        std::vector<std::uint32_t> operands;
        for ( std::size_t j = 3u; j < tokens.size(); ++j )
        {
          const auto it = ids.find( std::string( tokens[j] ) );
          if ( it == ids.end() )
          {
            throw parse_error( line_no, "undefined operand '" + std::string( tokens[j] ) + "'" );
          }
          operands.push_back( it->second );
        }
        id = c->add_gate( kind, std::move( operands ) );
      }
    }
    catch ( const precondition_error& e )
    {
      throw parse_error( line_no, e.what() );
    }
    c->set_node_name( id, name );
    ids.emplace( name, id );
  }
  if ( !c )
  {
    throw parse_error( 0u, "missing 'inputs' header" );
  }
  if ( !output_seen )
  {
    throw parse_error( 0u, "missing 'output' statement" );
  }
  return std::move( *c );
}

std::string serialize_circuit( const circuit& c )
{
  require_valid_shape( c, "serialize_circuit" );
  std::unordered_set<std::string> used;
  for ( const auto& n : c.nodes() )
  {
    if ( !n.name.empty() )
    {
      used.insert( n.name );
    }
  }
  std::vector<std::string> names( c.nodes().size() );
  for ( std::size_t id = 0u; id < c.nodes().size(); ++id )
  {
    if ( !c.nodes()[id].name.empty() )
    {
      names[id] = c.nodes()[id].name;
      continue;
    }
    std::size_t k = id + 1u;
    std::string candidate = "t" + std::to_string( k );
    while ( used.count( candidate ) )
    {
      candidate = "t" + std::to_string( ++k );
    }
    used.insert( candidate );
    names[id] = std::move( candidate );
  }

  std::ostringstream out;
  out << "inputs n=" << c.num_inputs() << " m=" << c.num_nondet() << '\n';
  for ( std::size_t id = 0u; id < c.nodes().size(); ++id )
  {
    const auto& n = c.nodes()[id];
    out << names[id] << " = ";
    switch ( n.kind )
    {
      case circuit::node_kind::input:
        out << "input " << n.index;
        break;
      case circuit::node_kind::nondet:
        out << "nondet " << n.index;
        break;
      case circuit::node_kind::constant:
        out << "const " << ( n.value ? 1 : 0 );
        break;
      case circuit::node_kind::gate:
        out << c.base()[n.index].name;
        for ( const auto op : n.operands )
        {
          out << ' ' << names[op];
        }
        break;
    }
    out << '\n';
  }
  out << "output " << names[c.output()] << '\n';
  return out.str();
}

namespace detail
{

std::uint32_t splice( circuit& dst, const circuit& sub, const std::vector<std::uint32_t>& input_map )
{
  assert( input_map.size() >= sub.num_inputs() );
  std::vector<std::uint32_t> mapped( sub.nodes().size(), 0u );
  for ( std::size_t id = 0u; id < sub.nodes().size(); ++id )
  {
    const auto& n = sub.nodes()[id];
    switch ( n.kind )
    {
      case circuit::node_kind::input:
        mapped[id] = input_map[n.index - 1u];
        break;
      case circuit::node_kind::nondet:
        throw precondition_error( "splice: subcircuit has nondeterministic nodes" );
      case circuit::node_kind::constant:
        mapped[id] = dst.add_constant( n.value );
        break;
      case circuit::node_kind::gate:
      {
        assert( n.index < dst.base().size() && dst.base()[n.index].fun == sub.base()[n.index].fun );
        std::vector<std::uint32_t> ops;
        ops.reserve( n.operands.size() );
        for ( const auto op : n.operands )
        {
          ops.push_back( mapped[op] );
        }
        mapped[id] = dst.add_gate( n.index, std::move( ops ) );
        break;
      }
    }
  }
  return mapped[sub.output()];
}

} // namespace detail

} // namespace ndpower
