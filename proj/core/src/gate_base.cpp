#include "ndpower/gate_base.hpp"

#include <cctype>
#include <charconv>
#include <sstream>
#include <unordered_set>

#include "ndpower/errors.hpp"
#include "ndpower/limits.hpp"

namespace ndpower
{

namespace
{

const std::unordered_set<std::string_view> keywords = { "inputs", "input", "nondet", "const", "output" };

std::vector<std::string_view> split_tokens( std::string_view line )
{
  std::vector<std::string_view> tokens;
  std::size_t i = 0u;
  while ( i < line.size() )
  {
    while ( i < line.size() && std::isspace( static_cast<unsigned char>( line[i] ) ) )
    {
      ++i;
    }
    std::size_t start = i;
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

std::optional<std::uint32_t> parse_uint( std::string_view token )
{
  std::uint32_t value = 0u;
  const auto* begin = token.data();
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars( begin, end, value );
  if ( ec != std::errc() || ptr != end )
  {
    return std::nullopt;
  }
  return value;
}

} // namespace

bool is_valid_identifier( std::string_view name )
{
  if ( name.empty() || keywords.count( name ) )
  {
    return false;
  }
  if ( !std::isalpha( static_cast<unsigned char>( name[0] ) ) && name[0] != '_' )
  {
    return false;
  }
  for ( char c : name )
  {
    if ( !std::isalnum( static_cast<unsigned char>( c ) ) && c != '_' )
    {
      return false;
    }
  }
  return true;
}

gate_base::gate_base( std::vector<gate> gates ) : gates_( std::move( gates ) )
{
  if ( gates_.empty() )
  {
    throw precondition_error( "a base must contain at least one gate" );
  }
  std::unordered_set<std::string_view> seen;
  for ( const auto& g : gates_ )
  {
    if ( !is_valid_identifier( g.name ) )
    {
      throw precondition_error( "invalid gate name '" + g.name + "'" );
    }
    if ( !seen.insert( g.name ).second )
    {
      throw precondition_error( "duplicate gate name '" + g.name + "'" );
    }
    if ( g.fun.arity() > limits::max_gate_arity() )
    {
      throw precondition_error( "gate '" + g.name + "' has arity " + std::to_string( g.fun.arity() ) +
                                ", bound is " + std::to_string( limits::max_gate_arity() ) );
    }
  }
}

gate_base gate_base::parse( std::string_view text )
{
  std::vector<gate> gates;
  std::size_t line_no = 0u;
  std::size_t pos = 0u;
  while ( pos <= text.size() )
  {
    const std::size_t eol = text.find( '\n', pos );
    std::string_view line = text.substr( pos, eol == std::string_view::npos ? text.size() - pos : eol - pos );
    pos = eol == std::string_view::npos ? text.size() + 1u : eol + 1u;
    ++line_no;

    if ( const auto hash = line.find( '#' ); hash != std::string_view::npos )
    {
      line = line.substr( 0u, hash );
    }
    const auto tokens = split_tokens( line );
    if ( tokens.empty() )
    {
      continue;
    }
    if ( tokens.size() != 3u )
    {
      throw parse_error( line_no, "expected '<name> <arity> <table-bits>'" );
    }
    if ( !is_valid_identifier( tokens[0] ) )
    {
      throw parse_error( line_no, "invalid gate name '" + std::string( tokens[0] ) + "'" );
    }
    const auto arity = parse_uint( tokens[1] );
    if ( !arity )
    {
      throw parse_error( line_no, "invalid arity '" + std::string( tokens[1] ) + "'" );
    }
    if ( *arity > limits::max_gate_arity() )
    {
      throw parse_error( line_no, "gate arity " + std::to_string( *arity ) + " exceeds bound " +
                                      std::to_string( limits::max_gate_arity() ) );
    }
    bool_fun fun;
    try
    {
      fun = bool_fun::from_bits( *arity, tokens[2] );
    }
    catch ( const parse_error& e )
    {
      throw parse_error( line_no, e.what() );
    }
    for ( const auto& g : gates )
    {
      if ( g.name == tokens[0] )
      {
        throw parse_error( line_no, "duplicate gate name '" + std::string( tokens[0] ) + "'" );
      }
    }
    gates.push_back( gate{ std::string( tokens[0] ), std::move( fun ) } );
  }
  if ( gates.empty() )
  {
    throw parse_error( 0u, "base file defines no gates" );
  }
  return gate_base( std::move( gates ) );
}

std::string gate_base::serialize() const
{
  std::ostringstream out;
  for ( const auto& g : gates_ )
  {
    out << g.name << ' ' << g.fun.arity() << ' ' << g.fun.to_bits() << '\n';
  }
  return out.str();
}

std::optional<std::size_t> gate_base::index_of( std::string_view name ) const
{
  for ( std::size_t i = 0u; i < gates_.size(); ++i )
  {
    if ( gates_[i].name == name )
    {
      return i;
    }
  }
  return std::nullopt;
}

std::optional<std::size_t> gate_base::index_of_fun( const bool_fun& fun ) const
{
  for ( std::size_t i = 0u; i < gates_.size(); ++i )
  {
    if ( gates_[i].fun == fun )
    {
      return i;
    }
  }
  return std::nullopt;
}

} // namespace ndpower
