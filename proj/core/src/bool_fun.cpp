#include "ndpower/bool_fun.hpp"

#include <cassert>

namespace ndpower
{

namespace
{

std::uint64_t num_words( std::uint32_t arity )
{
  return arity < 6u ? 1u : ( std::uint64_t( 1 ) << ( arity - 6u ) );
}

/* Mask covering the live bits of the last (only) word at small arities. */
std::uint64_t tail_mask( std::uint32_t arity )
{
  return arity >= 6u ? ~std::uint64_t( 0 ) : ( ( std::uint64_t( 1 ) << ( std::uint64_t( 1 ) << arity ) ) - 1u );
}

void check_arity( std::uint32_t arity )
{
  if ( arity > limits::max_fun_arity() )
  {
    throw precondition_error( "function arity " + std::to_string( arity ) + " exceeds configured bound " +
                              std::to_string( limits::max_fun_arity() ) );
  }
}

} // namespace

bool assignment::value( std::uint32_t var ) const
{
  assert( var >= 1u && var <= width );
  return ( bits >> ( var - 1u ) ) & 1u;
}

std::string assignment::to_string() const
{
  std::string s;
  s.reserve( width );
  for ( std::uint32_t j = 0u; j < width; ++j )
  {
    s.push_back( ( ( bits >> j ) & 1u ) ? '1' : '0' );
  }
  return s;
}

bool_fun::bool_fun() : arity_( 0u ), words_( 1u, 0u ) {}

bool_fun bool_fun::constant( std::uint32_t arity, bool value )
{
  check_arity( arity );
  bool_fun f;
  f.arity_ = arity;
  f.words_.assign( num_words( arity ), value ? ~std::uint64_t( 0 ) : 0u );
  if ( value )
  {
    f.words_.back() &= tail_mask( arity );
  }
  return f;
}

bool_fun bool_fun::projection( std::uint32_t arity, std::uint32_t var )
{
  check_arity( arity );
  if ( var < 1u || var > arity )
  {
    throw precondition_error( "projection variable " + std::to_string( var ) + " out of range for arity " +
                              std::to_string( arity ) );
  }
  static constexpr std::uint64_t low_masks[] = {
      0xaaaaaaaaaaaaaaaaull, 0xccccccccccccccccull, 0xf0f0f0f0f0f0f0f0ull,
      0xff00ff00ff00ff00ull, 0xffff0000ffff0000ull, 0xffffffff00000000ull };

  bool_fun f;
  f.arity_ = arity;
  const std::uint64_t words = num_words( arity );
  f.words_.resize( words );
  const std::uint32_t v = var - 1u;
  if ( v < 6u )
  {
    for ( std::uint64_t w = 0u; w < words; ++w )
    {
      f.words_[w] = low_masks[v];
    }
  }
  else
  {
    for ( std::uint64_t w = 0u; w < words; ++w )
    {
      f.words_[w] = ( ( w >> ( v - 6u ) ) & 1u ) ? ~std::uint64_t( 0 ) : 0u;
    }
  }
  f.words_.back() &= tail_mask( arity );
  return f;
}

bool_fun bool_fun::from_bits( std::uint32_t arity, std::string_view bits )
{
  check_arity( arity );
  const std::uint64_t size = std::uint64_t( 1 ) << arity;
  if ( bits.size() != size )
  {
    throw parse_error( 0u, "truth table has " + std::to_string( bits.size() ) + " bits, expected " +
                               std::to_string( size ) + " for arity " + std::to_string( arity ) );
  }
  bool_fun f;
  f.arity_ = arity;
  f.words_.assign( num_words( arity ), 0u );
  for ( std::uint64_t i = 0u; i < size; ++i )
  {
    const char c = bits[i];
    if ( c != '0' && c != '1' )
    {
      throw parse_error( 0u, std::string( "invalid truth table character '" ) + c + "'" );
    }
    if ( c == '1' )
    {
      f.words_[i >> 6u] |= std::uint64_t( 1 ) << ( i & 63u );
    }
  }
  return f;
}

bool_fun bool_fun::from_word( std::uint32_t arity, std::uint64_t word )
{
  if ( arity > 6u )
  {
    throw precondition_error( "from_word supports arity up to 6" );
  }
  bool_fun f;
  f.arity_ = arity;
  f.words_.assign( 1u, word & tail_mask( arity ) );
  return f;
}

bool_fun bool_fun::from_words( std::uint32_t arity, std::vector<std::uint64_t> words )
{
  check_arity( arity );
  if ( words.size() != num_words( arity ) )
  {
    throw precondition_error( "word count does not match arity" );
  }
  bool_fun f;
  f.arity_ = arity;
  f.words_ = std::move( words );
  f.words_.back() &= tail_mask( arity );
  return f;
}

bool bool_fun::bit( std::uint64_t index ) const
{
  assert( index < table_size() );
  return ( words_[index >> 6u] >> ( index & 63u ) ) & 1u;
}

bool bool_fun::operator()( assignment a ) const
{
  if ( a.width != arity_ )
  {
    throw precondition_error( "assignment width " + std::to_string( a.width ) + " does not match arity " +
                              std::to_string( arity_ ) );
  }
  return bit( a.bits );
}

std::uint64_t bool_fun::word() const
{
  if ( arity_ > 6u )
  {
    throw precondition_error( "word() supports arity up to 6" );
  }
  return words_[0];
}

std::string bool_fun::to_bits() const
{
  const std::uint64_t size = table_size();
  std::string s;
  s.reserve( size );
  for ( std::uint64_t i = 0u; i < size; ++i )
  {
    s.push_back( bit( i ) ? '1' : '0' );
  }
  return s;
}

std::string bool_fun::to_hex() const
{
  static const char digits[] = "0123456789abcdef";
  const std::uint64_t size = table_size();
  const std::uint64_t nibbles = size < 4u ? 1u : size / 4u;
  std::string s( nibbles, '0' );
  for ( std::uint64_t n = 0u; n < nibbles; ++n )
  {
    std::uint32_t v = 0u;
    for ( std::uint32_t b = 0u; b < 4u; ++b )
    {
      const std::uint64_t i = 4u * n + b;
      if ( i < size && bit( i ) )
      {
        v |= 1u << b;
      }
    }
    s[nibbles - 1u - n] = digits[v];
  }
  return s;
}

bool_fun dual( const bool_fun& f )
{
  const std::uint64_t size = f.table_size();
  std::vector<std::uint64_t> words( f.words().size(), 0u );
  for ( std::uint64_t i = 0u; i < size; ++i )
  {
    if ( !f.bit( size - 1u - i ) )
    {
      words[i >> 6u] |= std::uint64_t( 1 ) << ( i & 63u );
    }
  }
  return bool_fun::from_words( f.arity(), std::move( words ) );
}

bool is_monotone( const bool_fun& f )
{
  const std::uint64_t size = f.table_size();
  for ( std::uint32_t v = 0u; v < f.arity(); ++v )
  {
    const std::uint64_t step = std::uint64_t( 1 ) << v;
    for ( std::uint64_t i = 0u; i < size; ++i )
    {
      if ( !( i & step ) && f.bit( i ) && !f.bit( i | step ) )
      {
        return false;
      }
    }
  }
  return true;
}

bool is_affine( const bool_fun& f )
{
  /* f is affine iff flipping any one variable changes f on either all
   * assignments or none. */
  const std::uint64_t size = f.table_size();
  for ( std::uint32_t v = 0u; v < f.arity(); ++v )
  {
    const std::uint64_t step = std::uint64_t( 1 ) << v;
    const bool first = f.bit( 0u ) ^ f.bit( step );
    for ( std::uint64_t i = 0u; i < size; ++i )
    {
      if ( ( f.bit( i ) ^ f.bit( i ^ step ) ) != first )
      {
        return false;
      }
    }
  }
  return true;
}

bool is_self_dual( const bool_fun& f )
{
  const std::uint64_t size = f.table_size();
  for ( std::uint64_t i = 0u; i < size; ++i )
  {
    if ( f.bit( i ) == f.bit( size - 1u - i ) )
    {
      return false;
    }
  }
  return true;
}

bool preserves_zero( const bool_fun& f )
{
  return !f.bit( 0u );
}

bool preserves_one( const bool_fun& f )
{
  return f.bit( f.table_size() - 1u );
}

std::optional<std::uint32_t> separating_index( const bool_fun& f, bool polarity )
{
  const std::uint64_t size = f.table_size();
  for ( std::uint32_t v = 0u; v < f.arity(); ++v )
  {
    bool ok = true;
    for ( std::uint64_t i = 0u; i < size; ++i )
    {
      if ( f.bit( i ) == polarity && ( ( ( i >> v ) & 1u ) != ( polarity ? 1u : 0u ) ) )
      {
        ok = false;
        break;
      }
    }
    if ( ok )
    {
      return v + 1u;
    }
  }
  return std::nullopt;
}

bool_fun fun_and()
{
  return bool_fun::from_word( 2u, 0x8u );
}

bool_fun fun_or()
{
  return bool_fun::from_word( 2u, 0xeu );
}

bool_fun fun_not()
{
  return bool_fun::from_word( 1u, 0x1u );
}

bool_fun fun_xor()
{
  return bool_fun::from_word( 2u, 0x6u );
}

bool_fun fun_xnor()
{
  return bool_fun::from_word( 2u, 0x9u );
}

bool_fun fun_nand()
{
  return bool_fun::from_word( 2u, 0x7u );
}

bool_fun fun_nor()
{
  return bool_fun::from_word( 2u, 0x1u );
}

bool_fun fun_majority3()
{
  return bool_fun::from_word( 3u, 0xe8u );
}

bool_fun fun_self_dual_generator()
{
  /* (x1 AND NOT x2) OR (NOT x2 AND NOT x3) OR (NOT x3 AND x1) */
  return bool_fun::from_word( 3u, 0x2bu );
}

bool_fun fun_and_or_not()
{
  return bool_fun::from_word( 3u, 0x8au );
}

bool_fun fun_or_and_not()
{
  return bool_fun::from_word( 3u, 0xaeu );
}

bool_fun fun_and_or()
{
  return bool_fun::from_word( 3u, 0xa8u );
}

bool_fun fun_or_and()
{
  return bool_fun::from_word( 3u, 0xeau );
}

} // namespace ndpower
