#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "limits.hpp"

namespace ndpower
{

/*! \brief A packed assignment to Boolean variables.
 *
 * Bit j of `bits` holds the value of variable x_{j+1}; variables are
 * 1-based everywhere in this library. `width` is the number of variables
 * carried (at most 64).
 */
struct assignment
{
  std::uint64_t bits = 0u;
  std::uint32_t width = 0u;

  bool value( std::uint32_t var ) const;
  std::string to_string() const;

  bool operator==( const assignment& other ) const = default;
};

/*! \brief A total Boolean function of fixed arity, stored as a truth table.
 *
 * Bit i of the table is the value on the assignment whose packed bits
 * equal i, so x_1 is the least significant index bit. Arity 0 is allowed
 * and represents a constant. Values are immutable after construction.
 */
class bool_fun
{
public:
  /* Arity-0 constant 0. */
  bool_fun();

  static bool_fun constant( std::uint32_t arity, bool value );
  /* Projection onto x_var; var is 1-based and must be in [1, arity]. */
  static bool_fun projection( std::uint32_t arity, std::uint32_t var );
  /*! \brief Builds from a bit string listing table entries from index 0
   * upward, so the leftmost character is the value at the all-zero
   * assignment. Length must be exactly 2^arity.
   */
  static bool_fun from_bits( std::uint32_t arity, std::string_view bits );
  /* Low 2^arity bits of `word`; arity at most 6. */
  static bool_fun from_word( std::uint32_t arity, std::uint64_t word );
  static bool_fun from_words( std::uint32_t arity, std::vector<std::uint64_t> words );

  std::uint32_t arity() const { return arity_; }
  std::uint64_t table_size() const { return std::uint64_t( 1 ) << arity_; }

  bool bit( std::uint64_t index ) const;
  bool operator()( assignment a ) const;

  /* Whole table as a single word; arity at most 6. */
  std::uint64_t word() const;
  const std::vector<std::uint64_t>& words() const { return words_; }

  std::string to_bits() const;
  /* Lowercase hex, most significant nibble first; table index 0 sits in
   * the least significant nibble. */
  std::string to_hex() const;

  bool operator==( const bool_fun& other ) const = default;

private:
  std::uint32_t arity_;
  std::vector<std::uint64_t> words_;
};

/* f with all inputs and the output complemented. */
bool_fun dual( const bool_fun& f );

bool is_monotone( const bool_fun& f );
bool is_affine( const bool_fun& f );
bool is_self_dual( const bool_fun& f );
bool preserves_zero( const bool_fun& f );
bool preserves_one( const bool_fun& f );

/*! \brief Smallest 1-based i such that every assignment with f = polarity
 * sets x_i = polarity; nullopt when no variable qualifies.
 *
 * When no assignment attains `polarity` at all, every variable qualifies
 * vacuously and the result is 1 (nullopt at arity 0).
 */
std::optional<std::uint32_t> separating_index( const bool_fun& f, bool polarity );

/* Canonical gate functions used throughout tests and fixtures. */
bool_fun fun_and();
bool_fun fun_or();
bool_fun fun_not();
bool_fun fun_xor();
bool_fun fun_xnor();
bool_fun fun_nand();
bool_fun fun_nor();
bool_fun fun_majority3();
/* d(x1, x2, x3), a single ternary gate generating all self-dual functions. */
bool_fun fun_self_dual_generator();
/* x1 AND (x2 OR NOT x3) */
bool_fun fun_and_or_not();
/* x1 OR (x2 AND NOT x3) */
bool_fun fun_or_and_not();
/* x1 AND (x2 OR x3) */
bool_fun fun_and_or();
/* x1 OR (x2 AND x3) */
bool_fun fun_or_and();

} // namespace ndpower
