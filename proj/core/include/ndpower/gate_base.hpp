#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bool_fun.hpp"

namespace ndpower
{

/* One named gate function of a base. */
struct gate
{
  std::string name;
  bool_fun fun;

  bool operator==( const gate& other ) const = default;
};

/*! \brief A finite set of named gate functions.
 *
 * Names are unique, start with a letter or underscore, and may not be a
 * statement keyword of the circuit format. Gate arities are bounded by
 * limits::max_gate_arity(). Order is the order of construction and is
 * preserved by parse/serialize round trips.
 *
 * Text format, one gate per line: `<name> <arity> <table-bits>` where the
 * bits list table entries from index 0 upward. `#` starts a comment.
 */
class gate_base
{
public:
  explicit gate_base( std::vector<gate> gates );

  static gate_base parse( std::string_view text );
  std::string serialize() const;

  std::size_t size() const { return gates_.size(); }
  const gate& operator[]( std::size_t index ) const { return gates_[index]; }
  const std::vector<gate>& gates() const { return gates_; }

  std::optional<std::size_t> index_of( std::string_view name ) const;
  /* First gate computing exactly `fun`, if any. */
  std::optional<std::size_t> index_of_fun( const bool_fun& fun ) const;

  bool operator==( const gate_base& other ) const = default;

private:
  std::vector<gate> gates_;
};

/* True for names usable as gate or circuit node identifiers. */
bool is_valid_identifier( std::string_view name );

} // namespace ndpower
