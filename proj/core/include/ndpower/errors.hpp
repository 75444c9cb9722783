#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace ndpower
{

/* Base class of everything this library throws on bad input. */
class error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/*! \brief Malformed text input (base file, circuit file, function literal).
 *
 * Carries the 1-based line number of the offending line; 0 when no line
 * applies.
 */
class parse_error : public error
{
public:
  parse_error( std::size_t line, const std::string& message )
      : error( line == 0u ? message : "line " + std::to_string( line ) + ": " + message ),
        line_( line )
  {
  }

  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

/* A documented precondition of an operation does not hold. */
class precondition_error : public error
{
public:
  using error::error;
};

/*! \brief An internal exhaustive recheck disagreed with the construction.
 *
 * Every circuit transformation re-evaluates its output against the input
 * at desk scale; this is only thrown on an implementation defect.
 */
class oracle_error : public error
{
public:
  using error::error;
};

/*! \brief Rejection witness of determinize_self_dual.
 *
 * Carries an assignment x (packed, bit j = x_{j+1}) with f(x) equal to
 * f on the complemented assignment, proving f is not self-dual.
 */
class not_self_dual_error : public precondition_error
{
public:
  not_self_dual_error( std::uint64_t witness, std::uint32_t width, const std::string& message )
      : precondition_error( message ), witness_( witness ), width_( width )
  {
  }

  std::uint64_t witness() const { return witness_; }
  std::uint32_t width() const { return width_; }

private:
  std::uint64_t witness_;
  std::uint32_t width_;
};

} // namespace ndpower
