#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bool_fun.hpp"
#include "gate_base.hpp"

namespace ndpower
{

/* Which function a circuit denotes: plain evaluation over all inputs, or
 * existential quantification over the nondeterministic ones. */
enum class semantics
{
  deterministic,
  nondeterministic
};

/*! \brief A Boolean circuit over a gate base, with n regular inputs and m
 * nondeterministic inputs.
 *
 * Nodes live in a vector and refer to operands by index; operand indices
 * always point backward, so the node order is a topological order. Node
 * names are optional; the serializer invents names for anonymous nodes.
 * The gate count |C| excludes input, nondeterministic and constant nodes.
 */
class circuit
{
public:
  enum class node_kind : std::uint8_t
  {
    input,
    nondet,
    constant,
    gate
  };

  struct node
  {
    node_kind kind = node_kind::constant;
    /* input/nondet: 1-based variable index; gate: index into the base. */
    std::uint32_t index = 0u;
    bool value = false;
    std::vector<std::uint32_t> operands;
    std::string name;

    bool operator==( const node& other ) const = default;
  };

  circuit( gate_base base, std::uint32_t num_inputs, std::uint32_t num_nondet );

  /* Checked builders; they return the id of the new node. */
  std::uint32_t add_input( std::uint32_t var );
  std::uint32_t add_nondet( std::uint32_t var );
  std::uint32_t add_constant( bool value );
  std::uint32_t add_gate( std::size_t gate_index, std::vector<std::uint32_t> operands );
  std::uint32_t add_gate( std::string_view gate_name, std::vector<std::uint32_t> operands );
  void set_output( std::uint32_t id );
  void set_node_name( std::uint32_t id, std::string name );

  const gate_base& base() const { return base_; }
  std::uint32_t num_inputs() const { return num_inputs_; }
  std::uint32_t num_nondet() const { return num_nondet_; }
  const std::vector<node>& nodes() const { return nodes_; }
  std::uint32_t output() const;
  bool has_output() const { return output_.has_value(); }

  /* Number of gate nodes. */
  std::uint32_t num_gates() const;
  bool has_constants() const;
  bool has_nondet_nodes() const;

  bool operator==( const circuit& other ) const = default;

private:
  gate_base base_;
  std::uint32_t num_inputs_;
  std::uint32_t num_nondet_;
  std::vector<node> nodes_;
  std::optional<std::uint32_t> output_;
};

/*! \brief Structural check result.
 *
 * `violations` are hard faults (dangling operands, bad indices, arity
 * mismatches, missing output); `warnings` flag legal but suspicious
 * shapes, currently constant nodes in a circuit whose base could express
 * them as gates, and nodes unreachable from the output.
 */
struct validation_report
{
  std::vector<std::string> violations;
  std::vector<std::string> warnings;

  bool ok() const { return violations.empty(); }
};

validation_report validate( const circuit& c );

/* Plain evaluation; x.width must equal n and y.width must equal m. */
bool eval_det( const circuit& c, assignment x, assignment y );

/* Existential evaluation: true iff some assignment to the m
 * nondeterministic inputs makes the circuit output 1. Enumerates 2^m
 * candidates bit-parallel; m is bounded by limits::exhaustive_input_bound(). */
bool eval_nondet( const circuit& c, assignment x );

/*! \brief The function a circuit denotes, as an explicit truth table.
 *
 * Under deterministic semantics the result has arity n + m with the
 * nondeterministic inputs ordered after the regular ones; under
 * nondeterministic semantics the result has arity n. Requires the
 * relevant arity to be within limits::exhaustive_input_bound().
 */
bool_fun truth_table( const circuit& c, semantics sem );

/*! \brief Exhaustive equivalence check; nullopt when the two circuits
 * denote the same function, otherwise the first differing assignment.
 *
 * Both circuits must denote functions of the same arity (n + m for
 * deterministic semantics, n for nondeterministic).
 */
std::optional<assignment> find_counterexample( const circuit& a, semantics sem_a, const circuit& b,
                                               semantics sem_b );

/* Smallest separating input index of the existential function, if any. */
std::optional<std::uint32_t> find_separating_input( const circuit& c, bool polarity );

/*! \brief Parses the circuit text format.
 *
 * Lines: `inputs n=<int> m=<int>`, then node definitions
 * `<name> = input <i>` / `<name> = nondet <j>` / `<name> = const <0|1>` /
 * `<name> = <gate-name> <operand>...`, then a final `output <name>`.
 * `#` starts a comment. Operands must be previously defined names.
 */
circuit parse_circuit( std::string_view text, const gate_base& base );

std::string serialize_circuit( const circuit& c );

} // namespace ndpower
