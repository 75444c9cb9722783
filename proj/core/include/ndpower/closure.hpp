#pragma once

#include <cstdint>
#include <vector>

#include "circuit.hpp"
#include "gate_base.hpp"

namespace ndpower
{

/*! \brief One function derivable from a base, with a witness circuit.
 *
 * The witness has n = fun.arity() regular inputs, no nondeterministic
 * inputs, and computes exactly `fun`. `cost` equals the witness gate
 * count; witnesses are cost-minimal under sharing of identical operand
 * subtrees (two operands that are the same derived function reuse one
 * subcircuit).
 */
struct clone_member
{
  bool_fun fun;
  circuit witness;
  std::uint32_t cost;
};

/*! \brief All functions of arity up to a bound derivable from a base by
 * composition and projections.
 *
 * For each arity a <= arity_bound() the member list is exactly the set
 * of a-ary functions expressible as a circuit over the base (plus
 * constant nodes when constants_allowed()), each with a smallest-found
 * witness. Members are ordered by discovery: ascending cost, ties broken
 * by truth table value.
 */
class clone_closure
{
public:
  const gate_base& base() const { return base_; }
  std::uint32_t arity_bound() const { return arity_bound_; }
  bool constants_allowed() const { return constants_allowed_; }
  /* False when an early-stop target ended the search before exhaustion. */
  bool reached_fixpoint() const { return reached_fixpoint_; }

  const std::vector<clone_member>& members( std::uint32_t arity ) const;
  /* Member computing exactly `fun`, or nullptr; the function's arity must
   * be within the bound. */
  const clone_member* member( const bool_fun& fun ) const;
  bool contains( const bool_fun& fun ) const;
  std::size_t size() const;
  /* Largest witness cost among members at the arity bound; the size
   * factor incurred by rewriting one gate during base conversion. */
  std::uint32_t conversion_constant() const;

private:
  friend clone_closure compute_closure( const gate_base&, std::uint32_t, bool, const std::vector<bool_fun>* );

  gate_base base_{ std::vector<gate>{ gate{ "x", bool_fun::projection( 1u, 1u ) } } };
  std::uint32_t arity_bound_ = 0u;
  bool constants_allowed_ = false;
  bool reached_fixpoint_ = true;
  std::vector<std::vector<clone_member>> by_arity_;
};

/*! \brief Computes the arity-bounded closure of a base.
 *
 * With constants_allowed, constant nodes of both polarities are available
 * as leaves in addition to projections. Search is Dijkstra over witness
 * cost, so each member carries a minimal witness under subtree sharing.
 * Throws when a single arity level exceeds an internal size guard of
 * 2^20 members; bounds above 4 are infeasible for expressive bases.
 */
clone_closure closure( const gate_base& base, std::uint32_t arity_bound, bool constants_allowed );

/* Same search, stopping as soon as any target function is derived. */
clone_closure closure_until( const gate_base& base, std::uint32_t arity_bound, bool constants_allowed,
                             const std::vector<bool_fun>& targets );

} // namespace ndpower
