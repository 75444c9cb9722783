#pragma once

#include <cstdint>
#include <vector>

#include "circuit.hpp"
#include "closure.hpp"
#include "gate_base.hpp"

namespace ndpower
{

/*! \brief Affine normal form of a circuit over affine gates:
 * C(x, y) = c XOR (XOR of x_i with a[i-1]) XOR (XOR of y_j with b[j-1]).
 */
struct affine_form
{
  std::vector<bool> a;
  std::vector<bool> b;
  bool c = false;
};

/*! \brief Reads off the affine normal form by evaluating at the zero
 * vector and at each unit vector, then verifies the form against the
 * full truth table.
 *
 * Requires every gate function of the base to be affine and n + m within
 * the exhaustive bound.
 */
affine_form extract_affine( const circuit& c );

/*! \brief Rewrites every gate with its witness circuit over the target
 * closure's base.
 *
 * Every gate function of c's base must be a member of `target`. Input,
 * nondeterministic and constant nodes are copied as-is. The result is
 * checked equivalent under deterministic semantics when within the
 * exhaustive bound, and its gate count is at most the largest used
 * witness size times |c|.
 */
circuit convert_base( const circuit& c, const clone_closure& target );

/*! \brief Replaces every nondeterministic input with constant 1.
 *
 * Sound for bases of monotone gates: raising any input never turns an
 * accepting run into a rejecting one, so the all-ones y choice dominates.
 * Gate count is unchanged; the result has m = 0 and its deterministic
 * table equals the input's existential table (oracle-checked).
 */
circuit determinize_monotone( const circuit& c );

/*! \brief Replaces every nondeterministic input with x_1.
 *
 * Requires all gates self-dual, n >= 1, no constant nodes, and the
 * existential table of c itself self-dual; the last check is exhaustive
 * and a violation is reported as not_self_dual_error carrying an
 * assignment x with f(x) = f(complement of x). Gate count unchanged.
 */
circuit determinize_self_dual( const circuit& c );

/*! \brief Rebuilds the existential function as a chain of at most n + 1
 * gates over `target_base`.
 *
 * Requires all gates of c and of the target base affine. If any
 * nondeterministic input has a live coefficient the existential function
 * is constant 1, realized over the target base when derivable (a
 * constant node with a validation warning otherwise); else the affine
 * form over x is rebuilt as a parity chain.
 */
circuit determinize_linear( const circuit& c, const gate_base& target_base );

/*! \brief Removes constants by padding: two fresh inputs x' = x_{n+1},
 * x'' = x_{n+2} replace constants 1 and 0, and the whole circuit is
 * wrapped as x' AND (C OR x'') via the closure's witness for
 * x AND (y OR z).
 *
 * The result is constant-free over gadget_closure's base and satisfies
 * out(x,1,0) = c(x), out(x,1,1) = 1, out(x,0,anything) = 0 under both
 * semantics (oracle-checked).
 */
circuit lift_and( const circuit& c, const clone_closure& gadget_closure );

/* Dual of lift_and: x' replaces constant 0, x'' replaces constant 1, the
 * wrap is x' OR (C AND x''), and out(x,0,1) = c(x), out(x,1,anything) = 1,
 * out(x,0,0) = 0. */
circuit lift_or( const circuit& c, const clone_closure& gadget_closure );

/*! \brief Rewrites a NOT-bearing {AND, OR, NOT} circuit over
 * {AND, OR, XNOR}.
 *
 * Requires m = 0, n >= 1, no constant nodes, and a 1-reproducing
 * deterministic table (f at all-ones = 1). A single shared chain
 * t = x_1 AND ... AND x_n is added when any NOT gate is present, and each
 * NOT(g) becomes XNOR(g, t): off the all-ones assignment t = 0 and XNOR
 * with 0 negates; at all-ones both sides evaluate to 1. Size grows by at
 * most n - 1 gates.
 */
circuit not_eliminate_conj( const circuit& c );

/* Dual pipeline for 0-reproducing tables: t = x_1 OR ... OR x_n, each
 * NOT(g) becomes XOR(g, t), output over {AND, OR, XOR}. */
circuit not_eliminate_disj( const circuit& c );

/*! \brief Full pipeline from an {AND, OR, NOT} circuit to a pure circuit
 * over a single-gadget-style base.
 *
 * For polarity 1: the table must be 1-reproducing with a 1-separating
 * input x_i; the pipeline runs not_eliminate_conj, converts into
 * closure_with_const (the closure of the base plus an arity-0 constant-1
 * gate, which must contain AND, OR, XNOR), substitutes x_i for every
 * constant-1 node, and wraps the output as x_i AND (...) using a
 * constant-free witness of x AND (y OR z) found over the base at arity 3.
 * Polarity 0 is the dual. The result uses only base gates and is checked
 * equivalent to c.
 */
circuit compile_to_separating_base( const circuit& c, const gate_base& base, bool polarity,
                                    const clone_closure& closure_with_const );

} // namespace ndpower
