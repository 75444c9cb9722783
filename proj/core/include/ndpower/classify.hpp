#pragma once

#include <optional>

#include "circuit.hpp"
#include "closure.hpp"
#include "gate_base.hpp"

namespace ndpower
{

/*! \brief The dichotomy: a base either lacks nondeterministic power (its
 * nondeterministic circuits can be determinized with no size blowup) or
 * has full power (nondeterminism can hide satisfiability-hard questions).
 */
enum class power_verdict
{
  lacks,
  full
};

/* Why a base lacks power; the three cases are exactly the bases all of
 * whose gates are monotone, affine, or self-dual. */
enum class lacks_reason
{
  monotone,
  linear,
  self_dual
};

/* Which ternary switch function witnesses full power. */
enum class full_gadget
{
  and_or_not, /* x1 AND (x2 OR NOT x3) */
  or_and_not  /* x1 OR (x2 AND NOT x3) */
};

struct power_classification
{
  power_verdict verdict;
  std::optional<lacks_reason> reason;
  std::optional<full_gadget> gadget;
  /* Constant-free circuit over the base computing the gadget. */
  std::optional<circuit> witness;
  /* Five-predicate completeness of the base. */
  bool complete = false;
  /* Both constant functions derivable from the base alone. */
  bool has_both_constants = false;
};

/*! \brief Post-style completeness: the base escapes all five maximal
 * predicate classes (0-preserving, 1-preserving, monotone, affine,
 * self-dual).
 */
bool is_complete( const gate_base& base );

/*! \brief Classifies a base as lacking or having full nondeterministic
 * power.
 *
 * A base lacks power iff all gates are monotone, all are affine, or all
 * are self-dual; otherwise one of the two ternary gadgets is derivable
 * without constants at arity 3, and the returned witness computes it.
 */
power_classification classify( const gate_base& base );

} // namespace ndpower
