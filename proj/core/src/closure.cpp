#include "ndpower/closure.hpp"

#include <algorithm>
#include <cassert>
#include <queue>
#include <unordered_map>

#include "ndpower/errors.hpp"
#include "ndpower/limits.hpp"
#include "sim.hpp"

namespace ndpower
{

namespace
{

constexpr std::size_t level_size_guard = std::size_t( 1 ) << 20u;

struct fun_hash
{
  std::size_t operator()( const bool_fun& f ) const
  {
    std::uint64_t h = 14695981039346656037ull;
    const auto mix = [&h]( std::uint64_t v ) {
      for ( int i = 0; i < 8; ++i )
      {
        h ^= ( v >> ( 8 * i ) ) & 0xffu;
        h *= 1099511628211ull;
      }
    };
    mix( f.arity() );
    for ( const auto w : f.words() )
    {
      mix( w );
    }
    return static_cast<std::size_t>( h );
  }
};

/* How a not-yet-finalized function can currently be derived. */
struct pending_rec
{
  std::uint32_t cost;
  std::uint32_t gate;
  std::vector<std::uint32_t> operands;
};

struct heap_entry
{
  std::uint32_t cost;
  bool_fun fun;
};

struct heap_order
{
  bool operator()( const heap_entry& a, const heap_entry& b ) const
  {
    if ( a.cost != b.cost )
    {
      return a.cost > b.cost;
    }
    return a.fun.words() > b.fun.words();
  }
};

/* One arity level of the closure search. Levels are independent: every
 * a-ary member is a composition of base gates over a-ary members, so no
 * cross-arity derivations are needed. */
class level_search
{
public:
  level_search( const gate_base& base, std::uint32_t arity, bool constants_allowed,
                const std::vector<bool_fun>* targets )
      : base_( base ), arity_( arity ), constants_allowed_( constants_allowed ), targets_( targets )
  {
  }

  /* Returns true when a target function was derived and stopped the
   * search early. */
  bool run( std::vector<clone_member>& out )
  {
    for ( std::uint32_t v = 1u; v <= arity_; ++v )
    {
      if ( finalize_leaf( bool_fun::projection( arity_, v ), make_projection_witness( v ) ) )
      {
        out = std::move( members_ );
        return true;
      }
    }
    if ( constants_allowed_ )
    {
      for ( const bool value : { false, true } )
      {
        if ( finalize_leaf( bool_fun::constant( arity_, value ), make_constant_witness( value ) ) )
        {
          out = std::move( members_ );
          return true;
        }
      }
    }
    for ( std::size_t g = 0u; g < base_.size(); ++g )
    {
      if ( base_[g].fun.arity() == 0u )
      {
        offer( bool_fun::constant( arity_, base_[g].fun.bit( 0u ) ), 1u, static_cast<std::uint32_t>( g ), {} );
      }
    }
    bool stopped = false;
    while ( !heap_.empty() )
    {
      heap_entry top = heap_.top();
      heap_.pop();
      if ( final_idx_.count( top.fun ) )
      {
        continue;
      }
      const auto it = pending_.find( top.fun );
      assert( it != pending_.end() );
      if ( it->second.cost != top.cost )
      {
        continue;
      }
      const pending_rec rec = it->second;
      if ( finalize( top.fun, rec.cost, make_gate_witness( rec ) ) )
      {
        stopped = true;
        break;
      }
    }
    out = std::move( members_ );
    return stopped;
  }

private:
  circuit fresh_witness() const
  {
    circuit w( base_, arity_, 0u );
    for ( std::uint32_t v = 1u; v <= arity_; ++v )
    {
      w.add_input( v );
    }
    return w;
  }

  circuit make_projection_witness( std::uint32_t var ) const
  {
    circuit w = fresh_witness();
    w.set_output( var - 1u );
    return w;
  }

  circuit make_constant_witness( bool value ) const
  {
    circuit w = fresh_witness();
    w.set_output( w.add_constant( value ) );
    return w;
  }

  circuit make_gate_witness( const pending_rec& rec ) const
  {
    circuit w = fresh_witness();
    std::vector<std::uint32_t> input_map( arity_ );
    for ( std::uint32_t v = 0u; v < arity_; ++v )
    {
      input_map[v] = v;
    }
    std::unordered_map<std::uint32_t, std::uint32_t> sub_out;
    std::vector<std::uint32_t> ops;
    ops.reserve( rec.operands.size() );
    for ( const auto idx : rec.operands )
    {
      auto it = sub_out.find( idx );
      if ( it == sub_out.end() )
      {
        it = sub_out.emplace( idx, detail::splice( w, members_[idx].witness, input_map ) ).first;
      }
      ops.push_back( it->second );
    }
    w.set_output( w.add_gate( rec.gate, std::move( ops ) ) );
    return w;
  }

  bool finalize_leaf( const bool_fun& fun, circuit witness )
  {
    if ( final_idx_.count( fun ) )
    {
      return false;
    }
    return finalize( fun, 0u, std::move( witness ) );
  }

  bool finalize( const bool_fun& fun, std::uint32_t cost, circuit witness )
  {
    if ( members_.size() >= level_size_guard )
    {
      throw precondition_error( "closure level at arity " + std::to_string( arity_ ) +
                                " exceeds the size guard; use a smaller arity bound" );
    }
    const auto idx = static_cast<std::uint32_t>( members_.size() );
    members_.push_back( clone_member{ fun, std::move( witness ), cost } );
    final_idx_.emplace( fun, idx );
    pending_.erase( fun );
    if ( targets_ &&
         std::find( targets_->begin(), targets_->end(), fun ) != targets_->end() )
    {
      return true;
    }
    expand( idx );
    return false;
  }

  void offer( const bool_fun& fun, std::uint32_t cost, std::uint32_t gate,
              std::vector<std::uint32_t> operands )
  {
    if ( final_idx_.count( fun ) )
    {
      return;
    }
    const auto it = pending_.find( fun );
    if ( it != pending_.end() && it->second.cost <= cost )
    {
      return;
    }
    pending_[fun] = pending_rec{ cost, gate, std::move( operands ) };
    heap_.push( heap_entry{ cost, fun } );
  }

  /* Enumerates every operand tuple containing the new member at least
   * once: choose the set of positions pinned to it, then sweep the rest
   * over the previously finalized members. */
  void expand( std::uint32_t new_idx )
  {
    std::vector<const detail::sim_table*> op_tables;
    std::vector<std::uint32_t> tuple;
    std::vector<std::uint32_t> free_pos;
    for ( std::size_t g = 0u; g < base_.size(); ++g )
    {
      const auto& fun = base_[g].fun;
      const std::uint32_t r = fun.arity();
      if ( r == 0u )
      {
        continue;
      }
      for ( std::uint32_t pinned = 1u; pinned < ( 1u << r ); ++pinned )
      {
        if ( new_idx == 0u && pinned != ( 1u << r ) - 1u )
        {
          continue;
        }
        tuple.assign( r, new_idx );
        free_pos.clear();
        for ( std::uint32_t p = 0u; p < r; ++p )
        {
          if ( !( ( pinned >> p ) & 1u ) )
          {
            tuple[p] = 0u;
            free_pos.push_back( p );
          }
        }
        while ( true )
        {
          emit( static_cast<std::uint32_t>( g ), tuple, op_tables );
          std::size_t d = 0u;
          for ( ; d < free_pos.size(); ++d )
          {
            if ( ++tuple[free_pos[d]] < new_idx )
            {
              break;
            }
            tuple[free_pos[d]] = 0u;
          }
          if ( d == free_pos.size() )
          {
            break;
          }
        }
      }
    }
  }

  void emit( std::uint32_t g, const std::vector<std::uint32_t>& tuple,
             std::vector<const detail::sim_table*>& op_tables )
  {
    op_tables.clear();
    for ( const auto idx : tuple )
    {
      op_tables.push_back( &members_[idx].fun.words() );
    }
    bool_fun fun = bool_fun::from_words( arity_, detail::sim_gate( base_[g].fun, op_tables, arity_ ) );
    if ( final_idx_.count( fun ) )
    {
      return;
    }
    std::uint32_t cost = 1u;
    for ( std::size_t j = 0u; j < tuple.size(); ++j )
    {
      if ( std::find( tuple.begin(), tuple.begin() + j, tuple[j] ) == tuple.begin() + j )
      {
        cost += members_[tuple[j]].cost;
      }
    }
    offer( fun, cost, g, tuple );
  }

  const gate_base& base_;
  std::uint32_t arity_;
  bool constants_allowed_;
  const std::vector<bool_fun>* targets_;

  std::vector<clone_member> members_;
  std::unordered_map<bool_fun, std::uint32_t, fun_hash> final_idx_;
  std::unordered_map<bool_fun, pending_rec, fun_hash> pending_;
  std::priority_queue<heap_entry, std::vector<heap_entry>, heap_order> heap_;
};

} // namespace

clone_closure compute_closure( const gate_base& base, std::uint32_t arity_bound, bool constants_allowed,
                               const std::vector<bool_fun>* targets )
{
  if ( arity_bound > limits::max_gate_arity() )
  {
    throw precondition_error( "closure arity bound " + std::to_string( arity_bound ) +
                              " exceeds configured maximum arity " +
                              std::to_string( limits::max_gate_arity() ) );
  }
  clone_closure result;
  result.base_ = base;
  result.arity_bound_ = arity_bound;
  result.constants_allowed_ = constants_allowed;
  result.by_arity_.resize( arity_bound + 1u );
  for ( std::uint32_t a = 0u; a <= arity_bound; ++a )
  {
    level_search search( base, a, constants_allowed, targets );
    if ( search.run( result.by_arity_[a] ) )
    {
      result.reached_fixpoint_ = false;
      break;
    }
  }
  return result;
}

const std::vector<clone_member>& clone_closure::members( std::uint32_t arity ) const
{
  if ( arity >= by_arity_.size() )
  {
    throw precondition_error( "arity " + std::to_string( arity ) + " beyond closure bound " +
                              std::to_string( arity_bound_ ) );
  }
  return by_arity_[arity];
}

const clone_member* clone_closure::member( const bool_fun& fun ) const
{
  if ( fun.arity() > arity_bound_ )
  {
    throw precondition_error( "member query at arity " + std::to_string( fun.arity() ) +
                              " beyond closure bound " + std::to_string( arity_bound_ ) );
  }
  for ( const auto& m : by_arity_[fun.arity()] )
  {
    if ( m.fun == fun )
    {
      return &m;
    }
  }
  return nullptr;
}

bool clone_closure::contains( const bool_fun& fun ) const
{
  return member( fun ) != nullptr;
}

std::size_t clone_closure::size() const
{
  std::size_t total = 0u;
  for ( const auto& level : by_arity_ )
  {
    total += level.size();
  }
  return total;
}

std::uint32_t clone_closure::conversion_constant() const
{
  std::uint32_t mx = 0u;
  for ( const auto& m : by_arity_[arity_bound_] )
  {
    mx = std::max( mx, m.cost );
  }
  return mx;
}

clone_closure closure( const gate_base& base, std::uint32_t arity_bound, bool constants_allowed )
{
  return compute_closure( base, arity_bound, constants_allowed, nullptr );
}

clone_closure closure_until( const gate_base& base, std::uint32_t arity_bound, bool constants_allowed,
                             const std::vector<bool_fun>& targets )
{
  return compute_closure( base, arity_bound, constants_allowed, &targets );
}

} // namespace ndpower
