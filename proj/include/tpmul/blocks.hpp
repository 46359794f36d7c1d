/*!
  \file blocks.hpp
  \brief Arithmetic building blocks emitted into a `circuit_builder`

  Partial-product generation, (3,2)/(2,2) counter based column reduction
  with three placement policies, ripple-carry adders, the binary-to-excess-1
  incrementer, bus multiplexers and the 2-to-3 operation-mode decoder.

  Generators emit literal structures. Nothing is simplified, so an adder
  bit whose operand is tied to CONST0 still costs a full adder.
*/

#pragma once

#include "netlist.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tpmul
{

/*! \brief Nets grouped by bit weight; column w holds nets of weight 2^w. */
struct column_stack
{
  std::vector<bus> columns;

  std::size_t max_height() const
  {
    std::size_t h = 0;
    for ( auto const& col : columns )
    {
      h = std::max( h, col.size() );
    }
    return h;
  }

  std::vector<std::size_t> heights() const
  {
    std::vector<std::size_t> out;
    for ( auto const& col : columns )
    {
      out.push_back( col.size() );
    }
    return out;
  }
};

enum class reduction_policy : uint8_t
{
  wallace,
  dadda,
  hpm_regular
};

inline constexpr std::array<reduction_policy, 3> all_policies = {
    reduction_policy::wallace, reduction_policy::dadda, reduction_policy::hpm_regular };

inline constexpr std::string_view policy_name( reduction_policy policy )
{
  switch ( policy )
  {
  case reduction_policy::wallace: return "wallace";
  case reduction_policy::dadda: return "dadda";
  case reduction_policy::hpm_regular: return "hpm-regular";
  }
  return "?";
}

inline std::optional<reduction_policy> policy_from_name( std::string_view name )
{
  for ( auto p : all_policies )
  {
    if ( policy_name( p ) == name )
    {
      return p;
    }
  }
  return std::nullopt;
}

struct adder_bit
{
  net_id sum;
  net_id carry;
};

/*! \brief One counter placed by the reduction; inputs come from `column`, carry goes to `column + 1`. */
struct counter_placement
{
  uint32_t stage;
  uint32_t column;
  bus inputs;
  net_id sum;
  net_id carry;
};

/*! \brief Reduced partial products: two LSB-aligned rows whose sum equals the stack value.

  Missing entries are the builder's CONST0 net. Columns below `first_pair`
  hold at most one net and need no addition; `counters` lists every
  (3,2)/(2,2) counter in placement order.
*/
struct two_row_form
{
  bus sum_row;
  bus carry_row;
  std::vector<uint8_t> heights;
  std::size_t first_pair{ 0 };
  std::vector<counter_placement> counters;
  uint32_t stages{ 0 };

  std::size_t width() const { return sum_row.size(); }

  std::size_t full_adders() const
  {
    return static_cast<std::size_t>( std::count_if( counters.begin(), counters.end(),
                                                    []( auto const& c ) { return c.inputs.size() == 3u; } ) );
  }

  std::size_t half_adders() const { return counters.size() - full_adders(); }
};

/*! \brief The three clock-gate enables decoded from the operation mode. */
struct gating_signals
{
  net_id t1; /*!< M1 banks */
  net_id t2; /*!< M2 and M3 banks */
  net_id t3; /*!< M4 banks */
};

/*! \brief AND-array partial products; bit x_i * y_j lands in column i + j. */
inline column_stack gen_ppg( circuit_builder& b, bus const& x, bus const& y )
{
  if ( x.size() != y.size() || x.empty() )
  {
    throw construction_error( "gen_ppg: width mismatch (" + std::to_string( x.size() ) + " vs " + std::to_string( y.size() ) + ")" );
  }
  auto const n = x.size();
  column_stack stack;
  stack.columns.resize( 2 * n - 1 );
  for ( std::size_t i = 0; i < n; ++i )
  {
    for ( std::size_t j = 0; j < n; ++j )
    {
      stack.columns[i + j].push_back( b.and2( x[i], y[j] ) );
    }
  }
  return stack;
}

/*! \brief (3,2) counter: sum = (a ^ b) ^ cin, carry = a.b + (a ^ b).cin. */
inline adder_bit gen_full_adder( circuit_builder& b, net_id a, net_id bb, net_id cin )
{
  auto ab = b.xor2( a, bb );
  auto sum = b.xor2( ab, cin );
  auto g = b.and2( a, bb );
  auto p = b.and2( ab, cin );
  auto carry = b.or2( g, p );
  return { sum, carry };
}

/*! \brief (2,2) counter. */
inline adder_bit gen_half_adder( circuit_builder& b, net_id a, net_id bb )
{
  auto sum = b.xor2( a, bb );
  auto carry = b.and2( a, bb );
  return { sum, carry };
}

namespace detail
{

/* Dadda height bounds 2, 3, 4, 6, 9, 13, ... strictly below `height`, largest first. */
inline std::vector<std::size_t> dadda_targets( std::size_t height )
{
  std::vector<std::size_t> bounds;
  for ( std::size_t d = 2; d < height; d = d * 3 / 2 )
  {
    bounds.push_back( d );
  }
  std::reverse( bounds.begin(), bounds.end() );
  return bounds;
}

/* Unit-gate arrival estimates used by the hpm-regular wiring rule. */
class arrival_model
{
public:
  uint32_t operator()( net_id n ) const { return n.index < time_.size() ? time_[n.index] : 0u; }

  void set( net_id n, uint32_t t )
  {
    if ( n.index >= time_.size() )
    {
      time_.resize( n.index + 1u, 0u );
    }
    time_[n.index] = t;
  }

private:
  std::vector<uint32_t> time_;
};

class reducer
{
public:
  reducer( circuit_builder& b, reduction_policy policy ) : b_( b ), policy_( policy ) {}

  two_row_form run( column_stack stack )
  {
    cols_ = std::move( stack.columns );
    if ( policy_ == reduction_policy::wallace )
    {
      while ( max_height() > 2u )
      {
        wallace_pass();
        ++stage_;
      }
    }
    else
    {
      for ( auto target : dadda_targets( max_height() ) )
      {
        dadda_stage( target );
        ++stage_;
      }
    }
    return finish();
  }

private:
  std::size_t max_height() const
  {
    std::size_t h = 0;
    for ( auto const& col : cols_ )
    {
      h = std::max( h, col.size() );
    }
    return h;
  }

  void place( std::size_t column, bus inputs, std::vector<bus>& next )
  {
    adder_bit out;
    if ( inputs.size() == 3u )
    {
      out = gen_full_adder( b_, inputs[0], inputs[1], inputs[2] );
      auto const ab = std::max( arrival_( inputs[0] ), arrival_( inputs[1] ) ) + 1u;
      auto const mid = std::max( ab, arrival_( inputs[2] ) ) + 1u;
      arrival_.set( out.sum, mid );
      arrival_.set( out.carry, std::max( std::max( arrival_( inputs[0] ), arrival_( inputs[1] ) ) + 1u, mid ) + 1u );
    }
    else
    {
      out = gen_half_adder( b_, inputs[0], inputs[1] );
      auto const t = std::max( arrival_( inputs[0] ), arrival_( inputs[1] ) ) + 1u;
      arrival_.set( out.sum, t );
      arrival_.set( out.carry, t );
    }
    if ( next.size() < column + 2u )
    {
      next.resize( column + 2u );
    }
    next[column].push_back( out.sum );
    next[column + 1u].push_back( out.carry );
    counters_.push_back( { stage_, static_cast<uint32_t>( column ), std::move( inputs ), out.sum, out.carry } );
  }

  void wallace_pass()
  {
    std::vector<bus> next( cols_.size() + 1u );
    for ( std::size_t w = 0; w < cols_.size(); ++w )
    {
      auto const& col = cols_[w];
      auto const full = col.size() / 3u;
      for ( std::size_t g = 0; g < full; ++g )
      {
        place( w, { col[3 * g], col[3 * g + 1], col[3 * g + 2] }, next );
      }
      auto const rem = col.size() % 3u;
      if ( rem == 2u )
      {
        place( w, { col[3 * full], col[3 * full + 1] }, next );
      }
      else if ( rem == 1u )
      {
        next[w].push_back( col.back() );
      }
    }
    cols_ = trim( std::move( next ) );
  }

  void dadda_stage( std::size_t target )
  {
    std::vector<bus> next( cols_.size() + 1u );
    for ( std::size_t w = 0; w < cols_.size(); ++w )
    {
      auto old = cols_[w];
      if ( policy_ == reduction_policy::hpm_regular )
      {
        std::stable_sort( old.begin(), old.end(), [this]( net_id a, net_id c ) { return arrival_( a ) < arrival_( c ); } );
      }
      std::size_t pos = 0;
      auto height = old.size() + next[w].size();
      while ( height > target )
      {
        auto const take = height - target == 1u ? 2u : 3u;
        if ( pos + take > old.size() )
        {
          throw std::logic_error( "dadda stage ran out of counter inputs in column " + std::to_string( w ) );
        }
        place( w, bus( old.begin() + static_cast<std::ptrdiff_t>( pos ), old.begin() + static_cast<std::ptrdiff_t>( pos + take ) ), next );
        pos += take;
        height -= take - 1u;
      }
      bus merged( old.begin() + static_cast<std::ptrdiff_t>( pos ), old.end() );
      merged.insert( merged.end(), next[w].begin(), next[w].end() );
      next[w] = std::move( merged );
    }
    cols_ = trim( std::move( next ) );
  }

  static std::vector<bus> trim( std::vector<bus> cols )
  {
    while ( !cols.empty() && cols.back().empty() )
    {
      cols.pop_back();
    }
    return cols;
  }

  two_row_form finish()
  {
    two_row_form out;
    auto const zero = b_.constant( false );
    out.first_pair = cols_.size();
    for ( std::size_t w = 0; w < cols_.size(); ++w )
    {
      auto const& col = cols_[w];
      out.sum_row.push_back( col.size() > 0u ? col[0] : zero );
      out.carry_row.push_back( col.size() > 1u ? col[1] : zero );
      out.heights.push_back( static_cast<uint8_t>( col.size() ) );
      if ( col.size() == 2u && out.first_pair == cols_.size() )
      {
        out.first_pair = w;
      }
    }
    out.counters = std::move( counters_ );
    out.stages = stage_;
    return out;
  }

  circuit_builder& b_;
  reduction_policy policy_;
  std::vector<bus> cols_;
  std::vector<counter_placement> counters_;
  arrival_model arrival_;
  uint32_t stage_{ 0 };
};

} // namespace detail

/*! \brief Column compression down to two rows.

  - `wallace`: every pass groups each column into full adders, plus a half
    adder for a remainder of two.
  - `dadda`: reduce only to the next bound of 2, 3, 4, 6, 9, 13, ... with
    the fewest counters, consuming nets first-in first-out.
  - `hpm-regular`: the Dadda counter counts, with each counter fed by the
    earliest-arriving nets of its column (unit-delay estimate) and the
    latest of the three on the carry-in.
*/
inline two_row_form gen_reduction( circuit_builder& b, column_stack stack, reduction_policy policy )
{
  if ( stack.columns.empty() )
  {
    throw construction_error( "gen_reduction: empty column stack" );
  }
  return detail::reducer( b, policy ).run( std::move( stack ) );
}

struct rca_result
{
  bus sum;
  net_id cout;
};

/*! \brief Ripple-carry adder: value(sum) + 2^k cout = a + b + cin. */
inline rca_result gen_rca( circuit_builder& b, bus const& a, bus const& bb, net_id cin )
{
  if ( a.size() != bb.size() || a.empty() )
  {
    throw construction_error( "gen_rca: width mismatch (" + std::to_string( a.size() ) + " vs " + std::to_string( bb.size() ) + ")" );
  }
  rca_result out;
  auto carry = cin;
  for ( std::size_t i = 0; i < a.size(); ++i )
  {
    auto bit = gen_full_adder( b, a[i], bb[i], carry );
    out.sum.push_back( bit.sum );
    carry = bit.carry;
  }
  out.cout = carry;
  return out;
}

/*! \brief Binary-to-excess-1 converter, out = (x + 1) mod 2^k, no carry-out.

  out_0 = !x_0 and out_i = x_i ^ (x_0 ... x_{i-1}) with the AND chain
  built incrementally: 1 INV, k-1 XOR2 and k-2 AND2.
*/
inline bus gen_bec( circuit_builder& b, bus const& x )
{
  if ( x.empty() )
  {
    throw construction_error( "gen_bec: empty bus" );
  }
  bus out{ b.inv( x[0] ) };
  auto chain = x[0];
  for ( std::size_t i = 1; i < x.size(); ++i )
  {
    out.push_back( b.xor2( x[i], chain ) );
    if ( i + 1u < x.size() )
    {
      chain = b.and2( x[i], chain );
    }
  }
  return out;
}

/*! \brief Per-bit MUX2, a when sel = 0 and b when sel = 1. */
inline bus gen_mux_bus( circuit_builder& b, net_id sel, bus const& a, bus const& bb )
{
  if ( a.size() != bb.size() )
  {
    throw construction_error( "gen_mux_bus: width mismatch (" + std::to_string( a.size() ) + " vs " + std::to_string( bb.size() ) + ")" );
  }
  bus out;
  for ( std::size_t i = 0; i < a.size(); ++i )
  {
    out.push_back( b.mux2( sel, a[i], bb[i] ) );
  }
  return out;
}

/*! \brief 2-to-3 mode decoder.

  | mode | t1 | t2 | t3 |
  |------|----|----|----|
  | 00   | 1  | 0  | 1  |
  | 01   | 1  | 0  | 0  |
  | 10   | 0  | 0  | 1  |
  | 11   | 1  | 1  | 1  |

  t1 = !m1 + m0, t2 = m1.m0, t3 = m1 + !m0.
*/
inline gating_signals gen_mode_decoder( circuit_builder& b, bus const& mode )
{
  if ( mode.size() != 2u )
  {
    throw construction_error( "gen_mode_decoder: mode bus must be 2 bits wide" );
  }
  auto const m0 = mode[0];
  auto const m1 = mode[1];
  auto const not_m1 = b.inv( m1 );
  auto const not_m0 = b.inv( m0 );
  gating_signals t;
  t.t1 = b.or2( not_m1, m0 );
  t.t2 = b.and2( m1, m0 );
  t.t3 = b.or2( m1, not_m0 );
  return t;
}

} // namespace tpmul
