/*!
  \file multipliers.hpp
  \brief Complete unsigned multiplier circuits and their golden arithmetic model

  Four designs share the blocks of `blocks.hpp`:

  - `hpm-plain`: one N x N partial-product array, column reduction and a
    ripple-carry final adder.
  - `twin-regular`: the same array with every cross partial product and
    the carry at the N/2 | N product boundary killed when `twin` = 1, so
    the low and high halves of p hold XL*YL and XH*YH.
  - `recursive-rca`: four N/2 x N/2 multipliers M1 = XL*YL, M2 = XH*YL,
    M3 = XL*YH, M4 = XH*YH recombined by an N-bit RCA (M2 + M3), an
    (N+1)-bit RCA adding {M4 low, M1 high}, and a carry-select of M4's
    high half against its +1 and +2 alternatives, built from carry-in-1
    RCAs.
  - `recursive-bec-gated`: the recursive design with a binary-to-excess-1
    incrementer, eight N/2-bit input register banks clock-gated by the
    decoded operation mode, and a registered-mode output selector.
*/

#pragma once

#include "blocks.hpp"
#include "netlist.hpp"
#include "wide.hpp"

#include <array>
#include <bit>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tpmul
{

enum class variant_tag : uint8_t
{
  hpm_plain,
  twin_regular,
  recursive_rca,
  recursive_bec_gated
};

inline constexpr std::array<variant_tag, 4> all_variants = {
    variant_tag::hpm_plain, variant_tag::twin_regular, variant_tag::recursive_rca, variant_tag::recursive_bec_gated };

inline constexpr std::string_view variant_name( variant_tag tag )
{
  switch ( tag )
  {
  case variant_tag::hpm_plain: return "hpm-plain";
  case variant_tag::twin_regular: return "twin-regular";
  case variant_tag::recursive_rca: return "recursive-rca";
  case variant_tag::recursive_bec_gated: return "recursive-bec-gated";
  }
  return "?";
}

inline std::optional<variant_tag> variant_from_name( std::string_view name )
{
  for ( auto v : all_variants )
  {
    if ( variant_name( v ) == name )
    {
      return v;
    }
  }
  return std::nullopt;
}

/*! \brief Operation mode code, bit 1 = m1 and bit 0 = m0. */
enum class operation_mode : uint8_t
{
  twin = 0b00,    /*!< M1 and M4, two independent N/2 x N/2 products */
  only_m1 = 0b01, /*!< one N/2 x N/2 product on the low halves */
  only_m4 = 0b10, /*!< one N/2 x N/2 product on the high halves */
  full = 0b11     /*!< one N x N product */
};

inline constexpr std::array<operation_mode, 4> all_modes = {
    operation_mode::twin, operation_mode::only_m1, operation_mode::only_m4, operation_mode::full };

inline constexpr std::string_view mode_code( operation_mode mode )
{
  switch ( mode )
  {
  case operation_mode::twin: return "00";
  case operation_mode::only_m1: return "01";
  case operation_mode::only_m4: return "10";
  case operation_mode::full: return "11";
  }
  return "?";
}

/*! \brief Accepts the two-digit code ("01") or a name (twin, m1, m4, full). */
inline std::optional<operation_mode> mode_from_name( std::string_view text )
{
  for ( auto m : all_modes )
  {
    if ( mode_code( m ) == text )
    {
      return m;
    }
  }
  if ( text == "twin" ) return operation_mode::twin;
  if ( text == "m1" || text == "only-m1" ) return operation_mode::only_m1;
  if ( text == "m4" || text == "only-m4" ) return operation_mode::only_m4;
  if ( text == "full" ) return operation_mode::full;
  return std::nullopt;
}

struct multiplier_variant
{
  variant_tag tag{ variant_tag::hpm_plain };
  uint32_t width{ 8 };
  reduction_policy policy{ reduction_policy::hpm_regular };
};

/*! \brief Whether a design can run the mode: gated all four, twin-regular full and twin, others full. */
inline constexpr bool supports_mode( variant_tag tag, operation_mode mode )
{
  switch ( tag )
  {
  case variant_tag::recursive_bec_gated: return true;
  case variant_tag::twin_regular: return mode == operation_mode::full || mode == operation_mode::twin;
  default: return mode == operation_mode::full;
  }
}

inline bool is_supported_width( uint32_t n )
{
  return n >= 4u && n <= 64u && std::has_single_bit( n );
}

inline void check_width( uint32_t n )
{
  if ( !is_supported_width( n ) )
  {
    throw construction_error( "width must be a power of two >= 4 (and <= 64), got " + std::to_string( n ) );
  }
}

/*! \brief Mode semantics on N-bit operands, independent of any circuit. */
inline wide_uint mode_product( uint32_t n, operation_mode mode, wide_uint x, wide_uint y )
{
  auto const h = n / 2u;
  auto const half = wide_mask( h );
  auto const xl = x & half, xh = x >> h;
  auto const yl = y & half, yh = y >> h;
  switch ( mode )
  {
  case operation_mode::full: return x * y;
  case operation_mode::twin: return ( ( xh * yh ) << n ) | ( xl * yl );
  case operation_mode::only_m1: return xl * yl;
  case operation_mode::only_m4: return ( xh * yh ) << n;
  }
  return 0;
}

/*! \brief Golden model: the 2N-bit result the design must produce. */
inline wide_uint expected_product( multiplier_variant const& variant, operation_mode mode, wide_uint x, wide_uint y )
{
  check_width( variant.width );
  if ( x > wide_mask( variant.width ) || y > wide_mask( variant.width ) )
  {
    throw std::out_of_range( "operand does not fit in " + std::to_string( variant.width ) + " bits" );
  }
  if ( !supports_mode( variant.tag, mode ) )
  {
    throw std::invalid_argument( std::string( variant_name( variant.tag ) ) + " has no mode " + std::string( mode_code( mode ) ) );
  }
  return mode_product( variant.width, mode, x, y );
}

namespace detail
{

inline bus slice( bus const& b, std::size_t from, std::size_t to )
{
  return bus( b.begin() + static_cast<std::ptrdiff_t>( from ), b.begin() + static_cast<std::ptrdiff_t>( to ) );
}

inline bus concat( bus lo, bus const& hi )
{
  lo.insert( lo.end(), hi.begin(), hi.end() );
  return lo;
}

struct counter_totals
{
  std::size_t full{ 0 };
  std::size_t half{ 0 };

  void add( two_row_form const& tree )
  {
    full += tree.full_adders();
    half += tree.half_adders();
  }
};

/* Pass-through for columns below the first two-high column, RCA over the rest. */
inline bus gen_final_adder( circuit_builder& b, two_row_form const& tree, std::size_t width )
{
  bus product;
  auto const start = tree.first_pair;
  for ( std::size_t w = 0; w < start; ++w )
  {
    product.push_back( tree.sum_row[w] );
  }
  if ( start < tree.width() )
  {
    auto sum = gen_rca( b, slice( tree.sum_row, start, tree.width() ), slice( tree.carry_row, start, tree.width() ), b.constant( false ) );
    product.insert( product.end(), sum.sum.begin(), sum.sum.end() );
    product.push_back( sum.cout );
  }
  product.resize( std::min( product.size(), width ) );
  while ( product.size() < width )
  {
    product.push_back( b.constant( false ) );
  }
  return product;
}

inline bus gen_multiplier_core( circuit_builder& b, bus const& x, bus const& y, reduction_policy policy, counter_totals& totals )
{
  auto tree = gen_reduction( b, gen_ppg( b, x, y ), policy );
  totals.add( tree );
  return gen_final_adder( b, tree, 2 * x.size() );
}

inline void annotate( circuit_builder& b, reduction_policy policy, counter_totals const& totals )
{
  b.set_meta( "policy", std::string( policy_name( policy ) ) );
  b.set_meta( "counters.full", std::to_string( totals.full ) );
  b.set_meta( "counters.half", std::to_string( totals.half ) );
}

inline std::string design_name( std::string_view variant, uint32_t n )
{
  return std::string( variant ) + "_" + std::to_string( n );
}

} // namespace detail

inline circuit gen_hpm_plain( uint32_t n, reduction_policy policy )
{
  check_width( n );
  auto const tag = variant_name( variant_tag::hpm_plain );
  circuit_builder b( detail::design_name( tag, n ), n, std::string( tag ) );
  auto x = b.add_input( "x", n );
  auto y = b.add_input( "y", n );
  detail::counter_totals totals;
  b.add_output( "p", detail::gen_multiplier_core( b, x, y, policy, totals ) );
  detail::annotate( b, policy, totals );
  return std::move( b ).build();
}

/*! \brief Twin-precision baseline with a `twin` control input.

  Cross partial products (exactly one index in the high half) are ANDed
  with !twin, and the final adder is split at column N with the carry into
  column N ANDed with !twin. The pre-kill carry is recorded as the
  `probe.twin_carry` annotation.
*/
inline circuit gen_twin_regular( uint32_t n, reduction_policy policy )
{
  check_width( n );
  auto const tag = variant_name( variant_tag::twin_regular );
  circuit_builder b( detail::design_name( tag, n ), n, std::string( tag ) );
  auto x = b.add_input( "x", n );
  auto y = b.add_input( "y", n );
  auto twin = b.add_input( "twin", 1 );
  auto const h = n / 2u;
  auto const keep = b.inv( twin[0] );

  column_stack stack;
  stack.columns.resize( 2 * n - 1 );
  for ( uint32_t i = 0; i < n; ++i )
  {
    for ( uint32_t j = 0; j < n; ++j )
    {
      auto pp = b.and2( x[i], y[j] );
      if ( ( i < h ) != ( j < h ) )
      {
        pp = b.and2( pp, keep );
      }
      stack.columns[i + j].push_back( pp );
    }
  }
  auto tree = gen_reduction( b, std::move( stack ), policy );

  bus product;
  auto const start = tree.first_pair;
  auto const split = static_cast<std::size_t>( n );
  if ( start >= split || tree.width() <= split )
  {
    throw std::logic_error( "twin-regular: reduced rows do not straddle the half boundary" );
  }
  for ( std::size_t w = 0; w < start; ++w )
  {
    product.push_back( tree.sum_row[w] );
  }
  auto low = gen_rca( b, detail::slice( tree.sum_row, start, split ), detail::slice( tree.carry_row, start, split ), b.constant( false ) );
  auto const killed = b.and2( low.cout, keep );
  auto high = gen_rca( b, detail::slice( tree.sum_row, split, tree.width() ), detail::slice( tree.carry_row, split, tree.width() ), killed );
  product.insert( product.end(), low.sum.begin(), low.sum.end() );
  product.insert( product.end(), high.sum.begin(), high.sum.end() );
  product.push_back( high.cout );
  product.resize( std::min<std::size_t>( product.size(), 2 * n ) );
  while ( product.size() < 2 * n )
  {
    product.push_back( b.constant( false ) );
  }
  b.add_output( "p", product );

  detail::counter_totals totals;
  totals.add( tree );
  detail::annotate( b, policy, totals );
  b.set_meta( "probe.twin_carry", std::to_string( low.cout.index ) );
  return std::move( b ).build();
}

enum class increment_style : uint8_t
{
  rca_carry_in, /*!< N/2-bit RCA, second operand 0, carry-in 1 */
  bec           /*!< binary-to-excess-1 converter */
};

enum class register_style : uint8_t
{
  none,  /*!< purely combinational */
  plain, /*!< two N-bit input registers, always enabled */
  gated  /*!< eight N/2-bit banks gated by the decoded mode, registered-mode output select */
};

/*! \brief Carry-select of `hi`, `hi + 1` and `hi + 2` on the merge carry bits.

  The carry into the high half is `plus_one + 2 * plus_two`, and the two
  are never both set. The +2 alternative increments bits [k-1:1] only, so
  it needs a (k-1)-bit incrementer. Requires k >= 2.
*/
inline bus gen_increment_select( circuit_builder& b, bus const& hi, net_id plus_one, net_id plus_two, increment_style style )
{
  if ( hi.size() < 2u )
  {
    throw construction_error( "gen_increment_select: operand narrower than 2 bits" );
  }
  auto upper = detail::slice( hi, 1, hi.size() );
  bus inc1, inc2;
  if ( style == increment_style::bec )
  {
    inc1 = gen_bec( b, hi );
    inc2 = gen_bec( b, upper );
  }
  else
  {
    auto const zero = b.constant( false );
    auto const one = b.constant( true );
    inc1 = gen_rca( b, hi, bus( hi.size(), zero ), one ).sum;
    inc2 = gen_rca( b, upper, bus( upper.size(), zero ), one ).sum;
  }
  inc2.insert( inc2.begin(), hi[0] );
  return gen_mux_bus( b, plus_two, gen_mux_bus( b, plus_one, hi, inc1 ), inc2 );
}

struct recursive_options
{
  increment_style increment{ increment_style::rca_carry_in };
  register_style registers{ register_style::none };
};

/*! \brief Recursive four-way multiplier with configurable incrementer and register complement.

  Recorded probes: `probe.merge_bit` (bit N of the merge sum),
  `probe.merge_cout` (its carry-out, selecting the +2 alternative),
  `probe.m4_high` (the incrementer input) and `probe.select` (the +1 select).
*/
inline circuit gen_recursive( uint32_t n, reduction_policy policy, recursive_options options )
{
  check_width( n );
  std::string tag = options.increment == increment_style::bec ? "recursive-bec" : "recursive-rca";
  if ( options.registers == register_style::gated )
  {
    tag += "-gated";
  }
  circuit_builder b( detail::design_name( tag, n ), n, tag );
  auto const h = n / 2u;
  auto x = b.add_input( "x", n );
  auto y = b.add_input( "y", n );
  auto const zero = b.constant( false );

  auto xl = detail::slice( x, 0, h ), xh = detail::slice( x, h, n );
  auto yl = detail::slice( y, 0, h ), yh = detail::slice( y, h, n );
  std::array<bus, 4> xs{ xl, xh, xl, xh };
  std::array<bus, 4> ys{ yl, yl, yh, yh };
  std::optional<gating_signals> selected;

  if ( options.registers == register_style::gated )
  {
    auto mode = b.add_input( "mode", 2 );
    auto t = gen_mode_decoder( b, mode );
    std::array<net_id, 4> enable{ t.t1, t.t2, t.t2, t.t3 };
    for ( std::size_t m = 0; m < 4u; ++m )
    {
      xs[m] = b.add_register_bank( xs[m], enable[m] );
      ys[m] = b.add_register_bank( ys[m], enable[m] );
    }
    selected = gen_mode_decoder( b, b.add_register_bank( mode, b.constant( true ) ) );
  }
  else if ( options.registers == register_style::plain )
  {
    auto xq = b.add_register_bank( x, b.constant( true ) );
    auto yq = b.add_register_bank( y, b.constant( true ) );
    xl = detail::slice( xq, 0, h ), xh = detail::slice( xq, h, n );
    yl = detail::slice( yq, 0, h ), yh = detail::slice( yq, h, n );
    xs = { xl, xh, xl, xh };
    ys = { yl, yl, yh, yh };
  }

  detail::counter_totals totals;
  std::array<bus, 4> m;
  for ( std::size_t k = 0; k < 4u; ++k )
  {
    m[k] = detail::gen_multiplier_core( b, xs[k], ys[k], policy, totals );
  }
  auto const& m1 = m[0];
  auto const& m4 = m[3];

  auto mid = gen_rca( b, m[1], m[2], zero );
  auto s = mid.sum;
  s.push_back( mid.cout );
  auto aligned = detail::concat( detail::slice( m1, h, n ), detail::slice( m4, 0, h ) );
  aligned.push_back( zero );
  auto merge = gen_rca( b, s, aligned, zero );

  auto m4_high = detail::slice( m4, h, n );
  auto high = gen_increment_select( b, m4_high, merge.sum[n], merge.cout, options.increment );
  auto const select = merge.sum[n];

  auto recombined = detail::concat( detail::concat( detail::slice( m1, 0, h ), detail::slice( merge.sum, 0, n ) ), high );

  if ( selected )
  {
    auto const u = *selected;
    bus p;
    for ( uint32_t i = 0; i < h; ++i )
    {
      p.push_back( b.and2( m1[i], u.t1 ) );
    }
    for ( uint32_t i = h; i < n; ++i )
    {
      p.push_back( b.and2( b.mux2( u.t2, m1[i], recombined[i] ), u.t1 ) );
    }
    for ( uint32_t i = 0; i < n; ++i )
    {
      p.push_back( b.and2( b.mux2( u.t2, m4[i], recombined[n + i] ), u.t3 ) );
    }
    b.add_output( "p", p );
  }
  else
  {
    b.add_output( "p", recombined );
  }

  detail::annotate( b, policy, totals );
  b.set_meta( "increment", options.increment == increment_style::bec ? "bec" : "rca-carry-in" );
  b.set_meta( "registers", options.registers == register_style::gated ? "gated"
                           : options.registers == register_style::plain ? "plain"
                                                                         : "none" );
  b.set_meta( "probe.merge_bit", std::to_string( merge.sum[n].index ) );
  b.set_meta( "probe.merge_cout", std::to_string( merge.cout.index ) );
  b.set_meta( "probe.m4_high", bus_to_string( m4_high ) );
  b.set_meta( "probe.select", std::to_string( select.index ) );
  return std::move( b ).build();
}

inline circuit gen_recursive_rca( uint32_t n, reduction_policy policy, bool input_registers = false )
{
  return gen_recursive( n, policy, { increment_style::rca_carry_in, input_registers ? register_style::plain : register_style::none } );
}

inline circuit gen_recursive_bec_gated( uint32_t n, reduction_policy policy )
{
  return gen_recursive( n, policy, { increment_style::bec, register_style::gated } );
}

inline circuit generate( multiplier_variant const& v )
{
  switch ( v.tag )
  {
  case variant_tag::hpm_plain: return gen_hpm_plain( v.width, v.policy );
  case variant_tag::twin_regular: return gen_twin_regular( v.width, v.policy );
  case variant_tag::recursive_rca: return gen_recursive_rca( v.width, v.policy );
  case variant_tag::recursive_bec_gated: return gen_recursive_bec_gated( v.width, v.policy );
  }
  throw std::invalid_argument( "unknown variant" );
}

} // namespace tpmul
