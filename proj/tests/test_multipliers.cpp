#include "catch_wide.hpp"

#include <tpmul/metrics.hpp>
#include <tpmul/multipliers.hpp>
#include <tpmul/sim.hpp>

using namespace tpmul;

namespace
{

wide_uint multiply( circuit const& c, wide_uint x, wide_uint y, std::optional<operation_mode> mode = std::nullopt )
{
  simulator sim( c );
  sim.set_input( "x", x );
  sim.set_input( "y", y );
  if ( c.find_port( "mode" ) )
  {
    sim.set_input( "mode", static_cast<wide_uint>( mode.value_or( operation_mode::full ) ) );
  }
  if ( c.find_port( "twin" ) )
  {
    sim.set_input( "twin", mode == operation_mode::twin ? 1u : 0u );
  }
  sim.step();
  return sim.read( "p" );
}

} // namespace

TEST_CASE( "arithmetic model of the operation modes", "[multipliers][oracle]" )
{
  CHECK( mode_product( 8, operation_mode::twin, 0xFF, 0xFF ) == 0xE1E1 );
  CHECK( mode_product( 8, operation_mode::only_m4, 0xF0, 0xF0 ) == 0xE100 );
  CHECK( mode_product( 8, operation_mode::only_m1, 0x0B, 0x0D ) == 0x008F );
  CHECK( mode_product( 8, operation_mode::twin, 0xAB, 0xCD ) == 0x788F );
  for ( unsigned k = 0; k < 256; ++k )
  {
    CHECK( mode_product( 8, operation_mode::full, 1, k ) == k );
  }
  CHECK( mode_product( 64, operation_mode::full, ~uint64_t{ 0 }, ~uint64_t{ 0 } ) == wide_mask( 64 ) * wide_mask( 64 ) );

  multiplier_variant const twin{ variant_tag::twin_regular, 8, reduction_policy::dadda };
  CHECK( expected_product( twin, operation_mode::twin, 0xAB, 0xCD ) == 0x788F );
  CHECK_THROWS_AS( expected_product( twin, operation_mode::only_m1, 1, 1 ), std::invalid_argument );
  CHECK_THROWS_AS( expected_product( twin, operation_mode::full, 0x100, 1 ), std::out_of_range );
}

TEST_CASE( "names and width preconditions", "[multipliers]" )
{
  CHECK( variant_from_name( "recursive-bec-gated" ) == variant_tag::recursive_bec_gated );
  CHECK_FALSE( variant_from_name( "booth" ) );
  CHECK( mode_from_name( "01" ) == operation_mode::only_m1 );
  CHECK( mode_from_name( "twin" ) == operation_mode::twin );
  CHECK_FALSE( mode_from_name( "2" ) );
  CHECK( supports_mode( variant_tag::recursive_bec_gated, operation_mode::only_m4 ) );
  CHECK_FALSE( supports_mode( variant_tag::twin_regular, operation_mode::only_m4 ) );
  CHECK_FALSE( supports_mode( variant_tag::hpm_plain, operation_mode::twin ) );

  for ( uint32_t bad : { 0u, 2u, 3u, 6u, 12u, 128u } )
  {
    CHECK_FALSE( is_supported_width( bad ) );
    CHECK_THROWS_WITH( gen_hpm_plain( bad, reduction_policy::dadda ), Catch::Matchers::ContainsSubstring( "width must be a power of two" ) );
  }
}

TEST_CASE( "generated designs carry name, width and annotations", "[multipliers]" )
{
  auto c = gen_recursive_bec_gated( 16, reduction_policy::hpm_regular );
  CHECK( c.width() == 16u );
  CHECK( c.variant() == "recursive-bec-gated" );
  CHECK( c.meta_value( "policy" ) == "hpm-regular" );
  CHECK( c.registers().size() == 8u * 8u + 2u );
  CHECK( c.find_port( "mode" ) );

  auto r = gen_recursive( 8, reduction_policy::dadda, { increment_style::rca_carry_in, register_style::gated } );
  CHECK( r.variant() == "recursive-rca-gated" );
  CHECK( gen_recursive_rca( 8, reduction_policy::dadda, true ).registers().size() == 16u );
}

TEST_CASE( "hpm-plain examples", "[multipliers]" )
{
  auto c = gen_hpm_plain( 8, reduction_policy::dadda );
  CHECK( multiply( c, 255, 255 ) == 65025 );
  CHECK( multiply( c, 1, 0xA5 ) == 0xA5 );
  CHECK( c.meta_value( "counters.full" ) == "35" );
  CHECK( c.meta_value( "counters.half" ) == "7" );
}

TEST_CASE( "twin-regular examples", "[multipliers]" )
{
  auto c = gen_twin_regular( 8, reduction_policy::hpm_regular );
  CHECK( multiply( c, 0xAB, 0xCD, operation_mode::twin ) == 0x788F );
  CHECK( multiply( c, 0xAB, 0xCD ) == 0xAB * 0xCD );
  auto const p = multiply( c, 0x0B, 0x0D, operation_mode::twin );
  CHECK( ( p >> 8 ) == 0u );
}

TEST_CASE( "recursive recombination of the N = 4 all-ones case", "[multipliers]" )
{
  auto c = gen_recursive_rca( 4, reduction_policy::dadda );
  auto v = settle( c, { { "x", 15 }, { "y", 15 } } );
  auto select = bus_from_string( *c.meta_value( "probe.select" ) );
  REQUIRE( select );
  CHECK( v[( *select )[0].index] );
  simulator sim( c );
  sim.apply( { { "x", 15 }, { "y", 15 } } );
  sim.settle();
  CHECK( sim.read( "p" ) == 225 );

  auto zero = settle( c, { { "x", 0 }, { "y", 0 } } );
  CHECK_FALSE( zero[( *select )[0].index] );
}

TEST_CASE( "gated design follows the mode table after one step", "[multipliers]" )
{
  auto c = gen_recursive_bec_gated( 8, reduction_policy::dadda );
  CHECK( multiply( c, 200, 100, operation_mode::full ) == 20000 );
  CHECK( multiply( c, 0xAB, 0xCD, operation_mode::twin ) == 0x788F );
  CHECK( multiply( c, 0xFF, 0xFF, operation_mode::twin ) == 0xE1E1 );
  CHECK( multiply( c, 0xF0, 0xF0, operation_mode::only_m4 ) == 0xE100 );

  // mode 01 captures only the M1 banks; the rest keep the previous operands
  simulator sim( c );
  sim.apply( { { "x", 0xFF }, { "y", 0xFF }, { "mode", 3 } } );
  sim.step();
  auto const before = sim.state().registers;
  sim.apply( { { "x", 0x0B }, { "y", 0x0D }, { "mode", 1 } } );
  sim.step();
  CHECK( sim.read( "p" ) == 0x008F );
  auto const after = sim.state().registers;
  std::size_t changed = 0;
  for ( std::size_t r = 0; r < before.size(); ++r )
  {
    changed += before[r] != after[r] ? 1u : 0u;
  }
  // x F -> B and y F -> D flip one M1 bit each; the mode register goes 11 -> 01
  CHECK( changed == 3u );
}

TEST_CASE( "exhaustive equivalence at N = 4", "[multipliers]" )
{
  for ( auto policy : all_policies )
  {
    for ( auto tag : { variant_tag::hpm_plain, variant_tag::twin_regular, variant_tag::recursive_rca, variant_tag::recursive_bec_gated } )
    {
      auto c = generate( { tag, 4, policy } );
      for ( auto mode : { operation_mode::twin, operation_mode::only_m1, operation_mode::only_m4, operation_mode::full } )
      {
        if ( !supports_mode( tag, mode ) )
          continue;
        auto r = verify( c, mode, verify_strategy::all_pairs() );
        INFO( c.name() << " " << policy_name( policy ) << " mode " << mode_code( mode ) );
        CHECK( r.cases() == 256u );
        CHECK( r.ok() );
        CHECK( r.merge_overflow_violations == 0u );
        CHECK( r.increment_wrap_violations == 0u );
        CHECK( r.twin_carry_violations == 0u );
      }
    }
  }
}

TEST_CASE( "merge carry reaches two and takes the +2 path", "[multipliers]" )
{
  // S + {M4 low, M1 high} >= 2^(N+1): the carry into M4's high half is 2
  auto c = gen_recursive_rca( 8, reduction_policy::dadda );
  auto cout = bus_from_string( *c.meta_value( "probe.merge_cout" ) );
  REQUIRE( cout );
  std::size_t hits = 0, oracle_hits = 0;
  simulator sim( c );
  for ( unsigned x = 0; x < 256; ++x )
  {
    for ( unsigned y = 0; y < 256; ++y )
    {
      unsigned const m1 = ( x & 15 ) * ( y & 15 ), m2 = ( x >> 4 ) * ( y & 15 ), m3 = ( x & 15 ) * ( y >> 4 ), m4 = ( x >> 4 ) * ( y >> 4 );
      oracle_hits += ( m2 + m3 + ( ( m1 >> 4 ) | ( ( m4 & 15 ) << 4 ) ) ) >= 512u ? 1u : 0u;
      sim.apply( { { "x", x }, { "y", y } } );
      sim.settle();
      if ( sim.net_value( ( *cout )[0] ) )
      {
        ++hits;
        REQUIRE( sim.read( "p" ) == x * y );
      }
    }
  }
  CHECK( hits == oracle_hits );
  CHECK( hits == 248u );
}

TEST_CASE( "increment-select block with BEC is smaller than with carry-in RCAs", "[multipliers]" )
{
  for ( uint32_t n = 4; n <= 64; n *= 2 )
  {
    auto block = [n]( increment_style style ) {
      circuit_builder b;
      auto hi = b.add_input( "hi", n / 2 );
      auto s = b.add_input( "s", 2 );
      b.add_output( "y", gen_increment_select( b, hi, s[0], s[1], style ) );
      return std::move( b ).build();
    };
    auto bec = block( increment_style::bec );
    auto rca = block( increment_style::rca_carry_in );
    INFO( "N=" << n );
    CHECK( bec.gates().size() < rca.gates().size() );
    CHECK( area( bec, area_table::transistor_count() ) < area( rca, area_table::transistor_count() ) );
    CHECK( depth( bec, delay_table::unit() ).delay <= depth( rca, delay_table::unit() ).delay );

    if ( n <= 16 )
    {
      simulator sb( bec ), sr( rca );
      for ( unsigned v = 0; v < ( 1u << ( n / 2 ) ); ++v )
      {
        for ( unsigned sel : { 0u, 1u, 2u } )
        {
          sb.apply( { { "hi", v }, { "s", sel } } );
          sr.apply( { { "hi", v }, { "s", sel } } );
          sb.settle();
          sr.settle();
          auto const expect = ( v + sel ) & ( ( 1u << ( n / 2 ) ) - 1u );
          REQUIRE( sb.read( "y" ) == expect );
          REQUIRE( sr.read( "y" ) == expect );
        }
      }
    }
  }
  circuit_builder b;
  CHECK_THROWS( gen_increment_select( b, b.add_input( "h", 1 ), b.constant( false ), b.constant( false ), increment_style::bec ) );
}

TEST_CASE( "wide designs match the oracle on random operands", "[multipliers]" )
{
  for ( uint32_t n : { 16u, 64u } )
  {
    for ( auto tag : { variant_tag::hpm_plain, variant_tag::twin_regular, variant_tag::recursive_rca, variant_tag::recursive_bec_gated } )
    {
      auto c = generate( { tag, n, reduction_policy::hpm_regular } );
      auto r = verify( c, operation_mode::full, verify_strategy::random( 5, 640 ) );
      INFO( c.name() );
      CHECK( r.ok() );
    }
  }
}
