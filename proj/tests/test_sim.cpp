#include "catch_wide.hpp"

#include <tpmul/metrics.hpp>
#include <tpmul/multipliers.hpp>
#include <tpmul/report.hpp>
#include <tpmul/sim.hpp>

#include <random>

using namespace tpmul;

namespace
{

circuit inverter()
{
  circuit_builder b( "inv" );
  auto a = b.add_input( "a", 1 );
  b.add_output( "y", { b.inv( a[0] ) } );
  return std::move( b ).build();
}

std::vector<input_assignment> random_vectors( circuit const& c, operation_mode mode, std::size_t count, uint64_t seed )
{
  std::mt19937_64 rng( seed );
  auto const mask = wide_mask( c.width() );
  std::vector<input_assignment> out;
  for ( std::size_t k = 0; k < count; ++k )
  {
    input_assignment in{ { "x", rng() & mask }, { "y", rng() & mask } };
    if ( c.find_port( "mode" ) )
    {
      in["mode"] = static_cast<wide_uint>( mode );
    }
    out.push_back( in );
  }
  return out;
}

} // namespace

TEST_CASE( "settle evaluates every gate kind", "[sim]" )
{
  circuit_builder b;
  auto in = b.add_input( "i", 3 );
  bus outs;
  outs.push_back( b.constant( false ) );
  outs.push_back( b.constant( true ) );
  outs.push_back( b.add_gate( gate_kind::buf, { in[0] } ) );
  outs.push_back( b.inv( in[0] ) );
  outs.push_back( b.and2( in[0], in[1] ) );
  outs.push_back( b.or2( in[0], in[1] ) );
  outs.push_back( b.xor2( in[0], in[1] ) );
  outs.push_back( b.add_gate( gate_kind::nand2, { in[0], in[1] } ) );
  outs.push_back( b.add_gate( gate_kind::nor2, { in[0], in[1] } ) );
  outs.push_back( b.mux2( in[2], in[0], in[1] ) );
  b.add_output( "o", outs );
  auto c = std::move( b ).build();

  simulator sim( c );
  for ( unsigned v = 0; v < 8; ++v )
  {
    bool const a = v & 1, bb = ( v >> 1 ) & 1, s = v >> 2;
    std::array<bool, 10> const expect{ false, true, a, !a, a && bb, a || bb, a != bb, !( a && bb ), !( a || bb ), s ? bb : a };
    sim.set_input( "i", v );
    sim.settle();
    auto const o = sim.read( "o" );
    for ( std::size_t k = 0; k < expect.size(); ++k )
    {
      INFO( "gate " << k << " input " << v );
      CHECK( ( ( o >> k ) & 1u ) == expect[k] );
    }
  }
}

TEST_CASE( "single inverter toggles", "[sim]" )
{
  auto c = inverter();
  auto v = settle( c, { { "a", 1 } } );
  CHECK_FALSE( v[1] );

  // the reset baseline is a = 0, y = 1; stepping 0 then 1 flips both nets once
  auto r = run( c, { { { "a", 0 } }, { { "a", 1 } } } );
  CHECK( r.stats.cycles == 2u );
  CHECK( r.stats.total == 2u );
  CHECK( r.per_cycle[0].toggles == 0u );
  CHECK( r.per_cycle[1].toggles == 2u );
  CHECK( r.stats.per_net == std::vector<uint64_t>{ 1, 1 } );
  // a feeds one gate, y feeds nothing
  CHECK( r.stats.weighted == 2u + 1u );
}

TEST_CASE( "disabled register holds and does not toggle", "[sim]" )
{
  circuit_builder b;
  auto d = b.add_input( "d", 1 );
  auto en = b.add_input( "en", 1 );
  auto q = b.add_register( d[0], en[0] );
  b.add_output( "q", { q } );
  auto c = std::move( b ).build();

  simulator sim( c );
  sim.apply( { { "d", 1 }, { "en", 1 } } );
  sim.step();
  CHECK( sim.read( "q" ) == 1u );
  auto const before = sim.stats().per_net[q.index];
  for ( int k = 0; k < 10; ++k )
  {
    sim.apply( { { "d", static_cast<wide_uint>( k & 1 ) }, { "en", 0 } } );
    sim.step();
    CHECK( sim.read( "q" ) == 1u );
  }
  CHECK( sim.stats().per_net[q.index] == before );
}

TEST_CASE( "register reset value and explicit state", "[sim]" )
{
  circuit_builder b;
  auto d = b.add_input( "d", 1 );
  auto q = b.add_register( d[0], b.constant( true ), true );
  b.add_output( "q", { q } );
  auto c = std::move( b ).build();
  simulator sim( c );
  sim.settle();
  CHECK( sim.read( "q" ) == 1u );
  std::array<bool, 1> zero{ false };
  CHECK_FALSE( settle( c, { { "d", 1 } }, zero )[q.index] );
  CHECK_THROWS( sim.set_registers( std::span<bool const>{} ) );
}

TEST_CASE( "missing and unknown inputs are errors", "[sim]" )
{
  auto c = inverter();
  simulator sim( c );
  CHECK_THROWS_WITH( sim.apply( {} ), Catch::Matchers::ContainsSubstring( "missing input assignment for port a" ) );
  CHECK_THROWS( sim.set_input( "nope", 1 ) );
  CHECK_THROWS( sim.read( "nope" ) );
}

TEST_CASE( "recursive design computes 255 * 255", "[sim]" )
{
  auto c = gen_recursive_rca( 8, reduction_policy::hpm_regular );
  auto r = run( c, { { { "x", 255 }, { "y", 255 } } }, true );
  REQUIRE( r.trace.size() == 1u );
  CHECK( r.trace[0].at( "p" ) == 65025 );
}

TEST_CASE( "run over an empty or repeated sequence", "[sim]" )
{
  auto c = gen_hpm_plain( 8, reduction_policy::dadda );
  auto empty = run( c, {} );
  CHECK( empty.stats.cycles == 0u );
  CHECK( empty.stats.total == 0u );

  std::vector<input_assignment> same( 5, input_assignment{ { "x", 0x5A }, { "y", 0xC3 } } );
  auto r = run( c, same );
  for ( std::size_t k = 1; k < r.per_cycle.size(); ++k )
  {
    CHECK( r.per_cycle[k].toggles == 0u );
  }
  std::uint64_t sum = 0;
  for ( auto v : r.stats.per_net )
    sum += v;
  CHECK( sum == r.stats.total );
}

TEST_CASE( "repeated seeded runs give identical statistics", "[sim]" )
{
  auto c = gen_hpm_plain( 16, reduction_policy::hpm_regular );
  auto v1 = random_vectors( c, operation_mode::full, 10000, 42 );
  auto v2 = random_vectors( c, operation_mode::full, 10000, 42 );
  auto a = run( c, v1 ).stats;
  auto b = run( c, v2 ).stats;
  CHECK( a == b );
  CHECK( a.total > 0u );
}

TEST_CASE( "lanes evaluate independently", "[sim]" )
{
  auto c = gen_recursive_bec_gated( 8, reduction_policy::dadda );
  simulator wide( c, 64 ), narrow( c );
  std::vector<wide_uint> xs( 64 ), ys( 64 );
  for ( unsigned k = 0; k < 64; ++k )
  {
    xs[k] = ( k * 37 ) & 0xFF;
    ys[k] = ( k * 91 + 5 ) & 0xFF;
  }
  wide.set_input( "x", xs );
  wide.set_input( "y", ys );
  wide.set_input( "mode", 3 );
  wide.step();
  for ( unsigned k = 0; k < 64; ++k )
  {
    narrow.apply( { { "x", xs[k] }, { "y", ys[k] }, { "mode", 3 } } );
    narrow.step();
    REQUIRE( wide.read( "p", k ) == narrow.read( "p" ) );
    REQUIRE( wide.read( "p", k ) == xs[k] * ys[k] );
  }
  std::vector<wide_uint> short_list( 3 );
  CHECK_THROWS( wide.set_input( "x", short_list ) );
}

TEST_CASE( "idle banks keep their multiplier cones silent", "[sim]" )
{
  auto c = gen_recursive_bec_gated( 16, reduction_policy::hpm_regular );
  // 16 operand bits per sub-multiplier: M1 in 0..15, M2 and M3 in 16..47
  std::vector<std::size_t> m23;
  for ( std::size_t r = 16; r < 48; ++r )
  {
    m23.push_back( r );
  }
  auto cone = exclusive_fanout_cone( c, m23 );
  std::size_t cone_size = 0;
  for ( bool in : cone )
    cone_size += in ? 1u : 0u;
  CHECK( cone_size > 100u );

  simulator sim( c );
  auto vectors = random_vectors( c, operation_mode::only_m1, 2000, 9 );
  for ( auto const& v : vectors )
  {
    sim.apply( v );
    sim.step();
  }
  for ( std::size_t i = 0; i < cone.size(); ++i )
  {
    if ( cone[i] )
    {
      REQUIRE( sim.stats().per_net[i] == 0u );
    }
  }
}

TEST_CASE( "gated design switches less in one-half mode than in full mode", "[sim]" )
{
  auto c = gen_recursive_bec_gated( 16, reduction_policy::hpm_regular );
  auto full = random_vectors( c, operation_mode::full, 10000, default_seed );
  auto half = full;
  for ( auto& v : half )
  {
    v["mode"] = static_cast<wide_uint>( operation_mode::only_m1 );
  }
  auto const f = run( c, full ).stats;
  auto const h = run( c, half ).stats;
  CHECK( h.total < f.total );
  CHECK( h.weighted < f.weighted );
}

TEST_CASE( "verify reports cases, failures and strategy errors", "[sim]" )
{
  auto c = gen_recursive_rca( 4, reduction_policy::dadda );
  auto r = verify( c, operation_mode::full, verify_strategy::all_pairs() );
  CHECK( r.passes == 256u );
  CHECK( r.failures == 0u );
  CHECK( r.headroom_monitored );

  CHECK_THROWS( verify( c, operation_mode::twin, verify_strategy::all_pairs() ) );
  CHECK_THROWS( verify( gen_hpm_plain( 16, reduction_policy::dadda ), operation_mode::full, verify_strategy::all_pairs() ) );

  auto odd = verify( c, operation_mode::full, verify_strategy::random( 1, 100 ) );
  CHECK( odd.cases() == 100u );
}

TEST_CASE( "verify finds an injected fault", "[sim]" )
{
  auto c = gen_hpm_plain( 4, reduction_policy::dadda );
  auto gates = c.gates();
  for ( auto& g : gates )
  {
    if ( g.kind == gate_kind::xor2 )
    {
      g.kind = gate_kind::or2;
      break;
    }
  }
  circuit broken( c.name(), c.width(), c.variant(), c.num_nets(), gates, c.registers(), c.ports(), c.meta() );
  auto r = verify( broken, operation_mode::full, verify_strategy::all_pairs() );
  CHECK( r.failures > 0u );
  REQUIRE( r.first_failure );
  CHECK( r.first_failure->expected == r.first_failure->x * r.first_failure->y );
  CHECK( r.first_failure->actual != r.first_failure->expected );
}

TEST_CASE( "random 32-bit verification of the gated design", "[sim]" )
{
  auto c = gen_recursive_bec_gated( 32, reduction_policy::hpm_regular );
  auto r = verify( c, operation_mode::full, verify_strategy::random( 1, 100000 ) );
  CHECK( r.cases() == 100000u );
  CHECK( r.ok() );
  CHECK( r.merge_overflow_violations == 0u );
}
