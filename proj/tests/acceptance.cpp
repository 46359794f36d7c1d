// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <tpmul/tpmul.hpp>

#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace tpmul;

namespace
{

constexpr std::array<variant_tag, 4> all_variants{ variant_tag::hpm_plain, variant_tag::twin_regular, variant_tag::recursive_rca,
                                                   variant_tag::recursive_bec_gated };
constexpr std::array<operation_mode, 4> all_modes{ operation_mode::twin, operation_mode::only_m1, operation_mode::only_m4, operation_mode::full };

struct criterion
{
  int id;
  std::string title;
  std::function<bool( std::ostream& )> check;
};

bool report_failure( std::ostream& log, circuit const& c, verify_report const& r )
{
  if ( r.ok() )
  {
    return true;
  }
  log << "    " << c.name() << " mode " << mode_code( r.mode ) << ": " << r.failures << " failures";
  if ( r.first_failure )
  {
    log << ", first x=0x" << to_hex( r.first_failure->x ) << " y=0x" << to_hex( r.first_failure->y ) << " expected 0x"
        << to_hex( r.first_failure->expected ) << " got 0x" << to_hex( r.first_failure->actual );
  }
  log << "\n";
  return false;
}

bool exhaustive_full_mode( std::ostream& log )
{
  bool ok = true;
  uint64_t cases = 0;
  for ( auto policy : all_policies )
  {
    for ( auto tag : all_variants )
    {
      auto c = generate( { tag, 8, policy } );
      auto r = verify( c, operation_mode::full, verify_strategy::all_pairs() );
      cases += r.cases();
      ok = report_failure( log, c, r ) && r.cases() == 65536u && ok;
    }
  }
  log << "    " << cases << " cases over 4 variants x 3 policies\n";
  return ok;
}

bool mode_matrix( std::ostream& log )
{
  bool ok = true;
  uint64_t cases = 0;
  for ( auto policy : all_policies )
  {
    auto gated = gen_recursive_bec_gated( 8, policy );
    for ( auto mode : all_modes )
    {
      auto r = verify( gated, mode, verify_strategy::all_pairs() );
      cases += r.cases();
      ok = report_failure( log, gated, r ) && r.cases() == 65536u && ok;
    }
    auto twin = gen_twin_regular( 8, policy );
    auto r = verify( twin, operation_mode::twin, verify_strategy::all_pairs() );
    cases += r.cases();
    ok = report_failure( log, twin, r ) && r.cases() == 65536u && ok;
  }
  log << "    " << cases << " cases (gated: 4 modes, twin-regular: twin = 1; 3 policies)\n";
  return ok;
}

struct headroom_tally
{
  uint64_t monitored_runs{ 0 };
  uint64_t overflow{ 0 };
  uint64_t wrap{ 0 };

  void add( verify_report const& r )
  {
    if ( r.headroom_monitored )
    {
      ++monitored_runs;
      overflow += r.merge_overflow_violations;
      wrap += r.increment_wrap_violations;
    }
  }
};

headroom_tally wide_headroom;

bool large_width_random( std::ostream& log )
{
  bool ok = true;
  for ( uint32_t n : { 16u, 32u } )
  {
    auto const count = default_vector_count( n );
    uint64_t cases = 0;
    for ( auto policy : all_policies )
    {
      for ( auto tag : all_variants )
      {
        auto c = generate( { tag, n, policy } );
        for ( auto mode : all_modes )
        {
          if ( !supports_mode( tag, mode ) )
            continue;
          auto r = verify( c, mode, verify_strategy::random( default_seed, count ) );
          cases += r.cases();
          wide_headroom.add( r );
          ok = report_failure( log, c, r ) && r.cases() == count && ok;
        }
      }
    }
    log << "    N=" << n << ": " << cases << " cases, " << count << " vectors per variant/mode/policy, seed 0x" << to_hex( default_seed ) << "\n";
  }
  return ok;
}

bool carry_headroom( std::ostream& log )
{
  headroom_tally small;
  for ( uint32_t n : { 4u, 8u } )
  {
    for ( auto policy : all_policies )
    {
      for ( auto const& c : { gen_recursive_rca( n, policy ), gen_recursive_bec_gated( n, policy ),
                              gen_recursive( n, policy, { increment_style::rca_carry_in, register_style::gated } ) } )
      {
        for ( auto mode : all_modes )
        {
          if ( !c.find_port( "mode" ) && mode != operation_mode::full )
            continue;
          small.add( verify( c, mode, verify_strategy::all_pairs() ) );
        }
      }
    }
  }
  log << "    exhaustive N in {4, 8}: " << small.monitored_runs << " monitored runs, overflow violations " << small.overflow
      << ", wrap violations " << small.wrap << "\n";
  log << "    random N in {16, 32}: " << wide_headroom.monitored_runs << " monitored runs, overflow violations " << wide_headroom.overflow
      << ", wrap violations " << wide_headroom.wrap << "\n";
  return small.monitored_runs > 0u && wide_headroom.monitored_runs > 0u && small.overflow == 0u && small.wrap == 0u &&
         wide_headroom.overflow == 0u && wide_headroom.wrap == 0u;
}

bool bec_substitution( std::ostream& log )
{
  auto const table = area_table::transistor_count();
  bool ok = true;
  for ( uint32_t n = 4; n <= 64; n *= 2 )
  {
    auto block = [n]( increment_style style ) {
      circuit_builder b( "increment_select" );
      auto hi = b.add_input( "hi", n / 2 );
      auto sel = b.add_input( "sel", 2 );
      b.add_output( "y", gen_increment_select( b, hi, sel[0], sel[1], style ) );
      return std::move( b ).build();
    };
    auto bec = block( increment_style::bec );
    auto rca = block( increment_style::rca_carry_in );
    auto const bec_area = area( bec, table ), rca_area = area( rca, table );

    auto gated_bec = gen_recursive_bec_gated( n, reduction_policy::hpm_regular );
    auto gated_rca = gen_recursive( n, reduction_policy::hpm_regular, { increment_style::rca_carry_in, register_style::gated } );
    auto const whole_bec = area( gated_bec, table ), whole_rca = area( gated_rca, table );
    auto plain_regs = area( gen_recursive_rca( n, reduction_policy::hpm_regular, true ), table );

    bool const pass = bec.gates().size() < rca.gates().size() && bec_area < rca_area && whole_bec < whole_rca;
    ok = ok && pass;
    log << "    N=" << n << ": block gates " << bec.gates().size() << " vs " << rca.gates().size() << ", block area " << bec_area << " vs "
        << rca_area << ", design area " << whole_bec << " vs " << whole_rca << " (recursive-rca with 2N plain registers: " << plain_regs
        << ", informational)\n";
  }

  auto a = gen_recursive_bec_gated( 8, reduction_policy::hpm_regular );
  auto b = gen_recursive_rca( 8, reduction_policy::hpm_regular );
  simulator sa( a, 64 ), sb( b, 64 );
  sa.set_input( "mode", static_cast<wide_uint>( operation_mode::full ) );
  std::vector<wide_uint> xs( 64 ), ys( 64 );
  uint64_t mismatches = 0;
  for ( uint32_t base = 0; base < 65536u; base += 64u )
  {
    for ( uint32_t lane = 0; lane < 64u; ++lane )
    {
      xs[lane] = ( base + lane ) & 0xFFu;
      ys[lane] = ( base + lane ) >> 8;
    }
    for ( auto* s : { &sa, &sb } )
    {
      s->set_input( "x", xs );
      s->set_input( "y", ys );
      s->step();
    }
    for ( uint32_t lane = 0; lane < 64u; ++lane )
    {
      mismatches += sa.read( "p", lane ) != sb.read( "p", lane ) ? 1u : 0u;
    }
  }
  log << "    N=8 full mode, recursive-bec-gated vs recursive-rca: " << mismatches << " output mismatches over 65536 pairs\n";
  return ok && mismatches == 0u;
}

std::optional<comparison_report> report16, report32;

comparison_report const& bench_report( uint32_t n )
{
  auto& slot = n == 16u ? report16 : report32;
  if ( !slot )
  {
    slot = compare( { gen_twin_regular( n, reduction_policy::hpm_regular ), gen_recursive_bec_gated( n, reduction_policy::hpm_regular ) },
                    "twin-regular" );
  }
  return *slot;
}

bool clock_gating_power( std::ostream& log )
{
  bool ok = true;
  for ( uint32_t n : { 16u, 32u } )
  {
    auto const& r = bench_report( n );
    auto const* full = r.find( "recursive-bec-gated", operation_label( operation_kind::one_full, n ) );
    auto const* two = r.find( "recursive-bec-gated", operation_label( operation_kind::two_half, n ) );
    auto const* one = r.find( "recursive-bec-gated", operation_label( operation_kind::one_half, n ) );
    if ( !full || !two || !one || full->mode != "11" || two->mode != "00" || one->mode != "01" )
    {
      log << "    N=" << n << ": missing or mis-moded rows\n";
      ok = false;
      continue;
    }
    auto const f = full->power.weighted_per_cycle, t = two->power.weighted_per_cycle, o = one->power.weighted_per_cycle;
    bool const pass = o <= 0.75 * f && t <= 0.95 * f;
    ok = ok && pass;
    auto ref = reference_for_width( n );
    char line[400];
    std::snprintf( line, sizeof line,
                   "    N=%u weighted toggles/cycle: mode 11 %.1f, mode 00 %.1f (%.1f%%), mode 01 %.1f (%.1f%%)\n"
                   "           vs twin-regular: %+.3f%% / %+.3f%% / %+.3f%%; published: %+.3f%% / %+.3f%% / %+.3f%%\n",
                   n, f, t, 100.0 * ( t - f ) / f, o, 100.0 * ( o - f ) / f, *full->delta_power, *two->delta_power, *one->delta_power,
                   ref->delta_power[0], ref->delta_power[1], ref->delta_power[2] );
    log << line;
  }
  return ok;
}

bool area_overhead( std::ostream& log )
{
  bool ok = true;
  for ( uint32_t n : { 16u, 32u } )
  {
    auto const& r = bench_report( n );
    auto const* row = r.find( "recursive-bec-gated", operation_label( operation_kind::one_full, n ) );
    auto const delta = row ? row->delta_area.value_or( 1e9 ) : 1e9;
    ok = ok && delta <= 20.0;
    char line[200];
    std::snprintf( line, sizeof line, "    N=%u area %.0f vs %.0f: %+.3f%% (published %+.3f%%), depth %+.3f%% (published %+.3f%%)\n", n,
                   r.designs[1].area, r.designs[0].area, delta, reference_for_width( n )->delta_area, row ? *row->delta_depth : 0.0,
                   reference_for_width( n )->delta_time );
    log << line;
  }
  return ok;
}

bool report_fidelity( std::ostream& log )
{
  bool ok = true;
  for ( uint32_t n : { 16u, 32u } )
  {
    auto const& r = bench_report( n );
    std::vector<std::string> const labels{ operation_label( operation_kind::one_full, n ), operation_label( operation_kind::two_half, n ),
                                           operation_label( operation_kind::one_half, n ) };
    std::vector<std::string> const expected_labels =
        n == 16u ? std::vector<std::string>{ "One 16 x 16", "Two 8 x 8", "One 8 x 8" } : std::vector<std::string>{ "One 32 x 32", "Two 16 x 16", "One 16 x 16" };
    ok = ok && labels == expected_labels && r.rows.size() == 6u;
    for ( std::size_t i = 0; i < r.rows.size(); ++i )
    {
      auto const& row = r.rows[i];
      ok = ok && row.operation == expected_labels[i % 3u] && row.applicable;
      auto const* base = r.find( "twin-regular", row.operation );
      auto const& fig = r.designs[i / 3u];
      auto const& bfig = r.designs[0];
      ok = ok && base && row.pdp == fig.depth * row.power.weighted_per_cycle;
      ok = ok && row.delta_area == 100.0 * ( fig.area - bfig.area ) / bfig.area;
      ok = ok && row.delta_depth == 100.0 * ( fig.depth - bfig.depth ) / bfig.depth;
      ok = ok && row.delta_power == 100.0 * ( row.power.weighted_per_cycle - base->power.weighted_per_cycle ) / base->power.weighted_per_cycle;
      ok = ok && row.delta_pdp == 100.0 * ( row.pdp - base->pdp ) / base->pdp;
    }
    auto const j = to_json( r );
    auto const text = to_text( r );
    for ( auto const& label : expected_labels )
    {
      ok = ok && text.find( label ) != std::string::npos;
    }
    ok = ok && text.find( "PDP" ) != std::string::npos && j["rows"][0].contains( "pdp" ) && j["rows"][3]["delta_percent"].contains( "pdp" );
    auto const* prop = r.find( "recursive-bec-gated", expected_labels[0] );
    char line[200];
    std::snprintf( line, sizeof line, "    N=%u PDP delta %+.4f%% (published energy delta %+.4f%%)\n", n, prop ? *prop->delta_pdp : 0.0,
                   reference_for_width( n )->delta_energy );
    log << line;
  }
  return ok;
}

bool determinism_and_round_trips( std::ostream& log )
{
  bench_config cfg;
  cfg.vectors = 2000;
  auto designs = std::vector<circuit>{ gen_twin_regular( 16, reduction_policy::hpm_regular ), gen_recursive_bec_gated( 16, reduction_policy::hpm_regular ) };
  auto a = to_json( compare( designs, "twin-regular", cfg ) ).dump( 2 );
  auto b = to_json( compare( designs, "twin-regular", cfg ) ).dump( 2 );
  auto ta = to_text( compare( designs, "twin-regular", cfg ) );
  auto tb = to_text( compare( designs, "twin-regular", cfg ) );
  bool ok = a == b && ta == tb;
  log << "    repeated N=16 reports byte-identical: " << ( a == b && ta == tb ? "yes" : "no" ) << "\n";

  std::size_t round_trips = 0;
  for ( auto tag : all_variants )
  {
    auto c = generate( { tag, 8, reduction_policy::hpm_regular } );
    auto const text = serialize( c );
    auto from_json = deserialize( text );
    auto from_hdl = parse_verilog( export_verilog( c ) );
    ok = ok && from_json == c && from_hdl == c && serialize( from_json ) == text;
    for ( auto mode : all_modes )
    {
      if ( !supports_mode( tag, mode ) )
        continue;
      auto r0 = verify( c, mode, verify_strategy::all_pairs() );
      auto r1 = verify( from_json, mode, verify_strategy::all_pairs() );
      auto r2 = verify( from_hdl, mode, verify_strategy::all_pairs() );
      ok = ok && r0.passes == r1.passes && r0.passes == r2.passes && r0.failures == r1.failures && r0.failures == r2.failures && r0.ok();
      ++round_trips;
    }
  }
  log << "    " << round_trips << " variant/mode round trips through JSON and HDL verified exhaustively\n";
  return ok;
}

} // namespace

int main()
{
  std::vector<criterion> const criteria{
      { 1, "exhaustive full-mode correctness at N=8", exhaustive_full_mode },
      { 2, "mode matrix at N=8 (gated: 4 modes, twin-regular: twin=1)", mode_matrix },
      { 3, "large-width random equivalence (N=16 x 10000, N=32 x 15000)", large_width_random },
      { 4, "carry-headroom invariant", carry_headroom },
      { 5, "BEC substitution (block and design area, N=8 equivalence)", bec_substitution },
      { 6, "clock-gating power direction (01 <= 0.75 x 11, 00 <= 0.95 x 11)", clock_gating_power },
      { 7, "area overhead of gated design vs twin-regular <= 20%", area_overhead },
      { 8, "report fidelity (rows, PDP, exact percentage recomputation)", report_fidelity },
      { 9, "determinism and netlist/HDL round trips", determinism_and_round_trips } };

  int failed = 0;
  for ( auto const& c : criteria )
  {
    std::ostringstream log;
    bool pass = false;
    try
    {
      pass = c.check( log );
    }
    catch ( std::exception const& e )
    {
      log << "    exception: " << e.what() << "\n";
    }
    std::cout << ( pass ? "PASS" : "FAIL" ) << " [" << c.id << "] " << c.title << "\n" << log.str() << std::flush;
    failed += pass ? 0 : 1;
  }
  std::cout << ( failed == 0 ? "all criteria passed" : std::to_string( failed ) + " criteria failed" ) << "\n";
  return failed == 0 ? 0 : 1;
}
