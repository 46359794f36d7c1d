// Builds the clock-gated recursive multiplier, multiplies one operand pair in
// each operation mode and prints the product with the mode's toggle count.

#include <tpmul/tpmul.hpp>

#include <iostream>

int main()
{
  using namespace tpmul;

  auto const c = gen_recursive_bec_gated( 16, reduction_policy::hpm_regular );
  wide_uint const x = 0xBEEF, y = 0x1234;

  for ( auto mode : { operation_mode::full, operation_mode::twin, operation_mode::only_m1, operation_mode::only_m4 } )
  {
    simulator sim( c );
    sim.apply( { { "x", x }, { "y", y }, { "mode", static_cast<wide_uint>( mode ) } } );
    sim.step();
    std::cout << "mode " << mode_code( mode ) << ": p = 0x" << to_hex( sim.read( "p" ) ) << " (expected 0x"
              << to_hex( mode_product( 16, mode, x, y ) ) << "), " << sim.stats().total << " toggles\n";
  }
  std::cout << "area " << area( c, area_table::transistor_count() ) << " transistors, depth " << depth( c, delay_table::unit() ).delay
            << " unit delays\n";
}
