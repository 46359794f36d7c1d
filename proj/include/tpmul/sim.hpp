/*!
  \file sim.hpp
  \brief Levelized cycle simulation with register enables and toggle counting

  Every net carries a 64-bit word; bit k is the value of the net in lane k.
  Lanes are independent simulations, which lets verification run 64
  operand pairs per pass. Power runs use a single lane.

  One `step()` is one clock cycle:
    1. inputs are applied and the fan-in cones of register d/enable nets
       settle against the current register state;
    2. registers whose enable is 1 capture d, the others hold;
    3. the whole circuit settles against the new register state.
  Toggles compare the settled values of consecutive cycles, so a net
  contributes at most one transition per cycle (zero-delay, no glitches).
  The baseline before the first cycle is the circuit settled with all
  inputs at 0 and registers at their reset values.
*/

#pragma once

#include "multipliers.hpp"
#include "netlist.hpp"
#include "wide.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace tpmul
{

using word = uint64_t;
using input_assignment = std::map<std::string, wide_uint, std::less<>>;
using output_values = std::map<std::string, wide_uint, std::less<>>;

/*! \brief Switching activity. `weighted` multiplies each net's toggles by (1 + fanout). */
struct toggle_stats
{
  std::vector<uint64_t> per_net;
  uint64_t total{ 0 };
  uint64_t weighted{ 0 };
  uint64_t cycles{ 0 };

  toggle_stats& operator+=( toggle_stats const& other )
  {
    if ( per_net.size() < other.per_net.size() )
    {
      per_net.resize( other.per_net.size(), 0 );
    }
    for ( std::size_t i = 0; i < other.per_net.size(); ++i )
    {
      per_net[i] += other.per_net[i];
    }
    total += other.total;
    weighted += other.weighted;
    cycles += other.cycles;
    return *this;
  }

  friend bool operator==( toggle_stats const&, toggle_stats const& ) = default;
};

struct sim_state
{
  std::vector<word> nets;
  std::vector<word> registers;
  uint64_t cycle{ 0 };
};

struct step_delta
{
  uint64_t toggles{ 0 };
  uint64_t weighted{ 0 };
};

class simulator
{
public:
  explicit simulator( circuit const& c, uint32_t lanes = 1 )
      : c_( c ), lanes_( lanes ), mask_( lanes >= 64u ? ~word{ 0 } : ( word{ 1 } << lanes ) - 1u )
  {
    if ( lanes == 0 || lanes > 64u )
    {
      throw std::invalid_argument( "lane count must be in [1, 64]" );
    }
    for ( auto g : levelize( c ) )
    {
      auto const& gt = c.gates()[g];
      compiled_gate cg{ gt.kind, 0, 0, 0, gt.output.index };
      if ( gt.inputs.size() > 0 ) cg.a = gt.inputs[0].index;
      if ( gt.inputs.size() > 1 ) cg.b = gt.inputs[1].index;
      if ( gt.inputs.size() > 2 ) cg.c = gt.inputs[2].index;
      order_.push_back( cg );
    }

    fanout_.assign( c.num_nets(), 0 );
    for ( auto const& g : c.gates() )
    {
      for ( auto in : g.inputs )
      {
        ++fanout_[in.index];
      }
    }
    for ( auto const& r : c.registers() )
    {
      ++fanout_[r.d.index];
      ++fanout_[r.enable.index];
    }

    if ( !c.registers().empty() )
    {
      std::vector<bool> needed( c.num_nets(), false );
      for ( auto const& r : c.registers() )
      {
        needed[r.d.index] = true;
        needed[r.enable.index] = true;
      }
      for ( auto it = order_.rbegin(); it != order_.rend(); ++it )
      {
        if ( needed[it->out] )
        {
          needed[it->a] = needed[it->a] || arity( it->kind ) > 0;
          needed[it->b] = needed[it->b] || arity( it->kind ) > 1;
          needed[it->c] = needed[it->c] || arity( it->kind ) > 2;
        }
      }
      for ( auto const& cg : order_ )
      {
        if ( needed[cg.out] )
        {
          capture_order_.push_back( cg );
        }
      }
    }
    reset();
  }

  circuit const& netlist() const { return c_; }
  uint32_t lanes() const { return lanes_; }

  /*! \brief Registers to reset values, inputs to 0, settled; clears toggle statistics. */
  void reset()
  {
    state_.nets.assign( c_.num_nets(), 0 );
    state_.registers.clear();
    for ( auto const& r : c_.registers() )
    {
      state_.registers.push_back( r.reset_value ? ~word{ 0 } : 0 );
    }
    state_.cycle = 0;
    load_registers();
    evaluate( order_ );
    settled_ = state_.nets;
    stats_ = toggle_stats{};
    stats_.per_net.assign( c_.num_nets(), 0 );
  }

  /*! \brief Drives an input port; `values` holds one value per lane, or one value for all lanes. */
  void set_input( std::string_view name, std::span<wide_uint const> values )
  {
    auto const* p = c_.find_port( name );
    if ( p == nullptr || p->direction != port_direction::in )
    {
      throw std::invalid_argument( "no input port named " + std::string( name ) );
    }
    if ( values.size() != 1u && values.size() != lanes_ )
    {
      throw std::invalid_argument( "expected 1 or " + std::to_string( lanes_ ) + " values for port " + std::string( name ) );
    }
    for ( std::size_t bit = 0; bit < p->bits.size(); ++bit )
    {
      word w = 0;
      if ( values.size() == 1u )
      {
        w = ( ( values[0] >> bit ) & 1u ) ? ~word{ 0 } : 0;
      }
      else
      {
        for ( std::size_t lane = 0; lane < lanes_; ++lane )
        {
          w |= static_cast<word>( ( values[lane] >> bit ) & 1u ) << lane;
        }
      }
      state_.nets[p->bits[bit].index] = w;
    }
  }

  void set_input( std::string_view name, wide_uint value )
  {
    set_input( name, std::span<wide_uint const>( &value, 1 ) );
  }

  /*! \brief Applies a full assignment; every input port must be present. */
  void apply( input_assignment const& inputs )
  {
    for ( auto const& p : c_.ports() )
    {
      if ( p.direction != port_direction::in )
      {
        continue;
      }
      auto it = inputs.find( p.name );
      if ( it == inputs.end() )
      {
        throw std::invalid_argument( "missing input assignment for port " + p.name );
      }
      set_input( p.name, it->second );
    }
  }

  /*! \brief Overrides the register state, same value in every lane. */
  void set_registers( std::span<bool const> values )
  {
    if ( values.size() != state_.registers.size() )
    {
      throw std::invalid_argument( "register value count does not match the circuit" );
    }
    for ( std::size_t r = 0; r < values.size(); ++r )
    {
      state_.registers[r] = values[r] ? ~word{ 0 } : 0;
    }
  }

  /*! \brief Combinational settle against the current register state, no clock edge. */
  void settle()
  {
    load_registers();
    evaluate( order_ );
  }

  /*! \brief One clock cycle with the inputs currently applied. */
  step_delta step()
  {
    load_registers();
    if ( !c_.registers().empty() )
    {
      evaluate( capture_order_ );
      auto const& regs = c_.registers();
      for ( std::size_t r = 0; r < regs.size(); ++r )
      {
        auto const en = state_.nets[regs[r].enable.index];
        state_.registers[r] = ( state_.registers[r] & ~en ) | ( state_.nets[regs[r].d.index] & en );
      }
      load_registers();
    }
    evaluate( order_ );

    step_delta delta;
    for ( std::size_t i = 0; i < state_.nets.size(); ++i )
    {
      auto const flips = static_cast<uint64_t>( std::popcount( ( state_.nets[i] ^ settled_[i] ) & mask_ ) );
      if ( flips != 0 )
      {
        stats_.per_net[i] += flips;
        delta.toggles += flips;
        delta.weighted += flips * ( 1u + fanout_[i] );
      }
    }
    settled_ = state_.nets;
    stats_.total += delta.toggles;
    stats_.weighted += delta.weighted;
    stats_.cycles += 1;
    ++state_.cycle;
    return delta;
  }

  word net( net_id n ) const { return state_.nets[n.index]; }

  bool net_value( net_id n, uint32_t lane = 0 ) const { return ( state_.nets[n.index] >> lane ) & 1u; }

  wide_uint read( port const& p, uint32_t lane = 0 ) const
  {
    wide_uint value = 0;
    for ( std::size_t bit = 0; bit < p.bits.size(); ++bit )
    {
      value |= static_cast<wide_uint>( ( state_.nets[p.bits[bit].index] >> lane ) & 1u ) << bit;
    }
    return value;
  }

  wide_uint read( std::string_view name, uint32_t lane = 0 ) const
  {
    auto const* p = c_.find_port( name );
    if ( p == nullptr )
    {
      throw std::invalid_argument( "no port named " + std::string( name ) );
    }
    return read( *p, lane );
  }

  output_values outputs( uint32_t lane = 0 ) const
  {
    output_values out;
    for ( auto const& p : c_.ports() )
    {
      if ( p.direction == port_direction::out )
      {
        out[p.name] = read( p, lane );
      }
    }
    return out;
  }

  sim_state const& state() const { return state_; }
  toggle_stats const& stats() const { return stats_; }
  std::vector<uint32_t> const& fanout() const { return fanout_; }

private:
  struct compiled_gate
  {
    gate_kind kind;
    uint32_t a, b, c, out;
  };

  void load_registers()
  {
    auto const& regs = c_.registers();
    for ( std::size_t r = 0; r < regs.size(); ++r )
    {
      state_.nets[regs[r].q.index] = state_.registers[r];
    }
  }

  void evaluate( std::vector<compiled_gate> const& order )
  {
    auto* v = state_.nets.data();
    for ( auto const& g : order )
    {
      word out;
      switch ( g.kind )
      {
      case gate_kind::const0: out = 0; break;
      case gate_kind::const1: out = ~word{ 0 }; break;
      case gate_kind::buf: out = v[g.a]; break;
      case gate_kind::inv: out = ~v[g.a]; break;
      case gate_kind::and2: out = v[g.a] & v[g.b]; break;
      case gate_kind::or2: out = v[g.a] | v[g.b]; break;
      case gate_kind::xor2: out = v[g.a] ^ v[g.b]; break;
      case gate_kind::nand2: out = ~( v[g.a] & v[g.b] ); break;
      case gate_kind::nor2: out = ~( v[g.a] | v[g.b] ); break;
      case gate_kind::mux2: out = ( v[g.b] & ~v[g.a] ) | ( v[g.c] & v[g.a] ); break;
      default: out = 0; break;
      }
      v[g.out] = out;
    }
  }

  circuit const& c_;
  uint32_t lanes_;
  word mask_;
  std::vector<compiled_gate> order_;
  std::vector<compiled_gate> capture_order_;
  std::vector<uint32_t> fanout_;
  sim_state state_;
  std::vector<word> settled_;
  toggle_stats stats_;
};

/*! \brief Single settle of a circuit; returns one value per net. */
inline std::vector<bool> settle( circuit const& c, input_assignment const& inputs, std::span<bool const> register_values = {} )
{
  simulator sim( c );
  sim.apply( inputs );
  if ( !register_values.empty() )
  {
    sim.set_registers( register_values );
  }
  sim.settle();
  std::vector<bool> values( c.num_nets() );
  for ( uint32_t i = 0; i < c.num_nets(); ++i )
  {
    values[i] = sim.net_value( net_id{ i } );
  }
  return values;
}

struct run_result
{
  std::vector<output_values> trace;
  std::vector<step_delta> per_cycle;
  toggle_stats stats;
};

/*! \brief Steps through a vector sequence from reset in a single lane. */
inline run_result run( circuit const& c, std::vector<input_assignment> const& vectors, bool keep_trace = false )
{
  simulator sim( c );
  run_result result;
  for ( auto const& v : vectors )
  {
    sim.apply( v );
    result.per_cycle.push_back( sim.step() );
    if ( keep_trace )
    {
      result.trace.push_back( sim.outputs() );
    }
  }
  result.stats = sim.stats();
  return result;
}

/* ---------------------------------------------------------------------- */
/* differential verification                                              */
/* ---------------------------------------------------------------------- */

struct verify_strategy
{
  bool exhaustive{ true };
  uint64_t seed{ 0 };
  uint64_t count{ 0 };

  static verify_strategy all_pairs() { return { true, 0, 0 }; }
  static verify_strategy random( uint64_t seed, uint64_t count ) { return { false, seed, count }; }
};

struct case_failure
{
  wide_uint x{ 0 };
  wide_uint y{ 0 };
  operation_mode mode{ operation_mode::full };
  wide_uint expected{ 0 };
  wide_uint actual{ 0 };
};

/*! \brief Outcome of one verification run; monitor counters stay 0 when the design has no such probe. */
struct verify_report
{
  verify_strategy strategy;
  operation_mode mode{ operation_mode::full };
  uint64_t passes{ 0 };
  uint64_t failures{ 0 };
  std::optional<case_failure> first_failure;

  bool headroom_monitored{ false };
  uint64_t merge_overflow_violations{ 0 }; /*!< bit N and carry-out of the merge adder both set */
  uint64_t increment_wrap_violations{ 0 }; /*!< high half of M4 all ones */
  bool twin_carry_monitored{ false };
  uint64_t twin_carry_violations{ 0 }; /*!< pre-kill carry at the half boundary set in twin mode */

  uint64_t cases() const { return passes + failures; }
  bool ok() const { return failures == 0; }
};

namespace detail
{

struct probes
{
  std::optional<net_id> merge_bit;
  std::optional<net_id> merge_cout;
  bus m4_high;
  std::optional<net_id> twin_carry;
};

inline std::optional<net_id> single_probe( circuit const& c, std::string const& key )
{
  auto text = c.meta_value( key );
  if ( !text )
  {
    return std::nullopt;
  }
  auto bits = bus_from_string( *text );
  if ( !bits || bits->size() != 1u || ( *bits )[0].index >= c.num_nets() )
  {
    return std::nullopt;
  }
  return ( *bits )[0];
}

inline probes read_probes( circuit const& c )
{
  probes p;
  p.merge_bit = single_probe( c, "probe.merge_bit" );
  p.merge_cout = single_probe( c, "probe.merge_cout" );
  p.twin_carry = single_probe( c, "probe.twin_carry" );
  if ( auto text = c.meta_value( "probe.m4_high" ) )
  {
    if ( auto bits = bus_from_string( *text ) )
    {
      p.m4_high = *bits;
    }
  }
  return p;
}

} // namespace detail

/*! \brief Compares simulated `p` against the mode semantics over a case set.

  The mode is driven on a `mode` port when present, as the `twin` flag
  when that port exists, and must be `full` otherwise. Exhaustive
  strategies require 2N <= 20. Cases run 64 at a time in independent
  lanes; sequential designs are checked on the step that captures the
  operands.
*/
inline verify_report verify( circuit const& c, operation_mode mode, verify_strategy strategy )
{
  auto const n = c.width();
  auto const* px = c.find_port( "x" );
  auto const* py = c.find_port( "y" );
  auto const* pp = c.find_port( "p" );
  if ( px == nullptr || py == nullptr || pp == nullptr || px->bits.size() != n || py->bits.size() != n )
  {
    throw std::invalid_argument( "circuit " + c.name() + " does not expose x[N], y[N], p ports" );
  }
  bool const has_mode = c.find_port( "mode" ) != nullptr;
  bool const has_twin = c.find_port( "twin" ) != nullptr;
  if ( !has_mode && !( has_twin && mode == operation_mode::twin ) && mode != operation_mode::full )
  {
    throw std::invalid_argument( c.name() + " cannot run mode " + std::string( mode_code( mode ) ) );
  }
  if ( strategy.exhaustive && 2u * n > 20u )
  {
    throw std::invalid_argument( "exhaustive verification needs 2N <= 20 input bits" );
  }

  verify_report report;
  report.strategy = strategy;
  report.mode = mode;
  auto const pr = detail::read_probes( c );
  report.headroom_monitored = pr.merge_bit && pr.merge_cout && !pr.m4_high.empty();
  report.twin_carry_monitored = pr.twin_carry.has_value() && has_twin && mode == operation_mode::twin;

  uint64_t const total = strategy.exhaustive ? ( uint64_t{ 1 } << ( 2u * n ) ) : strategy.count;
  auto const operand_mask = wide_mask( n );
  std::mt19937_64 rng( strategy.seed );
  auto next_case = [&]( uint64_t index ) -> std::pair<wide_uint, wide_uint> {
    if ( strategy.exhaustive )
    {
      return { index & ( ( uint64_t{ 1 } << n ) - 1u ), index >> n };
    }
    wide_uint x = rng(), y = rng();
    if ( n > 64u )
    {
      x = ( x << 64 ) | rng();
      y = ( y << 64 ) | rng();
    }
    return { x & operand_mask, y & operand_mask };
  };

  simulator sim( c, 64 );
  if ( has_mode )
  {
    sim.set_input( "mode", static_cast<wide_uint>( mode ) );
  }
  if ( has_twin )
  {
    sim.set_input( "twin", mode == operation_mode::twin ? 1u : 0u );
  }

  std::vector<wide_uint> xs( 64 ), ys( 64 );
  for ( uint64_t base = 0; base < total; base += 64u )
  {
    auto const active = static_cast<uint32_t>( std::min<uint64_t>( 64u, total - base ) );
    for ( uint32_t lane = 0; lane < 64u; ++lane )
    {
      if ( lane < active )
      {
        std::tie( xs[lane], ys[lane] ) = next_case( base + lane );
      }
      else
      {
        xs[lane] = xs[0];
        ys[lane] = ys[0];
      }
    }
    sim.set_input( "x", xs );
    sim.set_input( "y", ys );
    sim.step();

    word const lane_mask = active == 64u ? ~word{ 0 } : ( word{ 1 } << active ) - 1u;
    if ( report.headroom_monitored )
    {
      auto const both = sim.net( *pr.merge_bit ) & sim.net( *pr.merge_cout );
      report.merge_overflow_violations += static_cast<uint64_t>( std::popcount( both & lane_mask ) );
      word all_ones = ~word{ 0 };
      for ( auto b : pr.m4_high )
      {
        all_ones &= sim.net( b );
      }
      report.increment_wrap_violations += static_cast<uint64_t>( std::popcount( all_ones & lane_mask ) );
    }
    if ( report.twin_carry_monitored )
    {
      report.twin_carry_violations += static_cast<uint64_t>( std::popcount( sim.net( *pr.twin_carry ) & lane_mask ) );
    }

    for ( uint32_t lane = 0; lane < active; ++lane )
    {
      auto const expected = mode_product( n, mode, xs[lane], ys[lane] );
      auto const actual = sim.read( *pp, lane );
      if ( expected == actual )
      {
        ++report.passes;
      }
      else
      {
        if ( !report.first_failure )
        {
          report.first_failure = case_failure{ xs[lane], ys[lane], mode, expected, actual };
        }
        ++report.failures;
      }
    }
  }
  return report;
}

/*! \brief Nets whose every transitive source is one of `regs` (constants aside).

  These are the nets that must stay silent while those registers hold.
*/
inline std::vector<bool> exclusive_fanout_cone( circuit const& c, std::vector<std::size_t> const& regs )
{
  enum : uint8_t
  {
    from_selected = 1,
    from_other = 2
  };
  std::vector<uint8_t> origin( c.num_nets(), 0 );
  for ( auto const& p : c.ports() )
  {
    if ( p.direction == port_direction::in )
    {
      for ( auto bit : p.bits )
      {
        origin[bit.index] |= from_other;
      }
    }
  }
  std::vector<bool> selected( c.registers().size(), false );
  for ( auto r : regs )
  {
    selected.at( r ) = true;
  }
  for ( std::size_t r = 0; r < c.registers().size(); ++r )
  {
    origin[c.registers()[r].q.index] |= selected[r] ? from_selected : from_other;
  }
  for ( auto g : levelize( c ) )
  {
    auto const& gt = c.gates()[g];
    uint8_t o = 0;
    for ( auto in : gt.inputs )
    {
      o |= origin[in.index];
    }
    origin[gt.output.index] = o;
  }
  std::vector<bool> cone( c.num_nets(), false );
  for ( std::size_t i = 0; i < origin.size(); ++i )
  {
    cone[i] = origin[i] == from_selected;
  }
  return cone;
}

} // namespace tpmul
