/*!
  \file metrics.hpp
  \brief Technology-free area, delay and switching-power proxies

  Area sums per-kind gate costs, per-bit register costs and one clock-gate
  cell per gated clock (the set of registers sharing one enable net that is
  not tied to CONST1). Delay is the longest weighted path from any input
  port or register output to any output port or register input. Power is
  the toggle activity measured by `sim::run`.
*/

#pragma once

#include "multipliers.hpp"
#include "netlist.hpp"
#include "sim.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <fstream>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace tpmul
{

struct area_table
{
  std::array<std::optional<double>, num_gate_kinds> gate_cost{};
  std::optional<double> register_bit;
  std::optional<double> clock_gate;

  double& operator[]( gate_kind kind )
  {
    auto& slot = gate_cost[static_cast<std::size_t>( kind )];
    if ( !slot )
    {
      slot = 0.0;
    }
    return *slot;
  }

  /*! \brief Static-CMOS transistor counts. */
  static area_table transistor_count()
  {
    area_table t;
    t[gate_kind::const0] = 0;
    t[gate_kind::const1] = 0;
    t[gate_kind::buf] = 2;
    t[gate_kind::inv] = 2;
    t[gate_kind::nand2] = 4;
    t[gate_kind::nor2] = 4;
    t[gate_kind::and2] = 6;
    t[gate_kind::or2] = 6;
    t[gate_kind::xor2] = 10;
    t[gate_kind::mux2] = 12;
    t.register_bit = 24;
    t.clock_gate = 6;
    return t;
  }
};

struct delay_table
{
  std::array<std::optional<double>, num_gate_kinds> gate_cost{};

  double& operator[]( gate_kind kind )
  {
    auto& slot = gate_cost[static_cast<std::size_t>( kind )];
    if ( !slot )
    {
      slot = 0.0;
    }
    return *slot;
  }

  double cost( gate_kind kind ) const
  {
    auto const& slot = gate_cost[static_cast<std::size_t>( kind )];
    if ( !slot )
    {
      throw std::invalid_argument( "missing delay entry for " + std::string( kind_name( kind ) ) );
    }
    return *slot;
  }

  /*! \brief Every logic gate 1, BUF and constants 0. */
  static delay_table unit()
  {
    delay_table t;
    for ( auto kind : all_gate_kinds )
    {
      t[kind] = 1;
    }
    t[gate_kind::buf] = 0;
    t[gate_kind::const0] = 0;
    t[gate_kind::const1] = 0;
    return t;
  }

  /*! \brief Inverting single-stage gates 1, two-stage gates 2. */
  static delay_table two_level()
  {
    auto t = unit();
    t[gate_kind::nand2] = 1;
    t[gate_kind::nor2] = 1;
    t[gate_kind::inv] = 1;
    t[gate_kind::and2] = 2;
    t[gate_kind::or2] = 2;
    t[gate_kind::xor2] = 2;
    t[gate_kind::mux2] = 2;
    return t;
  }
};

/*! \brief Distinct enable nets that gate a clock, i.e. not driven by CONST1. */
inline std::size_t gated_clock_count( circuit const& c )
{
  std::vector<bool> tied_high( c.num_nets(), false );
  for ( auto const& g : c.gates() )
  {
    if ( g.kind == gate_kind::const1 )
    {
      tied_high[g.output.index] = true;
    }
  }
  std::set<uint32_t> enables;
  for ( auto const& r : c.registers() )
  {
    if ( !tied_high[r.enable.index] )
    {
      enables.insert( r.enable.index );
    }
  }
  return enables.size();
}

inline double area( circuit const& c, area_table const& table )
{
  double total = 0;
  for ( auto const& g : c.gates() )
  {
    auto const& cost = table.gate_cost[static_cast<std::size_t>( g.kind )];
    if ( !cost )
    {
      throw std::invalid_argument( "missing area entry for " + std::string( kind_name( g.kind ) ) );
    }
    total += *cost;
  }
  if ( !c.registers().empty() )
  {
    if ( !table.register_bit )
    {
      throw std::invalid_argument( "missing area entry for register_bit" );
    }
    total += *table.register_bit * static_cast<double>( c.registers().size() );
    if ( auto gated = gated_clock_count( c ); gated > 0 )
    {
      if ( !table.clock_gate )
      {
        throw std::invalid_argument( "missing area entry for clock_gate" );
      }
      total += *table.clock_gate * static_cast<double>( gated );
    }
  }
  return total;
}

struct depth_result
{
  double delay{ 0 };
  std::vector<uint32_t> path; /*!< gate indices from source to sink */
};

/*! \brief Critical path; among equally long paths the lexicographically smallest gate sequence wins. */
inline depth_result depth( circuit const& c, delay_table const& table )
{
  std::vector<double> arrival( c.num_nets(), 0.0 );
  std::vector<std::vector<uint32_t>> path( c.num_nets() );

  auto better = [&]( net_id candidate, std::optional<net_id> best ) {
    if ( !best )
    {
      return true;
    }
    if ( arrival[candidate.index] != arrival[best->index] )
    {
      return arrival[candidate.index] > arrival[best->index];
    }
    return std::lexicographical_compare( path[candidate.index].begin(), path[candidate.index].end(),
                                         path[best->index].begin(), path[best->index].end() );
  };

  for ( auto g : levelize( c ) )
  {
    auto const& gt = c.gates()[g];
    std::optional<net_id> from;
    for ( auto in : gt.inputs )
    {
      if ( better( in, from ) )
      {
        from = in;
      }
    }
    auto const out = gt.output.index;
    arrival[out] = ( from ? arrival[from->index] : 0.0 ) + table.cost( gt.kind );
    path[out] = from ? path[from->index] : std::vector<uint32_t>{};
    path[out].push_back( g );
  }

  std::optional<net_id> sink;
  for ( auto const& p : c.ports() )
  {
    if ( p.direction == port_direction::out )
    {
      for ( auto bit : p.bits )
      {
        if ( better( bit, sink ) )
        {
          sink = bit;
        }
      }
    }
  }
  for ( auto const& r : c.registers() )
  {
    for ( auto n : { r.d, r.enable } )
    {
      if ( better( n, sink ) )
      {
        sink = n;
      }
    }
  }
  if ( !sink )
  {
    return {};
  }
  return { arrival[sink->index], path[sink->index] };
}

/* ---------------------------------------------------------------------- */
/* power proxy                                                            */
/* ---------------------------------------------------------------------- */

struct power_summary
{
  uint64_t cycles{ 0 };
  uint64_t toggles{ 0 };
  uint64_t weighted{ 0 };
  double toggles_per_cycle{ 0 };
  double weighted_per_cycle{ 0 };
};

inline power_summary power_proxy( circuit const& c, std::vector<input_assignment> const& workload )
{
  auto result = run( c, workload );
  power_summary s;
  s.cycles = result.stats.cycles;
  s.toggles = result.stats.total;
  s.weighted = result.stats.weighted;
  if ( s.cycles > 0 )
  {
    s.toggles_per_cycle = static_cast<double>( s.toggles ) / static_cast<double>( s.cycles );
    s.weighted_per_cycle = static_cast<double>( s.weighted ) / static_cast<double>( s.cycles );
  }
  return s;
}

/*! \brief The three operation types compared per design. */
enum class operation_kind : uint8_t
{
  one_full, /*!< one N x N */
  two_half, /*!< two N/2 x N/2 */
  one_half  /*!< one N/2 x N/2 */
};

inline constexpr std::array<operation_kind, 3> all_operation_kinds = {
    operation_kind::one_full, operation_kind::two_half, operation_kind::one_half };

inline std::string operation_label( operation_kind kind, uint32_t n )
{
  auto const w = kind == operation_kind::one_full ? n : n / 2u;
  auto const dims = std::to_string( w ) + " x " + std::to_string( w );
  return ( kind == operation_kind::two_half ? "Two " : "One " ) + dims;
}

/*! \brief How a design runs an operation type: the mode driven and whether high operand halves are zeroed. */
struct workload_plan
{
  bool applicable{ false };
  operation_mode mode{ operation_mode::full };
  bool zero_high_halves{ false };
};

/* Gated designs isolate idle multipliers by mode; the twin baseline needs
   its twin flag and, for a single half product, zeroed high operand halves;
   single-mode designs can only zero the high halves. */
inline workload_plan plan_workload( circuit const& c, operation_kind kind )
{
  bool const has_mode = c.find_port( "mode" ) != nullptr;
  bool const has_twin = c.find_port( "twin" ) != nullptr;
  switch ( kind )
  {
  case operation_kind::one_full:
    return { true, operation_mode::full, false };
  case operation_kind::two_half:
    if ( has_mode || has_twin )
    {
      return { true, operation_mode::twin, false };
    }
    return { false, operation_mode::full, false };
  case operation_kind::one_half:
    if ( has_mode )
    {
      return { true, operation_mode::only_m1, false };
    }
    if ( has_twin )
    {
      return { true, operation_mode::twin, true };
    }
    return { true, operation_mode::full, true };
  }
  return {};
}

/*! \brief Uniform random operand stream; the same seed yields the same operands for every design. */
inline std::vector<input_assignment> make_workload( circuit const& c, workload_plan const& plan, uint64_t count, uint64_t seed )
{
  auto const n = c.width();
  auto const mask = plan.zero_high_halves ? wide_mask( n / 2u ) : wide_mask( n );
  bool const has_mode = c.find_port( "mode" ) != nullptr;
  bool const has_twin = c.find_port( "twin" ) != nullptr;
  std::mt19937_64 rng( seed );
  std::vector<input_assignment> vectors;
  vectors.reserve( count );
  for ( uint64_t i = 0; i < count; ++i )
  {
    input_assignment v;
    wide_uint x = rng();
    wide_uint y = rng();
    v["x"] = x & mask;
    v["y"] = y & mask;
    if ( has_mode )
    {
      v["mode"] = static_cast<wide_uint>( plan.mode );
    }
    if ( has_twin )
    {
      v["twin"] = plan.mode == operation_mode::twin ? 1u : 0u;
    }
    vectors.push_back( std::move( v ) );
  }
  return vectors;
}

/* ---------------------------------------------------------------------- */
/* table files                                                            */
/* ---------------------------------------------------------------------- */

namespace detail
{

inline nlohmann::json read_json_file( std::string const& path )
{
  std::ifstream in( path );
  if ( !in )
  {
    throw std::runtime_error( "cannot open " + path );
  }
  try
  {
    return nlohmann::json::parse( in );
  }
  catch ( nlohmann::json::parse_error const& e )
  {
    throw std::runtime_error( path + ": " + e.what() );
  }
}

template<typename Table>
void read_gate_costs( nlohmann::json const& doc, Table& table, std::string const& path, bool allow_zero )
{
  for ( auto const& [key, value] : doc.items() )
  {
    if ( key == "register_bit" || key == "clock_gate" )
    {
      continue;
    }
    auto kind = kind_from_name( key );
    if ( !kind )
    {
      throw std::runtime_error( path + ": unknown gate kind \"" + key + "\"" );
    }
    double const cost = value.is_number() ? value.template get<double>() : -1.0;
    if ( cost < 0 )
    {
      throw std::runtime_error( path + ": cost of " + key + " must be a non-negative number" );
    }
    bool const may_be_zero = allow_zero || *kind == gate_kind::buf || *kind == gate_kind::const0 || *kind == gate_kind::const1;
    if ( !may_be_zero && cost == 0 )
    {
      throw std::runtime_error( path + ": delay of " + key + " must be positive" );
    }
    table[*kind] = cost;
  }
}

} // namespace detail

/*! \brief JSON object keyed by gate kind, plus `register_bit` and `clock_gate`. */
inline area_table read_area_table( std::string const& path )
{
  auto doc = detail::read_json_file( path );
  area_table t;
  detail::read_gate_costs( doc, t, path, true );
  for ( char const* key : { "register_bit", "clock_gate" } )
  {
    if ( doc.contains( key ) )
    {
      if ( !doc[key].is_number() || doc[key].get<double>() < 0 )
      {
        throw std::runtime_error( path + ": " + key + " must be a non-negative number" );
      }
      ( std::string( key ) == "register_bit" ? t.register_bit : t.clock_gate ) = doc[key].get<double>();
    }
  }
  return t;
}

inline delay_table read_delay_table( std::string const& path )
{
  auto doc = detail::read_json_file( path );
  delay_table t;
  detail::read_gate_costs( doc, t, path, false );
  return t;
}

inline nlohmann::ordered_json to_json( area_table const& t )
{
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for ( auto kind : all_gate_kinds )
  {
    if ( auto const& cost = t.gate_cost[static_cast<std::size_t>( kind )] )
    {
      j[std::string( kind_name( kind ) )] = *cost;
    }
  }
  if ( t.register_bit )
    j["register_bit"] = *t.register_bit;
  if ( t.clock_gate )
    j["clock_gate"] = *t.clock_gate;
  return j;
}

inline nlohmann::ordered_json to_json( delay_table const& t )
{
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for ( auto kind : all_gate_kinds )
  {
    if ( auto const& cost = t.gate_cost[static_cast<std::size_t>( kind )] )
    {
      j[std::string( kind_name( kind ) )] = *cost;
    }
  }
  return j;
}

} // namespace tpmul
