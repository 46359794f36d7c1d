/*!
  \file netlist.hpp
  \brief Single-bit gate-level netlist: nets, gates, enable registers and ports

  A circuit is immutable once built. All generators go through
  `circuit_builder`, which enforces gate arity and the single-driver rule
  as gates are appended and validates the result in `build()`.

  Bit ordering is LSB-first everywhere: bus index 0 is the least
  significant bit.
*/

#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tpmul
{

/*! \brief Identifies one single-bit signal of a circuit. */
struct net_id
{
  uint32_t index{ 0 };

  friend auto operator<=>( net_id, net_id ) = default;
};

using bus = std::vector<net_id>;

enum class gate_kind : uint8_t
{
  const0,
  const1,
  buf,
  inv,
  and2,
  or2,
  xor2,
  nand2,
  nor2,
  mux2
};

inline constexpr std::array<gate_kind, 10> all_gate_kinds = {
    gate_kind::const0, gate_kind::const1, gate_kind::buf, gate_kind::inv, gate_kind::and2,
    gate_kind::or2, gate_kind::xor2, gate_kind::nand2, gate_kind::nor2, gate_kind::mux2 };

inline constexpr std::size_t num_gate_kinds = all_gate_kinds.size();

inline constexpr uint32_t arity( gate_kind kind )
{
  switch ( kind )
  {
  case gate_kind::const0:
  case gate_kind::const1:
    return 0;
  case gate_kind::buf:
  case gate_kind::inv:
    return 1;
  case gate_kind::mux2:
    return 3;
  default:
    return 2;
  }
}

inline constexpr std::string_view kind_name( gate_kind kind )
{
  switch ( kind )
  {
  case gate_kind::const0: return "CONST0";
  case gate_kind::const1: return "CONST1";
  case gate_kind::buf: return "BUF";
  case gate_kind::inv: return "INV";
  case gate_kind::and2: return "AND2";
  case gate_kind::or2: return "OR2";
  case gate_kind::xor2: return "XOR2";
  case gate_kind::nand2: return "NAND2";
  case gate_kind::nor2: return "NOR2";
  case gate_kind::mux2: return "MUX2";
  }
  return "?";
}

inline std::optional<gate_kind> kind_from_name( std::string_view name )
{
  for ( auto kind : all_gate_kinds )
  {
    if ( kind_name( kind ) == name )
    {
      return kind;
    }
  }
  return std::nullopt;
}

/*! \brief A gate instance. MUX2 inputs are (select, in0, in1), in0 chosen when select = 0. */
struct gate
{
  gate_kind kind{ gate_kind::const0 };
  std::vector<net_id> inputs;
  net_id output;

  friend bool operator==( gate const&, gate const& ) = default;
};

/*! \brief A D flip-flop with clock-gate enable; q holds when enable is 0. */
struct register_cell
{
  net_id d;
  net_id q;
  net_id enable;
  bool reset_value{ false };

  friend bool operator==( register_cell const&, register_cell const& ) = default;
};

enum class port_direction : uint8_t
{
  in,
  out
};

struct port
{
  std::string name;
  port_direction direction{ port_direction::in };
  bus bits;

  friend bool operator==( port const&, port const& ) = default;
};

/*! \brief Thrown when a generator or loader tries to build an ill-formed circuit. */
class construction_error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class circuit
{
public:
  using meta_map = std::map<std::string, std::string>;

  circuit() = default;

  circuit( std::string name, uint32_t width, std::string variant, uint32_t num_nets,
           std::vector<gate> gates, std::vector<register_cell> registers, std::vector<port> ports,
           meta_map meta = {} )
      : name_( std::move( name ) ),
        width_( width ),
        variant_( std::move( variant ) ),
        num_nets_( num_nets ),
        gates_( std::move( gates ) ),
        registers_( std::move( registers ) ),
        ports_( std::move( ports ) ),
        meta_( std::move( meta ) )
  {
  }

  std::string const& name() const { return name_; }
  uint32_t width() const { return width_; }
  std::string const& variant() const { return variant_; }
  uint32_t num_nets() const { return num_nets_; }
  std::vector<gate> const& gates() const { return gates_; }
  std::vector<register_cell> const& registers() const { return registers_; }
  std::vector<port> const& ports() const { return ports_; }
  meta_map const& meta() const { return meta_; }

  std::optional<std::string> meta_value( std::string const& key ) const
  {
    if ( auto it = meta_.find( key ); it != meta_.end() )
    {
      return it->second;
    }
    return std::nullopt;
  }

  port const* find_port( std::string_view name ) const
  {
    for ( auto const& p : ports_ )
    {
      if ( p.name == name )
      {
        return &p;
      }
    }
    return nullptr;
  }

  /*! \brief Number of gates per kind, indexed by `gate_kind`. */
  std::array<std::size_t, num_gate_kinds> gate_histogram() const
  {
    std::array<std::size_t, num_gate_kinds> counts{};
    for ( auto const& g : gates_ )
    {
      ++counts[static_cast<std::size_t>( g.kind )];
    }
    return counts;
  }

  friend bool operator==( circuit const&, circuit const& ) = default;

private:
  std::string name_;
  uint32_t width_{ 0 };
  std::string variant_;
  uint32_t num_nets_{ 0 };
  std::vector<gate> gates_;
  std::vector<register_cell> registers_;
  std::vector<port> ports_;
  meta_map meta_;
};

/* ---------------------------------------------------------------------- */
/* validation                                                             */
/* ---------------------------------------------------------------------- */

enum class violation_kind : uint8_t
{
  dangling_reference,
  arity_mismatch,
  multi_driver,
  undriven,
  dangling_port,
  combinational_cycle
};

struct violation
{
  violation_kind kind;
  std::string message;
};

struct validation_report
{
  std::vector<violation> violations;

  bool ok() const { return violations.empty(); }

  bool has( violation_kind kind ) const
  {
    return std::any_of( violations.begin(), violations.end(),
                        [kind]( auto const& v ) { return v.kind == kind; } );
  }
};

namespace detail
{

inline constexpr uint32_t no_gate = ~uint32_t{ 0 };

/* Kahn's algorithm over gates; ready gates are released in ascending
   insertion index. Returns the ordered prefix, which is short of the gate
   count exactly when the gate graph has a cycle. */
inline std::vector<uint32_t> topo_order( circuit const& c )
{
  auto const& gates = c.gates();
  std::vector<uint32_t> driver( c.num_nets(), no_gate );
  for ( uint32_t g = 0; g < gates.size(); ++g )
  {
    if ( gates[g].output.index < c.num_nets() && driver[gates[g].output.index] == no_gate )
    {
      driver[gates[g].output.index] = g;
    }
  }

  std::vector<uint32_t> pending( gates.size(), 0 );
  std::vector<std::vector<uint32_t>> fanout( gates.size() );
  for ( uint32_t g = 0; g < gates.size(); ++g )
  {
    for ( auto in : gates[g].inputs )
    {
      if ( in.index < c.num_nets() && driver[in.index] != no_gate )
      {
        fanout[driver[in.index]].push_back( g );
        ++pending[g];
      }
    }
  }

  std::priority_queue<uint32_t, std::vector<uint32_t>, std::greater<>> ready;
  for ( uint32_t g = 0; g < gates.size(); ++g )
  {
    if ( pending[g] == 0 )
    {
      ready.push( g );
    }
  }

  std::vector<uint32_t> order;
  order.reserve( gates.size() );
  while ( !ready.empty() )
  {
    auto g = ready.top();
    ready.pop();
    order.push_back( g );
    for ( auto succ : fanout[g] )
    {
      if ( --pending[succ] == 0 )
      {
        ready.push( succ );
      }
    }
  }
  return order;
}

} // namespace detail

/*! \brief Checks every structural invariant and lists all violations found. */
inline validation_report validate( circuit const& c )
{
  validation_report report;
  auto const n = c.num_nets();
  auto add = [&report]( violation_kind kind, std::string msg ) {
    report.violations.push_back( { kind, std::move( msg ) } );
  };
  auto in_range = [n]( net_id id ) { return id.index < n; };

  std::vector<uint32_t> drivers( n, 0 );
  auto drive = [&]( net_id id, std::string const& who ) {
    if ( !in_range( id ) )
    {
      add( violation_kind::dangling_reference, who + " references net " + std::to_string( id.index ) + " outside the net table" );
      return;
    }
    if ( ++drivers[id.index] == 2 )
    {
      add( violation_kind::multi_driver, "multi-driver on net " + std::to_string( id.index ) );
    }
  };

  for ( auto const& p : c.ports() )
  {
    if ( p.direction == port_direction::in )
    {
      for ( auto bit : p.bits )
      {
        drive( bit, "port " + p.name );
      }
    }
  }
  for ( std::size_t g = 0; g < c.gates().size(); ++g )
  {
    auto const& gt = c.gates()[g];
    auto who = "gate " + std::to_string( g ) + " (" + std::string( kind_name( gt.kind ) ) + ")";
    if ( gt.inputs.size() != arity( gt.kind ) )
    {
      add( violation_kind::arity_mismatch, "arity mismatch: " + who + " has " + std::to_string( gt.inputs.size() ) + " inputs" );
    }
    drive( gt.output, who );
  }
  for ( std::size_t r = 0; r < c.registers().size(); ++r )
  {
    drive( c.registers()[r].q, "register " + std::to_string( r ) );
  }

  auto use = [&]( net_id id, std::string const& who ) {
    if ( !in_range( id ) )
    {
      add( violation_kind::dangling_reference, who + " references net " + std::to_string( id.index ) + " outside the net table" );
    }
    else if ( drivers[id.index] == 0 )
    {
      add( violation_kind::undriven, who + " reads undriven net " + std::to_string( id.index ) );
    }
  };
  for ( std::size_t g = 0; g < c.gates().size(); ++g )
  {
    for ( auto in : c.gates()[g].inputs )
    {
      use( in, "gate " + std::to_string( g ) );
    }
  }
  for ( std::size_t r = 0; r < c.registers().size(); ++r )
  {
    use( c.registers()[r].d, "register " + std::to_string( r ) + " d" );
    use( c.registers()[r].enable, "register " + std::to_string( r ) + " enable" );
  }
  for ( auto const& p : c.ports() )
  {
    if ( p.direction != port_direction::out )
    {
      continue;
    }
    for ( std::size_t b = 0; b < p.bits.size(); ++b )
    {
      if ( !in_range( p.bits[b] ) )
      {
        add( violation_kind::dangling_reference, "port " + p.name + " references net " + std::to_string( p.bits[b].index ) + " outside the net table" );
      }
      else if ( drivers[p.bits[b].index] == 0 )
      {
        add( violation_kind::dangling_port, "dangling port " + p.name + "[" + std::to_string( b ) + "]" );
      }
    }
  }
  for ( uint32_t i = 0; i < n; ++i )
  {
    if ( drivers[i] == 0 )
    {
      add( violation_kind::undriven, "undriven net " + std::to_string( i ) );
    }
  }

  auto order = detail::topo_order( c );
  if ( order.size() != c.gates().size() )
  {
    std::vector<bool> placed( c.gates().size(), false );
    for ( auto g : order )
    {
      placed[g] = true;
    }
    std::string ids;
    for ( std::size_t g = 0; g < placed.size(); ++g )
    {
      if ( !placed[g] )
      {
        ids += ( ids.empty() ? "" : "," ) + std::to_string( g );
      }
    }
    add( violation_kind::combinational_cycle, "combinational cycle among gates " + ids );
  }
  return report;
}

/*! \brief Topological order of gate indices; register outputs and input ports are sources.

  Ties are broken by ascending gate insertion index, so the order is
  deterministic. Throws `construction_error` on a combinational cycle.
*/
inline std::vector<uint32_t> levelize( circuit const& c )
{
  auto order = detail::topo_order( c );
  if ( order.size() != c.gates().size() )
  {
    throw construction_error( "combinational cycle detected in " + c.name() );
  }
  return order;
}

/* ---------------------------------------------------------------------- */
/* builder                                                                */
/* ---------------------------------------------------------------------- */

class circuit_builder
{
public:
  explicit circuit_builder( std::string name = {}, uint32_t width = 0, std::string variant = {} )
      : name_( std::move( name ) ), width_( width ), variant_( std::move( variant ) )
  {
  }

  bus add_input( std::string const& name, uint32_t width )
  {
    bus bits;
    for ( uint32_t i = 0; i < width; ++i )
    {
      bits.push_back( fresh_net() );
    }
    ports_.push_back( { name, port_direction::in, bits } );
    return bits;
  }

  void add_output( std::string const& name, bus bits )
  {
    for ( auto bit : bits )
    {
      check_net( bit, "output port " + name );
    }
    ports_.push_back( { name, port_direction::out, std::move( bits ) } );
  }

  net_id add_gate( gate_kind kind, std::span<net_id const> inputs )
  {
    auto who = std::string( kind_name( kind ) ) + " gate " + std::to_string( gates_.size() );
    if ( inputs.size() != arity( kind ) )
    {
      throw construction_error( "arity mismatch: " + std::string( kind_name( kind ) ) + " expects " +
                                std::to_string( arity( kind ) ) + " (" + who + ")" );
    }
    for ( auto in : inputs )
    {
      check_net( in, who );
    }
    auto out = fresh_net();
    gates_.push_back( { kind, std::vector<net_id>( inputs.begin(), inputs.end() ), out } );
    return out;
  }

  net_id add_gate( gate_kind kind, std::initializer_list<net_id> inputs )
  {
    return add_gate( kind, std::span<net_id const>( inputs.begin(), inputs.size() ) );
  }

  net_id inv( net_id a ) { return add_gate( gate_kind::inv, { a } ); }
  net_id and2( net_id a, net_id b ) { return add_gate( gate_kind::and2, { a, b } ); }
  net_id or2( net_id a, net_id b ) { return add_gate( gate_kind::or2, { a, b } ); }
  net_id xor2( net_id a, net_id b ) { return add_gate( gate_kind::xor2, { a, b } ); }
  net_id mux2( net_id sel, net_id in0, net_id in1 ) { return add_gate( gate_kind::mux2, { sel, in0, in1 } ); }

  /*! \brief Shared constant net, created on first use. */
  net_id constant( bool value )
  {
    auto& slot = value ? const1_ : const0_;
    if ( !slot )
    {
      slot = add_gate( value ? gate_kind::const1 : gate_kind::const0, {} );
    }
    return *slot;
  }

  /*! \brief Appends a register and returns its q net. */
  net_id add_register( net_id d, net_id enable, bool reset_value = false )
  {
    auto who = "register " + std::to_string( registers_.size() );
    check_net( d, who );
    check_net( enable, who );
    auto q = fresh_net();
    registers_.push_back( { d, q, enable, reset_value } );
    return q;
  }

  bus add_register_bank( bus const& d, net_id enable, bool reset_value = false )
  {
    bus q;
    for ( auto bit : d )
    {
      q.push_back( add_register( bit, enable, reset_value ) );
    }
    return q;
  }

  void set_meta( std::string key, std::string value ) { meta_[std::move( key )] = std::move( value ); }

  uint32_t num_nets() const { return num_nets_; }
  std::size_t num_gates() const { return gates_.size(); }

  /*! \brief Finishes construction; throws `construction_error` if the result does not validate. */
  circuit build() &&
  {
    circuit c( std::move( name_ ), width_, std::move( variant_ ), num_nets_, std::move( gates_ ),
               std::move( registers_ ), std::move( ports_ ), std::move( meta_ ) );
    if ( auto report = validate( c ); !report.ok() )
    {
      throw construction_error( "generated circuit " + c.name() + " is invalid: " + report.violations.front().message );
    }
    return c;
  }

private:
  net_id fresh_net() { return net_id{ num_nets_++ }; }

  void check_net( net_id id, std::string const& who ) const
  {
    if ( id.index >= num_nets_ )
    {
      throw construction_error( "unknown input net " + std::to_string( id.index ) + " (" + who + ")" );
    }
  }

  std::string name_;
  uint32_t width_;
  std::string variant_;
  uint32_t num_nets_{ 0 };
  std::vector<gate> gates_;
  std::vector<register_cell> registers_;
  std::vector<port> ports_;
  circuit::meta_map meta_;
  std::optional<net_id> const0_;
  std::optional<net_id> const1_;
};

/*! \brief Renders a bus of nets as a comma-separated index list (used for probe annotations). */
inline std::string bus_to_string( bus const& bits )
{
  std::string out;
  for ( auto bit : bits )
  {
    out += ( out.empty() ? "" : "," ) + std::to_string( bit.index );
  }
  return out;
}

inline std::optional<bus> bus_from_string( std::string_view text )
{
  bus bits;
  while ( !text.empty() )
  {
    auto comma = text.find( ',' );
    auto token = text.substr( 0, comma );
    uint32_t value = 0;
    if ( token.empty() )
    {
      return std::nullopt;
    }
    for ( char ch : token )
    {
      if ( ch < '0' || ch > '9' )
      {
        return std::nullopt;
      }
      value = value * 10u + static_cast<uint32_t>( ch - '0' );
    }
    bits.push_back( net_id{ value } );
    if ( comma == std::string_view::npos )
    {
      break;
    }
    text.remove_prefix( comma + 1 );
  }
  return bits;
}

} // namespace tpmul
