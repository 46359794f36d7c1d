/*!
  \file verilog.hpp
  \brief Flat structural Verilog export and a reader for the exported subset

  Net k is named `n<k>`, gate i is instance `g<i>` and register i is
  instance `r<i>`, so a read-back circuit is structurally identical to the
  exported one. AND/OR/XOR/NAND/NOR/INV/BUF map to Verilog primitives;
  constants, MUX2 and the enable flip-flop are small cell modules appended
  after the design module. Circuit annotations travel as `// @meta` lines.
*/

#pragma once

#include "netlist.hpp"
#include "netlist_io.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

namespace tpmul
{

namespace detail
{

inline std::string verilog_identifier( std::string const& name )
{
  std::string out;
  for ( char ch : name )
  {
    out += ( std::isalnum( static_cast<unsigned char>( ch ) ) || ch == '_' ) ? ch : '_';
  }
  if ( out.empty() || std::isdigit( static_cast<unsigned char>( out[0] ) ) )
  {
    out = "m_" + out;
  }
  return out;
}

inline char const* primitive_name( gate_kind kind )
{
  switch ( kind )
  {
  case gate_kind::const0: return "tpmul_const0";
  case gate_kind::const1: return "tpmul_const1";
  case gate_kind::buf: return "buf";
  case gate_kind::inv: return "not";
  case gate_kind::and2: return "and";
  case gate_kind::or2: return "or";
  case gate_kind::xor2: return "xor";
  case gate_kind::nand2: return "nand";
  case gate_kind::nor2: return "nor";
  case gate_kind::mux2: return "tpmul_mux2";
  }
  return "?";
}

inline std::optional<gate_kind> kind_from_primitive( std::string const& name )
{
  for ( auto kind : all_gate_kinds )
  {
    if ( name == primitive_name( kind ) )
    {
      return kind;
    }
  }
  return std::nullopt;
}

} // namespace detail

inline std::string export_verilog( circuit const& c )
{
  std::ostringstream os;
  bool const clocked = !c.registers().empty();
  os << "// flat structural netlist\n";
  os << "// @meta name " << c.name() << "\n";
  os << "// @meta width " << c.width() << "\n";
  os << "// @meta variant " << c.variant() << "\n";
  for ( auto const& [key, value] : c.meta() )
  {
    os << "// @meta " << key << " " << value << "\n";
  }
  os << "module " << detail::verilog_identifier( c.name() ) << " (";
  bool first = true;
  if ( clocked )
  {
    os << "clk";
    first = false;
  }
  for ( auto const& p : c.ports() )
  {
    os << ( first ? "" : ", " ) << p.name;
    first = false;
  }
  os << ");\n";
  if ( clocked )
  {
    os << "  input clk;\n";
  }
  for ( auto const& p : c.ports() )
  {
    os << "  " << ( p.direction == port_direction::in ? "input" : "output" ) << " [" << ( p.bits.empty() ? 0 : p.bits.size() - 1 )
       << ":0] " << p.name << ";\n";
  }
  for ( uint32_t i = 0; i < c.num_nets(); ++i )
  {
    os << "  wire n" << i << ";\n";
  }
  for ( auto const& p : c.ports() )
  {
    if ( p.direction == port_direction::in )
    {
      for ( std::size_t b = 0; b < p.bits.size(); ++b )
      {
        os << "  assign n" << p.bits[b].index << " = " << p.name << "[" << b << "];\n";
      }
    }
  }
  for ( std::size_t g = 0; g < c.gates().size(); ++g )
  {
    auto const& gt = c.gates()[g];
    os << "  " << detail::primitive_name( gt.kind ) << " g" << g << " (n" << gt.output.index;
    for ( auto in : gt.inputs )
    {
      os << ", n" << in.index;
    }
    os << ");\n";
  }
  for ( std::size_t r = 0; r < c.registers().size(); ++r )
  {
    auto const& reg = c.registers()[r];
    os << "  tpmul_dffe #(.INIT(1'b" << ( reg.reset_value ? 1 : 0 ) << ")) r" << r << " (.clk(clk), .en(n" << reg.enable.index
       << "), .d(n" << reg.d.index << "), .q(n" << reg.q.index << "));\n";
  }
  for ( auto const& p : c.ports() )
  {
    if ( p.direction == port_direction::out )
    {
      for ( std::size_t b = 0; b < p.bits.size(); ++b )
      {
        os << "  assign " << p.name << "[" << b << "] = n" << p.bits[b].index << ";\n";
      }
    }
  }
  os << "endmodule\n\n";
  os << "module tpmul_const0 (output y);\n  assign y = 1'b0;\nendmodule\n\n";
  os << "module tpmul_const1 (output y);\n  assign y = 1'b1;\nendmodule\n\n";
  os << "module tpmul_mux2 (output y, input s, input a, input b);\n  assign y = s ? b : a;\nendmodule\n";
  if ( !c.registers().empty() )
  {
    os << "\nmodule tpmul_dffe #(parameter INIT = 1'b0) (input clk, input en, input d, output reg q);\n"
          "  initial q = INIT;\n"
          "  always @(posedge clk) if (en) q <= d;\n"
          "endmodule\n";
  }
  return os.str();
}

/*! \brief Reads back text produced by `export_verilog`. */
inline circuit parse_verilog( std::string const& text )
{
  static std::regex const re_meta( R"(^//\s*@meta\s+(\S+)\s?(.*)$)" );
  static std::regex const re_module( R"(^module\s+(\w+)\s*\(.*\);$)" );
  static std::regex const re_port( R"(^(input|output)\s+\[(\d+):0\]\s+(\w+);$)" );
  static std::regex const re_clk( R"(^input\s+clk;$)" );
  static std::regex const re_wire( R"(^wire\s+n(\d+);$)" );
  static std::regex const re_in_assign( R"(^assign\s+n(\d+)\s*=\s*(\w+)\[(\d+)\];$)" );
  static std::regex const re_out_assign( R"(^assign\s+(\w+)\[(\d+)\]\s*=\s*n(\d+);$)" );
  static std::regex const re_gate( R"(^(\w+)\s+g(\d+)\s*\(([^)]*)\);$)" );
  static std::regex const re_reg( R"(^tpmul_dffe\s+#\(\.INIT\(1'b([01])\)\)\s+r(\d+)\s*\(\.clk\(clk\),\s*\.en\(n(\d+)\),\s*\.d\(n(\d+)\),\s*\.q\(n(\d+)\)\);$)" );

  std::string name, variant;
  uint32_t width = 0;
  circuit::meta_map meta;
  std::vector<port> ports;
  std::map<std::string, std::size_t> port_index;
  uint32_t num_nets = 0;
  std::map<std::size_t, gate> gates;
  std::map<std::size_t, register_cell> registers;
  bool in_module = false;

  std::istringstream in( text );
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&]( std::string const& what ) -> format_error {
    return format_error( "line " + std::to_string( line_no ) + ": " + what );
  };
  auto to_u32 = []( std::string const& s ) { return static_cast<uint32_t>( std::stoul( s ) ); };
  auto port_bit = [&]( std::string const& pname, uint32_t bit ) -> net_id& {
    auto it = port_index.find( pname );
    if ( it == port_index.end() || bit >= ports[it->second].bits.size() )
    {
      throw fail( "unknown port bit " + pname + "[" + std::to_string( bit ) + "]" );
    }
    return ports[it->second].bits[bit];
  };

  while ( std::getline( in, line ) )
  {
    ++line_no;
    auto const first = line.find_first_not_of( " \t" );
    if ( first == std::string::npos )
    {
      continue;
    }
    line = line.substr( first );
    while ( !line.empty() && ( line.back() == ' ' || line.back() == '\r' ) )
    {
      line.pop_back();
    }
    std::smatch m;
    if ( !in_module )
    {
      if ( std::regex_match( line, m, re_meta ) )
      {
        auto const key = m[1].str();
        auto const value = m[2].str();
        if ( key == "name" )
          name = value;
        else if ( key == "variant" )
          variant = value;
        else if ( key == "width" )
          width = to_u32( value );
        else
          meta[key] = value;
      }
      else if ( std::regex_match( line, m, re_module ) )
      {
        in_module = true;
      }
      else if ( line.rfind( "//", 0 ) != 0 )
      {
        throw fail( "expected module header" );
      }
      continue;
    }

    if ( line == "endmodule" )
    {
      break;
    }
    if ( std::regex_match( line, re_clk ) )
    {
      continue;
    }
    if ( std::regex_match( line, m, re_port ) )
    {
      port p;
      p.name = m[3].str();
      p.direction = m[1].str() == "input" ? port_direction::in : port_direction::out;
      p.bits.assign( to_u32( m[2].str() ) + 1u, net_id{ ~uint32_t{ 0 } } );
      port_index[p.name] = ports.size();
      ports.push_back( std::move( p ) );
    }
    else if ( std::regex_match( line, m, re_wire ) )
    {
      num_nets = std::max( num_nets, to_u32( m[1].str() ) + 1u );
    }
    else if ( std::regex_match( line, m, re_in_assign ) )
    {
      port_bit( m[2].str(), to_u32( m[3].str() ) ) = net_id{ to_u32( m[1].str() ) };
    }
    else if ( std::regex_match( line, m, re_out_assign ) )
    {
      port_bit( m[1].str(), to_u32( m[2].str() ) ) = net_id{ to_u32( m[3].str() ) };
    }
    else if ( std::regex_match( line, m, re_reg ) )
    {
      register_cell r{ net_id{ to_u32( m[4].str() ) }, net_id{ to_u32( m[5].str() ) }, net_id{ to_u32( m[3].str() ) }, m[1].str() == "1" };
      registers[to_u32( m[2].str() )] = r;
    }
    else if ( std::regex_match( line, m, re_gate ) )
    {
      auto kind = detail::kind_from_primitive( m[1].str() );
      if ( !kind )
      {
        throw fail( "unknown cell " + m[1].str() );
      }
      static std::regex const re_net( R"(n(\d+))" );
      auto const args = m[3].str();
      std::vector<net_id> nets;
      for ( auto it = std::sregex_iterator( args.begin(), args.end(), re_net ); it != std::sregex_iterator(); ++it )
      {
        nets.push_back( net_id{ to_u32( ( *it )[1].str() ) } );
      }
      if ( nets.size() != arity( *kind ) + 1u )
      {
        throw fail( "arity mismatch for " + m[1].str() );
      }
      gate g{ *kind, std::vector<net_id>( nets.begin() + 1, nets.end() ), nets.front() };
      gates[to_u32( m[2].str() )] = std::move( g );
    }
    else
    {
      throw fail( "unrecognized statement: " + line );
    }
  }
  if ( !in_module )
  {
    throw format_error( "no module found" );
  }

  auto check = [&]( net_id n, std::string const& where ) {
    if ( n.index >= num_nets )
    {
      throw format_error( where + ": dangling reference to net " + std::to_string( n.index ) );
    }
  };
  std::vector<gate> gate_list;
  for ( auto& [index, g] : gates )
  {
    if ( index != gate_list.size() )
    {
      throw format_error( "gate instances are not numbered contiguously (missing g" + std::to_string( gate_list.size() ) + ")" );
    }
    for ( auto in : g.inputs )
      check( in, "g" + std::to_string( index ) );
    check( g.output, "g" + std::to_string( index ) );
    gate_list.push_back( std::move( g ) );
  }
  std::vector<register_cell> reg_list;
  for ( auto& [index, r] : registers )
  {
    if ( index != reg_list.size() )
    {
      throw format_error( "register instances are not numbered contiguously" );
    }
    check( r.d, "r" + std::to_string( index ) );
    check( r.q, "r" + std::to_string( index ) );
    check( r.enable, "r" + std::to_string( index ) );
    reg_list.push_back( r );
  }
  for ( auto const& p : ports )
  {
    for ( std::size_t b = 0; b < p.bits.size(); ++b )
    {
      check( p.bits[b], "port " + p.name + "[" + std::to_string( b ) + "]" );
    }
  }
  return circuit( name, width, variant, num_nets, std::move( gate_list ), std::move( reg_list ), std::move( ports ), std::move( meta ) );
}

} // namespace tpmul
