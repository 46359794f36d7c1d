/*!
  \file netlist_io.hpp
  \brief Canonical JSON netlist documents

  Layout (keys in this order, arrays in insertion order, one gate per line):

  \verbatim
  {
    "name": "recursive-rca_8",
    "width": 8,
    "variant": "recursive-rca",
    "meta": { "policy": "dadda", ... },
    "nets": 612,
    "gates": [
      {"kind":"AND2","inputs":[0,8],"output":32},
      ...
    ],
    "registers": [
      {"d":0,"q":40,"enable":35,"reset":0}
    ],
    "ports": [
      {"name":"x","dir":"in","bits":[0,1,2,3,4,5,6,7]}
    ]
  }
  \endverbatim
*/

#pragma once

#include "netlist.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>

namespace tpmul
{

class format_error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

inline std::string serialize( circuit const& c )
{
  using ojson = nlohmann::ordered_json;
  std::ostringstream os;
  os << "{\n";
  os << "  \"name\": " << ojson( c.name() ).dump() << ",\n";
  os << "  \"width\": " << c.width() << ",\n";
  os << "  \"variant\": " << ojson( c.variant() ).dump() << ",\n";
  ojson meta = ojson::object();
  for ( auto const& [key, value] : c.meta() )
  {
    meta[key] = value;
  }
  os << "  \"meta\": " << meta.dump() << ",\n";
  os << "  \"nets\": " << c.num_nets() << ",\n";

  auto write_array = [&os]( char const* key, auto const& items, auto&& to_json, bool last ) {
    os << "  \"" << key << "\": [";
    for ( std::size_t i = 0; i < items.size(); ++i )
    {
      os << ( i == 0 ? "\n    " : ",\n    " ) << to_json( items[i] ).dump();
    }
    os << ( items.empty() ? "]" : "\n  ]" ) << ( last ? "\n" : ",\n" );
  };
  auto indices = []( bus const& bits ) {
    ojson arr = ojson::array();
    for ( auto bit : bits )
    {
      arr.push_back( bit.index );
    }
    return arr;
  };

  write_array( "gates", c.gates(), [&]( gate const& g ) {
    ojson j;
    j["kind"] = kind_name( g.kind );
    j["inputs"] = indices( g.inputs );
    j["output"] = g.output.index;
    return j;
  }, false );
  write_array( "registers", c.registers(), []( register_cell const& r ) {
    ojson j;
    j["d"] = r.d.index;
    j["q"] = r.q.index;
    j["enable"] = r.enable.index;
    j["reset"] = r.reset_value ? 1 : 0;
    return j;
  }, false );
  write_array( "ports", c.ports(), [&]( port const& p ) {
    ojson j;
    j["name"] = p.name;
    j["dir"] = p.direction == port_direction::in ? "in" : "out";
    j["bits"] = indices( p.bits );
    return j;
  }, true );
  os << "}\n";
  return os.str();
}

/*! \brief Parses a netlist document; errors carry the JSON location of the fault. */
inline circuit deserialize( std::string const& text )
{
  using json = nlohmann::json;
  json doc;
  try
  {
    doc = json::parse( text );
  }
  catch ( json::parse_error const& e )
  {
    throw format_error( std::string( "malformed document: " ) + e.what() );
  }

  auto require = [&]( json const& obj, char const* key, std::string const& where ) -> json const& {
    if ( !obj.is_object() || !obj.contains( key ) )
    {
      throw format_error( where + ": missing key \"" + key + "\"" );
    }
    return obj.at( key );
  };
  auto as_uint = [&]( json const& value, std::string const& where ) -> uint32_t {
    if ( !value.is_number_unsigned() )
    {
      throw format_error( where + ": expected a non-negative integer" );
    }
    return value.get<uint32_t>();
  };
  auto as_string = [&]( json const& value, std::string const& where ) -> std::string {
    if ( !value.is_string() )
    {
      throw format_error( where + ": expected a string" );
    }
    return value.get<std::string>();
  };
  auto as_array = [&]( json const& value, std::string const& where ) -> json const& {
    if ( !value.is_array() )
    {
      throw format_error( where + ": expected an array" );
    }
    return value;
  };

  auto name = as_string( require( doc, "name", "/" ), "/name" );
  auto width = as_uint( require( doc, "width", "/" ), "/width" );
  auto variant = as_string( require( doc, "variant", "/" ), "/variant" );
  auto num_nets = as_uint( require( doc, "nets", "/" ), "/nets" );

  auto net = [&]( json const& value, std::string const& where ) {
    auto index = as_uint( value, where );
    if ( index >= num_nets )
    {
      throw format_error( where + ": dangling reference to net " + std::to_string( index ) );
    }
    return net_id{ index };
  };

  circuit::meta_map meta;
  if ( doc.contains( "meta" ) )
  {
    auto const& m = doc.at( "meta" );
    if ( !m.is_object() )
    {
      throw format_error( "/meta: expected an object" );
    }
    for ( auto const& [key, value] : m.items() )
    {
      meta[key] = as_string( value, "/meta/" + key );
    }
  }

  std::vector<gate> gates;
  auto const& gates_json = as_array( require( doc, "gates", "/" ), "/gates" );
  for ( std::size_t i = 0; i < gates_json.size(); ++i )
  {
    auto where = "/gates/" + std::to_string( i );
    auto const& item = gates_json[i];
    auto kind_text = as_string( require( item, "kind", where ), where + "/kind" );
    auto kind = kind_from_name( kind_text );
    if ( !kind )
    {
      throw format_error( where + "/kind: unknown gate kind \"" + kind_text + "\"" );
    }
    gate g;
    g.kind = *kind;
    auto const& ins = as_array( require( item, "inputs", where ), where + "/inputs" );
    for ( std::size_t k = 0; k < ins.size(); ++k )
    {
      g.inputs.push_back( net( ins[k], where + "/inputs/" + std::to_string( k ) ) );
    }
    if ( g.inputs.size() != arity( g.kind ) )
    {
      throw format_error( where + ": arity mismatch: " + kind_text + " expects " + std::to_string( arity( g.kind ) ) );
    }
    g.output = net( require( item, "output", where ), where + "/output" );
    gates.push_back( std::move( g ) );
  }

  std::vector<register_cell> registers;
  auto const& regs_json = as_array( require( doc, "registers", "/" ), "/registers" );
  for ( std::size_t i = 0; i < regs_json.size(); ++i )
  {
    auto where = "/registers/" + std::to_string( i );
    auto const& item = regs_json[i];
    register_cell r;
    r.d = net( require( item, "d", where ), where + "/d" );
    r.q = net( require( item, "q", where ), where + "/q" );
    r.enable = net( require( item, "enable", where ), where + "/enable" );
    auto reset = as_uint( require( item, "reset", where ), where + "/reset" );
    if ( reset > 1u )
    {
      throw format_error( where + "/reset: expected 0 or 1" );
    }
    r.reset_value = reset == 1u;
    registers.push_back( r );
  }

  std::vector<port> ports;
  auto const& ports_json = as_array( require( doc, "ports", "/" ), "/ports" );
  for ( std::size_t i = 0; i < ports_json.size(); ++i )
  {
    auto where = "/ports/" + std::to_string( i );
    auto const& item = ports_json[i];
    port p;
    p.name = as_string( require( item, "name", where ), where + "/name" );
    auto dir = as_string( require( item, "dir", where ), where + "/dir" );
    if ( dir != "in" && dir != "out" )
    {
      throw format_error( where + "/dir: expected \"in\" or \"out\"" );
    }
    p.direction = dir == "in" ? port_direction::in : port_direction::out;
    auto const& bits = as_array( require( item, "bits", where ), where + "/bits" );
    for ( std::size_t k = 0; k < bits.size(); ++k )
    {
      p.bits.push_back( net( bits[k], where + "/bits/" + std::to_string( k ) ) );
    }
    ports.push_back( std::move( p ) );
  }

  return circuit( std::move( name ), width, std::move( variant ), num_nets, std::move( gates ),
                  std::move( registers ), std::move( ports ), std::move( meta ) );
}

inline void write_netlist( circuit const& c, std::string const& path )
{
  std::ofstream out( path, std::ios::binary );
  if ( !out )
  {
    throw std::runtime_error( "cannot open " + path + " for writing" );
  }
  out << serialize( c );
}

inline circuit read_netlist( std::string const& path )
{
  std::ifstream in( path, std::ios::binary );
  if ( !in )
  {
    throw std::runtime_error( "cannot open " + path );
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return deserialize( buffer.str() );
}

} // namespace tpmul
