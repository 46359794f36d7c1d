/*!
  \file vectors.hpp
  \brief Vector and trace text files

  One cycle per line as whitespace-separated `port=hexvalue` tokens.
  Lines starting with `#` are comments; blank lines are skipped. Traces
  use the same format with the output ports appended.
*/

#pragma once

#include "netlist_io.hpp"
#include "sim.hpp"
#include "wide.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace tpmul
{

inline std::vector<input_assignment> read_vectors( std::istream& in )
{
  std::vector<input_assignment> vectors;
  std::string line;
  std::size_t line_no = 0;
  while ( std::getline( in, line ) )
  {
    ++line_no;
    auto const first = line.find_first_not_of( " \t\r" );
    if ( first == std::string::npos || line[first] == '#' )
    {
      continue;
    }
    std::istringstream tokens( line );
    std::string token;
    input_assignment v;
    while ( tokens >> token )
    {
      auto const eq = token.find( '=' );
      if ( eq == std::string::npos || eq == 0 )
      {
        throw format_error( "line " + std::to_string( line_no ) + ": expected port=hexvalue, got \"" + token + "\"" );
      }
      auto value = parse_hex( std::string_view( token ).substr( eq + 1 ) );
      if ( !value )
      {
        throw format_error( "line " + std::to_string( line_no ) + ": bad hex value in \"" + token + "\"" );
      }
      v[token.substr( 0, eq )] = *value;
    }
    vectors.push_back( std::move( v ) );
  }
  return vectors;
}

inline std::string format_cycle( input_assignment const& inputs, output_values const& outputs = {} )
{
  std::string line;
  for ( auto const* values : { &inputs, &outputs } )
  {
    for ( auto const& [name, value] : *values )
    {
      line += ( line.empty() ? "" : " " ) + name + "=" + to_hex( value );
    }
  }
  return line;
}

inline void write_vectors( std::ostream& out, std::vector<input_assignment> const& vectors )
{
  for ( auto const& v : vectors )
  {
    out << format_cycle( v ) << "\n";
  }
}

inline void write_trace( std::ostream& out, std::vector<input_assignment> const& vectors, std::vector<output_values> const& trace )
{
  out << "# cycle trace: inputs then outputs, hex\n";
  for ( std::size_t i = 0; i < vectors.size() && i < trace.size(); ++i )
  {
    out << format_cycle( vectors[i], trace[i] ) << "\n";
  }
}

} // namespace tpmul
