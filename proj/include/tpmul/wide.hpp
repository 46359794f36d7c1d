/*!
  \file wide.hpp
  \brief 128-bit unsigned values for operands and products up to 64 x 64 bits
*/

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace tpmul
{

using wide_uint = unsigned __int128;

inline wide_uint wide_mask( uint32_t bits )
{
  if ( bits >= 128u )
  {
    return ~wide_uint{ 0 };
  }
  return ( wide_uint{ 1 } << bits ) - 1u;
}

/*! \brief Lower-case hex without prefix, "0" for zero. */
inline std::string to_hex( wide_uint value )
{
  if ( value == 0 )
  {
    return "0";
  }
  std::string out;
  while ( value != 0 )
  {
    out.insert( out.begin(), "0123456789abcdef"[static_cast<unsigned>( value & 0xfu )] );
    value >>= 4;
  }
  return out;
}

/*! \brief Parses hex digits, an optional `0x` prefix is accepted. */
inline std::optional<wide_uint> parse_hex( std::string_view text )
{
  if ( text.starts_with( "0x" ) || text.starts_with( "0X" ) )
  {
    text.remove_prefix( 2 );
  }
  if ( text.empty() || text.size() > 32u )
  {
    return std::nullopt;
  }
  wide_uint value = 0;
  for ( char ch : text )
  {
    unsigned digit;
    if ( ch >= '0' && ch <= '9' )
      digit = static_cast<unsigned>( ch - '0' );
    else if ( ch >= 'a' && ch <= 'f' )
      digit = static_cast<unsigned>( ch - 'a' + 10 );
    else if ( ch >= 'A' && ch <= 'F' )
      digit = static_cast<unsigned>( ch - 'A' + 10 );
    else
      return std::nullopt;
    value = ( value << 4 ) | digit;
  }
  return value;
}

} // namespace tpmul
