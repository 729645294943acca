/* The copyright in this software is being made available under the BSD
 * License, included below. This software may be subject to other third party
 * and contributor rights, including patent rights, and no such rights are
 * granted under this license.
 *
 * Copyright (c) 2026, The ARIC Authors
 * All rights reserved.
 *
 * Redistribution and use in source and binary forms, with or without
 * modification, are permitted provided that the following conditions are met:
 *
 *  * Redistributions of source code must retain the above copyright notice,
 *    this list of conditions and the following disclaimer.
 *  * Redistributions in binary form must reproduce the above copyright notice,
 *    this list of conditions and the following disclaimer in the documentation
 *    and/or other materials provided with the distribution.
 *  * Neither the name of the ARIC Authors nor the names of its contributors may
 *    be used to endorse or promote products derived from this software without
 *    specific prior written permission.
 *
 * THIS SOFTWARE IS PROVIDED BY THE COPYRIGHT HOLDERS AND CONTRIBUTORS "AS IS"
 * AND ANY EXPRESS OR IMPLIED WARRANTIES, INCLUDING, BUT NOT LIMITED TO, THE
 * IMPLIED WARRANTIES OF MERCHANTABILITY AND FITNESS FOR A PARTICULAR PURPOSE
 * ARE DISCLAIMED. IN NO EVENT SHALL THE COPYRIGHT HOLDER OR CONTRIBUTORS
 * BE LIABLE FOR ANY DIRECT, INDIRECT, INCIDENTAL, SPECIAL, EXEMPLARY, OR
 * CONSEQUENTIAL DAMAGES (INCLUDING, BUT NOT LIMITED TO, PROCUREMENT OF
 * SUBSTITUTE GOODS OR SERVICES; LOSS OF USE, DATA, OR PROFITS; OR BUSINESS
 * INTERRUPTION) HOWEVER CAUSED AND ON ANY THEORY OF LIABILITY, WHETHER IN
 * CONTRACT, STRICT LIABILITY, OR TORT (INCLUDING NEGLIGENCE OR OTHERWISE)
 * ARISING IN ANY WAY OUT OF THE USE OF THIS SOFTWARE, EVEN IF ADVISED OF
 * THE POSSIBILITY OF SUCH DAMAGE.
 */

#include "aric/image_io.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>

namespace aric
{

Ycc rgbToYcc( uint8_t r, uint8_t g, uint8_t b )
{
  const double y  = 0.299 * r + 0.587 * g + 0.114 * b;
  const double cb = 128.0 - 0.168736 * r - 0.331264 * g + 0.5 * b;
  const double cr = 128.0 + 0.5 * r - 0.418688 * g - 0.081312 * b;
  return { clipPel( int( std::lround( y ) ) ), clipPel( int( std::lround( cb ) ) ),
           clipPel( int( std::lround( cr ) ) ) };
}

namespace
{

class PnmParser
{
public:
  PnmParser( std::vector<uint8_t> bytes, std::string origin ) : m_bytes( std::move( bytes ) ), m_origin( std::move( origin ) ) {}

  int number()
  {
    skipSpaceAndComments();
    ARIC_CHECK( m_pos < m_bytes.size() && std::isdigit( m_bytes[m_pos] ), FormatError, m_origin,
                ": malformed header at byte ", m_pos );
    long v = 0;
    while( m_pos < m_bytes.size() && std::isdigit( m_bytes[m_pos] ) )
    {
      v = v * 10 + ( m_bytes[m_pos++] - '0' );
      ARIC_CHECK( v < 1 << 20, FormatError, m_origin, ": header value too large" );
    }
    return int( v );
  }

  std::string magic()
  {
    ARIC_CHECK( m_bytes.size() >= 2, FormatError, m_origin, ": file too short" );
    m_pos = 2;
    return std::string( m_bytes.begin(), m_bytes.begin() + 2 );
  }

  std::span<const uint8_t> raster( size_t count )
  {
    ARIC_CHECK( m_pos < m_bytes.size() && std::isspace( m_bytes[m_pos] ), FormatError, m_origin,
                ": missing separator before raster" );
    m_pos++;
    ARIC_CHECK( m_bytes.size() - m_pos >= count, FormatError, m_origin, ": raster needs ", count, " bytes, got ",
                m_bytes.size() - m_pos );
    return { m_bytes.data() + m_pos, count };
  }

private:
  void skipSpaceAndComments()
  {
    while( m_pos < m_bytes.size() )
    {
      if( std::isspace( m_bytes[m_pos] ) )
      {
        m_pos++;
      }
      else if( m_bytes[m_pos] == '#' )
      {
        while( m_pos < m_bytes.size() && m_bytes[m_pos] != '\n' )
        {
          m_pos++;
        }
      }
      else
      {
        break;
      }
    }
  }

  std::vector<uint8_t> m_bytes;
  std::string          m_origin;
  size_t               m_pos = 0;
};

}   // namespace

bool isImageFile( const std::filesystem::path& path )
{
  std::string ext = path.extension().string();
  std::transform( ext.begin(), ext.end(), ext.begin(), []( unsigned char c ) { return char( std::tolower( c ) ); } );
  return ext == ".ppm" || ext == ".pgm" || ext == ".pnm";
}

Frame loadImage( const std::filesystem::path& path )
{
  std::ifstream in( path, std::ios::binary );
  ARIC_CHECK( in, IoError, "cannot open image '", path.string(), "'" );
  std::vector<uint8_t> bytes( ( std::istreambuf_iterator<char>( in ) ), std::istreambuf_iterator<char>() );

  PnmParser         parser( std::move( bytes ), path.string() );
  const std::string magic = parser.magic();
  ARIC_CHECK( magic == "P5" || magic == "P6", FormatError, path.string(), ": unsupported image type '", magic,
              "' (binary PGM/PPM only)" );
  const int w      = parser.number();
  const int h      = parser.number();
  const int maxval = parser.number();
  ARIC_CHECK( maxval == 255, FormatError, path.string(), ": maxval ", maxval, " unsupported (8-bit only)" );
  ARIC_CHECK( w >= 2 && h >= 2, FormatError, path.string(), ": image ", w, "x", h, " too small" );
  const int  channels = magic == "P6" ? 3 : 1;
  const auto raster   = parser.raster( size_t( w ) * size_t( h ) * size_t( channels ) );

  const int ew = w & ~1, eh = h & ~1;
  Plane     y( ew, eh ), cbFull( ew, eh ), crFull( ew, eh );
  for( int r = 0; r < eh; r++ )
  {
    for( int c = 0; c < ew; c++ )
    {
      const uint8_t* px = raster.data() + ( size_t( r ) * w + c ) * channels;
      const Ycc      v  = channels == 3 ? rgbToYcc( px[0], px[1], px[2] ) : Ycc{ px[0], 128, 128 };
      y.at( r, c )      = v.y;
      cbFull.at( r, c ) = v.cb;
      crFull.at( r, c ) = v.cr;
    }
  }
  Plane cb( ew / 2, eh / 2 ), cr( ew / 2, eh / 2 );
  for( int r = 0; r < eh / 2; r++ )
  {
    for( int c = 0; c < ew / 2; c++ )
    {
      const auto avg = [&]( const Plane& p )
      {
        return uint8_t( ( p.at( 2 * r, 2 * c ) + p.at( 2 * r, 2 * c + 1 ) + p.at( 2 * r + 1, 2 * c ) +
                          p.at( 2 * r + 1, 2 * c + 1 ) + 2 ) >> 2 );
      };
      cb.at( r, c ) = avg( cbFull );
      cr.at( r, c ) = avg( crFull );
    }
  }
  return makeFrame( y, cb, cr );
}

Frame loadInputFrame( const std::filesystem::path& path, const std::string& size )
{
  if( size.empty() )
  {
    ARIC_CHECK( isImageFile( path ), ArgumentError, "'", path.string(),
                "' is not a PPM/PGM image; raw YUV input needs --size WxH" );
    return loadImage( path );
  }
  const auto [w, h] = parseSize( size );
  return loadFrame( path, w, h );
}

}   // namespace aric
