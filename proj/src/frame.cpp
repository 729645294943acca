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

#include "aric/frame.h"

#include <algorithm>
#include <fstream>

namespace aric
{

Plane::Plane( int width, int height, uint8_t fill )
  : m_width( width ), m_height( height ), m_samples( size_t( width ) * size_t( height ), fill )
{
  ARIC_CHECK( width >= 0 && height >= 0, ArgumentError, "negative plane size ", width, "x", height );
}

Plane::Plane( int width, int height, std::vector<uint8_t> samples )
  : m_width( width ), m_height( height ), m_samples( std::move( samples ) )
{
  ARIC_CHECK( m_samples.size() == size_t( width ) * size_t( height ), ArgumentError, "plane ", width, "x", height,
              " needs ", size_t( width ) * size_t( height ), " samples, got ", m_samples.size() );
}

Plane Plane::crop( int x, int y, int w, int h ) const
{
  ARIC_CHECK( x >= 0 && y >= 0 && w >= 0 && h >= 0 && x + w <= m_width && y + h <= m_height, ArgumentError,
              "crop ", w, "x", h, "+", x, "+", y, " outside plane ", m_width, "x", m_height );
  Plane out( w, h );
  for( int r = 0; r < h; r++ )
  {
    std::copy_n( m_samples.data() + size_t( y + r ) * m_width + x, w, out.row( r ).data() );
  }
  return out;
}

void Plane::paste( const Plane& src, int x, int y )
{
  ARIC_CHECK( x >= 0 && y >= 0 && x + src.width() <= m_width && y + src.height() <= m_height, ArgumentError,
              "paste ", src.width(), "x", src.height(), "+", x, "+", y, " outside plane ", m_width, "x", m_height );
  for( int r = 0; r < src.height(); r++ )
  {
    std::copy_n( src.row( r ).data(), src.width(), m_samples.data() + size_t( y + r ) * m_width + x );
  }
}

Plane padReplicate( const Plane& p, int left, int right, int top, int bottom )
{
  ARIC_CHECK( left >= 0 && right >= 0 && top >= 0 && bottom >= 0, ArgumentError, "negative padding margin" );
  ARIC_CHECK( !p.empty() || ( left == 0 && right == 0 && top == 0 && bottom == 0 ), ArgumentError,
              "cannot replicate borders of an empty plane" );
  const int w = p.width() + left + right;
  const int h = p.height() + top + bottom;
  Plane     out( w, h );
  for( int r = 0; r < h; r++ )
  {
    const int sr = std::clamp( r - top, 0, p.height() - 1 );
    for( int c = 0; c < w; c++ )
    {
      out.at( r, c ) = p.at( sr, std::clamp( c - left, 0, p.width() - 1 ) );
    }
  }
  return out;
}

uint64_t ssd( const Plane& a, const Plane& b )
{
  ARIC_CHECK( a.width() == b.width() && a.height() == b.height(), ArgumentError, "ssd of ", a.width(), "x",
              a.height(), " vs ", b.width(), "x", b.height() );
  uint64_t sum = 0;
  for( size_t i = 0; i < a.samples().size(); i++ )
  {
    const int d = int( a.samples()[i] ) - int( b.samples()[i] );
    sum += uint64_t( d * d );
  }
  return sum;
}

static int roundUp( int v, int m )
{
  return ( v + m - 1 ) / m * m;
}

Frame makeFrame( const Plane& y, const Plane& cb, const Plane& cr )
{
  const int w = y.width();
  const int h = y.height();
  ARIC_CHECK( w > 0 && h > 0, ArgumentError, "zero frame dimension ", w, "x", h );
  ARIC_CHECK( w % 2 == 0 && h % 2 == 0, ArgumentError, "4:2:0 frames need even dimensions, got ", w, "x", h );
  ARIC_CHECK( cb.width() == w / 2 && cb.height() == h / 2 && cr.width() == w / 2 && cr.height() == h / 2,
              ArgumentError, "chroma planes must be ", w / 2, "x", h / 2 );

  Frame f;
  f.origWidth  = w;
  f.origHeight = h;
  f.width      = roundUp( w, kCtuSize );
  f.height     = roundUp( h, kCtuSize );
  f.y          = padReplicate( y, 0, f.width - w, 0, f.height - h );
  f.cb         = padReplicate( cb, 0, ( f.width - w ) / 2, 0, ( f.height - h ) / 2 );
  f.cr         = padReplicate( cr, 0, ( f.width - w ) / 2, 0, ( f.height - h ) / 2 );
  return f;
}

Frame cropToOriginal( const Frame& f )
{
  Frame out;
  out.width = out.origWidth = f.origWidth;
  out.height = out.origHeight = f.origHeight;
  out.y                       = f.y.crop( 0, 0, f.origWidth, f.origHeight );
  out.cb                      = f.cb.crop( 0, 0, f.origWidth / 2, f.origHeight / 2 );
  out.cr                      = f.cr.crop( 0, 0, f.origWidth / 2, f.origHeight / 2 );
  return out;
}

CtuGrid CtuGrid::of( int width, int height )
{
  return { ( width + kCtuSize - 1 ) / kCtuSize, ( height + kCtuSize - 1 ) / kCtuSize };
}

CtuBlocks extractCtu( const Frame& f, int row, int col )
{
  const CtuGrid grid = CtuGrid::of( f );
  ARIC_CHECK( row >= 0 && col >= 0 && row < grid.rows && col < grid.cols, ArgumentError, "CTU (", row, ",", col,
              ") outside ", grid.rows, "x", grid.cols, " grid" );
  return { f.y.crop( col * kCtuSize, row * kCtuSize, kCtuSize, kCtuSize ),
           f.cb.crop( col * kChromaCtuSize, row * kChromaCtuSize, kChromaCtuSize, kChromaCtuSize ),
           f.cr.crop( col * kChromaCtuSize, row * kChromaCtuSize, kChromaCtuSize, kChromaCtuSize ) };
}

void writeCtu( Frame& f, int row, int col, const CtuBlocks& blocks )
{
  const CtuGrid grid = CtuGrid::of( f );
  ARIC_CHECK( row >= 0 && col >= 0 && row < grid.rows && col < grid.cols, ArgumentError, "CTU (", row, ",", col,
              ") outside ", grid.rows, "x", grid.cols, " grid" );
  f.y.paste( blocks.y, col * kCtuSize, row * kCtuSize );
  f.cb.paste( blocks.cb, col * kChromaCtuSize, row * kChromaCtuSize );
  f.cr.paste( blocks.cr, col * kChromaCtuSize, row * kChromaCtuSize );
}

Frame loadFrame( const std::filesystem::path& path, int width, int height )
{
  ARIC_CHECK( width > 0 && height > 0, ArgumentError, "zero frame dimension ", width, "x", height );
  ARIC_CHECK( width % 2 == 0 && height % 2 == 0, ArgumentError, "4:2:0 frames need even dimensions, got ", width,
              "x", height );
  const size_t lumaBytes   = size_t( width ) * height;
  const size_t chromaBytes = lumaBytes / 4;
  const size_t expected    = lumaBytes + 2 * chromaBytes;

  std::ifstream in( path, std::ios::binary );
  ARIC_CHECK( in.good(), IoError, "cannot open ", path.string() );
  std::vector<uint8_t> buf( expected );
  in.read( reinterpret_cast<char*>( buf.data() ), std::streamsize( expected ) );
  const size_t got = size_t( in.gcount() );
  ARIC_CHECK( got == expected, IoError, path.string(), ": expected ", expected, " bytes for ", width, "x", height,
              " I420, got ", got );

  Plane y( width, height, std::vector<uint8_t>( buf.begin(), buf.begin() + lumaBytes ) );
  Plane cb( width / 2, height / 2,
            std::vector<uint8_t>( buf.begin() + lumaBytes, buf.begin() + lumaBytes + chromaBytes ) );
  Plane cr( width / 2, height / 2, std::vector<uint8_t>( buf.begin() + lumaBytes + chromaBytes, buf.end() ) );
  return makeFrame( y, cb, cr );
}

void saveFrame( const std::filesystem::path& path, const Frame& f )
{
  const Frame   out = cropToOriginal( f );
  std::ofstream os( path, std::ios::binary );
  ARIC_CHECK( os.good(), IoError, "cannot create ", path.string() );
  for( const Plane* p: { &out.y, &out.cb, &out.cr } )
  {
    os.write( reinterpret_cast<const char*>( p->samples().data() ), std::streamsize( p->samples().size() ) );
  }
  ARIC_CHECK( os.good(), IoError, "write failed for ", path.string() );
}

std::pair<int, int> parseSize( const std::string& text )
{
  const auto x = text.find_first_of( "xX" );
  ARIC_CHECK( x != std::string::npos, ArgumentError, "size must look like WxH, got '", text, "'" );
  try
  {
    size_t    used = 0;
    const int w    = std::stoi( text.substr( 0, x ), &used );
    ARIC_CHECK( used == x, ArgumentError, "bad width in '", text, "'" );
    const std::string hs = text.substr( x + 1 );
    const int         h  = std::stoi( hs, &used );
    ARIC_CHECK( used == hs.size(), ArgumentError, "bad height in '", text, "'" );
    ARIC_CHECK( w > 0 && h > 0, ArgumentError, "size must be positive, got '", text, "'" );
    return { w, h };
  }
  catch( const std::logic_error& )
  {
    throw ArgumentError( str( "size must look like WxH, got '", text, "'" ) );
  }
}

}   // namespace aric
