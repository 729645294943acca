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

#include "aric/resampler.h"

#include <algorithm>
#include <span>
#include <vector>

namespace aric
{

namespace
{

// Each pass scales by 64; both passes together by 4096.
constexpr int kTwoPassShift  = 12;
constexpr int kTwoPassOffset = 1 << ( kTwoPassShift - 1 );

uint8_t roundTwoPass( int v )
{
  return clipPel( ( v + kTwoPassOffset ) >> kTwoPassShift );
}

std::span<const int> halfPelTaps( FilterKind kind )
{
  if( kind == FilterKind::Luma )
  {
    return kLumaHalfPel;
  }
  return kChromaHalfPel;
}

}   // namespace

BoundaryContext BoundaryContext::none( int width )
{
  BoundaryContext ctx;
  ctx.width = width;
  return ctx;
}

BoundaryContext BoundaryContext::fromTile( const Plane& tile, int width, const std::array<bool, 4>& available )
{
  const int w = tile.width() - 2 * width;
  const int h = tile.height() - 2 * width;
  ARIC_CHECK( width >= 0 && w > 0 && h > 0, ArgumentError, "tile ", tile.width(), "x", tile.height(),
              " too small for context ", width );

  BoundaryContext ctx;
  ctx.width     = width;
  ctx.available = available;
  if( available[kTop] )
  {
    ctx.strips[kTop] = tile.crop( width, 0, w, width );
  }
  if( available[kBottom] )
  {
    ctx.strips[kBottom] = tile.crop( width, width + h, w, width );
  }
  if( available[kLeft] )
  {
    ctx.strips[kLeft] = tile.crop( 0, width, width, h );
  }
  if( available[kRight] )
  {
    ctx.strips[kRight] = tile.crop( width + w, width, width, h );
  }
  if( available[kTop] && available[kLeft] )
  {
    ctx.corners[kTopLeft] = tile.crop( 0, 0, width, width );
  }
  if( available[kTop] && available[kRight] )
  {
    ctx.corners[kTopRight] = tile.crop( width + w, 0, width, width );
  }
  if( available[kBottom] && available[kLeft] )
  {
    ctx.corners[kBottomLeft] = tile.crop( 0, width + h, width, width );
  }
  if( available[kBottom] && available[kRight] )
  {
    ctx.corners[kBottomRight] = tile.crop( width + w, width + h, width, width );
  }
  return ctx;
}

void BoundaryContext::validate( int blockWidth, int blockHeight ) const
{
  ARIC_CHECK( width >= 0, ArgumentError, "negative context width" );
  const int  stripW[4] = { blockWidth, width, blockWidth, width };
  const int  stripH[4] = { width, blockHeight, width, blockHeight };
  const char* names[4] = { "top", "left", "bottom", "right" };
  for( int s = 0; s < 4; s++ )
  {
    if( available[s] )
    {
      ARIC_CHECK( strips[s].width() == stripW[s] && strips[s].height() == stripH[s], ArgumentError, names[s],
                  " context must be ", stripW[s], "x", stripH[s], ", got ", strips[s].width(), "x",
                  strips[s].height() );
    }
    else
    {
      ARIC_CHECK( strips[s].empty(), ArgumentError, names[s], " side is unavailable but carries samples" );
    }
  }
  const Side cornerSides[4][2] = { { kTop, kLeft }, { kTop, kRight }, { kBottom, kLeft }, { kBottom, kRight } };
  for( int c = 0; c < 4; c++ )
  {
    const bool present = available[cornerSides[c][0]] && available[cornerSides[c][1]];
    if( present )
    {
      ARIC_CHECK( corners[c].width() == width && corners[c].height() == width, ArgumentError, "corner ", c,
                  " context must be ", width, "x", width );
    }
    else
    {
      ARIC_CHECK( corners[c].empty(), ArgumentError, "corner ", c, " carries samples without both sides" );
    }
  }
}

Plane assembleTile( const Plane& block, const BoundaryContext& ctx )
{
  ctx.validate( block.width(), block.height() );
  const int C = ctx.width;
  const int w = block.width();
  const int h = block.height();
  Plane     tile( w + 2 * C, h + 2 * C, 0 );
  tile.paste( block, C, C );
  if( ctx.available[kTop] )
  {
    tile.paste( ctx.strips[kTop], C, 0 );
  }
  if( ctx.available[kBottom] )
  {
    tile.paste( ctx.strips[kBottom], C, C + h );
  }
  if( ctx.available[kLeft] )
  {
    tile.paste( ctx.strips[kLeft], 0, C );
  }
  if( ctx.available[kRight] )
  {
    tile.paste( ctx.strips[kRight], C + w, C );
  }
  const int cornerX[4] = { 0, C + w, 0, C + w };
  const int cornerY[4] = { 0, 0, C + h, C + h };
  for( int c = 0; c < 4; c++ )
  {
    if( !ctx.corners[c].empty() )
    {
      tile.paste( ctx.corners[c], cornerX[c], cornerY[c] );
    }
  }
  return tile;
}

Plane downsample2x( const Plane& p )
{
  ARIC_CHECK( p.width() % 2 == 0 && p.height() % 2 == 0 && !p.empty(), ArgumentError,
              "down-sampling needs even non-zero dimensions, got ", p.width(), "x", p.height() );
  const int w     = p.width();
  const int h     = p.height();
  const int ow    = w / 2;
  const int oh    = h / 2;
  const int taps  = int( kDownFilter.size() );
  const int half  = taps / 2;

  std::vector<int> horiz( size_t( h ) * ow );
  for( int r = 0; r < h; r++ )
  {
    const auto src = p.row( r );
    for( int j = 0; j < ow; j++ )
    {
      int sum = 0;
      for( int k = 0; k < taps; k++ )
      {
        sum += kDownFilter[k] * src[std::clamp( 2 * j - half + k, 0, w - 1 )];
      }
      horiz[size_t( r ) * ow + j] = sum;
    }
  }

  Plane out( ow, oh );
  for( int i = 0; i < oh; i++ )
  {
    for( int j = 0; j < ow; j++ )
    {
      int sum = 0;
      for( int k = 0; k < taps; k++ )
      {
        sum += kDownFilter[k] * horiz[size_t( std::clamp( 2 * i - half + k, 0, h - 1 ) ) * ow + j];
      }
      out.at( i, j ) = roundTwoPass( sum );
    }
  }
  return out;
}

Frame downsampleFrame( const Frame& f )
{
  Frame out;
  out.width      = f.width / 2;
  out.height     = f.height / 2;
  out.origWidth  = ( f.origWidth + 1 ) / 2;
  out.origHeight = ( f.origHeight + 1 ) / 2;
  out.y          = downsample2x( f.y );
  out.cb         = downsample2x( f.cb );
  out.cr         = downsample2x( f.cr );
  return out;
}

Plane upsampleDctifTile( const Plane& tile, FilterKind kind )
{
  const auto taps  = halfPelTaps( kind );
  const int  n     = int( taps.size() );
  const int  first = -( n / 2 - 1 );   // offset of tap 0 relative to the left integer sample
  const int  w     = tile.width();
  const int  h     = tile.height();
  const int  ow    = 2 * w;

  auto sample = [&]( int r, int c ) -> int { return ( c < 0 || c >= w ) ? 0 : tile.at( r, c ); };

  // horizontal pass on integer rows, scaled by 64
  std::vector<int> horiz( size_t( h ) * ow );
  for( int r = 0; r < h; r++ )
  {
    int* dst = horiz.data() + size_t( r ) * ow;
    for( int c = 0; c < w; c++ )
    {
      dst[2 * c] = 64 * tile.at( r, c );
      int sum    = 0;
      for( int k = 0; k < n; k++ )
      {
        sum += taps[k] * sample( r, c + first + k );
      }
      dst[2 * c + 1] = sum;
    }
  }

  auto inter = [&]( int r, int c ) -> int { return ( r < 0 || r >= h ) ? 0 : horiz[size_t( r ) * ow + c]; };

  Plane out( ow, 2 * h );
  for( int r = 0; r < h; r++ )
  {
    for( int c = 0; c < ow; c++ )
    {
      out.at( 2 * r, c ) = roundTwoPass( 64 * inter( r, c ) );
      int sum            = 0;
      for( int k = 0; k < n; k++ )
      {
        sum += taps[k] * inter( r + first + k, c );
      }
      out.at( 2 * r + 1, c ) = roundTwoPass( sum );
    }
  }
  return out;
}

Plane upsampleDctif( const Plane& p, const BoundaryContext& ctx, FilterKind kind )
{
  ARIC_CHECK( ctx.width >= filterReach( kind ), ArgumentError, "context width ", ctx.width,
              " is below the filter reach ", filterReach( kind ) );
  const Plane tile = assembleTile( p, ctx );
  const Plane up   = upsampleDctifTile( tile, kind );
  return up.crop( 2 * ctx.width, 2 * ctx.width, 2 * p.width(), 2 * p.height() );
}

}   // namespace aric
