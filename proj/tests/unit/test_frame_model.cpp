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
#include "fixtures.h"
#include "oracles.h"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

using namespace aric;

namespace
{

Plane randomPlane( int w, int h, std::mt19937_64& rng )
{
  Plane                              p( w, h );
  std::uniform_int_distribution<int> u( 0, 255 );
  for( int r = 0; r < h; r++ )
  {
    for( int c = 0; c < w; c++ )
    {
      p.at( r, c ) = uint8_t( u( rng ) );
    }
  }
  return p;
}

/// Non-separable 2-D evaluation of the down filter with one final rounding.
Plane directDownsample( const Plane& p )
{
  Plane out( p.width() / 2, p.height() / 2 );
  for( int i = 0; i < out.height(); i++ )
  {
    for( int j = 0; j < out.width(); j++ )
    {
      long long s = 0;
      for( int a = 0; a < 13; a++ )
      {
        for( int b = 0; b < 13; b++ )
        {
          const int r = std::clamp( 2 * i - 6 + a, 0, p.height() - 1 );
          const int c = std::clamp( 2 * j - 6 + b, 0, p.width() - 1 );
          s += (long long) kDownFilter[size_t( a )] * kDownFilter[size_t( b )] * p.at( r, c );
        }
      }
      out.at( i, j ) = clipPel( int( std::floor( ( double( s ) + 2048.0 ) / 4096.0 ) ) );
    }
  }
  return out;
}

/// Direct evaluation of the half-pel interpolation on a tile with zero outside.
Plane directUpsample( const Plane& t, FilterKind kind )
{
  std::vector<int> taps = kind == FilterKind::Luma ? std::vector<int>( kLumaHalfPel.begin(), kLumaHalfPel.end() )
                                                   : std::vector<int>( kChromaHalfPel.begin(), kChromaHalfPel.end() );
  const int first = kind == FilterKind::Luma ? -3 : -1;
  // weight of integer sample k for output phase (0 = copy, 1 = half)
  auto weight = [&]( int phase, int k ) -> int
  {
    if( phase == 0 )
    {
      return k == 0 ? 64 : 0;
    }
    const int idx = k - first;
    return idx >= 0 && idx < int( taps.size() ) ? taps[size_t( idx )] : 0;
  };
  Plane out( 2 * t.width(), 2 * t.height() );
  for( int r = 0; r < out.height(); r++ )
  {
    for( int c = 0; c < out.width(); c++ )
    {
      long long s = 0;
      for( int dr = -4; dr <= 4; dr++ )
      {
        for( int dc = -4; dc <= 4; dc++ )
        {
          const int rr = r / 2 + dr, cc = c / 2 + dc;
          if( rr < 0 || rr >= t.height() || cc < 0 || cc >= t.width() )
          {
            continue;
          }
          s += (long long) weight( r % 2, dr ) * weight( c % 2, dc ) * t.at( rr, cc );
        }
      }
      out.at( r, c ) = clipPel( int( std::floor( ( double( s ) + 2048.0 ) / 4096.0 ) ) );
    }
  }
  return out;
}

}   // namespace

TEST_CASE( "filters: coefficient sums" )
{
  int sum = 0;
  for( int v: kDownFilter )
  {
    sum += v;
  }
  CHECK( sum == 64 );
  sum = 0;
  for( int v: kLumaHalfPel )
  {
    sum += v;
  }
  CHECK( sum == 64 );
  sum = 0;
  for( int v: kChromaHalfPel )
  {
    sum += v;
  }
  CHECK( sum == 64 );
}

TEST_CASE( "plane: crop, paste and replication padding" )
{
  std::mt19937_64 rng( 1 );
  const Plane     p = randomPlane( 10, 6, rng );
  const Plane     c = p.crop( 3, 2, 4, 3 );
  CHECK( c.at( 0, 0 ) == p.at( 2, 3 ) );
  CHECK( c.at( 2, 3 ) == p.at( 4, 6 ) );
  Plane q( 10, 6 );
  q.paste( c, 3, 2 );
  CHECK( q.at( 4, 6 ) == p.at( 4, 6 ) );
  CHECK_THROWS_AS( p.crop( 8, 0, 4, 1 ), ArgumentError );

  const Plane pad = padReplicate( p, 2, 3, 1, 4 );
  CHECK( pad.width() == 15 );
  CHECK( pad.height() == 11 );
  CHECK( pad.at( 0, 0 ) == p.at( 0, 0 ) );
  CHECK( pad.at( 10, 14 ) == p.at( 5, 9 ) );
  CHECK( pad.at( 3, 1 ) == p.at( 2, 0 ) );
}

TEST_CASE( "padding: small cases and split margins equal summed margins" )
{
  std::mt19937_64 rng( 11 );
  const Plane     p = randomPlane( 9, 7, rng );
  CHECK( padReplicate( p, 0, 0, 0, 0 ) == p );
  CHECK( padReplicate( Plane( 1, 1, 7 ), 2, 2, 2, 2 ) == Plane( 5, 5, 7 ) );
  Plane row( 2, 1 );
  row.at( 0, 0 ) = 3;
  row.at( 0, 1 ) = 9;
  const Plane r = padReplicate( row, 1, 0, 0, 0 );
  CHECK( r.width() == 3 );
  CHECK( ( r.at( 0, 0 ) == 3 && r.at( 0, 1 ) == 3 && r.at( 0, 2 ) == 9 ) );
  for( int i = 0; i < 20; i++ )
  {
    std::uniform_int_distribution<> m( 0, 5 );
    const int l1 = m( rng ), l2 = m( rng ), r1 = m( rng ), r2 = m( rng );
    const int t1 = m( rng ), t2 = m( rng ), b1 = m( rng ), b2 = m( rng );
    CHECK( padReplicate( padReplicate( p, l1, r1, t1, b1 ), l2, r2, t2, b2 ) ==
           padReplicate( p, l1 + l2, r1 + r2, t1 + t2, b1 + b2 ) );
  }
}

TEST_CASE( "frame: raw files of CTU-multiple size round trip byte for byte" )
{
  const auto      dir = std::filesystem::temp_directory_path();
  std::mt19937_64 rng( 12 );
  std::vector<char> bytes( 128 * 64 * 3 / 2 );
  for( auto& b: bytes )
  {
    b = char( rng() & 0xff );
  }
  std::ofstream( dir / "aric_rt_in.yuv", std::ios::binary ).write( bytes.data(), std::streamsize( bytes.size() ) );
  saveFrame( dir / "aric_rt_out.yuv", loadFrame( dir / "aric_rt_in.yuv", 128, 64 ) );
  std::ifstream     in( dir / "aric_rt_out.yuv", std::ios::binary );
  std::vector<char> back( ( std::istreambuf_iterator<char>( in ) ), std::istreambuf_iterator<char>() );
  CHECK( back == bytes );

  {
    std::ofstream( dir / "aric_const.yuv", std::ios::binary ) << std::string( 64 * 64 * 3 / 2, char( 128 ) );
  }
  const Frame c = loadFrame( dir / "aric_const.yuv", 64, 64 );
  CHECK( ( c.y == Plane( 64, 64, 128 ) && c.cb == Plane( 32, 32, 128 ) && c.cr == Plane( 32, 32, 128 ) ) );
  CHECK_THROWS_WITH_AS( loadFrame( dir / "aric_const.yuv", 70, 70 ), doctest::Contains( "expected 7350 bytes" ),
                        IoError );
  for( const char* n: { "aric_rt_in.yuv", "aric_rt_out.yuv", "aric_const.yuv" } )
  {
    std::filesystem::remove( dir / n );
  }
}

TEST_CASE( "ssd agrees with a plain loop" )
{
  std::mt19937_64 rng( 2 );
  const Plane     a = randomPlane( 17, 9, rng );
  const Plane     b = randomPlane( 17, 9, rng );
  CHECK( double( ssd( a, b ) ) == oracle::naiveSsd( a, b ) );
  CHECK( ssd( a, a ) == 0 );
}

TEST_CASE( "frame: padding to CTU multiples keeps the original size" )
{
  std::mt19937_64 rng( 3 );
  const Frame     f = makeFrame( randomPlane( 100, 66, rng ), randomPlane( 50, 33, rng ), randomPlane( 50, 33, rng ) );
  CHECK( f.width == 128 );
  CHECK( f.height == 128 );
  CHECK( f.origWidth == 100 );
  CHECK( f.origHeight == 66 );
  CHECK( f.cb.width() == 64 );
  CHECK( f.y.at( 127, 127 ) == f.y.at( 65, 99 ) );
  const Frame o = cropToOriginal( f );
  CHECK( o.y.width() == 100 );
  CHECK( o.cr.height() == 33 );
  CHECK( CtuGrid::of( f ).count() == 4 );

  CHECK_THROWS_AS( makeFrame( Plane( 7, 8 ), Plane( 4, 4 ), Plane( 4, 4 ) ), ArgumentError );
  CHECK_THROWS_AS( makeFrame( Plane( 8, 8 ), Plane( 4, 4 ), Plane( 3, 4 ) ), ArgumentError );
}

TEST_CASE( "frame: CTU extract and write round trip" )
{
  std::mt19937_64 rng( 4 );
  const Frame     f = makeFrame( randomPlane( 128, 64, rng ), randomPlane( 64, 32, rng ), randomPlane( 64, 32, rng ) );
  Frame           g = f;
  g.y.at( 0, 64 )   = uint8_t( f.y.at( 0, 64 ) ^ 1 );
  const auto blocks = extractCtu( f, 0, 1 );
  CHECK( blocks.y.width() == 64 );
  CHECK( blocks.cb.width() == 32 );
  writeCtu( g, 0, 1, blocks );
  CHECK( g == f );
  CHECK_THROWS_AS( extractCtu( f, 1, 0 ), ArgumentError );
}

TEST_CASE( "frame: raw file I/O and size errors" )
{
  const auto      path = std::filesystem::temp_directory_path() / "aric_frame_io.yuv";
  std::mt19937_64 rng( 5 );
  const Frame     f = makeFrame( randomPlane( 70, 40, rng ), randomPlane( 35, 20, rng ), randomPlane( 35, 20, rng ) );
  saveFrame( path, f );
  CHECK( std::filesystem::file_size( path ) == 70 * 40 * 3 / 2 );
  CHECK( loadFrame( path, 70, 40 ) == f );
  CHECK_THROWS_WITH_AS( loadFrame( path, 72, 40 ), doctest::Contains( "expected 4320 bytes" ), IoError );
  CHECK_THROWS_AS( loadFrame( path, 0, 40 ), ArgumentError );
  CHECK_THROWS_AS( loadFrame( path / "missing", 70, 40 ), IoError );
  std::filesystem::remove( path );

  CHECK( parseSize( "352x288" ) == std::pair{ 352, 288 } );
  CHECK_THROWS_AS( parseSize( "352" ), ArgumentError );
  CHECK_THROWS_AS( parseSize( "0x16" ), ArgumentError );
}

TEST_CASE( "down-sampling: impulse response reproduces the taps" )
{
  // constant rows, so the vertical pass multiplies by exactly 64
  for( int impulse: { 20, 21 } )
  {
    Plane p( 48, 16, 128 );
    for( int r = 0; r < 16; r++ )
    {
      p.at( r, impulse ) = 192;
    }
    const Plane d = downsample2x( p );
    for( int j = 0; j < d.width(); j++ )
    {
      const int k   = impulse - 2 * j + 6;
      const int tap = k >= 0 && k < 13 ? kDownFilter[size_t( k )] : 0;
      CHECK( d.at( 5, j ) == 128 + tap );
    }
  }
}

TEST_CASE( "down-sampling: matches the direct 2-D evaluation" )
{
  std::mt19937_64 rng( 6 );
  for( auto [w, h]: { std::pair{ 64, 64 }, std::pair{ 2, 2 }, std::pair{ 18, 6 } } )
  {
    const Plane p = randomPlane( w, h, rng );
    CHECK( downsample2x( p ) == directDownsample( p ) );
  }
  CHECK( downsample2x( Plane( 16, 16, 77 ) ) == Plane( 8, 8, 77 ) );
  CHECK_THROWS_AS( downsample2x( Plane( 15, 16 ) ), ArgumentError );
}

TEST_CASE( "DCTIF: tile up-sampling matches the direct evaluation for both filters" )
{
  std::mt19937_64 rng( 7 );
  for( FilterKind k: { FilterKind::Luma, FilterKind::Chroma } )
  {
    const Plane t = randomPlane( 13, 9, rng );
    CHECK( upsampleDctifTile( t, k ) == directUpsample( t, k ) );
  }
}

TEST_CASE( "DCTIF: even positions copy, odd positions interpolate an impulse" )
{
  Plane t( 32, 32, 100 );
  t.at( 8, 8 ) = 164;
  const Plane u = upsampleDctifTile( t, FilterKind::Luma );
  CHECK( u.at( 16, 16 ) == 164 );
  CHECK( u.at( 16, 14 ) == 100 );
  // horizontal half-pel neighbours of the impulse: taps at offsets 0 and +1 are 40
  CHECK( u.at( 16, 17 ) == 100 + 40 );
  CHECK( u.at( 16, 15 ) == 100 + 40 );
  CHECK( u.at( 16, 19 ) == 100 - 11 );
  CHECK( u.at( 16, 21 ) == 100 + 4 );
  CHECK( u.at( 16, 23 ) == 100 - 1 );
  CHECK( u.at( 16, 25 ) == 100 );
}

TEST_CASE( "DCTIF: constant block with full context stays constant" )
{
  const Plane block( 16, 16, 90 );
  const auto  ctx = BoundaryContext::fromTile( Plane( 32, 32, 90 ), 8, { true, true, true, true } );
  CHECK( upsampleDctif( block, ctx, FilterKind::Luma ) == Plane( 32, 32, 90 ) );
  CHECK( upsampleDctif( block, ctx, FilterKind::Chroma ) == Plane( 32, 32, 90 ) );
}

TEST_CASE( "DCTIF: output depends only on block and context within the filter reach" )
{
  std::mt19937_64 rng( 8 );
  const Plane     tile = randomPlane( 32, 32, rng );
  const Plane     block = tile.crop( 8, 8, 16, 16 );
  const auto      all   = BoundaryContext::fromTile( tile, 8, { true, true, true, true } );
  const Plane     ref   = upsampleDctif( block, all, FilterKind::Luma );

  // samples further than the reach from the block do not matter
  Plane far = tile;
  for( int r = 0; r < 32; r++ )
  {
    for( int c = 0; c < 32; c++ )
    {
      if( r < 4 || r >= 28 || c < 4 || c >= 28 )
      {
        far.at( r, c ) = uint8_t( 255 - far.at( r, c ) );
      }
    }
  }
  CHECK( upsampleDctif( block, BoundaryContext::fromTile( far, 8, { true, true, true, true } ), FilterKind::Luma ) ==
         ref );

  // a change inside the reach does
  Plane near     = tile;
  near.at( 5, 12 ) = uint8_t( 255 - near.at( 5, 12 ) );
  CHECK( upsampleDctif( block, BoundaryContext::fromTile( near, 8, { true, true, true, true } ), FilterKind::Luma ) !=
         ref );
}

TEST_CASE( "DCTIF: unavailable sides read zero and changing them has no effect" )
{
  std::mt19937_64 rng( 9 );
  const Plane     tile  = randomPlane( 32, 32, rng );
  const Plane     block = tile.crop( 8, 8, 16, 16 );
  const auto      ctx   = BoundaryContext::fromTile( tile, 8, { true, true, false, false } );
  CHECK( ctx.corners[kTopLeft].width() == 8 );
  CHECK( ctx.corners[kTopRight].empty() );
  CHECK( ctx.corners[kBottomRight].empty() );

  Plane zeroed = tile;
  for( int r = 0; r < 32; r++ )
  {
    for( int c = 0; c < 32; c++ )
    {
      if( r >= 24 || c >= 24 )
      {
        zeroed.at( r, c ) = 0;
      }
    }
  }
  CHECK( upsampleDctif( block, ctx, FilterKind::Luma ) == upsampleDctifTile( zeroed, FilterKind::Luma ).crop( 16, 16, 32, 32 ) );
}

TEST_CASE( "boundary context validation" )
{
  BoundaryContext ctx = BoundaryContext::none();
  ctx.available[kTop] = true;
  ctx.strips[kTop]    = Plane( 16, 7 );
  CHECK_THROWS_AS( ctx.validate( 16, 16 ), ArgumentError );
  ctx.strips[kTop] = Plane( 16, 8 );
  CHECK_NOTHROW( ctx.validate( 16, 16 ) );
  ctx.corners[kTopLeft] = Plane( 8, 8 );
  CHECK_THROWS_WITH_AS( ctx.validate( 16, 16 ), doctest::Contains( "without both sides" ), ArgumentError );
  CHECK_THROWS_AS( upsampleDctif( Plane( 16, 16 ), BoundaryContext::none( 3 ), FilterKind::Luma ), ArgumentError );
}

TEST_CASE( "DCTIF after down-sampling beats sample duplication on natural-looking content" )
{
  for( uint64_t seed = 1; seed <= 6; seed++ )
  {
    const Plane p  = fixture::syntheticFrame( 128, 128, seed ).y;
    const Plane lr = downsample2x( p );
    const auto  ctx = BoundaryContext::fromTile( padReplicate( lr, kContext, kContext, kContext, kContext ), kContext,
                                                 { true, true, true, true } );
    const Plane up  = upsampleDctif( lr, ctx, FilterKind::Luma );
    Plane       nn( 128, 128 );
    for( int r = 0; r < 128; r++ )
    {
      for( int c = 0; c < 128; c++ )
      {
        nn.at( r, c ) = lr.at( r / 2, c / 2 );
      }
    }
    INFO( "seed " << seed );
    CHECK( ssd( up, p ) < ssd( nn, p ) );
  }
}
