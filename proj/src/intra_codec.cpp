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

#include "aric/intra_codec.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace aric
{

double lambdaFromQp( int qp, double c )
{
  return c * std::exp2( ( qp - 12 ) / 3.0 );
}

PlaneBorder PlaneBorder::around( const Plane& p, int x, int y, int w, int h )
{
  PlaneBorder b;
  if( y > 0 )
  {
    b.top.emplace( p.row( y - 1 ).begin() + x, p.row( y - 1 ).begin() + x + w );
  }
  if( x > 0 )
  {
    b.left.emplace( size_t( h ) );
    for( int r = 0; r < h; r++ )
    {
      ( *b.left )[size_t( r )] = p.at( y + r, x - 1 );
    }
  }
  return b;
}

namespace intra
{

const std::array<int, 64> kZigZag = { 0,  1,  8,  16, 9,  2,  3,  10, 17, 24, 32, 25, 18, 11, 4,  5,
                                      12, 19, 26, 33, 40, 48, 41, 34, 27, 20, 13, 6,  7,  14, 21, 28,
                                      35, 42, 49, 56, 57, 50, 43, 36, 29, 22, 15, 23, 30, 37, 44, 51,
                                      58, 59, 52, 45, 38, 31, 39, 46, 53, 60, 61, 54, 47, 55, 62, 63 };

const std::array<std::array<int, 8>, 8> kDctMatrix = { {
  { 64, 64, 64, 64, 64, 64, 64, 64 },
  { 89, 75, 50, 18, -18, -50, -75, -89 },
  { 83, 36, -36, -83, -83, -36, 36, 83 },
  { 75, -18, -89, -50, 50, 89, 18, -75 },
  { 64, -64, -64, 64, 64, -64, -64, 64 },
  { 50, -89, 18, 75, -75, -18, 89, -50 },
  { 36, -83, 83, -36, -36, 83, -83, 36 },
  { 18, -50, 75, -89, 89, -75, 50, -18 },
} };

namespace
{

// forward stages for 8-bit input and an 8x8 block; inverse stages mirror them
constexpr int kFwdShift1 = 2;
constexpr int kFwdShift2 = 9;
constexpr int kInvShift1 = 7;
constexpr int kInvShift2 = 12;

constexpr int kQuantScale[6]   = { 26214, 23302, 20560, 18396, 16384, 14564 };
constexpr int kDequantScale[6] = { 40, 45, 51, 57, 64, 72 };
constexpr int kTransformShift  = 4;
constexpr int kDequantShift    = 2;
constexpr int kMaxLevel        = 32767;

int clip16( long long v )
{
  return int( std::clamp<long long>( v, -32768, 32767 ) );
}

void checkQp( int qp )
{
  ARIC_CHECK( qp >= kMinQp && qp <= kMaxQp, ArgumentError, "qp ", qp, " outside [", kMinQp, ",", kMaxQp, "]" );
}

}   // namespace

Block predict( IntraMode mode, const std::array<int, 8>& top, const std::array<int, 8>& left )
{
  Block p{};
  switch( mode )
  {
  case IntraMode::DC:
  {
    int sum = 8;
    for( int i = 0; i < 8; i++ )
    {
      sum += top[size_t( i )] + left[size_t( i )];
    }
    p.fill( sum >> 4 );
    break;
  }
  case IntraMode::Horizontal:
    for( int y = 0; y < 8; y++ )
    {
      std::fill_n( p.begin() + 8 * y, 8, left[size_t( y )] );
    }
    break;
  case IntraMode::Vertical:
    for( int y = 0; y < 8; y++ )
    {
      std::copy( top.begin(), top.end(), p.begin() + 8 * y );
    }
    break;
  case IntraMode::Planar:
    // bilinear blend towards the far top and far left neighbours
    for( int y = 0; y < 8; y++ )
    {
      for( int x = 0; x < 8; x++ )
      {
        p[size_t( 8 * y + x )] = ( ( 7 - x ) * left[size_t( y )] + ( x + 1 ) * top[7] + ( 7 - y ) * top[size_t( x )] +
                                   ( y + 1 ) * left[7] + 8 ) >>
                                 4;
      }
    }
    break;
  }
  return p;
}

Coeffs forwardDct( const Block& res )
{
  std::array<long long, 64> tmp{};
  for( int i = 0; i < 8; i++ )
  {
    for( int k = 0; k < 8; k++ )
    {
      long long s = 0;
      for( int j = 0; j < 8; j++ )
      {
        s += (long long) kDctMatrix[size_t( k )][size_t( j )] * res[size_t( 8 * i + j )];
      }
      tmp[size_t( 8 * i + k )] = ( s + ( 1 << ( kFwdShift1 - 1 ) ) ) >> kFwdShift1;
    }
  }
  Coeffs c{};
  for( int k = 0; k < 8; k++ )
  {
    for( int j = 0; j < 8; j++ )
    {
      long long s = 0;
      for( int i = 0; i < 8; i++ )
      {
        s += (long long) kDctMatrix[size_t( k )][size_t( i )] * tmp[size_t( 8 * i + j )];
      }
      c[size_t( 8 * k + j )] = clip16( ( s + ( 1 << ( kFwdShift2 - 1 ) ) ) >> kFwdShift2 );
    }
  }
  return c;
}

Block inverseDct( const Coeffs& c )
{
  std::array<int, 64> tmp{};
  for( int j = 0; j < 8; j++ )
  {
    for( int i = 0; i < 8; i++ )
    {
      long long s = 0;
      for( int k = 0; k < 8; k++ )
      {
        s += (long long) kDctMatrix[size_t( k )][size_t( i )] * c[size_t( 8 * k + j )];
      }
      tmp[size_t( 8 * i + j )] = clip16( ( s + ( 1 << ( kInvShift1 - 1 ) ) ) >> kInvShift1 );
    }
  }
  Block r{};
  for( int i = 0; i < 8; i++ )
  {
    for( int j = 0; j < 8; j++ )
    {
      long long s = 0;
      for( int k = 0; k < 8; k++ )
      {
        s += (long long) kDctMatrix[size_t( k )][size_t( j )] * tmp[size_t( 8 * i + k )];
      }
      r[size_t( 8 * i + j )] = clip16( ( s + ( 1 << ( kInvShift2 - 1 ) ) ) >> kInvShift2 );
    }
  }
  return r;
}

Coeffs quantize( const Coeffs& c, int qp )
{
  checkQp( qp );
  const int       qbits  = 14 + qp / 6 + kTransformShift;
  const long long offset = ( 1LL << qbits ) / 3;
  const long long scale  = kQuantScale[qp % 6];
  Coeffs          q{};
  for( size_t i = 0; i < 64; i++ )
  {
    const long long a     = std::llabs( (long long) c[i] );
    const int       level = int( std::min<long long>( ( a * scale + offset ) >> qbits, kMaxLevel ) );
    q[i]                  = c[i] < 0 ? -level : level;
  }
  return q;
}

Coeffs dequantize( const Coeffs& levels, int qp )
{
  checkQp( qp );
  const long long scale = (long long) kDequantScale[qp % 6] << ( qp / 6 );
  Coeffs          c{};
  for( size_t i = 0; i < 64; i++ )
  {
    c[i] = clip16( ( levels[i] * scale + ( 1 << ( kDequantShift - 1 ) ) ) >> kDequantShift );
  }
  return c;
}

int blockBits( const Coeffs& levels )
{
  int bits = 2;
  int run  = 0;
  for( int pos = 0; pos < 64; pos++ )
  {
    const int v = levels[size_t( kZigZag[size_t( pos )] )];
    if( v == 0 )
    {
      run++;
      continue;
    }
    bits += BitWriter::ueLength( uint32_t( run + 1 ) ) + BitWriter::ueLength( uint32_t( std::abs( v ) - 1 ) ) + 1;
    run = 0;
  }
  return bits + 1;
}

void writeBlock( BitWriter& w, IntraMode mode, const Coeffs& levels )
{
  w.putBits( uint32_t( mode ), 2 );
  int run = 0;
  for( int pos = 0; pos < 64; pos++ )
  {
    const int v = levels[size_t( kZigZag[size_t( pos )] )];
    if( v == 0 )
    {
      run++;
      continue;
    }
    w.putUe( uint32_t( run + 1 ) );
    w.putUe( uint32_t( std::abs( v ) - 1 ) );
    w.putBit( v < 0 );
    run = 0;
  }
  w.putUe( 0 );
}

}   // namespace intra

namespace
{

using namespace intra;

void checkPlane( int width, int height )
{
  ARIC_CHECK( width > 0 && height > 0 && width % kBlockSize == 0 && height % kBlockSize == 0, ArgumentError,
              "intra coding needs dimensions that are positive multiples of 8, got ", width, "x", height );
}

void checkBorder( const PlaneBorder& b, int width, int height )
{
  ARIC_CHECK( !b.top || int( b.top->size() ) == width, ArgumentError, "top border has ", b.top->size(),
              " samples for width ", width );
  ARIC_CHECK( !b.left || int( b.left->size() ) == height, ArgumentError, "left border has ", b.left->size(),
              " samples for height ", height );
}

/// Neighbours of the block at (bx, by) from the reconstruction so far and the plane border.
void gatherNeighbours( const Plane& recon, const PlaneBorder& border, int bx, int by, std::array<int, 8>& top,
                       std::array<int, 8>& left )
{
  const int  x0      = bx * kBlockSize;
  const int  y0      = by * kBlockSize;
  const bool hasTop  = by > 0 || border.top.has_value();
  const bool hasLeft = bx > 0 || border.left.has_value();
  for( int i = 0; i < 8; i++ )
  {
    if( hasTop )
    {
      top[size_t( i )] = by > 0 ? recon.at( y0 - 1, x0 + i ) : ( *border.top )[size_t( x0 + i )];
    }
    if( hasLeft )
    {
      left[size_t( i )] = bx > 0 ? recon.at( y0 + i, x0 - 1 ) : ( *border.left )[size_t( y0 + i )];
    }
  }
  if( !hasTop && !hasLeft )
  {
    top.fill( 128 );
    left.fill( 128 );
  }
  else if( !hasTop )
  {
    top.fill( left[0] );
  }
  else if( !hasLeft )
  {
    left.fill( top[0] );
  }
}

Block reconstruct( const Block& pred, const Coeffs& levels, int qp )
{
  const Block res = inverseDct( dequantize( levels, qp ) );
  Block       rec{};
  for( size_t i = 0; i < 64; i++ )
  {
    rec[i] = clipPel( pred[i] + res[i] );
  }
  return rec;
}

}   // namespace

CodedBlock encodePlaneIntra( const Plane& p, int qp, double lambda, const PlaneBorder& border )
{
  checkPlane( p.width(), p.height() );
  checkBorder( border, p.width(), p.height() );
  checkQp( qp );
  ARIC_CHECK( lambda >= 0 && std::isfinite( lambda ), ArgumentError, "lambda must be finite and >= 0, got ", lambda );

  CodedBlock out;
  out.recon = Plane( p.width(), p.height() );
  for( int by = 0; by < p.height() / kBlockSize; by++ )
  {
    for( int bx = 0; bx < p.width() / kBlockSize; bx++ )
    {
      std::array<int, 8> top{}, left{};
      gatherNeighbours( out.recon, border, bx, by, top, left );
      Block org{};
      for( int y = 0; y < 8; y++ )
      {
        for( int x = 0; x < 8; x++ )
        {
          org[size_t( 8 * y + x )] = p.at( by * 8 + y, bx * 8 + x );
        }
      }

      double    bestCost = 0;
      IntraMode bestMode = IntraMode::DC;
      Coeffs    bestLevels{};
      Block     bestRec{};
      uint64_t  bestDist = 0;
      for( int m = 0; m < 4; m++ )
      {
        const IntraMode mode = IntraMode( m );
        const Block     pred = predict( mode, top, left );
        Block           res{};
        for( size_t i = 0; i < 64; i++ )
        {
          res[i] = org[i] - pred[i];
        }
        const Coeffs levels = quantize( forwardDct( res ), qp );
        const Block  rec    = reconstruct( pred, levels, qp );
        uint64_t     dist   = 0;
        for( size_t i = 0; i < 64; i++ )
        {
          const int d = org[i] - rec[i];
          dist += uint64_t( d * d );
        }
        const double cost = double( dist ) + lambda * blockBits( levels );
        if( m == 0 || cost < bestCost )
        {
          bestCost   = cost;
          bestMode   = mode;
          bestLevels = levels;
          bestRec    = rec;
          bestDist   = dist;
        }
      }

      writeBlock( out.payload, bestMode, bestLevels );
      out.modes.push_back( bestMode );
      out.distortion += bestDist;
      for( int y = 0; y < 8; y++ )
      {
        for( int x = 0; x < 8; x++ )
        {
          out.recon.at( by * 8 + y, bx * 8 + x ) = uint8_t( bestRec[size_t( 8 * y + x )] );
        }
      }
    }
  }
  out.bits = out.payload.bitCount();
  return out;
}

Plane decodePlaneIntra( BitReader& reader, int width, int height, int qp, const PlaneBorder& border )
{
  checkPlane( width, height );
  checkBorder( border, width, height );
  checkQp( qp );

  Plane recon( width, height );
  for( int by = 0; by < height / kBlockSize; by++ )
  {
    for( int bx = 0; bx < width / kBlockSize; bx++ )
    {
      std::array<int, 8> top{}, left{};
      gatherNeighbours( recon, border, bx, by, top, left );
      const IntraMode mode = IntraMode( reader.getBits( 2 ) );
      Coeffs          levels{};
      int             pos = 0;
      while( true )
      {
        const size_t   at  = reader.position();
        const uint32_t sym = reader.getUe();
        if( sym == 0 )
        {
          break;
        }
        ARIC_CHECK( sym <= 64 && pos + int( sym ) - 1 < 64, BitstreamError, "invalid coefficient run at bit ", at );
        pos += int( sym ) - 1;
        const size_t   levelAt = reader.position();
        const uint32_t mag     = reader.getUe();
        ARIC_CHECK( mag < uint32_t( kMaxLevel ), BitstreamError, "invalid coefficient level at bit ", levelAt );
        const int level = int( mag ) + 1;
        levels[size_t( kZigZag[size_t( pos )] )] = reader.getBit() ? -level : level;
        pos++;
      }
      const Block rec = reconstruct( predict( mode, top, left ), levels, qp );
      for( int y = 0; y < 8; y++ )
      {
        for( int x = 0; x < 8; x++ )
        {
          recon.at( by * 8 + y, bx * 8 + x ) = uint8_t( rec[size_t( 8 * y + x )] );
        }
      }
    }
  }
  return recon;
}

}   // namespace aric
