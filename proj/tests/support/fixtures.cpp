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

#include "fixtures.h"

#include <cmath>
#include <random>

namespace fixture
{

using namespace aric;

Frame syntheticFrame( int width, int height, uint64_t seed )
{
  std::mt19937_64                        rng( seed );
  std::uniform_real_distribution<double> u( 0, 1 );
  std::normal_distribution<double>       n( 0, 1 );
  const double fx = 0.02 + 0.2 * u( rng ), fy = 0.02 + 0.2 * u( rng ), ph = 6.28 * u( rng );
  const double gx = 60 * ( u( rng ) - 0.5 ), gy = 60 * ( u( rng ) - 0.5 );
  const double noise = 2 + 8 * u( rng );
  const int    ex = int( width * u( rng ) ), ey = int( height * u( rng ) );
  const double step = 80 * ( u( rng ) - 0.5 );

  auto sampleAt = [&]( double x, double y, double base, double scale )
  {
    double v = base + scale * ( 40 * std::sin( fx * x + ph ) * std::cos( fy * y ) + gx * x / width + gy * y / height );
    if( x > ex && y < ey )
    {
      v += scale * step;
    }
    if( ( int( x ) / 16 + int( y ) / 16 ) % 5 == 0 )
    {
      v += scale * 20 * std::sin( 1.3 * x + 0.7 * y );
    }
    return v + noise * n( rng );
  };

  Plane y( width, height ), cb( width / 2, height / 2 ), cr( width / 2, height / 2 );
  for( int r = 0; r < height; r++ )
  {
    for( int c = 0; c < width; c++ )
    {
      y.at( r, c ) = clipPel( int( std::lround( sampleAt( c, r, 128, 1.0 ) ) ) );
    }
  }
  for( int r = 0; r < height / 2; r++ )
  {
    for( int c = 0; c < width / 2; c++ )
    {
      cb.at( r, c ) = clipPel( int( std::lround( sampleAt( 2 * c, 2 * r, 120, 0.4 ) ) ) );
      cr.at( r, c ) = clipPel( int( std::lround( sampleAt( 2 * r, 2 * c, 136, -0.3 ) ) ) );
    }
  }
  return makeFrame( y, cb, cr );
}

Frame constantFrame( int width, int height, uint8_t value )
{
  return makeFrame( Plane( width, height, value ), Plane( width / 2, height / 2, value ),
                    Plane( width / 2, height / 2, value ) );
}

NetArch smallArch( Variant v )
{
  NetArch a = NetArch::forVariant( v );
  a.c1 = 8, a.c2a = 4, a.c2b = 4, a.c3 = 8, a.c4a = 4, a.c4b = 4;
  a.k1 = 5, a.k2a = 3, a.k2b = 5, a.k3 = 9, a.k4a = 3, a.k4b = 5, a.k5 = 3;
  return a;
}

UpsamplerNet randomModel( Variant v, int qpTag, uint64_t seed, double lastLayerScale )
{
  auto                             net = UpsamplerNet::initialized( v, qpTag, smallArch( v ), seed );
  std::mt19937_64                  rng( seed ^ 0x9e3779b97f4a7c15ull );
  std::normal_distribution<double> n( 0, lastLayerScale );
  for( auto& w: net.params()[kW5].values() )
  {
    w = float( n( rng ) );
  }
  return net;
}

ModelSet randomModels( int qpTag, uint64_t seed, double lastLayerScale )
{
  return ModelSet::fromModels( randomModel( Variant::Luma, qpTag, seed, lastLayerScale ),
                               randomModel( Variant::Chroma, qpTag, seed + 1, lastLayerScale ) );
}

ModelSet zeroModels( int qpTag )
{
  return ModelSet::fromModels( UpsamplerNet( Variant::Luma, qpTag, NetArch::forVariant( Variant::Luma ) ),
                               UpsamplerNet( Variant::Chroma, qpTag, NetArch::forVariant( Variant::Chroma ) ) );
}

}   // namespace fixture
