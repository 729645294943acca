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

#include "aric/upsampler_net.h"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <random>

namespace aric
{

const char* variantName( Variant v )
{
  return v == Variant::Luma ? "luma" : "chroma";
}

Variant parseVariant( const std::string& s )
{
  if( s == "luma" )
  {
    return Variant::Luma;
  }
  if( s == "chroma" )
  {
    return Variant::Chroma;
  }
  throw ArgumentError( str( "unknown variant '", s, "' (expected luma or chroma)" ) );
}

int LayerSpec::pad() const
{
  switch( kind )
  {
  case LayerKind::Conv: return ( kh - 1 ) / 2;
  case LayerKind::Deconv: return deconvCropBegin( kh );
  default: return 0;
  }
}

NetArch NetArch::forVariant( Variant v )
{
  NetArch a;
  if( v == Variant::Chroma )
  {
    a.inChannels  = 3;
    a.outChannels = 2;
  }
  return a;
}

std::vector<LayerSpec> NetArch::layerTable() const
{
  using K        = LayerKind;
  const int c2   = c2a + c2b;
  const int c4   = c4a + c4b;
  return {
    { K::Conv, k1, k1, inChannels, c1 },   { K::Relu, 0, 0, c1, c1 },
    { K::Conv, k2a, k2a, c1, c2a },        { K::Relu, 0, 0, c2a, c2a },
    { K::Conv, k2b, k2b, c1, c2b },        { K::Relu, 0, 0, c2b, c2b },
    { K::Concat, 0, 0, c2a, c2 },          { K::Deconv, k3, k3, c2, c3 },
    { K::Relu, 0, 0, c3, c3 },             { K::Conv, k4a, k4a, c3, c4a },
    { K::Relu, 0, 0, c4a, c4a },           { K::Conv, k4b, k4b, c3, c4b },
    { K::Relu, 0, 0, c4b, c4b },           { K::Concat, 0, 0, c4a, c4 },
    { K::Conv, k5, k5, c4, outChannels },  { K::AddSkip, 0, 0, outChannels, outChannels },
  };
}

NetArch NetArch::fromLayerTable( const std::vector<LayerSpec>& table )
{
  ARIC_CHECK( table.size() == 16, FormatError, "layer table has ", table.size(), " rows, expected 16" );
  NetArch a;
  a.inChannels  = table[0].inCh;
  a.c1          = table[0].outCh;
  a.k1          = table[0].kh;
  a.k2a         = table[2].kh;
  a.c2a         = table[2].outCh;
  a.k2b         = table[4].kh;
  a.c2b         = table[4].outCh;
  a.k3          = table[7].kh;
  a.c3          = table[7].outCh;
  a.k4a         = table[9].kh;
  a.c4a         = table[9].outCh;
  a.k4b         = table[11].kh;
  a.c4b         = table[11].outCh;
  a.k5          = table[14].kh;
  a.outChannels = table[14].outCh;

  ARIC_CHECK( a.layerTable() == table, FormatError, "layer table does not describe the up-sampling network" );
  for( int k: { a.k1, a.k2a, a.k2b, a.k4a, a.k4b, a.k5 } )
  {
    ARIC_CHECK( k >= 1 && k % 2 == 1, FormatError, "conv kernels must be odd, got ", k );
  }
  ARIC_CHECK( a.k3 >= 2, FormatError, "deconv kernel must be at least 2, got ", a.k3 );
  for( int c: { a.inChannels, a.c1, a.c2a, a.c2b, a.c3, a.c4a, a.c4b, a.outChannels } )
  {
    ARIC_CHECK( c >= 1, FormatError, "layer with zero channels" );
  }
  return a;
}

std::vector<std::vector<int>> NetArch::paramShapes() const
{
  const int c2 = c2a + c2b;
  const int c4 = c4a + c4b;
  return { { c1, inChannels, k1, k1 }, { c1 },  { c2a, c1, k2a, k2a }, { c2a }, { c2b, c1, k2b, k2b }, { c2b },
           { c2, c3, k3, k3 },         { c3 },  { c4a, c3, k4a, k4a }, { c4a }, { c4b, c3, k4b, k4b }, { c4b },
           { outChannels, c4, k5, k5 }, { outChannels } };
}

size_t NetArch::paramCount() const
{
  size_t n = 0;
  for( const auto& s: paramShapes() )
  {
    n += Tensor<float>::elementCount( s );
  }
  return n;
}

void TrainConfig::validate() const
{
  ARIC_CHECK( std::isfinite( lr ) && lr >= 0, ArgumentError, "learning rate must be >= 0, got ", lr );
  ARIC_CHECK( momentum >= 0 && momentum < 1, ArgumentError, "momentum must be in [0,1), got ", momentum );
  ARIC_CHECK( batch >= 1, ArgumentError, "batch must be >= 1, got ", batch );
  ARIC_CHECK( epochs >= 0, ArgumentError, "epochs must be >= 0, got ", epochs );
  ARIC_CHECK( patience >= 1, ArgumentError, "patience must be >= 1, got ", patience );
}

template<typename T>
UpsamplerNetT<T>::UpsamplerNetT( Variant variant, int qpTag, const NetArch& arch )
  : m_variant( variant ), m_qpTag( qpTag ), m_arch( arch )
{
  const NetArch ref = NetArch::forVariant( variant );
  ARIC_CHECK( arch.inChannels == ref.inChannels && arch.outChannels == ref.outChannels, ArgumentError,
              variantName( variant ), " network needs ", ref.inChannels, " input and ", ref.outChannels,
              " output channels, got ", arch.inChannels, " and ", arch.outChannels );
  ARIC_CHECK( qpTag >= 0 && qpTag <= 255, ArgumentError, "qp tag out of range: ", qpTag );
  NetArch::fromLayerTable( arch.layerTable() );
  for( const auto& shape: arch.paramShapes() )
  {
    m_params.emplace_back( shape );
  }
}

template<typename T>
UpsamplerNetT<T> UpsamplerNetT<T>::initialized( Variant variant, int qpTag, const NetArch& arch, uint64_t seed )
{
  UpsamplerNetT           net( variant, qpTag, arch );
  std::mt19937_64         rng( seed );
  std::normal_distribution<double> gauss( 0.0, 1.0 );
  for( int i = kW1; i < kW5; i += 2 )
  {
    Tensor<T>&   w     = net.m_params[size_t( i )];
    const double fanIn = i == kW3 ? double( w.dim( 0 ) ) * w.dim( 2 ) * w.dim( 3 ) / 4.0
                                  : double( w.dim( 1 ) ) * w.dim( 2 ) * w.dim( 3 );
    const double std   = std::sqrt( 2.0 / fanIn );
    for( auto& v: w.values() )
    {
      v = T( gauss( rng ) * std );
    }
  }
  return net;
}

template<typename T>
void UpsamplerNetT<T>::checkInputs( const Tensor<T>& x, const Tensor<T>& dctifUp ) const
{
  ARIC_CHECK( x.rank() == 3 && x.dim( 0 ) == m_arch.inChannels && x.dim( 1 ) > 0 && x.dim( 2 ) > 0, ArgumentError,
              variantName( m_variant ), " network expects input (", m_arch.inChannels, ",H,W), got ",
              x.shapeString() );
  const std::vector<int> outShape = { m_arch.outChannels, 2 * x.dim( 1 ), 2 * x.dim( 2 ) };
  ARIC_CHECK( dctifUp.shape() == outShape, ArgumentError, "DCTIF up-sample ", dctifUp.shapeString(),
              " does not match network output ", Tensor<T>( outShape ).shapeString() );
}

template<typename T>
Tensor<T> UpsamplerNetT<T>::forward( const Tensor<T>& x, const Tensor<T>& dctifUp ) const
{
  ForwardTrace<T> trace;
  return forward( x, dctifUp, trace );
}

template<typename T>
Tensor<T> UpsamplerNetT<T>::forward( const Tensor<T>& x, const Tensor<T>& dctifUp, ForwardTrace<T>& t ) const
{
  checkInputs( x, dctifUp );
  const auto& p = m_params;
  const auto& a = m_arch;

  t.x  = x;
  t.a1 = convForward( x, p[kW1], p[kB1], ( a.k1 - 1 ) / 2 );
  reluInPlace( t.a1 );
  t.a2a = convForward( t.a1, p[kW2a], p[kB2a], ( a.k2a - 1 ) / 2 );
  reluInPlace( t.a2a );
  t.a2b = convForward( t.a1, p[kW2b], p[kB2b], ( a.k2b - 1 ) / 2 );
  reluInPlace( t.a2b );
  t.cat2 = concatChannels( t.a2a, t.a2b );
  t.a3   = deconvForward( t.cat2, p[kW3], p[kB3] );
  reluInPlace( t.a3 );
  t.a4a = convForward( t.a3, p[kW4a], p[kB4a], ( a.k4a - 1 ) / 2 );
  reluInPlace( t.a4a );
  t.a4b = convForward( t.a3, p[kW4b], p[kB4b], ( a.k4b - 1 ) / 2 );
  reluInPlace( t.a4b );
  t.cat4 = concatChannels( t.a4a, t.a4b );
  t.out  = addTensors( convForward( t.cat4, p[kW5], p[kB5], ( a.k5 - 1 ) / 2 ), dctifUp );
  return t.out;
}

template<typename T>
void UpsamplerNetT<T>::backward( const ForwardTrace<T>& t, const Tensor<T>& dOut, std::vector<Tensor<T>>& g,
                                 Tensor<T>* dx ) const
{
  ARIC_CHECK( dOut.sameShape( t.out ), ArgumentError, "output gradient ", dOut.shapeString(), " vs output ",
              t.out.shapeString() );
  ARIC_CHECK( g.size() == size_t( kNumParams ), ArgumentError, "gradient list has ", g.size(), " tensors" );
  const auto& p = m_params;
  const auto& a = m_arch;

  // the skip connection carries no parameters; dOut flows into the last conv unchanged
  Tensor<T> dcat4;
  convBackward( t.cat4, p[kW5], ( a.k5 - 1 ) / 2, dOut, &dcat4, g[kW5], g[kB5] );
  auto [d4a, d4b] = splitChannels( dcat4, a.c4a );
  reluBackward( t.a4a, d4a );
  reluBackward( t.a4b, d4b );
  Tensor<T> d3a, d3b;
  convBackward( t.a3, p[kW4a], ( a.k4a - 1 ) / 2, d4a, &d3a, g[kW4a], g[kB4a] );
  convBackward( t.a3, p[kW4b], ( a.k4b - 1 ) / 2, d4b, &d3b, g[kW4b], g[kB4b] );
  Tensor<T> d3 = addTensors( d3a, d3b );
  reluBackward( t.a3, d3 );
  Tensor<T> dcat2;
  deconvBackward( t.cat2, p[kW3], d3, &dcat2, g[kW3], g[kB3] );
  auto [d2a, d2b] = splitChannels( dcat2, a.c2a );
  reluBackward( t.a2a, d2a );
  reluBackward( t.a2b, d2b );
  Tensor<T> d1a, d1b;
  convBackward( t.a1, p[kW2a], ( a.k2a - 1 ) / 2, d2a, &d1a, g[kW2a], g[kB2a] );
  convBackward( t.a1, p[kW2b], ( a.k2b - 1 ) / 2, d2b, &d1b, g[kW2b], g[kB2b] );
  Tensor<T> d1 = addTensors( d1a, d1b );
  reluBackward( t.a1, d1 );
  convBackward( t.x, p[kW1], ( a.k1 - 1 ) / 2, d1, dx, g[kW1], g[kB1] );
}

template<typename T>
std::vector<Tensor<T>> UpsamplerNetT<T>::zeroGradients() const
{
  std::vector<Tensor<T>> g;
  g.reserve( m_params.size() );
  for( const auto& p: m_params )
  {
    g.emplace_back( p.shape() );
  }
  return g;
}

template<typename T>
double sampleMse( const Tensor<T>& out, const TrainSample<T>& s, Tensor<T>* dOut, double scale )
{
  const Tensor<T>& y = *s.target;
  ARIC_CHECK( y.rank() == 3 && y.dim( 0 ) == out.dim( 0 ) && s.cropY >= 0 && s.cropX >= 0 &&
                s.cropY + y.dim( 1 ) <= out.dim( 1 ) && s.cropX + y.dim( 2 ) <= out.dim( 2 ),
              ArgumentError, "target ", y.shapeString(), " at (", s.cropY, ",", s.cropX, ") does not fit output ",
              out.shapeString() );
  const double n   = double( y.size() );
  double       sum = 0;
  if( dOut )
  {
    *dOut = Tensor<T>( out.shape() );
  }
  for( int c = 0; c < y.dim( 0 ); c++ )
  {
    for( int r = 0; r < y.dim( 1 ); r++ )
    {
      for( int q = 0; q < y.dim( 2 ); q++ )
      {
        const double d = double( out.at( c, r + s.cropY, q + s.cropX ) ) - double( y.at( c, r, q ) );
        sum += d * d;
        if( dOut )
        {
          dOut->at( c, r + s.cropY, q + s.cropX ) = T( scale * 2.0 * d / n );
        }
      }
    }
  }
  return sum / n;
}

template<typename T>
double SgdOptimizer<T>::backwardAndStep( UpsamplerNetT<T>& net, std::span<const TrainSample<T>> batch,
                                         int batchIndex )
{
  ARIC_CHECK( !batch.empty(), ArgumentError, "empty training batch" );
  auto         grads = net.zeroGradients();
  const double scale = 1.0 / double( batch.size() );
  double       total = 0;
  for( size_t i = 0; i < batch.size(); i++ )
  {
    const TrainSample<T>& s = batch[i];
    ARIC_CHECK( s.x && s.dctifUp && s.target, ArgumentError, "incomplete training sample ", i );
    ForwardTrace<T> trace;
    const Tensor<T> out = net.forward( *s.x, *s.dctifUp, trace );
    Tensor<T>       dOut;
    const double    mse = sampleMse( out, s, &dOut, scale );
    ARIC_CHECK( std::isfinite( mse ), TrainingError, "non-finite loss at batch ", batchIndex, " (sample ", i, ")" );
    total += mse;
    net.backward( trace, dOut, grads );
  }

  double norm2 = 0;
  for( const auto& g: grads )
  {
    for( T v: g.values() )
    {
      norm2 += double( v ) * double( v );
    }
  }
  ARIC_CHECK( std::isfinite( norm2 ), TrainingError, "non-finite gradient at batch ", batchIndex );
  const double norm = std::sqrt( norm2 );
  const double clip = ( m_cfg.clipNorm > 0 && norm > m_cfg.clipNorm ) ? m_cfg.clipNorm / norm : 1.0;

  if( m_velocity.empty() )
  {
    m_velocity = net.zeroGradients();
  }
  auto& params = net.params();
  for( size_t k = 0; k < params.size(); k++ )
  {
    auto& v = m_velocity[k];
    auto& w = params[k];
    for( size_t i = 0; i < w.size(); i++ )
    {
      v[i] = T( m_cfg.momentum * double( v[i] ) + m_cfg.lr * clip * double( grads[k][i] ) );
      w[i] -= v[i];
    }
  }
  return total * scale;
}

template class UpsamplerNetT<float>;
template class UpsamplerNetT<double>;
template class SgdOptimizer<float>;
template class SgdOptimizer<double>;
template double sampleMse( const Tensor<float>&, const TrainSample<float>&, Tensor<float>*, double );
template double sampleMse( const Tensor<double>&, const TrainSample<double>&, Tensor<double>*, double );

// ---------------------------------------------------------------------------------------------------------------------
// model file
// ---------------------------------------------------------------------------------------------------------------------

namespace
{

constexpr char   kModelMagic[4]  = { 'A', 'R', 'U', 'N' };
constexpr size_t kModelHeader    = 4 + 2 + 1 + 1 + 2;
constexpr size_t kLayerRowBytes  = 1 + 1 + 1 + 2 + 2;

void putU16( std::vector<uint8_t>& out, uint32_t v )
{
  out.push_back( uint8_t( v & 0xff ) );
  out.push_back( uint8_t( v >> 8 ) );
}

uint16_t getU16( std::span<const uint8_t> b, size_t pos )
{
  return uint16_t( b[pos] | ( b[pos + 1] << 8 ) );
}

}   // namespace

std::vector<uint8_t> serializeModel( const UpsamplerNet& net )
{
  const auto           table = net.arch().layerTable();
  std::vector<uint8_t> out( std::begin( kModelMagic ), std::end( kModelMagic ) );
  putU16( out, kModelVersion );
  out.push_back( uint8_t( net.variant() ) );
  out.push_back( uint8_t( net.qpTag() ) );
  putU16( out, uint32_t( table.size() ) );
  for( const auto& l: table )
  {
    ARIC_CHECK( l.kh < 256 && l.kw < 256 && l.inCh < 65536 && l.outCh < 65536, FormatError,
                "layer too large for the model format" );
    out.push_back( uint8_t( l.kind ) );
    out.push_back( uint8_t( l.kh ) );
    out.push_back( uint8_t( l.kw ) );
    putU16( out, uint32_t( l.inCh ) );
    putU16( out, uint32_t( l.outCh ) );
  }
  for( const auto& p: net.params() )
  {
    for( float v: p.values() )
    {
      const uint32_t bits = std::bit_cast<uint32_t>( v );
      for( int s = 0; s < 32; s += 8 )
      {
        out.push_back( uint8_t( bits >> s ) );
      }
    }
  }
  return out;
}

UpsamplerNet deserializeModel( std::span<const uint8_t> b, const std::string& origin )
{
  ARIC_CHECK( b.size() >= kModelHeader, FormatError, origin, ": truncated header, expected at least ", kModelHeader,
              " bytes, got ", b.size() );
  ARIC_CHECK( std::memcmp( b.data(), kModelMagic, 4 ) == 0, FormatError, origin, ": bad magic (not an ARUN model)" );
  const uint16_t version = getU16( b, 4 );
  ARIC_CHECK( version == kModelVersion, FormatError, origin, ": unsupported model version ", version );
  const uint8_t variant = b[6];
  ARIC_CHECK( variant <= 1, FormatError, origin, ": unknown variant ", int( variant ) );
  const int    qpTag   = b[7];
  const size_t layers  = getU16( b, 8 );
  const size_t tableEnd = kModelHeader + layers * kLayerRowBytes;
  ARIC_CHECK( b.size() >= tableEnd, FormatError, origin, ": truncated layer table, expected at least ", tableEnd,
              " bytes, got ", b.size() );

  std::vector<LayerSpec> table;
  for( size_t i = 0; i < layers; i++ )
  {
    const size_t pos = kModelHeader + i * kLayerRowBytes;
    ARIC_CHECK( b[pos] <= uint8_t( LayerKind::AddSkip ), FormatError, origin, ": unknown layer kind ", int( b[pos] ) );
    table.push_back( { LayerKind( b[pos] ), b[pos + 1], b[pos + 2], getU16( b, pos + 3 ), getU16( b, pos + 5 ) } );
  }
  const NetArch arch = NetArch::fromLayerTable( table );
  const NetArch ref  = NetArch::forVariant( Variant( variant ) );
  ARIC_CHECK( arch.inChannels == ref.inChannels && arch.outChannels == ref.outChannels, FormatError, origin,
              ": layer table channels do not match the ", variantName( Variant( variant ) ), " variant" );

  const size_t expected = tableEnd + 4 * arch.paramCount();
  ARIC_CHECK( b.size() >= expected, FormatError, origin, ": truncated parameters, expected ", expected,
              " bytes, got ", b.size() );
  ARIC_CHECK( b.size() == expected, FormatError, origin, ": ", b.size() - expected, " trailing bytes after ",
              expected );

  UpsamplerNet net( Variant( variant ), qpTag, arch );
  size_t       pos = tableEnd;
  for( auto& p: net.params() )
  {
    for( float& v: p.values() )
    {
      const uint32_t bits = uint32_t( b[pos] ) | ( uint32_t( b[pos + 1] ) << 8 ) | ( uint32_t( b[pos + 2] ) << 16 ) |
                            ( uint32_t( b[pos + 3] ) << 24 );
      v = std::bit_cast<float>( bits );
      pos += 4;
    }
  }
  return net;
}

void saveModel( const std::filesystem::path& path, const UpsamplerNet& net )
{
  const auto    bytes = serializeModel( net );
  std::ofstream os( path, std::ios::binary );
  ARIC_CHECK( os.good(), IoError, "cannot create ", path.string() );
  os.write( reinterpret_cast<const char*>( bytes.data() ), std::streamsize( bytes.size() ) );
  ARIC_CHECK( os.good(), IoError, "write failed for ", path.string() );
}

UpsamplerNet loadModel( const std::filesystem::path& path )
{
  std::ifstream in( path, std::ios::binary );
  ARIC_CHECK( in.good(), IoError, "cannot open ", path.string() );
  std::vector<uint8_t> bytes( ( std::istreambuf_iterator<char>( in ) ), std::istreambuf_iterator<char>() );
  return deserializeModel( bytes, path.string() );
}

}   // namespace aric
