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

#include "aric/nn_ops.h"

#include <Eigen/Core>

namespace aric
{

namespace
{

template<typename T>
using MatR = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template<typename T>
using MapR = Eigen::Map<MatR<T>>;

template<typename T>
using CMapR = Eigen::Map<const MatR<T>>;

struct ConvGeom
{
  int c, h, w;        // input
  int o, kh, kw;      // kernel
  int pad, oh, ow;    // output
};

template<typename T>
ConvGeom convGeometry( const Tensor<T>& x, const Tensor<T>& w, int pad )
{
  ARIC_CHECK( x.rank() == 3 && w.rank() == 4, ArgumentError, "conv expects x (C,H,W) and w (O,C,kh,kw), got ",
              x.shapeString(), " and ", w.shapeString() );
  ARIC_CHECK( w.dim( 1 ) == x.dim( 0 ), ArgumentError, "conv input channels mismatch: x ", x.shapeString(),
              " vs w ", w.shapeString() );
  ARIC_CHECK( pad >= 0, ArgumentError, "negative conv padding" );
  ConvGeom g{ x.dim( 0 ), x.dim( 1 ), x.dim( 2 ), w.dim( 0 ), w.dim( 2 ), w.dim( 3 ), pad, 0, 0 };
  g.oh = g.h + 2 * pad - g.kh + 1;
  g.ow = g.w + 2 * pad - g.kw + 1;
  ARIC_CHECK( g.oh > 0 && g.ow > 0, ArgumentError, "conv kernel ", w.shapeString(), " larger than padded input ",
              x.shapeString() );
  return g;
}

// cols[(c*kh + ky)*kw + kx][oy*ow + ox] = x(c, oy + ky - pad, ox + kx - pad)
template<typename T>
void im2col( const T* x, const ConvGeom& g, T* cols )
{
  const size_t ohw = size_t( g.oh ) * g.ow;
  for( int c = 0; c < g.c; c++ )
  {
    for( int ky = 0; ky < g.kh; ky++ )
    {
      for( int kx = 0; kx < g.kw; kx++ )
      {
        T* dst = cols + ( size_t( c * g.kh + ky ) * g.kw + kx ) * ohw;
        for( int oy = 0; oy < g.oh; oy++ )
        {
          const int iy  = oy + ky - g.pad;
          T*        row = dst + size_t( oy ) * g.ow;
          if( iy < 0 || iy >= g.h )
          {
            std::fill( row, row + g.ow, T( 0 ) );
            continue;
          }
          const T*  src = x + ( size_t( c ) * g.h + iy ) * g.w;
          const int lo  = std::max( 0, g.pad - kx );
          const int hi  = std::min( g.ow, g.w + g.pad - kx );
          std::fill( row, row + std::min( lo, g.ow ), T( 0 ) );
          for( int ox = lo; ox < hi; ox++ )
          {
            row[ox] = src[ox + kx - g.pad];
          }
          if( hi < g.ow )
          {
            std::fill( row + std::max( hi, 0 ), row + g.ow, T( 0 ) );
          }
        }
      }
    }
  }
}

template<typename T>
void col2im( const T* cols, const ConvGeom& g, T* dx )
{
  std::fill( dx, dx + size_t( g.c ) * g.h * g.w, T( 0 ) );
  const size_t ohw = size_t( g.oh ) * g.ow;
  for( int c = 0; c < g.c; c++ )
  {
    for( int ky = 0; ky < g.kh; ky++ )
    {
      for( int kx = 0; kx < g.kw; kx++ )
      {
        const T* src = cols + ( size_t( c * g.kh + ky ) * g.kw + kx ) * ohw;
        for( int oy = 0; oy < g.oh; oy++ )
        {
          const int iy = oy + ky - g.pad;
          if( iy < 0 || iy >= g.h )
          {
            continue;
          }
          T*        dst = dx + ( size_t( c ) * g.h + iy ) * g.w;
          const T*  row = src + size_t( oy ) * g.ow;
          const int lo  = std::max( 0, g.pad - kx );
          const int hi  = std::min( g.ow, g.w + g.pad - kx );
          for( int ox = lo; ox < hi; ox++ )
          {
            dst[ox + kx - g.pad] += row[ox];
          }
        }
      }
    }
  }
}

struct DeconvGeom
{
  int c, h, w;     // input
  int o, kh, kw;   // kernel
  int cy, cx;      // crop begin
};

template<typename T>
DeconvGeom deconvGeometry( const Tensor<T>& x, const Tensor<T>& w )
{
  ARIC_CHECK( x.rank() == 3 && w.rank() == 4, ArgumentError, "deconv expects x (C,H,W) and w (C,O,kh,kw), got ",
              x.shapeString(), " and ", w.shapeString() );
  ARIC_CHECK( w.dim( 0 ) == x.dim( 0 ), ArgumentError, "deconv input channels mismatch: x ", x.shapeString(),
              " vs w ", w.shapeString() );
  ARIC_CHECK( w.dim( 2 ) >= 2 && w.dim( 3 ) >= 2, ArgumentError, "deconv kernel must be at least 2x2, got ",
              w.shapeString() );
  return { x.dim( 0 ), x.dim( 1 ), x.dim( 2 ), w.dim( 1 ), w.dim( 2 ), w.dim( 3 ), deconvCropBegin( w.dim( 2 ) ),
           deconvCropBegin( w.dim( 3 ) ) };
}

template<typename T>
void checkBias( const Tensor<T>& b, int channels )
{
  ARIC_CHECK( b.rank() == 1 && b.dim( 0 ) == channels, ArgumentError, "bias ", b.shapeString(), " does not match ",
              channels, " output channels" );
}

}   // namespace

template<typename T>
Tensor<T> convForward( const Tensor<T>& x, const Tensor<T>& w, const Tensor<T>& b, int pad )
{
  const ConvGeom g = convGeometry( x, w, pad );
  checkBias( b, g.o );
  const int    ckk = g.c * g.kh * g.kw;
  const size_t ohw = size_t( g.oh ) * g.ow;

  Tensor<T> y( { g.o, g.oh, g.ow } );
  MapR<T>   ym( y.data(), g.o, Eigen::Index( ohw ) );
  CMapR<T>  wm( w.data(), g.o, ckk );
  if( g.kh == 1 && g.kw == 1 && pad == 0 )
  {
    ym.noalias() = wm * CMapR<T>( x.data(), g.c, Eigen::Index( ohw ) );
  }
  else
  {
    AlignedVector<T> cols( size_t( ckk ) * ohw );
    im2col( x.data(), g, cols.data() );
    ym.noalias() = wm * CMapR<T>( cols.data(), ckk, Eigen::Index( ohw ) );
  }
  for( int o = 0; o < g.o; o++ )
  {
    ym.row( o ).array() += b[size_t( o )];
  }
  return y;
}

template<typename T>
void convBackward( const Tensor<T>& x, const Tensor<T>& w, int pad, const Tensor<T>& dy, Tensor<T>* dx,
                   Tensor<T>& dw, Tensor<T>& db )
{
  const ConvGeom g = convGeometry( x, w, pad );
  ARIC_CHECK( dy.rank() == 3 && dy.dim( 0 ) == g.o && dy.dim( 1 ) == g.oh && dy.dim( 2 ) == g.ow, ArgumentError,
              "conv output gradient ", dy.shapeString(), " does not match output" );
  ARIC_CHECK( dw.sameShape( w ), ArgumentError, "conv weight gradient shape ", dw.shapeString() );
  checkBias( db, g.o );

  const int    ckk = g.c * g.kh * g.kw;
  const size_t ohw = size_t( g.oh ) * g.ow;
  CMapR<T>     dym( dy.data(), g.o, Eigen::Index( ohw ) );
  CMapR<T>     wm( w.data(), g.o, ckk );
  MapR<T>      dwm( dw.data(), g.o, ckk );

  AlignedVector<T> cols( size_t( ckk ) * ohw );
  im2col( x.data(), g, cols.data() );
  CMapR<T> colm( cols.data(), ckk, Eigen::Index( ohw ) );

  dwm.noalias() += dym * colm.transpose();
  for( int o = 0; o < g.o; o++ )
  {
    db[size_t( o )] += dym.row( o ).sum();
  }

  if( dx )
  {
    MapR<T>( cols.data(), ckk, Eigen::Index( ohw ) ).noalias() = wm.transpose() * dym;
    *dx = Tensor<T>( x.shape() );
    col2im( cols.data(), g, dx->data() );
  }
}

template<typename T>
Tensor<T> deconvForward( const Tensor<T>& x, const Tensor<T>& w, const Tensor<T>& b )
{
  const DeconvGeom g = deconvGeometry( x, w );
  checkBias( b, g.o );
  const int    okk = g.o * g.kh * g.kw;
  const size_t hw  = size_t( g.h ) * g.w;
  const int    oh  = 2 * g.h;
  const int    ow  = 2 * g.w;

  AlignedVector<T> cols( size_t( okk ) * hw );
  MapR<T>( cols.data(), okk, Eigen::Index( hw ) ).noalias() =
    CMapR<T>( w.data(), g.c, okk ).transpose() * CMapR<T>( x.data(), g.c, Eigen::Index( hw ) );

  Tensor<T> y( { g.o, oh, ow } );
  for( int o = 0; o < g.o; o++ )
  {
    T* dst = y.data() + size_t( o ) * oh * ow;
    std::fill( dst, dst + size_t( oh ) * ow, b[size_t( o )] );
    for( int ky = 0; ky < g.kh; ky++ )
    {
      for( int kx = 0; kx < g.kw; kx++ )
      {
        const T* src = cols.data() + ( size_t( o * g.kh + ky ) * g.kw + kx ) * hw;
        for( int iy = 0; iy < g.h; iy++ )
        {
          const int oy = 2 * iy + ky - g.cy;
          if( oy < 0 || oy >= oh )
          {
            continue;
          }
          T*       drow = dst + size_t( oy ) * ow;
          const T* srow = src + size_t( iy ) * g.w;
          for( int ix = 0; ix < g.w; ix++ )
          {
            const int ox = 2 * ix + kx - g.cx;
            if( ox >= 0 && ox < ow )
            {
              drow[ox] += srow[ix];
            }
          }
        }
      }
    }
  }
  return y;
}

template<typename T>
void deconvBackward( const Tensor<T>& x, const Tensor<T>& w, const Tensor<T>& dy, Tensor<T>* dx, Tensor<T>& dw,
                     Tensor<T>& db )
{
  const DeconvGeom g = deconvGeometry( x, w );
  const int        oh = 2 * g.h;
  const int        ow = 2 * g.w;
  ARIC_CHECK( dy.rank() == 3 && dy.dim( 0 ) == g.o && dy.dim( 1 ) == oh && dy.dim( 2 ) == ow, ArgumentError,
              "deconv output gradient ", dy.shapeString(), " does not match output" );
  ARIC_CHECK( dw.sameShape( w ), ArgumentError, "deconv weight gradient shape ", dw.shapeString() );
  checkBias( db, g.o );

  const int    okk = g.o * g.kh * g.kw;
  const size_t hw  = size_t( g.h ) * g.w;

  // gather: dcols[(o,ky,kx)][iy,ix] = dy(o, 2iy + ky - cy, 2ix + kx - cx)
  AlignedVector<T> dcols( size_t( okk ) * hw, T( 0 ) );
  for( int o = 0; o < g.o; o++ )
  {
    const T* src = dy.data() + size_t( o ) * oh * ow;
    T        sum = 0;
    for( size_t i = 0; i < size_t( oh ) * ow; i++ )
    {
      sum += src[i];
    }
    db[size_t( o )] += sum;
    for( int ky = 0; ky < g.kh; ky++ )
    {
      for( int kx = 0; kx < g.kw; kx++ )
      {
        T* dst = dcols.data() + ( size_t( o * g.kh + ky ) * g.kw + kx ) * hw;
        for( int iy = 0; iy < g.h; iy++ )
        {
          const int oy = 2 * iy + ky - g.cy;
          if( oy < 0 || oy >= oh )
          {
            continue;
          }
          const T* srow = src + size_t( oy ) * ow;
          T*       drow = dst + size_t( iy ) * g.w;
          for( int ix = 0; ix < g.w; ix++ )
          {
            const int ox = 2 * ix + kx - g.cx;
            if( ox >= 0 && ox < ow )
            {
              drow[ix] = srow[ox];
            }
          }
        }
      }
    }
  }

  CMapR<T> dcolm( dcols.data(), okk, Eigen::Index( hw ) );
  CMapR<T> xm( x.data(), g.c, Eigen::Index( hw ) );
  MapR<T>( dw.data(), g.c, okk ).noalias() += xm * dcolm.transpose();
  if( dx )
  {
    *dx = Tensor<T>( x.shape() );
    MapR<T>( dx->data(), g.c, Eigen::Index( hw ) ).noalias() = CMapR<T>( w.data(), g.c, okk ) * dcolm;
  }
}

template<typename T>
void reluInPlace( Tensor<T>& x )
{
  for( auto& v: x.values() )
  {
    v = v > T( 0 ) ? v : T( 0 );
  }
}

template<typename T>
void reluBackward( const Tensor<T>& y, Tensor<T>& dy )
{
  ARIC_CHECK( y.sameShape( dy ), ArgumentError, "relu gradient shape ", dy.shapeString(), " vs ", y.shapeString() );
  for( size_t i = 0; i < y.size(); i++ )
  {
    if( !( y[i] > T( 0 ) ) )
    {
      dy[i] = T( 0 );
    }
  }
}

template<typename T>
Tensor<T> concatChannels( const Tensor<T>& a, const Tensor<T>& b )
{
  ARIC_CHECK( a.rank() == 3 && b.rank() == 3 && a.dim( 1 ) == b.dim( 1 ) && a.dim( 2 ) == b.dim( 2 ), ArgumentError,
              "concat of ", a.shapeString(), " and ", b.shapeString() );
  Tensor<T> out( { a.dim( 0 ) + b.dim( 0 ), a.dim( 1 ), a.dim( 2 ) } );
  std::copy( a.values().begin(), a.values().end(), out.data() );
  std::copy( b.values().begin(), b.values().end(), out.data() + a.size() );
  return out;
}

template<typename T>
std::pair<Tensor<T>, Tensor<T>> splitChannels( const Tensor<T>& d, int channelsA )
{
  ARIC_CHECK( d.rank() == 3 && channelsA >= 0 && channelsA <= d.dim( 0 ), ArgumentError, "split of ",
              d.shapeString(), " at channel ", channelsA );
  Tensor<T>    a( { channelsA, d.dim( 1 ), d.dim( 2 ) } );
  Tensor<T>    b( { d.dim( 0 ) - channelsA, d.dim( 1 ), d.dim( 2 ) } );
  std::copy( d.data(), d.data() + a.size(), a.data() );
  std::copy( d.data() + a.size(), d.data() + d.size(), b.data() );
  return { std::move( a ), std::move( b ) };
}

template<typename T>
Tensor<T> addTensors( const Tensor<T>& a, const Tensor<T>& b )
{
  ARIC_CHECK( a.sameShape( b ), ArgumentError, "add of ", a.shapeString(), " and ", b.shapeString() );
  Tensor<T> out = a;
  for( size_t i = 0; i < out.size(); i++ )
  {
    out[i] += b[i];
  }
  return out;
}

#define ARIC_INSTANTIATE_OPS( T )                                                                                    \
  template Tensor<T> convForward( const Tensor<T>&, const Tensor<T>&, const Tensor<T>&, int );                       \
  template void      convBackward( const Tensor<T>&, const Tensor<T>&, int, const Tensor<T>&, Tensor<T>*,            \
                                   Tensor<T>&, Tensor<T>& );                                                          \
  template Tensor<T> deconvForward( const Tensor<T>&, const Tensor<T>&, const Tensor<T>& );                          \
  template void      deconvBackward( const Tensor<T>&, const Tensor<T>&, const Tensor<T>&, Tensor<T>*, Tensor<T>&,  \
                                     Tensor<T>& );                                                                    \
  template void      reluInPlace( Tensor<T>& );                                                                       \
  template void      reluBackward( const Tensor<T>&, Tensor<T>& );                                                    \
  template Tensor<T> concatChannels( const Tensor<T>&, const Tensor<T>& );                                           \
  template std::pair<Tensor<T>, Tensor<T>> splitChannels( const Tensor<T>&, int );                                    \
  template Tensor<T>                       addTensors( const Tensor<T>&, const Tensor<T>& );

ARIC_INSTANTIATE_OPS( float )
ARIC_INSTANTIATE_OPS( double )

}   // namespace aric
