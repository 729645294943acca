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

#include "aric/evaluation.h"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

namespace aric
{

double psnr( const Plane& a, const Plane& b )
{
  ARIC_CHECK( a.width() == b.width() && a.height() == b.height(), ArgumentError, "psnr of ", a.width(), "x",
              a.height(), " and ", b.width(), "x", b.height(), " planes" );
  ARIC_CHECK( !a.empty(), ArgumentError, "psnr of empty planes" );
  const uint64_t d = ssd( a, b );
  if( d == 0 )
  {
    return kInfinity;
  }
  const double mse = double( d ) / double( a.samples().size() );
  return 10.0 * std::log10( 255.0 * 255.0 / mse );
}

namespace
{

std::array<double, kSsimWindow> gaussianWindow()
{
  std::array<double, kSsimWindow> w{};
  double                          sum = 0;
  for( int i = 0; i < kSsimWindow; i++ )
  {
    const double d = i - kSsimWindow / 2;
    w[size_t( i )] = std::exp( -d * d / ( 2 * kSsimSigma * kSsimSigma ) );
    sum += w[size_t( i )];
  }
  for( auto& v: w )
  {
    v /= sum;
  }
  return w;
}

/// 'valid' separable Gaussian filtering of a row-major double image.
std::vector<double> filterValid( const std::vector<double>& img, int w, int h )
{
  static const auto   g  = gaussianWindow();
  const int            ow = w - kSsimWindow + 1, oh = h - kSsimWindow + 1;
  std::vector<double>  tmp( size_t( ow ) * h );
  for( int r = 0; r < h; r++ )
  {
    for( int c = 0; c < ow; c++ )
    {
      double acc = 0;
      for( int k = 0; k < kSsimWindow; k++ )
      {
        acc += g[size_t( k )] * img[size_t( r ) * w + c + k];
      }
      tmp[size_t( r ) * ow + c] = acc;
    }
  }
  std::vector<double> out( size_t( ow ) * oh );
  for( int r = 0; r < oh; r++ )
  {
    for( int c = 0; c < ow; c++ )
    {
      double acc = 0;
      for( int k = 0; k < kSsimWindow; k++ )
      {
        acc += g[size_t( k )] * tmp[size_t( r + k ) * ow + c];
      }
      out[size_t( r ) * ow + c] = acc;
    }
  }
  return out;
}

}   // namespace

double ssim( const Plane& a, const Plane& b )
{
  ARIC_CHECK( a.width() == b.width() && a.height() == b.height(), ArgumentError, "ssim of ", a.width(), "x",
              a.height(), " and ", b.width(), "x", b.height(), " planes" );
  ARIC_CHECK( a.width() >= kSsimWindow && a.height() >= kSsimWindow, ArgumentError, "ssim needs at least ",
              kSsimWindow, "x", kSsimWindow, " samples, got ", a.width(), "x", a.height() );
  const int    w = a.width(), h = a.height();
  const size_t n = size_t( w ) * h;
  std::vector<double> x( n ), y( n ), xx( n ), yy( n ), xy( n );
  for( size_t i = 0; i < n; i++ )
  {
    x[i]  = a.samples()[i];
    y[i]  = b.samples()[i];
    xx[i] = x[i] * x[i];
    yy[i] = y[i] * y[i];
    xy[i] = x[i] * y[i];
  }
  const auto   mx = filterValid( x, w, h ), my = filterValid( y, w, h );
  const auto   sxx = filterValid( xx, w, h ), syy = filterValid( yy, w, h ), sxy = filterValid( xy, w, h );
  const double c1 = ( kSsimK1 * 255 ) * ( kSsimK1 * 255 );
  const double c2 = ( kSsimK2 * 255 ) * ( kSsimK2 * 255 );
  double       sum = 0;
  for( size_t i = 0; i < mx.size(); i++ )
  {
    const double vx  = sxx[i] - mx[i] * mx[i];
    const double vy  = syy[i] - my[i] * my[i];
    const double cov = sxy[i] - mx[i] * my[i];
    sum += ( 2 * mx[i] * my[i] + c1 ) * ( 2 * cov + c2 ) /
           ( ( mx[i] * mx[i] + my[i] * my[i] + c1 ) * ( vx + vy + c2 ) );
  }
  return sum / double( mx.size() );
}

FrameQuality frameQuality( const Frame& original, const Frame& recon )
{
  ARIC_CHECK( original.origWidth == recon.origWidth && original.origHeight == recon.origHeight, ArgumentError,
              "quality of ", original.origWidth, "x", original.origHeight, " frame against ", recon.origWidth, "x",
              recon.origHeight, " reconstruction" );
  const Frame  a = cropToOriginal( original ), b = cropToOriginal( recon );
  FrameQuality q;
  q.psnrY  = psnr( a.y, b.y );
  q.psnrCb = psnr( a.cb, b.cb );
  q.psnrCr = psnr( a.cr, b.cr );
  q.ssimY  = ssim( a.y, b.y );
  return q;
}

namespace
{

double quality( const RdPoint& p, QualityMetric m )
{
  switch( m )
  {
  case QualityMetric::PsnrY: return p.psnrY;
  case QualityMetric::SsimY: return p.ssimY;
  case QualityMetric::PsnrCb: return p.psnrCb;
  case QualityMetric::PsnrCr: return p.psnrCr;
  }
  return p.psnrY;
}

struct LogRateFit
{
  Eigen::Vector4d coef;   // in normalised quality u = (q - centre) / scale
  double          lo = 0, hi = 0;
};

LogRateFit fitLogRate( const RdCurve& curve, QualityMetric metric, double centre, double scale )
{
  ARIC_CHECK( curve.points.size() >= 4, EvaluationError, "curve '", curve.label, "' has ", curve.points.size(),
              " points, BD-rate needs at least 4" );
  std::vector<RdPoint> pts = curve.points;
  std::sort( pts.begin(), pts.end(), []( const RdPoint& a, const RdPoint& b ) { return a.bits < b.bits; } );
  for( size_t i = 0; i < pts.size(); i++ )
  {
    ARIC_CHECK( pts[i].bits > 0 && std::isfinite( pts[i].bits ), EvaluationError, "curve '", curve.label,
                "': rate must be positive and finite" );
    ARIC_CHECK( std::isfinite( quality( pts[i], metric ) ), EvaluationError, "curve '", curve.label,
                "': quality must be finite" );
    ARIC_CHECK( i == 0 || pts[i].bits > pts[i - 1].bits, EvaluationError, "curve '", curve.label,
                "': rates must be strictly increasing" );
  }
  const int       n = int( pts.size() );
  Eigen::MatrixXd a( n, 4 );
  Eigen::VectorXd y( n );
  LogRateFit      fit;
  fit.lo = kInfinity;
  fit.hi = -kInfinity;
  for( int i = 0; i < n; i++ )
  {
    const double q = quality( pts[size_t( i )], metric );
    const double u = ( q - centre ) / scale;
    a( i, 0 )      = 1;
    a( i, 1 )      = u;
    a( i, 2 )      = u * u;
    a( i, 3 )      = u * u * u;
    y( i )         = std::log10( pts[size_t( i )].bits );
    fit.lo         = std::min( fit.lo, q );
    fit.hi         = std::max( fit.hi, q );
  }
  const auto qr = a.colPivHouseholderQr();
  ARIC_CHECK( qr.rank() == 4, EvaluationError, "curve '", curve.label,
              "': needs at least 4 distinct quality values" );
  fit.coef = qr.solve( y );
  return fit;
}

double integrate( const Eigen::Vector4d& c, double u0, double u1 )
{
  const auto prim = [&]( double u ) { return c( 0 ) * u + c( 1 ) * u * u / 2 + c( 2 ) * u * u * u / 3 + c( 3 ) * u * u * u * u / 4; };
  return prim( u1 ) - prim( u0 );
}

}   // namespace

double bdRate( const RdCurve& anchor, const RdCurve& test, QualityMetric metric )
{
  double lo = kInfinity, hi = -kInfinity;
  for( const auto* c: { &anchor, &test } )
  {
    for( const auto& p: c->points )
    {
      lo = std::min( lo, quality( p, metric ) );
      hi = std::max( hi, quality( p, metric ) );
    }
  }
  const double centre = ( lo + hi ) / 2;
  const double scale  = std::max( ( hi - lo ) / 2, 1e-12 );
  const auto   fa     = fitLogRate( anchor, metric, centre, scale );
  const auto   ft     = fitLogRate( test, metric, centre, scale );
  const double q0     = std::max( fa.lo, ft.lo );
  const double q1     = std::min( fa.hi, ft.hi );
  ARIC_CHECK( q1 > q0, EvaluationError, "curves '", anchor.label, "' and '", test.label,
              "' have no overlapping quality range" );
  const double u0   = ( q0 - centre ) / scale;
  const double u1   = ( q1 - centre ) / scale;
  const double diff = ( integrate( ft.coef, u0, u1 ) - integrate( fa.coef, u0, u1 ) ) / ( u1 - u0 );
  return ( std::pow( 10.0, diff ) - 1.0 ) * 100.0;
}

AlphaFit fitAlpha( std::vector<std::pair<double, double>> samples )
{
  ARIC_CHECK( samples.size() >= 2, EvaluationError, "alpha fit needs at least 2 samples, got ", samples.size() );
  const double n  = double( samples.size() );
  double       mx = 0, my = 0;
  for( const auto& [x, y]: samples )
  {
    ARIC_CHECK( std::isfinite( x ) && std::isfinite( y ), EvaluationError, "alpha fit: non-finite sample" );
    mx += x;
    my += y;
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for( const auto& [x, y]: samples )
  {
    sxx += ( x - mx ) * ( x - mx );
    sxy += ( x - mx ) * ( y - my );
    syy += ( y - my ) * ( y - my );
  }
  ARIC_CHECK( sxx > 0, EvaluationError, "alpha fit: all samples share d_low = ", mx );
  AlphaFit fit;
  fit.alpha = sxy / sxx;
  fit.beta  = my - fit.alpha * mx;
  double rss = 0;
  for( const auto& [x, y]: samples )
  {
    const double e = y - ( fit.alpha * x + fit.beta );
    rss += e * e;
  }
  fit.r2      = syy > 0 ? 1.0 - rss / syy : 1.0;
  fit.samples = std::move( samples );
  return fit;
}

double Histogram::peak() const
{
  ARIC_CHECK( !counts.empty(), EvaluationError, "peak of an empty histogram" );
  const auto it = std::max_element( counts.begin(), counts.end() );
  return lo + ( double( it - counts.begin() ) + 0.5 ) * binWidth;
}

Histogram histogram( const std::vector<double>& values, double lo, double hi, double binWidth )
{
  ARIC_CHECK( hi > lo && binWidth > 0, ArgumentError, "histogram range [", lo, ", ", hi, ") with bin width ",
              binWidth );
  Histogram h;
  h.lo       = lo;
  h.binWidth = binWidth;
  h.counts.assign( size_t( std::ceil( ( hi - lo ) / binWidth - 1e-9 ) ), 0 );
  for( double v: values )
  {
    if( !( v >= lo ) )
    {
      h.below++;
      continue;
    }
    const size_t bin = size_t( ( v - lo ) / binWidth );
    if( bin >= h.counts.size() )
    {
      h.above++;
    }
    else
    {
      h.counts[bin]++;
    }
  }
  return h;
}

HittingStats hittingStats( const std::vector<CtuDecision>& decisions )
{
  ARIC_CHECK( !decisions.empty(), ArgumentError, "hitting statistics of an empty decision list" );
  HittingStats s;
  s.total     = decisions.size();
  size_t y = 0, cb = 0, cr = 0;
  for( const auto& d: decisions )
  {
    if( d.mode != CodingMode::Low )
    {
      continue;
    }
    s.hitting++;
    y += d.upY == UpMethod::Cnn;
    cb += d.upCb == UpMethod::Cnn;
    cr += d.upCr == UpMethod::Cnn;
  }
  s.pHitting = double( s.hitting ) / double( s.total );
  if( s.hitting > 0 )
  {
    s.pLuma = double( y ) / double( s.hitting );
    s.pCb   = double( cb ) / double( s.hitting );
    s.pCr   = double( cr ) / double( s.hitting );
  }
  return s;
}

std::string modeMapCsv( const std::vector<CtuDecision>& decisions, int channel )
{
  ARIC_CHECK( channel >= 0 && channel < 3, ArgumentError, "channel ", channel, " out of range" );
  int rows = 0, cols = 0;
  for( const auto& d: decisions )
  {
    rows = std::max( rows, d.row + 1 );
    cols = std::max( cols, d.col + 1 );
  }
  std::vector<int> map( size_t( rows ) * cols, 0 );
  for( const auto& d: decisions )
  {
    const UpMethod m         = channel == 0 ? d.upY : ( channel == 1 ? d.upCb : d.upCr );
    map[size_t( d.row ) * cols + d.col] = d.mode == CodingMode::Full ? 0 : ( m == UpMethod::Cnn ? 2 : 1 );
  }
  std::ostringstream out;
  for( int r = 0; r < rows; r++ )
  {
    for( int c = 0; c < cols; c++ )
    {
      out << ( c ? "," : "" ) << map[size_t( r ) * cols + c];
    }
    out << '\n';
  }
  return out.str();
}

std::string formatMetric( double v, int digits )
{
  if( std::isnan( v ) )
  {
    return "nan";
  }
  if( std::isinf( v ) )
  {
    return v > 0 ? "inf" : "-inf";
  }
  char buf[64];
  std::snprintf( buf, sizeof( buf ), "%.*f", digits, v );
  return buf;
}

double parseMetric( const std::string& text )
{
  if( text == "nan" )
  {
    return kNaN;
  }
  if( text == "inf" )
  {
    return kInfinity;
  }
  if( text == "-inf" )
  {
    return -kInfinity;
  }
  size_t pos = 0;
  double v   = 0;
  try
  {
    v = std::stod( text, &pos );
  }
  catch( const std::exception& )
  {
    pos = 0;
  }
  ARIC_CHECK( pos == text.size() && pos > 0, FormatError, "invalid number '", text, "'" );
  return v;
}

}   // namespace aric
