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

#include "aric/reports.h"

#include <cmath>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

namespace aric
{

std::string readTextFile( const std::filesystem::path& path )
{
  std::ifstream in( path, std::ios::binary );
  ARIC_CHECK( in, IoError, "cannot open '", path.string(), "'" );
  return std::string( std::istreambuf_iterator<char>( in ), std::istreambuf_iterator<char>() );
}

void writeTextFile( const std::filesystem::path& path, const std::string& text )
{
  std::ofstream out( path, std::ios::binary );
  ARIC_CHECK( out, IoError, "cannot write '", path.string(), "'" );
  out << text;
  ARIC_CHECK( out.good(), IoError, "failed writing '", path.string(), "'" );
}

namespace
{

std::vector<std::string> splitCsvLine( const std::string& line )
{
  std::vector<std::string> cells;
  std::string              cell;
  std::istringstream       in( line );
  while( std::getline( in, cell, ',' ) )
  {
    cells.push_back( cell );
  }
  if( !line.empty() && line.back() == ',' )
  {
    cells.emplace_back();
  }
  return cells;
}

/// Rows of a CSV with a header line; access by column name.
class CsvTable
{
public:
  CsvTable( const std::string& text, std::string origin ) : m_origin( std::move( origin ) )
  {
    std::istringstream in( text );
    std::string        line;
    int                lineNo = 0;
    while( std::getline( in, line ) )
    {
      lineNo++;
      if( !line.empty() && line.back() == '\r' )
      {
        line.pop_back();
      }
      if( line.empty() )
      {
        continue;
      }
      auto cells = splitCsvLine( line );
      if( m_header.empty() )
      {
        m_header = std::move( cells );
        continue;
      }
      ARIC_CHECK( cells.size() == m_header.size(), FormatError, m_origin, ":", lineNo, ": expected ",
                  m_header.size(), " fields, got ", cells.size() );
      m_rows.push_back( std::move( cells ) );
    }
    ARIC_CHECK( !m_header.empty(), FormatError, m_origin, ": missing header line" );
  }

  size_t rows() const { return m_rows.size(); }

  const std::string& cell( size_t row, const std::string& column ) const
  {
    for( size_t i = 0; i < m_header.size(); i++ )
    {
      if( m_header[i] == column )
      {
        return m_rows[row][i];
      }
    }
    throw FormatError( str( m_origin, ": missing column '", column, "'" ) );
  }
  double number( size_t row, const std::string& column ) const { return parseMetric( cell( row, column ) ); }
  long long integer( size_t row, const std::string& column ) const
  {
    const double v = number( row, column );
    ARIC_CHECK( std::isfinite( v ) && v == std::floor( v ), FormatError, m_origin, ": column '", column,
                "' row ", row + 1, " is not an integer" );
    return static_cast<long long>( v );
  }

private:
  std::string                           m_origin;
  std::vector<std::string>              m_header;
  std::vector<std::vector<std::string>> m_rows;
};

void checkName( const std::string& image )
{
  ARIC_CHECK( image.find_first_of( ",\n\r" ) == std::string::npos, ArgumentError, "image name '", image,
              "' must not contain commas or line breaks" );
}

}   // namespace

std::string rdPointsCsv( const std::vector<RdRecord>& records )
{
  std::ostringstream out;
  out << "image,qp,bits,psnr_y,psnr_cb,psnr_cr,ssim_y,p_hitting\n";
  for( const auto& r: records )
  {
    checkName( r.image );
    out << r.image << "," << r.qp << "," << formatMetric( r.point.bits, 0 ) << "," << formatMetric( r.point.psnrY )
        << "," << formatMetric( r.point.psnrCb ) << "," << formatMetric( r.point.psnrCr ) << ","
        << formatMetric( r.point.ssimY, 8 ) << "," << formatMetric( r.pHitting ) << "\n";
  }
  return out.str();
}

std::vector<RdRecord> parseRdPointsCsv( const std::string& text, const std::string& origin )
{
  const CsvTable        t( text, origin );
  std::vector<RdRecord> out;
  for( size_t i = 0; i < t.rows(); i++ )
  {
    RdRecord r;
    r.image        = t.cell( i, "image" );
    r.qp           = int( t.integer( i, "qp" ) );
    r.point.bits   = t.number( i, "bits" );
    r.point.psnrY  = t.number( i, "psnr_y" );
    r.point.psnrCb = t.number( i, "psnr_cb" );
    r.point.psnrCr = t.number( i, "psnr_cr" );
    r.point.ssimY  = t.number( i, "ssim_y" );
    r.pHitting     = t.number( i, "p_hitting" );
    out.push_back( r );
  }
  return out;
}

std::map<std::string, RdCurve> curvesByImage( const std::vector<RdRecord>& records, const std::string& label )
{
  std::map<std::string, RdCurve> curves;
  for( const auto& r: records )
  {
    auto& c = curves[r.image];
    c.label = label + ":" + r.image;
    c.points.push_back( r.point );
  }
  return curves;
}

std::string decisionsCsvHeader()
{
  return "image,qp,ctu,row,col,mode,up_y,up_cb,up_cr,bits,d_full,d_low,full_trial_bits,full_trial_dist,"
         "full_trial_cost,low_trial_bits,low_trial_dist,low_trial_dist_lr,low_trial_cost\n";
}

std::string decisionsCsvRows( const std::string& image, int qp, const std::vector<CtuDecision>& ds )
{
  checkName( image );
  std::ostringstream out;
  for( const auto& d: ds )
  {
    out << image << "," << qp << "," << d.index << "," << d.row << "," << d.col << "," << modeName( d.mode ) << ","
        << upMethodName( d.upY ) << "," << upMethodName( d.upCb ) << "," << upMethodName( d.upCr ) << "," << d.bits
        << "," << d.dFull << "," << d.dLow << "," << d.fullTrialBits << "," << d.fullTrialDist << ","
        << formatMetric( d.fullTrialCost, 3 ) << "," << d.lowTrialBits << "," << d.lowTrialDist << ","
        << d.lowTrialDistLr << "," << formatMetric( d.lowTrialCost, 3 ) << "\n";
  }
  return out.str();
}

namespace
{

CodingMode parseMode( const std::string& s, const std::string& origin )
{
  if( s == modeName( CodingMode::Full ) )
  {
    return CodingMode::Full;
  }
  ARIC_CHECK( s == modeName( CodingMode::Low ), FormatError, origin, ": unknown mode '", s, "'" );
  return CodingMode::Low;
}

UpMethod parseUp( const std::string& s, const std::string& origin )
{
  if( s == upMethodName( UpMethod::Dctif ) )
  {
    return UpMethod::Dctif;
  }
  ARIC_CHECK( s == upMethodName( UpMethod::Cnn ), FormatError, origin, ": unknown up-sampler '", s, "'" );
  return UpMethod::Cnn;
}

}   // namespace

std::vector<DecisionRecord> parseDecisionsCsv( const std::string& text, const std::string& origin )
{
  const CsvTable              t( text, origin );
  std::vector<DecisionRecord> out;
  for( size_t i = 0; i < t.rows(); i++ )
  {
    DecisionRecord r;
    r.image            = t.cell( i, "image" );
    r.qp               = int( t.integer( i, "qp" ) );
    CtuDecision& d     = r.decision;
    d.index            = int( t.integer( i, "ctu" ) );
    d.row              = int( t.integer( i, "row" ) );
    d.col              = int( t.integer( i, "col" ) );
    d.mode             = parseMode( t.cell( i, "mode" ), origin );
    d.upY              = parseUp( t.cell( i, "up_y" ), origin );
    d.upCb             = parseUp( t.cell( i, "up_cb" ), origin );
    d.upCr             = parseUp( t.cell( i, "up_cr" ), origin );
    d.bits             = size_t( t.integer( i, "bits" ) );
    d.dFull            = uint64_t( t.integer( i, "d_full" ) );
    d.dLow             = uint64_t( t.integer( i, "d_low" ) );
    d.fullTrialBits    = size_t( t.integer( i, "full_trial_bits" ) );
    d.fullTrialDist    = uint64_t( t.integer( i, "full_trial_dist" ) );
    d.fullTrialCost    = t.number( i, "full_trial_cost" );
    d.lowTrialBits     = size_t( t.integer( i, "low_trial_bits" ) );
    d.lowTrialDist     = uint64_t( t.integer( i, "low_trial_dist" ) );
    d.lowTrialDistLr   = uint64_t( t.integer( i, "low_trial_dist_lr" ) );
    d.lowTrialCost     = t.number( i, "low_trial_cost" );
    out.push_back( r );
  }
  return out;
}

std::vector<BdRow> bdRateByImage( const std::vector<RdRecord>& anchor, const std::vector<RdRecord>& test )
{
  const auto         a = curvesByImage( anchor, "anchor" );
  const auto         b = curvesByImage( test, "test" );
  std::vector<BdRow> rows;
  double             sumP = 0, sumS = 0;
  for( const auto& [image, curve]: a )
  {
    const auto it = b.find( image );
    if( it == b.end() )
    {
      continue;
    }
    BdRow r;
    r.image = image;
    r.psnrY = bdRate( curve, it->second, QualityMetric::PsnrY );
    r.ssimY = bdRate( curve, it->second, QualityMetric::SsimY );
    sumP += r.psnrY;
    sumS += r.ssimY;
    rows.push_back( r );
  }
  ARIC_CHECK( !rows.empty(), EvaluationError, "anchor and test runs share no image" );
  rows.push_back( { "mean", sumP / double( rows.size() ), sumS / double( rows.size() ) } );
  return rows;
}

std::string bdRateCsv( const std::vector<BdRow>& rows )
{
  std::ostringstream out;
  out << "image,bd_rate_psnr_y,bd_rate_ssim_y\n";
  for( const auto& r: rows )
  {
    out << r.image << "," << formatMetric( r.psnrY, 4 ) << "," << formatMetric( r.ssimY, 4 ) << "\n";
  }
  return out.str();
}

AlphaAnalysis analyseAlpha( const std::vector<DecisionRecord>& records, double binWidth, double hi )
{
  std::map<std::pair<std::string, int>, std::vector<std::pair<double, double>>> groups;
  std::vector<std::pair<double, double>>                                        all;
  for( const auto& r: records )
  {
    const auto& d = r.decision;
    if( d.lowTrialBits == 0 )
    {
      continue;
    }
    const std::pair<double, double> s{ double( d.lowTrialDistLr ), double( d.lowTrialDist ) };
    groups[{ r.image, d.index }].push_back( s );
    all.push_back( s );
  }
  ARIC_CHECK( !all.empty(), EvaluationError, "no low-resolution trials in the decision records" );

  AlphaAnalysis a;
  a.global = fitAlpha( all );
  std::vector<double> alphas;
  for( auto& [key, samples]: groups )
  {
    std::set<double> distinct;
    for( const auto& s: samples )
    {
      distinct.insert( s.first );
    }
    if( distinct.size() < 2 )
    {
      continue;
    }
    a.perCtu.push_back( { key.first, key.second, fitAlpha( samples ) } );
    alphas.push_back( a.perCtu.back().fit.alpha );
  }
  ARIC_CHECK( !alphas.empty(), EvaluationError,
              "no CTU has low-resolution trials at two or more distinct distortions; run several QPs" );
  a.hist = histogram( alphas, 0.0, hi, binWidth );
  return a;
}

std::string alphaHistogramCsv( const Histogram& h )
{
  std::ostringstream out;
  out << "bin_lo,bin_hi,count\n";
  out << "-inf," << formatMetric( h.lo, 3 ) << "," << h.below << "\n";
  for( size_t i = 0; i < h.counts.size(); i++ )
  {
    out << formatMetric( h.lo + double( i ) * h.binWidth, 3 ) << ","
        << formatMetric( h.lo + double( i + 1 ) * h.binWidth, 3 ) << "," << h.counts[i] << "\n";
  }
  out << formatMetric( h.lo + double( h.counts.size() ) * h.binWidth, 3 ) << ",inf," << h.above << "\n";
  return out.str();
}

std::string alphaFitsCsv( const AlphaAnalysis& a )
{
  std::ostringstream out;
  out << "image,ctu,alpha,beta,r2,samples\n";
  out << "all,-1," << formatMetric( a.global.alpha ) << "," << formatMetric( a.global.beta, 3 ) << ","
      << formatMetric( a.global.r2 ) << "," << a.global.samples.size() << "\n";
  for( const auto& c: a.perCtu )
  {
    out << c.image << "," << c.ctu << "," << formatMetric( c.fit.alpha ) << "," << formatMetric( c.fit.beta, 3 )
        << "," << formatMetric( c.fit.r2 ) << "," << c.fit.samples.size() << "\n";
  }
  return out.str();
}

}   // namespace aric
