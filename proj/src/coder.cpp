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

#include "aric/coder.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

namespace aric
{

const char* modeName( CodingMode m )
{
  return m == CodingMode::Low ? "low" : "full";
}

const char* upMethodName( UpMethod m )
{
  return m == UpMethod::Cnn ? "cnn" : "dctif";
}

// ---------------------------------------------------------------------------------------------------------------------
// models
// ---------------------------------------------------------------------------------------------------------------------

void ModelSet::validate() const
{
  ARIC_CHECK( luma.has_value(), ConfigError, "model set for qp tag ", qpTag, " has no luma model" );
  ARIC_CHECK( chroma.has_value(), ConfigError, "model set for qp tag ", qpTag, " has no chroma model" );
  ARIC_CHECK( luma->variant() == Variant::Luma && chroma->variant() == Variant::Chroma, ConfigError,
              "model set for qp tag ", qpTag, " has swapped variants" );
  ARIC_CHECK( luma->qpTag() == qpTag && chroma->qpTag() == qpTag, ConfigError, "model set tag ", qpTag,
              " does not match model tags ", luma->qpTag(), "/", chroma->qpTag() );
  ARIC_CHECK( qpTag >= 0 && qpTag < kNoModelTag, ConfigError, "model qp tag ", qpTag, " is reserved" );
}

ModelSet ModelSet::fromModels( UpsamplerNet luma, UpsamplerNet chroma )
{
  ModelSet s;
  s.qpTag = luma.qpTag();
  s.luma.emplace( std::move( luma ) );
  s.chroma.emplace( std::move( chroma ) );
  s.validate();
  return s;
}

namespace
{

struct ModelFileInfo
{
  std::filesystem::path path;
  Variant               variant;
  int                   qpTag;
};

std::vector<ModelFileInfo> scanModels( const std::filesystem::path& dir )
{
  ARIC_CHECK( std::filesystem::is_directory( dir ), ConfigError, "model directory ", dir.string(), " does not exist" );
  std::vector<std::filesystem::path> files;
  for( const auto& e: std::filesystem::directory_iterator( dir ) )
  {
    if( e.is_regular_file() && e.path().extension() == ".arun" )
    {
      files.push_back( e.path() );
    }
  }
  std::sort( files.begin(), files.end() );
  std::vector<ModelFileInfo> out;
  for( const auto& p: files )
  {
    std::ifstream in( p, std::ios::binary );
    char          head[8] = {};
    in.read( head, 8 );
    if( in.gcount() != 8 || std::string( head, 4 ) != "ARUN" || uint8_t( head[6] ) > 1 )
    {
      continue;
    }
    out.push_back( { p, Variant( uint8_t( head[6] ) ), uint8_t( head[7] ) } );
  }
  return out;
}

ModelSet loadTag( const std::vector<ModelFileInfo>& infos, int tag )
{
  ModelSet s;
  s.qpTag = tag;
  for( const auto& i: infos )
  {
    if( i.qpTag != tag )
    {
      continue;
    }
    auto& slot = i.variant == Variant::Luma ? s.luma : s.chroma;
    ARIC_CHECK( !slot, ConfigError, "more than one ", variantName( i.variant ), " model with qp tag ", tag );
    slot.emplace( loadModel( i.path ) );
  }
  s.validate();
  return s;
}

}   // namespace

std::vector<int> availableModelTags( const std::filesystem::path& dir )
{
  std::map<int, int> seen;
  for( const auto& i: scanModels( dir ) )
  {
    seen[i.qpTag] |= 1 << int( i.variant );
  }
  std::vector<int> tags;
  for( auto [tag, mask]: seen )
  {
    if( mask == 3 )
    {
      tags.push_back( tag );
    }
  }
  return tags;
}

ModelSet loadNearestModels( const std::filesystem::path& dir, int qp )
{
  const auto infos = scanModels( dir );
  const auto tags  = availableModelTags( dir );
  ARIC_CHECK( !tags.empty(), ConfigError, "no complete luma+chroma model set in ", dir.string() );
  int best = tags.front();
  for( int t: tags )
  {
    if( std::abs( t - qp ) < std::abs( best - qp ) )
    {
      best = t;
    }
  }
  return loadTag( infos, best );
}

ModelSet loadModelsForTag( const std::filesystem::path& dir, int tag )
{
  const auto tags = availableModelTags( dir );
  ARIC_CHECK( std::find( tags.begin(), tags.end(), tag ) != tags.end(), ConfigError, "no luma+chroma models with qp tag ",
              tag, " in ", dir.string() );
  return loadTag( scanModels( dir ), tag );
}

// ---------------------------------------------------------------------------------------------------------------------
// context tiles and up-sampling
// ---------------------------------------------------------------------------------------------------------------------

std::array<bool, 4> contextAvailability( const CtuGrid& grid, int row, int col, UpStage stage )
{
  ARIC_CHECK( row >= 0 && row < grid.rows && col >= 0 && col < grid.cols, ArgumentError, "CTU (", row, ",", col,
              ") outside the ", grid.cols, "x", grid.rows, " grid" );
  if( stage == UpStage::Stage2 )
  {
    return { true, true, true, true };
  }
  std::array<bool, 4> a{};
  a[kTop]    = true;
  a[kLeft]   = true;
  a[kBottom] = row == grid.rows - 1;
  a[kRight]  = col == grid.cols - 1;
  return a;
}

Plane buildContextTile( const Plane& ref, const Plane& core, int x, int y, int C, const std::array<bool, 4>& avail )
{
  const int cw = core.width();
  const int ch = core.height();
  ARIC_CHECK( x >= 0 && y >= 0 && x + cw <= ref.width() && y + ch <= ref.height(), ArgumentError, "core at (", x, ",",
              y, ") does not fit the ", ref.width(), "x", ref.height(), " reference" );
  Plane tile( cw + 2 * C, ch + 2 * C, 0 );
  for( int ty = 0; ty < tile.height(); ty++ )
  {
    const int vband = ty < C ? -1 : ( ty >= C + ch ? 1 : 0 );
    for( int tx = 0; tx < tile.width(); tx++ )
    {
      const int hband = tx < C ? -1 : ( tx >= C + cw ? 1 : 0 );
      const bool okV  = vband == 0 || avail[vband < 0 ? kTop : kBottom];
      const bool okH  = hband == 0 || avail[hband < 0 ? kLeft : kRight];
      if( !okV || !okH )
      {
        continue;
      }
      const int fy = std::clamp( y - C + ty, 0, ref.height() - 1 );
      const int fx = std::clamp( x - C + tx, 0, ref.width() - 1 );
      if( fy >= y && fy < y + ch && fx >= x && fx < x + cw )
      {
        tile.at( ty, tx ) = core.at( fy - y, fx - x );
      }
      else
      {
        tile.at( ty, tx ) = ref.at( fy, fx );
      }
    }
  }
  return tile;
}

namespace
{

Tensor<float> planesToTensor( std::initializer_list<const Plane*> planes )
{
  const Plane&  p0 = **planes.begin();
  Tensor<float> t( { int( planes.size() ), p0.height(), p0.width() } );
  int           c = 0;
  for( const Plane* p: planes )
  {
    for( int r = 0; r < p->height(); r++ )
    {
      for( int q = 0; q < p->width(); q++ )
      {
        t.at( c, r, q ) = float( p->at( r, q ) ) / 255.0f;
      }
    }
    c++;
  }
  return t;
}

struct LrTiles
{
  Plane y, cb, cr;   // kContext around each core
};

LrTiles buildTiles( const Frame& lrRef, const std::array<Plane, 3>& core, int row, int col,
                    const std::array<bool, 4>& avail )
{
  const int lx = col * kCtuSize / 2, ly = row * kCtuSize / 2;
  const int cx = col * kChromaCtuSize / 2, cy = row * kChromaCtuSize / 2;
  return { buildContextTile( lrRef.y, core[0], lx, ly, kContext, avail ),
           buildContextTile( lrRef.cb, core[1], cx, cy, kContext, avail ),
           buildContextTile( lrRef.cr, core[2], cx, cy, kContext, avail ) };
}

void checkCore( const Frame& lrRef, const std::array<Plane, 3>& core, const CtuGrid& grid )
{
  ARIC_CHECK( core[0].width() == kCtuSize / 2 && core[0].height() == kCtuSize / 2 &&
                core[1].width() == kChromaCtuSize / 2 && core[1].height() == kChromaCtuSize / 2 &&
                core[2].width() == kChromaCtuSize / 2 && core[2].height() == kChromaCtuSize / 2,
              ArgumentError, "LR CTU planes must be 32x32 / 16x16 / 16x16" );
  ARIC_CHECK( lrRef.y.width() == grid.cols * kCtuSize / 2 && lrRef.y.height() == grid.rows * kCtuSize / 2,
              ArgumentError, "LR reference does not match the CTU grid" );
}

}   // namespace

CtuNetInputs buildNetInputs( const Frame& lrRef, const std::array<Plane, 3>& core, const CtuGrid& grid, int row,
                             int col, UpStage stage )
{
  const auto avail = contextAvailability( grid, row, col, stage );
  checkCore( lrRef, core, grid );
  const LrTiles tiles = buildTiles( lrRef, core, row, col, avail );
  const Plane   lumaWide =
    buildContextTile( lrRef.y, core[0], col * kCtuSize / 2, row * kCtuSize / 2, kChromaLumaContext, avail );
  const Plane yds = downsample2x( lumaWide );

  const Plane upY  = upsampleDctifTile( tiles.y, FilterKind::Luma );
  const Plane upCb = upsampleDctifTile( tiles.cb, FilterKind::Chroma );
  const Plane upCr = upsampleDctifTile( tiles.cr, FilterKind::Chroma );

  CtuNetInputs in;
  in.lumaX       = planesToTensor( { &tiles.y } );
  in.lumaDctif   = planesToTensor( { &upY } );
  in.chromaX     = planesToTensor( { &yds, &tiles.cb, &tiles.cr } );
  in.chromaDctif = planesToTensor( { &upCb, &upCr } );
  return in;
}

Plane netOutputToPlane( const Tensor<float>& out, int channel, int offset, int size )
{
  Plane p( size, size );
  for( int r = 0; r < size; r++ )
  {
    for( int c = 0; c < size; c++ )
    {
      float v = out.at( channel, offset + r, offset + c );
      if( !std::isfinite( v ) )
      {
        v = v > 0 ? 1.0f : 0.0f;
      }
      const double s = std::clamp( 255.0 * double( v ), -1.0, 256.0 );
      p.at( r, c )   = clipPel( int( std::lround( s ) ) );
    }
  }
  return p;
}

UpsampleCandidates upsampleCtu( const Frame& lrRef, const std::array<Plane, 3>& core, const CtuGrid& grid, int row,
                                int col, UpStage stage, const ModelSet* models, bool cnnLuma, bool cnnChroma )
{
  const auto avail = contextAvailability( grid, row, col, stage );
  checkCore( lrRef, core, grid );
  const LrTiles tiles = buildTiles( lrRef, core, row, col, avail );

  const int          hrOff = 2 * kContext;
  UpsampleCandidates out;
  out.dctif[0] = upsampleDctifTile( tiles.y, FilterKind::Luma ).crop( hrOff, hrOff, kCtuSize, kCtuSize );
  out.dctif[1] = upsampleDctifTile( tiles.cb, FilterKind::Chroma ).crop( hrOff, hrOff, kChromaCtuSize, kChromaCtuSize );
  out.dctif[2] = upsampleDctifTile( tiles.cr, FilterKind::Chroma ).crop( hrOff, hrOff, kChromaCtuSize, kChromaCtuSize );

  if( models && ( cnnLuma || cnnChroma ) )
  {
    models->validate();
    const CtuNetInputs in = buildNetInputs( lrRef, core, grid, row, col, stage );
    CtuPlanes          cnn = out.dctif;
    if( cnnLuma )
    {
      cnn[0] = netOutputToPlane( models->luma->forward( in.lumaX, in.lumaDctif ), 0, hrOff, kCtuSize );
    }
    if( cnnChroma )
    {
      const auto o = models->chroma->forward( in.chromaX, in.chromaDctif );
      cnn[1]       = netOutputToPlane( o, 0, hrOff, kChromaCtuSize );
      cnn[2]       = netOutputToPlane( o, 1, hrOff, kChromaCtuSize );
    }
    out.cnn = std::move( cnn );
  }
  return out;
}

// ---------------------------------------------------------------------------------------------------------------------
// encoder
// ---------------------------------------------------------------------------------------------------------------------

namespace
{

int compSize( int comp, bool low )
{
  const int s = comp == 0 ? kCtuSize : kChromaCtuSize;
  return low ? s / 2 : s;
}

void checkFrame( const Frame& f )
{
  ARIC_CHECK( f.width > 0 && f.height > 0 && f.width % kCtuSize == 0 && f.height % kCtuSize == 0, ArgumentError,
              "coding frame must be padded to a multiple of ", kCtuSize, ", got ", f.width, "x", f.height );
  ARIC_CHECK( f.y.width() == f.width && f.y.height() == f.height && f.cb.width() == f.width / 2 &&
                f.cb.height() == f.height / 2 && f.cr.width() == f.width / 2 && f.cr.height() == f.height / 2,
              ArgumentError, "frame planes do not match ", f.width, "x", f.height, " 4:2:0" );
  ARIC_CHECK( f.origWidth > 0 && f.origHeight > 0 && f.origWidth <= f.width && f.origHeight <= f.height &&
                f.origWidth % 2 == 0 && f.origHeight % 2 == 0 && f.origWidth <= 65535 && f.origHeight <= 65535,
              ArgumentError, "invalid original size ", f.origWidth, "x", f.origHeight );
}

Frame blankFrame( int w, int h, int ow, int oh )
{
  Frame f;
  f.width      = w;
  f.height     = h;
  f.origWidth  = ow;
  f.origHeight = oh;
  f.y          = Plane( w, h );
  f.cb         = Plane( w / 2, h / 2 );
  f.cr         = Plane( w / 2, h / 2 );
  return f;
}

void putLe16( std::vector<uint8_t>& out, int v )
{
  out.push_back( uint8_t( v & 0xff ) );
  out.push_back( uint8_t( ( v >> 8 ) & 0xff ) );
}

struct FullTrial
{
  std::array<CodedBlock, 3> coded;
  size_t                    bits = 0;
  uint64_t                  dist = 0;
};

struct LowTrial
{
  std::array<CodedBlock, 3> coded;
  std::array<UpMethod, 3>   up{};
  CtuPlanes                 hr;
  std::array<uint64_t, 3>   dctifDist{};
  std::array<uint64_t, 3>   cnnDist{};
  bool                      cnnTried = false;
  size_t                    bits     = 0;
  uint64_t                  dist     = 0;
  uint64_t                  distLr   = 0;
};

/// Writes the three planes of a CTU into a frame (HR when !low, LR when low).
void writePlanes( Frame& f, int row, int col, bool low, const std::array<const Plane*, 3>& planes )
{
  for( int c = 0; c < 3; c++ )
  {
    const int s = compSize( c, low );
    f.plane( c ).paste( *planes[size_t( c )], col * s, row * s );
  }
}

/// LR reference of a full-resolution CTU: each reconstructed plane down-sampled on its own.
void writeFullLrReference( Frame& lrRef, const Frame& recon, int row, int col )
{
  for( int c = 0; c < 3; c++ )
  {
    const int s = compSize( c, false );
    lrRef.plane( c ).paste( downsample2x( recon.plane( c ).crop( col * s, row * s, s, s ) ), col * s / 2, row * s / 2 );
  }
}

void stage2Refine( Frame& recon, const Frame& lrRef, const std::vector<CtuDecision>& decisions, const CtuGrid& grid,
                   const ModelSet* models, int threads )
{
  std::vector<int> low;
  for( const auto& d: decisions )
  {
    if( d.mode == CodingMode::Low )
    {
      low.push_back( d.index );
    }
  }
  parallelFor( int( low.size() ), threads,
               [&]( int i )
               {
                 const CtuDecision&   d = decisions[size_t( low[size_t( i )] )];
                 std::array<Plane, 3> core;
                 for( int c = 0; c < 3; c++ )
                 {
                   const int s = compSize( c, true );
                   core[size_t( c )] = lrRef.plane( c ).crop( d.col * s, d.row * s, s, s );
                 }
                 const bool cnnY = d.upY == UpMethod::Cnn;
                 const bool cnnC = d.upCb == UpMethod::Cnn || d.upCr == UpMethod::Cnn;
                 const auto cand =
                   upsampleCtu( lrRef, core, grid, d.row, d.col, UpStage::Stage2, ( cnnY || cnnC ) ? models : nullptr,
                                cnnY, cnnC );
                 const std::array<UpMethod, 3> up = { d.upY, d.upCb, d.upCr };
                 std::array<const Plane*, 3>   out{};
                 for( int c = 0; c < 3; c++ )
                 {
                   out[size_t( c )] = up[size_t( c )] == UpMethod::Cnn ? &( *cand.cnn )[size_t( c )]
                                                                       : &cand.dctif[size_t( c )];
                 }
                 // disjoint HR regions per CTU
                 writePlanes( recon, d.row, d.col, false, out );
               } );
}

}   // namespace

EncodeResult encodeFrame( const Frame& f, int qp, const ModelSet* models, const EncoderOptions& opts )
{
  checkFrame( f );
  ARIC_CHECK( qp >= kMinFrameQp && qp <= kMaxFrameQp, ArgumentError, "frame qp ", qp, " outside [", kMinFrameQp, ",",
              kMaxFrameQp, "]" );
  ARIC_CHECK( opts.lambdaC > 0 && std::isfinite( opts.lambdaC ), ArgumentError, "lambda constant must be > 0" );
  if( models )
  {
    models->validate();
  }
  ARIC_CHECK( opts.forceUp != ForceUp::Cnn || models, ConfigError,
              "CNN up-sampling was forced but no luma+chroma models were supplied" );

  const CtuGrid grid    = CtuGrid::of( f );
  const int     qpLow   = qp - kLowQpOffset;
  const double  lambda  = lambdaFromQp( qp, opts.lambdaC );
  const double  lamLow  = lambda * kLowLambdaScale;
  const int     threads = resolveThreads( opts.threads );
  const bool    useCnn  = models && opts.forceUp != ForceUp::Dctif;

  const Frame lrOrig = downsampleFrame( f );

  EncodeResult res;
  res.qp       = qp;
  res.modelTag = models ? models->qpTag : kNoModelTag;
  res.recon    = blankFrame( f.width, f.height, f.origWidth, f.origHeight );
  Frame& recon = res.recon;
  Frame  lrRef = blankFrame( f.width / 2, f.height / 2, f.origWidth / 2, f.origHeight / 2 );

  BitWriter payload;
  for( int row = 0; row < grid.rows; row++ )
  {
    for( int col = 0; col < grid.cols; col++ )
    {
      CtuDecision d;
      d.index = row * grid.cols + col;
      d.row   = row;
      d.col   = col;

      const bool runFull = opts.forceMode != ForceMode::Low;
      const bool runLow  = opts.forceMode != ForceMode::Full;
      FullTrial  full;
      LowTrial   low;

      auto doFull = [&]()
      {
        for( int c = 0; c < 3; c++ )
        {
          const int s = compSize( c, false );
          const int x = col * s, y = row * s;
          full.coded[size_t( c )] = encodePlaneIntra( f.plane( c ).crop( x, y, s, s ), qp, lambda,
                                                      PlaneBorder::around( recon.plane( c ), x, y, s, s ) );
          full.bits += full.coded[size_t( c )].bits;
          full.dist += full.coded[size_t( c )].distortion;
        }
        full.bits += 1;
      };

      auto doLow = [&]()
      {
        std::array<Plane, 3> core;
        for( int c = 0; c < 3; c++ )
        {
          const int s = compSize( c, true );
          const int x = col * s, y = row * s;
          low.coded[size_t( c )] = encodePlaneIntra( lrOrig.plane( c ).crop( x, y, s, s ), qpLow, lamLow,
                                                     PlaneBorder::around( lrRef.plane( c ), x, y, s, s ) );
          low.bits += low.coded[size_t( c )].bits;
          low.distLr += low.coded[size_t( c )].distortion;
          core[size_t( c )] = low.coded[size_t( c )].recon;
        }
        low.bits += 4;

        const auto cand =
          upsampleCtu( lrRef, core, grid, row, col, UpStage::Stage1, useCnn ? models : nullptr, useCnn, useCnn );
        low.cnnTried = cand.cnn.has_value();
        for( int c = 0; c < 3; c++ )
        {
          const int   s    = compSize( c, false );
          const Plane orig = f.plane( c ).crop( col * s, row * s, s, s );
          const auto  cu   = size_t( c );
          low.dctifDist[cu] = ssd( cand.dctif[cu], orig );
          UpMethod pick     = UpMethod::Dctif;
          if( cand.cnn )
          {
            low.cnnDist[cu] = ssd( ( *cand.cnn )[cu], orig );
            if( opts.forceUp == ForceUp::Cnn || ( opts.forceUp == ForceUp::Auto && low.cnnDist[cu] < low.dctifDist[cu] ) )
            {
              pick = UpMethod::Cnn;
            }
          }
          low.up[cu] = pick;
          low.hr[cu] = pick == UpMethod::Cnn ? ( *cand.cnn )[cu] : cand.dctif[cu];
          low.dist += pick == UpMethod::Cnn ? low.cnnDist[cu] : low.dctifDist[cu];
        }
      };

      if( runFull && runLow && threads > 1 )
      {
        parallelFor( 2, 2, [&]( int i ) { i == 0 ? doFull() : doLow(); } );
      }
      else
      {
        if( runFull )
        {
          doFull();
        }
        if( runLow )
        {
          doLow();
        }
      }

      if( runFull )
      {
        d.fullTrialBits = full.bits;
        d.fullTrialDist = full.dist;
        d.fullTrialCost = double( full.dist ) + lambda * double( full.bits );
      }
      if( runLow )
      {
        d.lowTrialBits   = low.bits;
        d.lowTrialDist   = low.dist;
        d.lowTrialDistLr = low.distLr;
        d.lowTrialCost   = double( low.dist ) + lambda * double( low.bits );
        d.dctifDist      = low.dctifDist;
        d.cnnDist        = low.cnnDist;
        d.cnnTried       = low.cnnTried;
      }

      const bool chooseLow = !runFull || ( runLow && d.lowTrialCost < d.fullTrialCost );
      BitWriter  ctuBits;
      if( chooseLow )
      {
        d.mode  = CodingMode::Low;
        d.upY   = low.up[0];
        d.upCb  = low.up[1];
        d.upCr  = low.up[2];
        d.bits  = low.bits;
        d.dFull = low.dist;
        d.dLow  = low.distLr;
        ctuBits.putBit( true );
        for( auto u: low.up )
        {
          ctuBits.putBit( u == UpMethod::Cnn );
        }
        for( const auto& cb: low.coded )
        {
          ctuBits.append( cb.payload );
        }
        writePlanes( recon, row, col, false, { &low.hr[0], &low.hr[1], &low.hr[2] } );
        writePlanes( lrRef, row, col, true, { &low.coded[0].recon, &low.coded[1].recon, &low.coded[2].recon } );
      }
      else
      {
        d.mode  = CodingMode::Full;
        d.bits  = full.bits;
        d.dFull = full.dist;
        ctuBits.putBit( false );
        for( const auto& cb: full.coded )
        {
          ctuBits.append( cb.payload );
        }
        writePlanes( recon, row, col, false, { &full.coded[0].recon, &full.coded[1].recon, &full.coded[2].recon } );
        writeFullLrReference( lrRef, recon, row, col );
      }
      ARIC_CHECK( ctuBits.bitCount() == d.bits, ArgumentError, "internal bit accounting mismatch at CTU ", d.index );
      payload.append( ctuBits );
      res.decisions.push_back( d );
    }
  }

  res.stage1Recon = recon;
  if( opts.stage2 )
  {
    stage2Refine( recon, lrRef, res.decisions, grid, models, threads );
  }
  res.lrReference = std::move( lrRef );

  payload.alignZero();
  auto& bs = res.bitstream;
  bs       = { 'A', 'R', 'I', 'C' };
  putLe16( bs, kBitstreamVersion );
  putLe16( bs, f.origWidth );
  putLe16( bs, f.origHeight );
  bs.push_back( uint8_t( qp ) );
  bs.push_back( uint8_t( res.modelTag ) );
  bs.push_back( uint8_t( opts.stage2 ? 1 : 0 ) );
  bs.insert( bs.end(), payload.bytes().begin(), payload.bytes().end() );
  return res;
}

// ---------------------------------------------------------------------------------------------------------------------
// decoder
// ---------------------------------------------------------------------------------------------------------------------

BitstreamHeader parseHeader( std::span<const uint8_t> b )
{
  ARIC_CHECK( b.size() >= kHeaderBytes, BitstreamError, "bitstream shorter than its ", kHeaderBytes, "-byte header (",
              b.size(), " bytes)" );
  ARIC_CHECK( b[0] == 'A' && b[1] == 'R' && b[2] == 'I' && b[3] == 'C', BitstreamError, "bad bitstream magic" );
  BitstreamHeader h;
  h.version = uint16_t( b[4] | ( b[5] << 8 ) );
  ARIC_CHECK( h.version == kBitstreamVersion, BitstreamError, "unsupported bitstream version ", h.version );
  h.width    = b[6] | ( b[7] << 8 );
  h.height   = b[8] | ( b[9] << 8 );
  h.qp       = b[10];
  h.modelTag = b[11];
  ARIC_CHECK( h.width > 0 && h.height > 0 && h.width % 2 == 0 && h.height % 2 == 0, BitstreamError,
              "invalid frame size ", h.width, "x", h.height, " in header" );
  ARIC_CHECK( h.qp >= kMinFrameQp && h.qp <= kMaxFrameQp, BitstreamError, "invalid qp ", h.qp, " in header" );
  ARIC_CHECK( ( b[12] & ~1u ) == 0, BitstreamError, "unknown header flags 0x", std::hex, int( b[12] ) );
  h.stage2 = b[12] & 1u;
  return h;
}

DecodeResult decodeFrame( std::span<const uint8_t> bytes, const ModelSet* models, int threads )
{
  DecodeResult res;
  res.header           = parseHeader( bytes );
  const auto& h        = res.header;
  const int   padW     = ( h.width + kCtuSize - 1 ) / kCtuSize * kCtuSize;
  const int   padH     = ( h.height + kCtuSize - 1 ) / kCtuSize * kCtuSize;
  const CtuGrid grid   = CtuGrid::of( padW, padH );
  const int     qpLow  = h.qp - kLowQpOffset;
  threads              = resolveThreads( threads );

  const ModelSet* usable = nullptr;
  auto            needModels = [&]( int ctu ) -> const ModelSet*
  {
    ARIC_CHECK( h.modelTag != kNoModelTag, BitstreamError, "CTU ", ctu,
                ": CNN up-sampling signalled but the header names no model" );
    ARIC_CHECK( models, ConfigError, "bitstream needs models with qp tag ", h.modelTag, " but none were given" );
    ARIC_CHECK( models->qpTag == h.modelTag, ConfigError, "bitstream needs models with qp tag ", h.modelTag,
                ", got qp tag ", models->qpTag );
    models->validate();
    return models;
  };

  res.recon  = blankFrame( padW, padH, h.width, h.height );
  Frame& rec = res.recon;
  Frame  lrRef = blankFrame( padW / 2, padH / 2, h.width / 2, h.height / 2 );

  const auto payload = bytes.subspan( kHeaderBytes );
  BitReader  reader( payload );
  for( int row = 0; row < grid.rows; row++ )
  {
    for( int col = 0; col < grid.cols; col++ )
    {
      CtuDecision d;
      d.index            = row * grid.cols + col;
      d.row              = row;
      d.col              = col;
      const size_t start = reader.position();
      try
      {
        d.mode = reader.getBit() ? CodingMode::Low : CodingMode::Full;
        if( d.mode == CodingMode::Low )
        {
          d.upY  = reader.getBit() ? UpMethod::Cnn : UpMethod::Dctif;
          d.upCb = reader.getBit() ? UpMethod::Cnn : UpMethod::Dctif;
          d.upCr = reader.getBit() ? UpMethod::Cnn : UpMethod::Dctif;
          std::array<Plane, 3> core;
          for( int c = 0; c < 3; c++ )
          {
            const int s = compSize( c, true );
            core[size_t( c )] = decodePlaneIntra( reader, s, s, qpLow,
                                                  PlaneBorder::around( lrRef.plane( c ), col * s, row * s, s, s ) );
          }
          const bool cnnY = d.upY == UpMethod::Cnn;
          const bool cnnC = d.upCb == UpMethod::Cnn || d.upCr == UpMethod::Cnn;
          if( ( cnnY || cnnC ) && !usable )
          {
            usable = needModels( d.index );
          }
          const auto cand = upsampleCtu( lrRef, core, grid, row, col, UpStage::Stage1, ( cnnY || cnnC ) ? usable : nullptr,
                                         cnnY, cnnC );
          const std::array<UpMethod, 3> up = { d.upY, d.upCb, d.upCr };
          std::array<const Plane*, 3>   hr{};
          for( int c = 0; c < 3; c++ )
          {
            hr[size_t( c )] =
              up[size_t( c )] == UpMethod::Cnn ? &( *cand.cnn )[size_t( c )] : &cand.dctif[size_t( c )];
          }
          writePlanes( rec, row, col, false, hr );
          writePlanes( lrRef, row, col, true, { &core[0], &core[1], &core[2] } );
        }
        else
        {
          std::array<Plane, 3> blocks;
          for( int c = 0; c < 3; c++ )
          {
            const int s = compSize( c, false );
            blocks[size_t( c )] = decodePlaneIntra( reader, s, s, h.qp,
                                                    PlaneBorder::around( rec.plane( c ), col * s, row * s, s, s ) );
          }
          writePlanes( rec, row, col, false, { &blocks[0], &blocks[1], &blocks[2] } );
          writeFullLrReference( lrRef, rec, row, col );
        }
      }
      catch( const BitstreamError& e )
      {
        throw BitstreamError( str( "CTU ", d.index, " (row ", row, ", col ", col, "): ", e.what() ) );
      }
      d.bits = reader.position() - start;
      res.decisions.push_back( d );
    }
  }

  const size_t used = ( reader.position() + 7 ) / 8;
  ARIC_CHECK( used == payload.size(), BitstreamError, payload.size() - used, " trailing bytes after the last CTU (",
              grid.count(), " CTUs)" );
  while( reader.remaining() )
  {
    ARIC_CHECK( !reader.getBit(), BitstreamError, "non-zero padding bits after the last CTU" );
  }

  if( h.stage2 )
  {
    bool anyCnn = false;
    for( const auto& d: res.decisions )
    {
      anyCnn |= d.mode == CodingMode::Low &&
                ( d.upY == UpMethod::Cnn || d.upCb == UpMethod::Cnn || d.upCr == UpMethod::Cnn );
    }
    stage2Refine( rec, lrRef, res.decisions, grid, anyCnn ? usable : nullptr, threads );
  }
  return res;
}

}   // namespace aric
