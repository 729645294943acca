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

#include "aric/image_io.h"
#include "aric/training.h"
#include "fixtures.h"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace aric;
namespace fs = std::filesystem;

namespace
{

class TempDir
{
public:
  explicit TempDir( const std::string& name ) : m_path( fs::temp_directory_path() / name )
  {
    fs::remove_all( m_path );
    fs::create_directories( m_path );
  }
  ~TempDir() { fs::remove_all( m_path ); }
  const fs::path& path() const { return m_path; }

private:
  fs::path m_path;
};

void writePpm( const fs::path& p, int w, int h, uint64_t seed )
{
  // RGB content whose luma follows the synthetic fixture
  const Frame   f = fixture::syntheticFrame( w, h, seed );
  std::ofstream out( p, std::ios::binary );
  out << "P6\n" << w << " " << h << "\n255\n";
  for( int r = 0; r < h; r++ )
  {
    for( int c = 0; c < w; c++ )
    {
      const uint8_t y = f.y.at( r, c );
      const char    px[3] = { char( y ), char( 255 - y / 2 ), char( f.cb.at( r / 2, c / 2 ) ) };
      out.write( px, 3 );
    }
  }
}

Plane tensorChannel( const Tensor<float>& t, int ch, int off, int size )
{
  Plane p( size, size );
  for( int r = 0; r < size; r++ )
  {
    for( int c = 0; c < size; c++ )
    {
      p.at( r, c ) = uint8_t( std::lround( t.at( ch, off + r, off + c ) * 255.0f ) );
    }
  }
  return p;
}

/// Low-resolution reconstruction rebuilt from the down-sampler and the intra codec alone.
Frame recomposeLowRes( const Frame& f, int qp )
{
  const Frame lr  = downsampleFrame( f );
  Frame       rec = lr;
  const auto  g   = CtuGrid::of( f );
  for( int row = 0; row < g.rows; row++ )
  {
    for( int col = 0; col < g.cols; col++ )
    {
      for( int c = 0; c < 3; c++ )
      {
        const int  s     = c == 0 ? 32 : 16;
        const auto coded = encodePlaneIntra( lr.plane( c ).crop( col * s, row * s, s, s ), qp - 6,
                                             lambdaFromQp( qp ) / 4,
                                             PlaneBorder::around( rec.plane( c ), col * s, row * s, s, s ) );
        rec.plane( c ).paste( coded.recon, col * s, row * s );
      }
    }
  }
  return rec;
}

std::vector<TrainingPair> pairsOf( const std::vector<Frame>& frames, Variant v, int qp, uint64_t seed )
{
  PairSet     set;
  PairOptions o;
  o.qp   = qp;
  o.seed = seed;
  for( size_t i = 0; i < frames.size(); i++ )
  {
    appendFramePairs( frames[i], int( i ), o, set );
  }
  return v == Variant::Luma ? set.luma : set.chroma;
}

}   // namespace

TEST_CASE( "image loading: colour conversion, 4:2:0 averaging, odd sizes, errors" )
{
  CHECK( rgbToYcc( 255, 255, 255 ).y == 255 );
  CHECK( rgbToYcc( 255, 255, 255 ).cb == 128 );
  CHECK( rgbToYcc( 0, 0, 0 ).cr == 128 );
  CHECK( rgbToYcc( 255, 0, 0 ).y == 76 );
  CHECK( rgbToYcc( 255, 0, 0 ).cb == 85 );
  CHECK( rgbToYcc( 255, 0, 0 ).cr == 255 );
  CHECK( rgbToYcc( 0, 0, 255 ).cb == 255 );

  TempDir dir( "aric_image_io_test" );
  {
    std::ofstream out( dir.path() / "a.ppm", std::ios::binary );
    out << "P6\n# comment\n3 3\n255\n";
    for( int i = 0; i < 9; i++ )
    {
      const char px[3] = { char( i < 4 ? 255 : 0 ), 0, char( i * 20 ) };
      out.write( px, 3 );
    }
  }
  const Frame f = loadImage( dir.path() / "a.ppm" );
  CHECK( f.origWidth == 2 );
  CHECK( f.origHeight == 2 );
  CHECK( f.width == 64 );
  // pixels (0,0),(0,1),(1,0),(1,1) = raster 0,1,3,4
  int cr = 0;
  for( int i: { 0, 1, 3, 4 } )
  {
    cr += rgbToYcc( uint8_t( i < 4 ? 255 : 0 ), 0, uint8_t( i * 20 ) ).cr;
  }
  CHECK( f.cr.at( 0, 0 ) == ( cr + 2 ) / 4 );
  CHECK( f.y.at( 1, 1 ) == rgbToYcc( 0, 0, 80 ).y );

  {
    std::ofstream out( dir.path() / "g.pgm", std::ios::binary );
    out << "P5 4 2 255\n";
    out.write( "\x10\x20\x30\x40\x50\x60\x70\x80", 8 );
  }
  const Frame g = loadImage( dir.path() / "g.pgm" );
  CHECK( g.y.at( 1, 3 ) == 0x80 );
  CHECK( g.cb.at( 0, 1 ) == 128 );

  {
    std::ofstream( dir.path() / "p3.ppm" ) << "P3\n2 2\n255\n0 0 0\n";
    std::ofstream( dir.path() / "deep.ppm" ) << "P6\n2 2\n65535\n";
    std::ofstream( dir.path() / "short.ppm" ) << "P6\n4 4\n255\nabc";
  }
  CHECK_THROWS_WITH_AS( loadImage( dir.path() / "p3.ppm" ), doctest::Contains( "P3" ), FormatError );
  CHECK_THROWS_WITH_AS( loadImage( dir.path() / "deep.ppm" ), doctest::Contains( "65535" ), FormatError );
  CHECK_THROWS_WITH_AS( loadImage( dir.path() / "short.ppm" ), doctest::Contains( "48 bytes" ), FormatError );
  CHECK_THROWS_AS( loadImage( dir.path() / "missing.ppm" ), IoError );
  CHECK_THROWS_AS( loadInputFrame( dir.path() / "x.yuv", "" ), ArgumentError );
}

TEST_CASE( "pairs: a 128x128 image gives four luma and four chroma pairs with the declared shapes" )
{
  PairSet     set;
  PairOptions o;
  appendFramePairs( fixture::syntheticFrame( 128, 128, 1 ), 0, o, set );
  REQUIRE( set.luma.size() == 4 );
  REQUIRE( set.chroma.size() == 4 );
  for( int i = 0; i < 4; i++ )
  {
    const auto& l = set.luma[size_t( i )];
    const auto& c = set.chroma[size_t( i )];
    CHECK( l.ctu == i );
    CHECK( l.x.shape() == std::vector<int>{ 1, 48, 48 } );
    CHECK( l.dctifUp.shape() == std::vector<int>{ 1, 96, 96 } );
    CHECK( l.y.shape() == std::vector<int>{ 1, 64, 64 } );
    CHECK( c.x.shape() == std::vector<int>{ 3, 32, 32 } );
    CHECK( c.dctifUp.shape() == std::vector<int>{ 2, 64, 64 } );
    CHECK( c.y.shape() == std::vector<int>{ 2, 32, 32 } );
    CHECK( l.y.dim( 1 ) == 2 * ( l.x.dim( 1 ) - 2 * kContext ) );
    CHECK( c.y.dim( 1 ) == 2 * ( c.x.dim( 1 ) - 2 * kContext ) );
  }
}

TEST_CASE( "pairs: inputs recompose from the down-sampler, the intra codec and DCTIF" )
{
  const int   qp  = 37;
  const Frame f   = fixture::syntheticFrame( 192, 128, 2 );
  const Frame rec = recomposeLowRes( f, qp );
  PairSet     set;
  PairOptions o;
  o.qp = qp;
  appendFramePairs( f, 0, o, set );
  const auto g = CtuGrid::of( f );
  REQUIRE( int( set.luma.size() ) == g.count() );
  for( int i = 0; i < g.count(); i++ )
  {
    const int   row = i / g.cols, col = i % g.cols;
    const auto& l   = set.luma[size_t( i )];
    const auto& c   = set.chroma[size_t( i )];
    CHECK( tensorChannel( l.x, 0, kContext, 32 ) == rec.y.crop( col * 32, row * 32, 32, 32 ) );
    CHECK( tensorChannel( c.x, 1, kContext, 16 ) == rec.cb.crop( col * 16, row * 16, 16, 16 ) );
    CHECK( tensorChannel( c.x, 2, kContext, 16 ) == rec.cr.crop( col * 16, row * 16, 16, 16 ) );
    CHECK( tensorChannel( l.y, 0, 0, 64 ) == f.y.crop( col * 64, row * 64, 64, 64 ) );
    CHECK( tensorChannel( c.y, 1, 0, 32 ) == f.cr.crop( col * 32, row * 32, 32, 32 ) );
    CHECK( tensorChannel( l.dctifUp, 0, 0, 96 ) ==
           upsampleDctifTile( tensorChannel( l.x, 0, 0, 48 ), FilterKind::Luma ) );
    CHECK( tensorChannel( c.dctifUp, 0, 0, 64 ) ==
           upsampleDctifTile( tensorChannel( c.x, 1, 0, 32 ), FilterKind::Chroma ) );
    // luma input of the chroma network is the down-sampled LR luma; away from the core border the
    // down-sampling filter sees only core samples
    const int   reach = int( kDownFilter.size() ) / 2;
    const int   lo = ( reach + 1 ) / 2, n = 16 - 2 * lo;
    const Plane yds   = downsample2x( rec.y.crop( col * 32, row * 32, 32, 32 ) );
    CHECK( tensorChannel( c.x, 0, kContext, 16 ).crop( lo, lo, n, n ) == yds.crop( lo, lo, n, n ) );
  }
}

TEST_CASE( "pairs: context stage draws follow the seed and the fraction" )
{
  const Frame f = fixture::syntheticFrame( 256, 192, 3 );
  PairOptions o;
  for( double frac: { 0.0, 1.0 } )
  {
    o.stage2Fraction = frac;
    PairSet set;
    appendFramePairs( f, 0, o, set );
    for( const auto& p: set.luma )
    {
      CHECK( p.stage == ( frac == 0 ? UpStage::Stage1 : UpStage::Stage2 ) );
    }
  }
  o.stage2Fraction = 0.5;
  PairSet a, b, c;
  appendFramePairs( f, 0, o, a );
  appendFramePairs( f, 0, o, b );
  o.seed = 99;
  appendFramePairs( f, 0, o, c );
  int differ = 0, stage2 = 0;
  for( size_t i = 0; i < a.luma.size(); i++ )
  {
    CHECK( a.luma[i].stage == b.luma[i].stage );
    CHECK( a.luma[i].x == b.luma[i].x );
    CHECK( a.chroma[i].x == b.chroma[i].x );
    differ += a.luma[i].stage != c.luma[i].stage;
    stage2 += a.luma[i].stage == UpStage::Stage2;
  }
  CHECK( differ > 0 );
  CHECK( stage2 > 0 );
  CHECK( stage2 < int( a.luma.size() ) );
}

TEST_CASE( "pair generation over a corpus: order, determinism across threads, unreadable files" )
{
  TempDir dir( "aric_corpus_test" );
  for( int i = 0; i < 4; i++ )
  {
    writePpm( dir.path() / ( "img" + std::to_string( 3 - i ) + ".ppm" ), 128, 64, uint64_t( i ) );
  }
  std::ofstream( dir.path() / "broken.ppm" ) << "not an image";
  std::ofstream( dir.path() / "notes.txt" ) << "ignored";

  const auto files = listCorpus( dir.path() );
  REQUIRE( files.size() == 5 );
  CHECK( files.front().filename() == "broken.ppm" );
  CHECK( files.back().filename() == "img3.ppm" );

  PairOptions o;
  o.threads    = 1;
  const auto a = generatePairs( files, o );
  o.threads    = 3;
  const auto b = generatePairs( files, o );
  CHECK( a.skipped.size() == 1 );
  CHECK( a.images.size() == 4 );
  REQUIRE( a.luma.size() == 8 );
  REQUIRE( b.luma.size() == 8 );
  for( size_t i = 0; i < a.luma.size(); i++ )
  {
    CHECK( a.luma[i].x == b.luma[i].x );
    CHECK( a.luma[i].y == b.luma[i].y );
    CHECK( a.chroma[i].x == b.chroma[i].x );
    CHECK( a.luma[i].image == int( i / 2 ) );
  }
  CHECK_THROWS_AS( listCorpus( dir.path() / "missing" ), IoError );
}

TEST_CASE( "corpus split and manifest" )
{
  const auto names = []( int n )
  {
    std::vector<fs::path> v;
    for( int i = 0; i < n; i++ )
    {
      v.push_back( "/c/f" + std::to_string( 100 + i ) + ".ppm" );
    }
    return v;
  };
  CHECK( splitCorpus( names( 1 ) ).val.empty() );
  CHECK( splitCorpus( names( 2 ) ).val.size() == 1 );
  CHECK( splitCorpus( names( 20 ) ).val.size() == 2 );
  CHECK( splitCorpus( names( 117 ) ).val.size() == 12 );
  const auto s = splitCorpus( names( 20 ) );
  CHECK( s.val.front() == "/c/f118.ppm" );
  CHECK( s.train.size() == 18 );

  TempDir dir( "aric_manifest_test" );
  writeManifest( dir.path() / "m.jsonl", s );
  const auto m = readManifest( dir.path() / "m.jsonl" );
  REQUIRE( m.size() == 20 );
  CHECK( m.front().split == "train" );
  CHECK( m.back().split == "val" );
  CHECK_NOTHROW( refuseTrainingFiles( m, { "/c/other.ppm" } ) );
  CHECK_THROWS_WITH_AS( refuseTrainingFiles( m, { "/c/x/../f105.ppm" } ), doctest::Contains( "f105" ), ConfigError );

  std::ofstream( dir.path() / "bad.jsonl" ) << "{\"path\": 3}\n";
  CHECK_THROWS_AS( readManifest( dir.path() / "bad.jsonl" ), FormatError );
}

TEST_CASE( "training: initial loss equals the DCTIF loss; zero epochs keep the initial model" )
{
  const auto  train = pairsOf( { fixture::syntheticFrame( 128, 128, 4 ) }, Variant::Luma, 42, 1 );
  TrainConfig cfg;
  cfg.epochs       = 0;
  const NetArch a  = fixture::smallArch( Variant::Luma );
  const auto    r  = trainModel( train, {}, Variant::Luma, 42, cfg, {}, &a );
  CHECK( r.model == UpsamplerNet::initialized( Variant::Luma, 42, a, cfg.seed ) );
  CHECK( r.model.qpTag() == 42 );
  CHECK( r.epochsRun == 0 );
  REQUIRE( r.log.size() == 1 );
  CHECK( pairsMse( r.model, train ) == pairsDctifMse( train ) );
  CHECK( r.log[0].trainMse == pairsDctifMse( train ) );
  for( const auto& p: train )
  {
    CHECK( r.model.forward( p.x, p.dctifUp ) == p.dctifUp );
  }
  CHECK( trainLogCsv( r.log ).rfind( "epoch,train_mse,val_mse\n0,", 0 ) == 0 );
}

TEST_CASE( "training: validation MSE drops below the DCTIF baseline; runs are reproducible" )
{
  std::vector<Frame> trainFrames, valFrames;
  for( int i = 0; i < 4; i++ )
  {
    trainFrames.push_back( fixture::syntheticFrame( 128, 128, uint64_t( 10 + i ) ) );
  }
  valFrames.push_back( fixture::syntheticFrame( 128, 128, 20 ) );
  const NetArch arch = fixture::smallArch( Variant::Chroma );
  const auto    tr   = pairsOf( trainFrames, Variant::Chroma, 47, 1 );
  const auto    va   = pairsOf( valFrames, Variant::Chroma, 47, 1 );
  TrainConfig   cfg;
  cfg.epochs   = 6;
  cfg.lr       = 0.02;
  cfg.batch    = 4;
  cfg.momentum = 0.9;

  const auto r = trainModel( tr, va, Variant::Chroma, 47, cfg, {}, &arch );
  MESSAGE( "dctif val mse " << r.dctifValMse << ", best " << r.bestValMse << " at epoch " << r.bestEpoch );
  CHECK( r.bestValMse < r.dctifValMse );
  CHECK( r.bestEpoch > 0 );
  CHECK( pairsMse( r.model, va ) == doctest::Approx( r.bestValMse ).epsilon( 1e-9 ) );
  CHECK( r.log.size() == size_t( r.epochsRun + 1 ) );

  const auto again = trainModel( tr, va, Variant::Chroma, 47, cfg, {}, &arch );
  CHECK( serializeModel( again.model ) == serializeModel( r.model ) );

  cfg.patience      = 1;
  cfg.lr            = 0.0;
  const auto stuck  = trainModel( tr, va, Variant::Chroma, 47, cfg, {}, &arch );
  CHECK( stuck.stopReason == "patience" );
  CHECK( stuck.epochsRun == 1 );
}

TEST_CASE( "training: divergence aborts with the last good checkpoint" )
{
  TempDir     dir( "aric_diverge_test" );
  const auto  tr = pairsOf( { fixture::syntheticFrame( 128, 64, 30 ) }, Variant::Luma, 42, 1 );
  TrainConfig cfg;
  cfg.epochs   = 3;
  cfg.lr       = 1e30;
  cfg.clipNorm = 0;
  cfg.momentum = 0;
  cfg.batch    = 1;
  TrainOptions opts;
  opts.checkpoint = dir.path() / "ckpt.arun";
  const NetArch a = fixture::smallArch( Variant::Luma );
  CHECK_THROWS_WITH_AS( trainModel( tr, {}, Variant::Luma, 42, cfg, opts, &a ),
                        doctest::Contains( "last good model (epoch 0)" ), TrainingError );
  REQUIRE( fs::exists( opts.checkpoint ) );
  CHECK( loadModel( opts.checkpoint ) == UpsamplerNet::initialized( Variant::Luma, 42, a, cfg.seed ) );

  CHECK_THROWS_AS( trainModel( {}, {}, Variant::Luma, 42, TrainConfig{} ), ArgumentError );
  CHECK_THROWS_AS( trainModel( tr, {}, Variant::Chroma, 42, TrainConfig{} ), ArgumentError );
}
