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

/** \file     aric.cpp
    \brief    command-line front end: encode, decode, train, sweep, eval, fit-alpha, info
*/

#include "aric/coder.h"
#include "aric/evaluation.h"
#include "aric/image_io.h"
#include "aric/reports.h"
#include "aric/training.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>

using namespace aric;
namespace fs = std::filesystem;
using nlohmann::json;

namespace
{

constexpr int kExitArgument  = 2;
constexpr int kExitIo        = 3;
constexpr int kExitBitstream = 4;
constexpr int kExitConfig    = 5;
constexpr int kExitTraining  = 6;

struct EncodeArgs
{
  std::string input, size, models, out, recon, decisions, forceUp = "auto";
  int         qp        = 37;
  bool        forceLow  = false;
  bool        forceFull = false;
  bool        noStage2  = false;
  double      lambdaC   = kDefaultLambdaC;
};

struct DecodeArgs
{
  std::string bitstream, models, out;
};

struct TrainArgs
{
  std::string corpus, variant = "luma", out, log, manifest;
  int         qp             = 37;
  double      stage2Fraction = 0.5;
  TrainConfig cfg;
};

struct SweepArgs
{
  std::string      images, models, out, manifest, forceUp = "auto";
  std::vector<int> qps{ 27, 32, 37, 42, 47 };
  bool             fullOnly = false;
  bool             forceLow = false;
  bool             noStage2 = false;
};

struct EvalArgs
{
  std::string anchor, test, out;
};

struct AlphaArgs
{
  std::string runs, out;
  double      binWidth = 0.5;
};

fs::path besideOrDefault( const std::string& explicitPath, const std::string& anchor, const std::string& name )
{
  if( !explicitPath.empty() )
  {
    return explicitPath;
  }
  return fs::path( anchor ).parent_path() / name;
}

void ensureParent( const fs::path& p )
{
  if( p.has_parent_path() )
  {
    std::error_code ec;
    fs::create_directories( p.parent_path(), ec );
    ARIC_CHECK( !ec, IoError, "cannot create directory '", p.parent_path().string(), "': ", ec.message() );
  }
}

void writeBytes( const fs::path& p, const std::vector<uint8_t>& bytes )
{
  ensureParent( p );
  std::ofstream out( p, std::ios::binary );
  ARIC_CHECK( out, IoError, "cannot write '", p.string(), "'" );
  out.write( reinterpret_cast<const char*>( bytes.data() ), std::streamsize( bytes.size() ) );
  ARIC_CHECK( out.good(), IoError, "failed writing '", p.string(), "'" );
}

std::vector<uint8_t> readBytes( const fs::path& p )
{
  const std::string s = readTextFile( p );
  return std::vector<uint8_t>( s.begin(), s.end() );
}

ForceUp parseForceUp( const std::string& s )
{
  if( s == "cnn" )
  {
    return ForceUp::Cnn;
  }
  if( s == "dctif" )
  {
    return ForceUp::Dctif;
  }
  ARIC_CHECK( s == "auto", ArgumentError, "--force-up must be cnn, dctif or auto, got '", s, "'" );
  return ForceUp::Auto;
}

std::optional<ModelSet> modelsFor( const std::string& dir, int qp )
{
  if( dir.empty() )
  {
    return std::nullopt;
  }
  return loadNearestModels( dir, qp );
}

std::string stem( const fs::path& p )
{
  return p.stem().string();
}

void writeModeMaps( const fs::path& dir, const std::string& prefix, const std::vector<CtuDecision>& ds )
{
  const char* names[3] = { "y", "cb", "cr" };
  for( int c = 0; c < 3; c++ )
  {
    writeTextFile( dir / ( prefix + "mode_map_" + names[c] + ".csv" ), modeMapCsv( ds, c ) );
  }
}

void printQuality( const FrameQuality& q, size_t bits, const HittingStats& h )
{
  std::printf( "bits %zu\npsnr_y %s\npsnr_cb %s\npsnr_cr %s\nssim_y %s\np_hitting %s\np_luma %s\np_cb %s\np_cr %s\n",
               bits, formatMetric( q.psnrY, 4 ).c_str(), formatMetric( q.psnrCb, 4 ).c_str(),
               formatMetric( q.psnrCr, 4 ).c_str(), formatMetric( q.ssimY, 6 ).c_str(),
               formatMetric( h.pHitting, 4 ).c_str(), formatMetric( h.pLuma, 4 ).c_str(),
               formatMetric( h.pCb, 4 ).c_str(), formatMetric( h.pCr, 4 ).c_str() );
}

// ---------------------------------------------------------------------------------------------------------------------

int runEncode( const EncodeArgs& a, int threads )
{
  ARIC_CHECK( !( a.forceLow && a.forceFull ), ArgumentError, "--force-low and --force-full are exclusive" );
  const Frame    f = loadInputFrame( a.input, a.size );
  EncoderOptions o;
  o.forceMode    = a.forceLow ? ForceMode::Low : ( a.forceFull ? ForceMode::Full : ForceMode::Auto );
  o.forceUp      = parseForceUp( a.forceUp );
  o.stage2       = !a.noStage2;
  o.lambdaC      = a.lambdaC;
  o.threads      = threads;
  const auto models = modelsFor( a.models, a.qp );
  const auto enc    = encodeFrame( f, a.qp, models ? &*models : nullptr, o );

  const fs::path reconPath     = besideOrDefault( a.recon, a.out, "recon.yuv" );
  const fs::path decisionsPath = besideOrDefault( a.decisions, a.out, "decisions.csv" );
  writeBytes( a.out, enc.bitstream );
  ensureParent( reconPath );
  saveFrame( reconPath, enc.recon );
  ensureParent( decisionsPath );
  writeTextFile( decisionsPath, decisionsCsvHeader() + decisionsCsvRows( stem( a.input ), a.qp, enc.decisions ) );
  writeModeMaps( decisionsPath.parent_path(), "", enc.decisions );

  json cfg = { { "command", "encode" },
               { "input", a.input },
               { "size", a.size.empty() ? str( f.origWidth, "x", f.origHeight ) : a.size },
               { "qp", a.qp },
               { "models", a.models },
               { "model_tag", enc.modelTag },
               { "force_mode", a.forceLow ? "low" : ( a.forceFull ? "full" : "auto" ) },
               { "force_up", a.forceUp },
               { "stage2", !a.noStage2 },
               { "lambda_c", a.lambdaC },
               { "bitstream", a.out },
               { "recon", reconPath.string() },
               { "decisions", decisionsPath.string() } };
  writeTextFile( decisionsPath.parent_path() / "config.json", cfg.dump( 2 ) + "\n" );

  printQuality( frameQuality( f, enc.recon ), enc.bitstream.size() * 8, hittingStats( enc.decisions ) );
  return 0;
}

int runDecode( const DecodeArgs& a, int threads )
{
  const auto     bytes = readBytes( a.bitstream );
  const auto     hdr   = parseHeader( bytes );
  std::optional<ModelSet> models;
  if( !a.models.empty() && hdr.modelTag != kNoModelTag )
  {
    models = loadModelsForTag( a.models, hdr.modelTag );
  }
  const auto dec = decodeFrame( bytes, models ? &*models : nullptr, threads );
  ensureParent( a.out );
  saveFrame( a.out, dec.recon );
  std::printf( "decoded %dx%d qp %d model_tag %d stage2 %d ctus %zu\n", hdr.width, hdr.height, hdr.qp, hdr.modelTag,
               int( hdr.stage2 ), dec.decisions.size() );
  return 0;
}

int runTrain( const TrainArgs& a, int threads )
{
  const Variant variant = parseVariant( a.variant );
  const auto    files   = listCorpus( a.corpus );
  ARIC_CHECK( !files.empty(), IoError, "no PPM/PGM images in '", a.corpus, "'" );
  const CorpusSplit split = splitCorpus( files );
  const fs::path    manifestPath = besideOrDefault( a.manifest, a.out, "train_manifest.jsonl" );
  ensureParent( manifestPath );
  writeManifest( manifestPath, split );

  PairOptions po;
  po.qp             = a.qp;
  po.seed           = a.cfg.seed;
  po.stage2Fraction = a.stage2Fraction;
  po.threads        = threads;
  const auto trainSet = generatePairs( split.train, po );
  const auto valSet   = generatePairs( split.val, po );
  const auto& train   = variant == Variant::Luma ? trainSet.luma : trainSet.chroma;
  const auto& val     = variant == Variant::Luma ? valSet.luma : valSet.chroma;
  std::fprintf( stderr, "%zu training pairs, %zu validation pairs, %zu images skipped\n", train.size(), val.size(),
                trainSet.skipped.size() + valSet.skipped.size() );
  ARIC_CHECK( !train.empty(), IoError, "no usable training images in '", a.corpus, "'" );

  const fs::path logPath = besideOrDefault( a.log, a.out, stem( a.out ) + "_log.csv" );
  ensureParent( a.out );
  TrainOptions opts;
  opts.checkpoint = fs::path( a.out ).string() + ".checkpoint";
  opts.onEpoch    = [&]( const TrainLogRow& r )
  {
    std::fprintf( stderr, "epoch %d train_mse %.8f val_mse %.8f\n", r.epoch, r.trainMse, r.valMse );
  };
  const auto res = trainModel( train, val, variant, a.qp, a.cfg, opts );
  saveModel( a.out, res.model );
  std::error_code ec;
  fs::remove( opts.checkpoint, ec );
  writeTextFile( logPath, trainLogCsv( res.log ) );

  json cfg = { { "command", "train" },
               { "corpus", a.corpus },
               { "variant", a.variant },
               { "qp", a.qp },
               { "epochs", a.cfg.epochs },
               { "seed", a.cfg.seed },
               { "lr", a.cfg.lr },
               { "momentum", a.cfg.momentum },
               { "batch", a.cfg.batch },
               { "clip_norm", a.cfg.clipNorm },
               { "patience", a.cfg.patience },
               { "time_budget", a.cfg.timeBudget },
               { "stage2_fraction", a.stage2Fraction },
               { "train_images", split.train.size() },
               { "val_images", split.val.size() },
               { "manifest", manifestPath.string() },
               { "log", logPath.string() } };
  writeTextFile( fs::path( a.out ).string() + ".config.json", cfg.dump( 2 ) + "\n" );

  std::printf( "epochs_run %d\nbest_epoch %d\nstop %s\ndctif_val_mse %s\nbest_val_mse %s\n", res.epochsRun,
               res.bestEpoch, res.stopReason.c_str(), formatMetric( res.dctifValMse, 9 ).c_str(),
               formatMetric( res.bestValMse, 9 ).c_str() );
  return 0;
}

int runSweep( const SweepArgs& a, int threads )
{
  ARIC_CHECK( !( a.fullOnly && a.forceLow ), ArgumentError, "--full-only and --force-low are exclusive" );
  ARIC_CHECK( !a.qps.empty(), ArgumentError, "--qps needs at least one value" );
  std::vector<fs::path> images;
  if( fs::is_directory( a.images ) )
  {
    images = listCorpus( a.images );
  }
  else
  {
    images.push_back( a.images );
  }
  ARIC_CHECK( !images.empty(), IoError, "no PPM/PGM images in '", a.images, "'" );
  if( !a.manifest.empty() )
  {
    refuseTrainingFiles( readManifest( a.manifest ), images );
  }

  EncoderOptions o;
  o.forceMode = a.fullOnly ? ForceMode::Full : ( a.forceLow ? ForceMode::Low : ForceMode::Auto );
  o.forceUp   = parseForceUp( a.forceUp );
  o.stage2    = !a.noStage2;
  o.threads   = threads;

  const fs::path out( a.out );
  fs::create_directories( out / "maps" );
  std::vector<RdRecord> records;
  std::string           decisions = decisionsCsvHeader();
  std::map<int, std::optional<ModelSet>> modelCache;
  for( const auto& path: images )
  {
    const Frame f = loadImage( path );
    for( int qp: a.qps )
    {
      if( !modelCache.count( qp ) )
      {
        modelCache[qp] = a.fullOnly ? std::nullopt : modelsFor( a.models, qp );
      }
      const auto& models = modelCache[qp];
      const auto  enc    = encodeFrame( f, qp, models ? &*models : nullptr, o );
      const auto  q      = frameQuality( f, enc.recon );
      const auto  h      = hittingStats( enc.decisions );
      records.push_back( { stem( path ), qp, { double( enc.bitstream.size() * 8 ), q.psnrY, q.ssimY, q.psnrCb, q.psnrCr },
                           h.pHitting } );
      decisions += decisionsCsvRows( stem( path ), qp, enc.decisions );
      writeModeMaps( out / "maps", stem( path ) + "_qp" + std::to_string( qp ) + "_", enc.decisions );
      std::fprintf( stderr, "%s qp %d bits %zu psnr_y %s p_hitting %.3f\n", stem( path ).c_str(), qp,
                    enc.bitstream.size() * 8, formatMetric( q.psnrY, 3 ).c_str(), h.pHitting );
    }
  }
  writeTextFile( out / "rd_points.csv", rdPointsCsv( records ) );
  writeTextFile( out / "decisions.csv", decisions );
  json cfg = { { "command", "sweep" },  { "images", a.images },     { "qps", a.qps },
               { "models", a.models },  { "full_only", a.fullOnly }, { "force_low", a.forceLow },
               { "force_up", a.forceUp }, { "stage2", !a.noStage2 }, { "manifest", a.manifest } };
  writeTextFile( out / "config.json", cfg.dump( 2 ) + "\n" );
  std::printf( "wrote %zu rd points to %s\n", records.size(), ( out / "rd_points.csv" ).string().c_str() );
  return 0;
}

int runEval( const EvalArgs& a )
{
  const auto anchor = parseRdPointsCsv( readTextFile( fs::path( a.anchor ) / "rd_points.csv" ),
                                        ( fs::path( a.anchor ) / "rd_points.csv" ).string() );
  const auto test   = parseRdPointsCsv( readTextFile( fs::path( a.test ) / "rd_points.csv" ),
                                        ( fs::path( a.test ) / "rd_points.csv" ).string() );
  const fs::path out( a.out );
  fs::create_directories( out );
  const auto bd = bdRateByImage( anchor, test );
  writeTextFile( out / "bd_rate.csv", bdRateCsv( bd ) );

  std::string rd = rdPointsCsv( {} );
  rd             = "run," + rd;
  for( const auto& [label, recs]: { std::pair{ "anchor", &anchor }, std::pair{ "test", &test } } )
  {
    const std::string body = rdPointsCsv( *recs );
    std::istringstream lines( body.substr( body.find( '\n' ) + 1 ) );
    std::string        line;
    while( std::getline( lines, line ) )
    {
      rd += std::string( label ) + "," + line + "\n";
    }
  }
  writeTextFile( out / "rd_points.csv", rd );

  const fs::path decisionsPath = fs::path( a.test ) / "decisions.csv";
  if( fs::exists( decisionsPath ) )
  {
    const auto records = parseDecisionsCsv( readTextFile( decisionsPath ), decisionsPath.string() );
    std::map<std::pair<std::string, int>, std::vector<CtuDecision>> frames;
    for( const auto& r: records )
    {
      frames[{ r.image, r.qp }].push_back( r.decision );
    }
    std::string hit = "image,qp,ctus,p_hitting,p_luma,p_cb,p_cr\n";
    for( const auto& [key, ds]: frames )
    {
      const auto h = hittingStats( ds );
      hit += str( key.first, ",", key.second, ",", h.total, ",", formatMetric( h.pHitting ), ",",
                  formatMetric( h.pLuma ), ",", formatMetric( h.pCb ), ",", formatMetric( h.pCr ), "\n" );
    }
    writeTextFile( out / "hitting.csv", hit );
  }
  std::printf( "bd_rate_psnr_y %s %%\nbd_rate_ssim_y %s %%\n", formatMetric( bd.back().psnrY, 4 ).c_str(),
               formatMetric( bd.back().ssimY, 4 ).c_str() );
  return 0;
}

int runFitAlpha( const AlphaArgs& a )
{
  const fs::path decisionsPath = fs::path( a.runs ) / "decisions.csv";
  const auto     records       = parseDecisionsCsv( readTextFile( decisionsPath ), decisionsPath.string() );
  const auto     analysis      = analyseAlpha( records, a.binWidth );
  const fs::path out           = a.out.empty() ? fs::path( a.runs ) : fs::path( a.out );
  fs::create_directories( out );
  writeTextFile( out / "alpha_hist.csv", alphaHistogramCsv( analysis.hist ) );
  writeTextFile( out / "alpha_fits.csv", alphaFitsCsv( analysis ) );
  std::printf( "ctus %zu\nglobal_alpha %s\nglobal_beta %s\nglobal_r2 %s\nhistogram_peak %s\n", analysis.perCtu.size(),
               formatMetric( analysis.global.alpha, 4 ).c_str(), formatMetric( analysis.global.beta, 2 ).c_str(),
               formatMetric( analysis.global.r2, 4 ).c_str(), formatMetric( analysis.hist.peak(), 2 ).c_str() );
  return 0;
}

int runInfo( bool filters, bool arch )
{
  ARIC_CHECK( filters || arch, ArgumentError, "info needs --filters or --arch" );
  if( filters )
  {
    const auto print = []( const char* name, const auto& taps )
    {
      std::printf( "%s (/64):", name );
      for( int t: taps )
      {
        std::printf( " %d", t );
      }
      std::printf( "\n" );
    };
    print( "down", kDownFilter );
    print( "luma_half_pel", kLumaHalfPel );
    print( "chroma_half_pel", kChromaHalfPel );
    std::printf( "context %d LR samples per side\n", kContext );
  }
  if( arch )
  {
    static const char* kinds[] = { "conv", "deconv", "relu", "concat", "add_skip" };
    for( Variant v: { Variant::Luma, Variant::Chroma } )
    {
      const NetArch a = NetArch::forVariant( v );
      std::printf( "%s network: %zu parameters\n", variantName( v ), a.paramCount() );
      std::printf( "  %-9s %3s %3s %6s %6s %6s\n", "kind", "kh", "kw", "in", "out", "stride" );
      for( const auto& l: a.layerTable() )
      {
        std::printf( "  %-9s %3d %3d %6d %6d %6d\n", kinds[int( l.kind )], l.kh, l.kw, l.inCh, l.outCh, l.stride() );
      }
    }
  }
  return 0;
}

int exitCodeFor( const AricError& e )
{
  if( dynamic_cast<const IoError*>( &e ) )
  {
    return kExitIo;
  }
  if( dynamic_cast<const BitstreamError*>( &e ) )
  {
    return kExitBitstream;
  }
  if( dynamic_cast<const ConfigError*>( &e ) || dynamic_cast<const FormatError*>( &e ) )
  {
    return kExitConfig;
  }
  if( dynamic_cast<const TrainingError*>( &e ) )
  {
    return kExitTraining;
  }
  return kExitArgument;
}

}   // namespace

int main( int argc, char** argv )
{
  CLI::App app{ "adaptive-resolution intra image coder with learned up-sampling" };
  app.require_subcommand( 1 );
  int threads = 0;
  app.add_option( "--threads", threads, "worker threads (default: ARIC_THREADS or 1)" )->check( CLI::NonNegativeNumber );

  EncodeArgs enc;
  auto*      e = app.add_subcommand( "encode", "code one frame" );
  e->add_option( "--input", enc.input, "raw I420 file (with --size) or PPM/PGM image" )->required();
  e->add_option( "--size", enc.size, "WxH of a raw input" );
  e->add_option( "--qp", enc.qp, "frame QP" )->check( CLI::Range( kMinFrameQp, kMaxFrameQp ) );
  e->add_option( "--models", enc.models, "directory of .arun models (nearest QP tag is used)" );
  e->add_flag( "--force-low", enc.forceLow, "code every CTU at low resolution" );
  e->add_flag( "--force-full", enc.forceFull, "code every CTU at full resolution" );
  e->add_option( "--force-up", enc.forceUp, "up-sampler for low CTUs: cnn, dctif or auto" );
  e->add_flag( "--no-stage2", enc.noStage2, "skip the post-frame refinement" );
  e->add_option( "--lambda-c", enc.lambdaC, "Lagrangian constant c in c*2^((qp-12)/3)" );
  e->add_option( "--out", enc.out, "bitstream file" )->required();
  e->add_option( "--recon", enc.recon, "reconstruction (default: recon.yuv beside --out)" );
  e->add_option( "--decisions", enc.decisions, "per-CTU CSV (default: decisions.csv beside --out)" );

  DecodeArgs dec;
  auto*      d = app.add_subcommand( "decode", "decode a bitstream" );
  d->add_option( "--bitstream", dec.bitstream, "bitstream file" )->required();
  d->add_option( "--models", dec.models, "directory holding the models named by the bitstream" );
  d->add_option( "--out", dec.out, "raw I420 output" )->required();

  TrainArgs tr;
  auto*     t = app.add_subcommand( "train", "train one up-sampling network" );
  t->add_option( "--corpus", tr.corpus, "directory of PPM/PGM images" )->required();
  t->add_option( "--qp", tr.qp, "QP the training pairs are coded at" )->check( CLI::Range( kMinFrameQp, kMaxFrameQp ) );
  t->add_option( "--variant", tr.variant, "luma or chroma" );
  t->add_option( "--epochs", tr.cfg.epochs, "epochs" );
  t->add_option( "--seed", tr.cfg.seed, "seed for initialisation, context draws and shuffling" );
  t->add_option( "--lr", tr.cfg.lr, "learning rate" );
  t->add_option( "--momentum", tr.cfg.momentum, "momentum" );
  t->add_option( "--batch", tr.cfg.batch, "pairs per update" );
  t->add_option( "--clip-norm", tr.cfg.clipNorm, "global gradient norm limit (<= 0 disables)" );
  t->add_option( "--patience", tr.cfg.patience, "epochs without validation improvement before stopping" );
  t->add_option( "--time-budget", tr.cfg.timeBudget, "seconds; training stops after the epoch that exceeds it" );
  t->add_option( "--stage2-fraction", tr.stage2Fraction, "share of pairs built with all-sides context" );
  t->add_option( "--out", tr.out, "model file" )->required();
  t->add_option( "--log", tr.log, "training log CSV (default: <model>_log.csv)" );
  t->add_option( "--manifest", tr.manifest, "corpus manifest (default: train_manifest.jsonl beside --out)" );

  SweepArgs sw;
  auto*     s = app.add_subcommand( "sweep", "code a set of images at several QPs" );
  s->add_option( "--images", sw.images, "image or directory of images" )->required();
  s->add_option( "--qps", sw.qps, "QP list" )->delimiter( ',' )->check( CLI::Range( kMinFrameQp, kMaxFrameQp ) );
  s->add_option( "--models", sw.models, "model directory" );
  s->add_flag( "--full-only", sw.fullOnly, "anchor run: every CTU at full resolution" );
  s->add_flag( "--force-low", sw.forceLow, "every CTU at low resolution" );
  s->add_option( "--force-up", sw.forceUp, "cnn, dctif or auto" );
  s->add_flag( "--no-stage2", sw.noStage2, "skip the post-frame refinement" );
  s->add_option( "--manifest", sw.manifest, "training manifest; listed files are refused" );
  s->add_option( "--out", sw.out, "run directory" )->required();

  EvalArgs ev;
  auto*    v = app.add_subcommand( "eval", "BD-rate and hitting statistics of two runs" );
  v->add_option( "--anchor-dir", ev.anchor, "anchor run directory" )->required();
  v->add_option( "--test-dir", ev.test, "test run directory" )->required();
  v->add_option( "--out", ev.out, "report directory" )->required();

  AlphaArgs al;
  auto*     f = app.add_subcommand( "fit-alpha", "fit d_full = alpha d_low + beta per CTU across QPs" );
  f->add_option( "--runs", al.runs, "run directory with decisions.csv" )->required();
  f->add_option( "--out", al.out, "output directory (default: the run directory)" );
  f->add_option( "--bin-width", al.binWidth, "histogram bin width" );

  bool  infoFilters = false, infoArch = false;
  auto* i           = app.add_subcommand( "info", "print filter taps or network layout" );
  i->add_flag( "--filters", infoFilters, "filter coefficients" );
  i->add_flag( "--arch", infoArch, "network layer tables" );

  try
  {
    app.parse( argc, argv );
  }
  catch( const CLI::CallForHelp& )
  {
    std::cout << app.help();
    return 0;
  }
  catch( const CLI::CallForAllHelp& )
  {
    std::cout << app.help( "", CLI::AppFormatMode::All );
    return 0;
  }
  catch( const CLI::CallForVersion& )
  {
    return 0;
  }
  catch( const CLI::ParseError& err )
  {
    std::cerr << "error: " << err.what() << "\n";
    return kExitArgument;
  }

  try
  {
    const int nThreads = resolveThreads( threads );
    if( e->parsed() )
    {
      return runEncode( enc, nThreads );
    }
    if( d->parsed() )
    {
      return runDecode( dec, nThreads );
    }
    if( t->parsed() )
    {
      return runTrain( tr, nThreads );
    }
    if( s->parsed() )
    {
      return runSweep( sw, nThreads );
    }
    if( v->parsed() )
    {
      return runEval( ev );
    }
    if( f->parsed() )
    {
      return runFitAlpha( al );
    }
    return runInfo( infoFilters, infoArch );
  }
  catch( const AricError& err )
  {
    std::cerr << "error: " << err.what() << "\n";
    return exitCodeFor( err );
  }
  catch( const std::filesystem::filesystem_error& err )
  {
    std::cerr << "error: " << err.what() << "\n";
    return kExitIo;
  }
}
