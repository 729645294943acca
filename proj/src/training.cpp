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

#include "aric/training.h"

#include "aric/image_io.h"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

namespace aric
{

namespace fs = std::filesystem;

std::vector<fs::path> listCorpus( const fs::path& dir )
{
  ARIC_CHECK( fs::is_directory( dir ), IoError, "corpus directory '", dir.string(), "' not found" );
  std::vector<fs::path> files;
  for( const auto& e: fs::directory_iterator( dir ) )
  {
    if( e.is_regular_file() && isImageFile( e.path() ) )
    {
      files.push_back( e.path() );
    }
  }
  std::sort( files.begin(), files.end() );
  return files;
}

namespace
{

Tensor<float> targetTensor( std::initializer_list<const Plane*> planes )
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

}   // namespace

void appendFramePairs( const Frame& f, int imageIndex, const PairOptions& opts, PairSet& out )
{
  ARIC_CHECK( opts.stage2Fraction >= 0 && opts.stage2Fraction <= 1, ArgumentError,
              "stage-2 fraction must be in [0,1], got ", opts.stage2Fraction );
  EncoderOptions eo;
  eo.forceMode   = ForceMode::Low;
  eo.forceUp     = ForceUp::Dctif;
  eo.stage2      = false;
  const auto enc = encodeFrame( f, opts.qp, nullptr, eo );

  std::mt19937_64                  rng( opts.seed * 0x9e3779b97f4a7c15ULL + uint64_t( imageIndex ) );
  std::uniform_real_distribution<> draw( 0.0, 1.0 );
  const CtuGrid                    grid = CtuGrid::of( f );
  const Frame&                     lr   = enc.lrReference;
  for( const auto& d: enc.decisions )
  {
    const UpStage stage = draw( rng ) < opts.stage2Fraction ? UpStage::Stage2 : UpStage::Stage1;
    const int     ls = kCtuSize / 2, cs = kChromaCtuSize / 2;
    const std::array<Plane, 3> core = { lr.y.crop( d.col * ls, d.row * ls, ls, ls ),
                                        lr.cb.crop( d.col * cs, d.row * cs, cs, cs ),
                                        lr.cr.crop( d.col * cs, d.row * cs, cs, cs ) };
    CtuNetInputs               in   = buildNetInputs( lr, core, grid, d.row, d.col, stage );
    const CtuBlocks            orig = extractCtu( f, d.row, d.col );

    TrainingPair luma;
    luma.variant = Variant::Luma;
    luma.qp      = opts.qp;
    luma.stage   = stage;
    luma.image   = imageIndex;
    luma.ctu     = d.index;
    luma.x       = std::move( in.lumaX );
    luma.dctifUp = std::move( in.lumaDctif );
    luma.y       = targetTensor( { &orig.y } );
    out.luma.push_back( std::move( luma ) );

    TrainingPair chroma;
    chroma.variant = Variant::Chroma;
    chroma.qp      = opts.qp;
    chroma.stage   = stage;
    chroma.image   = imageIndex;
    chroma.ctu     = d.index;
    chroma.x       = std::move( in.chromaX );
    chroma.dctifUp = std::move( in.chromaDctif );
    chroma.y       = targetTensor( { &orig.cb, &orig.cr } );
    out.chroma.push_back( std::move( chroma ) );
  }
}

PairSet generatePairs( const std::vector<fs::path>& images, const PairOptions& opts )
{
  ARIC_CHECK( opts.qp >= kMinFrameQp && opts.qp <= kMaxFrameQp, ArgumentError, "qp ", opts.qp, " outside [",
              kMinFrameQp, ",", kMaxFrameQp, "]" );
  std::vector<PairSet>     perImage( images.size() );
  std::vector<std::string> errors( images.size() );
  parallelFor( int( images.size() ), opts.threads,
               [&]( int i )
               {
                 try
                 {
                   appendFramePairs( loadImage( images[size_t( i )] ), i, opts, perImage[size_t( i )] );
                 }
                 catch( const IoError& e )
                 {
                   errors[size_t( i )] = e.what();
                 }
                 catch( const FormatError& e )
                 {
                   errors[size_t( i )] = e.what();
                 }
                 catch( const ArgumentError& e )
                 {
                   errors[size_t( i )] = e.what();
                 }
               } );

  PairSet out;
  for( size_t i = 0; i < images.size(); i++ )
  {
    if( !errors[i].empty() )
    {
      std::cerr << "warning: skipping " << images[i].string() << ": " << errors[i] << "\n";
      out.skipped.push_back( images[i].string() + ": " + errors[i] );
      continue;
    }
    const int idx = int( out.images.size() );
    out.images.push_back( images[i] );
    for( auto* v: { &perImage[i].luma, &perImage[i].chroma } )
    {
      auto& dst = v == &perImage[i].luma ? out.luma : out.chroma;
      for( auto& p: *v )
      {
        p.image = idx;
        dst.push_back( std::move( p ) );
      }
    }
  }
  return out;
}

CorpusSplit splitCorpus( const std::vector<fs::path>& sorted )
{
  CorpusSplit s;
  size_t      nVal = size_t( std::lround( double( sorted.size() ) * 0.1 ) );
  if( sorted.size() >= 2 )
  {
    nVal = std::max<size_t>( nVal, 1 );
  }
  s.train.assign( sorted.begin(), sorted.end() - std::ptrdiff_t( nVal ) );
  s.val.assign( sorted.end() - std::ptrdiff_t( nVal ), sorted.end() );
  return s;
}

namespace
{

std::string canonicalText( const fs::path& p )
{
  std::error_code ec;
  const auto      c = fs::weakly_canonical( p, ec );
  return ( ec ? fs::absolute( p ) : c ).lexically_normal().string();
}

}   // namespace

void writeManifest( const fs::path& file, const CorpusSplit& split )
{
  std::ofstream out( file );
  ARIC_CHECK( out, IoError, "cannot write manifest '", file.string(), "'" );
  for( const auto& [list, name]: { std::pair{ &split.train, "train" }, std::pair{ &split.val, "val" } } )
  {
    for( const auto& p: *list )
    {
      out << nlohmann::json{ { "path", canonicalText( p ) }, { "split", name } }.dump() << "\n";
    }
  }
  ARIC_CHECK( out.good(), IoError, "failed writing manifest '", file.string(), "'" );
}

std::vector<ManifestEntry> readManifest( const fs::path& file )
{
  std::ifstream in( file );
  ARIC_CHECK( in, IoError, "cannot open manifest '", file.string(), "'" );
  std::vector<ManifestEntry> entries;
  std::string                line;
  int                        lineNo = 0;
  while( std::getline( in, line ) )
  {
    lineNo++;
    if( line.find_first_not_of( " \t\r" ) == std::string::npos )
    {
      continue;
    }
    try
    {
      const auto j = nlohmann::json::parse( line );
      entries.push_back( { j.at( "path" ).get<std::string>(), j.at( "split" ).get<std::string>() } );
    }
    catch( const nlohmann::json::exception& e )
    {
      throw FormatError( str( file.string(), ":", lineNo, ": ", e.what() ) );
    }
  }
  return entries;
}

void refuseTrainingFiles( const std::vector<ManifestEntry>& manifest, const std::vector<fs::path>& files )
{
  std::set<std::string> listed;
  for( const auto& e: manifest )
  {
    listed.insert( canonicalText( e.path ) );
  }
  for( const auto& f: files )
  {
    ARIC_CHECK( !listed.count( canonicalText( f ) ), ConfigError, "refusing to evaluate on '", f.string(),
                "': it is listed in the training manifest" );
  }
}

double pairsMse( const UpsamplerNet& net, const std::vector<TrainingPair>& pairs )
{
  if( pairs.empty() )
  {
    return std::numeric_limits<double>::quiet_NaN();
  }
  double sum = 0;
  for( const auto& p: pairs )
  {
    const auto               out = net.forward( p.x, p.dctifUp );
    const TrainSample<float> s{ &p.x, &p.dctifUp, &p.y, kPairCrop, kPairCrop };
    sum += sampleMse<float>( out, s, nullptr );
  }
  return sum / double( pairs.size() );
}

double pairsDctifMse( const std::vector<TrainingPair>& pairs )
{
  if( pairs.empty() )
  {
    return std::numeric_limits<double>::quiet_NaN();
  }
  double sum = 0;
  for( const auto& p: pairs )
  {
    const TrainSample<float> s{ &p.x, &p.dctifUp, &p.y, kPairCrop, kPairCrop };
    sum += sampleMse<float>( p.dctifUp, s, nullptr );
  }
  return sum / double( pairs.size() );
}

TrainOutcome trainModel( const std::vector<TrainingPair>& train, const std::vector<TrainingPair>& val, Variant variant,
                         int qp, const TrainConfig& cfg, const TrainOptions& opts, const NetArch* arch )
{
  cfg.validate();
  ARIC_CHECK( !train.empty(), ArgumentError, "no training pairs" );
  for( const auto* set: { &train, &val } )
  {
    for( const auto& p: *set )
    {
      ARIC_CHECK( p.variant == variant, ArgumentError, "pair of variant ", variantName( p.variant ),
                  " in a ", variantName( variant ), " training set" );
    }
  }
  const auto start = std::chrono::steady_clock::now();

  TrainOutcome res;
  UpsamplerNet net =
    UpsamplerNet::initialized( variant, qp, arch ? *arch : NetArch::forVariant( variant ), cfg.seed );
  res.dctifTrainMse = pairsDctifMse( train );
  res.dctifValMse   = pairsDctifMse( val );

  const bool   useVal  = !val.empty();
  const auto   monitor = [&]( double trainMse ) { return useVal ? pairsMse( net, val ) : trainMse; };
  // the initial model has a zero last layer, so its training loss is the DCTIF loss
  const double initVal = monitor( res.dctifTrainMse );
  res.log.push_back( { 0, res.dctifTrainMse, initVal } );
  if( opts.onEpoch )
  {
    opts.onEpoch( res.log.back() );
  }
  res.model      = net;
  res.bestValMse = initVal;
  res.bestEpoch  = 0;
  res.stopReason = "epochs";
  const auto saveCheckpoint = [&]()
  {
    if( !opts.checkpoint.empty() )
    {
      saveModel( opts.checkpoint, res.model );
    }
  };
  saveCheckpoint();

  SgdOptimizer<float>  opt( cfg );
  std::mt19937_64      rng( cfg.seed ^ 0x2545f4914f6cdd1dULL );
  std::vector<size_t>  order( train.size() );
  std::vector<TrainSample<float>> batch;
  int                  batchIndex = 0;
  for( int epoch = 1; epoch <= cfg.epochs; epoch++ )
  {
    std::iota( order.begin(), order.end(), size_t( 0 ) );
    std::shuffle( order.begin(), order.end(), rng );
    double lossSum = 0;
    for( size_t b = 0; b < order.size(); b += size_t( cfg.batch ) )
    {
      batch.clear();
      for( size_t i = b; i < std::min( order.size(), b + size_t( cfg.batch ) ); i++ )
      {
        const auto& p = train[order[i]];
        batch.push_back( { &p.x, &p.dctifUp, &p.y, kPairCrop, kPairCrop } );
      }
      try
      {
        lossSum += opt.backwardAndStep( net, batch, batchIndex++ ) * double( batch.size() );
      }
      catch( const TrainingError& e )
      {
        saveCheckpoint();
        throw TrainingError( str( "training diverged in epoch ", epoch, ": ", e.what(),
                                  opts.checkpoint.empty() ? std::string()
                                                          : str( "; last good model (epoch ", res.bestEpoch,
                                                                 ") saved to ", opts.checkpoint.string() ) ) );
      }
    }
    const double trainMse = lossSum / double( train.size() );
    const double valMse   = monitor( trainMse );
    res.log.push_back( { epoch, trainMse, valMse } );
    res.epochsRun = epoch;
    if( opts.onEpoch )
    {
      opts.onEpoch( res.log.back() );
    }
    if( !std::isfinite( valMse ) )
    {
      saveCheckpoint();
      throw TrainingError( str( "training diverged in epoch ", epoch, ": non-finite validation loss",
                                opts.checkpoint.empty() ? std::string()
                                                        : str( "; last good model (epoch ", res.bestEpoch,
                                                               ") saved to ", opts.checkpoint.string() ) ) );
    }
    if( valMse < res.bestValMse )
    {
      res.bestValMse = valMse;
      res.bestEpoch  = epoch;
      res.model      = net;
      saveCheckpoint();
    }
    if( epoch - res.bestEpoch >= cfg.patience )
    {
      res.stopReason = "patience";
      break;
    }
    const double elapsed = std::chrono::duration<double>( std::chrono::steady_clock::now() - start ).count();
    if( cfg.timeBudget > 0 && elapsed >= cfg.timeBudget && epoch < cfg.epochs )
    {
      res.stopReason = "time budget";
      break;
    }
  }
  return res;
}

std::string trainLogCsv( const std::vector<TrainLogRow>& log )
{
  std::ostringstream out;
  out.precision( 9 );
  out << "epoch,train_mse,val_mse\n";
  for( const auto& r: log )
  {
    out << r.epoch << "," << r.trainMse << "," << r.valMse << "\n";
  }
  return out.str();
}

}   // namespace aric
