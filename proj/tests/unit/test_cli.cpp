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
#include "fixtures.h"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

using namespace aric;
namespace fs = std::filesystem;

namespace
{

struct Run
{
  int         code = -1;
  std::string out;
};

Run cli( const std::string& args )
{
  const std::string cmd  = std::string( ARIC_CLI_PATH ) + " " + args + " 2>&1";
  FILE*             pipe = popen( cmd.c_str(), "r" );
  REQUIRE( pipe );
  Run  r;
  char buf[4096];
  while( size_t n = fread( buf, 1, sizeof( buf ), pipe ) )
  {
    r.out.append( buf, n );
  }
  const int status = pclose( pipe );
  r.code           = WIFEXITED( status ) ? WEXITSTATUS( status ) : -1;
  return r;
}

struct Workspace
{
  fs::path root = fs::temp_directory_path() / "aric_cli_test";
  Workspace()
  {
    fs::remove_all( root );
    fs::create_directories( root );
  }
  ~Workspace() { fs::remove_all( root ); }
  std::string operator()( const std::string& name ) const { return ( root / name ).string(); }
};

void writeGrayRaw( const fs::path& p, int w, int h )
{
  std::ofstream out( p, std::ios::binary );
  for( int r = 0; r < h; r++ )
  {
    for( int c = 0; c < w; c++ )
    {
      out.put( char( 64 + ( ( r / 8 + c / 8 ) % 2 ) * 96 + ( r * c ) % 7 ) );
    }
  }
  const std::string chroma( size_t( w * h / 2 ), char( 128 ) );
  out.write( chroma.data(), std::streamsize( chroma.size() ) );
}

void writePpm( const fs::path& p, int w, int h, uint64_t seed )
{
  const Frame   f = fixture::syntheticFrame( w, h, seed );
  std::ofstream out( p, std::ios::binary );
  out << "P6\n" << w << " " << h << "\n255\n";
  for( int r = 0; r < h; r++ )
  {
    for( int c = 0; c < w; c++ )
    {
      const char px[3] = { char( f.y.at( r, c ) ), char( f.cb.at( r / 2, c / 2 ) ), char( f.cr.at( r / 2, c / 2 ) ) };
      out.write( px, 3 );
    }
  }
}

std::string fileBytes( const fs::path& p )
{
  return readTextFile( p );
}

}   // namespace

TEST_CASE( "cli: info prints the filters and the layer tables" )
{
  const auto f = cli( "info --filters" );
  CHECK( f.code == 0 );
  CHECK( f.out.find( "2 0 -4 -3 5 19 26 19 5 -3 -4 0 2" ) != std::string::npos );
  CHECK( f.out.find( "-1 4 -11 40 40 -11 4 -1" ) != std::string::npos );
  CHECK( f.out.find( "-4 36 36 -4" ) != std::string::npos );
  const auto a = cli( "info --arch" );
  CHECK( a.code == 0 );
  CHECK( a.out.find( "deconv" ) != std::string::npos );
  CHECK( cli( "info" ).code == 2 );
}

TEST_CASE( "cli: encode, decode round trip, forced low, exit codes" )
{
  Workspace ws;
  writeGrayRaw( ws( "gray.yuv" ), 128, 128 );

  const auto e = cli( "encode --input " + ws( "gray.yuv" ) + " --size 128x128 --qp 37 --out " + ws( "a/s.bin" ) );
  CHECK( e.code == 0 );
  CHECK( e.out.find( "p_hitting" ) != std::string::npos );
  CHECK( fs::exists( ws( "a/recon.yuv" ) ) );
  CHECK( fs::exists( ws( "a/decisions.csv" ) ) );
  CHECK( fs::exists( ws( "a/config.json" ) ) );
  CHECK( fs::exists( ws( "a/mode_map_y.csv" ) ) );
  CHECK( fs::file_size( ws( "a/recon.yuv" ) ) == 128 * 128 * 3 / 2 );

  const auto d = cli( "decode --bitstream " + ws( "a/s.bin" ) + " --out " + ws( "a/dec.yuv" ) );
  CHECK( d.code == 0 );
  CHECK( fileBytes( ws( "a/dec.yuv" ) ) == fileBytes( ws( "a/recon.yuv" ) ) );

  const auto low = cli( "encode --input " + ws( "gray.yuv" ) + " --size 128x128 --qp 37 --force-low --out " +
                         ws( "b/s.bin" ) );
  CHECK( low.code == 0 );
  CHECK( low.out.find( "p_hitting 1.0000" ) != std::string::npos );
  CHECK( cli( "decode --bitstream " + ws( "b/s.bin" ) + " --out " + ws( "b/dec.yuv" ) ).code == 0 );
  CHECK( fileBytes( ws( "b/dec.yuv" ) ) == fileBytes( ws( "b/recon.yuv" ) ) );

  // re-running gives byte-identical artefacts
  CHECK( cli( "encode --input " + ws( "gray.yuv" ) + " --size 128x128 --qp 37 --force-low --out " + ws( "c/s.bin" ) )
           .code == 0 );
  CHECK( fileBytes( ws( "c/s.bin" ) ) == fileBytes( ws( "b/s.bin" ) ) );
  CHECK( fileBytes( ws( "c/decisions.csv" ) ) == fileBytes( ws( "b/decisions.csv" ) ) );

  std::string cut = fileBytes( ws( "b/s.bin" ) );
  cut.resize( cut.size() * 2 / 3 );
  writeTextFile( ws( "cut.bin" ), cut );
  const auto t = cli( "decode --bitstream " + ws( "cut.bin" ) + " --out " + ws( "x.yuv" ) );
  CHECK( t.code == 4 );
  CHECK( t.out.find( "CTU " ) != std::string::npos );

  CHECK( cli( "encode --input " + ws( "missing.yuv" ) + " --size 128x128 --out " + ws( "m.bin" ) ).code == 3 );
  CHECK( cli( "encode --input " + ws( "gray.yuv" ) + " --size 12x --out " + ws( "m.bin" ) ).code == 2 );
  CHECK( cli( "encode --input " + ws( "gray.yuv" ) + " --size 128x128 --qp 60 --out " + ws( "m.bin" ) ).code == 2 );
  CHECK( cli( "encode --input " + ws( "gray.yuv" ) + " --size 128x128 --force-up cnn --out " + ws( "m.bin" ) ).code ==
         5 );
  CHECK( cli( "bogus" ).code == 2 );
}

TEST_CASE( "cli: model tags travel with the bitstream" )
{
  Workspace ws;
  fs::create_directories( ws( "m37" ) );
  fs::create_directories( ws( "m42" ) );
  const auto s37 = fixture::randomModels( 37, 1 );
  saveModel( ws( "m37/l.arun" ), *s37.luma );
  saveModel( ws( "m37/c.arun" ), *s37.chroma );
  const auto s42 = fixture::randomModels( 42, 2 );
  saveModel( ws( "m42/l.arun" ), *s42.luma );
  saveModel( ws( "m42/c.arun" ), *s42.chroma );
  writePpm( ws( "img.ppm" ), 128, 64, 3 );

  const auto e = cli( "encode --input " + ws( "img.ppm" ) + " --qp 39 --models " + ws( "m37" ) +
                       " --force-low --force-up cnn --out " + ws( "s.bin" ) );
  REQUIRE( e.code == 0 );
  CHECK( fileBytes( ws( "config.json" ) ).find( "\"model_tag\": 37" ) != std::string::npos );
  CHECK( cli( "decode --bitstream " + ws( "s.bin" ) + " --models " + ws( "m37" ) + " --out " + ws( "d.yuv" ) ).code ==
         0 );
  CHECK( fileBytes( ws( "d.yuv" ) ) == fileBytes( ws( "recon.yuv" ) ) );

  const auto wrong = cli( "decode --bitstream " + ws( "s.bin" ) + " --models " + ws( "m42" ) + " --out " + ws( "d.yuv" ) );
  CHECK( wrong.code == 5 );
  CHECK( wrong.out.find( "qp tag 37" ) != std::string::npos );
  const auto none = cli( "decode --bitstream " + ws( "s.bin" ) + " --out " + ws( "d.yuv" ) );
  CHECK( none.code == 5 );
  CHECK( none.out.find( "qp tag 37" ) != std::string::npos );
}

TEST_CASE( "cli: train is reproducible and zero epochs give the DCTIF-equivalent model" )
{
  Workspace ws;
  fs::create_directories( ws( "corpus" ) );
  for( int i = 0; i < 3; i++ )
  {
    writePpm( ws( "corpus/i" + std::to_string( i ) + ".ppm" ), 64, 64, uint64_t( 40 + i ) );
  }
  const std::string base = "train --corpus " + ws( "corpus" ) + " --qp 42 --variant chroma --seed 5 --batch 2 ";
  REQUIRE( cli( base + "--epochs 1 --out " + ws( "a/m.arun" ) ).code == 0 );
  REQUIRE( cli( base + "--epochs 1 --out " + ws( "b/m.arun" ) ).code == 0 );
  CHECK( fileBytes( ws( "a/m.arun" ) ) == fileBytes( ws( "b/m.arun" ) ) );
  CHECK( fs::exists( ws( "a/m_log.csv" ) ) );
  CHECK( fs::exists( ws( "a/train_manifest.jsonl" ) ) );
  CHECK( !fs::exists( ws( "a/m.arun.checkpoint" ) ) );

  REQUIRE( cli( base + "--epochs 0 --out " + ws( "z/m.arun" ) ).code == 0 );
  const auto m = loadModel( ws( "z/m.arun" ) );
  CHECK( m.qpTag() == 42 );
  CHECK( m.variant() == Variant::Chroma );
  for( float w: m.params()[kW5].values() )
  {
    CHECK( w == 0.0f );
  }

  // files named in the manifest are refused for evaluation
  const auto refused = cli( "sweep --images " + ws( "corpus" ) + " --qps 37 --manifest " +
                             ws( "a/train_manifest.jsonl" ) + " --out " + ws( "run" ) );
  CHECK( refused.code == 5 );
  CHECK( refused.out.find( "training manifest" ) != std::string::npos );
  CHECK( cli( "train --corpus " + ws( "nothing" ) + " --out " + ws( "n.arun" ) ).code == 3 );
}

TEST_CASE( "cli: sweep, eval and fit-alpha" )
{
  Workspace ws;
  fs::create_directories( ws( "imgs" ) );
  writePpm( ws( "imgs/p.ppm" ), 128, 128, 50 );
  REQUIRE( cli( "sweep --images " + ws( "imgs" ) + " --qps 27,32,37,42 --full-only --out " + ws( "anchor" ) ).code ==
           0 );
  REQUIRE( cli( "sweep --images " + ws( "imgs" ) + " --qps 27,32,37,42 --out " + ws( "test" ) ).code == 0 );
  CHECK( fs::exists( ws( "test/maps/p_qp32_mode_map_cb.csv" ) ) );

  const auto same = cli( "eval --anchor-dir " + ws( "anchor" ) + " --test-dir " + ws( "anchor" ) + " --out " +
                          ws( "r0" ) );
  CHECK( same.code == 0 );
  CHECK( same.out.find( "bd_rate_psnr_y 0.0000 %" ) != std::string::npos );
  CHECK( fs::exists( ws( "r0/hitting.csv" ) ) );

  // synthetic half-rate run
  auto recs = parseRdPointsCsv( readTextFile( ws( "anchor/rd_points.csv" ) ) );
  for( auto& r: recs )
  {
    r.point.bits /= 2;
  }
  fs::create_directories( ws( "half" ) );
  writeTextFile( ws( "half/rd_points.csv" ), rdPointsCsv( recs ) );
  const auto half = cli( "eval --anchor-dir " + ws( "anchor" ) + " --test-dir " + ws( "half" ) + " --out " + ws( "r1" ) );
  CHECK( half.code == 0 );
  CHECK( half.out.find( "bd_rate_psnr_y -50.0000 %" ) != std::string::npos );
  CHECK( fs::exists( ws( "r1/bd_rate.csv" ) ) );

  const auto fit = cli( "fit-alpha --runs " + ws( "test" ) );
  CHECK( fit.code == 0 );
  CHECK( fit.out.find( "histogram_peak" ) != std::string::npos );
  CHECK( fs::exists( ws( "test/alpha_hist.csv" ) ) );
  CHECK( cli( "fit-alpha --runs " + ws( "nowhere" ) ).code == 3 );
}
