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

/** \file     frame.h
    \brief    planar 8-bit sample grids, 4:2:0 frames, CTU tiling and raw I420 I/O
*/

#pragma once

#include "aric/common.h"

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace aric
{

constexpr int kCtuSize       = 64;   ///< luma CTU size
constexpr int kChromaCtuSize = kCtuSize / 2;

/// Row-major grid of 8-bit samples. (row, col) indexing everywhere.
class Plane
{
public:
  Plane() = default;
  Plane( int width, int height, uint8_t fill = 0 );
  Plane( int width, int height, std::vector<uint8_t> samples );

  int  width() const { return m_width; }
  int  height() const { return m_height; }
  bool empty() const { return m_samples.empty(); }

  uint8_t  at( int row, int col ) const { return m_samples[size_t( row ) * m_width + col]; }
  uint8_t& at( int row, int col ) { return m_samples[size_t( row ) * m_width + col]; }

  std::span<const uint8_t> row( int r ) const { return { m_samples.data() + size_t( r ) * m_width, size_t( m_width ) }; }
  std::span<uint8_t>       row( int r ) { return { m_samples.data() + size_t( r ) * m_width, size_t( m_width ) }; }

  const std::vector<uint8_t>& samples() const { return m_samples; }

  /// Copy of the w x h region whose top-left sample is (y, x). Region must lie inside.
  Plane crop( int x, int y, int w, int h ) const;
  /// Overwrite the region at (y, x) with src. Region must lie inside.
  void paste( const Plane& src, int x, int y );

  bool operator==( const Plane& ) const = default;

private:
  int                  m_width  = 0;
  int                  m_height = 0;
  std::vector<uint8_t> m_samples;
};

/// Margins are replicated from the nearest edge sample.
Plane padReplicate( const Plane& p, int left, int right, int top, int bottom );

/// Sum of squared differences over equally sized planes.
uint64_t ssd( const Plane& a, const Plane& b );

/// YUV 4:2:0 frame. Coding frames are padded to CTU multiples; origWidth/origHeight keep the
/// region that metrics and output files use.
struct Frame
{
  int   width      = 0;
  int   height     = 0;
  int   origWidth  = 0;
  int   origHeight = 0;
  Plane y;
  Plane cb;
  Plane cr;

  const Plane& plane( int comp ) const { return comp == 0 ? y : ( comp == 1 ? cb : cr ); }
  Plane&       plane( int comp ) { return comp == 0 ? y : ( comp == 1 ? cb : cr ); }

  bool operator==( const Frame& ) const = default;
};

/// Builds a coding frame from unpadded planes: dimensions are extended by border replication to
/// the next multiple of 64 (luma) and the given size is recorded as the original size.
Frame makeFrame( const Plane& y, const Plane& cb, const Plane& cr );

/// Original-size copy of a padded frame.
Frame cropToOriginal( const Frame& f );

struct CtuGrid
{
  int cols = 0;
  int rows = 0;

  int count() const { return cols * rows; }

  static CtuGrid of( int width, int height );
  static CtuGrid of( const Frame& f ) { return of( f.width, f.height ); }
};

struct CtuBlocks
{
  Plane y;    ///< 64x64
  Plane cb;   ///< 32x32
  Plane cr;   ///< 32x32
};

CtuBlocks extractCtu( const Frame& f, int row, int col );
void      writeCtu( Frame& f, int row, int col, const CtuBlocks& blocks );

/// Reads one I420 frame (Y, then Cb, then Cr) and pads it for coding.
Frame loadFrame( const std::filesystem::path& path, int width, int height );
/// Writes the original (cropped) region as I420.
void saveFrame( const std::filesystem::path& path, const Frame& f );

/// Parses "WxH".
std::pair<int, int> parseSize( const std::string& text );

}   // namespace aric
