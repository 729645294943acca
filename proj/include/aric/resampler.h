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

/** \file     resampler.h
    \brief    fixed 2:1 down-sampling and DCT-based half-pel 1:2 up-sampling

    All filtering is integer; each output sample is rounded exactly once.
*/

#pragma once

#include "aric/frame.h"

#include <array>

namespace aric
{

/// 13-tap anchor low-pass applied separably before 2:1 decimation. Sum is 64.
inline constexpr std::array<int, 13> kDownFilter = { 2, 0, -4, -3, 5, 19, 26, 19, 5, -3, -4, 0, 2 };
/// Half-pel DCT interpolation filters. Sums are 64.
inline constexpr std::array<int, 8> kLumaHalfPel   = { -1, 4, -11, 40, 40, -11, 4, -1 };
inline constexpr std::array<int, 4> kChromaHalfPel = { -4, 36, 36, -4 };

/// LR samples of surrounding context kept per available side.
constexpr int kContext = 8;

enum class FilterKind
{
  Luma,
  Chroma
};

/// Number of LR samples a half-pel tap reaches beyond the interpolated position.
constexpr int filterReach( FilterKind kind )
{
  return kind == FilterKind::Luma ? 4 : 2;
}

enum Side
{
  kTop = 0,
  kLeft,
  kBottom,
  kRight
};

enum Corner
{
  kTopLeft = 0,
  kTopRight,
  kBottomLeft,
  kBottomRight
};

/// Surrounding LR samples of a block to be up-sampled. An available side carries a strip of
/// `width` rows (top/bottom, block-wide) or columns (left/right, block-high). A corner square is
/// present exactly when both of its sides are available. Everything unavailable reads as zero.
struct BoundaryContext
{
  int                  width = kContext;
  std::array<bool, 4>  available{};
  std::array<Plane, 4> strips;
  std::array<Plane, 4> corners;

  /// Context with every side unavailable.
  static BoundaryContext none( int width = kContext );

  /// Splits a (h + 2 width) x (w + 2 width) tile into strips and corners per `available`.
  static BoundaryContext fromTile( const Plane& tile, int width, const std::array<bool, 4>& available );

  /// Throws ArgumentError unless the extents match a w x h block.
  void validate( int blockWidth, int blockHeight ) const;
};

/// Block surrounded by its context; unavailable regions are zero.
Plane assembleTile( const Plane& block, const BoundaryContext& ctx );

/// Separable low-pass then 2:1 decimation; out-of-plane taps use border replication.
Plane downsample2x( const Plane& p );

/// Applies downsample2x to all three planes. The result is a half-size frame.
Frame downsampleFrame( const Frame& f );

/// Half-pel up-sampling of a whole tile: even output positions copy the input, odd positions
/// are interpolated; taps beyond the tile read zero.
Plane upsampleDctifTile( const Plane& tile, FilterKind kind );

/// Up-samples a block using its boundary context.
Plane upsampleDctif( const Plane& p, const BoundaryContext& ctx, FilterKind kind );

}   // namespace aric
