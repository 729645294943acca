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

/** \file     intra_codec.h
    \brief    8x8 block intra coder: prediction, integer DCT, dead-zone quantisation, run-level
              exp-Golomb entropy coding and per-block rate-distortion mode choice

    Block syntax: 2-bit mode, then for every non-zero coefficient in zig-zag order
    ue(run + 1), ue(|level| - 1), sign bit; ue(0) ends the block.
*/

#pragma once

#include "aric/bitstream.h"
#include "aric/frame.h"

#include <array>
#include <optional>
#include <vector>

namespace aric
{

constexpr int kBlockSize = 8;
constexpr int kMinQp     = 0;
constexpr int kMaxQp     = 57;   ///< full-resolution range plus the -6 / +6 resolution offset

/// Default Lagrange constant in lambda = c * 2^((qp - 12) / 3).
constexpr double kDefaultLambdaC = 0.57;

double lambdaFromQp( int qp, double c = kDefaultLambdaC );

enum class IntraMode : uint8_t
{
  DC         = 0,
  Horizontal = 1,
  Vertical   = 2,
  Planar     = 3
};

/// Reconstructed samples bordering a plane: the row above and the column to its left.
/// An absent side is predicted from the other one, or from 128 when both are absent.
struct PlaneBorder
{
  std::optional<std::vector<uint8_t>> top;    ///< width samples
  std::optional<std::vector<uint8_t>> left;   ///< height samples

  static PlaneBorder none() { return {}; }
  /// Row above and column left of the w x h region at (x, y) of p; sides outside p are absent.
  static PlaneBorder around( const Plane& p, int x, int y, int w, int h );
};

struct CodedBlock
{
  BitWriter              payload;
  size_t                 bits = 0;
  Plane                  recon;
  uint64_t               distortion = 0;   ///< SSD between input and recon
  std::vector<IntraMode> modes;            ///< per 8x8 block, raster order
};

/// Encodes p block by block. Each block takes the mode minimising SSD + lambda * bits; ties go
/// to the lower mode index.
CodedBlock encodePlaneIntra( const Plane& p, int qp, double lambda, const PlaneBorder& border );

/// Mirror of encodePlaneIntra, consuming exactly the bits it produced.
Plane decodePlaneIntra( BitReader& reader, int width, int height, int qp, const PlaneBorder& border );

namespace intra
{

using Block    = std::array<int, kBlockSize * kBlockSize>;
using Coeffs   = std::array<int, kBlockSize * kBlockSize>;

/// Zig-zag scan position -> raster index.
extern const std::array<int, 64> kZigZag;
/// Rows are the 8-point integer DCT basis.
extern const std::array<std::array<int, 8>, 8> kDctMatrix;

/// top and left hold 8 neighbouring samples each.
Block predict( IntraMode mode, const std::array<int, 8>& top, const std::array<int, 8>& left );

Coeffs forwardDct( const Block& residual );
Block  inverseDct( const Coeffs& coeffs );
Coeffs quantize( const Coeffs& coeffs, int qp );
Coeffs dequantize( const Coeffs& levels, int qp );

/// Exact number of bits for the block syntax, mode bits included.
int  blockBits( const Coeffs& levels );
void writeBlock( BitWriter& w, IntraMode mode, const Coeffs& levels );

}   // namespace intra

}   // namespace aric
