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

/** \file     coder.h
    \brief    adaptive-resolution frame coder: per-CTU choice between full-resolution coding and
              2x down-sampled coding, up-sampler selection, LR reference and two-stage up-sampling

    Bitstream: "ARIC", u16 version, u16 width, u16 height (original size), u8 qp,
    u8 model_qp_tag (255 = no models), u8 flags (bit 0: stage-2 refinement), all little-endian;
    then per CTU in raster order: 1 mode bit (1 = low), for low CTUs 3 up-sampler bits (Y, Cb, Cr;
    1 = CNN), then the Y, Cb and Cr intra payloads; zero bits up to the next byte at the end.
*/

#pragma once

#include "aric/intra_codec.h"
#include "aric/resampler.h"
#include "aric/upsampler_net.h"

#include <filesystem>
#include <optional>

namespace aric
{

constexpr uint16_t kBitstreamVersion = 1;
constexpr int      kNoModelTag       = 255;
constexpr int      kLowQpOffset      = 6;   ///< QP_low = QP - 6
constexpr double   kLowLambdaScale   = 0.25;
constexpr int      kMinFrameQp       = kLowQpOffset;
constexpr int      kMaxFrameQp       = 51;
/// LR luma context used to build the luma input of the chroma network (chroma context x 2).
constexpr int kChromaLumaContext = 2 * kContext;

enum class CodingMode : uint8_t
{
  Full = 0,
  Low  = 1
};

enum class UpMethod : uint8_t
{
  Dctif = 0,
  Cnn   = 1
};

const char* modeName( CodingMode m );
const char* upMethodName( UpMethod m );

/// Luma and chroma networks trained for one QP.
struct ModelSet
{
  int                         qpTag = kNoModelTag;
  std::optional<UpsamplerNet> luma;
  std::optional<UpsamplerNet> chroma;

  bool complete() const { return luma && chroma; }
  /// Checks both variants exist and carry the set's tag.
  void validate() const;

  static ModelSet fromModels( UpsamplerNet luma, UpsamplerNet chroma );
};

/// Tags of every *.arun file in dir that has both variants.
std::vector<int> availableModelTags( const std::filesystem::path& dir );
/// Model set whose tag is nearest to qp (ties go to the lower tag). ConfigError if none.
ModelSet loadNearestModels( const std::filesystem::path& dir, int qp );
/// Model set with exactly this tag. ConfigError naming the tag if missing.
ModelSet loadModelsForTag( const std::filesystem::path& dir, int tag );

struct CtuDecision
{
  int        index = 0;
  int        row   = 0;
  int        col   = 0;
  CodingMode mode  = CodingMode::Full;
  UpMethod   upY   = UpMethod::Dctif;
  UpMethod   upCb  = UpMethod::Dctif;
  UpMethod   upCr  = UpMethod::Dctif;
  size_t     bits  = 0;    ///< scheme bits of this CTU including mode/flag bits
  uint64_t   dFull = 0;    ///< SSD at full resolution of the chosen reconstruction (stage 1)
  uint64_t   dLow  = 0;    ///< SSD at low resolution of the LR reconstruction (low CTUs)

  // both trials, for diagnostics and external verification; a trial that was not run has bits 0
  size_t   fullTrialBits   = 0;
  uint64_t fullTrialDist   = 0;
  double   fullTrialCost   = 0;
  size_t   lowTrialBits    = 0;
  uint64_t lowTrialDist    = 0;   ///< full-resolution SSD after stage-1 up-sampling
  uint64_t lowTrialDistLr = 0;    ///< SSD at low resolution
  double   lowTrialCost    = 0;
  /// Stage-1 full-resolution SSD per channel (Y, Cb, Cr) for DCTIF and CNN; CNN is 0 when not run.
  std::array<uint64_t, 3> dctifDist{};
  std::array<uint64_t, 3> cnnDist{};
  bool                    cnnTried = false;
};

enum class ForceMode
{
  Auto,
  Full,
  Low
};

enum class ForceUp
{
  Auto,
  Cnn,
  Dctif
};

struct EncoderOptions
{
  ForceMode forceMode = ForceMode::Auto;
  ForceUp   forceUp   = ForceUp::Auto;
  bool      stage2    = true;
  double    lambdaC   = kDefaultLambdaC;
  int       threads   = 1;
};

struct EncodeResult
{
  std::vector<uint8_t>     bitstream;
  Frame                    recon;         ///< padded, final (after stage 2 when enabled)
  Frame                    stage1Recon;   ///< padded, before stage 2
  Frame                    lrReference;   ///< final LR reference plane
  std::vector<CtuDecision> decisions;
  int                      qp       = 0;
  int                      modelTag = kNoModelTag;
};

/// Codes one frame. Models may be absent (DCTIF only) unless CNN up-sampling is forced.
EncodeResult encodeFrame( const Frame& f, int qp, const ModelSet* models, const EncoderOptions& opts = {} );

struct BitstreamHeader
{
  uint16_t version  = kBitstreamVersion;
  int      width    = 0;
  int      height   = 0;
  int      qp       = 0;
  int      modelTag = kNoModelTag;
  bool     stage2   = true;
};

constexpr size_t kHeaderBytes = 4 + 2 + 2 + 2 + 1 + 1 + 1;

BitstreamHeader parseHeader( std::span<const uint8_t> bytes );

struct DecodeResult
{
  Frame                    recon;   ///< padded
  std::vector<CtuDecision> decisions;   ///< mode and flags per CTU, bits filled, distortions 0
  BitstreamHeader          header;
};

/// Models must carry the header's model tag when any CTU uses the CNN.
DecodeResult decodeFrame( std::span<const uint8_t> bytes, const ModelSet* models, int threads = 1 );

// ---------------------------------------------------------------------------------------------------------------------
// building blocks shared by the encoder, the decoder, the training pipeline and the tests
// ---------------------------------------------------------------------------------------------------------------------

enum class UpStage
{
  Stage1,   ///< bottom/right context of interior CTUs unavailable
  Stage2    ///< all four sides available
};

/// Side availability of a CTU's LR context. Sides on the frame border count as available and are
/// filled by replication of the frame edge.
std::array<bool, 4> contextAvailability( const CtuGrid& grid, int row, int col, UpStage stage );

/// LR tile (core + `ctxWidth` samples per side) around the core at (x, y) of the LR reference.
/// Positions outside the LR frame are clamped into it; clamped positions that land on the core
/// read from `core` (which may not have been written to ref yet). Unavailable sides and corners
/// are zero.
Plane buildContextTile( const Plane& ref, const Plane& core, int x, int y, int ctxWidth,
                        const std::array<bool, 4>& available );

/// Up-sampled planes of one CTU: [0] = Y (64x64), [1] = Cb, [2] = Cr (32x32).
using CtuPlanes = std::array<Plane, 3>;

/// Stage-1 / stage-2 up-sampling of one CTU's LR reconstruction with both methods.
struct UpsampleCandidates
{
  CtuPlanes                dctif;
  std::optional<CtuPlanes> cnn;
};

/// Up-samples the LR core planes `lrCore` of CTU (row, col). `lrRef` supplies context. CNN
/// candidates are produced when `models` is given; `cnnLuma` / `cnnChroma` restrict which
/// networks run.
UpsampleCandidates upsampleCtu( const Frame& lrRef, const std::array<Plane, 3>& lrCore, const CtuGrid& grid, int row,
                                int col, UpStage stage, const ModelSet* models, bool cnnLuma = true,
                                bool cnnChroma = true );

/// Network inputs for one CTU, normalised to [0, 1]; the loss window of the outputs is the
/// central core region (offset 2 * kContext).
struct CtuNetInputs
{
  Tensor<float> lumaX;          ///< 1 x 48 x 48
  Tensor<float> lumaDctif;      ///< 1 x 96 x 96
  Tensor<float> chromaX;        ///< 3 x 32 x 32 (down-sampled luma, Cb, Cr)
  Tensor<float> chromaDctif;    ///< 2 x 64 x 64
};

CtuNetInputs buildNetInputs( const Frame& lrRef, const std::array<Plane, 3>& lrCore, const CtuGrid& grid, int row,
                             int col, UpStage stage );

/// Maps a network output channel back to samples and crops the core region.
Plane netOutputToPlane( const Tensor<float>& out, int channel, int offset, int size );

}   // namespace aric
