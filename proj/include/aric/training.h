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

/** \file     training.h
    \brief    training-pair generation from an image corpus and per-QP up-sampler training
*/

#pragma once

#include "aric/coder.h"

#include <functional>
#include <string>

namespace aric
{

/// One CTU of a low-resolution coded image. Tensors hold samples / 255. The loss window of the
/// network output is the target-sized region at (kPairCrop, kPairCrop).
struct TrainingPair
{
  Variant       variant = Variant::Luma;
  int           qp      = 0;
  UpStage       stage   = UpStage::Stage1;   ///< context availability the input was built with
  int           image   = 0;                 ///< index into the generated image list
  int           ctu     = 0;
  Tensor<float> x;         ///< luma 1x48x48, chroma 3x32x32 (down-sampled Y, Cb, Cr)
  Tensor<float> dctifUp;   ///< luma 1x96x96, chroma 2x64x64
  Tensor<float> y;         ///< original core: luma 1x64x64, chroma 2x32x32
};

constexpr int kPairCrop = 2 * kContext;

struct PairOptions
{
  int      qp              = 37;
  uint64_t seed            = 1;
  double   stage2Fraction  = 0.5;   ///< share of CTUs whose input uses all-sides context
  int      threads         = 1;
};

struct PairSet
{
  std::vector<TrainingPair>          luma;
  std::vector<TrainingPair>          chroma;
  std::vector<std::filesystem::path> images;    ///< images that produced pairs, in order
  std::vector<std::string>           skipped;   ///< "path: reason" for unreadable images
};

/// Sorted list of the PPM/PGM files in a directory (non-recursive).
std::vector<std::filesystem::path> listCorpus( const std::filesystem::path& dir );

/// Codes every image with all CTUs forced to low resolution and DCTIF up-sampling at opts.qp and
/// emits one luma and one chroma pair per CTU. Output order follows `images`; the result does not
/// depend on the thread count.
PairSet generatePairs( const std::vector<std::filesystem::path>& images, const PairOptions& opts );

/// Pairs of one loaded frame; the context stage of each CTU is drawn from (opts.seed, imageIndex).
void appendFramePairs( const Frame& f, int imageIndex, const PairOptions& opts, PairSet& out );

struct CorpusSplit
{
  std::vector<std::filesystem::path> train;
  std::vector<std::filesystem::path> val;
};
/// The last 10% (rounded, at least one when there are two or more files) of the sorted list
/// form the validation split.
CorpusSplit splitCorpus( const std::vector<std::filesystem::path>& sorted );

struct ManifestEntry
{
  std::string path;
  std::string split;   ///< "train" or "val"
};
void                       writeManifest( const std::filesystem::path& file, const CorpusSplit& split );
std::vector<ManifestEntry> readManifest( const std::filesystem::path& file );
/// ConfigError if any of `files` is listed in the manifest (compared as canonical paths).
void refuseTrainingFiles( const std::vector<ManifestEntry>& manifest, const std::vector<std::filesystem::path>& files );

struct TrainLogRow
{
  int    epoch    = 0;
  double trainMse = 0;
  double valMse   = 0;
};

struct TrainOptions
{
  std::filesystem::path                    checkpoint;   ///< best model so far is saved here when set
  std::function<void( const TrainLogRow& )> onEpoch;
};

struct TrainOutcome
{
  UpsamplerNet             model;   ///< parameters of the epoch with the lowest validation MSE
  std::vector<TrainLogRow> log;     ///< epoch 0 is the initial model
  double                   dctifTrainMse = 0;
  double                   dctifValMse   = 0;
  double                   bestValMse    = 0;
  int                      bestEpoch     = 0;
  int                      epochsRun     = 0;
  std::string              stopReason;
};

/// Trains a fresh model (He initialisation from cfg.seed, zero last layer). Validation pairs may be
/// empty, in which case the training MSE drives early stopping. A non-finite loss aborts with a
/// TrainingError after writing the last good model to the checkpoint.
TrainOutcome trainModel( const std::vector<TrainingPair>& train, const std::vector<TrainingPair>& val, Variant variant,
                         int qp, const TrainConfig& cfg, const TrainOptions& opts = {},
                         const NetArch* arch = nullptr );

/// Mean loss-window MSE of the model over the pairs (normalised sample units).
double pairsMse( const UpsamplerNet& net, const std::vector<TrainingPair>& pairs );
/// Same for the DCTIF input alone.
double pairsDctifMse( const std::vector<TrainingPair>& pairs );

std::string trainLogCsv( const std::vector<TrainLogRow>& log );

}   // namespace aric
