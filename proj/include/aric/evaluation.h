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

/** \file     evaluation.h
    \brief    quality metrics, Bjontegaard delta rate, distortion-ratio fitting and mode statistics
*/

#pragma once

#include "aric/coder.h"

#include <limits>
#include <string>

namespace aric
{

constexpr double kInfinity = std::numeric_limits<double>::infinity();
constexpr double kNaN      = std::numeric_limits<double>::quiet_NaN();

/// 10 log10(255^2 / MSE); identical planes give +infinity.
double psnr( const Plane& a, const Plane& b );

constexpr int    kSsimWindow = 11;
constexpr double kSsimSigma  = 1.5;
constexpr double kSsimK1     = 0.01;
constexpr double kSsimK2     = 0.03;

/// Mean SSIM over every fully contained 11x11 Gaussian window (sigma 1.5, L = 255).
double ssim( const Plane& a, const Plane& b );

/// Quality of a reconstruction on the original (unpadded) region.
struct FrameQuality
{
  double psnrY  = 0;
  double psnrCb = 0;
  double psnrCr = 0;
  double ssimY  = 0;
};
FrameQuality frameQuality( const Frame& original, const Frame& recon );

struct RdPoint
{
  double bits   = 0;
  double psnrY  = 0;
  double ssimY  = 0;
  double psnrCb = 0;
  double psnrCr = 0;
};

struct RdCurve
{
  std::string          label;
  std::vector<RdPoint> points;
};

enum class QualityMetric
{
  PsnrY,
  SsimY,
  PsnrCb,
  PsnrCr
};

/// Average bit-rate difference of `test` against `anchor` in percent at equal quality: cubic fit of
/// log10(rate) over quality, integrated over the overlapping quality range.
double bdRate( const RdCurve& anchor, const RdCurve& test, QualityMetric metric = QualityMetric::PsnrY );

/// Least-squares fit of dFull = alpha * dLow + beta.
struct AlphaFit
{
  double                                 alpha = 0;
  double                                 beta  = 0;
  double                                 r2    = 0;
  std::vector<std::pair<double, double>> samples;   ///< (dLow, dFull)
};
AlphaFit fitAlpha( std::vector<std::pair<double, double>> samples );

struct Histogram
{
  double              lo       = 0;
  double              binWidth = 0;
  std::vector<size_t> counts;
  size_t              below = 0;
  size_t              above = 0;

  /// Centre of the fullest bin (first one on ties).
  double peak() const;
};
Histogram histogram( const std::vector<double>& values, double lo, double hi, double binWidth );

/// Share of low-resolution CTUs and, among those, the share using the CNN per channel.
struct HittingStats
{
  double pHitting = 0;
  double pLuma    = kNaN;
  double pCb      = kNaN;
  double pCr      = kNaN;
  size_t total    = 0;
  size_t hitting  = 0;
};
HittingStats hittingStats( const std::vector<CtuDecision>& decisions );

/// Per-CTU mode map for one channel as CSV rows: 0 = full resolution, 1 = low + DCTIF, 2 = low + CNN.
std::string modeMapCsv( const std::vector<CtuDecision>& decisions, int channel );

/// Number formatting for reports: "inf", "-inf", "nan", otherwise fixed with `digits` decimals.
std::string formatMetric( double v, int digits = 6 );
/// Inverse of formatMetric.
double parseMetric( const std::string& text );

}   // namespace aric
