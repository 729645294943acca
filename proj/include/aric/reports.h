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

/** \file     reports.h
    \brief    CSV run records shared by the command-line tool and the experiments
*/

#pragma once

#include "aric/evaluation.h"

#include <map>

namespace aric
{

/// One coded frame of a run.
struct RdRecord
{
  std::string image;
  int         qp       = 0;
  RdPoint     point;
  double      pHitting = 0;
};

std::string           rdPointsCsv( const std::vector<RdRecord>& records );
std::vector<RdRecord> parseRdPointsCsv( const std::string& text, const std::string& origin = "rd_points.csv" );

/// Curves keyed by image name, points in file order.
std::map<std::string, RdCurve> curvesByImage( const std::vector<RdRecord>& records, const std::string& label );

/// Per-CTU decision rows of a run.
struct DecisionRecord
{
  std::string image;
  int         qp = 0;
  CtuDecision decision;
};

std::string                 decisionsCsvHeader();
std::string                 decisionsCsvRows( const std::string& image, int qp, const std::vector<CtuDecision>& ds );
std::vector<DecisionRecord> parseDecisionsCsv( const std::string& text, const std::string& origin = "decisions.csv" );

/// BD-rate of `test` against `anchor` for every image present in both, plus their mean.
struct BdRow
{
  std::string image;
  double      psnrY = 0;
  double      ssimY = 0;
};
std::vector<BdRow> bdRateByImage( const std::vector<RdRecord>& anchor, const std::vector<RdRecord>& test );
std::string        bdRateCsv( const std::vector<BdRow>& rows );

/// Distortion-ratio analysis: one (dLow, dFull) line per CTU across the QPs of a run, plus a
/// global fit over all samples.
struct AlphaAnalysis
{
  struct CtuFit
  {
    std::string image;
    int         ctu = 0;
    AlphaFit    fit;
  };
  AlphaFit            global;
  std::vector<CtuFit> perCtu;
  Histogram           hist;
};
AlphaAnalysis analyseAlpha( const std::vector<DecisionRecord>& records, double binWidth = 0.5, double hi = 16.0 );
std::string   alphaHistogramCsv( const Histogram& h );
std::string   alphaFitsCsv( const AlphaAnalysis& a );

std::string readTextFile( const std::filesystem::path& path );
void        writeTextFile( const std::filesystem::path& path, const std::string& text );

}   // namespace aric
