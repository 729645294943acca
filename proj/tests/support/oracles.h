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

/** \file     oracles.h
    \brief    straightforward reference implementations used to cross-check the library
*/

#pragma once

#include "aric/frame.h"
#include "aric/upsampler_net.h"

#include <string>
#include <vector>

namespace oracle
{

using aric::Tensor;

/// Direct four-deep loop convolution with zero padding.
Tensor<float> naiveConv( const Tensor<float>& x, const Tensor<float>& w, const Tensor<float>& b, int pad );

/// Stride-2 transposed convolution by scattering each input sample into an uncropped canvas,
/// then cutting the 2H x 2W window starting at (k-1)/2.
Tensor<float> scatterDeconv( const Tensor<float>& x, const Tensor<float>& w, const Tensor<float>& b );

struct GradientCheck
{
  std::string name;
  double      maxRelError = 0;
  int         probes      = 0;
};

/// Builds a small double-precision network with random parameters, computes analytic gradients
/// for every parameter tensor, the network input and the skip input, and compares a random subset
/// of entries against central differences of the loss.
std::vector<GradientCheck> gradientCheckAllLayers( uint64_t seed );

/// Sum of squared differences computed with plain loops.
double naiveSsd( const aric::Plane& a, const aric::Plane& b );

}   // namespace oracle
