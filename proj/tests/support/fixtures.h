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

/** \file     fixtures.h
    \brief    deterministic synthetic frames and small models for tests
*/

#pragma once

#include "aric/coder.h"

#include <cstdint>

namespace fixture
{

/// Natural-looking 4:2:0 content: smooth gradients, a few hard edges, texture and noise.
/// Width and height must be even; the frame is padded for coding.
aric::Frame syntheticFrame( int width, int height, uint64_t seed );

/// Frame with every sample of every plane equal to `value`.
aric::Frame constantFrame( int width, int height, uint8_t value );

/// Small network with He-initialised layers and small random last-layer weights so its output
/// differs from DCTIF.
aric::NetArch      smallArch( aric::Variant v );
aric::UpsamplerNet randomModel( aric::Variant v, int qpTag, uint64_t seed, double lastLayerScale = 0.02 );
aric::ModelSet     randomModels( int qpTag, uint64_t seed, double lastLayerScale = 0.02 );
/// All-zero parameters (output equals DCTIF).
aric::ModelSet     zeroModels( int qpTag );

}   // namespace fixture
