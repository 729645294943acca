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

/** \file     nn_ops.h
    \brief    layer primitives with hand-written backward passes

    Activations are (channels, height, width). Convolution kernels are (out, in, kh, kw);
    transposed-convolution kernels are (in, out, kh, kw). Backward functions accumulate
    into the parameter gradients and overwrite the input gradient.
    Instantiated for float (production) and double (gradient checks).
*/

#pragma once

#include "aric/tensor.h"

#include <utility>

namespace aric
{

/// Stride-1 cross-correlation with `pad` zero samples on every side.
template<typename T>
Tensor<T> convForward( const Tensor<T>& x, const Tensor<T>& w, const Tensor<T>& b, int pad );

template<typename T>
void convBackward( const Tensor<T>& x, const Tensor<T>& w, int pad, const Tensor<T>& dy, Tensor<T>* dx,
                   Tensor<T>& dw, Tensor<T>& db );

/// First output row/col kept from the full transposed-convolution result, so that output
/// position 2i is centred on input i. Output is always exactly 2H x 2W.
constexpr int deconvCropBegin( int k )
{
  return ( k - 1 ) / 2;
}

/// Stride-2 transposed convolution: every input sample scatters a kernel-sized window scaled by
/// its value; overlapping windows are summed.
template<typename T>
Tensor<T> deconvForward( const Tensor<T>& x, const Tensor<T>& w, const Tensor<T>& b );

template<typename T>
void deconvBackward( const Tensor<T>& x, const Tensor<T>& w, const Tensor<T>& dy, Tensor<T>* dx, Tensor<T>& dw,
                     Tensor<T>& db );

template<typename T>
void reluInPlace( Tensor<T>& x );

/// Masks dy by the activation pattern of the ReLU output y.
template<typename T>
void reluBackward( const Tensor<T>& y, Tensor<T>& dy );

/// Channel concatenation, a first.
template<typename T>
Tensor<T> concatChannels( const Tensor<T>& a, const Tensor<T>& b );

template<typename T>
std::pair<Tensor<T>, Tensor<T>> splitChannels( const Tensor<T>& d, int channelsA );

template<typename T>
Tensor<T> addTensors( const Tensor<T>& a, const Tensor<T>& b );

}   // namespace aric
