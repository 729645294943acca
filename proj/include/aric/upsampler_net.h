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

/** \file     upsampler_net.h
    \brief    five-layer residual up-sampling network, its training step and its file format

    Layer order (one entry per row of the layer table):

      conv  k1  in  -> c1   + ReLU                feature extraction
      conv  k2a c1  -> c2a  + ReLU  \
      conv  k2b c1  -> c2b  + ReLU   > concat      multi-scale features (branch a first)
      deconv k3 c2  -> c3   + ReLU, stride 2       resolution change
      conv  k4a c3  -> c4a  + ReLU  \
      conv  k4b c3  -> c4b  + ReLU   > concat      multi-scale reconstruction
      conv  k5  c4  -> out                          no activation
      add_skip                                      + DCTIF up-sample of the input

    Luma maps 1 x h x w to 1 x 2h x 2w. Chroma maps (Y down-sampled to chroma size, Cb, Cr) to
    (Cb, Cr); the two output channels of the last conv are independent heads over shared
    features. Samples are normalised to [0, 1].
*/

#pragma once

#include "aric/nn_ops.h"

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace aric
{

enum class Variant : uint8_t
{
  Luma   = 0,
  Chroma = 1
};

const char* variantName( Variant v );
Variant     parseVariant( const std::string& s );

enum class LayerKind : uint8_t
{
  Conv    = 0,
  Deconv  = 1,
  Relu    = 2,
  Concat  = 3,
  AddSkip = 4
};

struct LayerSpec
{
  LayerKind kind  = LayerKind::Conv;
  int       kh    = 0;
  int       kw    = 0;
  int       inCh  = 0;
  int       outCh = 0;

  int  stride() const { return kind == LayerKind::Deconv ? 2 : 1; }
  int  pad() const;
  bool operator==( const LayerSpec& ) const = default;
};

struct NetArch
{
  int inChannels  = 1;
  int outChannels = 1;
  int k1 = 5, c1 = 64;
  int k2a = 3, c2a = 32;
  int k2b = 5, c2b = 32;
  int k3 = 9, c3 = 32;
  int k4a = 3, c4a = 16;
  int k4b = 5, c4b = 16;
  int k5 = 3;

  static NetArch forVariant( Variant v );

  std::vector<LayerSpec>        layerTable() const;
  static NetArch                fromLayerTable( const std::vector<LayerSpec>& table );
  std::vector<std::vector<int>> paramShapes() const;
  size_t                        paramCount() const;

  bool operator==( const NetArch& ) const = default;
};

/// Parameter tensors in declaration order.
enum ParamIndex
{
  kW1 = 0, kB1, kW2a, kB2a, kW2b, kB2b, kW3, kB3, kW4a, kB4a, kW4b, kB4b, kW5, kB5, kNumParams
};

template<typename T>
struct ForwardTrace
{
  Tensor<T> x, a1, a2a, a2b, cat2, a3, a4a, a4b, cat4, out;
};

template<typename T>
class UpsamplerNetT
{
public:
  UpsamplerNetT() = default;
  /// All parameters zero: the output equals the DCTIF input.
  UpsamplerNetT( Variant variant, int qpTag, const NetArch& arch );

  /// He-scaled Gaussian weights, zero biases, zero last-layer weights.
  static UpsamplerNetT initialized( Variant variant, int qpTag, const NetArch& arch, uint64_t seed );

  Variant        variant() const { return m_variant; }
  int            qpTag() const { return m_qpTag; }
  void           setQpTag( int qp ) { m_qpTag = qp; }
  const NetArch& arch() const { return m_arch; }

  std::vector<Tensor<T>>&       params() { return m_params; }
  const std::vector<Tensor<T>>& params() const { return m_params; }

  /// Residual prediction plus dctifUp. Safe to call concurrently.
  Tensor<T> forward( const Tensor<T>& x, const Tensor<T>& dctifUp ) const;
  /// Same as forward, keeping every activation for backward().
  Tensor<T> forward( const Tensor<T>& x, const Tensor<T>& dctifUp, ForwardTrace<T>& trace ) const;

  /// Accumulates parameter gradients for the output gradient dOut; optionally returns dL/dx.
  void backward( const ForwardTrace<T>& trace, const Tensor<T>& dOut, std::vector<Tensor<T>>& grads,
                 Tensor<T>* dx = nullptr ) const;

  std::vector<Tensor<T>> zeroGradients() const;

  template<typename U>
  UpsamplerNetT<U> cast() const
  {
    UpsamplerNetT<U> out( m_variant, m_qpTag, m_arch );
    for( int i = 0; i < kNumParams; i++ )
    {
      out.params()[size_t( i )] = m_params[size_t( i )].template cast<U>();
    }
    return out;
  }

  bool operator==( const UpsamplerNetT& ) const = default;

private:
  void checkInputs( const Tensor<T>& x, const Tensor<T>& dctifUp ) const;

  Variant                m_variant = Variant::Luma;
  int                    m_qpTag   = 0;
  NetArch                m_arch;
  std::vector<Tensor<T>> m_params;
};

using UpsamplerNet = UpsamplerNetT<float>;

struct TrainConfig
{
  double   lr         = 2e-2;
  double   momentum   = 0.9;
  int      batch      = 8;
  int      epochs     = 50;
  uint64_t seed       = 1;
  double   clipNorm   = 1.0;   ///< global gradient L2 norm limit, <= 0 disables
  int      patience   = 10;    ///< epochs without validation improvement before stopping
  double   timeBudget = 0.0;   ///< seconds of training before stopping after the current epoch, 0 = unlimited

  void validate() const;
};

/// One training example. The loss covers the target-sized window of the output whose top-left
/// corner is (cropY, cropX); outputs outside it do not contribute.
template<typename T>
struct TrainSample
{
  const Tensor<T>* x       = nullptr;
  const Tensor<T>* dctifUp = nullptr;
  const Tensor<T>* target  = nullptr;
  int              cropY   = 0;
  int              cropX   = 0;
};

/// Mean squared error of one sample over its loss window; optionally writes dLoss/dOut.
template<typename T>
double sampleMse( const Tensor<T>& out, const TrainSample<T>& s, Tensor<T>* dOut, double scale = 1.0 );

/// Momentum SGD with global-norm gradient clipping.
template<typename T>
class SgdOptimizer
{
public:
  explicit SgdOptimizer( const TrainConfig& cfg ) : m_cfg( cfg ) { cfg.validate(); }

  /// Mean MSE of the batch before the update. Throws TrainingError on a non-finite loss, naming
  /// batchIndex; parameters are left untouched in that case.
  double backwardAndStep( UpsamplerNetT<T>& net, std::span<const TrainSample<T>> batch, int batchIndex = 0 );

  const TrainConfig& config() const { return m_cfg; }

private:
  TrainConfig            m_cfg;
  std::vector<Tensor<T>> m_velocity;
};

/// Model file: "ARUN", u16 version, u8 variant, u8 qp_tag, u16 layer count, layer table rows of
/// (u8 kind, u8 kh, u8 kw, u16 in_ch, u16 out_ch), then every parameter as little-endian f32 in
/// declaration order (weights before bias per layer).
std::vector<uint8_t> serializeModel( const UpsamplerNet& net );
UpsamplerNet         deserializeModel( std::span<const uint8_t> bytes, const std::string& origin = "model" );
void                 saveModel( const std::filesystem::path& path, const UpsamplerNet& net );
UpsamplerNet         loadModel( const std::filesystem::path& path );

constexpr uint16_t kModelVersion = 1;

}   // namespace aric
