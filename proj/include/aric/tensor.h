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

/** \file     tensor.h
    \brief    dense N-d array used for activations, parameters and gradients
*/

#pragma once

#include "aric/common.h"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <new>
#include <numeric>
#include <span>
#include <vector>

namespace aric
{

/// Cache-line aligned storage. Vectorised kernels pick their code path from the buffer address,
/// so a fixed alignment keeps floating-point results identical from run to run.
template<typename T>
struct AlignedAllocator
{
  using value_type                   = T;
  static constexpr size_t kAlignment = 64;

  AlignedAllocator() = default;
  template<typename U>
  AlignedAllocator( const AlignedAllocator<U>& )
  {
  }

  T* allocate( size_t n )
  {
    const size_t bytes = ( n * sizeof( T ) + kAlignment - 1 ) / kAlignment * kAlignment;
    void*        p     = std::aligned_alloc( kAlignment, std::max( bytes, kAlignment ) );
    if( !p )
    {
      throw std::bad_alloc();
    }
    return static_cast<T*>( p );
  }
  void deallocate( T* p, size_t ) { std::free( p ); }

  template<typename U>
  bool operator==( const AlignedAllocator<U>& ) const
  {
    return true;
  }
};

template<typename T>
using AlignedVector = std::vector<T, AlignedAllocator<T>>;

template<typename T>
class Tensor
{
public:
  Tensor() = default;
  explicit Tensor( std::vector<int> shape, T fill = T( 0 ) ) : m_shape( std::move( shape ) )
  {
    for( int d: m_shape )
    {
      ARIC_CHECK( d >= 0, ArgumentError, "negative tensor extent in ", shapeString() );
    }
    m_data.assign( elementCount( m_shape ), fill );
  }

  const std::vector<int>& shape() const { return m_shape; }
  int                     rank() const { return int( m_shape.size() ); }
  int                     dim( int i ) const { return m_shape[size_t( i )]; }
  size_t                  size() const { return m_data.size(); }
  bool                    empty() const { return m_data.empty(); }

  T*       data() { return m_data.data(); }
  const T* data() const { return m_data.data(); }

  std::span<T>       values() { return m_data; }
  std::span<const T> values() const { return m_data; }

  T&       operator[]( size_t i ) { return m_data[i]; }
  const T& operator[]( size_t i ) const { return m_data[i]; }

  /// (channel, row, col) access for rank-3 tensors.
  T&       at( int c, int y, int x ) { return m_data[( size_t( c ) * m_shape[1] + y ) * m_shape[2] + x]; }
  const T& at( int c, int y, int x ) const { return m_data[( size_t( c ) * m_shape[1] + y ) * m_shape[2] + x]; }

  void fill( T v ) { std::fill( m_data.begin(), m_data.end(), v ); }

  bool sameShape( const Tensor& o ) const { return m_shape == o.m_shape; }

  std::string shapeString() const
  {
    std::string s = "(";
    for( size_t i = 0; i < m_shape.size(); i++ )
    {
      s += ( i ? "x" : "" ) + std::to_string( m_shape[i] );
    }
    return s + ")";
  }

  template<typename U>
  Tensor<U> cast() const
  {
    Tensor<U> out( m_shape );
    for( size_t i = 0; i < m_data.size(); i++ )
    {
      out[i] = static_cast<U>( m_data[i] );
    }
    return out;
  }

  bool operator==( const Tensor& ) const = default;

  static size_t elementCount( const std::vector<int>& shape )
  {
    return std::accumulate( shape.begin(), shape.end(), size_t( 1 ),
                            []( size_t a, int b ) { return a * size_t( b ); } );
  }

private:
  std::vector<int> m_shape;
  AlignedVector<T> m_data;
};

}   // namespace aric
