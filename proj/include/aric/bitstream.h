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

/** \file     bitstream.h
    \brief    MSB-first bit writer / reader with unsigned exp-Golomb codes
*/

#pragma once

#include "aric/common.h"

#include <cstdint>
#include <span>
#include <vector>

namespace aric
{

class BitWriter
{
public:
  void putBit( bool b );
  /// Writes the n low bits of v, most significant first. n <= 32.
  void putBits( uint32_t v, int n );
  /// Unsigned exp-Golomb code (0 -> "1", 1 -> "010", 2 -> "011", ...).
  void putUe( uint32_t v );
  void append( const BitWriter& other );
  /// Pads with zero bits to the next byte boundary.
  void alignZero();

  size_t                      bitCount() const { return m_bits; }
  const std::vector<uint8_t>& bytes() const { return m_bytes; }

  static int ueLength( uint32_t v );

private:
  std::vector<uint8_t> m_bytes;
  size_t               m_bits = 0;
};

/// Reads from a byte buffer; every failure is a BitstreamError naming the bit offset.
class BitReader
{
public:
  BitReader( std::span<const uint8_t> bytes, size_t bitCount );
  explicit BitReader( std::span<const uint8_t> bytes ) : BitReader( bytes, bytes.size() * 8 ) {}

  bool     getBit();
  uint32_t getBits( int n );
  uint32_t getUe();

  size_t position() const { return m_pos; }
  size_t bitCount() const { return m_bits; }
  size_t remaining() const { return m_bits - m_pos; }

private:
  std::span<const uint8_t> m_bytes;
  size_t                   m_bits = 0;
  size_t                   m_pos  = 0;
};

}   // namespace aric
