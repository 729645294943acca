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

#include "aric/bitstream.h"

#include <bit>

namespace aric
{

void BitWriter::putBit( bool b )
{
  if( m_bits % 8 == 0 )
  {
    m_bytes.push_back( 0 );
  }
  if( b )
  {
    m_bytes.back() |= uint8_t( 0x80u >> ( m_bits % 8 ) );
  }
  m_bits++;
}

void BitWriter::putBits( uint32_t v, int n )
{
  ARIC_CHECK( n >= 0 && n <= 32, ArgumentError, "bit count ", n, " out of range" );
  for( int i = n - 1; i >= 0; i-- )
  {
    putBit( ( v >> i ) & 1u );
  }
}

void BitWriter::putUe( uint32_t v )
{
  ARIC_CHECK( v < 0xffffffffu, ArgumentError, "exp-Golomb value too large" );
  const uint32_t x   = v + 1;
  const int      len = std::bit_width( x );
  putBits( 0, len - 1 );
  putBits( x, len );
}

int BitWriter::ueLength( uint32_t v )
{
  return 2 * std::bit_width( v + 1 ) - 1;
}

void BitWriter::append( const BitWriter& other )
{
  for( size_t i = 0; i < other.m_bits; i++ )
  {
    putBit( ( other.m_bytes[i / 8] >> ( 7 - i % 8 ) ) & 1u );
  }
}

void BitWriter::alignZero()
{
  while( m_bits % 8 )
  {
    putBit( false );
  }
}

BitReader::BitReader( std::span<const uint8_t> bytes, size_t bitCount ) : m_bytes( bytes ), m_bits( bitCount )
{
  ARIC_CHECK( bitCount <= bytes.size() * 8, ArgumentError, "bit count ", bitCount, " exceeds buffer of ",
              bytes.size(), " bytes" );
}

bool BitReader::getBit()
{
  ARIC_CHECK( m_pos < m_bits, BitstreamError, "premature end of bitstream at bit ", m_pos );
  const bool b = ( m_bytes[m_pos / 8] >> ( 7 - m_pos % 8 ) ) & 1u;
  m_pos++;
  return b;
}

uint32_t BitReader::getBits( int n )
{
  ARIC_CHECK( n >= 0 && n <= 32, ArgumentError, "bit count ", n, " out of range" );
  uint32_t v = 0;
  for( int i = 0; i < n; i++ )
  {
    v = ( v << 1 ) | uint32_t( getBit() );
  }
  return v;
}

uint32_t BitReader::getUe()
{
  const size_t start = m_pos;
  int          zeros = 0;
  while( !getBit() )
  {
    zeros++;
    ARIC_CHECK( zeros < 32, BitstreamError, "invalid exp-Golomb code at bit ", start );
  }
  const uint32_t rest = getBits( zeros );
  return ( ( 1u << zeros ) | rest ) - 1;
}

}   // namespace aric
