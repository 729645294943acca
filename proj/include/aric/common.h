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

/** \file     common.h
    \brief    error taxonomy, argument checks and a small deterministic parallel-for
*/

#pragma once

#include <cstdint>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

namespace aric
{

/// Base of every error raised by the library. The exit code is what the CLI returns for it.
class AricError : public std::runtime_error
{
public:
  AricError( const std::string& msg, int exitCode ) : std::runtime_error( msg ), m_exitCode( exitCode ) {}
  int exitCode() const { return m_exitCode; }

private:
  int m_exitCode;
};

class ArgumentError : public AricError
{
public:
  explicit ArgumentError( const std::string& msg ) : AricError( msg, 2 ) {}
};

class IoError : public AricError
{
public:
  explicit IoError( const std::string& msg ) : AricError( msg, 3 ) {}
};

class BitstreamError : public AricError
{
public:
  explicit BitstreamError( const std::string& msg ) : AricError( msg, 4 ) {}
};

class ConfigError : public AricError
{
public:
  explicit ConfigError( const std::string& msg ) : AricError( msg, 5 ) {}
};

/// Model file is malformed (bad magic, version, layer table or size).
class FormatError : public AricError
{
public:
  explicit FormatError( const std::string& msg ) : AricError( msg, 5 ) {}
};

class TrainingError : public AricError
{
public:
  explicit TrainingError( const std::string& msg ) : AricError( msg, 6 ) {}
};

class EvaluationError : public AricError
{
public:
  explicit EvaluationError( const std::string& msg ) : AricError( msg, 2 ) {}
};

template<typename... Args>
std::string str( Args&&... args )
{
  std::ostringstream os;
  ( os << ... << std::forward<Args>( args ) );
  return os.str();
}

#define ARIC_CHECK( cond, ErrType, ... )                                                                               \
  do                                                                                                                   \
  {                                                                                                                    \
    if( !( cond ) )                                                                                                    \
    {                                                                                                                  \
      throw ErrType( ::aric::str( __VA_ARGS__ ) );                                                                     \
    }                                                                                                                  \
  } while( 0 )

/// Number of worker threads: explicit value if > 0, else ARIC_THREADS, else 1.
int resolveThreads( int requested = 0 );

/// Runs fn(i) for i in [0, n). Work items must write disjoint outputs; results are then
/// independent of the thread count. The first exception thrown by any item is rethrown.
void parallelFor( int n, int threads, const std::function<void( int )>& fn );

inline uint8_t clipPel( int v )
{
  return static_cast<uint8_t>( v < 0 ? 0 : ( v > 255 ? 255 : v ) );
}

}   // namespace aric
