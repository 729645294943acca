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

#include "aric/common.h"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace aric
{

int resolveThreads( int requested )
{
  if( requested > 0 )
  {
    return requested;
  }
  if( const char* env = std::getenv( "ARIC_THREADS" ) )
  {
    const int v = std::atoi( env );
    if( v > 0 )
    {
      return v;
    }
  }
  return 1;
}

void parallelFor( int n, int threads, const std::function<void( int )>& fn )
{
  threads = std::min( std::max( threads, 1 ), std::max( n, 1 ) );
  if( threads == 1 )
  {
    for( int i = 0; i < n; i++ )
    {
      fn( i );
    }
    return;
  }

  std::atomic<int>   next{ 0 };
  std::exception_ptr firstError;
  std::mutex         errorMutex;

  auto worker = [&]()
  {
    for( int i = next++; i < n; i = next++ )
    {
      try
      {
        fn( i );
      }
      catch( ... )
      {
        std::lock_guard<std::mutex> lock( errorMutex );
        if( !firstError )
        {
          firstError = std::current_exception();
        }
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve( threads );
  for( int t = 0; t < threads; t++ )
  {
    pool.emplace_back( worker );
  }
  for( auto& th: pool )
  {
    th.join();
  }
  if( firstError )
  {
    std::rethrow_exception( firstError );
  }
}

}   // namespace aric
