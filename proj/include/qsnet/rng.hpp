// Copyright 2026 The qsnet authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QSNET_RNG_HPP
#define QSNET_RNG_HPP

#include <array>
#include <cstdint>

namespace qsnet {

// Philox4x32-10 counter-based generator. Stateless block function: any
// (counter, key) pair maps to 128 independent output bits, so parallel
// consumers never share or race on generator state.
struct PhiloxBlock {
  std::array<std::uint32_t, 4> x;
};

inline PhiloxBlock philox4x32(std::array<std::uint32_t, 4> ctr,
                              std::array<std::uint32_t, 2> key) {
  constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
  constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = std::uint64_t(M0) * ctr[0];
    const std::uint64_t p1 = std::uint64_t(M1) * ctr[2];
    const std::uint32_t hi0 = std::uint32_t(p0 >> 32), lo0 = std::uint32_t(p0);
    const std::uint32_t hi1 = std::uint64_t(p1) >> 32, lo1 = std::uint32_t(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += W0;
    key[1] += W1;
  }
  return {ctr};
}

// Deterministic uniform stream keyed by (seed, stream). Stream ids partition
// the counter space: trajectory i uses stream i, bootstrap resample r uses
// stream (1<<63)|r. Draw n of a given stream is identical no matter which
// thread, order, or process asks for it.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : seed_(seed), stream_(stream) {}

  std::uint64_t next_u64() {
    const std::uint64_t n = draw_++;
    const PhiloxBlock b = philox4x32(
        {std::uint32_t(n), std::uint32_t(n >> 32), std::uint32_t(stream_),
         std::uint32_t(stream_ >> 32)},
        {std::uint32_t(seed_), std::uint32_t(seed_ >> 32)});
    return (std::uint64_t(b.x[0]) << 32) | b.x[1];
  }

  // Uniform double in [0, 1) with 53-bit resolution.
  double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

  std::uint64_t draws() const { return draw_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t draw_ = 0;
};

inline constexpr std::uint64_t bootstrap_stream(std::uint64_t resample) {
  return (std::uint64_t(1) << 63) | resample;
}

}  // namespace qsnet

#endif
