// Copyright 2026 The Chronos Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CHRONOS_COMMON_RANDOM_H_
#define CHRONOS_COMMON_RANDOM_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace chronos {

using Rng = std::mt19937_64;

// SplitMix64 finalizer; a bijective 64-bit mixer.
constexpr uint64_t Mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// 64-bit FNV-1a over raw bytes.
constexpr uint64_t Fnv1a64(const unsigned char* data, std::size_t size,
                           uint64_t hash = 0xcbf29ce484222325ULL) {
  for (std::size_t i = 0; i < size; ++i) {
    hash ^= data[i];
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

inline uint64_t Fnv1a64(std::string_view s) {
  return Fnv1a64(reinterpret_cast<const unsigned char*>(s.data()), s.size());
}

// Derives a child seed from a master seed and a fixed label, so every module
// draws from its own reproducible stream.
inline uint64_t DeriveSeed(uint64_t master, std::string_view label,
                           uint64_t counter = 0) {
  return Mix64(Mix64(master ^ Fnv1a64(label)) + Mix64(counter));
}

inline Rng MakeRng(uint64_t master, std::string_view label,
                   uint64_t counter = 0) {
  return Rng(DeriveSeed(master, label, counter));
}

}  // namespace chronos

#endif  // CHRONOS_COMMON_RANDOM_H_
