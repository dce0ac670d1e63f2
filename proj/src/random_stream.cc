// Copyright 2026 The privsel Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "privsel/random_stream.h"

#include <cstdint>
#include <utility>
#include <vector>

namespace privsel {
namespace {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t DeriveEngineSeed(std::uint64_t seed,
                               const std::vector<std::uint64_t>& path) {
  std::uint64_t h = SplitMix64(seed);
  for (std::uint64_t child : path) {
    // The second mix keeps (a, b) and (b, a) paths apart.
    h = SplitMix64(h ^ SplitMix64(child + 0x632be59bd9b4e019ULL));
  }
  return h;
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::vector<std::uint64_t> path)
    : seed_(seed),
      path_(std::move(path)),
      engine_(DeriveEngineSeed(seed_, path_)) {}

RandomStream RandomStream::Split(std::uint64_t child) const {
  std::vector<std::uint64_t> child_path = path_;
  child_path.push_back(child);
  return RandomStream(seed_, std::move(child_path));
}

double RandomStream::Uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomStream::UniformOpen() {
  // Midpoints of the 2^53 grid: never 0, never 1.
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace privsel
