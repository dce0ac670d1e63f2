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

#ifndef PRIVSEL_RANDOM_STREAM_H_
#define PRIVSEL_RANDOM_STREAM_H_

#include <cstdint>
#include <random>
#include <vector>

namespace privsel {

// A reproducible source of randomness identified by a root seed and a path of
// child indices. Two streams with the same (seed, path) produce the same
// sequence. Split() derives a child from the identity only, so the child does
// not depend on how much of the parent has been consumed.
//
// Not cryptographically secure. A stream must not be shared across threads;
// split it instead.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit RandomStream(std::uint64_t seed,
                        std::vector<std::uint64_t> path = {});

  RandomStream Split(std::uint64_t child) const;

  std::uint64_t seed() const { return seed_; }
  const std::vector<std::uint64_t>& path() const { return path_; }

  // UniformRandomBitGenerator interface, so std:: distributions work.
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() { return engine_(); }

  // Uniform on [0, 1) with 53 bits of resolution.
  double Uniform();
  // Uniform on (0, 1).
  double UniformOpen();

 private:
  std::uint64_t seed_;
  std::vector<std::uint64_t> path_;
  std::mt19937_64 engine_;
};

}  // namespace privsel

#endif  // PRIVSEL_RANDOM_STREAM_H_
