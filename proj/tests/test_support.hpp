// Copyright 2026 The grasp-policy Authors.
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


#ifndef GRASP_TESTS_TEST_SUPPORT_HPP_
#define GRASP_TESTS_TEST_SUPPORT_HPP_

#include <random>

#include "grasp/kinematics.hpp"

namespace grasp::test {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Vec3 random_vec3(std::mt19937_64& rng, double scale = 1.0) {
  return Vec3(uniform(rng, -scale, scale), uniform(rng, -scale, scale), uniform(rng, -scale, scale));
}

inline Vec6 random_vec6(std::mt19937_64& rng, double scale = 1.0) {
  Vec6 v;
  for (int i = 0; i < 6; ++i) v[i] = uniform(rng, -scale, scale);
  return v;
}

inline MatX random_matrix(std::mt19937_64& rng, int rows, int cols) {
  MatX m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = uniform(rng, -1.0, 1.0);
  return m;
}

inline RotationMatrix random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Eigen::Quaterniond q(n(rng), n(rng), n(rng), n(rng));
  return RotationMatrix::from_quaternion(q.normalized());
}

}  // namespace grasp::test

#endif  // GRASP_TESTS_TEST_SUPPORT_HPP_
