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

#ifndef QSNET_CONSTANTS_HPP
#define QSNET_CONSTANTS_HPP

#include <complex>

namespace qsnet {

inline constexpr double c_light = 299792458.0;  // m/s
inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr double two_pi = 2.0 * pi;

using cplx = std::complex<double>;
inline constexpr cplx ci{0.0, 1.0};

}  // namespace qsnet

#endif
