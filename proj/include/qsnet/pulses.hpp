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

#ifndef QSNET_PULSES_HPP
#define QSNET_PULSES_HPP

#include <vector>

namespace qsnet {

// One control window on a node<->resonator coupler. The envelope is
// scale * (kappa/2) sech(kappa (t - center)/2), gated to [t_on, t_off).
// mirrored marks a catch pulse (time-reversed envelope); the sech is even,
// so the flag only documents intent and survives serialization.
struct Pulse {
  int resonator = 0;
  double kappa = 0;
  double center = 0;
  double t_on = 0;
  double t_off = 0;
  double scale = 1.0;
  bool mirrored = false;
};

double pulse_value(const Pulse& p, double t);

// Sorted window edges strictly inside (t0, t1); integration restarts there
// so a gated envelope never hides a kink inside one step.
std::vector<double> pulse_breakpoints(const std::vector<Pulse>& pulses,
                                      double t0, double t1);

}  // namespace qsnet

#endif
