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

#ifndef QSNET_EMITTER_HPP
#define QSNET_EMITTER_HPP

#include <Eigen/Dense>
#include <functional>

#include "qsnet/constants.hpp"
#include "qsnet/integrator.hpp"

namespace qsnet {

// Markovian single-node emitter: one qubit coupled through a time-dependent
// control g(t) to a transfer resonator that decays into the line at rate
// kappa. The switch qubit shifts the resonator by chi when excited. All
// quantities live in the frame rotating at the carrier, so only kappa, chi
// and g(t) appear.
struct EmitterParams {
  double kappa = 0;            // resonator decay rate (rad/s), > 0
  double chi = 0;              // dispersive shift (rad/s), >= 0
  bool switch_excited = true;  // whether the shift is active
};

// Amplitudes on a monotone time grid. gamma(t) = -i sqrt(kappa) c(t) is the
// outgoing field; emitted(t) accumulates its norm so that
// |q|^2 + |c|^2 + emitted == 1 holds to integrator accuracy at every sample.
struct EmitterTrace {
  Eigen::VectorXd times;
  Eigen::VectorXcd q, c, gamma;
  Eigen::VectorXd emitted;
};

// Remaining (alpha) and transmitted (beta) amplitudes after a complete
// sech-shaped emission against a shifted resonator.
struct EmissionCoefficients {
  cplx alpha;
  cplx beta;
};

using Control = std::function<double(double)>;

// g(t) = (kappa/2) sech(kappa t / 2): emits a photon with a sech envelope of
// bandwidth kappa, the shape that empties the qubit completely on resonance.
double sech_control(double t, double kappa);

// Control emitting a sech photon of reduced bandwidth kappa_prime < kappa.
// It does not close at late times: lim g(t) = sqrt(kappa'(kappa-kappa'))/2.
double reduced_bandwidth_control(double t, double kappa, double kappa_prime);

// Integrate dq/dt = -i g c, dc/dt = -i g q - i chi q_s c - (kappa/2) c from
// (q0, c0) over [t0, t1], sampling n_out points. The emitted-field norm is
// carried as an extra quadrature state, not a grid sum.
EmitterTrace integrate_emitter(const EmitterParams& params,
                               const Control& control, double t0, double t1,
                               int n_out = 801, cplx q0 = {1.0, 0.0},
                               cplx c0 = {0.0, 0.0},
                               const IntegratorOptions& opt = {});

// Closed-form amplitudes for the sech control with the shift active:
//   q(t) = (2 chi + i kappa (tanh(kappa t/2) - 1)) / (2 (chi - i kappa))
//   c(t) = (kappa/2) sech(kappa t/2) / (i kappa - chi)
cplx analytic_q(double t, double chi, double kappa);
cplx analytic_c(double t, double chi, double kappa);

// p_t = kappa^2 / (chi^2 + kappa^2); fraction of the excitation emitted.
double transmission_probability(double chi, double kappa);

// alpha = chi / (chi - i kappa), beta = -i kappa / (chi - i kappa).
EmissionCoefficients emission_coefficients(double chi, double kappa);

// Normalized overlap of two sampled fields on a common grid,
// integral(conj(g1) g2) / (||g1|| ||g2||), by the trapezoid rule.
cplx photon_overlap(const Eigen::VectorXd& times, const Eigen::VectorXcd& g1,
                    const Eigen::VectorXcd& g2);

}  // namespace qsnet

#endif
