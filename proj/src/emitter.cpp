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

#include "qsnet/emitter.hpp"

#include <cmath>
#include <stdexcept>

namespace qsnet {

namespace {
// sech via exponentials of negative argument only; safe for any |x|.
double sech(double x) {
  const double e = std::exp(-std::abs(x));
  return 2.0 * e / (1.0 + e * e);
}
}  // namespace

double sech_control(double t, double kappa) {
  if (!(kappa > 0)) throw std::invalid_argument("sech_control: kappa <= 0");
  return 0.5 * kappa * sech(0.5 * kappa * t);
}

double reduced_bandwidth_control(double t, double kappa, double kappa_prime) {
  if (!(kappa > 0) || !(kappa_prime > 0) || kappa_prime >= kappa)
    throw std::invalid_argument(
        "reduced_bandwidth_control: need 0 < kappa_prime < kappa");
  const double x = kappa_prime * t;
  const double num = kappa - kappa_prime * std::tanh(0.5 * x);
  const double r = kappa / kappa_prime;
  // radicand of the closing factor, written without cancellation:
  // (1 + e^-x) k/k' - 1 = (k - k')/k' + e^-x k/k'
  if (x >= 0) {
    const double rad = (r - 1.0) + std::exp(-x) * r;
    return 0.5 * num / std::sqrt(rad);
  }
  // pull e^{-x} out of the root to avoid overflow at early times
  const double rad = (r - 1.0) * std::exp(x) + r;
  return 0.5 * num * std::exp(0.5 * x) / std::sqrt(rad);
}

EmitterTrace integrate_emitter(const EmitterParams& params,
                               const Control& control, double t0, double t1,
                               int n_out, cplx q0, cplx c0,
                               const IntegratorOptions& opt) {
  if (!(params.kappa > 0))
    throw std::invalid_argument("integrate_emitter: kappa <= 0");
  if (params.chi < 0)
    throw std::invalid_argument("integrate_emitter: chi < 0");
  if (!(t1 > t0)) throw std::invalid_argument("integrate_emitter: t1 <= t0");
  if (n_out < 2) throw std::invalid_argument("integrate_emitter: n_out < 2");

  const double kappa = params.kappa;
  const double chi_eff = params.switch_excited ? params.chi : 0.0;

  // state: (q, c, E) with dE/dt = kappa |c|^2 riding along as quadrature
  auto rhs = [&](double t, const StateVec& y, StateVec& dy) {
    const double g = control(t);
    dy[0] = -ci * g * y[1];
    dy[1] = -ci * g * y[0] - (ci * chi_eff + 0.5 * kappa) * y[1];
    dy[2] = kappa * std::norm(y[1]);
  };

  StateVec y0(3);
  y0 << q0, c0, cplx{0, 0};

  EmitterTrace tr;
  tr.times.resize(n_out);
  tr.q.resize(n_out);
  tr.c.resize(n_out);
  tr.gamma.resize(n_out);
  tr.emitted.resize(n_out);
  std::vector<double> grid(n_out);
  for (int i = 0; i < n_out; ++i)
    grid[i] = t0 + (t1 - t0) * double(i) / double(n_out - 1);
  grid.back() = t1;

  integrate_grid(
      rhs, t0, y0, t1, grid,
      [&](std::size_t i, double t, const StateVec& y) {
        tr.times[i] = t;
        tr.q[i] = y[0];
        tr.c[i] = y[1];
        tr.gamma[i] = -ci * std::sqrt(kappa) * y[1];
        tr.emitted[i] = y[2].real();
      },
      opt);
  return tr;
}

cplx analytic_q(double t, double chi, double kappa) {
  if (chi == 0 && kappa == 0)
    throw std::invalid_argument("analytic_q: chi and kappa both zero");
  const cplx den = 2.0 * (cplx(chi) - ci * kappa);
  return (2.0 * chi + ci * kappa * (std::tanh(0.5 * kappa * t) - 1.0)) / den;
}

cplx analytic_c(double t, double chi, double kappa) {
  if (chi == 0 && kappa == 0)
    throw std::invalid_argument("analytic_c: chi and kappa both zero");
  return 0.5 * kappa * sech(0.5 * kappa * t) / (ci * kappa - chi);
}

double transmission_probability(double chi, double kappa) {
  if (!(kappa > 0))
    throw std::invalid_argument("transmission_probability: kappa <= 0");
  if (chi < 0) throw std::invalid_argument("transmission_probability: chi < 0");
  return kappa * kappa / (chi * chi + kappa * kappa);
}

EmissionCoefficients emission_coefficients(double chi, double kappa) {
  if (!(kappa > 0))
    throw std::invalid_argument("emission_coefficients: kappa <= 0");
  const cplx den = cplx(chi) - ci * kappa;
  return {chi / den, -ci * kappa / den};
}

cplx photon_overlap(const Eigen::VectorXd& times, const Eigen::VectorXcd& g1,
                    const Eigen::VectorXcd& g2) {
  const long n = times.size();
  if (n < 2 || g1.size() != n || g2.size() != n)
    throw std::invalid_argument("photon_overlap: grid mismatch");
  cplx inner = 0;
  double n1 = 0, n2 = 0;
  for (long i = 0; i + 1 < n; ++i) {
    const double w = 0.5 * (times[i + 1] - times[i]);
    inner += w * (std::conj(g1[i]) * g2[i] + std::conj(g1[i + 1]) * g2[i + 1]);
    n1 += w * (std::norm(g1[i]) + std::norm(g1[i + 1]));
    n2 += w * (std::norm(g2[i]) + std::norm(g2[i + 1]));
  }
  if (!(n1 > 0) || !(n2 > 0))
    throw std::invalid_argument("photon_overlap: zero-norm field");
  return inner / std::sqrt(n1 * n2);
}

}  // namespace qsnet
