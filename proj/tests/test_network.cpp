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

#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "qsnet/emitter.hpp"
#include "qsnet/network.hpp"

using namespace qsnet;

namespace {

// Pitch-and-catch schedule: emit at resonator 0, absorb at resonator 1,
// centers straddling t = 0 by one flight time.
std::vector<Pulse> qst_pulses(const Network& net, double tau) {
  const double tp = net.travel_time();
  const double k = net.spec().kappa;
  Pulse pitch{0, k, -0.5 * tp, -0.5 * tau, 0.5 * tau, 1.0, false};
  Pulse catch_{1, k, 0.5 * tp, -0.5 * tau, 0.5 * tau, 1.0, true};
  return {pitch, catch_};
}

double qst_transfer(double mode_window) {
  NetworkSpec spec;
  spec.mode_window = mode_window;
  Network net(spec);
  const double k = spec.kappa;
  const double tau = 20.0 / k;
  BranchState init{net.make_branch(0, 0, 1.0)};
  IntegratorOptions opt;
  opt.rtol = 1e-11;
  opt.atol = 1e-13;
  auto out = run_coherent(net, qst_pulses(net, tau), std::move(init),
                          -0.5 * tau, 0.5 * tau, opt);
  return std::norm(out[0].amps[net.iq(1)]);
}

}  // namespace

TEST_CASE("pulse envelope is gated sech") {
  Pulse p{0, 2.0, 1.0, 0.0, 3.0, 0.5, false};
  CHECK(pulse_value(p, -0.1) == 0.0);
  CHECK(pulse_value(p, 3.0) == 0.0);   // half-open window
  CHECK(pulse_value(p, 1.0) == doctest::Approx(0.5 * 1.0).epsilon(1e-14));
  CHECK(pulse_value(p, 2.0) ==
        doctest::Approx(0.5 * sech_control(1.0, 2.0)).epsilon(1e-14));

  auto bp = pulse_breakpoints({p, p, Pulse{0, 1.0, 0.0, -5.0, 9.0, 1.0, false}},
                              0.5, 5.0);
  CHECK(bp == std::vector<double>{3.0});  // duplicates and out-of-range dropped
}

TEST_CASE("cutoff and group velocity match the square-root dispersion law") {
  const double wc = waveguide_cutoff(0.0286);
  CHECK(wc / two_pi == doctest::Approx(5.24112688811e9).epsilon(1e-10));

  const double vg = group_velocity(two_pi * 8.0e9, 0.0286);
  CHECK(vg / c_light == doctest::Approx(0.755506751942).epsilon(1e-10));

  // Far above cutoff the guide is effectively dispersionless.
  CHECK(group_velocity(1e3 * wc, 0.0286) / c_light ==
        doctest::Approx(std::sqrt(1.0 - 1e-6)).epsilon(1e-12));

  CHECK_THROWS(group_velocity(0.9 * wc, 0.0286));
  CHECK_THROWS(group_velocity(wc, 0.0286));
  CHECK_THROWS(waveguide_cutoff(0.0));
}

TEST_CASE("flight time follows from the group velocity") {
  NetworkSpec spec;
  CHECK(travel_time(spec) == doctest::Approx(44.1510409193e-9).epsilon(1e-9));

  spec.length = 30.0;
  CHECK(travel_time(spec) == doctest::Approx(3 * 44.1510409193e-9).epsilon(1e-9));

  spec.length = 10.0;
  spec.v_g_override = 2.0 * c_light / 3.0;
  CHECK(travel_time(spec) == doctest::Approx(50.0346142797e-9).epsilon(1e-10));
}

TEST_CASE("mode window selects the expected comb") {
  NetworkSpec spec;
  ModeSet m = build_modes(spec);

  REQUIRE(m.k.size() == 70);
  CHECK(m.k.front() == 368);
  CHECK(m.k.back() == 437);
  CHECK(m.fsr == doctest::Approx(m.v_g * pi / spec.length).epsilon(1e-14));

  for (std::size_t i = 0; i < m.k.size(); ++i) {
    CHECK(std::abs(m.delta[i]) <= spec.mode_window * spec.kappa);
    CHECK(m.parity[i] == (m.k[i] % 2 == 0 ? 1.0 : -1.0));
    // Golden-rule normalization: each mode's coupling reproduces the
    // resonator linewidth after the carrier-frequency scaling is removed.
    const double keff = two_pi * m.G[i] * m.G[i] / m.fsr;
    const double omega = spec.omega_tr + m.delta[i];
    CHECK(keff * spec.omega_tr / omega == doctest::Approx(spec.kappa).epsilon(1e-12));
  }
  for (std::size_t i = 1; i < m.k.size(); ++i) {
    CHECK(m.k[i] == m.k[i - 1] + 1);
    CHECK(m.delta[i] > m.delta[i - 1]);
    CHECK(m.G[i] > m.G[i - 1]);  // G grows like sqrt(omega)
  }
}

TEST_CASE("fixed mode count picks the comb nearest the carrier") {
  NetworkSpec spec;
  spec.n_modes = 9;
  ModeSet m = build_modes(spec);
  REQUIRE(m.k.size() == 9);
  for (std::size_t i = 1; i < m.k.size(); ++i) CHECK(m.k[i] == m.k[i - 1] + 1);
  // The carrier sits inside the kept band.
  CHECK(m.delta[0] < 0.0);
  CHECK(m.delta[8] > 0.0);
}

TEST_CASE("detuning renormalization is small, positive, and length independent") {
  NetworkSpec spec;
  ModeSet m10 = build_modes(spec);
  CHECK(m10.counterterm / spec.kappa == doctest::Approx(0.003905).epsilon(1e-3));

  spec.length = 30.0;
  ModeSet m30 = build_modes(spec);
  CHECK(m30.counterterm / spec.kappa == doctest::Approx(0.003905).epsilon(1e-2));

  spec.mode_window = 80.0;
  ModeSet w80 = build_modes(spec);
  CHECK(w80.counterterm / spec.kappa == doctest::Approx(0.007547).epsilon(1e-3));
}

TEST_CASE("network layout and bookkeeping") {
  NetworkSpec spec;
  spec.n_nodes = 3;
  Network net(spec);
  const int M = net.n_modes_per_link();
  CHECK(net.n_links() == 2);
  CHECK(net.n_resonators() == 4);
  CHECK(net.dim() == 3 + 4 + 2 * M + 1);
  CHECK(net.iq(2) == 2);
  CHECK(net.ic(0) == 3);
  CHECK(net.imode(1, 0) == 7 + M);
  CHECK(net.ivac() == net.dim() - 1);
  CHECK(net.resonator_node(0) == 0);
  CHECK(net.resonator_node(1) == 1);
  CHECK(net.resonator_node(2) == 1);
  CHECK(net.resonator_node(3) == 2);
  CHECK(net.chi(3) == spec.kappa);  // default fill

  Branch b = net.make_branch(0b1010, 1, cplx{0.0, 1.0});
  CHECK(b.amps[net.iq(1)] == cplx{0.0, 1.0});
  CHECK(b.amps.squaredNorm() == 1.0);

  CHECK_THROWS(net.make_branch(1u << 4, 0, 1.0));
  CHECK_THROWS(net.make_branch(0, 3, 1.0));
  CHECK_THROWS(net.resonator_node(4));

  NetworkSpec bad = spec;
  bad.chi = {1.0, 2.0};  // needs 4 entries
  CHECK_THROWS(Network{bad});
  bad = spec;
  bad.chi = {1.0, 1.0, -1.0, 1.0};
  CHECK_THROWS(Network{bad});
  bad = spec;
  bad.mode_window = 0.0;
  CHECK_THROWS(Network{bad});
  bad = spec;
  bad.n_nodes = 0;
  CHECK_THROWS(Network{bad});
}

TEST_CASE("single node network still carries a vacuum slot") {
  NetworkSpec spec;
  spec.n_nodes = 1;
  Network net(spec);
  CHECK(net.dim() == 2);
  CHECK(net.ivac() == 1);
  CHECK(net.travel_time() > 0);

  // Nothing couples an undriven node; the state is frozen exactly.
  BranchState init{net.make_branch(0, 0, cplx{0.6, 0.8})};
  auto out = run_coherent(net, {}, init, 0.0, 1e-6);
  CHECK(out[0].amps[0] == cplx{0.6, 0.8});
  CHECK(out[0].amps[1] == cplx{0.0, 0.0});
}

TEST_CASE("undriven excited node is frozen in a full network") {
  NetworkSpec spec;
  Network net(spec);
  BranchState init{net.make_branch(0, 0, 1.0)};
  auto out = run_coherent(net, {}, init, 0.0, 5.0 / spec.kappa);
  CHECK(out[0].amps[net.iq(0)] == cplx{1.0, 0.0});
  CHECK(out[0].amps.squaredNorm() == 1.0);
}

// The discretized line must reproduce the flat-bath emitter before the
// round-trip echo returns. Long link and wide window so both the time
// horizon and the bath bandwidth are comfortable.
TEST_CASE("driven resonator follows the flat-bath law until the echo") {
  NetworkSpec spec;
  spec.length = 30.0;
  spec.mode_window = 80.0;
  Network net(spec);
  const double k = spec.kappa;
  const double t0 = -10.0 / k;
  const double t1 = t0 + 0.97 * 2.0 * net.travel_time();

  EmitterParams ep;
  ep.kappa = k;

  for (std::uint32_t sb : {0u, 1u}) {
    ep.chi = sb ? net.chi(0) : 0.0;
    auto trace = integrate_emitter(ep, [k](double t) { return sech_control(t, k); },
                                   t0, t1, 601);
    std::vector<double> grid(trace.times.data(),
                             trace.times.data() + trace.times.size());

    std::vector<cplx> q_net, c_net;
    Pulse drive{0, k, 0.0, t0, 1e9, 1.0, false};
    BranchState init{net.make_branch(sb, 0, 1.0)};
    run_coherent(net, {drive}, std::move(init), t0, t1, {}, &grid,
                 [&](double, const BranchState& s) {
                   q_net.push_back(s[0].amps[net.iq(0)]);
                   c_net.push_back(s[0].amps[net.ic(0)]);
                 });

    REQUIRE(q_net.size() == trace.times.size());
    double dq = 0, dc = 0;
    for (std::size_t i = 0; i < q_net.size(); ++i) {
      dq = std::max(dq, std::abs(q_net[i] - trace.q[i]));
      dc = std::max(dc, std::abs(c_net[i] - trace.c[i]));
    }
    CAPTURE(sb);
    CHECK(dq < 1e-3);
    CHECK(dc < 1e-3);
  }
}

TEST_CASE("norm is conserved to integrator accuracy") {
  NetworkSpec spec;
  Network net(spec);
  const double k = spec.kappa;
  const double tau = 20.0 / k;
  // Two stacked branches, one with the dispersive shift active.
  BranchState init;
  init.push_back(net.make_branch(0, 0, cplx{1.0 / std::sqrt(2.0), 0.0}));
  init.push_back(net.make_branch(1, 0, cplx{0.0, 1.0 / std::sqrt(2.0)}));
  CHECK(total_norm2(init) == doctest::Approx(1.0).epsilon(1e-15));

  IntegratorOptions opt;
  opt.rtol = 1e-11;
  opt.atol = 1e-13;
  auto out = run_coherent(net, qst_pulses(net, tau), std::move(init),
                          -0.5 * tau, 0.5 * tau, opt);
  CHECK(std::abs(total_norm2(out) - 1.0) < 1e-8);
}

TEST_CASE("pitch and catch hands the excitation to the far node") {
  // At this geometry the comb spacing is close to kappa, so the transfer
  // deficit is floor-limited by three comparable pieces: amplitude the
  // emitter never sheds into the discrete comb, the un-absorbed tail of the
  // in-flight packet (first order, about exp(-kappa*(tau - t_p)/2)), and the
  // mirror-image remnant on the catch side. The value below is pinned from a
  // converged run (rtol 1e-11); it is a property of the model, not of the
  // step size.
  const double f40 = qst_transfer(40.0);
  CHECK(1.0 - f40 == doctest::Approx(1.068e-3).epsilon(0.02));
  CHECK(f40 <= 1.0 + 1e-9);

  // Widening the retained bandwidth improves the transfer and the change
  // stays at the floor scale; the near-carrier residuals converge slowly in
  // the window, not at all like a spectral-leakage error would.
  const double f80 = qst_transfer(80.0);
  CHECK(f80 > f40);
  CHECK(std::abs(f80 - f40) < 4e-4);
}

TEST_CASE("wavepacket peak reaches the far port after one flight time") {
  NetworkSpec spec;
  Network net(spec);
  const double k = spec.kappa;
  const double tp = net.travel_time();
  const double t0 = -10.0 / k;
  const double t1 = 3.0 * tp;

  Pulse drive{0, k, 0.0, t0, 1e9, 1.0, false};
  BranchState init{net.make_branch(0, 0, 1.0)};
  std::vector<double> grid(2001);
  for (int i = 0; i < 2001; ++i) grid[i] = t0 + (t1 - t0) * i / 2000.0;

  const auto& m = net.modes();
  double best_t = t0, best = -1.0;
  run_coherent(net, {drive}, std::move(init), t0, t1, {}, &grid,
               [&](double t, const BranchState& s) {
                 // Incident field at the far wall.
                 cplx b{0.0, 0.0};
                 for (int a = 0; a < net.n_modes_per_link(); ++a) {
                   b += m.G[a] * m.parity[a] * s[0].amps[net.imode(0, a)];
                 }
                 if (std::norm(b) > best) {
                   best = std::norm(b);
                   best_t = t;
                 }
               });
  CHECK(best_t == doctest::Approx(tp).epsilon(0.10));
}

TEST_CASE("receiver population peaks one flight time after the emitter's") {
  NetworkSpec spec;
  Network net(spec);
  const double k = spec.kappa;
  const double tau = 20.0 / k;
  const double tp = net.travel_time();
  BranchState init{net.make_branch(0, 0, 1.0)};
  std::vector<double> grid(1001);
  for (int i = 0; i < 1001; ++i) grid[i] = -0.5 * tau + tau * i / 1000.0;

  double t_c0 = 0, c0 = -1, t_c1 = 0, c1 = -1;
  IntegratorOptions opt;
  opt.rtol = 1e-9;
  opt.atol = 1e-12;
  run_coherent(net, qst_pulses(net, tau), std::move(init), -0.5 * tau,
               0.5 * tau, opt, &grid, [&](double t, const BranchState& s) {
                 const double n0 = std::norm(s[0].amps[net.ic(0)]);
                 const double n1 = std::norm(s[0].amps[net.ic(1)]);
                 if (n0 > c0) {
                   c0 = n0;
                   t_c0 = t;
                 }
                 if (n1 > c1) {
                   c1 = n1;
                   t_c1 = t;
                 }
               });
  // The catch mirrors the pitch, so the two population histories are time
  // reverses of each other and the peaks sit one flight apart.
  CHECK(t_c1 - t_c0 == doctest::Approx(tp).epsilon(0.10));
  CHECK(c1 == doctest::Approx(c0).epsilon(0.01));
}

TEST_CASE("stacked branches evolve exactly as they do alone") {
  NetworkSpec spec;
  spec.n_modes = 9;
  Network net(spec);
  const double k = spec.kappa;

  // Freeze the step sequence so joint and separate runs share arithmetic.
  IntegratorOptions opt;
  opt.rtol = 1e-6;
  opt.atol = 1e-9;
  opt.h_init = 1.5e-10;
  opt.h_max = 1.5e-10;

  Pulse drive{0, k, -1.0 / k, -4.0 / k, 0.0, 1.0, false};
  const double t0 = -4.0 / k, t1 = 0.0;

  BranchState joint;
  joint.push_back(net.make_branch(0, 0, cplx{0.6, 0.0}));
  joint.push_back(net.make_branch(1, 0, cplx{0.0, 0.8}));
  auto out = run_coherent(net, {drive}, joint, t0, t1, opt);

  auto solo0 = run_coherent(net, {drive}, {joint[0]}, t0, t1, opt);
  auto solo1 = run_coherent(net, {drive}, {joint[1]}, t0, t1, opt);

  CHECK((out[0].amps - solo0[0].amps).cwiseAbs().maxCoeff() == 0.0);
  CHECK((out[1].amps - solo1[0].amps).cwiseAbs().maxCoeff() == 0.0);
  CHECK(out[0].sbits == 0);
  CHECK(out[1].sbits == 1);
}

TEST_CASE("run_coherent validates its inputs") {
  NetworkSpec spec;
  Network net(spec);
  BranchState ok{net.make_branch(0, 0, 1.0)};

  CHECK_THROWS(run_coherent(net, {}, {}, 0.0, 1.0));
  CHECK_THROWS(run_coherent(net, {}, ok, 1.0, 0.0));

  BranchState short_state = ok;
  short_state[0].amps = StateVec::Zero(3);
  CHECK_THROWS(run_coherent(net, {}, short_state, 0.0, 1.0));

  Pulse bad{9, spec.kappa, 0.0, -1.0, 1.0, 1.0, false};
  CHECK_THROWS(run_coherent(net, {bad}, ok, 0.0, 1.0));
  bad.resonator = 0;
  bad.kappa = 0.0;
  CHECK_THROWS(run_coherent(net, {bad}, ok, 0.0, 1.0));
  bad.kappa = spec.kappa;
  bad.t_off = bad.t_on;
  CHECK_THROWS(run_coherent(net, {bad}, ok, 0.0, 1.0));

  std::vector<double> grid{0.5, 0.2};
  CHECK_THROWS(run_coherent(net, {}, ok, 0.0, 1.0, {}, &grid));
  grid = {-0.5};
  CHECK_THROWS(run_coherent(net, {}, ok, 0.0, 1.0, {}, &grid));
}

TEST_CASE("observer sees every requested grid time") {
  NetworkSpec spec;
  spec.n_modes = 9;
  Network net(spec);
  const double k = spec.kappa;
  Pulse drive{0, k, 0.0, -2.0 / k, 2.0 / k, 1.0, false};

  std::vector<double> grid;
  for (int i = 0; i <= 40; ++i) grid.push_back(-3.0 / k + i * (6.0 / k) / 40.0);
  std::vector<double> seen;
  BranchState init{net.make_branch(0, 0, 1.0)};
  run_coherent(net, {drive}, std::move(init), -3.0 / k, 3.0 / k, {}, &grid,
               [&](double t, const BranchState&) { seen.push_back(t); });
  REQUIRE(seen.size() == grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(seen[i] == doctest::Approx(grid[i]).epsilon(1e-12));
  }
}
