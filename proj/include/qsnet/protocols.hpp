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

#ifndef QSNET_PROTOCOLS_HPP
#define QSNET_PROTOCOLS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "qsnet/emitter.hpp"
#include "qsnet/network.hpp"

namespace qsnet {

enum class GateKind { X, Phase };

// Error-free local gate applied to the reduced state after a run. target
// indexes the selection order, nodes first, then switches.
struct GateOp {
  GateKind kind = GateKind::X;
  int target = 0;
  double phi = 0;  // Phase only
};

// One term of the initial switch-register superposition.
struct BranchInit {
  std::uint32_t sbits = 0;
  cplx amp{1.0, 0.0};
};

// Qubits the protocol's figure of merit lives on. switches holds resonator
// indices (bit positions of sbits).
struct Selection {
  std::vector<int> nodes;
  std::vector<int> switches;
};

// Complete immutable description of one protocol run: controls, initial
// state, and how to read out the result. Building a plan never simulates,
// with one exception: the GHZ preparation phase comes from a deterministic
// calibration run (see transfer_phase), so plan_ghz(spec, tau) simulates
// once; the three-argument overload is pure.
struct ProtocolPlan {
  std::string name;
  NetworkSpec spec;
  double t0 = 0;
  double t1 = 0;
  std::vector<Pulse> pulses;
  std::vector<BranchInit> branches;
  int initial_node = 0;
  Selection selection;
  std::vector<GateOp> terminal_gates;
  // Emission-absorption flights behind each selected qubit, in selection
  // order; photon loss damps qubit j as (1 - p_loss)^{flights[j]}.
  std::vector<int> flights;
  std::vector<std::string> warnings;
};

enum class RouteOrder { left_first, right_first, simultaneous_split };

// Two-node transfer: emitter pulse centered -t_p/2, receiver catch the
// time-mirror at +t_p/2, both switches closed. Requires tau > 2 t_p; warns
// below 10/kappa + t_p where the sech cores get visibly truncated.
ProtocolPlan plan_qst(const NetworkSpec& spec, double tau);

// Same pulses as plan_qst with the emitter-side switch held open. Requires
// chi[0] = kappa, the balanced-splitting condition; the halves on the two
// node qubits then form a Bell pair up to a free phase fixed in analysis.
ProtocolPlan plan_bell(const NetworkSpec& spec, double tau);

// Emitter switch prepared in (e^{-i phi}|0> + |1>)/sqrt(2) over a transfer
// window; terminal X then Phase gates on the receiving qubit turn the result
// into a GHZ state over (node 0, node 1, switch 0). The two-argument form
// measures phi with transfer_phase(spec, tau).
ProtocolPlan plan_ghz(const NetworkSpec& spec, double tau);
ProtocolPlan plan_ghz(const NetworkSpec& spec, double tau, double phi);

// N-1 sequential transfers down the chain with the emitting switches open at
// scheduled shifts (w_shift_schedule) and all receiving switches closed.
// Stage windows are separated by a 4/kappa guard gap.
ProtocolPlan plan_w(const NetworkSpec& spec, int n, double tau);

// Emission from the middle node of a three-node chain, either sequentially
// (two disjoint windows, left or right first) or split (both couplers driven
// at once with amplitude 1/sqrt(2), both switches required closed).
// switch_bits may set bits 1 and 2 only, the middle node's couplers.
ProtocolPlan plan_route(const NetworkSpec& spec, RouteOrder order,
                        std::uint32_t switch_bits);

// Runs the plan's branches under its controls over [t0, t1].
BranchState run_plan(const Network& net, const ProtocolPlan& plan,
                     const IntegratorOptions& opt = {},
                     const std::vector<double>* grid = nullptr,
                     const BranchObserver& observer = {});

// arg of the receiving qubit's amplitude after a closed-switch transfer of
// duration tau; the propagation-plus-control phase a switch preparation must
// cancel. Deterministic for fixed inputs.
double transfer_phase(const NetworkSpec& spec, double tau,
                      const IntegratorOptions& opt = {});

// F = (1 + chi/sqrt(chi^2+kappa^2))^2 / 4, the noiseless GHZ fidelity after
// the terminal gates.
double predicted_ghz_fidelity(double chi, double kappa);

// Shift above which the noiseless GHZ fidelity clears 1/2:
// kappa * sqrt((3 - 2 sqrt(2)) / (2 sqrt(2) - 2)), about 0.455 kappa.
double ghz_witness_threshold(double kappa);

// Emitting-switch shifts for an N-node W state: kappa/sqrt(N-k) for stage
// k = 1..N-1.
std::vector<double> w_shift_schedule(int n, double kappa);

// Norm in the three arms of a routing run. Each arm owns its link's modes,
// both of the link's couplers, and the far qubit; the emitter bucket is the
// middle qubit alone, so a photon bouncing between the link walls always
// counts toward its own arm. The three sum to the total norm.
struct RoutePopulations {
  double emitter = 0;
  double left = 0;
  double right = 0;
};
RoutePopulations route_populations(const Network& net,
                                   const BranchState& state);

// Final (emitter, left, right) amplitudes of a routing run predicted from
// the per-stage emission coefficients. chi_l and chi_r are the effective
// shifts (0 for a closed switch). For the split order both must be 0 and
// the photons carry norm 1/2 each.
struct RouteAmplitudes {
  cplx emitter;
  cplx left;
  cplx right;
};
RouteAmplitudes route_amplitudes(double chi_l, double chi_r, double kappa,
                                 RouteOrder order);

// Round-trip-stable JSON form for CLI inspection and replay.
std::string plan_to_json(const ProtocolPlan& plan);
ProtocolPlan plan_from_json(const std::string& text);

}  // namespace qsnet

#endif
