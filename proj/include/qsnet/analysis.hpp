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

#ifndef QSNET_ANALYSIS_HPP
#define QSNET_ANALYSIS_HPP

#include <vector>

#include <Eigen/Dense>

#include "qsnet/network.hpp"
#include "qsnet/protocols.hpp"

namespace qsnet {

// State of the selected qubits after tracing out the line, the couplers, and
// everything unselected. Basis order: selection nodes first, then selection
// switches, first label most significant. Amplitude that leaked into the
// line or the loss record shows up as population of the all-ground states.
struct ReducedDensityMatrix {
  Selection sel;
  Eigen::MatrixXcd rho;
  int n_qubits() const {
    return static_cast<int>(sel.nodes.size() + sel.switches.size());
  }
};

ReducedDensityMatrix reduce(const Network& net, const BranchState& state,
                            const Selection& sel);

// Exact single-qubit gate on the reduced state; target indexes the
// selection order.
void apply_gate(ReducedDensityMatrix& rdm, const GateOp& gate);
void apply_terminal_gates(ReducedDensityMatrix& rdm,
                          const std::vector<GateOp>& gates);

// max over theta of <psi(theta)|rho|psi(theta)> for a two-component target
// (|a> + e^{i theta}|b>)/sqrt(2): (rho_aa + rho_bb)/2 + |rho_ab|.
double fidelity_bell(const ReducedDensityMatrix& rdm);  // |01>, |10>
double fidelity_ghz(const ReducedDensityMatrix& rdm);   // |000>, |111>

// Two-phase target (|100> + e^{i t1}|010> + e^{i t2}|001>)/sqrt(3),
// maximized on a 64x64 phase grid followed by exact coordinate ascent.
double fidelity_w(const ReducedDensityMatrix& rdm);

// (1 - p_loss) * f_coherent * exp(-(p1 + p2)/t1); p1 and p2 are the
// time-integrated sender and receiver excited populations.
double qst_decohered_fidelity(double f_coherent, double p1, double p2,
                              double t1, double p_loss);

// One coherent transfer at duration tau: final receiver population along
// with the integrated populations the relaxation exponent needs.
struct QstPoint {
  double tau = 0;
  double f_coherent = 0;
  double p1 = 0;
  double p2 = 0;
};
QstPoint qst_point(const NetworkSpec& spec, double tau,
                   const IntegratorOptions& opt = {});

// Transfer-duration sweep: coherent fidelities once per tau, decohered
// curves per t1, and the parabolic-refined argmax of each curve.
struct SweepResult {
  std::vector<double> taus;
  std::vector<double> f_coherent;
  std::vector<double> p1;
  std::vector<double> p2;
  std::vector<double> t1_list;
  std::vector<std::vector<double>> f_decohered;  // [t1 index][tau index]
  std::vector<double> tau_opt;                   // per t1
};
SweepResult sweep_optimal_tau(const NetworkSpec& spec,
                              const std::vector<double>& t1_list,
                              const std::vector<double>& tau_grid,
                              double p_loss = 0.0,
                              const IntegratorOptions& opt = {});

}  // namespace qsnet

#endif
