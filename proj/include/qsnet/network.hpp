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

#ifndef QSNET_NETWORK_HPP
#define QSNET_NETWORK_HPP

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "qsnet/constants.hpp"
#include "qsnet/integrator.hpp"
#include "qsnet/pulses.hpp"

namespace qsnet {

// Linear chain of n_nodes transmon nodes joined by n_nodes-1 rectangular
// waveguide links. Each link carries two coupling resonators, one per end;
// resonator 2j sits at node j, resonator 2j+1 at node j+1.
struct NetworkSpec {
  int n_nodes = 2;
  double omega_tr = two_pi * 8.0e9;   // rad/s, node/resonator carrier
  double kappa = two_pi * 1.0e7;      // rad/s, resonator linewidth
  double length = 10.0;               // m, per link
  double broad_wall = 0.0286;         // m, waveguide broad-wall dimension
  std::vector<double> chi;            // rad/s per resonator; empty = kappa each
  double mode_window = 40.0;          // keep modes with |omega_k - omega_tr| <= window*kappa
  int n_modes = 0;                    // if >0, keep exactly this many nearest modes instead
  double v_g_override = 0.0;          // if >0, dispersionless line at this speed
};

// Discretized field of one link. All links in a chain share the same set.
struct ModeSet {
  std::vector<int> k;       // longitudinal indices, ascending
  Eigen::VectorXd delta;    // omega_k - omega_tr
  Eigen::VectorXd G;        // coupling per mode
  Eigen::VectorXd parity;   // (-1)^k, field sign at the far wall
  double v_g = 0;           // group velocity at the carrier
  double fsr = 0;           // v_g * pi / length, spacing at the carrier
  double counterterm = 0;   // added to every resonator detuning; see build_modes
};

double waveguide_cutoff(double broad_wall);
double group_velocity(double omega_tr, double broad_wall);
double travel_time(const NetworkSpec& spec);
ModeSet build_modes(const NetworkSpec& spec);

// One term of the superposition over switch-jump records. sbits bit m is
// resonator m's switch state (1 = excited, dispersive shift active).
struct Branch {
  std::uint32_t sbits = 0;
  StateVec amps;
};
using BranchState = std::vector<Branch>;

double total_norm2(const BranchState& state);

struct DriveSample {
  int node = 0;
  int resonator = 0;
  double g = 0;
};

// Single-excitation state layout, per branch:
//   [0, n)                      node qubits
//   [n, n + 2L)                 resonators
//   [n + 2L, n + 2L + L*M)      link modes, link-major
//   n + 2L + L*M                vacuum slot (populated by node jumps)
class Network {
 public:
  explicit Network(const NetworkSpec& spec);

  const NetworkSpec& spec() const { return spec_; }
  const ModeSet& modes() const { return modes_; }

  int n_nodes() const { return spec_.n_nodes; }
  int n_links() const { return spec_.n_nodes - 1; }
  int n_resonators() const { return 2 * n_links(); }
  int n_modes_per_link() const { return static_cast<int>(modes_.k.size()); }
  int dim() const { return dim_; }

  int iq(int node) const { return node; }
  int ic(int resonator) const { return spec_.n_nodes + resonator; }
  int imode(int link, int a) const { return imode0_ + link * n_modes_per_link() + a; }
  int ivac() const { return dim_ - 1; }

  // The node a resonator couples to: 2j -> j, 2j+1 -> j+1.
  int resonator_node(int resonator) const;

  double chi(int resonator) const { return chi_[resonator]; }
  double travel_time() const;

  // With `active`, pulse i contributes iff active[i], ignoring its own gate;
  // integration segments bind the gate state once per segment so that stage
  // evaluations at a gate edge stay on the segment's side of the edge.
  void sample_drives(const std::vector<Pulse>& pulses, double t,
                     std::vector<DriveSample>& out,
                     const std::vector<char>* active = nullptr) const;
  void apply_rhs(const std::vector<DriveSample>& drives, std::uint32_t sbits,
                 const cplx* y, cplx* dy) const;

  Branch make_branch(std::uint32_t sbits, int excited_node, cplx amp) const;
  void validate_sbits(std::uint32_t sbits) const;

 private:
  NetworkSpec spec_;
  ModeSet modes_;
  std::vector<double> chi_;
  int imode0_ = 0;
  int dim_ = 0;
};

using BranchObserver = std::function<void(double t, const BranchState& state)>;

// Propagates every branch under the same controls (branches never mix; they
// differ only through sbits). Integration restarts at pulse window edges.
// grid, if given, must be ascending within [t0, t1]; the observer sees the
// interpolated state at each grid time.
BranchState run_coherent(const Network& net, const std::vector<Pulse>& pulses,
                         BranchState init, double t0, double t1,
                         const IntegratorOptions& opt = {},
                         const std::vector<double>* grid = nullptr,
                         const BranchObserver& observer = {});

}  // namespace qsnet

#endif
