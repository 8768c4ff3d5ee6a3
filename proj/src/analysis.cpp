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

#include "qsnet/analysis.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace qsnet {

namespace {

// Reduced basis index carried by branch b's switch register alone.
int switch_ket(const Selection& sel, std::uint32_t sbits) {
  const int nq =
      static_cast<int>(sel.nodes.size() + sel.switches.size());
  int ket = 0;
  for (std::size_t l = 0; l < sel.switches.size(); ++l) {
    const int bit = (sbits >> sel.switches[l]) & 1u;
    ket |= bit << (nq - 1 - static_cast<int>(sel.nodes.size() + l));
  }
  return ket;
}

}  // namespace

ReducedDensityMatrix reduce(const Network& net, const BranchState& state,
                            const Selection& sel) {
  if (sel.nodes.empty() && sel.switches.empty()) {
    throw std::invalid_argument("reduce: empty selection");
  }
  for (int j : sel.nodes) {
    if (j < 0 || j >= net.n_nodes()) {
      throw std::invalid_argument("reduce: node label out of range");
    }
  }
  for (int m : sel.switches) {
    if (m < 0 || m >= net.n_resonators()) {
      throw std::invalid_argument("reduce: switch label out of range");
    }
  }

  const int nn = static_cast<int>(sel.nodes.size());
  const int nq = nn + static_cast<int>(sel.switches.size());
  const int dim = 1 << nq;
  const std::size_t nb = state.size();

  std::uint32_t sel_mask = 0;
  for (int m : sel.switches) sel_mask |= 1u << m;

  std::vector<int> sket(nb);
  std::vector<std::uint32_t> env_bits(nb);
  for (std::size_t b = 0; b < nb; ++b) {
    sket[b] = switch_ket(sel, state[b].sbits);
    env_bits[b] = state[b].sbits & ~sel_mask;
  }

  // Components sharing an empty line: the selected excitations and the loss
  // record. They interfere across branches with equal unselected registers.
  std::vector<Eigen::VectorXcd> w(nb, Eigen::VectorXcd::Zero(dim));
  for (std::size_t b = 0; b < nb; ++b) {
    w[b][sket[b]] += state[b].amps[net.ivac()];
    for (int l = 0; l < nn; ++l) {
      const int ket = sket[b] | (1 << (nq - 1 - l));
      w[b][ket] += state[b].amps[net.iq(sel.nodes[l])];
    }
  }

  ReducedDensityMatrix rdm;
  rdm.sel = sel;
  rdm.rho = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t b = 0; b < nb; ++b) {
    for (std::size_t b2 = 0; b2 < nb; ++b2) {
      if (env_bits[b] != env_bits[b2]) continue;
      rdm.rho.noalias() += w[b] * w[b2].adjoint();
    }
  }

  // Every other slot is a distinct environment state; entries interfere
  // only across branches that agree on it and on the unselected register.
  std::vector<char> skip(static_cast<std::size_t>(net.dim()), 0);
  skip[static_cast<std::size_t>(net.ivac())] = 1;
  for (int j : sel.nodes) skip[static_cast<std::size_t>(net.iq(j))] = 1;
  for (int s = 0; s < net.dim(); ++s) {
    if (skip[static_cast<std::size_t>(s)]) continue;
    for (std::size_t b = 0; b < nb; ++b) {
      const cplx ab = state[b].amps[s];
      if (ab == cplx{0.0, 0.0}) continue;
      for (std::size_t b2 = 0; b2 < nb; ++b2) {
        if (env_bits[b] != env_bits[b2]) continue;
        rdm.rho(sket[b], sket[b2]) += ab * std::conj(state[b2].amps[s]);
      }
    }
  }
  return rdm;
}

void apply_gate(ReducedDensityMatrix& rdm, const GateOp& gate) {
  const int nq = rdm.n_qubits();
  if (gate.target < 0 || gate.target >= nq) {
    throw std::invalid_argument("apply_gate: target out of range");
  }
  const int dim = 1 << nq;
  const int bit = 1 << (nq - 1 - gate.target);
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) {
    if (gate.kind == GateKind::X) {
      u(i ^ bit, i) = 1.0;
    } else {
      u(i, i) = (i & bit) ? std::polar(1.0, gate.phi) : 1.0;
    }
  }
  rdm.rho = u * rdm.rho * u.adjoint();
}

void apply_terminal_gates(ReducedDensityMatrix& rdm,
                          const std::vector<GateOp>& gates) {
  for (const GateOp& g : gates) apply_gate(rdm, g);
}

namespace {

double two_state_fidelity(const ReducedDensityMatrix& rdm, int qubits, int a,
                          int b, const char* who) {
  if (rdm.n_qubits() != qubits) {
    throw std::invalid_argument(std::string(who) + ": wrong qubit count");
  }
  return 0.5 * (rdm.rho(a, a).real() + rdm.rho(b, b).real()) +
         std::abs(rdm.rho(a, b));
}

}  // namespace

double fidelity_bell(const ReducedDensityMatrix& rdm) {
  return two_state_fidelity(rdm, 2, 1, 2, "fidelity_bell");
}

double fidelity_ghz(const ReducedDensityMatrix& rdm) {
  return two_state_fidelity(rdm, 3, 0, 7, "fidelity_ghz");
}

double fidelity_w(const ReducedDensityMatrix& rdm) {
  if (rdm.n_qubits() != 3) {
    throw std::invalid_argument("fidelity_w: wrong qubit count");
  }
  const double diag = (rdm.rho(4, 4).real() + rdm.rho(2, 2).real() +
                       rdm.rho(1, 1).real()) /
                      3.0;
  const cplx z12 = rdm.rho(4, 2);  // pairs with e^{i t1}
  const cplx z13 = rdm.rho(4, 1);  // pairs with e^{i t2}
  const cplx z23 = rdm.rho(2, 1);  // pairs with e^{i (t2 - t1)}
  const auto coherent = [&](double t1, double t2) {
    return 2.0 / 3.0 *
           (std::cos(t1) * z12.real() - std::sin(t1) * z12.imag() +
            std::cos(t2) * z13.real() - std::sin(t2) * z13.imag() +
            std::cos(t2 - t1) * z23.real() - std::sin(t2 - t1) * z23.imag());
  };

  const int n = 64;
  double best = -std::numeric_limits<double>::infinity();
  double bt1 = 0, bt2 = 0;
  for (int i = 0; i < n; ++i) {
    const double t1 = two_pi * i / n;
    for (int j = 0; j < n; ++j) {
      const double t2 = two_pi * j / n;
      const double f = coherent(t1, t2);
      if (f > best) {
        best = f;
        bt1 = t1;
        bt2 = t2;
      }
    }
  }
  // Exact per-coordinate maximization; the surface is a sum of two cosines
  // in each variable, so alternation converges geometrically.
  for (int it = 0; it < 200; ++it) {
    const double n1 =
        -std::arg(z12 + std::conj(z23 * std::polar(1.0, bt2)));
    const double n2 = -std::arg(z13 + z23 * std::polar(1.0, -n1));
    const double delta = std::abs(n1 - bt1) + std::abs(n2 - bt2);
    bt1 = n1;
    bt2 = n2;
    if (delta < 1e-12) break;
  }
  return diag + std::max(best, coherent(bt1, bt2));
}

double qst_decohered_fidelity(double f_coherent, double p1, double p2,
                              double t1, double p_loss) {
  return (1.0 - p_loss) * f_coherent * std::exp(-(p1 + p2) / t1);
}

QstPoint qst_point(const NetworkSpec& spec, double tau,
                   const IntegratorOptions& opt) {
  const Network net(spec);
  const ProtocolPlan plan = plan_qst(spec, tau);

  const int n_grid = 2001;
  std::vector<double> grid(n_grid);
  for (int i = 0; i < n_grid; ++i) {
    grid[i] = plan.t0 + (plan.t1 - plan.t0) * i / (n_grid - 1);
  }

  QstPoint pt;
  pt.tau = tau;
  double prev_t = 0, prev0 = 0, prev1 = 0;
  bool have_prev = false;
  const BranchState fin = run_plan(
      net, plan, opt, &grid, [&](double t, const BranchState& s) {
        const double v0 = std::norm(s[0].amps[net.iq(0)]);
        const double v1 = std::norm(s[0].amps[net.iq(1)]);
        if (have_prev) {
          pt.p1 += 0.5 * (v0 + prev0) * (t - prev_t);
          pt.p2 += 0.5 * (v1 + prev1) * (t - prev_t);
        }
        prev_t = t;
        prev0 = v0;
        prev1 = v1;
        have_prev = true;
      });
  pt.f_coherent = std::norm(fin[0].amps[net.iq(1)]);
  return pt;
}

SweepResult sweep_optimal_tau(const NetworkSpec& spec,
                              const std::vector<double>& t1_list,
                              const std::vector<double>& tau_grid,
                              double p_loss, const IntegratorOptions& opt) {
  if (tau_grid.size() < 3) {
    throw std::invalid_argument("sweep_optimal_tau: need at least 3 taus");
  }
  for (std::size_t i = 1; i < tau_grid.size(); ++i) {
    if (!(tau_grid[i] > tau_grid[i - 1])) {
      throw std::invalid_argument("sweep_optimal_tau: taus must ascend");
    }
  }
  const double t_p = travel_time(spec);
  if (tau_grid.front() > 6.0 / spec.kappa + t_p ||
      tau_grid.back() < 40.0 / spec.kappa + t_p) {
    std::ostringstream msg;
    msg << "sweep_optimal_tau: tau grid must cover [" << 6.0 / spec.kappa + t_p
        << ", " << 40.0 / spec.kappa + t_p << "] s";
    throw std::invalid_argument(msg.str());
  }

  SweepResult out;
  out.taus = tau_grid;
  out.t1_list = t1_list;
  for (double tau : tau_grid) {
    const QstPoint pt = qst_point(spec, tau, opt);
    out.f_coherent.push_back(pt.f_coherent);
    out.p1.push_back(pt.p1);
    out.p2.push_back(pt.p2);
  }

  for (double t1 : t1_list) {
    std::vector<double> curve;
    curve.reserve(tau_grid.size());
    for (std::size_t i = 0; i < tau_grid.size(); ++i) {
      curve.push_back(qst_decohered_fidelity(out.f_coherent[i], out.p1[i],
                                             out.p2[i], t1, p_loss));
    }
    std::size_t imax = 0;
    for (std::size_t i = 1; i < curve.size(); ++i) {
      if (curve[i] > curve[imax]) imax = i;
    }
    if (imax == 0 || imax + 1 == curve.size()) {
      throw std::runtime_error(
          "sweep_optimal_tau: decohered maximum not bracketed by the tau "
          "grid");
    }
    // Parabola through the bracketing triple; the trade-off curve is smooth
    // and unimodal near the optimum.
    const double x0 = tau_grid[imax - 1], x1 = tau_grid[imax],
                 x2 = tau_grid[imax + 1];
    const double y0 = curve[imax - 1], y1 = curve[imax], y2 = curve[imax + 1];
    const double num = (x1 - x0) * (x1 - x0) * (y1 - y2) -
                       (x1 - x2) * (x1 - x2) * (y1 - y0);
    const double den =
        (x1 - x0) * (y1 - y2) - (x1 - x2) * (y1 - y0);
    double tau_opt = x1;
    if (std::abs(den) > 0) {
      tau_opt = x1 - 0.5 * num / den;
      if (!(tau_opt > x0 && tau_opt < x2)) tau_opt = x1;
    }
    out.f_decohered.push_back(std::move(curve));
    out.tau_opt.push_back(tau_opt);
  }
  return out;
}

}  // namespace qsnet
