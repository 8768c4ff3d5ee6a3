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

#include "qsnet/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qsnet/emitter.hpp"

namespace qsnet {

double pulse_value(const Pulse& p, double t) {
  if (t < p.t_on || t >= p.t_off) return 0.0;
  return p.scale * sech_control(t - p.center, p.kappa);
}

std::vector<double> pulse_breakpoints(const std::vector<Pulse>& pulses,
                                      double t0, double t1) {
  std::vector<double> pts;
  for (const auto& p : pulses) {
    for (double e : {p.t_on, p.t_off}) {
      if (e > t0 && e < t1) pts.push_back(e);
    }
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

double waveguide_cutoff(double broad_wall) {
  if (!(broad_wall > 0)) {
    throw std::invalid_argument("waveguide_cutoff: broad_wall <= 0");
  }
  return c_light * pi / broad_wall;
}

double group_velocity(double omega_tr, double broad_wall) {
  const double omega_c = waveguide_cutoff(broad_wall);
  if (!(omega_tr > omega_c)) {
    throw std::invalid_argument("group_velocity: carrier at or below cutoff");
  }
  const double r = omega_c / omega_tr;
  return c_light * std::sqrt(1.0 - r * r);
}

double travel_time(const NetworkSpec& spec) {
  if (!(spec.length > 0)) throw std::invalid_argument("travel_time: length <= 0");
  const double v = spec.v_g_override > 0
                       ? spec.v_g_override
                       : group_velocity(spec.omega_tr, spec.broad_wall);
  return spec.length / v;
}

namespace {

// Smooth part of the coupling density G^2(omega)/spacing(omega). The lattice
// sum over a finite window shifts every resonator by the principal-value
// integral of this density; the shift is cancelled exactly by `counterterm`
// below, computed from the same density, so the retained modes reproduce the
// flat-bath limit instead of a slightly detuned one.
struct CouplingDensity {
  double kappa, omega_tr, omega_c;
  bool dispersionless;

  double operator()(double delta) const {
    const double omega = omega_tr + delta;
    double ratio = 1.0;  // v_g(omega_tr) / v_g(omega)
    if (!dispersionless) {
      const double rc = omega_c / omega;
      const double r0 = omega_c / omega_tr;
      ratio = std::sqrt((1.0 - r0 * r0) / (1.0 - rc * rc));
    }
    return kappa / two_pi * (omega / omega_tr) * ratio;
  }
};

double detuning_counterterm(const CouplingDensity& J, double half_width) {
  if (!(half_width > 0)) return 0.0;
  // Odd part of J is smooth and vanishes linearly at 0, so the integrand is
  // regular; composite Simpson on [a, W] plus a rectangle for the sliver.
  const auto f = [&J](double x) { return (J(x) - J(-x)) / x; };
  const int n = 4096;
  const double a = half_width * 1e-4;
  const double h = (half_width - a) / n;
  double sum = f(a) + f(half_width);
  for (int i = 1; i < n; ++i) {
    sum += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  }
  return sum * h / 3.0 + a * f(a);
}

}  // namespace

ModeSet build_modes(const NetworkSpec& spec) {
  if (!(spec.kappa > 0)) throw std::invalid_argument("build_modes: kappa <= 0");
  if (!(spec.length > 0)) throw std::invalid_argument("build_modes: length <= 0");
  if (spec.n_modes == 0 && !(spec.mode_window > 0)) {
    throw std::invalid_argument("build_modes: no mode selection rule");
  }

  ModeSet m;
  const double L = spec.length;
  const bool ideal = spec.v_g_override > 0;
  double omega_c = 0;
  if (ideal) {
    m.v_g = spec.v_g_override;
  } else {
    omega_c = waveguide_cutoff(spec.broad_wall);
    m.v_g = group_velocity(spec.omega_tr, spec.broad_wall);
  }
  m.fsr = m.v_g * pi / L;

  // omega(k): exact waveguide dispersion, or the tangent line at the carrier
  // when an ideal line speed is imposed.
  double k_exact;
  if (ideal) {
    k_exact = spec.omega_tr * L / (pi * m.v_g);
  } else {
    const double kx = spec.omega_tr / c_light;
    const double kc = omega_c / c_light;
    k_exact = L / pi * std::sqrt(kx * kx - kc * kc);
  }
  const auto omega_of = [&](int k) {
    if (ideal) return spec.omega_tr + (k - k_exact) * pi / L * m.v_g;
    const double kz = k * pi / L;
    const double kc = omega_c / c_light;
    return c_light * std::sqrt(kz * kz + kc * kc);
  };

  std::vector<int> keep;
  if (spec.n_modes > 0) {
    // Exactly n_modes, chosen nearest the carrier.
    int lo = std::max(1, static_cast<int>(std::floor(k_exact)));
    int hi = lo + 1;
    while (static_cast<int>(keep.size()) < spec.n_modes) {
      const double dlo = lo >= 1 ? std::abs(omega_of(lo) - spec.omega_tr)
                                 : std::numeric_limits<double>::infinity();
      const double dhi = std::abs(omega_of(hi) - spec.omega_tr);
      if (dlo <= dhi) {
        keep.push_back(lo--);
      } else {
        keep.push_back(hi++);
      }
    }
    std::sort(keep.begin(), keep.end());
  } else {
    // Scan bounds from the inverse dispersion at the window edges; a count
    // based on the carrier spacing undershoots below the carrier.
    const auto k_of = [&](double omega) {
      if (ideal) return k_exact + (omega - spec.omega_tr) * L / (pi * m.v_g);
      const double kz2 = (omega / c_light) * (omega / c_light) -
                         (omega_c / c_light) * (omega_c / c_light);
      return kz2 > 0 ? L / pi * std::sqrt(kz2) : 0.0;
    };
    const double half = spec.mode_window * spec.kappa;
    int lo = static_cast<int>(std::floor(k_of(spec.omega_tr - half))) - 2;
    int hi = static_cast<int>(std::ceil(k_of(spec.omega_tr + half))) + 2;
    lo = std::max(1, lo);
    for (int k = lo; k <= hi; ++k) {
      if (std::abs(omega_of(k) - spec.omega_tr) <= half) keep.push_back(k);
    }
  }
  if (keep.empty()) throw std::invalid_argument("build_modes: empty window");

  const int M = static_cast<int>(keep.size());
  m.k = std::move(keep);
  m.delta.resize(M);
  m.G.resize(M);
  m.parity.resize(M);
  for (int i = 0; i < M; ++i) {
    const double omega = omega_of(m.k[i]);
    m.delta[i] = omega - spec.omega_tr;
    m.G[i] = std::sqrt(spec.kappa * m.v_g * omega / (2.0 * spec.omega_tr * L));
    m.parity[i] = (m.k[i] % 2 == 0) ? 1.0 : -1.0;
  }

  // The cancellation integral runs over the nominal window, not the snapped
  // comb edges; the discrete sum's smooth part spans the full window.
  double half_width = spec.n_modes > 0 ? 0.5 * (m.delta[M - 1] - m.delta[0])
                                       : spec.mode_window * spec.kappa;
  if (!ideal) {
    // Keep the density evaluation above cutoff.
    half_width = std::min(half_width, 0.999 * (spec.omega_tr - omega_c));
  }
  const CouplingDensity J{spec.kappa, spec.omega_tr, omega_c, ideal};
  m.counterterm = detuning_counterterm(J, half_width);
  return m;
}

int Network::resonator_node(int resonator) const {
  if (resonator < 0 || resonator >= n_resonators()) {
    throw std::out_of_range("resonator_node: bad index");
  }
  return resonator / 2 + resonator % 2;
}

double Network::travel_time() const { return qsnet::travel_time(spec_); }

Network::Network(const NetworkSpec& spec) : spec_(spec) {
  if (spec_.n_nodes < 1 || spec_.n_nodes > 17) {
    throw std::invalid_argument("Network: n_nodes outside [1, 17]");
  }
  if (!(spec_.kappa > 0)) throw std::invalid_argument("Network: kappa <= 0");
  const int n_res = 2 * (spec_.n_nodes - 1);
  if (spec_.chi.empty()) {
    chi_.assign(n_res, spec_.kappa);
  } else {
    if (static_cast<int>(spec_.chi.size()) != n_res) {
      throw std::invalid_argument("Network: chi size != 2*(n_nodes-1)");
    }
    for (double x : spec_.chi) {
      if (x < 0) throw std::invalid_argument("Network: chi < 0");
    }
    chi_ = spec_.chi;
  }
  spec_.chi = chi_;
  if (n_res > 0) {
    modes_ = build_modes(spec_);
  } else {
    modes_.v_g = spec_.v_g_override > 0
                     ? spec_.v_g_override
                     : group_velocity(spec_.omega_tr, spec_.broad_wall);
    modes_.fsr = modes_.v_g * pi / spec_.length;
  }
  imode0_ = spec_.n_nodes + n_res;
  dim_ = imode0_ + (spec_.n_nodes - 1) * n_modes_per_link() + 1;
}

void Network::validate_sbits(std::uint32_t sbits) const {
  const int n_res = n_resonators();
  if (n_res < 32 && (sbits >> n_res) != 0) {
    throw std::invalid_argument("validate_sbits: bit beyond last resonator");
  }
}

Branch Network::make_branch(std::uint32_t sbits, int excited_node,
                            cplx amp) const {
  validate_sbits(sbits);
  Branch b;
  b.sbits = sbits;
  b.amps = StateVec::Zero(dim_);
  if (excited_node >= 0) {
    if (excited_node >= n_nodes()) {
      throw std::invalid_argument("make_branch: bad node");
    }
    b.amps[iq(excited_node)] = amp;
  }
  return b;
}

double total_norm2(const BranchState& state) {
  double s = 0;
  for (const auto& b : state) s += b.amps.squaredNorm();
  return s;
}

void Network::sample_drives(const std::vector<Pulse>& pulses, double t,
                            std::vector<DriveSample>& out,
                            const std::vector<char>* active) const {
  out.clear();
  for (std::size_t i = 0; i < pulses.size(); ++i) {
    const auto& p = pulses[i];
    double g;
    if (active) {
      if (!(*active)[i]) continue;
      g = p.scale * sech_control(t - p.center, p.kappa);
    } else {
      g = pulse_value(p, t);
    }
    if (g != 0.0) out.push_back({resonator_node(p.resonator), p.resonator, g});
  }
}

void Network::apply_rhs(const std::vector<DriveSample>& drives,
                        std::uint32_t sbits, const cplx* y, cplx* dy) const {
  const int nq = spec_.n_nodes;
  const int nl = nq - 1;
  const int M = n_modes_per_link();
  std::fill(dy, dy + dim_, cplx{0.0, 0.0});

  for (const auto& d : drives) {
    const int qi = d.node;
    const int ci_ = nq + d.resonator;
    dy[qi] -= ci * d.g * y[ci_];
    dy[ci_] -= ci * d.g * y[qi];
  }

  for (int r = 0; r < 2 * nl; ++r) {
    double det = modes_.counterterm;
    if ((sbits >> r) & 1u) det += chi_[r];
    if (det != 0.0) dy[nq + r] -= ci * det * y[nq + r];
  }

  const double* Gd = modes_.G.data();
  const double* Dd = modes_.delta.data();
  const double* Pd = modes_.parity.data();
  for (int j = 0; j < nl; ++j) {
    const int il = nq + 2 * j;
    const int ir = il + 1;
    const cplx cl = y[il];
    const cplx cr = y[ir];
    const cplx* psi = y + imode0_ + j * M;
    cplx* dpsi = dy + imode0_ + j * M;
    cplx accl{0.0, 0.0};
    cplx accr{0.0, 0.0};
    for (int a = 0; a < M; ++a) {
      const cplx p = psi[a];
      dpsi[a] = -ci * (Dd[a] * p + Gd[a] * (cl + Pd[a] * cr));
      accl += Gd[a] * p;
      accr += Gd[a] * Pd[a] * p;
    }
    dy[il] -= ci * accl;
    dy[ir] -= ci * accr;
  }
}

namespace {

struct StackedRhs {
  const Network& net;
  const std::vector<Pulse>& pulses;
  const std::vector<std::uint32_t>& sbits;
  std::vector<char> active;  // per-segment gate state, set before each segment
  mutable std::vector<DriveSample> drives;

  void operator()(double t, const StateVec& y, StateVec& dy) const {
    net.sample_drives(pulses, t, drives, &active);
    const int d = net.dim();
    for (std::size_t b = 0; b < sbits.size(); ++b) {
      net.apply_rhs(drives, sbits[b], y.data() + b * d, dy.data() + b * d);
    }
  }
};

}  // namespace

BranchState run_coherent(const Network& net, const std::vector<Pulse>& pulses,
                         BranchState init, double t0, double t1,
                         const IntegratorOptions& opt,
                         const std::vector<double>* grid,
                         const BranchObserver& observer) {
  if (init.empty()) throw std::invalid_argument("run_coherent: no branches");
  if (!(t1 >= t0)) throw std::invalid_argument("run_coherent: t1 < t0");
  const int d = net.dim();
  const int nb = static_cast<int>(init.size());
  std::vector<std::uint32_t> sbits(nb);
  StateVec y(static_cast<Eigen::Index>(nb) * d);
  for (int b = 0; b < nb; ++b) {
    net.validate_sbits(init[b].sbits);
    if (init[b].amps.size() != d) {
      throw std::invalid_argument("run_coherent: branch dimension mismatch");
    }
    sbits[b] = init[b].sbits;
    y.segment(static_cast<Eigen::Index>(b) * d, d) = init[b].amps;
  }
  for (const auto& p : pulses) {
    if (p.resonator < 0 || p.resonator >= net.n_resonators()) {
      throw std::invalid_argument("run_coherent: pulse resonator out of range");
    }
    if (!(p.kappa > 0)) throw std::invalid_argument("run_coherent: pulse kappa <= 0");
    if (!(p.t_off > p.t_on)) {
      throw std::invalid_argument("run_coherent: pulse window empty");
    }
  }
  if (grid) {
    for (std::size_t i = 0; i < grid->size(); ++i) {
      if ((*grid)[i] < t0 || (*grid)[i] > t1 ||
          (i > 0 && (*grid)[i] < (*grid)[i - 1])) {
        throw std::invalid_argument("run_coherent: grid not ascending in range");
      }
    }
  }

  StackedRhs rhs{net, pulses, sbits, std::vector<char>(pulses.size(), 0), {}};
  BranchState scratch = init;
  const auto emit = [&](double t, const StateVec& state) {
    for (int b = 0; b < nb; ++b) {
      scratch[b].amps = state.segment(static_cast<Eigen::Index>(b) * d, d);
    }
    observer(t, scratch);
  };

  std::vector<double> edges = pulse_breakpoints(pulses, t0, t1);
  edges.push_back(t1);
  double ta = t0;
  std::size_t gpos = 0;
  std::vector<double> seg_grid;
  for (double tb : edges) {
    seg_grid.clear();
    if (grid) {
      while (gpos < grid->size() && (*grid)[gpos] <= tb) {
        seg_grid.push_back((*grid)[gpos++]);
      }
    }
    const double tm = 0.5 * (ta + tb);
    for (std::size_t i = 0; i < pulses.size(); ++i) {
      rhs.active[i] = tm >= pulses[i].t_on && tm < pulses[i].t_off;
    }
    if (tb > ta || !seg_grid.empty()) {
      if (observer && !seg_grid.empty()) {
        y = integrate_grid(
            rhs, ta, y, tb, seg_grid,
            [&](std::size_t, double t, const StateVec& s) { emit(t, s); }, opt);
      } else {
        y = integrate(rhs, ta, y, tb, opt);
      }
    }
    ta = tb;
  }

  for (int b = 0; b < nb; ++b) {
    init[b].amps = y.segment(static_cast<Eigen::Index>(b) * d, d);
  }
  return init;
}

}  // namespace qsnet
