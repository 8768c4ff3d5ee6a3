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

#include "qsnet/protocols.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

#include <json.hpp>

namespace qsnet {

namespace {

using nlohmann::json;

// Per-resonator shift with the empty-vector default applied.
double resolved_chi(const NetworkSpec& spec, int resonator) {
  if (spec.chi.empty()) return spec.kappa;
  return spec.chi.at(static_cast<std::size_t>(resonator));
}

void require_two_nodes(const NetworkSpec& spec, const char* who) {
  if (spec.n_nodes != 2) {
    throw std::invalid_argument(std::string(who) +
                                ": spec must describe a two-node chain");
  }
}

// Pitch at the near coupler and time-mirrored catch at the far coupler of
// link `link`, centered stage_center -+ t_p/2 and gated to [t_a, t_b).
void add_transfer_pulses(std::vector<Pulse>& pulses, int link,
                         double stage_center, double t_a, double t_b,
                         double kappa, double t_p) {
  pulses.push_back({2 * link, kappa, stage_center - 0.5 * t_p, t_a, t_b, 1.0,
                    false});
  pulses.push_back({2 * link + 1, kappa, stage_center + 0.5 * t_p, t_a, t_b,
                    1.0, true});
}

ProtocolPlan transfer_skeleton(const NetworkSpec& spec, double tau,
                               const char* who) {
  require_two_nodes(spec, who);
  const double t_p = travel_time(spec);
  if (!(tau > 2.0 * t_p)) {
    std::ostringstream msg;
    msg << who << ": tau = " << tau << " s must exceed 2 t_p = " << 2.0 * t_p
        << " s";
    throw std::invalid_argument(msg.str());
  }
  ProtocolPlan plan;
  plan.spec = spec;
  plan.t0 = -0.5 * tau;
  plan.t1 = 0.5 * tau;
  add_transfer_pulses(plan.pulses, 0, 0.0, plan.t0, plan.t1, spec.kappa, t_p);
  plan.initial_node = 0;
  plan.selection.nodes = {0, 1};
  plan.flights = {0, 1};
  if (tau < 10.0 / spec.kappa + t_p) {
    plan.warnings.push_back(
        "tau below 10/kappa + t_p; sech cores truncated, transfer visibly "
        "incomplete");
  }
  return plan;
}

std::string gate_kind_name(GateKind k) {
  return k == GateKind::X ? "x" : "phase";
}

GateKind gate_kind_from(const std::string& s) {
  if (s == "x") return GateKind::X;
  if (s == "phase") return GateKind::Phase;
  throw std::invalid_argument("plan_from_json: unknown gate kind '" + s + "'");
}

json spec_to_json(const NetworkSpec& s) {
  return json{{"n_nodes", s.n_nodes},
              {"omega_tr", s.omega_tr},
              {"kappa", s.kappa},
              {"length", s.length},
              {"broad_wall", s.broad_wall},
              {"chi", s.chi},
              {"mode_window", s.mode_window},
              {"n_modes", s.n_modes},
              {"v_g_override", s.v_g_override}};
}

NetworkSpec spec_from_json(const json& j) {
  NetworkSpec s;
  s.n_nodes = j.at("n_nodes").get<int>();
  s.omega_tr = j.at("omega_tr").get<double>();
  s.kappa = j.at("kappa").get<double>();
  s.length = j.at("length").get<double>();
  s.broad_wall = j.at("broad_wall").get<double>();
  s.chi = j.at("chi").get<std::vector<double>>();
  s.mode_window = j.at("mode_window").get<double>();
  s.n_modes = j.at("n_modes").get<int>();
  s.v_g_override = j.at("v_g_override").get<double>();
  return s;
}

}  // namespace

ProtocolPlan plan_qst(const NetworkSpec& spec, double tau) {
  ProtocolPlan plan = transfer_skeleton(spec, tau, "plan_qst");
  plan.name = "qst";
  plan.branches = {{0u, {1.0, 0.0}}};
  return plan;
}

ProtocolPlan plan_bell(const NetworkSpec& spec, double tau) {
  const double chi0 = resolved_chi(spec, 0);
  if (std::abs(chi0 - spec.kappa) > 1e-9 * spec.kappa) {
    std::ostringstream msg;
    msg << "plan_bell: chi[0] = " << chi0 << " rad/s must equal kappa = "
        << spec.kappa << " rad/s (balanced splitting)";
    throw std::invalid_argument(msg.str());
  }
  ProtocolPlan plan = transfer_skeleton(spec, tau, "plan_bell");
  plan.name = "bell";
  plan.branches = {{1u, {1.0, 0.0}}};
  return plan;
}

ProtocolPlan plan_ghz(const NetworkSpec& spec, double tau) {
  return plan_ghz(spec, tau, transfer_phase(spec, tau));
}

ProtocolPlan plan_ghz(const NetworkSpec& spec, double tau, double phi) {
  ProtocolPlan plan = transfer_skeleton(spec, tau, "plan_ghz");
  plan.name = "ghz";
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  plan.branches = {{0u, std::polar(inv_sqrt2, -phi)}, {1u, {inv_sqrt2, 0.0}}};
  plan.selection.switches = {0};
  plan.flights = {0, 1, 0};
  // The open-branch amplitude that stays behind is
  // alpha = chi / (chi - i kappa); the phase gate makes it real after the X.
  const double chi0 = resolved_chi(spec, 0);
  plan.terminal_gates = {{GateKind::X, 1, 0.0},
                         {GateKind::Phase, 1, -std::atan2(spec.kappa, chi0)}};
  return plan;
}

ProtocolPlan plan_w(const NetworkSpec& spec, int n, double tau) {
  if (n != spec.n_nodes) {
    std::ostringstream msg;
    msg << "plan_w: n = " << n << " must equal spec.n_nodes = "
        << spec.n_nodes;
    throw std::invalid_argument(msg.str());
  }
  if (n < 2) throw std::invalid_argument("plan_w: need at least two nodes");

  const std::vector<double> shifts = w_shift_schedule(n, spec.kappa);
  bool ok = true;
  for (int k = 1; k < n; ++k) {
    const double got = resolved_chi(spec, 2 * (k - 1));
    if (std::abs(got - shifts[static_cast<std::size_t>(k - 1)]) >
        1e-9 * spec.kappa) {
      ok = false;
    }
  }
  if (!ok) {
    std::ostringstream msg;
    msg << "plan_w: emitting-switch shifts must follow kappa/sqrt(n-k):";
    for (int k = 1; k < n; ++k) {
      msg << " chi[" << 2 * (k - 1) << "] = "
          << shifts[static_cast<std::size_t>(k - 1)] << " rad/s (got "
          << resolved_chi(spec, 2 * (k - 1)) << ")";
      if (k + 1 < n) msg << ",";
    }
    throw std::invalid_argument(msg.str());
  }

  const double t_p = travel_time(spec);
  const double gap = 4.0 / spec.kappa;
  const int stages = n - 1;
  const double stage_len = (tau - gap * (stages - 1)) / stages;
  if (!(stage_len > 2.0 * t_p)) {
    std::ostringstream msg;
    msg << "plan_w: tau = " << tau << " s leaves stage windows of "
        << stage_len << " s; need > 2 t_p = " << 2.0 * t_p << " s each";
    throw std::invalid_argument(msg.str());
  }

  ProtocolPlan plan;
  plan.name = "w";
  plan.spec = spec;
  plan.t0 = -0.5 * tau;
  plan.t1 = 0.5 * tau;
  std::uint32_t sbits = 0;
  for (int k = 1; k <= stages; ++k) {
    const double t_a = plan.t0 + (k - 1) * (stage_len + gap);
    const double t_b = t_a + stage_len;
    add_transfer_pulses(plan.pulses, k - 1, 0.5 * (t_a + t_b), t_a, t_b,
                        spec.kappa, t_p);
    sbits |= 1u << (2 * (k - 1));
  }
  plan.branches = {{sbits, {1.0, 0.0}}};
  plan.initial_node = 0;
  for (int j = 0; j < n; ++j) {
    plan.selection.nodes.push_back(j);
    plan.flights.push_back(j);
  }
  if (stage_len < 10.0 / spec.kappa + t_p) {
    plan.warnings.push_back(
        "stage windows below 10/kappa + t_p; sech cores truncated");
  }
  return plan;
}

ProtocolPlan plan_route(const NetworkSpec& spec, RouteOrder order,
                        std::uint32_t switch_bits) {
  if (spec.n_nodes != 3) {
    throw std::invalid_argument(
        "plan_route: spec must describe a three-node chain so the middle "
        "node carries both couplers");
  }
  if ((switch_bits & ~0b110u) != 0) {
    throw std::invalid_argument(
        "plan_route: switch_bits may set bits 1 and 2 only, the middle "
        "node's couplers");
  }
  if (order == RouteOrder::simultaneous_split && switch_bits != 0) {
    throw std::invalid_argument(
        "plan_route: the split emission requires both switches closed");
  }

  const double k = spec.kappa;
  ProtocolPlan plan;
  plan.spec = spec;
  plan.branches = {{switch_bits, {1.0, 0.0}}};
  plan.initial_node = 1;
  plan.selection.nodes = {0, 1, 2};
  plan.flights = {1, 0, 1};

  if (order == RouteOrder::simultaneous_split) {
    plan.name = "route_split";
    plan.t0 = -10.0 / k;
    plan.t1 = 10.0 / k;
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    plan.pulses.push_back({1, k, 0.0, plan.t0, plan.t1, inv_sqrt2, false});
    plan.pulses.push_back({2, k, 0.0, plan.t0, plan.t1, inv_sqrt2, false});
    return plan;
  }

  plan.name = order == RouteOrder::left_first ? "route_left_first"
                                              : "route_right_first";
  const double stage_len = 16.0 / k;
  const double gap = 4.0 / k;
  plan.t0 = -stage_len - 0.5 * gap;
  plan.t1 = stage_len + 0.5 * gap;
  const int first = order == RouteOrder::left_first ? 1 : 2;
  const int second = first == 1 ? 2 : 1;
  const double c1 = -0.5 * (gap + stage_len);
  const double c2 = 0.5 * (gap + stage_len);
  plan.pulses.push_back(
      {first, k, c1, c1 - 0.5 * stage_len, c1 + 0.5 * stage_len, 1.0, false});
  plan.pulses.push_back(
      {second, k, c2, c2 - 0.5 * stage_len, c2 + 0.5 * stage_len, 1.0,
       false});
  if (plan.pulses[0].t_off > plan.pulses[1].t_on) {
    throw std::invalid_argument("plan_route: sequential windows overlap");
  }
  return plan;
}

BranchState run_plan(const Network& net, const ProtocolPlan& plan,
                     const IntegratorOptions& opt,
                     const std::vector<double>* grid,
                     const BranchObserver& observer) {
  BranchState init;
  init.reserve(plan.branches.size());
  for (const auto& b : plan.branches) {
    init.push_back(net.make_branch(b.sbits, plan.initial_node, b.amp));
  }
  return run_coherent(net, plan.pulses, std::move(init), plan.t0, plan.t1,
                      opt, grid, observer);
}

double transfer_phase(const NetworkSpec& spec, double tau,
                      const IntegratorOptions& opt) {
  Network net(spec);
  const ProtocolPlan plan = plan_qst(spec, tau);
  const BranchState fin = run_plan(net, plan, opt);
  return std::arg(fin[0].amps[net.iq(1)]);
}

double predicted_ghz_fidelity(double chi, double kappa) {
  const double x = chi / std::hypot(chi, kappa);
  return 0.25 * (1.0 + x) * (1.0 + x);
}

double ghz_witness_threshold(double kappa) {
  const double s = std::sqrt(2.0);
  return kappa * std::sqrt((3.0 - 2.0 * s) / (2.0 * s - 2.0));
}

std::vector<double> w_shift_schedule(int n, double kappa) {
  if (n < 2) {
    throw std::invalid_argument("w_shift_schedule: need at least two nodes");
  }
  std::vector<double> shifts;
  shifts.reserve(static_cast<std::size_t>(n - 1));
  for (int k = 1; k < n; ++k) {
    shifts.push_back(kappa / std::sqrt(static_cast<double>(n - k)));
  }
  return shifts;
}

RoutePopulations route_populations(const Network& net,
                                   const BranchState& state) {
  if (net.n_nodes() != 3) {
    throw std::invalid_argument("route_populations: need a three-node chain");
  }
  const int m = net.n_modes_per_link();
  RoutePopulations pops;
  for (const auto& b : state) {
    pops.emitter += std::norm(b.amps[net.iq(1)]);
    pops.left += std::norm(b.amps[net.iq(0)]) + std::norm(b.amps[net.ic(0)]) +
                 std::norm(b.amps[net.ic(1)]);
    pops.right += std::norm(b.amps[net.iq(2)]) + std::norm(b.amps[net.ic(2)]) +
                  std::norm(b.amps[net.ic(3)]);
    for (int a = 0; a < m; ++a) {
      pops.left += std::norm(b.amps[net.imode(0, a)]);
      pops.right += std::norm(b.amps[net.imode(1, a)]);
    }
  }
  return pops;
}

RouteAmplitudes route_amplitudes(double chi_l, double chi_r, double kappa,
                                 RouteOrder order) {
  if (order == RouteOrder::simultaneous_split) {
    if (chi_l != 0.0 || chi_r != 0.0) {
      throw std::invalid_argument(
          "route_amplitudes: the split emission requires both switches "
          "closed");
    }
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    return {{0.0, 0.0}, {inv_sqrt2, 0.0}, {inv_sqrt2, 0.0}};
  }
  const EmissionCoefficients el = emission_coefficients(chi_l, kappa);
  const EmissionCoefficients er = emission_coefficients(chi_r, kappa);
  RouteAmplitudes amps;
  if (order == RouteOrder::left_first) {
    amps.left = el.beta;
    amps.right = el.alpha * er.beta;
    amps.emitter = el.alpha * er.alpha;
  } else {
    amps.right = er.beta;
    amps.left = er.alpha * el.beta;
    amps.emitter = er.alpha * el.alpha;
  }
  return amps;
}

std::string plan_to_json(const ProtocolPlan& plan) {
  json j;
  j["name"] = plan.name;
  j["spec"] = spec_to_json(plan.spec);
  j["t0"] = plan.t0;
  j["t1"] = plan.t1;
  j["pulses"] = json::array();
  for (const auto& p : plan.pulses) {
    j["pulses"].push_back({{"resonator", p.resonator},
                           {"kappa", p.kappa},
                           {"center", p.center},
                           {"t_on", p.t_on},
                           {"t_off", p.t_off},
                           {"scale", p.scale},
                           {"mirrored", p.mirrored}});
  }
  j["branches"] = json::array();
  for (const auto& b : plan.branches) {
    j["branches"].push_back(
        {{"sbits", b.sbits}, {"amp", {b.amp.real(), b.amp.imag()}}});
  }
  j["initial_node"] = plan.initial_node;
  j["selection"] = {{"nodes", plan.selection.nodes},
                    {"switches", plan.selection.switches}};
  j["terminal_gates"] = json::array();
  for (const auto& g : plan.terminal_gates) {
    j["terminal_gates"].push_back({{"kind", gate_kind_name(g.kind)},
                                   {"target", g.target},
                                   {"phi", g.phi}});
  }
  j["flights"] = plan.flights;
  j["warnings"] = plan.warnings;
  return j.dump(2);
}

ProtocolPlan plan_from_json(const std::string& text) {
  const json j = json::parse(text);
  ProtocolPlan plan;
  plan.name = j.at("name").get<std::string>();
  plan.spec = spec_from_json(j.at("spec"));
  plan.t0 = j.at("t0").get<double>();
  plan.t1 = j.at("t1").get<double>();
  for (const auto& p : j.at("pulses")) {
    plan.pulses.push_back({p.at("resonator").get<int>(),
                           p.at("kappa").get<double>(),
                           p.at("center").get<double>(),
                           p.at("t_on").get<double>(),
                           p.at("t_off").get<double>(),
                           p.at("scale").get<double>(),
                           p.at("mirrored").get<bool>()});
  }
  for (const auto& b : j.at("branches")) {
    const auto& amp = b.at("amp");
    plan.branches.push_back(
        {b.at("sbits").get<std::uint32_t>(),
         {amp.at(0).get<double>(), amp.at(1).get<double>()}});
  }
  plan.initial_node = j.at("initial_node").get<int>();
  plan.selection.nodes = j.at("selection").at("nodes").get<std::vector<int>>();
  plan.selection.switches =
      j.at("selection").at("switches").get<std::vector<int>>();
  for (const auto& g : j.at("terminal_gates")) {
    plan.terminal_gates.push_back(
        {gate_kind_from(g.at("kind").get<std::string>()),
         g.at("target").get<int>(), g.at("phi").get<double>()});
  }
  plan.flights = j.at("flights").get<std::vector<int>>();
  plan.warnings = j.at("warnings").get<std::vector<std::string>>();
  return plan;
}

}  // namespace qsnet
