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

#ifndef QSNET_INTEGRATOR_HPP
#define QSNET_INTEGRATOR_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qsnet {

using StateVec = Eigen::VectorXcd;

struct IntegratorOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double h_init = 0;  // 0: automatic
  double h_max = 0;   // 0: unlimited
  long max_steps = 20'000'000;
};

class IntegratorError : public std::runtime_error {
 public:
  IntegratorError(const std::string& what, double t)
      : std::runtime_error(what + " at t = " + std::to_string(t)),
        t_fail(t) {}
  double t_fail;
};

// Dormand-Prince 5(4) with embedded error estimate, FSAL, and the classic
// quartic dense-output interpolant. State is a complex vector; the weighted
// RMS error norm uses component moduli. Integration is forward-only.
template <class Rhs>
class Dopri5 {
 public:
  Dopri5(Rhs& rhs, const StateVec& y0, double t0,
         const IntegratorOptions& opt = {}, bool want_dense = true)
      : rhs_(rhs), opt_(opt), dense_(want_dense), t_(t0), tp_(t0), y_(y0) {
    const long n = y0.size();
    for (StateVec* v : {&k1_, &k2_, &k3_, &k4_, &k5_, &k6_, &k7_, &yt_, &y1_})
      v->resize(n);
    if (dense_)
      for (StateVec* v : {&r1_, &r2_, &r3_, &r4_, &r5_}) v->resize(n);
    rhs_(t_, y_, k1_);
    ++n_evals_;
  }

  double t() const { return t_; }
  double t_prev() const { return tp_; }
  const StateVec& y() const { return y_; }
  long n_steps() const { return n_steps_; }
  long n_evals() const { return n_evals_; }

  // One accepted step, never advancing past t_limit. Returns the new t.
  double step(double t_limit) {
    if (h_ <= 0) h_ = opt_.h_init > 0 ? opt_.h_init : initial_step(t_limit);
    double h_cap = t_limit - t_;
    if (opt_.h_max > 0) h_cap = std::min(h_cap, opt_.h_max);
    bool rejected = false;
    for (;;) {
      if (++n_steps_ > opt_.max_steps)
        throw IntegratorError("step limit exceeded", t_);
      double h = std::min(h_, h_cap);
      const bool last = (t_ + 1.01 * h >= t_limit);
      if (last) h = t_limit - t_;
      if (!(h > 0) || t_ + h == t_)
        throw IntegratorError("step size underflow", t_);

      const double err = try_step(h);
      if (err <= 1.0) {
        if (dense_) fill_dense(h);
        tp_ = t_;
        t_ = last ? t_limit : t_ + h;
        y_.swap(y1_);
        k1_.swap(k7_);  // FSAL
        const double fac =
            err == 0.0 ? 5.0
                       : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
        h_ = h * (rejected ? std::min(fac, 1.0) : fac);
        return t_;
      }
      rejected = true;
      h_ = h * std::clamp(0.9 * std::pow(err, -0.2), 0.2, 1.0);
    }
  }

  // Dense evaluation inside the last accepted step [t_prev, t].
  void eval(double ti, StateVec& out) const {
    const double h = t_ - tp_;
    const double th = h == 0 ? 0.0 : (ti - tp_) / h;
    const double th1 = 1.0 - th;
    out = r1_ + th * (r2_ + th1 * (r3_ + th * (r4_ + th1 * r5_)));
  }

 private:
  double try_step(double h) {
    const double t = t_;
    yt_ = y_ + h * (a21 * k1_);
    rhs_(t + c2 * h, yt_, k2_);
    yt_ = y_ + h * (a31 * k1_ + a32 * k2_);
    rhs_(t + c3 * h, yt_, k3_);
    yt_ = y_ + h * (a41 * k1_ + a42 * k2_ + a43 * k3_);
    rhs_(t + c4 * h, yt_, k4_);
    yt_ = y_ + h * (a51 * k1_ + a52 * k2_ + a53 * k3_ + a54 * k4_);
    rhs_(t + c5 * h, yt_, k5_);
    yt_ = y_ + h * (a61 * k1_ + a62 * k2_ + a63 * k3_ + a64 * k4_ + a65 * k5_);
    rhs_(t + h, yt_, k6_);
    y1_ = y_ + h * (a71 * k1_ + a73 * k3_ + a74 * k4_ + a75 * k5_ + a76 * k6_);
    rhs_(t + h, y1_, k7_);
    n_evals_ += 6;

    // weighted RMS of the embedded 4th/5th order difference
    const long n = y_.size();
    double acc = 0;
    for (long i = 0; i < n; ++i) {
      const std::complex<double> e =
          h * (e1 * k1_[i] + e3 * k3_[i] + e4 * k4_[i] + e5 * k5_[i] +
               e6 * k6_[i] + e7 * k7_[i]);
      const double sc =
          opt_.atol +
          opt_.rtol * std::max(std::abs(y_[i]), std::abs(y1_[i]));
      const double q = std::abs(e) / sc;
      acc += q * q;
    }
    return std::sqrt(acc / double(n));
  }

  void fill_dense(double h) {
    r1_ = y_;
    r2_ = y1_ - y_;
    r3_ = h * k1_ - r2_;
    r4_ = r2_ - h * k7_ - r3_;
    r5_ = h * (d1 * k1_ + d3 * k3_ + d4 * k4_ + d5 * k5_ + d6 * k6_ +
               d7 * k7_);
  }

  double initial_step(double t_limit) {
    const long n = y_.size();
    auto wnorm = [&](const StateVec& v) {
      double acc = 0;
      for (long i = 0; i < n; ++i) {
        const double sc = opt_.atol + opt_.rtol * std::abs(y_[i]);
        const double q = std::abs(v[i]) / sc;
        acc += q * q;
      }
      return std::sqrt(acc / double(n));
    };
    const double span = t_limit - t_;
    const double d0 = wnorm(y_), d1 = wnorm(k1_);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 * span : 0.01 * (d0 / d1);
    h0 = std::min(h0, span);
    yt_ = y_ + h0 * k1_;
    rhs_(t_ + h0, yt_, k2_);
    ++n_evals_;
    const double d2 = wnorm((k2_ - k1_).eval()) / h0;
    double h1;
    if (std::max(d1, d2) <= 1e-15)
      h1 = std::max(1e-6 * span, h0 * 1e-3);
    else
      h1 = std::pow(0.01 / std::max(d1, d2), 0.2);
    double h = std::min({100 * h0, h1, span});
    if (opt_.h_max > 0) h = std::min(h, opt_.h_max);
    return h;
  }

  // Dormand-Prince coefficients
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5,
                          c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                          a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113,
                          a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                          a76 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695,
                          e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;
  static constexpr double d1 = -12715105075.0 / 11282082432.0,
                          d3 = 87487479700.0 / 32700410799.0,
                          d4 = -10690763975.0 / 1880347072.0,
                          d5 = 701980252875.0 / 199316789632.0,
                          d6 = -1453857185.0 / 822651844.0,
                          d7 = 69997945.0 / 29380423.0;

  Rhs& rhs_;
  IntegratorOptions opt_;
  bool dense_;
  double t_, tp_;
  double h_ = 0;
  StateVec y_, y1_, yt_;
  StateVec k1_, k2_, k3_, k4_, k5_, k6_, k7_;
  StateVec r1_, r2_, r3_, r4_, r5_;
  long n_steps_ = 0, n_evals_ = 0;
};

// Integrate to t1 and return y(t1).
template <class Rhs>
StateVec integrate(Rhs&& rhs, double t0, const StateVec& y0, double t1,
                   const IntegratorOptions& opt = {}) {
  if (!(t1 > t0)) {
    if (t1 == t0) return y0;
    throw std::invalid_argument("integrate: t1 < t0");
  }
  Dopri5<std::remove_reference_t<Rhs>> st(rhs, y0, t0, opt, false);
  while (st.t() < t1) st.step(t1);
  return st.y();
}

// Integrate to t1, invoking observer(i, t_i, y(t_i)) for every grid time in
// [t0, t1]; grid must be sorted ascending. Uses dense interpolation so grid
// resolution does not constrain step size.
template <class Rhs, class Obs>
StateVec integrate_grid(Rhs&& rhs, double t0, const StateVec& y0, double t1,
                        const std::vector<double>& grid, Obs&& observer,
                        const IntegratorOptions& opt = {}) {
  Dopri5<std::remove_reference_t<Rhs>> st(rhs, y0, t0, opt, true);
  std::size_t gi = 0;
  StateVec scratch(y0.size());
  while (gi < grid.size() && grid[gi] <= t0) {
    observer(gi, t0, y0);
    ++gi;
  }
  while (st.t() < t1) {
    st.step(t1);
    while (gi < grid.size() && grid[gi] <= st.t()) {
      st.eval(grid[gi], scratch);
      observer(gi, grid[gi], scratch);
      ++gi;
    }
  }
  return st.y();
}

}  // namespace qsnet

#endif
