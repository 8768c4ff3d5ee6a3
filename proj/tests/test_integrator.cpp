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

#include "qsnet/constants.hpp"
#include "qsnet/integrator.hpp"

using namespace qsnet;

namespace {

// dy/dt = -i w y, solution y0 exp(-i w t).
struct Rotator {
  double w;
  void operator()(double, const StateVec& y, StateVec& dy) const {
    dy = -ci * w * y;
  }
};

// dy/dt = y^2, blows up at t = 1/y0.
struct Blowup {
  void operator()(double, const StateVec& y, StateVec& dy) const {
    dy = y.array().square();
  }
};

}  // namespace

TEST_CASE("rotating phase integrates to tolerance") {
  Rotator rhs{3.0};
  StateVec y0(1);
  y0[0] = cplx(1.0, 0.0);
  IntegratorOptions opt;
  opt.rtol = 1e-12;
  opt.atol = 1e-14;
  const StateVec y = integrate(rhs, 0.0, y0, 10.0, opt);
  const cplx exact = std::exp(-ci * 30.0);
  CHECK(std::abs(y[0] - exact) < 1e-10);
  CHECK(std::abs(std::abs(y[0]) - 1.0) < 1e-10);
}

TEST_CASE("dense output matches exact solution between steps") {
  Rotator rhs{2.5};
  StateVec y0(2);
  y0[0] = cplx(1.0, 0.0);
  y0[1] = cplx(0.0, 1.0);
  IntegratorOptions opt;
  opt.rtol = 1e-10;
  opt.atol = 1e-12;
  Dopri5<Rotator> stepper(rhs, y0, 0.0, opt, true);
  StateVec out(2);
  double worst = 0;
  while (stepper.t() < 5.0) {
    stepper.step(5.0);
    const double tm = 0.5 * (stepper.t_prev() + stepper.t());
    stepper.eval(tm, out);
    const cplx rot = std::exp(-ci * 2.5 * tm);
    worst = std::max(worst, std::abs(out[0] - rot));
    worst = std::max(worst, std::abs(out[1] - ci * rot));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("grid observer lands on every requested time") {
  Rotator rhs{1.0};
  StateVec y0(1);
  y0[0] = cplx(1.0, 0.0);
  std::vector<double> grid;
  for (int i = 0; i <= 40; ++i) grid.push_back(0.25 * i);
  std::vector<double> seen;
  std::vector<cplx> vals;
  integrate_grid(
      rhs, 0.0, y0, 10.0, grid,
      [&](std::size_t, double t, const StateVec& y) {
        seen.push_back(t);
        vals.push_back(y[0]);
      },
      {});
  REQUIRE(seen.size() == grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(seen[i] == grid[i]);
    CHECK(std::abs(vals[i] - std::exp(-ci * grid[i])) < 1e-8);
  }
}

TEST_CASE("singular problem raises with failure time") {
  Blowup rhs;
  StateVec y0(1);
  y0[0] = cplx(1.0, 0.0);
  bool threw = false;
  try {
    integrate(rhs, 0.0, y0, 2.0, {});
  } catch (const IntegratorError& e) {
    threw = true;
    CHECK(e.t_fail > 0.9);
    CHECK(e.t_fail <= 2.0);
  }
  CHECK(threw);
}

TEST_CASE("step budget is enforced") {
  Rotator rhs{1.0};
  StateVec y0(1);
  y0[0] = cplx(1.0, 0.0);
  IntegratorOptions opt;
  opt.max_steps = 3;
  CHECK_THROWS_AS(integrate(rhs, 0.0, y0, 1000.0, opt), IntegratorError);
}

TEST_CASE("degenerate spans") {
  Rotator rhs{1.0};
  StateVec y0(1);
  y0[0] = cplx(0.5, -0.25);
  const StateVec y = integrate(rhs, 2.0, y0, 2.0, {});
  CHECK(y[0] == y0[0]);
  CHECK_THROWS(integrate(rhs, 2.0, y0, 1.0, {}));
}
