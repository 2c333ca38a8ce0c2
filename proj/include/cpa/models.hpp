/*
   Copyright 2026 The cpa Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "cpa/interval.hpp"

namespace cpa {

/// Local update rule of a locally coupled, shift-invariant dynamical system:
/// one time step tau maps the values on the neighbourhood window U of a site
/// to the new value of that site. Implementations are pure and thread-safe.
class FlowMap {
 public:
  virtual ~FlowMap() = default;

  virtual std::string name() const = 0;
  /// Per-site state dimension n.
  virtual std::size_t dimension() const = 0;
  /// Neighbourhood U = {-r..s}.
  virtual Interval neighborhood() const = 0;
  virtual double time_step() const = 0;

  /// `window` holds |U| site values (site-major, n entries each); writes n values.
  virtual void step(std::span<const double> window, std::span<double> out) const = 0;
};

using FlowMapPtr = std::shared_ptr<const FlowMap>;

/// One global step: the local rule at every site i with i+U inside {1..m},
/// identity on the remaining (boundary) sites. `state` is m x n, site-major.
void advance_global(const FlowMap& flow, std::span<const double> state, std::span<double> out);

class IdentityFlow final : public FlowMap {
 public:
  explicit IdentityFlow(std::size_t n, double tau = 1.0);

  std::string name() const override { return "identity"; }
  std::size_t dimension() const override { return n_; }
  Interval neighborhood() const override { return {0, 0}; }
  double time_step() const override { return tau_; }
  void step(std::span<const double> window, std::span<double> out) const override;

 private:
  std::size_t n_;
  double tau_;
};

/// v_i <- (v_i + v_{i+1}) / divisor on [0, 1].
class AveragingFlow final : public FlowMap {
 public:
  explicit AveragingFlow(double divisor = 3.75);

  std::string name() const override { return "averaging"; }
  std::size_t dimension() const override { return 1; }
  Interval neighborhood() const override { return {0, 1}; }
  double time_step() const override { return 1.0; }
  void step(std::span<const double> window, std::span<double> out) const override;

  double divisor() const { return divisor_; }

 private:
  double divisor_;
};

/// First-order upwind step of u_t + c u_x = 0 on a grid of spacing dx.
class LinearAdvectionFlow final : public FlowMap {
 public:
  LinearAdvectionFlow(double speed, double dx, double tau);

  std::string name() const override { return "advection"; }
  std::size_t dimension() const override { return 1; }
  Interval neighborhood() const override;
  double time_step() const override { return tau_; }
  void step(std::span<const double> window, std::span<double> out) const override;

  double speed() const { return speed_; }
  double spacing() const { return dx_; }

 private:
  double speed_;
  double dx_;
  double tau_;
};

enum class Integrator { Euler = 1, Heun = 2, RungeKutta4 = 4 };

/// Langmuir adsorption model of dissolved (D, mg/l) and wall-adsorbed
/// (A, mg/m^2) arsenate in a pipe.
struct ArsenateParams {
  double v = 10.0;        // flow speed, m/min
  double r_h = 50.0;      // hydraulic ratio, l/m^2
  double k1 = 0.2;        // adsorption rate, l/(mg min)
  double s_max = 100.0;   // wall capacity, mg/m^2
  double k_eq = 0.0537;   // equilibrium constant, mg/l
  double k_f = 2.4;       // film transfer rate, l/(m^2 min)
  double dx = 100.0;      // report spacing, m
  double tau = 10.0;      // coarse step, min
  double dx_fine = 1.0;   // characteristic grid spacing, m
  double dt_fine = 0.1;   // fine step, min
  Integrator integrator = Integrator::RungeKutta4;

  /// Number of fine steps per coarse step (equal to fine cells per report spacing).
  std::size_t substeps() const;
  /// Throws InvalidArgument unless tau = dx/v, dx_fine = v dt_fine and both divide evenly.
  void validate() const;
};

/// Adsorption rate dA/dt; dD/dt = -rate / r_h.
double arsenate_rate(const ArsenateParams& p, double d, double a);

/// Integrates the site reaction ODE (no transport) over dt with the configured integrator.
void arsenate_react(const ArsenateParams& p, double& d, double& a, double dt);

/// Coarse step of the arsenate model with U = {-1, 0}. Inside one report spacing
/// the profile is linearly interpolated onto the characteristic grid; each fine
/// step shifts the dissolved concentration one fine cell downstream, injects
/// the upstream value at the inlet node and integrates the reaction at every
/// node. The result is the state at the downstream node.
class ArsenateFlow final : public FlowMap {
 public:
  explicit ArsenateFlow(ArsenateParams params = {});

  std::string name() const override { return "arsenate"; }
  std::size_t dimension() const override { return 2; }
  Interval neighborhood() const override { return {-1, 0}; }
  double time_step() const override { return params_.tau; }

  /// Only evaluates fine nodes whose state can still reach the downstream node.
  void step(std::span<const double> window, std::span<double> out) const override;

  /// Full characteristic grid, every node every fine step. Reference for `step`.
  void step_full_grid(std::span<const double> window, std::span<double> out) const;

  const ArsenateParams& params() const { return params_; }

 private:
  ArsenateParams params_;
  std::size_t substeps_;
};

}  // namespace cpa
