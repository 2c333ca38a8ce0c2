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

#include "cpa/models.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cpa/error.hpp"

namespace cpa {

void advance_global(const FlowMap& flow, std::span<const double> state, std::span<double> out) {
  const std::size_t n = flow.dimension();
  const Interval u = flow.neighborhood();
  if (state.size() % n != 0 || out.size() != state.size()) {
    throw InvalidArgument("advance_global: state size must be a multiple of the site dimension");
  }
  const int m = static_cast<int>(state.size() / n);
  const int r = -u.lo;
  const int s = u.hi;
  std::copy(state.begin(), state.end(), out.begin());
  for (int i = 1 + r; i <= m - s; ++i) {
    const auto first = static_cast<std::size_t>(i - r - 1) * n;
    flow.step(state.subspan(first, u.size() * n),
              out.subspan(static_cast<std::size_t>(i - 1) * n, n));
  }
}

IdentityFlow::IdentityFlow(std::size_t n, double tau) : n_(n), tau_(tau) {
  if (n == 0) throw InvalidArgument("identity flow needs a positive dimension");
}

void IdentityFlow::step(std::span<const double> window, std::span<double> out) const {
  std::copy_n(window.begin(), n_, out.begin());
}

AveragingFlow::AveragingFlow(double divisor) : divisor_(divisor) {
  if (!(divisor >= 2.0)) throw InvalidArgument("averaging divisor must be at least 2");
}

void AveragingFlow::step(std::span<const double> window, std::span<double> out) const {
  out[0] = (window[0] + window[1]) / divisor_;
}

LinearAdvectionFlow::LinearAdvectionFlow(double speed, double dx, double tau)
    : speed_(speed), dx_(dx), tau_(tau) {
  if (!(dx > 0.0) || !(tau > 0.0)) throw InvalidArgument("advection needs dx > 0 and tau > 0");
  if (std::abs(speed) * tau > dx * (1.0 + 1e-12)) {
    throw InvalidArgument("advection violates the CFL condition |c| tau <= dx");
  }
}

Interval LinearAdvectionFlow::neighborhood() const {
  return speed_ >= 0.0 ? Interval{-1, 0} : Interval{0, 1};
}

void LinearAdvectionFlow::step(std::span<const double> window, std::span<double> out) const {
  const double courant = speed_ * tau_ / dx_;
  if (speed_ >= 0.0) {
    out[0] = window[1] - courant * (window[1] - window[0]);
  } else {
    out[0] = window[0] - courant * (window[1] - window[0]);
  }
}

std::size_t ArsenateParams::substeps() const {
  return static_cast<std::size_t>(std::llround(tau / dt_fine));
}

void ArsenateParams::validate() const {
  auto positive = [](double x, const char* what) {
    if (!(x > 0.0) || !std::isfinite(x)) {
      throw InvalidArgument(std::string("arsenate parameter ") + what + " must be positive");
    }
  };
  positive(v, "v");
  positive(r_h, "r_h");
  positive(k1, "k1");
  positive(s_max, "s_max");
  positive(k_eq, "k_eq");
  positive(k_f, "k_f");
  positive(dx, "dx");
  positive(tau, "tau");
  positive(dx_fine, "dx_fine");
  positive(dt_fine, "dt_fine");
  auto close = [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(std::abs(a), std::abs(b)); };
  if (!close(tau, dx / v)) throw InvalidArgument("arsenate model needs tau = dx / v");
  if (!close(dx_fine, v * dt_fine)) throw InvalidArgument("arsenate model needs dx_fine = v dt_fine");
  const double steps = tau / dt_fine;
  if (!close(steps, std::round(steps)) || steps < 1.0) {
    throw InvalidArgument("dt_fine must divide tau");
  }
  const double cells = dx / dx_fine;
  if (!close(cells, std::round(cells))) throw InvalidArgument("dx_fine must divide dx");
}

double arsenate_rate(const ArsenateParams& p, double d, double a) {
  const double free_sites = p.s_max - a;
  return (d * free_sites - p.k_eq * a) / (1.0 / p.k1 + free_sites / p.k_f);
}

namespace {

struct Coefficients {
  double s_max, k_eq, inv_k1, inv_kf, inv_rh;
};

Coefficients coefficients(const ArsenateParams& p) {
  return {p.s_max, p.k_eq, 1.0 / p.k1, 1.0 / p.k_f, 1.0 / p.r_h};
}

inline double rate(const Coefficients& c, double d, double a) {
  const double free_sites = c.s_max - a;
  return (d * free_sites - c.k_eq * a) / (c.inv_k1 + free_sites * c.inv_kf);
}

// D and A move along the same direction (-1/r_h, 1) in state space, so every
// stage reduces to one scalar rate evaluation.
template <Integrator I>
inline void react(const Coefficients& c, double& d, double& a, double h) {
  if constexpr (I == Integrator::Euler) {
    const double k = rate(c, d, a);
    a += h * k;
    d -= h * k * c.inv_rh;
  } else if constexpr (I == Integrator::Heun) {
    const double k1 = rate(c, d, a);
    const double k2 = rate(c, d - h * k1 * c.inv_rh, a + h * k1);
    const double da = 0.5 * h * (k1 + k2);
    a += da;
    d -= da * c.inv_rh;
  } else {
    const double hh = 0.5 * h;
    const double k1 = rate(c, d, a);
    const double k2 = rate(c, d - hh * k1 * c.inv_rh, a + hh * k1);
    const double k3 = rate(c, d - hh * k2 * c.inv_rh, a + hh * k2);
    const double k4 = rate(c, d - h * k3 * c.inv_rh, a + h * k3);
    const double da = h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    a += da;
    d -= da * c.inv_rh;
  }
}

template <Integrator I>
inline void react_span(const Coefficients& c, double* __restrict d, double* __restrict a,
                       std::size_t count, double h) {
  for (std::size_t j = 0; j < count; ++j) react<I>(c, d[j], a[j], h);
}

// The node loop is the hot path of table construction; clones pick the widest
// vector unit available at run time.
#if defined(__GNUC__) && defined(__x86_64__) && !defined(__clang__)
#define CPA_VECTOR_CLONES __attribute__((target_clones("avx2", "default")))
#else
#define CPA_VECTOR_CLONES
#endif

CPA_VECTOR_CLONES void react_euler(const Coefficients& c, double* d, double* a, std::size_t count,
                                   double h) {
  react_span<Integrator::Euler>(c, d, a, count, h);
}

CPA_VECTOR_CLONES void react_heun(const Coefficients& c, double* d, double* a, std::size_t count,
                                  double h) {
  react_span<Integrator::Heun>(c, d, a, count, h);
}

CPA_VECTOR_CLONES void react_rk4(const Coefficients& c, double* d, double* a, std::size_t count,
                                 double h) {
  react_span<Integrator::RungeKutta4>(c, d, a, count, h);
}

void react_dispatch(Integrator integrator, const Coefficients& c, double* d, double* a,
                    std::size_t count, double h) {
  switch (integrator) {
    case Integrator::Euler: react_euler(c, d, a, count, h); break;
    case Integrator::Heun: react_heun(c, d, a, count, h); break;
    case Integrator::RungeKutta4: react_rk4(c, d, a, count, h); break;
  }
}

void check_window(std::span<const double> window) {
  if (window.size() != 4) throw InvalidArgument("arsenate window holds two (D, A) sites");
  for (double x : window) {
    if (!std::isfinite(x)) throw ModelInstability("arsenate input is not finite");
  }
}

void check_finite(double sum, std::size_t substep) {
  if (!std::isfinite(sum)) {
    throw ModelInstability("arsenate state became non-finite at fine substep " +
                           std::to_string(substep));
  }
}

}  // namespace

void arsenate_react(const ArsenateParams& p, double& d, double& a, double dt) {
  react_dispatch(p.integrator, coefficients(p), &d, &a, 1, dt);
}

ArsenateFlow::ArsenateFlow(ArsenateParams params) : params_(params) {
  params_.validate();
  substeps_ = params_.substeps();
}

void ArsenateFlow::step(std::span<const double> window, std::span<double> out) const {
  check_window(window);
  const std::size_t n = substeps_;
  const Coefficients c = coefficients(params_);
  const double d_up = window[0], a_up = window[1], d_loc = window[2], a_loc = window[3];

  // parcel[p]: dissolved concentration of the water that started at node p.
  // wall[j]:   adsorbed concentration at node j.
  std::vector<double> parcel(n + 1), wall(n + 1);
  for (std::size_t j = 0; j <= n; ++j) {
    const double t = static_cast<double>(j) / static_cast<double>(n);
    parcel[j] = d_up + (d_loc - d_up) * t;
    wall[j] = a_up + (a_loc - a_up) * t;
  }
  // After k fine steps node j holds parcel j - k; only nodes j >= k can still
  // influence node n.
  for (std::size_t k = 1; k <= n; ++k) {
    react_dispatch(params_.integrator, c, parcel.data(), wall.data() + k, n + 1 - k,
                   params_.dt_fine);
    check_finite(parcel[0] + wall[k], k);
  }
  out[0] = parcel[0];
  out[1] = wall[n];
}

void ArsenateFlow::step_full_grid(std::span<const double> window, std::span<double> out) const {
  check_window(window);
  const std::size_t n = substeps_;
  const double d_up = window[0], a_up = window[1], d_loc = window[2], a_loc = window[3];
  std::vector<double> dissolved(n + 1), wall(n + 1);
  for (std::size_t j = 0; j <= n; ++j) {
    const double t = static_cast<double>(j) / static_cast<double>(n);
    dissolved[j] = d_up + (d_loc - d_up) * t;
    wall[j] = a_up + (a_loc - a_up) * t;
  }
  for (std::size_t k = 1; k <= n; ++k) {
    for (std::size_t j = n; j > 0; --j) dissolved[j] = dissolved[j - 1];
    dissolved[0] = d_up;
    double sum = 0.0;
    for (std::size_t j = 0; j <= n; ++j) {
      arsenate_react(params_, dissolved[j], wall[j], params_.dt_fine);
      sum += dissolved[j] + wall[j];
    }
    check_finite(sum, k);
  }
  out[0] = dissolved[n];
  out[1] = wall[n];
}

}  // namespace cpa
