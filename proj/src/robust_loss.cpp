// Copyright 2026 The RMBC Authors
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

#include "rmbc/robust_loss.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/tools/roots.hpp>

#include "rmbc/error.hpp"

namespace rmbc
{

namespace
{

constexpr double kJoin = 2.0 / 3.0;

void check_nonnegative(double t)
{
  if (!(t >= 0.0)) {
    throw Error(ErrorCode::kNegativeArgument, "loss argument must be nonnegative");
  }
}

double rho_printed(double t)
{
  if (t < kJoin) {
    return 1.38 * t * t;
  }
  if (t <= 1.0) {
    const double t2 = t * t;
    return 0.55 + t2 * (-2.69 + t2 * (10.76 + t2 * (-11.66 + t2 * 4.04)));
  }
  return 1.0;
}

double psi_printed(double t)
{
  if (t <= kJoin) {
    return 2.76 * t;
  }
  if (t <= 1.0) {
    const double t2 = t * t;
    return t * (-5.38 + t2 * (43.04 + t2 * (-69.96 + t2 * 32.32)));
  }
  return 0.0;
}

// Full-precision form: u = 3t, ρ = u²/6.5 on u ≤ 2 and the degree-8
// polynomial over 3.25 on 2 < u ≤ 3.
double rho_full(double t)
{
  if (t < kJoin) {
    return 9.0 * t * t / 6.5;
  }
  if (t <= 1.0) {
    const double u2 = 9.0 * t * t;
    return (1.792 + u2 * (-0.972 + u2 * (0.432 + u2 * (-0.052 + u2 * 0.002)))) / 3.25;
  }
  return 1.0;
}

double psi_full(double t)
{
  if (t <= kJoin) {
    return 18.0 * t / 6.5;
  }
  if (t <= 1.0) {
    const double u = 3.0 * t;
    const double u2 = u * u;
    // d/dt = 3 d/du
    return 3.0 * u * (-1.944 + u2 * (1.728 + u2 * (-0.312 + u2 * 0.016))) / 3.25;
  }
  return 0.0;
}

double weight_at_zero(RhoForm form)
{
  return form == RhoForm::kPrinted ? 2.76 : 18.0 / 6.5;
}

// 512-point Gauss–Legendre rule on [-1, 1], nodes by Newton iteration on P_n.
struct GaussLegendre
{
  static constexpr int kNodes = 512;
  std::array<double, kNodes> nodes{};
  std::array<double, kNodes> weights{};

  GaussLegendre()
  {
    constexpr int n = kNodes;
    for (int i = 0; i < (n + 1) / 2; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = pk;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double step = p1 / dp;
        x -= step;
        if (std::abs(step) < 1e-16) {
          break;
        }
      }
      const double w = 2.0 / ((1.0 - x * x) * dp * dp);
      nodes[static_cast<std::size_t>(i)] = -x;
      nodes[static_cast<std::size_t>(n - 1 - i)] = x;
      weights[static_cast<std::size_t>(i)] = w;
      weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
  }

  template <typename F>
  double integrate(F && f, double lo, double hi) const
  {
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    double sum = 0.0;
    for (int i = 0; i < kNodes; ++i) {
      const auto idx = static_cast<std::size_t>(i);
      sum += weights[idx] * f(mid + half * nodes[idx]);
    }
    return half * sum;
  }
};

const GaussLegendre & gauss_legendre()
{
  static const GaussLegendre rule;
  return rule;
}

// E[ρ(R / c)] where R = √Y is χ-distributed with p degrees of freedom.
double expected_rho(int p, double c, RhoForm form)
{
  const double dof = static_cast<double>(p);
  const double log_norm = (0.5 * dof - 1.0) * std::log(2.0) + std::lgamma(0.5 * dof);
  const auto integrand = [&](double r) {
    if (r <= 0.0) {
      return 0.0;
    }
    const double log_pdf = (dof - 1.0) * std::log(r) - 0.5 * r * r - log_norm;
    return rho(r / c, form) * std::exp(log_pdf);
  };
  const GaussLegendre & gl = gauss_legendre();
  const double inner = gl.integrate(integrand, 0.0, kJoin * c) + gl.integrate(integrand, kJoin * c, c);
  const double tail = boost::math::gamma_q(0.5 * dof, 0.5 * c * c);
  return inner + tail;
}

}  // namespace

double rho(double t, RhoForm form)
{
  check_nonnegative(t);
  return form == RhoForm::kPrinted ? rho_printed(t) : rho_full(t);
}

double psi(double t, RhoForm form)
{
  check_nonnegative(t);
  return form == RhoForm::kPrinted ? psi_printed(t) : psi_full(t);
}

double weight(double t, RhoForm form)
{
  check_nonnegative(t);
  if (t <= kJoin) {
    return weight_at_zero(form);
  }
  return psi(t, form) / t;
}

double tuning_constant(int p, double b, RhoForm form)
{
  if (p < 1) {
    throw Error(ErrorCode::kInvalidArgument, "dimension must be at least 1");
  }
  if (!(b > 0.0 && b < 1.0)) {
    throw Error(ErrorCode::kBracketFailure, "b must lie in (0, 1)");
  }
  const auto excess = [&](double c) { return expected_rho(p, c, form) - b; };
  // E[ρ(R/c)] decreases from 1 (c → 0) to 0 (c → ∞).
  double lo = 1e-3;
  double hi = 1.0;
  int expansions = 0;
  while (excess(lo) < 0.0 && expansions++ < 60) {
    lo *= 0.5;
  }
  expansions = 0;
  while (excess(hi) > 0.0 && expansions++ < 60) {
    hi *= 2.0;
  }
  if (excess(lo) < 0.0 || excess(hi) > 0.0) {
    throw Error(ErrorCode::kBracketFailure, "could not bracket tuning constant for p=" + std::to_string(p));
  }
  std::uintmax_t max_iter = 200;
  const auto tol = [](double a, double z) { return std::abs(a - z) <= 1e-12; };
  const auto [left, right] = boost::math::tools::toms748_solve(excess, lo, hi, tol, max_iter);
  return 0.5 * (left + right);
}

LossSpec::LossSpec(double c, double b, RhoForm form, bool quadratic)
: c_(c), b_(b), form_(form), quadratic_(quadratic)
{
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw Error(ErrorCode::kInvalidArgument, "loss constant must be positive");
  }
  if (!(b > 0.0 && b < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "b must lie in (0, 1)");
  }
}

LossSpec LossSpec::optimal(int p, double b, RhoForm form)
{
  return LossSpec(tuning_constant(p, b, form), b, form, false);
}

LossSpec LossSpec::with_constant(double c, double b, RhoForm form)
{
  return LossSpec(c, b, form, false);
}

LossSpec LossSpec::quadratic(double a, double b)
{
  return LossSpec(a, b, RhoForm::kFull, true);
}

double LossSpec::rho(double d) const
{
  if (quadratic_) {
    check_nonnegative(d);
    return c_ * d * d;
  }
  return rmbc::rho(d / c_, form_);
}

double LossSpec::weight(double d) const
{
  if (quadratic_) {
    check_nonnegative(d);
    return 2.0 * c_;
  }
  // W_c(d) = ψ(d/c) / (c d) = W(d/c) / c²
  return rmbc::weight(d / c_, form_) / (c_ * c_);
}

}  // namespace rmbc
