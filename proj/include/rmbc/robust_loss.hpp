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

#ifndef RMBC_ROBUST_LOSS_HPP_
#define RMBC_ROBUST_LOSS_HPP_

namespace rmbc
{

/// Coefficient set of the bounded "optimal" loss.
///
/// kPrinted uses the two-decimal coefficients
///   1.38 t²                                            0 ≤ t < 2/3
///   0.55 − 2.69 t² + 10.76 t⁴ − 11.66 t⁶ + 4.04 t⁸     2/3 ≤ t ≤ 1
///   1                                                  t > 1
/// which are slightly discontinuous at the joins. kFull is the same curve with
/// the unrounded coefficients (u = 3t):
///   u²/6.5 and (1.792 − 0.972u² + 0.432u⁴ − 0.052u⁶ + 0.002u⁸)/3.25,
/// continuous with a continuous derivative. Tuning constants computed for
/// kFull reproduce the published c(p) table to within 0.005.
/// How s* moves toward the M-scale equation Σ w_i ρ_c(d*_i / s*) = b.
///  kLinear:     s*' = s* · Σ w_i ρ_c(d*_i / s*) / b
///  kSquareRoot: s*' = s* · √(Σ w_i ρ_c(d*_i / s*) / b)
/// Both share every fixed point. The linear step is the textbook form; near
/// a quadratic ρ its Jacobian approaches −1 and, coupled with the Σ* update,
/// can settle into a 2-cycle. The square-root step halves that gain and is
/// stable for every bounded ρ.
enum class ScaleStep { kLinear, kSquareRoot };

enum class RhoForm { kPrinted, kFull };

/// ρ(t), nondecreasing from ρ(0)=0 to 1 on t ≥ 1. Throws kNegativeArgument.
double rho(double t, RhoForm form = RhoForm::kPrinted);
/// ψ = ρ'. At the kPrinted joins the left branch is used.
double psi(double t, RhoForm form = RhoForm::kPrinted);
/// W(t) = ψ(t)/t, extended continuously to t = 0; zero for t > 1.
double weight(double t, RhoForm form = RhoForm::kPrinted);

/// The c > 0 with E[ρ(√Y / c)] = b for Y ~ χ²_p. Root found to 1e-10 absolute.
/// Throws kInvalidArgument for p < 1 and kBracketFailure for b outside (0, 1).
double tuning_constant(int p, double b, RhoForm form = RhoForm::kFull);

/// Scaled loss used by the estimators: ρ_c(d) = ρ(d / c) together with its
/// weight W_c(d) = ψ_c(d)/d, and the target b of the M-scale equation.
///
/// A quadratic loss ρ(d) = a d² (constant weight 2a) is also available; with
/// it every weighted update collapses to the classical Gaussian one.
class LossSpec
{
public:
  /// c = tuning_constant(p, b, form).
  static LossSpec optimal(int p, double b = 0.5, RhoForm form = RhoForm::kFull);
  static LossSpec with_constant(double c, double b = 0.5, RhoForm form = RhoForm::kFull);
  static LossSpec quadratic(double a, double b = 0.5);

  /// Tuning constant; for a quadratic loss this is the coefficient a.
  double c() const { return c_; }
  double b() const { return b_; }
  bool is_quadratic() const { return quadratic_; }
  RhoForm form() const { return form_; }

  double rho(double d) const;
  double weight(double d) const;

private:
  LossSpec(double c, double b, RhoForm form, bool quadratic);

  double c_;
  double b_;
  RhoForm form_;
  bool quadratic_;
};

}  // namespace rmbc

#endif  // RMBC_ROBUST_LOSS_HPP_
