#pragma once

#include <utility>
#include <vector>

#include "epd/complex_field.hpp"
#include "epd/solution.hpp"

namespace epd {

// Jet of the solution W(z, zb) defined by the spec, including the second
// derivatives needed for Hessian work.  Contour families carry the 1/(2 pi i)
// normalization; delta and sampled families are direct sums/integrals.
Jet2 eval_jet(const SolutionSpec& spec, Complex z, Complex zb);

// Pure n-th derivatives (d/dz)^n W and (d/dzb)^n W, n >= 1.
std::pair<Complex, Complex> eval_dn(const SolutionSpec& spec, Complex z, Complex zb, int n);

// Residual of the elliptic equation with parameter k (default 1/2):
//   (z - zb) Wzzb - k (Wz - Wzb).
Complex epd_residual(const Jet2& jet, Complex z, Complex zb, double k = 0.5);

// Convenience: evaluates the jet and the residual at once.
Complex epd_residual(const SolutionSpec& spec, Complex z, Complex zb, double k = 0.5);

// Jet of the transformed solution
//   W'(z, zb) = ((c z + d)(c zb + d))^(-1/2) W((a z + b)/(c z + d), (a zb + b)/(c zb + d)),
// with a d - b c = 1.  Throws DomainError when either argument hits the pole.
Jet2 appell_jet(const SolutionSpec& spec, Complex z, Complex zb,
                double a, double b, double c, double d);

// Dual solution W*, defined through dW* = (z - zb)(Wz dz - Wzb dzb), base
// point z0 = i with W*(i) = 0.  The path is the polyline z0 -> waypoints...,
// with zb = conj(z) along the way; each leg uses Gauss-Legendre.
Complex dual_value(const SolutionSpec& spec, const std::vector<Complex>& waypoints,
                   int gl_order = 32);

// Residual of the dual equation E(-1/2, -1/2) for W*, with the second
// derivatives of W* assembled analytically from the jet of W.
Complex dual_residual(const SolutionSpec& spec, Complex z, Complex zb);

// Jet of W* (same assembly as dual_residual; the value slot holds
// (z - zb) * 0 convention and is not meaningful).
Jet2 dual_jet_from(const Jet2& jet, Complex z, Complex zb);

// Radon-form evaluation over the segment between z and zb (densities on the
// segment parameterized by lam = cos^2 a z + sin^2 a zb).  Only the phi part
// is supported; calibrated to agree with the circle-contour evaluation.
Complex radon_value_phi(const std::function<double(double)>& phi_of_alpha,
                        Complex z, Complex zb, int gl_order = 64);

// Solution value of the two-term family for the equation with parameter
// k = 1/2 + eps, built from delta densities (diagnostic for the eps -> 0
// limit towards the logarithmic solution):
//   W_eps = sum_j c_j [ P_j^-(1/2+eps) - (z-zb)^(-2 eps) P_j^(eps-1/2) ] / (2 eps)
// which tends to sum_j c_j K_j log((z-zb)/P_j).
Complex two_term_family_value(const DeltaSpec& d, double eps, Complex z, Complex zb);
Jet2 two_term_family_jet(const DeltaSpec& d, double eps, Complex z, Complex zb);

// Closed forms of the low-order monomial basis solutions (power index k for
// the x-family, 1 <= k <= 3; log index k for the y-family, 0 <= k <= 1) and
// of the first inverse-power basis solutions (1 <= k <= 2).  Used as the
// fast path and as the independent cross-check against quadrature.
Jet2 monomial_x_jet(int k, Complex z, Complex zb);
Jet2 monomial_y_jet(int k, Complex z, Complex zb, bool log_two_i);
Complex inverse_x_value(int k, Complex z, Complex zb);
Complex inverse_y_value(int k, Complex z, Complex zb, bool log_two_i);

}  // namespace epd
