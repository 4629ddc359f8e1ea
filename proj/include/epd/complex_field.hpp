#pragma once

#include <functional>
#include <vector>

#include "epd/types.hpp"

namespace epd {

// Integration contour.  Circles are sampled with the trapezoid rule (which is
// spectrally accurate for integrands analytic in an annulus around the
// circle); real intervals and the two-point segment use Gauss-Legendre.
struct Contour {
    enum class Kind { CircleAtInfinity, CircleAtOrigin, SegmentBetween, RealInterval };

    Kind kind = Kind::CircleAtInfinity;
    double radius = 0.0;   // circles
    Complex z1{}, z2{};    // SegmentBetween endpoints
    double a = 0.0, b = 0.0;  // RealInterval endpoints
    int nodes = 256;

    static Contour circle_at_infinity(double R, int nodes = 256);
    static Contour circle_at_origin(double r, int nodes = 256);
    static Contour segment_between(Complex z1, Complex z2, int nodes = 256);
    static Contour real_interval(double a, double b, int nodes = 256);

    void validate() const;
};

// Principal square-root kernel ((lam - z)(lam - zb))^(-1/2), evaluated as the
// principal power of the product so the value is single-valued in (z, zb) and
// real and positive when zb = conj(z) with lam real.
Complex kernel_pow(Complex lam, Complex z, Complex zb);

// Logarithmic kernel log((z - zb) / ((lam - z)(lam - zb))), principal branch
// of the ratio.
Complex kernel_log(Complex lam, Complex z, Complex zb);

// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

// Contour integral of f along c.  The node count is doubled until the result
// changes by less than tol * (1 + |result|); throws ConvergenceError if the
// cap on doublings is exceeded.
Complex integrate(const std::function<Complex(Complex)>& f, const Contour& c,
                  double tol = 1e-12, int max_doublings = 6);

// Single fixed-resolution pass (no convergence loop).
Complex integrate_fixed(const std::function<Complex(Complex)>& f, const Contour& c, int nodes);

}  // namespace epd
