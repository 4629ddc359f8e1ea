#include "epd/complex_field.hpp"

#include <cmath>
#include <numbers>

namespace epd {

Contour Contour::circle_at_infinity(double R, int nodes) {
    Contour c;
    c.kind = Kind::CircleAtInfinity;
    c.radius = R;
    c.nodes = nodes;
    c.validate();
    return c;
}

Contour Contour::circle_at_origin(double r, int nodes) {
    Contour c;
    c.kind = Kind::CircleAtOrigin;
    c.radius = r;
    c.nodes = nodes;
    c.validate();
    return c;
}

Contour Contour::segment_between(Complex z1, Complex z2, int nodes) {
    Contour c;
    c.kind = Kind::SegmentBetween;
    c.z1 = z1;
    c.z2 = z2;
    c.nodes = nodes;
    c.validate();
    return c;
}

Contour Contour::real_interval(double a, double b, int nodes) {
    Contour c;
    c.kind = Kind::RealInterval;
    c.a = a;
    c.b = b;
    c.nodes = nodes;
    c.validate();
    return c;
}

void Contour::validate() const {
    if (nodes < 16) throw DomainError("contour: need at least 16 nodes");
    switch (kind) {
        case Kind::CircleAtInfinity:
        case Kind::CircleAtOrigin:
            if (!(radius > 0.0)) throw DomainError("contour: radius must be positive");
            break;
        case Kind::SegmentBetween:
            require_finite(z1, "contour endpoint");
            require_finite(z2, "contour endpoint");
            if (std::abs(z1 - z2) == 0.0)
                throw DomainError("contour: coincident segment endpoints");
            break;
        case Kind::RealInterval:
            if (!(a < b)) throw DomainError("contour: interval requires a < b");
            break;
    }
}

Complex kernel_pow(Complex lam, Complex z, Complex zb) {
    require_finite(lam, "kernel_pow lam");
    require_finite(z, "kernel_pow z");
    require_finite(zb, "kernel_pow zb");
    const double scale = std::abs(lam) + std::abs(z) + std::abs(zb) + 1.0;
    if (std::abs(lam - z) <= kSingularTol * scale ||
        std::abs(lam - zb) <= kSingularTol * scale)
        throw DomainError("kernel_pow: evaluation point on kernel singularity");
    const Complex p = (lam - z) * (lam - zb);
    return 1.0 / std::sqrt(p);
}

Complex kernel_log(Complex lam, Complex z, Complex zb) {
    require_finite(lam, "kernel_log lam");
    require_finite(z, "kernel_log z");
    require_finite(zb, "kernel_log zb");
    const double scale = std::abs(lam) + std::abs(z) + std::abs(zb) + 1.0;
    if (std::abs(z - zb) <= kSingularTol * scale)
        throw DomainError("kernel_log: coincident arguments z == zb");
    if (std::abs(lam - z) <= kSingularTol * scale ||
        std::abs(lam - zb) <= kSingularTol * scale)
        throw DomainError("kernel_log: evaluation point on kernel singularity");
    return std::log((z - zb) / ((lam - z) * (lam - zb)));
}

// Gauss-Legendre by Newton iteration on the Legendre recurrence.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    if (n < 1) throw DomainError("gauss_legendre: need n >= 1");
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
        weights[n - 1 - i] = weights[i];
    }
}

namespace {

Complex trapezoid_circle(const std::function<Complex(Complex)>& f, double R, int n) {
    Complex sum{};
    const double dt = 2.0 * std::numbers::pi / n;
    for (int j = 0; j < n; ++j) {
        const double th = j * dt;
        const Complex lam = R * Complex(std::cos(th), std::sin(th));
        sum += f(lam) * Complex(0.0, 1.0) * lam;  // dlam = i lam dtheta
    }
    return sum * dt;
}

Complex gl_interval(const std::function<Complex(Complex)>& f, double a, double b, int n) {
    std::vector<double> x, w;
    gauss_legendre(n, x, w);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    Complex sum{};
    for (int j = 0; j < n; ++j) sum += w[j] * f(Complex(mid + half * x[j], 0.0));
    return sum * half;
}

// Two-point segment, parameterized lam(alpha) = cos^2(a) z1 + sin^2(a) z2 on
// [0, pi/2]; the Jacobian sin(2a) (z2 - z1) is carried explicitly.
Complex gl_segment(const std::function<Complex(Complex)>& f, Complex z1, Complex z2, int n) {
    std::vector<double> x, w;
    gauss_legendre(n, x, w);
    const double half = std::numbers::pi / 4.0;
    Complex sum{};
    for (int j = 0; j < n; ++j) {
        const double al = half * (1.0 + x[j]);
        const double c = std::cos(al), s = std::sin(al);
        const Complex lam = c * c * z1 + s * s * z2;
        sum += w[j] * f(lam) * (std::sin(2.0 * al) * (z2 - z1));
    }
    return sum * half;
}

}  // namespace

Complex integrate_fixed(const std::function<Complex(Complex)>& f, const Contour& c, int nodes) {
    switch (c.kind) {
        case Contour::Kind::CircleAtInfinity:
        case Contour::Kind::CircleAtOrigin:
            return trapezoid_circle(f, c.radius, nodes);
        case Contour::Kind::SegmentBetween:
            return gl_segment(f, c.z1, c.z2, nodes);
        case Contour::Kind::RealInterval:
            return gl_interval(f, c.a, c.b, nodes);
    }
    throw DomainError("integrate: unknown contour kind");
}

Complex integrate(const std::function<Complex(Complex)>& f, const Contour& c,
                  double tol, int max_doublings) {
    c.validate();
    int n = c.nodes;
    Complex prev = integrate_fixed(f, c, n);
    for (int k = 0; k < max_doublings; ++k) {
        n *= 2;
        const Complex cur = integrate_fixed(f, c, n);
        if (std::abs(cur - prev) <= tol * (1.0 + std::abs(cur))) return cur;
        prev = cur;
    }
    throw ConvergenceError("integrate: node doubling did not converge");
}

}  // namespace epd
