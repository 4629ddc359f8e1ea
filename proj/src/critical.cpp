#include "epd/critical.hpp"

#include <cmath>
#include <numbers>

namespace epd {

namespace {

const Complex kI{0.0, 1.0};

// Real 2x2 solve: J [da db]^T = rhs, J given by columns (complex-encoded).
void solve2(const Complex& col_a, const Complex& col_b, const Complex& rhs,
            double& da, double& db) {
    const double a11 = col_a.real(), a12 = col_b.real();
    const double a21 = col_a.imag(), a22 = col_b.imag();
    const double det = a11 * a22 - a12 * a21;
    if (std::abs(det) < 1e-300) throw ConvergenceError("newton: singular Jacobian");
    da = (rhs.real() * a22 - rhs.imag() * a12) / det;
    db = (rhs.imag() * a11 - rhs.real() * a21) / det;
}

}  // namespace

CriticalPoint find_critical(const JetFn& jet, Complex guess, const NewtonOptions& opt) {
    require_finite(guess, "find_critical guess");
    Complex beta = guess;
    if (beta.imag() <= opt.min_imag)
        throw DomainError("find_critical: guess must be strictly off the real axis");
    CriticalPoint cp;
    for (int it = 0; it < opt.max_iter; ++it) {
        const Jet2 j = jet(beta, std::conj(beta));
        cp.iterations = it + 1;
        cp.residual = std::abs(j.wz);
        if (cp.residual <= opt.tol) {
            // A root hugging the collapse guard is a real-axis degeneration,
            // not an admissible critical point.
            if (beta.imag() <= 100.0 * opt.min_imag)
                throw ConvergenceError("find_critical: root collapsed onto the real axis");
            cp.beta = beta;
            cp.wbb = j.wzz;
            cp.wcc = j.wzbzb;
            cp.wmix = j.wzzb;
            cp.order = 1;
            return cp;
        }
        // d/da F = Wzz + Wzzb, d/db F = i (Wzz - Wzzb) with beta = a + i b.
        const Complex col_a = j.wzz + j.wzzb;
        const Complex col_b = kI * (j.wzz - j.wzzb);
        double da = 0.0, db = 0.0;
        solve2(col_a, col_b, -j.wz, da, db);
        Complex step(da, db);
        // Keep the iterate off the real axis.
        int halvings = 0;
        while ((beta + step).imag() <= opt.min_imag && halvings < 60) {
            step *= 0.5;
            ++halvings;
        }
        if (halvings >= 60)
            throw ConvergenceError("find_critical: iterate collapsed to the real axis");
        beta += step;
    }
    throw ConvergenceError("find_critical: no convergence (no off-axis critical point?)");
}

CriticalPoint find_critical(const SolutionSpec& spec, Complex guess, const NewtonOptions& opt) {
    CriticalPoint cp = find_critical(
        JetFn([&](Complex z, Complex zb) { return eval_jet(spec, z, zb); }), guess, opt);
    // Degeneracy: probe higher derivatives when the Hessian vanishes.
    if (std::abs(cp.wbb) < opt.degeneracy_tol) {
        for (int n = 3; n <= opt.max_order_probe + 1; ++n) {
            const auto dn = eval_dn(spec, cp.beta, std::conj(cp.beta), n);
            if (std::abs(dn.first) > opt.degeneracy_tol) {
                cp.order = n - 1;
                break;
            }
        }
    }
    return cp;
}

std::pair<Complex, Complex> find_critical_complex(const SolutionSpec& spec,
                                                  Complex guess_z, Complex guess_zb,
                                                  const NewtonOptions& opt) {
    Complex z = guess_z, zb = guess_zb;
    for (int it = 0; it < opt.max_iter; ++it) {
        const Jet2 j = eval_jet(spec, z, zb);
        const double res = std::hypot(std::abs(j.wz), std::abs(j.wzb));
        if (res <= opt.tol) return {z, zb};
        const Complex det = j.wzz * j.wzbzb - j.wzzb * j.wzzb;
        if (std::abs(det) < 1e-300)
            throw ConvergenceError("find_critical_complex: singular Hessian");
        const Complex dz = -(j.wz * j.wzbzb - j.wzb * j.wzzb) / det;
        const Complex dzb = -(j.wzb * j.wzz - j.wz * j.wzzb) / det;
        z += dz;
        zb += dzb;
    }
    throw ConvergenceError("find_critical_complex: no convergence");
}

std::vector<Complex> clinants(const SolutionSpec& spec, const CriticalPoint& cp) {
    if (cp.order == 1) {
        if (std::abs(cp.wcc) == 0.0)
            throw DomainError("clinants: vanishing conjugate Hessian entry");
        const Complex r = std::sqrt(-cp.wbb / cp.wcc);
        return {r, -r};
    }
    const int n = cp.order + 1;  // first non-vanishing derivative order
    const auto dn = eval_dn(spec, cp.beta, std::conj(cp.beta), n);
    if (std::abs(dn.second) == 0.0)
        throw DomainError("clinants: vanishing conjugate derivative");
    const Complex ratio = -dn.first / dn.second;
    const Complex base = std::pow(ratio, 1.0 / n);
    std::vector<Complex> out;
    out.reserve(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) {
        const double th = 2.0 * std::numbers::pi * j / n;
        out.push_back(base * Complex(std::cos(th), std::sin(th)));
    }
    return out;
}

Complex vary_critical(const SolutionSpec& spec, const CriticalPoint& cp,
                      const SolutionSpec& dspec) {
    (void)spec;
    if (std::abs(cp.wbb) < 1e-14)
        throw DomainError("vary_critical: degenerate Hessian");
    const Jet2 dj = eval_jet(dspec, cp.beta, std::conj(cp.beta));
    // The mixed Hessian entry vanishes at critical points of solutions, so
    // the first-order displacement decouples.
    return -dj.wz / cp.wbb;
}

double exactness_check(const SolutionSpec& spec, const std::string& family_a, int index_a,
                       const std::string& family_b, int index_b, double step,
                       Complex guess) {
    const SolutionSpec basis_a = unit_basis(spec, family_a, index_a);
    const SolutionSpec basis_b = unit_basis(spec, family_b, index_b);

    auto value_at = [&](const SolutionSpec& basis, const std::string& fam, int idx,
                        double offset) {
        SolutionSpec s = spec;
        coefficient(s, fam, idx) += offset;
        const CriticalPoint cp = find_critical(s, guess);
        return eval_jet(basis, cp.beta, std::conj(cp.beta)).w;
    };
    // d/dx_b of W_a along the critical manifold, and the transpose.
    const Complex dab = (value_at(basis_a, family_b, index_b, step) -
                         value_at(basis_a, family_b, index_b, -step)) / (2.0 * step);
    const Complex dba = (value_at(basis_b, family_a, index_a, step) -
                         value_at(basis_b, family_a, index_a, -step)) / (2.0 * step);
    return std::abs(dab - dba);
}

namespace {

// Complex-encoded gradient of the real field: g = w_x + i w_y = 2 conj(Wz)
// (primal) or with Wz replaced by (z - zb) Wz (dual).
Complex field_grad(const SolutionSpec& spec, Complex z, bool dual) {
    const Jet2 j = eval_jet(spec, z, std::conj(z));
    Complex wz = j.wz;
    if (dual) wz *= (z - std::conj(z));
    return 2.0 * std::conj(wz);
}

double primal_value(const SolutionSpec& spec, Complex z) {
    return eval_jet(spec, z, std::conj(z)).w.real();
}

// Increment of W* along the straight segment from z1 to z2.
double dual_increment(const SolutionSpec& spec, Complex z1, Complex z2, int order = 8) {
    std::vector<double> gx, gw;
    gauss_legendre(order, gx, gw);
    const Complex dz = z2 - z1;
    double acc = 0.0;
    for (int q = 0; q < order; ++q) {
        const double t = 0.5 * (1.0 + gx[q]);
        const Complex zq = z1 + t * dz;
        const Jet2 j = eval_jet(spec, zq, std::conj(zq));
        const Complex form = (zq - std::conj(zq)) * (j.wz * dz - j.wzb * std::conj(dz));
        acc += 0.5 * gw[q] * form.real();
    }
    return acc;
}

}  // namespace

TraceResult trace_level_curve(const SolutionSpec& spec, Complex start, double h,
                              int max_steps, bool dual, double grad_floor) {
    require_finite(start, "trace start");
    if (start.imag() <= 0.0) throw DomainError("trace: start must be in the upper half plane");
    TraceResult res;
    res.points.push_back(start);
    Complex z = start;
    double v = 0.0;  // value relative to the start level
    for (int step = 0; step < max_steps; ++step) {
        Complex g = field_grad(spec, z, dual);
        if (std::abs(g) < grad_floor) {
            res.hit_critical = true;
            return res;
        }
        const Complex tangent = kI * g / std::abs(g);
        Complex zp = z + h * tangent;
        double vp = dual ? v + dual_increment(spec, z, zp)
                         : primal_value(spec, zp) - primal_value(spec, start);
        bool corrected = false;
        for (int it = 0; it < 12; ++it) {
            if (std::abs(vp) <= 1e-13 * (1.0 + std::abs(h))) {
                corrected = true;
                break;
            }
            Complex g2 = field_grad(spec, zp, dual);
            if (std::abs(g2) < grad_floor) {
                res.hit_critical = true;
                return res;
            }
            const Complex corr = -vp * g2 / std::norm(g2);
            if (dual) {
                vp += dual_increment(spec, zp, zp + corr);
            }
            zp += corr;
            if (!dual) vp = primal_value(spec, zp) - primal_value(spec, start);
        }
        if (!corrected && std::abs(vp) > 1e-10 * (1.0 + std::abs(h)))
            throw ConvergenceError("trace: corrector failed");
        z = zp;
        v = vp;
        res.points.push_back(z);
        if (z.imag() <= 0.0) break;  // left the admissible half plane
    }
    return res;
}

double double_point_arc_angle(const SolutionSpec& spec, const CriticalPoint& cp, double r) {
    auto angle_at = [&](double rad) {
        const double w0 = eval_jet(spec, cp.beta, std::conj(cp.beta)).w.real();
        auto f = [&](double th) {
            const Complex z = cp.beta + rad * Complex(std::cos(th), std::sin(th));
            return eval_jet(spec, z, std::conj(z)).w.real() - w0;
        };
        // Locate the level-set crossings on the circle.
        const int nth = 720;
        std::vector<double> roots;
        double prev = f(0.0);
        for (int i = 1; i <= nth; ++i) {
            const double th = 2.0 * std::numbers::pi * i / nth;
            const double cur = f(th);
            if (prev == 0.0) roots.push_back(2.0 * std::numbers::pi * (i - 1) / nth);
            else if (prev * cur < 0.0) {
                double lo = 2.0 * std::numbers::pi * (i - 1) / nth, hi = th;
                double flo = prev;
                for (int b = 0; b < 80; ++b) {
                    const double mid = 0.5 * (lo + hi);
                    const double fm = f(mid);
                    if (flo * fm <= 0.0) hi = mid;
                    else {
                        lo = mid;
                        flo = fm;
                    }
                }
                roots.push_back(0.5 * (lo + hi));
            }
            prev = cur;
        }
        if (roots.size() != 4)
            throw DomainError("double_point_arc_angle: level set does not cross 4 times");
        auto point = [&](double th) {
            return cp.beta + rad * Complex(std::cos(th), std::sin(th));
        };
        // Pair each crossing with the one closest to opposite.
        const double t0 = roots[0];
        double best = 1e9;
        size_t mate = 1;
        for (size_t k = 1; k < 4; ++k) {
            double d = std::abs(std::remainder(roots[k] - t0 - std::numbers::pi,
                                               2.0 * std::numbers::pi));
            if (d < best) {
                best = d;
                mate = k;
            }
        }
        std::vector<size_t> others;
        for (size_t k = 1; k < 4; ++k)
            if (k != mate) others.push_back(k);
        const Complex d1 = point(roots[mate]) - point(t0);
        const Complex d2 = point(roots[others[1]]) - point(roots[others[0]]);
        double ang = std::abs(std::arg(d2 / d1));
        if (ang > std::numbers::pi / 2.0) ang = std::numbers::pi - ang;
        return ang;
    };
    const double a1 = angle_at(r);
    const double a2 = angle_at(r / 2.0);
    return 2.0 * a2 - a1;  // Richardson in r
}

}  // namespace epd
