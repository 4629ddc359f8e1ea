#include "epd/evaluate.hpp"

#include <cmath>
#include <numbers>

namespace epd {

namespace {

const Complex kI{0.0, 1.0};
const double kLog2 = std::log(2.0);

// log(2i), subtracted from the log kernel under the real-valued convention.
const Complex kLogTwoI{kLog2, std::numbers::pi / 2.0};

struct KernelCtx {
    Complex az, azb;  // lam - z, lam - zb
    Complex s;        // z - zb
};

// Jet of K, where K is any branch with K^2 = 1/((lam-z)(lam-zb)).
Jet2 phi_jet(const Complex& K, const KernelCtx& c) {
    Jet2 j;
    j.w = K;
    j.wz = 0.5 * K / c.az;
    j.wzb = 0.5 * K / c.azb;
    j.wzz = 0.75 * K / (c.az * c.az);
    j.wzbzb = 0.75 * K / (c.azb * c.azb);
    j.wzzb = 0.25 * K / (c.az * c.azb);
    return j;
}

// Jet of K * L, where L is any branch of log((z-zb)/((lam-z)(lam-zb))) plus a
// constant; the derivative formulas below are branch-independent.
Jet2 psi_jet(const Complex& K, const Complex& L, const KernelCtx& c) {
    const Complex Kz = 0.5 * K / c.az;
    const Complex Kzb = 0.5 * K / c.azb;
    const Complex Kzz = 0.75 * K / (c.az * c.az);
    const Complex Kzbzb = 0.75 * K / (c.azb * c.azb);
    const Complex Kzzb = 0.25 * K / (c.az * c.azb);
    const Complex inv_s = 1.0 / c.s;
    const Complex Lz = inv_s + 1.0 / c.az;
    const Complex Lzb = -inv_s + 1.0 / c.azb;
    const Complex Lzz = -inv_s * inv_s + 1.0 / (c.az * c.az);
    const Complex Lzbzb = -inv_s * inv_s + 1.0 / (c.azb * c.azb);
    const Complex Lzzb = inv_s * inv_s;
    Jet2 j;
    j.w = K * L;
    j.wz = Kz * L + K * Lz;
    j.wzb = Kzb * L + K * Lzb;
    j.wzz = Kzz * L + 2.0 * Kz * Lz + K * Lzz;
    j.wzbzb = Kzbzb * L + 2.0 * Kzb * Lzb + K * Lzbzb;
    j.wzzb = Kzzb * L + Kz * Lzb + Kzb * Lz + K * Lzzb;
    return j;
}

double singular_scale(const Complex& lam, const Complex& z, const Complex& zb) {
    return std::abs(lam) + std::abs(z) + std::abs(zb) + 1.0;
}

void check_offset(const Complex& lam, const Complex& z, const Complex& zb) {
    const double sc = singular_scale(lam, z, zb);
    if (std::abs(lam - z) <= kSingularTol * sc || std::abs(lam - zb) <= kSingularTol * sc)
        throw DomainError("eval: evaluation point on kernel singularity");
}

// sum_j c[j] * lam^(first + j)
Complex poly_eval(const std::vector<double>& c, int first, const Complex& lam) {
    if (c.empty()) return {};
    Complex acc{};
    for (size_t j = c.size(); j-- > 0;) acc = acc * lam + c[j];
    // acc = sum c[j] lam^j; shift by lam^first
    if (first == 0) return acc;
    return acc * std::pow(lam, static_cast<double>(first));
}

// sum_j c[j] * lam^-(j+1)
Complex inv_poly_eval(const std::vector<double>& c, const Complex& lam) {
    if (c.empty()) return {};
    const Complex il = 1.0 / lam;
    Complex acc{};
    for (size_t j = c.size(); j-- > 0;) acc = acc * il + c[j];
    return acc * il;
}

Jet2 eval_monomial(const MonomialSpec& m, const SolutionSpec& spec, Complex z, Complex zb) {
    const double R = 2.0 * std::max(std::abs(z), std::abs(zb)) + 2.0;
    const int n = spec.nodes;
    const bool has_psi = !m.y.empty();
    if (has_psi && std::abs(z - zb) <= kSingularTol * (std::abs(z) + std::abs(zb) + 1.0))
        throw DomainError("eval: coincident arguments for logarithmic density");
    const Complex s = z - zb;
    const Complex logs = has_psi
        ? (spec.log_two_i ? std::log(s) - kLogTwoI : std::log(s)) : Complex{};
    Jet2 acc;
    const double dt = 2.0 * std::numbers::pi / n;
    for (int j = 0; j < n; ++j) {
        const double th = j * dt;
        const Complex lam = R * Complex(std::cos(th), std::sin(th));
        // Branch smooth on the circle: K = (1/lam) ((1 - z/lam)(1 - zb/lam))^(-1/2).
        const Complex S = (1.0 - z / lam) * (1.0 - zb / lam);
        const Complex K = 1.0 / (lam * std::sqrt(S));
        KernelCtx ctx{lam - z, lam - zb, s};
        const Complex wgt = lam / static_cast<double>(n);  // includes 1/(2 pi i)
        const Complex fphi = poly_eval(m.x, 1, lam);
        if (!m.x.empty()) acc += phi_jet(K, ctx) * (wgt * fphi);
        if (has_psi) {
            // L = log(z - zb) - log S; the formal residue of the log(lam)
            // piece at infinity vanishes and is omitted.
            const Complex L = logs - std::log(S);
            const Complex fpsi = poly_eval(m.y, 0, lam);
            acc += psi_jet(K, L, ctx) * (wgt * fpsi);
        }
    }
    return acc;
}

Jet2 eval_inverse(const InversePowerSpec& p, const SolutionSpec& spec, Complex z, Complex zb) {
    const double zmin = std::min(std::abs(z), std::abs(zb));
    if (zmin <= 1e-10) throw DomainError("eval: inverse-power family singular at the origin");
    const double r = 0.5 * zmin;
    const int n = spec.nodes;
    const bool has_psi = !p.y.empty();
    const Complex s = z - zb;
    if (has_psi && std::abs(s) <= kSingularTol * (std::abs(z) + std::abs(zb) + 1.0))
        throw DomainError("eval: coincident arguments for logarithmic density");
    const Complex root = std::sqrt(z * zb);
    const Complex logs = has_psi
        ? (spec.log_two_i ? std::log(s / (z * zb)) - kLogTwoI : std::log(s / (z * zb)))
        : Complex{};
    Jet2 acc;
    const double dt = 2.0 * std::numbers::pi / n;
    for (int j = 0; j < n; ++j) {
        const double th = j * dt;
        const Complex lam = r * Complex(std::cos(th), std::sin(th));
        const Complex S = (1.0 - lam / z) * (1.0 - lam / zb);
        const Complex K = -1.0 / (root * std::sqrt(S));
        KernelCtx ctx{lam - z, lam - zb, s};
        const Complex wgt = lam / static_cast<double>(n);
        if (!p.x.empty()) acc += phi_jet(K, ctx) * (wgt * inv_poly_eval(p.x, lam));
        if (has_psi) {
            const Complex L = logs - std::log(S);
            acc += psi_jet(K, L, ctx) * (wgt * inv_poly_eval(p.y, lam));
        }
    }
    return acc;
}

Jet2 eval_point_mass(double phi_w, double psi_w, const Complex& lam,
                     const SolutionSpec& spec, Complex z, Complex zb) {
    check_offset(lam, z, zb);
    const Complex s = z - zb;
    const Complex P = (lam - z) * (lam - zb);
    const Complex K = 1.0 / std::sqrt(P);
    KernelCtx ctx{lam - z, lam - zb, s};
    Jet2 acc;
    if (phi_w != 0.0) acc += phi_jet(K, ctx) * Complex(phi_w);
    if (psi_w != 0.0) {
        if (std::abs(s) <= kSingularTol * (std::abs(z) + std::abs(zb) + 1.0))
            throw DomainError("eval: coincident arguments for logarithmic density");
        Complex L = std::log(s / P);
        if (spec.log_two_i) L -= kLogTwoI;
        acc += psi_jet(K, L, ctx) * Complex(psi_w);
    }
    return acc;
}

Jet2 eval_delta(const DeltaSpec& d, const SolutionSpec& spec, Complex z, Complex zb) {
    Jet2 acc;
    for (const auto& t : d.phi)
        acc += eval_point_mass(t.weight, 0.0, Complex(t.node, 0.0), spec, z, zb);
    for (const auto& t : d.psi)
        acc += eval_point_mass(0.0, t.weight, Complex(t.node, 0.0), spec, z, zb);
    return acc;
}

Jet2 eval_sampled(const SampledSpec& sp, const SolutionSpec& spec, Complex z, Complex zb) {
    std::vector<double> gx, gw;
    gauss_legendre(sp.order, gx, gw);
    Jet2 acc;
    const double h = (sp.b - sp.a) / sp.cells;
    for (int c = 0; c < sp.cells; ++c) {
        const double mid = sp.a + (c + 0.5) * h;
        for (int q = 0; q < sp.order; ++q) {
            const double lam = mid + 0.5 * h * gx[q];
            const double w = 0.5 * h * gw[q];
            const double fphi = sp.phi ? sp.phi(lam) : 0.0;
            const double fpsi = sp.psi ? sp.psi(lam) : 0.0;
            if (fphi == 0.0 && fpsi == 0.0) continue;
            acc += eval_point_mass(w * fphi, w * fpsi, Complex(lam, 0.0), spec, z, zb);
        }
    }
    return acc;
}

bool monomial_fast_ok(const MonomialSpec& m) {
    return m.x.size() <= 3 && m.y.size() <= 2;
}

}  // namespace

Jet2 monomial_x_jet(int k, Complex z, Complex zb) {
    Jet2 j;
    switch (k) {
        case 1:
            j.w = 0.5 * (z + zb);
            j.wz = 0.5;
            j.wzb = 0.5;
            return j;
        case 2:
            j.w = (3.0 * z * z + 2.0 * z * zb + 3.0 * zb * zb) / 8.0;
            j.wz = (3.0 * z + zb) / 4.0;
            j.wzb = (z + 3.0 * zb) / 4.0;
            j.wzz = 0.75;
            j.wzbzb = 0.75;
            j.wzzb = 0.25;
            return j;
        case 3:
            j.w = (5.0 * z * z * z + 3.0 * z * z * zb + 3.0 * z * zb * zb + 5.0 * zb * zb * zb) / 16.0;
            j.wz = 3.0 * (5.0 * z * z + 2.0 * z * zb + zb * zb) / 16.0;
            j.wzb = 3.0 * (z * z + 2.0 * z * zb + 5.0 * zb * zb) / 16.0;
            j.wzz = 3.0 * (5.0 * z + zb) / 8.0;
            j.wzbzb = 3.0 * (z + 5.0 * zb) / 8.0;
            j.wzzb = 3.0 * (z + zb) / 8.0;
            return j;
        default:
            throw DomainError("monomial_x_jet: closed form only for k in 1..3");
    }
}

Jet2 monomial_y_jet(int k, Complex z, Complex zb, bool log_two_i) {
    const Complex s = z - zb;
    if (std::abs(s) == 0.0) throw DomainError("monomial_y_jet: coincident arguments");
    const Complex ls = log_two_i ? std::log(s) - kLogTwoI : std::log(s);
    const Complex inv_s = 1.0 / s;
    Jet2 j;
    if (k == 0) {
        j.w = ls;
        j.wz = inv_s;
        j.wzb = -inv_s;
        j.wzz = -inv_s * inv_s;
        j.wzbzb = -inv_s * inv_s;
        j.wzzb = inv_s * inv_s;
        return j;
    }
    if (k == 1) {
        const Complex p = z + zb;
        j.w = p + 0.5 * p * ls;
        j.wz = 1.0 + 0.5 * ls + 0.5 * p * inv_s;
        j.wzb = 1.0 + 0.5 * ls - 0.5 * p * inv_s;
        j.wzz = inv_s - 0.5 * p * inv_s * inv_s;
        j.wzbzb = -inv_s - 0.5 * p * inv_s * inv_s;
        j.wzzb = 0.5 * p * inv_s * inv_s;
        return j;
    }
    throw DomainError("monomial_y_jet: closed form only for k in 0..1");
}

Complex inverse_x_value(int k, Complex z, Complex zb) {
    const Complex root = std::sqrt(z * zb);
    switch (k) {
        case 1: return -1.0 / root;
        case 2: return -0.5 / root * (1.0 / z + 1.0 / zb);
        default: throw DomainError("inverse_x_value: closed form only for k in 1..2");
    }
}

Complex inverse_y_value(int k, Complex z, Complex zb, bool log_two_i) {
    const Complex root = std::sqrt(z * zb);
    Complex lr = std::log((z - zb) / (z * zb));
    if (log_two_i) lr -= kLogTwoI;
    switch (k) {
        case 1: return -lr / root;
        case 2:
            return -0.5 / root * (2.0 / z + 2.0 / zb + (1.0 / z + 1.0 / zb) * lr);
        default: throw DomainError("inverse_y_value: closed form only for k in 1..2");
    }
}

Jet2 eval_jet(const SolutionSpec& spec, Complex z, Complex zb) {
    require_finite(z, "eval_jet z");
    require_finite(zb, "eval_jet zb");
    spec.validate();
    if (const auto* m = std::get_if<MonomialSpec>(&spec.density)) {
        if (!spec.force_quadrature && monomial_fast_ok(*m)) {
            Jet2 acc;
            for (size_t j = 0; j < m->x.size(); ++j)
                if (m->x[j] != 0.0)
                    acc += monomial_x_jet(static_cast<int>(j) + 1, z, zb) * Complex(m->x[j]);
            for (size_t j = 0; j < m->y.size(); ++j)
                if (m->y[j] != 0.0)
                    acc += monomial_y_jet(static_cast<int>(j), z, zb, spec.log_two_i) * Complex(m->y[j]);
            return acc;
        }
        return eval_monomial(*m, spec, z, zb);
    }
    if (const auto* p = std::get_if<InversePowerSpec>(&spec.density))
        return eval_inverse(*p, spec, z, zb);
    if (const auto* d = std::get_if<DeltaSpec>(&spec.density))
        return eval_delta(*d, spec, z, zb);
    return eval_sampled(std::get<SampledSpec>(spec.density), spec, z, zb);
}

namespace {

double semifactorial_ratio(int n) {
    // (2n-1)!! / 2^n
    double v = 1.0;
    for (int j = 1; j <= n; ++j) v *= (2.0 * j - 1.0) / 2.0;
    return v;
}

double factorial(int n) {
    double v = 1.0;
    for (int j = 2; j <= n; ++j) v *= j;
    return v;
}

// n-th pure derivatives of the phi kernel K and of the psi kernel K*L at a
// single lam, using analytic recurrences and Leibniz.
void point_mass_dn(double phi_w, double psi_w, const Complex& lam,
                   Complex z, Complex zb, int n, const Complex& K_in, const Complex& L_in,
                   Complex& dz, Complex& dzb) {
    const Complex az = lam - z, azb = lam - zb, s = z - zb;
    std::vector<Complex> Kz(n + 1), Kzb(n + 1);
    Kz[0] = Kzb[0] = K_in;
    for (int j = 1; j <= n; ++j) {
        const double cj = semifactorial_ratio(j);
        Kz[j] = cj * K_in / std::pow(az, j);
        Kzb[j] = cj * K_in / std::pow(azb, j);
    }
    if (phi_w != 0.0) {
        dz += phi_w * Kz[n];
        dzb += phi_w * Kzb[n];
    }
    if (psi_w != 0.0) {
        std::vector<Complex> Lz(n + 1), Lzb(n + 1);
        Lz[0] = Lzb[0] = L_in;
        for (int m = 1; m <= n; ++m) {
            const double fm = factorial(m - 1);
            const double sign = (m % 2 == 1) ? 1.0 : -1.0;
            Lz[m] = fm * (sign / std::pow(s, m) + 1.0 / std::pow(az, m));
            Lzb[m] = fm * (1.0 / std::pow(azb, m) - 1.0 / std::pow(s, m));
        }
        double binom = 1.0;
        Complex az_acc{}, azb_acc{};
        for (int j = 0; j <= n; ++j) {
            if (j > 0) binom = binom * (n - j + 1) / j;
            az_acc += binom * Kz[j] * Lz[n - j];
            azb_acc += binom * Kzb[j] * Lzb[n - j];
        }
        dz += psi_w * az_acc;
        dzb += psi_w * azb_acc;
    }
}

}  // namespace

std::pair<Complex, Complex> eval_dn(const SolutionSpec& spec, Complex z, Complex zb, int n) {
    if (n < 1) throw DomainError("eval_dn: need n >= 1");
    spec.validate();
    Complex dz{}, dzb{};
    const Complex s = z - zb;
    const bool two_i = spec.log_two_i;
    if (const auto* m = std::get_if<MonomialSpec>(&spec.density)) {
        const double R = 2.0 * std::max(std::abs(z), std::abs(zb)) + 2.0;
        const int nn = spec.nodes;
        const Complex logs = two_i ? std::log(s) - kLogTwoI : std::log(s);
        const double dt = 2.0 * std::numbers::pi / nn;
        for (int j = 0; j < nn; ++j) {
            const double th = j * dt;
            const Complex lam = R * Complex(std::cos(th), std::sin(th));
            const Complex S = (1.0 - z / lam) * (1.0 - zb / lam);
            const Complex K = 1.0 / (lam * std::sqrt(S));
            const Complex L = logs - std::log(S);
            const Complex wgt = lam / static_cast<double>(nn);
            const Complex fphi = poly_eval(m->x, 1, lam) * wgt;
            const Complex fpsi = poly_eval(m->y, 0, lam) * wgt;
            Complex pz{}, pzb{};
            point_mass_dn(1.0, 0.0, lam, z, zb, n, K, L, pz, pzb);
            dz += fphi * pz;
            dzb += fphi * pzb;
            if (!m->y.empty()) {
                Complex qz{}, qzb{};
                point_mass_dn(0.0, 1.0, lam, z, zb, n, K, L, qz, qzb);
                dz += fpsi * qz;
                dzb += fpsi * qzb;
            }
        }
        return {dz, dzb};
    }
    if (const auto* p = std::get_if<InversePowerSpec>(&spec.density)) {
        const double zmin = std::min(std::abs(z), std::abs(zb));
        if (zmin <= 1e-10) throw DomainError("eval_dn: inverse family singular at origin");
        const double r = 0.5 * zmin;
        const int nn = spec.nodes;
        const Complex root = std::sqrt(z * zb);
        const Complex logs = two_i ? std::log(s / (z * zb)) - kLogTwoI : std::log(s / (z * zb));
        const double dt = 2.0 * std::numbers::pi / nn;
        for (int j = 0; j < nn; ++j) {
            const double th = j * dt;
            const Complex lam = r * Complex(std::cos(th), std::sin(th));
            const Complex S = (1.0 - lam / z) * (1.0 - lam / zb);
            const Complex K = -1.0 / (root * std::sqrt(S));
            const Complex L = logs - std::log(S);
            const Complex wgt = lam / static_cast<double>(nn);
            Complex pz{}, pzb{};
            point_mass_dn(1.0, 0.0, lam, z, zb, n, K, L, pz, pzb);
            dz += wgt * inv_poly_eval(p->x, lam) * pz;
            dzb += wgt * inv_poly_eval(p->x, lam) * pzb;
            if (!p->y.empty()) {
                Complex qz{}, qzb{};
                point_mass_dn(0.0, 1.0, lam, z, zb, n, K, L, qz, qzb);
                dz += wgt * inv_poly_eval(p->y, lam) * qz;
                dzb += wgt * inv_poly_eval(p->y, lam) * qzb;
            }
        }
        return {dz, dzb};
    }
    if (const auto* d = std::get_if<DeltaSpec>(&spec.density)) {
        auto add = [&](double phi_w, double psi_w, double node) {
            const Complex lam(node, 0.0);
            check_offset(lam, z, zb);
            const Complex P = (lam - z) * (lam - zb);
            const Complex K = 1.0 / std::sqrt(P);
            Complex L{};
            if (psi_w != 0.0) {
                L = std::log(s / P);
                if (two_i) L -= kLogTwoI;
            }
            point_mass_dn(phi_w, psi_w, lam, z, zb, n, K, L, dz, dzb);
        };
        for (const auto& t : d->phi) add(t.weight, 0.0, t.node);
        for (const auto& t : d->psi) add(0.0, t.weight, t.node);
        return {dz, dzb};
    }
    const auto& sp = std::get<SampledSpec>(spec.density);
    std::vector<double> gx, gw;
    gauss_legendre(sp.order, gx, gw);
    const double h = (sp.b - sp.a) / sp.cells;
    for (int c = 0; c < sp.cells; ++c) {
        const double mid = sp.a + (c + 0.5) * h;
        for (int q = 0; q < sp.order; ++q) {
            const double lamr = mid + 0.5 * h * gx[q];
            const double w = 0.5 * h * gw[q];
            const double fphi = sp.phi ? sp.phi(lamr) : 0.0;
            const double fpsi = sp.psi ? sp.psi(lamr) : 0.0;
            if (fphi == 0.0 && fpsi == 0.0) continue;
            const Complex lam(lamr, 0.0);
            check_offset(lam, z, zb);
            const Complex P = (lam - z) * (lam - zb);
            const Complex K = 1.0 / std::sqrt(P);
            Complex L{};
            if (fpsi != 0.0) {
                L = std::log(s / P);
                if (two_i) L -= kLogTwoI;
            }
            point_mass_dn(w * fphi, w * fpsi, lam, z, zb, n, K, L, dz, dzb);
        }
    }
    return {dz, dzb};
}

Complex epd_residual(const Jet2& jet, Complex z, Complex zb, double k) {
    return (z - zb) * jet.wzzb - k * (jet.wz - jet.wzb);
}

Complex epd_residual(const SolutionSpec& spec, Complex z, Complex zb, double k) {
    return epd_residual(eval_jet(spec, z, zb), z, zb, k);
}

Jet2 appell_jet(const SolutionSpec& spec, Complex z, Complex zb,
                double a, double b, double c, double d) {
    if (std::abs(a * d - b * c - 1.0) > 1e-12)
        throw DomainError("appell: parameters must satisfy a d - b c = 1");
    const Complex q = c * z + d, qb = c * zb + d;
    const double sc = std::abs(z) + std::abs(zb) + 1.0;
    if (std::abs(q) <= kSingularTol * sc || std::abs(qb) <= kSingularTol * sc)
        throw DomainError("appell: argument on the Moebius pole");
    const Complex mz = (a * z + b) / q, mzb = (a * zb + b) / qb;
    const Complex dmz = 1.0 / (q * q), dmzb = 1.0 / (qb * qb);
    const Complex d2mz = -2.0 * c / (q * q * q), d2mzb = -2.0 * c / (qb * qb * qb);
    const Jet2 in = eval_jet(spec, mz, mzb);
    const Complex G = 1.0 / std::sqrt(q * qb);
    const Complex Gz = -0.5 * c * G / q;
    const Complex Gzb = -0.5 * c * G / qb;
    const Complex Gzz = 0.75 * c * c * G / (q * q);
    const Complex Gzbzb = 0.75 * c * c * G / (qb * qb);
    const Complex Gzzb = 0.25 * c * c * G / (q * qb);
    const Complex V = in.w;
    const Complex Vz = in.wz * dmz, Vzb = in.wzb * dmzb;
    const Complex Vzz = in.wzz * dmz * dmz + in.wz * d2mz;
    const Complex Vzbzb = in.wzbzb * dmzb * dmzb + in.wzb * d2mzb;
    const Complex Vzzb = in.wzzb * dmz * dmzb;
    Jet2 out;
    out.w = G * V;
    out.wz = Gz * V + G * Vz;
    out.wzb = Gzb * V + G * Vzb;
    out.wzz = Gzz * V + 2.0 * Gz * Vz + G * Vzz;
    out.wzbzb = Gzbzb * V + 2.0 * Gzb * Vzb + G * Vzbzb;
    out.wzzb = Gzzb * V + Gz * Vzb + Gzb * Vz + G * Vzzb;
    return out;
}

Complex dual_value(const SolutionSpec& spec, const std::vector<Complex>& waypoints, int gl_order) {
    std::vector<double> gx, gw;
    gauss_legendre(gl_order, gx, gw);
    Complex acc{};
    Complex from(0.0, 1.0);  // base point z0 = i, W*(z0) = 0
    for (const Complex& to : waypoints) {
        const Complex dz = to - from;
        for (int q = 0; q < gl_order; ++q) {
            const double t = 0.5 * (1.0 + gx[q]);
            const Complex zq = from + t * dz;
            const Complex zbq = std::conj(zq);
            const Jet2 j = eval_jet(spec, zq, zbq);
            const Complex form = (zq - zbq) * (j.wz * dz - j.wzb * std::conj(dz));
            acc += 0.5 * gw[q] * form;
        }
        from = to;
    }
    return acc;
}

Jet2 dual_jet_from(const Jet2& jet, Complex z, Complex zb) {
    const Complex s = z - zb;
    Jet2 d;
    d.w = Complex{};  // value comes from path integration, not from the jet
    d.wz = s * jet.wz;
    d.wzb = -s * jet.wzb;
    d.wzz = jet.wz + s * jet.wzz;
    d.wzbzb = jet.wzb - s * jet.wzbzb;
    d.wzzb = -jet.wz + s * jet.wzzb;  // from the z-branch of the 1-form
    return d;
}

Complex dual_residual(const SolutionSpec& spec, Complex z, Complex zb) {
    const Jet2 j = eval_jet(spec, z, zb);
    const Jet2 d = dual_jet_from(j, z, zb);
    return (z - zb) * d.wzzb - (-0.5) * (d.wz - d.wzb);
}

Complex radon_value_phi(const std::function<double(double)>& phi_of_alpha,
                        Complex z, Complex zb, int gl_order) {
    // The alpha-parameterized measure is independent of the endpoints; they
    // are kept in the signature to document the segment being collapsed.
    (void)z;
    (void)zb;
    std::vector<double> gx, gw;
    gauss_legendre(gl_order, gx, gw);
    const double half = std::numbers::pi / 4.0;
    double acc = 0.0;
    for (int q = 0; q < gl_order; ++q) {
        const double al = half * (1.0 + gx[q]);
        acc += gw[q] * phi_of_alpha(al);
    }
    acc *= half;
    // On the segment lam = cos^2(a) z + sin^2(a) zb the kernel measure is
    // K dlam = -2i da exactly, so the value equals 2i * integral over the
    // segment oriented from zb to z.
    return 2.0 * Complex(0.0, 1.0) * acc;
}

namespace {

// Jet of P^(-m) for arbitrary real m.
Jet2 power_jet(const Complex& lam, Complex z, Complex zb, double m) {
    const Complex az = lam - z, azb = lam - zb;
    const Complex v = std::exp(-m * std::log(az * azb));
    Jet2 j;
    j.w = v;
    j.wz = m * v / az;
    j.wzb = m * v / azb;
    j.wzz = m * (m + 1.0) * v / (az * az);
    j.wzbzb = m * (m + 1.0) * v / (azb * azb);
    j.wzzb = m * m * v / (az * azb);
    return j;
}

// Jet of s^(-2 eps) where s = z - zb.
Jet2 s_power_jet(Complex z, Complex zb, double eps) {
    const Complex s = z - zb;
    const Complex u = std::exp(-2.0 * eps * std::log(s));
    const Complex inv_s = 1.0 / s;
    Jet2 j;
    j.w = u;
    j.wz = -2.0 * eps * u * inv_s;
    j.wzb = 2.0 * eps * u * inv_s;
    j.wzz = 2.0 * eps * (2.0 * eps + 1.0) * u * inv_s * inv_s;
    j.wzbzb = 2.0 * eps * (2.0 * eps + 1.0) * u * inv_s * inv_s;
    j.wzzb = -2.0 * eps * (2.0 * eps + 1.0) * u * inv_s * inv_s;
    return j;
}

Jet2 jet_product(const Jet2& a, const Jet2& b) {
    Jet2 j;
    j.w = a.w * b.w;
    j.wz = a.wz * b.w + a.w * b.wz;
    j.wzb = a.wzb * b.w + a.w * b.wzb;
    j.wzz = a.wzz * b.w + 2.0 * a.wz * b.wz + a.w * b.wzz;
    j.wzbzb = a.wzbzb * b.w + 2.0 * a.wzb * b.wzb + a.w * b.wzbzb;
    j.wzzb = a.wzzb * b.w + a.wz * b.wzb + a.wzb * b.wz + a.w * b.wzzb;
    return j;
}

}  // namespace

Jet2 two_term_family_jet(const DeltaSpec& d, double eps, Complex z, Complex zb) {
    if (eps == 0.0) throw DomainError("two_term_family: eps must be nonzero");
    const double k = 0.5 + eps;
    Jet2 acc;
    const Jet2 su = s_power_jet(z, zb, eps);
    // psi weights drive the 1/(2 eps) difference; phi weights are split evenly.
    auto add = [&](double f, double g, double node) {
        const Complex lam(node, 0.0);
        check_offset(lam, z, zb);
        const Jet2 first = power_jet(lam, z, zb, k);
        const Jet2 second = jet_product(su, power_jet(lam, z, zb, 1.0 - k));
        acc += first * Complex(0.5 * f + 0.5 * g / eps);
        acc += second * Complex(0.5 * f - 0.5 * g / eps);
    };
    for (const auto& t : d.phi) add(t.weight, 0.0, t.node);
    for (const auto& t : d.psi) add(0.0, t.weight, t.node);
    return acc;
}

Complex two_term_family_value(const DeltaSpec& d, double eps, Complex z, Complex zb) {
    return two_term_family_jet(d, eps, z, zb).w;
}

}  // namespace epd
