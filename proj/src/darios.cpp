#include "epd/darios.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "epd/complex_field.hpp"

namespace epd {

void FilamentState::validate() const {
    if (K.size() != tau.size()) throw DomainError("FilamentState: K and tau sizes differ");
    if (!converged.empty() && converged.size() != K.size())
        throw DomainError("FilamentState: flag size mismatch");
    for (int j = 0; j < n(); ++j)
        if (ok(j) && !(K[j] > 0.0))
            throw DomainError("FilamentState: curvature must be positive");
}

Complex beta_of(double K, double tau) {
    if (!(K > 0.0)) throw DomainError("beta_of: curvature must be positive");
    return Complex(-tau, K);
}

std::pair<double, double> kt_of(Complex beta) {
    if (!(beta.imag() > 0.0)) throw DomainError("kt_of: beta on or below the real axis");
    return {beta.imag(), -beta.real()};
}

std::vector<Complex> beta_map(const FilamentState& s) {
    s.validate();
    std::vector<Complex> out(s.n());
    for (int j = 0; j < s.n(); ++j) out[j] = Complex(-s.tau[j], s.K[j]);
    return out;
}

std::string FilamentHistory::to_csv() const {
    std::ostringstream out;
    out << "t,x,K,tau,converged\n";
    for (int m = 0; m < nt(); ++m) {
        const FilamentState& s = frames[m];
        for (int j = 0; j < s.n(); ++j)
            out << format_double(t0 + m * dt) << ',' << format_double(s.x0 + j * s.dx)
                << ',' << format_double(s.K[j]) << ',' << format_double(s.tau[j]) << ','
                << (s.ok(j) ? 1 : 0) << '\n';
    }
    return out.str();
}

ResidualReport flow_residual(const FilamentHistory& h, DariosFlow flow) {
    if (h.nt() < 3) throw DomainError("flow_residual: need at least 3 time levels");
    const int nx = h.frames.front().n();
    if (nx < 3) throw DomainError("flow_residual: need at least 3 space nodes");
    for (const auto& f : h.frames)
        if (f.n() != nx) throw DomainError("flow_residual: ragged history");
    const double dt = h.dt, dx = h.frames.front().dx;
    if (!(dt != 0.0) || !(dx != 0.0)) throw DomainError("flow_residual: zero step");

    double mx = 0.0, sum = 0.0;
    int count = 0;
    for (int m = 1; m + 1 < h.nt(); ++m) {
        const FilamentState& prev = h.frames[m - 1];
        const FilamentState& cur = h.frames[m];
        const FilamentState& next = h.frames[m + 1];
        for (int j = 1; j + 1 < nx; ++j) {
            if (!(cur.ok(j) && cur.ok(j - 1) && cur.ok(j + 1) && prev.ok(j) && next.ok(j)))
                continue;
            const double K = cur.K[j], tau = cur.tau[j];
            const double Kt = (next.K[j] - prev.K[j]) / (2.0 * dt);
            const double Tt = (next.tau[j] - prev.tau[j]) / (2.0 * dt);
            const double Kx = (cur.K[j + 1] - cur.K[j - 1]) / (2.0 * dx);
            const double Tx = (cur.tau[j + 1] - cur.tau[j - 1]) / (2.0 * dx);
            double rK = 0.0, rT = 0.0;
            switch (flow) {
                case DariosFlow::DaRios:
                    rK = Kt + 2.0 * tau * Kx + K * Tx;
                    rT = Tt + 2.0 * tau * Tx - K * Kx;
                    break;
                case DariosFlow::Higher2: {
                    const double c = 3.0 * tau * tau - 1.5 * K * K;
                    rK = Kt - c * Kx - 3.0 * tau * K * Tx;
                    rT = Tt + 3.0 * tau * K * Kx - c * Tx;
                    break;
                }
                case DariosFlow::DTodaFlow:
                    rK = Kt - Tx / K;
                    rT = Tt + Kx / K;
                    break;
                case DariosFlow::Log2Flow: {
                    const double c = 2.0 + std::log(K);
                    rK = Kt - c * Kx + (tau / K) * Tx;
                    rT = Tt - c * Tx - (tau / K) * Kx;
                    break;
                }
            }
            const double r = std::hypot(rK, rT);
            mx = std::max(mx, r);
            sum += r;
            ++count;
        }
    }
    ResidualReport rep;
    rep.identity = "filament-flow";
    rep.max = mx;
    rep.mean = count ? sum / count : 0.0;
    rep.n1 = h.nt();
    rep.n2 = nx;
    rep.step = dx;
    return rep;
}

namespace {

Jet2 flow_term_jet(DariosFlow flow, Complex z, Complex zb) {
    switch (flow) {
        case DariosFlow::DaRios:
            return monomial_x_jet(2, z, zb);
        case DariosFlow::Higher2:
            return monomial_x_jet(3, z, zb);
        case DariosFlow::DTodaFlow:
            return monomial_y_jet(0, z, zb, /*log_two_i=*/true);
        case DariosFlow::Log2Flow:
            return monomial_y_jet(1, z, zb, /*log_two_i=*/true);
    }
    throw DomainError("flow_term_jet: unknown flow");
}

SolutionSpec background_spec(const SampledSpec& background) {
    SolutionSpec spec;
    spec.density = background;
    spec.log_two_i = true;
    spec.validate();
    return spec;
}

}  // namespace

Jet2 darios_jet(const SampledSpec& background, DariosFlow flow, double x, double t,
                Complex z, Complex zb) {
    const SolutionSpec spec = background_spec(background);
    Jet2 j = eval_jet(spec, z, zb);
    j += monomial_x_jet(1, z, zb) * Complex(x);
    j += flow_term_jet(flow, z, zb) * Complex(t);
    return j;
}

FilamentHistory solve_hodograph_darios(const SampledSpec& background, DariosFlow flow,
                                       double x0, double dx, int nx,
                                       double t0, double dt, int nt,
                                       Complex guess, const NewtonOptions& opt) {
    if (nx < 1 || nt < 1) throw DomainError("solve_hodograph_darios: empty grid");
    const SolutionSpec spec = background_spec(background);
    FilamentHistory h;
    h.t0 = t0;
    h.dt = dt;
    h.frames.reserve(nt);
    Complex frame_seed = guess;
    for (int m = 0; m < nt; ++m) {
        const double t = t0 + m * dt;
        FilamentState s;
        s.x0 = x0;
        s.dx = dx;
        s.K.assign(nx, 0.0);
        s.tau.assign(nx, 0.0);
        s.converged.assign(nx, 0);
        Complex seed = frame_seed;
        bool frame_seed_set = false;
        for (int j = 0; j < nx; ++j) {
            const double x = x0 + j * dx;
            auto jet = [&](Complex z, Complex zb) {
                Jet2 jj = eval_jet(spec, z, zb);
                jj += monomial_x_jet(1, z, zb) * Complex(x);
                jj += flow_term_jet(flow, z, zb) * Complex(t);
                return jj;
            };
            try {
                const CriticalPoint cp = find_critical(JetFn(jet), seed, opt);
                s.K[j] = cp.beta.imag();
                s.tau[j] = -cp.beta.real();
                s.converged[j] = 1;
                seed = cp.beta;
                if (!frame_seed_set) {
                    frame_seed = cp.beta;
                    frame_seed_set = true;
                }
            } catch (const ConvergenceError&) {
                // node stays flagged; keep the previous seed
            } catch (const DomainError&) {
                // iterate left the admissible region (curvature collapse)
            }
        }
        h.frames.push_back(std::move(s));
    }
    return h;
}

std::pair<double, double> initial_data_map(const SampledSpec& background,
                                           double tau0, double K0) {
    if (!(K0 > 0.0)) throw DomainError("initial_data_map: K0 must be positive");
    std::vector<double> gx, gw;
    gauss_legendre(background.order, gx, gw);
    const double h = (background.b - background.a) / background.cells;
    double i1 = 0.0, i2 = 0.0;
    for (int c = 0; c < background.cells; ++c) {
        const double mid = background.a + (c + 0.5) * h;
        for (int q = 0; q < background.order; ++q) {
            const double lam = mid + 0.5 * h * gx[q];
            const double w = 0.5 * h * gw[q];
            const double phi = background.phi ? background.phi(lam) : 0.0;
            const double psi = background.psi ? background.psi(lam) : 0.0;
            if (phi == 0.0 && psi == 0.0) continue;
            const double A = lam + tau0;
            const double D = A * A + K0 * K0;
            const double D32 = D * std::sqrt(D);
            const double logKD = std::log(K0 / D);
            i1 += w * (A / D32) * (phi + psi * (2.0 + logKD));
            i2 += w * (K0 / D32) * (phi + psi * ((K0 * K0 - A * A) / (K0 * K0) + logKD));
        }
    }
    // The x-condition from the critical-point equations is x = -i1.
    return {-i1, i2};
}

std::pair<double, double> initial_data_solve(const SampledSpec& background, double x,
                                             double K0_guess, double tau0_guess,
                                             const NewtonOptions& opt) {
    double K0 = K0_guess, tau0 = tau0_guess;
    if (!(K0 > 0.0)) throw DomainError("initial_data_solve: guess needs K0 > 0");
    for (int it = 0; it < opt.max_iter; ++it) {
        const auto [xv, sv] = initial_data_map(background, tau0, K0);
        const double f1 = xv - x, f2 = sv;
        if (std::hypot(f1, f2) <= opt.tol * (1.0 + std::abs(x))) return {K0, tau0};
        const double hK = 1e-6 * (1.0 + std::abs(K0));
        const double hT = 1e-6 * (1.0 + std::abs(tau0));
        const auto [xK, sK] = initial_data_map(background, tau0, K0 + hK);
        const auto [xT, sT] = initial_data_map(background, tau0 + hT, K0);
        const double a11 = (xK - xv) / hK, a12 = (xT - xv) / hT;
        const double a21 = (sK - sv) / hK, a22 = (sT - sv) / hT;
        const double det = a11 * a22 - a12 * a21;
        if (std::abs(det) < 1e-300)
            throw ConvergenceError("initial_data_solve: singular Jacobian");
        double dK = -(f1 * a22 - f2 * a12) / det;
        double dT = -(f2 * a11 - f1 * a21) / det;
        // Positivity projection for the curvature.
        int halvings = 0;
        while (K0 + dK <= 0.0 && halvings < 60) {
            dK *= 0.5;
            dT *= 0.5;
            ++halvings;
        }
        if (halvings >= 60)
            throw ConvergenceError("initial_data_solve: curvature collapsed to zero");
        K0 += dK;
        tau0 += dT;
        // A runaway curvature means the second equation only decays towards
        // zero at infinity and has no admissible root.
        if (K0 > 1e3 * (1.0 + K0_guess))
            throw ConvergenceError("initial_data_solve: curvature diverged (no root)");
    }
    throw ConvergenceError("initial_data_solve: no convergence (no admissible root?)");
}

SampledSpec densities_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw DomainError("densities_from_csv: empty input");
    std::vector<double> lam, phi, psi;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string a, b, c;
        if (!std::getline(row, a, ',') || !std::getline(row, b, ',') ||
            !std::getline(row, c, ','))
            throw DomainError("densities_from_csv: malformed row");
        lam.push_back(std::stod(a));
        phi.push_back(std::stod(b));
        psi.push_back(std::stod(c));
    }
    if (lam.size() < 2) throw DomainError("densities_from_csv: need at least 2 rows");
    if (!std::is_sorted(lam.begin(), lam.end()))
        throw DomainError("densities_from_csv: lambda column must increase");
    SampledSpec sp;
    sp.a = lam.front();
    sp.b = lam.back();
    sp.table_lambda = lam;
    sp.table_phi = phi;
    sp.table_psi = psi;
    auto interp = [lam](std::vector<double> vals) {
        return [lam, vals = std::move(vals)](double t) {
            if (t <= lam.front() || t >= lam.back()) return 0.0;
            const auto it = std::upper_bound(lam.begin(), lam.end(), t);
            const size_t i = static_cast<size_t>(it - lam.begin());
            const double u = (t - lam[i - 1]) / (lam[i] - lam[i - 1]);
            return (1.0 - u) * vals[i - 1] + u * vals[i];
        };
    };
    sp.phi = interp(phi);
    sp.psi = interp(psi);
    return sp;
}

}  // namespace epd
