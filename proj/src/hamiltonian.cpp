#include "epd/hamiltonian.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "json.hpp"

namespace epd {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

void FieldState::validate() const {
    if (rho.size() != u.size()) throw DomainError("FieldState: rho and u sizes differ");
    if (n() < 8) throw DomainError("FieldState: need at least 8 grid points");
    if (!(L > 0.0)) throw DomainError("FieldState: period must be positive");
    for (double r : rho)
        if (!(r > 0.0)) throw DomainError("FieldState: rho must be strictly positive");
}

std::string FieldState::to_csv() const {
    std::ostringstream out;
    out << "x,rho,u\n";
    for (int j = 0; j < n(); ++j)
        out << format_double(j * h()) << ',' << format_double(rho[j]) << ','
            << format_double(u[j]) << '\n';
    return out.str();
}

FieldState FieldState::from_csv(const std::string& text, double L) {
    FieldState s;
    s.L = L;
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw DomainError("FieldState::from_csv: empty input");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string x, r, u;
        if (!std::getline(row, x, ',') || !std::getline(row, r, ',') ||
            !std::getline(row, u, ','))
            throw DomainError("FieldState::from_csv: malformed row");
        s.rho.push_back(std::stod(r));
        s.u.push_back(std::stod(u));
    }
    s.validate();
    return s;
}

std::vector<double> diff(const std::vector<double>& f, double L, DiffScheme scheme) {
    const int n = static_cast<int>(f.size());
    if (n < 8) throw DomainError("diff: need at least 8 samples");
    std::vector<double> out(n, 0.0);
    if (scheme == DiffScheme::Spectral) {
        if (n % 2 != 0) throw DomainError("diff: spectral scheme needs an even grid");
        // Row of the periodic differentiation matrix, d_m = (pi/L)(-1)^m cot(pi m / n).
        std::vector<double> row(n, 0.0);
        for (int m = 1; m < n; ++m)
            row[m] = (kPi / L) * ((m % 2) ? -1.0 : 1.0) / std::tan(kPi * m / n);
        for (int j = 0; j < n; ++j) {
            double acc = 0.0;
            for (int m = 1; m < n; ++m) acc += row[m] * f[(j - m + n) % n];
            out[j] = acc;
        }
    } else {
        const double h = L / n;
        for (int j = 0; j < n; ++j) {
            const double fm2 = f[(j - 2 + n) % n], fm1 = f[(j - 1 + n) % n];
            const double fp1 = f[(j + 1) % n], fp2 = f[(j + 2) % n];
            out[j] = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h);
        }
    }
    return out;
}

GradPair grad(const Functional& f, const FieldState& s) {
    s.validate();
    const int n = s.n();
    GradPair g;
    g.d_rho.resize(n);
    g.d_u.resize(n);
    switch (f.tag) {
        case Functional::Tag::CasimirU:
            for (int j = 0; j < n; ++j) {
                g.d_rho[j] = 0.0;
                g.d_u[j] = 1.0;
            }
            break;
        case Functional::Tag::H1Toda:
            for (int j = 0; j < n; ++j) {
                g.d_rho[j] = -std::log(s.rho[j]);
                g.d_u[j] = s.u[j];
            }
            break;
        case Functional::Tag::DNLSEnergy:
            for (int j = 0; j < n; ++j) {
                g.d_rho[j] = 0.5 * s.u[j] * s.u[j] - s.rho[j];
                g.d_u[j] = s.rho[j] * s.u[j];
            }
            break;
        case Functional::Tag::Custom:
            if (!f.drho || !f.du) throw DomainError("grad: custom density not set");
            for (int j = 0; j < n; ++j) {
                g.d_rho[j] = f.drho(s.rho[j], s.u[j]);
                g.d_u[j] = f.du(s.rho[j], s.u[j]);
                require_finite(g.d_rho[j], "custom gradient");
                require_finite(g.d_u[j], "custom gradient");
            }
            break;
    }
    return g;
}

namespace {

std::vector<double> hadamard(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out(a.size());
    for (size_t j = 0; j < a.size(); ++j) out[j] = a[j] * b[j];
    return out;
}

void axpy(std::vector<double>& y, double a, const std::vector<double>& x) {
    for (size_t j = 0; j < y.size(); ++j) y[j] += a * x[j];
}

}  // namespace

Flow apply(const Operator& op, const GradPair& g, const FieldState& s) {
    s.validate();
    const int n = s.n();
    if (static_cast<int>(g.d_rho.size()) != n || static_cast<int>(g.d_u.size()) != n)
        throw DomainError("apply: gradient size mismatch");
    auto d = [&](const std::vector<double>& f) { return diff(f, s.L, op.scheme); };
    Flow flow;
    switch (op.kind) {
        case Operator::Kind::J0:
            flow.first = d(g.d_u);
            flow.second = d(g.d_rho);
            break;
        case Operator::Kind::J1: {
            // Row 1: (rho d + d rho) g_rho + u d g_u.
            std::vector<double> r1 = hadamard(s.rho, d(g.d_rho));
            axpy(r1, 1.0, d(hadamard(s.rho, g.d_rho)));
            axpy(r1, 1.0, hadamard(s.u, d(g.d_u)));
            // Row 2: d(u g_rho) - 2 d g_u.
            std::vector<double> r2 = d(hadamard(s.u, g.d_rho));
            axpy(r2, -2.0, d(g.d_u));
            flow.first = std::move(r1);
            flow.second = std::move(r2);
            break;
        }
        case Operator::Kind::J1Eps: {
            if (!(op.eps > 0.0)) throw DomainError("apply: J1Eps needs eps > 0");
            std::vector<double> rho_eps(n);
            for (int j = 0; j < n; ++j) rho_eps[j] = std::pow(s.rho[j], op.eps);
            // Row 1: (rho d + d rho) g_rho + (u d + eps d u) g_u.
            std::vector<double> r1 = hadamard(s.rho, d(g.d_rho));
            axpy(r1, 1.0, d(hadamard(s.rho, g.d_rho)));
            axpy(r1, 1.0, hadamard(s.u, d(g.d_u)));
            axpy(r1, op.eps, d(hadamard(s.u, g.d_u)));
            // Row 2: (eps u d + d u) g_rho - (rho^eps d + d rho^eps) g_u.
            std::vector<double> r2 = d(hadamard(s.u, g.d_rho));
            axpy(r2, op.eps, hadamard(s.u, d(g.d_rho)));
            axpy(r2, -1.0, hadamard(rho_eps, d(g.d_u)));
            axpy(r2, -1.0, d(hadamard(rho_eps, g.d_u)));
            flow.first = std::move(r1);
            flow.second = std::move(r2);
            break;
        }
    }
    return flow;
}

std::string LimitFlowReport::to_json() const {
    nlohmann::json j;
    j["schema"] = 1;
    j["eps"] = eps;
    j["errors"] = errors;
    j["orders"] = orders;
    return j.dump(2);
}

LimitFlowReport limit_flow(const FieldState& s, const std::vector<double>& eps,
                           DiffScheme scheme) {
    s.validate();
    if (eps.empty()) throw DomainError("limit_flow: empty eps sequence");
    for (size_t i = 0; i < eps.size(); ++i) {
        if (!(eps[i] > 0.0)) throw DomainError("limit_flow: eps must be positive");
        if (i > 0 && !(eps[i] < eps[i - 1]))
            throw DomainError("limit_flow: eps must decrease");
    }
    const int n = s.n();
    // Reference flow (u_x, -(ln rho)_x).
    std::vector<double> log_rho(n);
    for (int j = 0; j < n; ++j) log_rho[j] = std::log(s.rho[j]);
    const std::vector<double> ref_r = diff(s.u, s.L, scheme);
    std::vector<double> ref_u = diff(log_rho, s.L, scheme);
    for (double& v : ref_u) v = -v;

    LimitFlowReport rep;
    rep.eps = eps;
    GradPair g;
    g.d_rho.assign(n, 0.0);
    for (double e : eps) {
        g.d_u.assign(n, 1.0 / e);
        const Flow f = apply({Operator::Kind::J1Eps, e, scheme}, g, s);
        double err = 0.0;
        for (int j = 0; j < n; ++j) {
            err = std::max(err, std::abs(f.first[j] - ref_r[j]));
            err = std::max(err, std::abs(f.second[j] - ref_u[j]));
        }
        rep.errors.push_back(err);
    }
    for (size_t i = 1; i < eps.size(); ++i)
        rep.orders.push_back(std::log(rep.errors[i - 1] / rep.errors[i]) /
                             std::log(eps[i - 1] / eps[i]));
    return rep;
}

namespace {

std::vector<double> random_smooth(int n, double amp, std::mt19937& rng) {
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::vector<double> out(n, 0.0);
    for (int k = 1; k <= 3; ++k) {
        const double a = amp * unif(rng), b = amp * unif(rng);
        for (int j = 0; j < n; ++j) {
            const double t = 2.0 * kPi * k * j / n;
            out[j] += a * std::cos(t) + b * std::sin(t);
        }
    }
    return out;
}

}  // namespace

FieldState random_state(int n, double L, unsigned seed) {
    std::mt19937 rng(seed);
    FieldState s;
    s.L = L;
    s.rho = random_smooth(n, 0.2, rng);
    for (double& r : s.rho) r += 1.5;
    s.u = random_smooth(n, 0.5, rng);
    s.validate();
    return s;
}

GradPair random_gradient(int n, unsigned seed) {
    std::mt19937 rng(seed);
    GradPair g;
    g.d_rho = random_smooth(n, 1.0, rng);
    g.d_u = random_smooth(n, 1.0, rng);
    return g;
}

ResidualReport skew_check(const Operator& op, const FieldState& s, int trials,
                          unsigned seed) {
    s.validate();
    if (trials < 1) throw DomainError("skew_check: need at least one trial");
    const int n = s.n();
    const double h = s.h();
    auto dot = [&](const GradPair& a, const std::vector<double>& br,
                   const std::vector<double>& bu) {
        double acc = 0.0;
        for (int j = 0; j < n; ++j) acc += a.d_rho[j] * br[j] + a.d_u[j] * bu[j];
        return acc * h;
    };
    ResidualReport rep;
    rep.identity = "skew-adjoint";
    rep.n1 = n;
    rep.n2 = trials;
    rep.step = h;
    double sum = 0.0;
    for (int t = 0; t < trials; ++t) {
        const GradPair g1 = random_gradient(n, seed + 2 * t);
        const GradPair g2 = random_gradient(n, seed + 2 * t + 1);
        const Flow f2 = apply(op, g2, s);
        const Flow f1 = apply(op, g1, s);
        const double asym = std::abs(dot(g1, f2.first, f2.second) +
                                     dot(g2, f1.first, f1.second));
        rep.max = std::max(rep.max, asym);
        sum += asym;
    }
    rep.mean = sum / trials;
    return rep;
}

FieldState rk4_step(const FieldState& s, const Functional& f, const Operator& op,
                    double dt) {
    auto rhs = [&](const FieldState& q) { return apply(op, grad(f, q), q); };
    auto shifted = [&](const FieldState& base, const Flow& k, double a) {
        FieldState q = base;
        for (int j = 0; j < q.n(); ++j) {
            q.rho[j] += a * k.first[j];
            q.u[j] += a * k.second[j];
        }
        return q;
    };
    const Flow k1 = rhs(s);
    const Flow k2 = rhs(shifted(s, k1, dt / 2.0));
    const Flow k3 = rhs(shifted(s, k2, dt / 2.0));
    const Flow k4 = rhs(shifted(s, k3, dt));
    FieldState out = s;
    for (int j = 0; j < out.n(); ++j) {
        out.rho[j] += dt / 6.0 * (k1.first[j] + 2.0 * k2.first[j] + 2.0 * k3.first[j] +
                                  k4.first[j]);
        out.u[j] += dt / 6.0 * (k1.second[j] + 2.0 * k2.second[j] + 2.0 * k3.second[j] +
                                k4.second[j]);
    }
    out.validate();
    return out;
}

double integral(const std::vector<double>& f, double L) {
    double acc = 0.0;
    for (double v : f) acc += v;
    return acc * L / f.size();
}

}  // namespace epd
