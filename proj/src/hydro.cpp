#include "epd/hydro.hpp"

#include <cmath>
#include <sstream>

namespace epd {

std::string HodographField::to_csv() const {
    std::ostringstream out;
    out << "param_a,param_b,re_beta,im_beta,converged\n";
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < nb; ++j) {
            const Complex& b = at(i, j);
            out << format_double(a0 + i * da) << ',' << format_double(b0 + j * db) << ','
                << format_double(b.real()) << ',' << format_double(b.imag()) << ','
                << (ok(i, j) ? 1 : 0) << '\n';
        }
    return out.str();
}

Complex velocity(const SolutionSpec& parent, Complex z, Complex zb,
                 const FlowLabel& k, const FlowLabel& l) {
    const Jet2 jk = eval_jet(unit_basis(parent, k.family, k.index), z, zb);
    const Jet2 jl = eval_jet(unit_basis(parent, l.family, l.index), z, zb);
    if (std::abs(jl.wz) == 0.0) throw DomainError("velocity: reference flow is stationary");
    return jk.wz / jl.wz;
}

HodographField hodograph_solve(const SolutionSpec& templ,
                               const FlowLabel& la, double a0, double da, int na,
                               const FlowLabel& lb, double b0, double db, int nb,
                               Complex guess, const NewtonOptions& opt) {
    if (na < 1 || nb < 1) throw DomainError("hodograph_solve: empty grid");
    HodographField f;
    f.label_a = la;
    f.label_b = lb;
    f.a0 = a0; f.da = da; f.na = na;
    f.b0 = b0; f.db = db; f.nb = nb;
    f.beta.assign(static_cast<size_t>(na) * nb, Complex{});
    f.converged.assign(static_cast<size_t>(na) * nb, 0);
    Complex row_seed = guess;
    for (int i = 0; i < na; ++i) {
        Complex seed = row_seed;
        bool row_seed_set = false;
        for (int j = 0; j < nb; ++j) {
            SolutionSpec s = templ;
            coefficient(s, la.family, la.index) = a0 + i * da;
            coefficient(s, lb.family, lb.index) = b0 + j * db;
            const size_t idx = static_cast<size_t>(i) * nb + j;
            auto attempt = [&](Complex start) {
                const CriticalPoint cp = find_critical(s, start, opt);
                f.beta[idx] = cp.beta;
                f.converged[idx] = 1;
                seed = cp.beta;
                if (!row_seed_set) {
                    row_seed = cp.beta;  // seed for the next row
                    row_seed_set = true;
                }
            };
            try {
                attempt(seed);
            } catch (const Error&) {
                // Retry once from the neighbor in the previous row.
                if (i > 0 && f.ok(i - 1, j)) {
                    try {
                        attempt(f.at(i - 1, j));
                    } catch (const Error&) {
                        // node stays flagged
                    }
                }
            }
        }
    }
    return f;
}

namespace {

struct Stats {
    double max = 0.0, sum = 0.0;
    int count = 0;
    void add(double v) {
        max = std::max(max, v);
        sum += v;
        ++count;
    }
    double mean() const { return count ? sum / count : 0.0; }
};

bool interior_ok(const HodographField& f, int i, int j) {
    return f.ok(i, j) && f.ok(i - 1, j) && f.ok(i + 1, j) && f.ok(i, j - 1) && f.ok(i, j + 1);
}

void require_grid(const HodographField& f) {
    if (f.na < 3 || f.nb < 3)
        throw DomainError("residual: need at least 3 nodes per axis");
}

}  // namespace

ResidualReport pde_residual(const SolutionSpec& templ, const HodographField& f) {
    require_grid(f);
    Stats st;
    for (int i = 1; i + 1 < f.na; ++i)
        for (int j = 1; j + 1 < f.nb; ++j) {
            if (!interior_ok(f, i, j)) continue;
            const Complex ba = (f.at(i + 1, j) - f.at(i - 1, j)) / (2.0 * f.da);
            const Complex bb = (f.at(i, j + 1) - f.at(i, j - 1)) / (2.0 * f.db);
            const Complex b = f.at(i, j);
            const Complex lam = velocity(templ, b, std::conj(b), f.label_a, f.label_b);
            st.add(std::abs(ba - lam * bb));
        }
    ResidualReport r;
    r.identity = "hierarchy";
    r.max = st.max;
    r.mean = st.mean();
    r.n1 = f.na; r.n2 = f.nb;
    r.step = f.da;
    return r;
}

ResidualReport mixed_toda_residual(const HodographField& f) {
    require_grid(f);
    Stats st;
    for (int i = 1; i + 1 < f.na; ++i)
        for (int j = 1; j + 1 < f.nb; ++j) {
            if (!interior_ok(f, i, j)) continue;
            const Complex ba = (f.at(i + 1, j) - f.at(i - 1, j)) / (2.0 * f.da);
            const Complex bb = (f.at(i, j + 1) - f.at(i, j - 1)) / (2.0 * f.db);
            const Complex b = f.at(i, j);
            const Complex s = b - std::conj(b);
            st.add(std::abs(ba - 0.5 * s * bb));
        }
    ResidualReport r;
    r.identity = "mixed-toda";
    r.max = st.max;
    r.mean = st.mean();
    r.n1 = f.na; r.n2 = f.nb;
    r.step = f.da;
    return r;
}

ResidualReport toda_phi_residual(const HodographField& f) {
    require_grid(f);
    Stats st;
    auto phi = [&](int i, int j) {
        const double im = f.at(i, j).imag();
        if (im <= 0.0) throw DomainError("toda_phi_residual: beta on the real axis");
        return 2.0 * std::log(im);
    };
    auto ephi = [&](int i, int j) {
        const double im = f.at(i, j).imag();
        return im * im;
    };
    for (int i = 1; i + 1 < f.na; ++i)
        for (int j = 1; j + 1 < f.nb; ++j) {
            if (!interior_ok(f, i, j)) continue;
            const double paa = (phi(i + 1, j) - 2.0 * phi(i, j) + phi(i - 1, j)) / (f.da * f.da);
            const double ebb =
                (ephi(i, j + 1) - 2.0 * ephi(i, j) + ephi(i, j - 1)) / (f.db * f.db);
            st.add(std::abs(paa + ebb));
        }
    ResidualReport r;
    r.identity = "toda-phi";
    r.max = st.max;
    r.mean = st.mean();
    r.n1 = f.na; r.n2 = f.nb;
    r.step = f.da;
    return r;
}

ResidualReport delta_flow_residual(const HodographField& f) {
    require_grid(f);
    Stats st;
    auto u_of = [&](int i, int j) { return 1.0 - 1.0 / f.at(i, j); };
    for (int i = 1; i + 1 < f.na; ++i)
        for (int j = 1; j + 1 < f.nb; ++j) {
            if (!interior_ok(f, i, j)) continue;
            const Complex ua = (u_of(i + 1, j) - u_of(i - 1, j)) / (2.0 * f.da);
            const Complex ub = (u_of(i, j + 1) - u_of(i, j - 1)) / (2.0 * f.db);
            const Complex u = u_of(i, j);
            // u^(-3/2) ubar^(-1/2) on the conjugate slice: 1 / (u |u|).
            const Complex vel = 1.0 / (u * std::abs(u));
            st.add(std::abs(ub - vel * ua));
        }
    ResidualReport r;
    r.identity = "delta-flow";
    r.max = st.max;
    r.mean = st.mean();
    r.n1 = f.na; r.n2 = f.nb;
    r.step = f.da;
    return r;
}

double dual_equivalence(const SolutionSpec& templ, const HodographField& f,
                        const FlowLabel& k) {
    const SolutionSpec basis = unit_basis(templ, k.family, k.index);
    double worst = 0.0;
    for (int i = 0; i < f.na; ++i)
        for (int j = 0; j < f.nb; ++j) {
            if (!f.ok(i, j)) continue;
            SolutionSpec s = templ;
            coefficient(s, f.label_a.family, f.label_a.index) = f.a0 + i * f.da;
            coefficient(s, f.label_b.family, f.label_b.index) = f.b0 + j * f.db;
            const Complex b = f.at(i, j);
            const Complex bb = std::conj(b);
            const Jet2 jw = eval_jet(s, b, bb);
            const Jet2 jk = eval_jet(basis, b, bb);
            const Complex sfac = b - bb;
            const Complex vel_w = -jk.wz / jw.wzz;
            // Dual route: W*_{k,b} = (b - bb) W_{k,b};
            // W*_{bb} = W_b + (b - bb) W_bb, without assuming W_b = 0.
            const Complex vel_dual = -(sfac * jk.wz) / (jw.wz + sfac * jw.wzz);
            worst = std::max(worst, std::abs(vel_w - vel_dual));
        }
    return worst;
}

}  // namespace epd
