#pragma once

#include "epd/critical.hpp"
#include "epd/report.hpp"

namespace epd {

// Curvature/torsion samples of a vortex filament on a uniform x-grid.
struct FilamentState {
    double x0 = 0.0, dx = 0.0;
    std::vector<double> K;    // curvature, > 0 where converged
    std::vector<double> tau;  // torsion
    std::vector<uint8_t> converged;  // empty means "all converged"

    int n() const { return static_cast<int>(K.size()); }
    bool ok(int j) const { return converged.empty() || converged[j] != 0; }
    void validate() const;  // sizes consistent, K > 0 at converged nodes
};

// beta = -tau + i K and its inverse (K, tau) = (Im beta, -Re beta).
Complex beta_of(double K, double tau);
std::pair<double, double> kt_of(Complex beta);  // throws DomainError if Im <= 0
std::vector<Complex> beta_map(const FilamentState& s);

enum class DariosFlow {
    DaRios,     // K_t + 2 tau K_x + K tau_x = 0,  tau_t + 2 tau tau_x - K K_x = 0
    Higher2,    // velocity (3/8)(5 b^2 + 2 b bbar + bbar^2)
    DTodaFlow,  // K_t - tau_x / K = 0,  tau_t + K_x / K = 0
    Log2Flow,   // K_t - (2 + ln K) K_x + (tau/K) tau_x = 0, and its torsion twin
};

struct FilamentHistory {
    double t0 = 0.0, dt = 0.0;
    std::vector<FilamentState> frames;  // one per time level, shared x-grid

    int nt() const { return static_cast<int>(frames.size()); }
    // CSV columns: t, x, K, tau, converged.
    std::string to_csv() const;
};

// Central-difference residual of the selected flow over interior nodes of a
// uniform-step history; needs at least 3 time levels.
ResidualReport flow_residual(const FilamentHistory& h, DariosFlow flow);

// Hodograph solution: Newton-solves W_b = 0 for
//   W = x (z + zb)/2 + t * (flow term) + real phi-, psi-integrals
// over the (x, t) grid and maps the root to (K, tau); unconverged nodes are
// flagged, not fatal.
FilamentHistory solve_hodograph_darios(const SampledSpec& background, DariosFlow flow,
                                       double x0, double dx, int nx,
                                       double t0, double dt, int nt,
                                       Complex guess, const NewtonOptions& opt = {});

// Jet of the full hodograph function at (z, zb) for given (x, t).
Jet2 darios_jet(const SampledSpec& background, DariosFlow flow, double x, double t,
                Complex z, Complex zb);

// The two real t = 0 integrals of the initial-data system for the given
// (tau0, K0).  Returned as (x-value, second-equation value): the pair
// (first = x, second = 0) characterizes the initial data.
std::pair<double, double> initial_data_map(const SampledSpec& background,
                                           double tau0, double K0);

// Forward map: damped Newton for (K0, tau0) with first = x, second = 0,
// keeping K0 positive.  Returns (K0, tau0).
std::pair<double, double> initial_data_solve(const SampledSpec& background, double x,
                                             double K0_guess, double tau0_guess,
                                             const NewtonOptions& opt = {});

// Densities from CSV with columns lambda, phi, psi (linear interpolation,
// compact support on the tabulated range).
SampledSpec densities_from_csv(const std::string& text);

}  // namespace epd
