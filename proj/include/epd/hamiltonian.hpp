#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "epd/report.hpp"
#include "epd/types.hpp"

namespace epd {

// Periodic samples of (rho, u) on a uniform 1-D grid of period L.
struct FieldState {
    std::vector<double> rho;
    std::vector<double> u;
    double L = 2.0 * 3.14159265358979323846;

    int n() const { return static_cast<int>(rho.size()); }
    double h() const { return L / n(); }
    void validate() const;  // n >= 8, sizes equal, rho > 0, L > 0

    // CSV columns: x, rho, u.
    std::string to_csv() const;
    static FieldState from_csv(const std::string& text, double L);
};

enum class DiffScheme {
    Spectral,  // periodic cotangent differentiation matrix (exactly antisymmetric)
    Central4,  // 4th-order central differences
};

// Periodic derivative of uniformly sampled data.
std::vector<double> diff(const std::vector<double>& f, double L, DiffScheme scheme);

struct GradPair {
    std::vector<double> d_rho;
    std::vector<double> d_u;
};

// A functional of the state given by a pointwise density of (rho, u).
struct Functional {
    enum class Tag { CasimirU, H1Toda, DNLSEnergy, Custom };
    Tag tag = Tag::CasimirU;
    // Partial derivatives of the custom density; only used when tag == Custom.
    std::function<double(double, double)> drho;
    std::function<double(double, double)> du;

    static Functional casimir_u() { return {Tag::CasimirU, {}, {}}; }
    static Functional h1_toda() { return {Tag::H1Toda, {}, {}}; }
    static Functional dnls_energy() { return {Tag::DNLSEnergy, {}, {}}; }
    static Functional custom(std::function<double(double, double)> drho,
                             std::function<double(double, double)> du) {
        return {Tag::Custom, std::move(drho), std::move(du)};
    }
};

// Pointwise variational gradient (dF/drho, dF/du).
GradPair grad(const Functional& f, const FieldState& s);

struct Operator {
    enum class Kind { J0, J1, J1Eps };
    Kind kind = Kind::J0;
    double eps = 0.0;  // required > 0 for J1Eps
    DiffScheme scheme = DiffScheme::Spectral;
};

using Flow = std::pair<std::vector<double>, std::vector<double>>;  // (rho_dot, u_dot)

// Matrix-of-operators action of the chosen Poisson operator on a gradient.
Flow apply(const Operator& op, const GradPair& g, const FieldState& s);

struct LimitFlowReport {
    std::vector<double> eps;
    std::vector<double> errors;  // sup-norm distance to the reference flow
    std::vector<double> orders;  // empirical orders between consecutive eps
    std::string to_json() const;
};

// Flow J1^eps grad(u/eps) for each eps, compared against the reference
// (u_x, -(ln rho)_x); errors should shrink linearly in eps.
LimitFlowReport limit_flow(const FieldState& s, const std::vector<double>& eps,
                           DiffScheme scheme = DiffScheme::Spectral);

// Max of |<g1, op g2> + <op g1, g2>| over random smooth gradient pairs.
ResidualReport skew_check(const Operator& op, const FieldState& s, int trials,
                          unsigned seed);

// Deterministic smooth random data for tests: a few Fourier modes, rho
// bounded away from zero.
FieldState random_state(int n, double L, unsigned seed);
GradPair random_gradient(int n, unsigned seed);

// One classical 4th-order explicit time step of s_t = op grad(F).
FieldState rk4_step(const FieldState& s, const Functional& f, const Operator& op,
                    double dt);

// Grid mean times L, i.e. the trapezoid value of the periodic integral.
double integral(const std::vector<double>& f, double L);

}  // namespace epd
