#include "doctest.h"

#include <cmath>
#include <random>
#include <sstream>

#include "epd/darios.hpp"

using namespace epd;

namespace {

SampledSpec gaussian_background(double amp = 4.0) {
    SampledSpec bg;
    bg.a = -3.0;
    bg.b = 3.0;
    bg.psi = [amp](double l) { return amp * std::exp(-l * l); };
    return bg;
}

}  // namespace

TEST_CASE("beta map: examples and random round trips") {
    CHECK(beta_of(1.0, 0.0) == Complex(0, 1));
    const auto [k, t] = kt_of(Complex(-0.5, 1.0));
    CHECK(k == 1.0);
    CHECK(t == 0.5);
    CHECK_THROWS_AS(kt_of(Complex(0.3, -0.2)), DomainError);

    std::mt19937 rng(5);
    std::uniform_real_distribution<double> d(-2.0, 2.0);
    for (int i = 0; i < 20; ++i) {
        const double K = 0.1 + std::abs(d(rng)), tau = d(rng);
        const auto [K2, tau2] = kt_of(beta_of(K, tau));
        CHECK(K2 == K);
        CHECK(tau2 == tau);
    }

    FilamentState s;
    s.x0 = 0.0;
    s.dx = 0.1;
    s.K = {1.0, 2.0};
    s.tau = {0.5, -0.5};
    const auto betas = beta_map(s);
    REQUIRE(betas.size() == 2);
    CHECK(betas[0] == Complex(-0.5, 1.0));
    CHECK(betas[1] == Complex(0.5, 2.0));
}

TEST_CASE("flow_residual: constants are stationary; short histories are rejected") {
    FilamentHistory h;
    h.t0 = 0.0;
    h.dt = 0.01;
    FilamentState s;
    s.x0 = 0.0;
    s.dx = 0.05;
    s.K.assign(9, 1.3);
    s.tau.assign(9, -0.4);
    h.frames = {s, s, s};
    for (const DariosFlow f :
         {DariosFlow::DaRios, DariosFlow::Higher2, DariosFlow::DTodaFlow,
          DariosFlow::Log2Flow}) {
        CHECK(flow_residual(h, f).max == 0.0);
    }
    h.frames.pop_back();
    CHECK_THROWS_AS(flow_residual(h, DariosFlow::DaRios), DomainError);
}

TEST_CASE("darios_jet: real-valued on the conjugate slice") {
    const SampledSpec bg = gaussian_background();
    const Complex z(0.1, 2.5);
    for (const DariosFlow f :
         {DariosFlow::DaRios, DariosFlow::Higher2, DariosFlow::DTodaFlow,
          DariosFlow::Log2Flow}) {
        const Jet2 j = darios_jet(bg, f, 0.03, 0.01, z, std::conj(z));
        CHECK(std::abs(j.w.imag()) < 1e-10);
        CHECK(std::abs(j.wzb - std::conj(j.wz)) < 1e-10);
    }
}

TEST_CASE("solve_hodograph_darios: empty densities leave every node unconverged") {
    SampledSpec empty;
    empty.a = -1.0;
    empty.b = 1.0;
    // Grid avoids x = 0 and t = 0, where the gradient is identically zero or
    // constant; everywhere else the root would have to sit on the real axis.
    const FilamentHistory h = solve_hodograph_darios(empty, DariosFlow::DaRios, -0.03,
                                                     0.02, 3, -0.015, 0.01, 3, Complex(0, 1));
    for (const FilamentState& s : h.frames)
        for (int j = 0; j < s.n(); ++j) CHECK(!s.ok(j));
}

TEST_CASE("solve_hodograph_darios: filament flow residual shrinks at second order") {
    const SampledSpec bg = gaussian_background();
    auto max_res = [&](double h) {
        const int nx = static_cast<int>(std::lround(0.16 / h)) + 1;
        const int nt = static_cast<int>(std::lround(0.08 / h)) + 1;
        const FilamentHistory hist = solve_hodograph_darios(
            bg, DariosFlow::DTodaFlow, -0.08, h, nx, -0.04, h, nt, Complex(0, 3));
        return flow_residual(hist, DariosFlow::DTodaFlow).mean;
    };
    const double r1 = max_res(0.02), r2 = max_res(0.01);
    CHECK(r1 < 1e-2);
    CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.3));
}

TEST_CASE("flow_residual: corrupted history is loud") {
    const SampledSpec bg = gaussian_background();
    const FilamentHistory hist = solve_hodograph_darios(
        bg, DariosFlow::DaRios, -0.04, 0.01, 9, -0.02, 0.01, 5, Complex(0, 3));
    const double clean = flow_residual(hist, DariosFlow::DaRios).max;
    FilamentHistory bad = hist;
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> noise(-0.1, 0.1);
    for (FilamentState& s : bad.frames)
        for (double& k : s.K) k += std::abs(noise(rng));
    CHECK(flow_residual(bad, DariosFlow::DaRios).max > 5.0 * clean);
}

TEST_CASE("initial_data_map: even density about the torsion point gives x = 0") {
    SampledSpec bg;
    bg.a = -2.0;
    bg.b = 2.0;
    bg.phi = [](double l) { return std::exp(-3.0 * l * l); };
    const auto [x, second] = initial_data_map(bg, 0.0, 1.2);
    CHECK(std::abs(x) < 1e-12);
    (void)second;
}

TEST_CASE("initial_data_map: values stable under quadrature refinement") {
    SampledSpec bg;
    bg.a = -3.0;
    bg.b = 3.0;
    bg.phi = [](double l) { return std::exp(-2.0 * (l - 0.3) * (l - 0.3)); };
    bg.psi = [](double l) { return 1.5 * std::exp(-l * l); };
    const auto coarse = initial_data_map(bg, 0.25, 1.4);
    SampledSpec fine = bg;
    fine.cells *= 4;
    fine.order += 4;
    const auto oracle = initial_data_map(fine, 0.25, 1.4);
    CHECK(std::abs(coarse.first - oracle.first) < 1e-8);
    CHECK(std::abs(coarse.second - oracle.second) < 1e-8);
}

TEST_CASE("initial_data_solve: narrow spike without a log density has no root") {
    SampledSpec bg;
    bg.a = -0.05;
    bg.b = 0.05;
    bg.cells = 64;
    bg.phi = [](double l) { return std::exp(-l * l / 1e-4); };
    CHECK_THROWS_AS(initial_data_solve(bg, 0.0, 1.0, 0.0), ConvergenceError);
}

TEST_CASE("initial_data_solve: agrees with the t = 0 hodograph slice") {
    const SampledSpec bg = gaussian_background();
    const double x = -0.08;
    const FilamentHistory hist = solve_hodograph_darios(bg, DariosFlow::DaRios, x, 0.01,
                                                        1, 0.0, 0.01, 1, Complex(0, 3));
    REQUIRE(hist.frames[0].ok(0));
    const auto [K0, tau0] = initial_data_solve(bg, x, 2.0, 0.0);
    CHECK(std::abs(K0 - hist.frames[0].K[0]) < 1e-8);
    CHECK(std::abs(tau0 - hist.frames[0].tau[0]) < 1e-8);
}

TEST_CASE("densities_from_csv: tabulated densities interpolate linearly") {
    std::ostringstream csv;
    csv << "lambda,phi,psi\n";
    for (int i = 0; i <= 20; ++i) {
        const double l = -1.0 + 0.1 * i;
        csv << l << "," << 2.0 * l + 1.0 << "," << 0.5 * l << "\n";
    }
    const SampledSpec s = densities_from_csv(csv.str());
    CHECK(s.a == doctest::Approx(-1.0));
    CHECK(s.b == doctest::Approx(1.0));
    CHECK(s.phi(0.25) == doctest::Approx(1.5));
    CHECK(s.psi(-0.55) == doctest::Approx(-0.275));
    // Compact support: zero outside the tabulated range.
    CHECK(s.phi(1.5) == 0.0);
    CHECK(s.psi(-2.0) == 0.0);
}

TEST_CASE("FilamentHistory::to_csv layout") {
    FilamentHistory h;
    h.t0 = 0.0;
    h.dt = 0.5;
    FilamentState s;
    s.x0 = -0.1;
    s.dx = 0.1;
    s.K = {1.0, 2.0, 3.0};
    s.tau = {0.0, 0.1, 0.2};
    h.frames = {s, s};
    std::istringstream in(h.to_csv());
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "t,x,K,tau,converged");
    int rows = 0;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 6);
}
