#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "epd/complex_field.hpp"

using namespace epd;

namespace {
constexpr double kPi = std::numbers::pi;
double cerr2(Complex a, Complex b) { return std::abs(a - b); }
}  // namespace

TEST_CASE("kernel_pow: real positive on the real axis with conjugate arguments") {
    // product (lam - z)(lam - zb) = |lam - z|^2 when zb = conj(z), lam real
    CHECK(cerr2(kernel_pow(0.0, Complex(0, 2), Complex(0, -2)), Complex(0.5, 0)) < 1e-15);
    CHECK(cerr2(kernel_pow(1.0, Complex(0, 1), Complex(0, -1)),
                Complex(1.0 / std::sqrt(2.0), 0)) < 1e-15);
}

TEST_CASE("kernel_pow: principal power of the product off the real axis") {
    // (i - 2i)(i + 2i) = (-i)(3i) = 3, principal inverse sqrt = 1/sqrt(3)
    CHECK(cerr2(kernel_pow(Complex(0, 1), Complex(0, 2), Complex(0, -2)),
                Complex(1.0 / std::sqrt(3.0), 0)) < 1e-15);
}

TEST_CASE("kernel_pow: singular-point error on coincident arguments") {
    CHECK_THROWS_AS(kernel_pow(Complex(0, 2), Complex(0, 2), Complex(0, -2)), DomainError);
    CHECK_THROWS_AS(kernel_pow(Complex(0, -2), Complex(0, 2), Complex(0, -2)), DomainError);
}

TEST_CASE("kernel_pow squared inverts the product (branch consistency)") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> d(-2.0, 2.0);
    for (int t = 0; t < 50; ++t) {
        const Complex lam(d(rng), d(rng)), z(d(rng), 0.5 + std::abs(d(rng)));
        const Complex zb = std::conj(z);
        if (std::abs(lam - z) < 0.1 || std::abs(lam - zb) < 0.1) continue;
        const Complex k = kernel_pow(lam, z, zb);
        CHECK(cerr2(k * k, 1.0 / ((lam - z) * (lam - zb))) < 1e-12);
    }
}

TEST_CASE("kernel_log: principal-branch values") {
    CHECK(cerr2(kernel_log(0.0, Complex(0, 1), Complex(0, -1)),
                Complex(std::log(2.0), kPi / 2.0)) < 1e-15);
    CHECK(cerr2(kernel_log(0.0, Complex(0, 2), Complex(0, -2)), Complex(0, kPi / 2.0)) <
          1e-15);
}

TEST_CASE("kernel_log: coincident evaluation points rejected") {
    CHECK_THROWS_AS(kernel_log(0.0, Complex(1, 1), Complex(1, 1)), DomainError);
}

TEST_CASE("kernels: conjugation symmetry under z <-> zb with real lam") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> d(-2.0, 2.0);
    for (int t = 0; t < 20; ++t) {
        const double lam = d(rng);
        const Complex z(d(rng), 0.3 + std::abs(d(rng)));
        const Complex zb = std::conj(z);
        if (std::abs(Complex(lam, 0) - z) < 0.1) continue;
        CHECK(cerr2(std::conj(kernel_pow(lam, z, zb)), kernel_pow(lam, zb, z)) < 1e-13);
        CHECK(cerr2(std::conj(kernel_log(lam, z, zb)), kernel_log(lam, zb, z)) < 1e-13);
    }
}

TEST_CASE("integrate: residue of 1/lam on a large circle") {
    const Complex v = integrate([](Complex lam) { return 1.0 / lam; },
                                Contour::circle_at_infinity(5.0, 64));
    CHECK(cerr2(v, Complex(0, 2.0 * kPi)) < 1e-12);
}

TEST_CASE("integrate: entire integrand has no residue") {
    CHECK(std::abs(integrate([](Complex lam) { return lam * lam; },
                             Contour::circle_at_infinity(3.0))) < 1e-10);
    CHECK(std::abs(integrate([](Complex lam) { return lam * lam; },
                             Contour::circle_at_origin(0.5))) < 1e-10);
}

TEST_CASE("integrate: residue of the kernel over lam on a small circle") {
    // The kernel is analytic inside a circle that stays away from both
    // evaluation points, so kernel/lam picks up exactly the kernel's value at
    // the origin, and the kernel alone integrates to zero.
    const Complex z(0.7, 1.2), zb = std::conj(z);
    const Contour c = Contour::circle_at_origin(0.4);
    const Complex v =
        integrate([&](Complex lam) { return kernel_pow(lam, z, zb) / lam; }, c);
    CHECK(cerr2(v / Complex(0, 2.0 * kPi), kernel_pow(0.0, z, zb)) < 1e-12);
    CHECK(std::abs(integrate([&](Complex lam) { return kernel_pow(lam, z, zb); }, c)) <
          1e-11);
}

TEST_CASE("integrate: linear in the integrand") {
    const Contour c = Contour::circle_at_infinity(4.0, 64);
    auto f = [](Complex lam) { return 1.0 / lam; };
    auto g = [](Complex lam) { return 1.0 / (lam * lam); };
    const Complex lhs =
        integrate([&](Complex lam) { return 2.0 * f(lam) + 3.0 * g(lam); }, c);
    const Complex rhs = 2.0 * integrate(f, c) + 3.0 * integrate(g, c);
    CHECK(cerr2(lhs, rhs) < 1e-12);
}

TEST_CASE("integrate_fixed: stable under node doubling for analytic integrands") {
    const Contour c = Contour::circle_at_infinity(4.0, 64);
    auto f = [](Complex lam) { return std::exp(1.0 / lam) / lam; };
    const Complex a = integrate_fixed(f, c, 64);
    const Complex b = integrate_fixed(f, c, 128);
    CHECK(cerr2(a, b) < 1e-12);
}

TEST_CASE("contour validation") {
    CHECK_THROWS_AS(Contour::circle_at_infinity(-1.0).validate(), DomainError);
    CHECK_THROWS_AS(Contour::circle_at_origin(1.0, 8).validate(), DomainError);
    CHECK_THROWS_AS(Contour::real_interval(2.0, 1.0).validate(), DomainError);
    CHECK_NOTHROW(Contour::segment_between(Complex(0, -1), Complex(0, 1)).validate());
}

TEST_CASE("gauss_legendre: exact for low-degree polynomials") {
    std::vector<double> x, w;
    gauss_legendre(8, x, w);
    double s0 = 0.0, s2 = 0.0, s6 = 0.0;
    for (size_t q = 0; q < x.size(); ++q) {
        s0 += w[q];
        s2 += w[q] * x[q] * x[q];
        s6 += w[q] * std::pow(x[q], 6);
    }
    CHECK(std::abs(s0 - 2.0) < 1e-14);
    CHECK(std::abs(s2 - 2.0 / 3.0) < 1e-14);
    CHECK(std::abs(s6 - 2.0 / 7.0) < 1e-14);
}
