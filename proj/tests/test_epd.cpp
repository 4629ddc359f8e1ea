#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "epd/evaluate.hpp"

using namespace epd;

namespace {

constexpr double kPi = std::numbers::pi;

SolutionSpec monomial(std::vector<double> x, std::vector<double> y, bool log2i = false) {
    SolutionSpec s;
    s.density = MonomialSpec{std::move(x), std::move(y)};
    s.log_two_i = log2i;
    return s;
}

SolutionSpec inverse_power(std::vector<double> x, std::vector<double> y,
                           bool log2i = false) {
    SolutionSpec s;
    s.density = InversePowerSpec{std::move(x), std::move(y)};
    s.log_two_i = log2i;
    return s;
}

double jet_distance(const Jet2& a, const Jet2& b) {
    return std::abs(a.w - b.w) + std::abs(a.wz - b.wz) + std::abs(a.wzb - b.wzb) +
           std::abs(a.wzz - b.wzz) + std::abs(a.wzbzb - b.wzbzb) +
           std::abs(a.wzzb - b.wzzb);
}

}  // namespace

TEST_CASE("eval_jet: first power density gives the arithmetic mean") {
    const Complex z(1, 1);
    const Jet2 j = eval_jet(monomial({1.0}, {}), z, std::conj(z));
    CHECK(std::abs(j.w - Complex(1, 0)) < 1e-13);
    CHECK(std::abs(j.wz - Complex(0.5, 0)) < 1e-13);
    CHECK(std::abs(j.wzz) < 1e-13);
}

TEST_CASE("eval_jet: second power density at z = i") {
    const Complex z(0, 1);
    const Jet2 j = eval_jet(monomial({0.0, 1.0}, {}), z, std::conj(z));
    // (3 z^2 + 2 z zb + 3 zb^2)/8 = (-3 + 2 - 3)/8
    CHECK(std::abs(j.w - Complex(-0.5, 0)) < 1e-13);
}

TEST_CASE("eval_jet: constant log density at z = i") {
    const Complex z(0, 1);
    const Jet2 j = eval_jet(monomial({}, {1.0}), z, std::conj(z));
    CHECK(std::abs(j.w - Complex(std::log(2.0), kPi / 2.0)) < 1e-13);
    // With the 1/(2i) inside the log the same value becomes 0 (real branch).
    const Jet2 jr = eval_jet(monomial({}, {1.0}, true), z, std::conj(z));
    CHECK(std::abs(jr.w) < 1e-13);
}

TEST_CASE("epd_residual: hand-assembled jets") {
    Jet2 constant;
    constant.w = 1.0;
    CHECK(std::abs(epd_residual(constant, Complex(0.3, 1.2), Complex(0.3, -1.2))) == 0.0);

    const Complex z(0.4, 0.9), zb = std::conj(z), s = z - zb;
    Jet2 logjet;  // W = ln(z - zb)
    logjet.w = std::log(s);
    logjet.wz = 1.0 / s;
    logjet.wzb = -1.0 / s;
    logjet.wzz = -1.0 / (s * s);
    logjet.wzbzb = -1.0 / (s * s);
    logjet.wzzb = 1.0 / (s * s);
    CHECK(std::abs(epd_residual(logjet, z, zb)) < 1e-15);

    Jet2 linear;  // W = z, not a solution
    linear.w = Complex(0, 1);
    linear.wz = 1.0;
    CHECK(std::abs(epd_residual(linear, Complex(0, 1), Complex(0, -1)) - Complex(-0.5, 0)) <
          1e-15);
}

TEST_CASE("epd_residual: vanishes for every density family on the conjugate slice") {
    SolutionSpec delta;
    DeltaSpec d;
    d.phi = {{1.3, -0.4}, {-0.7, 0.9}};
    d.psi = {{0.5, 0.2}};
    delta.density = d;
    delta.log_two_i = true;

    SolutionSpec sampled;
    SampledSpec sm;
    sm.a = -2.0;
    sm.b = 2.0;
    sm.phi = [](double l) { return std::exp(-l * l); };
    sm.psi = [](double l) { return l * std::exp(-l * l); };
    sampled.density = sm;
    sampled.log_two_i = true;

    for (const SolutionSpec& s :
         {monomial({0.3, -1.1, 0.4}, {0.8, -0.2}), inverse_power({0.9, 0.4}, {0.7}, true),
          delta, sampled}) {
        for (const Complex z : {Complex(0.3, 1.4), Complex(-0.8, 2.1), Complex(1.1, 0.6)}) {
            const Jet2 j = eval_jet(s, z, std::conj(z));
            const double scale =
                std::abs(j.wz) + std::abs(j.wzb) + std::abs(z - std::conj(z)) * std::abs(j.wzzb);
            CHECK(std::abs(epd_residual(j, z, std::conj(z))) / (1.0 + scale) < 1e-10);
        }
    }
}

TEST_CASE("real-valuedness on the conjugate slice for real densities") {
    const SolutionSpec s = monomial({0.7, -0.3}, {1.2, 0.4}, true);
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> d(-1.5, 1.5);
    for (int t = 0; t < 10; ++t) {
        const Complex z(d(rng), 0.5 + std::abs(d(rng)));
        const Jet2 j = eval_jet(s, z, std::conj(z));
        CHECK(std::abs(j.w.imag()) < 1e-12);
        CHECK(std::abs(j.wzb - std::conj(j.wz)) < 1e-12);
        CHECK(std::abs(j.wzbzb - std::conj(j.wzz)) < 1e-12);
        CHECK(std::abs(j.wzzb.imag()) < 1e-12);
    }
}

TEST_CASE("closed-form fast path agrees with forced quadrature (power densities)") {
    SolutionSpec s = monomial({0.4, -1.2, 0.9}, {0.6, -0.8});
    SolutionSpec forced = s;
    forced.force_quadrature = true;
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    for (int t = 0; t < 10; ++t) {
        const Complex z(d(rng), 0.6 + std::abs(d(rng)));
        const Jet2 a = eval_jet(s, z, std::conj(z));
        const Jet2 b = eval_jet(forced, z, std::conj(z));
        CHECK(jet_distance(a, b) < 1e-10 * (1.0 + std::abs(a.w)));
    }
}

TEST_CASE("closed forms of the inverse-power basis match quadrature") {
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    for (int t = 0; t < 10; ++t) {
        const Complex z(d(rng), 0.8 + std::abs(d(rng))), zb = std::conj(z);
        for (int k = 1; k <= 2; ++k) {
            std::vector<double> coef(static_cast<size_t>(k), 0.0);
            coef.back() = 1.0;
            const Jet2 jx = eval_jet(inverse_power(coef, {}), z, zb);
            CHECK(std::abs(jx.w - inverse_x_value(k, z, zb)) < 1e-10);
            const Jet2 jy = eval_jet(inverse_power({}, coef, true), z, zb);
            CHECK(std::abs(jy.w - inverse_y_value(k, z, zb, true)) < 1e-10);
        }
    }
}

TEST_CASE("eval_dn agrees with the jet and closed-form higher derivatives") {
    const SolutionSpec s = monomial({0.0, 1.0}, {});
    const Complex z(0.3, 1.1), zb = std::conj(z);
    const Jet2 j = eval_jet(s, z, zb);
    const auto d1 = eval_dn(s, z, zb, 1);
    const auto d2 = eval_dn(s, z, zb, 2);
    CHECK(std::abs(d1.first - j.wz) < 1e-12);
    CHECK(std::abs(d1.second - j.wzb) < 1e-12);
    CHECK(std::abs(d2.first - j.wzz) < 1e-12);
    // (3 z^2 + 2 z zb + 3 zb^2)/8 has constant second z-derivative 3/4.
    CHECK(std::abs(d2.first - Complex(0.75, 0)) < 1e-12);
    CHECK(std::abs(eval_dn(s, z, zb, 3).first) < 1e-11);
}

TEST_CASE("appell transform: identity leaves the jet unchanged") {
    const SolutionSpec s = monomial({0.5, 1.0}, {0.7});
    const Complex z(0.4, 1.3);
    const Jet2 a = eval_jet(s, z, std::conj(z));
    const Jet2 b = appell_jet(s, z, std::conj(z), 1, 0, 0, 1);
    CHECK(jet_distance(a, b) < 1e-11);
}

TEST_CASE("appell transform: inversion maps the first power to the inverse basis") {
    // (a,b,c,d) = (0,-1,1,0) sends z -> -1/z, so the mean (z+zb)/2 becomes
    // -(1/2)(z zb)^(-1/2)(1/z + 1/zb), the second inverse-power basis value.
    const SolutionSpec s = monomial({1.0}, {});
    const Complex z(0.5, 1.2), zb = std::conj(z);
    const Jet2 t = appell_jet(s, z, zb, 0, -1, 1, 0);
    CHECK(std::abs(t.w - inverse_x_value(2, z, zb)) < 1e-11);
}

TEST_CASE("appell transform: preserves the equation over random unimodular maps") {
    const SolutionSpec s = monomial({0.3, -0.9}, {0.5});
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    for (int t = 0; t < 10; ++t) {
        const double a = 1.0 + 0.3 * d(rng), b = 0.4 * d(rng), c = 0.3 * d(rng);
        const double dd = (1.0 + b * c) / a;  // enforce a d - b c = 1
        const Complex z(0.5 * d(rng), 1.0 + 0.5 * std::abs(d(rng)));
        const Jet2 j = appell_jet(s, z, std::conj(z), a, b, c, dd);
        const double scale = std::abs(j.wz) + std::abs(j.wzb);
        CHECK(std::abs(epd_residual(j, z, std::conj(z))) / (1.0 + scale) < 1e-9);
    }
}

TEST_CASE("appell transform: parameter and pole rejection") {
    // Determinant must be 1.
    CHECK_THROWS_AS(appell_jet(monomial({1.0}, {}), Complex(0, 1), Complex(0, -1),
                               2, 0, 0, 2),
                    DomainError);
    // c z + d = 0 at z = -d/c.
    CHECK_THROWS_AS(appell_jet(monomial({1.0}, {}), Complex(-2.0, 0.0), Complex(0, -1),
                               1, 0, 1, 2),
                    DomainError);
}

TEST_CASE("dual value: closed forms for the two basic densities") {
    // W = (z+zb)/2 has dual (z-zb)^2/4 + C with C = 1 from the base point i.
    const SolutionSpec s1 = monomial({1.0}, {});
    for (const Complex z : {Complex(0.5, 1.5), Complex(-0.7, 0.8)}) {
        const Complex expected = std::pow(z - std::conj(z), 2) / 4.0 + 1.0;
        CHECK(std::abs(dual_value(s1, {z}) - expected) < 1e-10);
    }
    // W = ln(z - zb) has dual z + zb + C with C = 0 from the base point i.
    const SolutionSpec s2 = monomial({}, {1.0});
    for (const Complex z : {Complex(0.5, 1.5), Complex(-0.7, 0.8)}) {
        CHECK(std::abs(dual_value(s2, {z}) - (z + std::conj(z))) < 1e-10);
    }
}

TEST_CASE("dual value: path independence") {
    const SolutionSpec s = monomial({0.4, 0.9}, {0.3});
    const Complex target(-0.6, 1.7);
    const Complex direct = dual_value(s, {target});
    const Complex detour = dual_value(s, {Complex(1.0, 2.0), Complex(-1.0, 2.2), target});
    CHECK(std::abs(direct - detour) < 1e-10);
}

TEST_CASE("dual residual: constructed dual solves the lowered-parameter equation") {
    for (const SolutionSpec& s :
         {monomial({1.0}, {}), monomial({}, {1.0}), monomial({0.7, -0.2}, {0.5})}) {
        for (const Complex z : {Complex(0.2, 1.1), Complex(-0.9, 1.8)}) {
            CHECK(std::abs(dual_residual(s, z, std::conj(z))) < 1e-10);
        }
    }
}

TEST_CASE("segment form: constant density integrates to i pi") {
    const Complex v = radon_value_phi([](double) { return 1.0; }, Complex(0.3, 1.2),
                                      Complex(0.3, -1.2));
    CHECK(std::abs(v - Complex(0, kPi)) < 1e-13);
}

TEST_CASE("segment form: agrees with the kernel integral along the segment") {
    const Complex z(0.4, 1.1), zb = std::conj(z);
    auto phi_lam = [](Complex lam) { return lam * lam + 2.0 * lam + 0.5; };
    auto along = [&](double al) {
        const double c = std::cos(al), s = std::sin(al);
        return (phi_lam(c * c * z + s * s * zb)).real();
    };
    const Complex param = radon_value_phi(along, z, zb, 128);
    // Independent oracle: the kernel-weighted contour integral over the
    // segment oriented from zb to z (where the principal product is positive).
    const Complex contour =
        integrate([&](Complex lam) { return phi_lam(lam) * kernel_pow(lam, z, zb); },
                  Contour::segment_between(zb, z, 64));
    CHECK(std::abs(param - contour) < 1e-10);
}

TEST_CASE("two-term family: linear convergence to the logarithmic solution") {
    DeltaSpec d;
    d.psi = {{1.0, 0.5}, {-0.6, -0.3}};
    const Complex z(0.4, 1.3), zb = std::conj(z);
    Complex limit{};
    for (const auto& t : d.psi) {
        const Complex P = (t.node - z) * (t.node - zb);
        limit += t.weight * std::exp(-0.5 * std::log(P)) * std::log((z - zb) / P);
    }
    const double e1 = std::abs(two_term_family_value(d, 1e-3, z, zb) - limit);
    const double e2 = std::abs(two_term_family_value(d, 5e-4, z, zb) - limit);
    CHECK(e1 < 1e-2);
    CHECK(e1 / e2 == doctest::Approx(2.0).epsilon(0.05));
    // The jet converges as well.
    const Jet2 j = two_term_family_jet(d, 1e-6, z, zb);
    const double scale = std::abs(j.wz) + std::abs(j.wzb);
    CHECK(std::abs(epd_residual(j, z, std::conj(z), 0.5 + 1e-6)) / (1.0 + scale) < 1e-9);
}

TEST_CASE("spec JSON round trips") {
    const SolutionSpec m = monomial({0.3, -1.1}, {0.8}, true);
    const SolutionSpec m2 = SolutionSpec::from_json(m.to_json());
    CHECK(m2.is_monomial());
    CHECK(m2.log_two_i);
    CHECK(std::get<MonomialSpec>(m2.density).x == std::vector<double>{0.3, -1.1});
    CHECK(std::get<MonomialSpec>(m2.density).y == std::vector<double>{0.8});

    SolutionSpec dl;
    DeltaSpec d;
    d.phi = {{1.5, -0.25}};
    d.psi = {{-0.5, 0.75}};
    dl.density = d;
    const SolutionSpec dl2 = SolutionSpec::from_json(dl.to_json());
    const auto& dd = std::get<DeltaSpec>(dl2.density);
    REQUIRE(dd.phi.size() == 1);
    CHECK(dd.phi[0].weight == 1.5);
    CHECK(dd.phi[0].node == -0.25);
    CHECK(dd.psi[0].node == 0.75);

    // Missing schema field defaults to version 1.
    const SolutionSpec bare =
        SolutionSpec::from_json(R"({"variant":"monomial","x":[1,1],"y":[1]})");
    CHECK(std::get<MonomialSpec>(bare.density).x == std::vector<double>{1, 1});
    CHECK_THROWS_AS(SolutionSpec::from_json(R"({"variant":"nope"})"), DomainError);
}

TEST_CASE("unit_basis and coefficient addressing") {
    SolutionSpec parent = monomial({0.5, 0.25}, {0.125});
    const SolutionSpec b = unit_basis(parent, "monomial-x", 2);
    CHECK(std::get<MonomialSpec>(b.density).x == std::vector<double>{0.0, 1.0});
    CHECK(std::get<MonomialSpec>(b.density).y.empty());

    coefficient(parent, "monomial-x", 3) = 2.0;  // resizes
    CHECK(std::get<MonomialSpec>(parent.density).x ==
          std::vector<double>{0.5, 0.25, 2.0});
    CHECK(coefficient(parent, "monomial-y", 0) == 0.125);
    CHECK_THROWS_AS(coefficient(parent, "unknown-family", 1), DomainError);
}
