#pragma once

#include <optional>
#include <vector>

#include "epd/evaluate.hpp"

namespace epd {

struct CriticalPoint {
    Complex beta{};   // critical position (upper half plane)
    Complex wbb{};    // W_{beta beta}
    Complex wmix{};   // W_{beta beta-bar}
    Complex wcc{};    // W_{beta-bar beta-bar}
    int order = 1;         // 1 = generic double point; n = first n derivatives vanish
    int iterations = 0;
    double residual = 0.0;  // |W_b| at the solution
};

struct NewtonOptions {
    double tol = 1e-12;           // stop when |W_b| <= tol
    int max_iter = 60;
    double min_imag = 1e-10;      // collapse guard for the real-valued branch
    // |W_bb| below this flags a higher-order point.  A Newton iterate stops
    // within ~sqrt(tol) of a degenerate root, where |W_bb| is of that same
    // size, so this must sit well above sqrt(tol).
    double degeneracy_tol = 1e-5;
    int max_order_probe = 5;      // highest derivative checked when degenerate
};

// Newton on the real-valued branch: beta_bar = conj(beta), solving
// W_b(beta, conj beta) = 0 as a 2x2 real system.  Requires a real-valued spec
// (conjugation symmetry of the gradient).
CriticalPoint find_critical(const SolutionSpec& spec, Complex guess,
                            const NewtonOptions& opt = {});

// Same Newton driven by an arbitrary jet callback (used for solutions
// assembled from several densities); no higher-order degeneracy probe.
using JetFn = std::function<Jet2(Complex, Complex)>;
CriticalPoint find_critical(const JetFn& jet, Complex guess,
                            const NewtonOptions& opt = {});

// Newton with beta and beta_bar treated as independent complex unknowns,
// solving (W_z, W_zb) = (0, 0); valid for complex-coefficient work.
std::pair<Complex, Complex> find_critical_complex(const SolutionSpec& spec,
                                                  Complex guess_z, Complex guess_zb,
                                                  const NewtonOptions& opt = {});

// Characteristic directions dzb/dz at the critical point.  Order-1 points
// give the two square roots of -W_bb / W_bxbx; an order-N point gives the
// N+1 roots of (dzb/dz)^(N+1) = -W^(N+1) / Wbar^(N+1).
std::vector<Complex> clinants(const SolutionSpec& spec, const CriticalPoint& cp);

// First-order displacement of the critical point under a density variation:
//   dbeta = -W_b(dspec) / W_bb(spec), evaluated at the point.
Complex vary_critical(const SolutionSpec& spec, const CriticalPoint& cp,
                      const SolutionSpec& dspec);

// Cross-derivative symmetry of the basis values along the critical manifold:
// for parameter slots (family, index) a and b, compares the central
// differences d/dx_b [W_a at beta(x)] and d/dx_a [W_b at beta(x)].
// Returns the absolute asymmetry.
double exactness_check(const SolutionSpec& spec, const std::string& family_a, int index_a,
                       const std::string& family_b, int index_b, double step,
                       Complex guess);

struct TraceResult {
    std::vector<Complex> points;
    bool hit_critical = false;
};

// Traces the level curve of the real-valued W (or of its dual W*) through
// start, by predictor-corrector steps of size h; stops after max_steps or
// when the gradient collapses (double point).
TraceResult trace_level_curve(const SolutionSpec& spec, Complex start, double h,
                              int max_steps, bool dual = false,
                              double grad_floor = 1e-8);

// Angle between the two local arcs of the level set through a double point,
// measured from secants of the set at radius r (Richardson-refined with r/2).
double double_point_arc_angle(const SolutionSpec& spec, const CriticalPoint& cp, double r = 1e-3);

}  // namespace epd
