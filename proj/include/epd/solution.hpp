#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "epd/types.hpp"

namespace epd {

// Density families for the contour-integral solutions.
//
// Monomial:      phi(lam) = sum_k x[k-1] lam^k (k = 1..), psi(lam) = sum_k y[k] lam^k
//                (k = 0..); evaluated on a large circle enclosing both arguments.
// InversePower:  phi(lam) = sum_k x[k-1] lam^-k, psi likewise (k = 1..); evaluated
//                on a small circle around the origin.
// Delta:         point masses; no quadrature.
// Sampled:       smooth densities with compact support on the real axis;
//                composite Gauss-Legendre quadrature.

struct MonomialSpec {
    std::vector<double> x;  // x[j] is the coefficient of lam^(j+1)
    std::vector<double> y;  // y[j] is the coefficient of lam^j
};

struct InversePowerSpec {
    std::vector<double> x;  // x[j] is the coefficient of lam^-(j+1)
    std::vector<double> y;  // y[j] is the coefficient of lam^-(j+1)
};

struct DeltaSpec {
    struct Term {
        double weight = 0.0;
        double node = 0.0;  // real position of the point mass
    };
    std::vector<Term> phi, psi;
};

struct SampledSpec {
    std::function<double(double)> phi;  // either may be empty (treated as 0)
    std::function<double(double)> psi;
    double a = -1.0, b = 1.0;  // support interval
    int cells = 48;            // composite Gauss-Legendre cells
    int order = 8;             // points per cell
    // Tabulated form kept for serialization round trips (may be empty when
    // the spec was built from callables).
    std::vector<double> table_lambda, table_phi, table_psi;
};

struct SolutionSpec {
    std::variant<MonomialSpec, InversePowerSpec, DeltaSpec, SampledSpec> density;

    // When true the logarithmic kernel carries an extra 1/(2i) inside the
    // log, which makes psi-solutions real-valued on the conjugate slice.
    bool log_two_i = false;

    int nodes = 256;               // circle-contour resolution
    bool force_quadrature = false; // disable the low-order closed-form path

    bool is_monomial() const { return std::holds_alternative<MonomialSpec>(density); }
    bool is_inverse() const { return std::holds_alternative<InversePowerSpec>(density); }
    bool is_delta() const { return std::holds_alternative<DeltaSpec>(density); }
    bool is_sampled() const { return std::holds_alternative<SampledSpec>(density); }

    void validate() const;

    // JSON round trip ("schema": 1).  Sampled specs serialize their table.
    std::string to_json() const;
    static SolutionSpec from_json(const std::string& text);
};

// Builds a spec with a single unit coefficient in the given family/slot; used
// for hierarchy velocities and critical-point variations.
// family: "monomial-x" (index k >= 1), "monomial-y" (index k >= 0),
//         "inverse-x"/"inverse-y" (index k >= 1), "delta-phi"/"delta-psi"
//         (index = position in the parent's term list).
SolutionSpec unit_basis(const SolutionSpec& parent, const std::string& family, int index);

// Returns a mutable reference to the coefficient addressed by (family, index),
// resizing monomial coefficient lists as needed.
double& coefficient(SolutionSpec& spec, const std::string& family, int index);

}  // namespace epd
