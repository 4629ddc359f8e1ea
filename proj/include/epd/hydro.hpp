#pragma once

#include "epd/critical.hpp"
#include "epd/report.hpp"

namespace epd {

// A deformation direction of the density, i.e. one hierarchy "time".
struct FlowLabel {
    std::string family;  // see unit_basis families
    int index = 0;
};

// Critical-point positions over a rectangular grid of two density
// coefficients; row-major with the a-axis outermost.
struct HodographField {
    FlowLabel label_a, label_b;
    double a0 = 0.0, da = 0.0;
    double b0 = 0.0, db = 0.0;
    int na = 0, nb = 0;
    std::vector<Complex> beta;
    std::vector<uint8_t> converged;

    const Complex& at(int i, int j) const { return beta[static_cast<size_t>(i) * nb + j]; }
    bool ok(int i, int j) const { return converged[static_cast<size_t>(i) * nb + j] != 0; }

    // CSV columns: param_a, param_b, re_beta, im_beta, converged.
    std::string to_csv() const;
};

// Characteristic velocity lambda_{k,l}(z, zb) = W_{k,z} / W_{l,z} of the pair
// of deformation directions.  parent supplies the variant context for delta
// labels.
Complex velocity(const SolutionSpec& parent, Complex z, Complex zb,
                 const FlowLabel& k, const FlowLabel& l);

// Tracks the critical point of `templ` while the two labelled coefficients
// sweep the grid; Newton seeded by continuation from the nearest solved node.
HodographField hodograph_solve(const SolutionSpec& templ,
                               const FlowLabel& la, double a0, double da, int na,
                               const FlowLabel& lb, double b0, double db, int nb,
                               Complex guess, const NewtonOptions& opt = {});

// Residual of beta_a = lambda_{a,b} beta_b on the interior (central
// differences).  Throws DomainError if fewer than 3 nodes per axis.
ResidualReport pde_residual(const SolutionSpec& templ, const HodographField& field);

// Residual of the specific mixed system beta_a = ((beta - betabar)/2) beta_b,
// valid when a is the first power coefficient and b the constant log
// coefficient.
ResidualReport mixed_toda_residual(const HodographField& field);

// Second-order form of the same system: phi_aa + (e^phi)_bb with
// phi = 2 log(Im beta).
ResidualReport toda_phi_residual(const HodographField& field);

// Delta-family flow in the variable u = 1 - 1/beta, for a field whose a-axis
// is the weight of the node at 0 and whose b-axis is the weight of the
// rescaled node at 1:  u_b = u^(-3/2) ubar^(-1/2) u_a.
ResidualReport delta_flow_residual(const HodographField& field);

// Velocity computed from W and, independently, from the dual W* via the
// critical-point identities; returns the maximal discrepancy over the
// converged grid nodes for the given deformation label.
double dual_equivalence(const SolutionSpec& templ, const HodographField& field,
                        const FlowLabel& k);

}  // namespace epd
