#pragma once

#include <string>
#include <vector>

#include "ergm/model.hpp"

namespace ergm {

// Mean-field response of the model: if X looks like G(n,p), an edge update
// switches the edge on with probability close to phi(p).
//
//   Psi(p)  = sum_i 2 beta_i |E_i| p^{|E_i|-1}
//   phi(p)  = exp(Psi(p)) / (1 + exp(Psi(p)))
//   phi'(p) = Psi'(p) phi(p) (1 - phi(p))
//
// All four throw std::domain_error for p outside [0, 1].
double psi(const ModelSpec& m, double p);
double psi_prime(const ModelSpec& m, double p);
double phi(const ModelSpec& m, double p);
double phi_prime(const ModelSpec& m, double p);

enum class Stability { Attracting, Repelling, Marginal };
enum class Phase { HighTemperature, LowTemperature, Critical };

std::string to_string(Stability s);
std::string to_string(Phase p);

struct FixedPoint {
    double p_star;
    double phi_derivative;
    Stability stability;
};

struct FixedPointOptions {
    double tol = 1e-12;
    std::size_t grid_points = 10000;
    /// A root with |phi'(p*) - 1| <= margin is marginal.
    double critical_margin = 1e-3;
};

struct FixedPointSet {
    std::vector<FixedPoint> points;  // increasing p_star
    /// Set when two roots are closer than 10 * tol.
    bool resolution_warning = false;
};

/// Roots of phi(p) = p in (0, 1): grid scan for sign changes refined by
/// bisection, plus a scan for tangential (sign-preserving) roots.
FixedPointSet find_fixed_points(const ModelSpec& m, const FixedPointOptions& opts = {});

struct PhaseReport {
    std::vector<FixedPoint> fixed_points;
    Phase classification;
    bool resolution_warning = false;
    /// p_bar for the lowest attracting fixed point (1 if none lies above it).
    double p_bar = 1.0;

    /// Least fixed point strictly greater than p_star, or 1.
    double p_bar_above(double p_star) const;
    std::vector<FixedPoint> attracting() const;
};

/// High temperature: exactly one root and it is attracting. Low temperature:
/// at least two attracting roots and no marginal root. Critical otherwise.
PhaseReport classify(const ModelSpec& m, const FixedPointOptions& opts = {});

}  // namespace ergm
