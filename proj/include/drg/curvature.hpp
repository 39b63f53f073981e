#ifndef DRG_CURVATURE_HPP
#define DRG_CURVATURE_HPP

#include <vector>

#include "drg/fd.hpp"

namespace drg {

/// Christoffel symbols of the second kind at p; result[l](mu, nu) = Gamma^l_{mu nu}.
std::vector<Mat> christoffel_at(const MatrixFn& metric, const Vec& p,
                                double h = fd::kDefaultStep);

/// Ricci tensor via nested finite differences of the Christoffel symbols.
/// The outer derivative uses a step scaled like sqrt(h) (1e-2 at the default
/// h = 1e-3) to keep inner FD noise from dominating.
Mat ricci_at(const MatrixFn& metric, const Vec& p, double h = fd::kDefaultStep);

struct EinsteinCheck {
    double lambda = 0.0;        // mean of the per-point Einstein constants
    double max_dev = 0.0;       // max over points of ||Ric - lambda_p g||_F
    double lambda_spread = 0.0; // max - min of the per-point constants
};

EinsteinCheck einstein_check(const MatrixFn& metric, const std::vector<Vec>& points,
                             double h = fd::kDefaultStep);

} // namespace drg

#endif
