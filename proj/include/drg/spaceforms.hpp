#ifndef DRG_SPACEFORMS_HPP
#define DRG_SPACEFORMS_HPP

#include "drg/tensor.hpp"

namespace drg {

/// Conformal field data for one of the three constant-curvature models:
/// the chart field together with its closed-form potential.
struct SpaceFormField {
    CoordinateVectorField field;
    ScalarFn potential;
};

/// xi(x) = a + A x + b1 x + |x|^2 b2 / 2 - <b2, x> x,  rho(x) = b1 - <b2, x>.
struct EuclideanParams {
    Vec a;
    Mat A;
    double b1 = 0.0;
    Vec b2;
};

/// Ambient field xi(x) = A x - b + <b, x> x on the unit sphere, with
/// potential rho(x) = <b, x>, pushed through stereographic projection from
/// the north pole. The chart has dimension n = dim(b) - 1; its origin is the
/// south pole. (The b-part is minus the gradient of the height function
/// <b, x>, the sign that pairs with the potential <b, x>.)
struct SphereParams {
    Mat A;
    Vec b;
};

/// Upper half-space {(x, y) : y > 0} with metric y^{-2} delta. Writing
/// p = (x, y), c = (a0, b0), d = (a2, b2) and M = [[A, -b1], [b1^T, 0]]:
///   xi(p) = c + M p + a1 p + |p|^2 d - 2 <d, p> p,
///   rho(p) = -(b0 + <x, b1> + b2 |p|^2) / y.
struct HyperbolicParams {
    Vec a0;
    double b0 = 0.0;
    Mat A;
    Vec b1;
    double a1 = 0.0;
    Vec a2;
    double b2 = 0.0;
};

SpaceFormField euclidean_field(const EuclideanParams& params);
SpaceFormField sphere_field(const SphereParams& params);
SpaceFormField hyperbolic_field(const HyperbolicParams& params);

MatrixFn euclidean_metric(int n);
/// Round metric 4 (1 + |u|^2)^{-2} delta in the stereographic chart.
MatrixFn sphere_metric(int n);
/// y^{-2} delta; throws NonPositiveY when evaluated at y <= 0.
MatrixFn hyperbolic_metric(int n);

/// Chart points farther than this from the origin are considered to be in the
/// projection-pole neighborhood and rejected with ChartPole.
inline constexpr double kSphereChartRadius = 1e3;

/// Inverse stereographic chart: u in R^n -> point on the unit sphere in R^{n+1}.
Vec stereographic_inverse(const Vec& u);

} // namespace drg

#endif
