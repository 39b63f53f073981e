#ifndef DRG_TENSOR_HPP
#define DRG_TENSOR_HPP

#include "drg/fd.hpp"

namespace drg {

/// Vector field in chart coordinates. `jacobian` may be left empty, in which
/// case finite differences of `value` are used where a Jacobian is needed.
struct CoordinateVectorField {
    int dim = 0;
    VectorFn value;
    MatrixFn jacobian;

    Mat jacobian_at(const Vec& p, double h = fd::kDefaultStep) const;
};

/// Result of testing a field against the conformal equation L_xi g = 2 rho g.
struct ConformalDefect {
    double rho = 0.0;            // trace_g(L_xi g) / (2 dim)
    double tracefree_norm = 0.0; // ||L_xi g - 2 rho g||_F
};

/// (L_xi g)_{mu nu} = xi^l d_l g_{mu nu} + g_{l nu} d_mu xi^l + g_{mu l} d_nu xi^l.
Mat lie_derivative_metric(const MatrixFn& metric, const CoordinateVectorField& field, const Vec& p,
                          double h = fd::kDefaultStep);

ConformalDefect conformal_defect(const MatrixFn& metric, const CoordinateVectorField& field,
                                 const Vec& p, double h = fd::kDefaultStep);

/// Residual of the rescaling identity L_{f xi} g = f L_xi g + 2 sym(df (x) xi_flat),
/// measured in the Frobenius norm. Small residuals certify both the Lie
/// derivative implementation and the gradient/musical-isomorphism plumbing.
double lie_derivative_identity_check(const MatrixFn& metric, const ScalarFn& f,
                                     const CoordinateVectorField& field, const Vec& p,
                                     double h = fd::kDefaultStep);

} // namespace drg

#endif
