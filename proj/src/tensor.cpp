#include "drg/tensor.hpp"

#include <Eigen/Dense>

namespace drg {

Mat CoordinateVectorField::jacobian_at(const Vec& p, double h) const {
    if (jacobian)
        return jacobian(p);
    return fd::jacobian(value, p, h);
}

Mat lie_derivative_metric(const MatrixFn& metric, const CoordinateVectorField& field, const Vec& p,
                          double h) {
    const int n = static_cast<int>(p.size());
    if (field.dim != n)
        throw DimensionMismatch("field dimension does not match the point");
    const Mat g = metric(p);
    if (g.rows() != n || g.cols() != n)
        throw ShapeMismatch("metric must be dim x dim");
    const Vec xi = field.value(p);
    if (!xi.allFinite())
        throw NonFinite("vector field value in lie_derivative_metric");
    const Mat jac = field.jacobian_at(p, h);

    Mat out = jac.transpose() * g + g * jac;
    for (int l = 0; l < n; ++l)
        out += xi(l) * fd::partial(metric, p, l, h);
    return 0.5 * (out + out.transpose());
}

ConformalDefect conformal_defect(const MatrixFn& metric, const CoordinateVectorField& field,
                                 const Vec& p, double h) {
    const int n = static_cast<int>(p.size());
    const Mat g = metric(p);
    const Mat lie = lie_derivative_metric(metric, field, p, h);
    Eigen::FullPivLU<Mat> lu(g);
    if (!lu.isInvertible())
        throw SingularMetric("metric not invertible in conformal_defect");
    ConformalDefect res;
    res.rho = lu.solve(lie).trace() / (2.0 * n);
    res.tracefree_norm = (lie - 2.0 * res.rho * g).norm();
    return res;
}

double lie_derivative_identity_check(const MatrixFn& metric, const ScalarFn& f,
                                     const CoordinateVectorField& field, const Vec& p, double h) {
    const int n = static_cast<int>(p.size());
    CoordinateVectorField scaled;
    scaled.dim = n;
    scaled.value = [&](const Vec& q) -> Vec { return f(q) * field.value(q); };
    // Product-rule Jacobian so the scaled field keeps analytic accuracy when
    // the base field has one.
    scaled.jacobian = [&, h](const Vec& q) -> Mat {
        return f(q) * field.jacobian_at(q, h) +
               field.value(q) * fd::gradient(f, q, h).transpose();
    };
    const Mat lhs = lie_derivative_metric(metric, scaled, p, h);

    const Mat g = metric(p);
    const Vec df = fd::gradient(f, p, h);
    const Vec flat = g * field.value(p);
    const Mat rhs = f(p) * lie_derivative_metric(metric, field, p, h) + df * flat.transpose() +
                    flat * df.transpose();
    return (lhs - rhs).norm();
}

} // namespace drg
