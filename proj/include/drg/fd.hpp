#ifndef DRG_FD_HPP
#define DRG_FD_HPP

#include <Eigen/Dense>
#include <cmath>
#include <functional>

#include "drg/errors.hpp"

namespace drg {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

using ScalarFn = std::function<double(const Vec&)>;
using VectorFn = std::function<Vec(const Vec&)>;
using MatrixFn = std::function<Mat(const Vec&)>;

namespace fd {

/// Default step for first derivatives of analytic data. With one Richardson
/// level on the 4th-order stencil the truncation error is O(h^6).
inline constexpr double kDefaultStep = 1e-3;

/// 4th-order central difference of a scalar function of one coordinate.
template <typename F>
double central4(F&& f, double h) {
    // f(s) must evaluate the target at offset s from the base point.
    return (-f(2.0 * h) + 8.0 * f(h) - 8.0 * f(-h) + f(-2.0 * h)) / (12.0 * h);
}

/// Richardson-extrapolated first derivative: combines the 4th-order stencil
/// at steps h and h/2, cancelling the h^4 term.
template <typename F>
double richardson(F&& f, double h) {
    const double d1 = central4(f, h);
    const double d2 = central4(f, 0.5 * h);
    return (16.0 * d2 - d1) / 15.0;
}

/// d/dx^mu of a scalar field at p.
inline double partial(const ScalarFn& f, const Vec& p, int mu, double h = kDefaultStep) {
    Vec q = p;
    auto shift = [&](double s) {
        q(mu) = p(mu) + s;
        const double v = f(q);
        if (!std::isfinite(v)) throw NonFinite("scalar field evaluation in fd::partial");
        return v;
    };
    return richardson(shift, h);
}

/// d/dx^mu of a matrix-valued field at p (componentwise, shared evaluations).
inline Mat partial(const MatrixFn& f, const Vec& p, int mu, double h = kDefaultStep) {
    Vec q = p;
    auto shift = [&](double s) -> Mat {
        q(mu) = p(mu) + s;
        return f(q);
    };
    auto stencil = [&](double hh) -> Mat {
        return (-shift(2.0 * hh) + 8.0 * shift(hh) - 8.0 * shift(-hh) + shift(-2.0 * hh)) / (12.0 * hh);
    };
    Mat d1 = stencil(h);
    Mat d2 = stencil(0.5 * h);
    Mat out = (16.0 * d2 - d1) / 15.0;
    if (!out.allFinite()) throw NonFinite("matrix field evaluation in fd::partial");
    return out;
}

/// d/dx^mu of a vector-valued field at p.
inline Vec partial(const VectorFn& f, const Vec& p, int mu, double h = kDefaultStep) {
    Vec q = p;
    auto shift = [&](double s) -> Vec {
        q(mu) = p(mu) + s;
        return f(q);
    };
    auto stencil = [&](double hh) -> Vec {
        return (-shift(2.0 * hh) + 8.0 * shift(hh) - 8.0 * shift(-hh) + shift(-2.0 * hh)) / (12.0 * hh);
    };
    Vec d1 = stencil(h);
    Vec d2 = stencil(0.5 * h);
    Vec out = (16.0 * d2 - d1) / 15.0;
    if (!out.allFinite()) throw NonFinite("vector field evaluation in fd::partial");
    return out;
}

/// Full gradient of a scalar field.
inline Vec gradient(const ScalarFn& f, const Vec& p, double h = kDefaultStep) {
    Vec g(p.size());
    for (int mu = 0; mu < p.size(); ++mu) g(mu) = partial(f, p, mu, h);
    return g;
}

/// Jacobian J(i,j) = d xi^i / d x^j of a vector field.
inline Mat jacobian(const VectorFn& f, const Vec& p, double h = kDefaultStep) {
    const int n = static_cast<int>(p.size());
    Mat J(n, n);
    for (int mu = 0; mu < n; ++mu) J.col(mu) = partial(f, p, mu, h);
    return J;
}

} // namespace fd
} // namespace drg

#endif
