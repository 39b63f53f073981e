#include "drg/spaceforms.hpp"

#include <cmath>

namespace drg {

namespace {

void require_skew(const Mat& a, const char* what) {
    if (a.rows() != a.cols())
        throw ShapeMismatch(std::string(what) + " must be square");
    if (a.size() > 0 && (a + a.transpose()).cwiseAbs().maxCoeff() > 1e-14)
        throw NotSkew(std::string(what) + " must be skew-symmetric");
}

void check_chart_radius(const Vec& u) {
    if (u.norm() > kSphereChartRadius)
        throw ChartPole("chart point with |u| = " + std::to_string(u.norm()) +
                        " lies in the excluded pole neighborhood");
}

void check_upper(const Vec& p) {
    if (p(p.size() - 1) <= 0.0)
        throw NonPositiveY("half-space model needs y > 0, got y = " +
                           std::to_string(p(p.size() - 1)));
}

} // namespace

MatrixFn euclidean_metric(int n) {
    return [n](const Vec&) -> Mat { return Mat::Identity(n, n); };
}

MatrixFn sphere_metric(int n) {
    return [n](const Vec& u) -> Mat {
        check_chart_radius(u);
        const double s = 1.0 + u.squaredNorm();
        return (4.0 / (s * s)) * Mat::Identity(n, n);
    };
}

MatrixFn hyperbolic_metric(int n) {
    return [n](const Vec& p) -> Mat {
        check_upper(p);
        const double y = p(n - 1);
        return Mat::Identity(n, n) / (y * y);
    };
}

Vec stereographic_inverse(const Vec& u) {
    check_chart_radius(u);
    const int n = static_cast<int>(u.size());
    const double s = u.squaredNorm();
    Vec x(n + 1);
    x.head(n) = 2.0 * u / (1.0 + s);
    x(n) = (s - 1.0) / (s + 1.0);
    return x;
}

SpaceFormField euclidean_field(const EuclideanParams& params) {
    const int n = static_cast<int>(params.a.size());
    require_skew(params.A, "Euclidean rotation parameter");
    if (params.A.rows() != n || params.b2.size() != n)
        throw ShapeMismatch("Euclidean parameters must all have dimension n");
    const Vec a = params.a;
    const Mat rot = params.A;
    const double b1 = params.b1;
    const Vec b2 = params.b2;

    SpaceFormField out;
    out.field.dim = n;
    out.field.value = [=](const Vec& x) -> Vec {
        return a + rot * x + b1 * x + 0.5 * x.squaredNorm() * b2 - b2.dot(x) * x;
    };
    out.field.jacobian = [=](const Vec& x) -> Mat {
        return rot + b1 * Mat::Identity(n, n) + b2 * x.transpose() - x * b2.transpose() -
               b2.dot(x) * Mat::Identity(n, n);
    };
    out.potential = [=](const Vec& x) { return b1 - b2.dot(x); };
    return out;
}

SpaceFormField sphere_field(const SphereParams& params) {
    const int n = static_cast<int>(params.b.size()) - 1;
    if (n < 2)
        throw ShapeMismatch("sphere model needs ambient dimension >= 3");
    require_skew(params.A, "sphere rotation parameter");
    if (params.A.rows() != n + 1)
        throw ShapeMismatch("sphere rotation parameter must be (n+1) x (n+1)");
    const Mat rot = params.A;
    const Vec b = params.b;

    SpaceFormField out;
    out.field.dim = n;
    out.field.value = [=](const Vec& u) -> Vec {
        const Vec x = stereographic_inverse(u);
        // The b-part is minus the spherical gradient of the height function
        // h(x) = <b, x>; since Hess h = -h g on the unit sphere, this sign
        // makes the potential exactly <b, x>.
        const Vec xi = rot * x - b + b.dot(x) * x;
        // Differential of the projection x -> x_head / (1 - x_last) applied
        // to the ambient tangent vector xi.
        const double w = 1.0 - x(n);
        return xi.head(n) / w + (xi(n) / (w * w)) * x.head(n);
    };
    out.potential = [=](const Vec& u) { return b.dot(stereographic_inverse(u)); };
    return out;
}

SpaceFormField hyperbolic_field(const HyperbolicParams& params) {
    const int d = static_cast<int>(params.a0.size()); // boundary dimension n-1
    const int n = d + 1;
    require_skew(params.A, "hyperbolic rotation parameter");
    if (params.A.rows() != d || params.b1.size() != d || params.a2.size() != d)
        throw ShapeMismatch("hyperbolic parameters must have boundary dimension n-1");

    Vec c(n), dvec(n);
    c << params.a0, params.b0;
    dvec << params.a2, params.b2;
    Mat m = Mat::Zero(n, n);
    m.topLeftCorner(d, d) = params.A;
    m.topRightCorner(d, 1) = -params.b1;
    m.bottomLeftCorner(1, d) = params.b1.transpose();
    const double a1 = params.a1;
    const double b0 = params.b0;
    const double b2 = params.b2;
    const Vec b1v = params.b1;

    SpaceFormField out;
    out.field.dim = n;
    out.field.value = [=](const Vec& p) -> Vec {
        check_upper(p);
        return c + m * p + a1 * p + p.squaredNorm() * dvec - 2.0 * dvec.dot(p) * p;
    };
    out.field.jacobian = [=](const Vec& p) -> Mat {
        check_upper(p);
        return m + a1 * Mat::Identity(n, n) + 2.0 * dvec * p.transpose() -
               2.0 * p * dvec.transpose() - 2.0 * dvec.dot(p) * Mat::Identity(n, n);
    };
    out.potential = [=](const Vec& p) {
        check_upper(p);
        return -(b0 + b1v.dot(p.head(d)) + b2 * p.squaredNorm()) / p(n - 1);
    };
    return out;
}

} // namespace drg
