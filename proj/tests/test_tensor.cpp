#include "doctest.h"

#include <Eigen/Dense>
#include <cmath>

#include "drg/curvature.hpp"
#include "drg/rng.hpp"
#include "drg/space.hpp"
#include "drg/tensor.hpp"

using drg::CoordinateVectorField;
using drg::Mat;
using drg::Vec;

namespace {

drg::MatrixFn euclidean(int n) {
    return [n](const Vec&) -> Mat { return Mat::Identity(n, n); };
}

// Upper half-plane metric (1/y^2) delta in coordinates (x, y).
drg::MatrixFn half_plane() {
    return [](const Vec& p) -> Mat {
        return Mat::Identity(2, 2) / (p(1) * p(1));
    };
}

CoordinateVectorField constant_field(int n, const Vec& dir) {
    CoordinateVectorField f;
    f.dim = n;
    f.value = [dir](const Vec&) -> Vec { return dir; };
    f.jacobian = [n](const Vec&) -> Mat { return Mat::Zero(n, n); };
    return f;
}

} // namespace

TEST_CASE("translations are Killing for the Euclidean metric") {
    const int n = 3;
    drg::Rng rng(611);
    for (int trial = 0; trial < 3; ++trial) {
        const Vec dir = rng.uniform_vec(n, -1.0, 1.0);
        const Vec p = rng.uniform_vec(n, -1.0, 1.0);
        const Mat lie = drg::lie_derivative_metric(euclidean(n), constant_field(n, dir), p);
        CHECK(lie.cwiseAbs().maxCoeff() == doctest::Approx(0.0).epsilon(1e-12));
        const auto def = drg::conformal_defect(euclidean(n), constant_field(n, dir), p);
        CHECK(def.rho == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(def.tracefree_norm == doctest::Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("frame-basis Lie derivatives of the Damek-Ricci metric match the structure constants") {
    const auto space = drg::extend_solvable(drg::catalog(drg::AlgebraFamily::heisenberg, 1));
    drg::MatrixFn metric = [&](const Vec& q) -> Mat { return space.metric_at(q); };
    Vec p(4);
    p << 0.3, -0.5, 0.2, 0.4;
    const Mat f = space.frame_at(p);

    auto frame_field = [&](int col) {
        CoordinateVectorField field;
        field.dim = 4;
        field.value = [&, col](const Vec& q) -> Vec { return space.frame_at(q).col(col); };
        return field;
    };

    SUBCASE("xi = V") {
        const Mat lie = f.transpose() * drg::lie_derivative_metric(metric, frame_field(0), p) * f;
        Mat expect = Mat::Zero(4, 4);
        expect(0, 3) = expect(3, 0) = 0.5;  // (V, A)
        expect(1, 2) = expect(2, 1) = -1.0; // (J_Z V, Z)
        CHECK((lie - expect).cwiseAbs().maxCoeff() == doctest::Approx(0.0).epsilon(1e-8));
    }
    SUBCASE("xi = J_Z V") {
        const Mat lie = f.transpose() * drg::lie_derivative_metric(metric, frame_field(1), p) * f;
        Mat expect = Mat::Zero(4, 4);
        expect(1, 3) = expect(3, 1) = 0.5; // (J_Z V, A)
        expect(0, 2) = expect(2, 0) = 1.0; // (V, Z)
        CHECK((lie - expect).cwiseAbs().maxCoeff() == doctest::Approx(0.0).epsilon(1e-8));
    }
    SUBCASE("xi = Z") {
        const Mat lie = f.transpose() * drg::lie_derivative_metric(metric, frame_field(2), p) * f;
        Mat expect = Mat::Zero(4, 4);
        expect(2, 3) = expect(3, 2) = 1.0;  // (Z, A)
        CHECK((lie - expect).cwiseAbs().maxCoeff() == doctest::Approx(0.0).epsilon(1e-8));
    }
    SUBCASE("xi = A") {
        const Mat lie = f.transpose() * drg::lie_derivative_metric(metric, frame_field(3), p) * f;
        Mat expect = Mat::Zero(4, 4);
        expect(0, 0) = expect(1, 1) = -1.0;
        expect(2, 2) = -2.0;
        CHECK((lie - expect).cwiseAbs().maxCoeff() == doctest::Approx(0.0).epsilon(1e-8));
    }
}

TEST_CASE("Euclidean dilation and special conformal fields have the expected potentials") {
    const int n = 3;
    CoordinateVectorField dilation;
    dilation.dim = n;
    dilation.value = [](const Vec& q) -> Vec { return q; };

    Vec p(3);
    p << 2.0, 0.0, 0.0;
    auto def = drg::conformal_defect(euclidean(n), dilation, p);
    CHECK(def.rho == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(def.tracefree_norm == doctest::Approx(0.0).epsilon(1e-10));

    // xi_{b2}(x) = |x|^2 b2 / 2 - <b2, x> x gives rho = -<b2, x>.
    Vec b2 = Vec::Zero(n);
    b2(0) = 1.0;
    CoordinateVectorField special;
    special.dim = n;
    special.value = [b2](const Vec& q) -> Vec {
        return 0.5 * q.squaredNorm() * b2 - b2.dot(q) * q;
    };
    def = drg::conformal_defect(euclidean(n), special, p);
    CHECK(def.rho == doctest::Approx(-2.0).epsilon(1e-9));
    CHECK(def.tracefree_norm == doctest::Approx(0.0).epsilon(1e-8));
}

TEST_CASE("rescaling identity for L_{f xi} g") {
    const auto space = drg::extend_solvable(drg::catalog(drg::AlgebraFamily::heisenberg, 1));
    drg::MatrixFn dr_metric = [&](const Vec& q) -> Mat { return space.metric_at(q); };

    SUBCASE("f = x, xi = d/dy on the Euclidean plane") {
        CoordinateVectorField xi = constant_field(2, Vec::Unit(2, 1));
        drg::ScalarFn f = [](const Vec& q) { return q(0); };
        Vec p(2);
        p << 0.7, -0.2;
        CHECK(drg::lie_derivative_identity_check(euclidean(2), f, xi, p) <= 1e-8);
        // Hand oracle: L_{x d_y} delta = df (x) dy + dy (x) df has (1,2) entry 1.
        CoordinateVectorField scaled;
        scaled.dim = 2;
        scaled.value = [](const Vec& q) -> Vec {
            Vec v(2);
            v << 0.0, q(0);
            return v;
        };
        const Mat lie = drg::lie_derivative_metric(euclidean(2), scaled, p);
        CHECK(lie(0, 1) == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(lie(0, 0) == doctest::Approx(0.0).epsilon(1e-10));
        CHECK(lie(1, 1) == doctest::Approx(0.0).epsilon(1e-10));
    }

    SUBCASE("f identically 1 is exact") {
        CoordinateVectorField xi;
        xi.dim = 4;
        xi.value = [](const Vec& q) -> Vec { return q.reverse(); };
        drg::ScalarFn one = [](const Vec&) { return 1.0; };
        const Vec p = Vec::Constant(4, 0.25);
        CHECK(drg::lie_derivative_identity_check(dr_metric, one, xi, p) <= 1e-11);
    }

    SUBCASE("random polynomial factor, random linear field, Damek-Ricci metric") {
        drg::Rng rng(622);
        for (int trial = 0; trial < 5; ++trial) {
            const Mat b = rng.uniform_mat(4, 4, -1.0, 1.0);
            const Vec c = rng.uniform_vec(4, -1.0, 1.0);
            const Vec w = rng.uniform_vec(4, -1.0, 1.0);
            CoordinateVectorField xi;
            xi.dim = 4;
            xi.value = [b, c](const Vec& q) -> Vec { return b * q + c; };
            xi.jacobian = [b](const Vec&) -> Mat { return b; };
            drg::ScalarFn f = [w](const Vec& q) {
                const double s = w.dot(q);
                return 1.0 + s + 0.5 * s * s;
            };
            const Vec p = rng.uniform_vec(4, -0.5, 0.5);
            CHECK(drg::lie_derivative_identity_check(dr_metric, f, xi, p) <= 1e-6);
        }
    }
}

TEST_CASE("Lie derivative is additive in the field and exactly trace-adjusted") {
    const auto space = drg::extend_solvable(drg::catalog(drg::AlgebraFamily::clifford2, 1));
    drg::MatrixFn metric = [&](const Vec& q) -> Mat { return space.metric_at(q); };
    const int n = space.dim();
    drg::Rng rng(633);
    const Mat b1 = rng.uniform_mat(n, n, -1.0, 1.0);
    const Mat b2m = rng.uniform_mat(n, n, -1.0, 1.0);
    CoordinateVectorField x1, x2, sumf;
    x1.dim = x2.dim = sumf.dim = n;
    x1.value = [b1](const Vec& q) -> Vec { return b1 * q; };
    x2.value = [b2m](const Vec& q) -> Vec { return b2m * q.cwiseProduct(q); };
    sumf.value = [&](const Vec& q) -> Vec { return x1.value(q) + x2.value(q); };
    const Vec p = rng.uniform_vec(n, -0.5, 0.5);
    const Mat lsum = drg::lie_derivative_metric(metric, sumf, p);
    const Mat l1 = drg::lie_derivative_metric(metric, x1, p);
    const Mat l2 = drg::lie_derivative_metric(metric, x2, p);
    CHECK((lsum - l1 - l2).cwiseAbs().maxCoeff() == doctest::Approx(0.0).epsilon(1e-8));

    // trace(g^{-1}(L - 2 rho g)) vanishes to rounding by construction.
    const auto def = drg::conformal_defect(metric, sumf, p);
    const Mat g = metric(p);
    const double tr = (g.inverse() * (lsum - 2.0 * def.rho * g)).trace();
    CHECK(std::abs(tr) <= 1e-10);
}

TEST_CASE("finite-difference order: halving h cuts the error by at least 8x") {
    const auto space = drg::extend_solvable(drg::catalog(drg::AlgebraFamily::heisenberg, 1));
    drg::MatrixFn metric = [&](const Vec& q) -> Mat { return space.metric_at(q); };
    CoordinateVectorField xi;
    xi.dim = 4;
    // Deliberately NOT conformal; smooth with nonvanishing high derivatives.
    xi.value = [](const Vec& q) -> Vec {
        Vec v(4);
        v << std::sin(q(3)), q(0) * q(0), std::cos(q(0)), q(1) * q(2);
        return v;
    };
    Vec p(4);
    p << 0.4, 0.2, -0.3, 0.5;
    const Mat ref = drg::lie_derivative_metric(metric, xi, p, 1e-3);
    const double e1 = (drg::lie_derivative_metric(metric, xi, p, 0.32) - ref).norm();
    const double e2 = (drg::lie_derivative_metric(metric, xi, p, 0.16) - ref).norm();
    CHECK(e1 / e2 >= 8.0);
}

TEST_CASE("curvature: flat space, half-plane oracle, Einstein property") {
    SUBCASE("Euclidean Ricci vanishes") {
        Vec p(3);
        p << 0.1, 0.2, 0.3;
        const Mat ric = drg::ricci_at(euclidean(3), p);
        CHECK(ric.cwiseAbs().maxCoeff() <= 1e-9);
        const auto chk = drg::einstein_check(euclidean(3), {p});
        CHECK(std::abs(chk.lambda) <= 1e-9);
    }

    SUBCASE("half-plane hyperbolic metric has Ric = -g") {
        // Closed form for g = y^{-2} delta: Gamma^x_{xy} = -1/y, Gamma^y_{xx} = 1/y,
        // Gamma^y_{yy} = -1/y, giving Ric = -y^{-2} delta.
        Vec p(2);
        p << 0.4, 1.3;
        const auto gamma = drg::christoffel_at(half_plane(), p);
        CHECK(gamma[0](0, 1) == doctest::Approx(-1.0 / p(1)).epsilon(1e-8));
        CHECK(gamma[1](0, 0) == doctest::Approx(1.0 / p(1)).epsilon(1e-8));
        CHECK(gamma[1](1, 1) == doctest::Approx(-1.0 / p(1)).epsilon(1e-8));
        const Mat ric = drg::ricci_at(half_plane(), p);
        const Mat g = half_plane()(p);
        CHECK((ric + g).cwiseAbs().maxCoeff() <= 1e-5);
        const auto chk = drg::einstein_check(half_plane(), {p});
        CHECK(chk.lambda == doctest::Approx(-1.0).epsilon(1e-5));
        CHECK(chk.max_dev <= 1e-4);
    }

    SUBCASE("Damek-Ricci spaces are Einstein with negative constant") {
        const auto space = drg::extend_solvable(drg::catalog(drg::AlgebraFamily::heisenberg, 1));
        drg::MatrixFn metric = [&](const Vec& q) -> Mat { return space.metric_at(q); };
        drg::Rng rng(644);
        std::vector<Vec> pts;
        for (int i = 0; i < 3; ++i)
            pts.push_back(rng.uniform_vec(4, -0.8, 0.8));
        const auto chk = drg::einstein_check(metric, pts);
        CHECK(chk.lambda < 0.0);
        CHECK(chk.lambda_spread <= 1e-4);
        CHECK(chk.max_dev <= 1e-3);
        // Ricci symmetry on this metric.
        const Mat ric = drg::ricci_at(metric, pts[0]);
        CHECK((ric - ric.transpose()).cwiseAbs().maxCoeff() <= 1e-6);
    }

    SUBCASE("singular metric is rejected") {
        drg::MatrixFn degenerate = [](const Vec&) -> Mat { return Mat::Zero(2, 2); };
        Vec p = Vec::Zero(2);
        CHECK_THROWS_AS(drg::christoffel_at(degenerate, p), drg::SingularMetric);
    }
}

TEST_CASE("analytic Jacobians cross-validate against finite differences") {
    drg::Rng rng(655);
    const Mat b = rng.uniform_mat(3, 3, -1.0, 1.0);
    CoordinateVectorField xi;
    xi.dim = 3;
    xi.value = [b](const Vec& q) -> Vec { return b * q.cwiseProduct(q); };
    xi.jacobian = [b](const Vec& q) -> Mat { return 2.0 * b * q.asDiagonal(); };
    const Vec p = rng.uniform_vec(3, -1.0, 1.0);
    CoordinateVectorField no_jac = xi;
    no_jac.jacobian = nullptr;
    CHECK((xi.jacobian_at(p) - no_jac.jacobian_at(p)).cwiseAbs().maxCoeff() <= 1e-9);
}
