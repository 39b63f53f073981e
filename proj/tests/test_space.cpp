#include "doctest.h"

#include <Eigen/Dense>
#include <cmath>

#include "drg/fd.hpp"
#include "drg/rng.hpp"
#include "drg/space.hpp"

using drg::AlgebraFamily;
using drg::Mat;
using drg::Vec;

TEST_CASE("frame is the identity at the group identity") {
    for (AlgebraFamily fam : {AlgebraFamily::heisenberg, AlgebraFamily::quaternionic}) {
        const auto space = drg::extend_solvable(drg::catalog(fam, 1));
        const Vec origin = Vec::Zero(space.dim());
        CHECK((space.frame_at(origin) - Mat::Identity(space.dim(), space.dim()))
                  .cwiseAbs()
                  .maxCoeff() == doctest::Approx(0.0).epsilon(1e-15));
        CHECK((space.metric_at(origin) - Mat::Identity(space.dim(), space.dim()))
                  .cwiseAbs()
                  .maxCoeff() == doctest::Approx(0.0).epsilon(1e-14));
    }
}

TEST_CASE("explicit 4d frame for the smallest Heisenberg case") {
    // k = 2, m = 1: V_1 = e^{a/2}(d_x - (y/2) d_z), V_2 = e^{a/2}(d_y + (x/2) d_z),
    // Z = e^a d_z, A = d_a.
    const auto space = drg::extend_solvable(drg::catalog(AlgebraFamily::heisenberg, 1));
    Vec p(4);
    p << 0.7, -0.4, 0.9, 0.3;
    const double eh = std::exp(0.15), ea = std::exp(0.3);
    Mat expect = Mat::Zero(4, 4);
    expect(0, 0) = eh;
    expect(2, 0) = -0.5 * eh * p(1);
    expect(1, 1) = eh;
    expect(2, 1) = 0.5 * eh * p(0);
    expect(2, 2) = ea;
    expect(3, 3) = 1.0;
    CHECK((space.frame_at(p) - expect).cwiseAbs().maxCoeff() ==
          doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("frame determinant and orthonormality") {
    drg::Rng rng(511);
    for (AlgebraFamily fam : {AlgebraFamily::heisenberg, AlgebraFamily::clifford2,
                              AlgebraFamily::quaternionic, AlgebraFamily::octonionic}) {
        const auto space = drg::extend_solvable(drg::catalog(fam, 1));
        const int n = space.dim();
        for (int trial = 0; trial < 5; ++trial) {
            const Vec p = rng.uniform_vec(n, -2.0, 2.0);
            const Mat f = space.frame_at(p);
            const double expected =
                std::exp((space.dim_v() / 2.0 + space.dim_center()) * p(n - 1));
            CHECK(f.determinant() == doctest::Approx(expected).epsilon(1e-12));
            CHECK(space.frame_determinant(p) == doctest::Approx(expected).epsilon(1e-15));
            // The metric is exactly the one making the frame orthonormal.
            const Mat g = space.metric_at(p);
            CHECK((f.transpose() * g * f - Mat::Identity(n, n)).cwiseAbs().maxCoeff() ==
                  doctest::Approx(0.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("frame fields realize the solvable bracket relations") {
    drg::Rng rng(522);
    for (AlgebraFamily fam : {AlgebraFamily::heisenberg, AlgebraFamily::clifford2}) {
        const auto space = drg::extend_solvable(drg::catalog(fam, 1));
        const int n = space.dim();
        const Vec p = rng.uniform_vec(n, -1.0, 1.0);
        const Mat f0 = space.frame_at(p);

        // Coordinate commutator [X_a, X_b] = dX_b . X_a - dX_a . X_b via FD
        // Jacobians of the frame columns, compared with the algebraic bracket
        // pushed through the frame.
        std::vector<Mat> jac(n, Mat(n, n));
        for (int b = 0; b < n; ++b) {
            drg::VectorFn col = [&, b](const Vec& q) -> Vec { return space.frame_at(q).col(b); };
            jac[b] = drg::fd::jacobian(col, p);
        }
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b) {
                const Vec comm = jac[b] * f0.col(a) - jac[a] * f0.col(b);
                Vec ea = Vec::Zero(n), eb = Vec::Zero(n);
                ea(a) = 1.0;
                eb(b) = 1.0;
                const Vec expect = f0 * space.bracket(ea, eb);
                CAPTURE(a);
                CAPTURE(b);
                CHECK((comm - expect).cwiseAbs().maxCoeff() ==
                      doctest::Approx(0.0).epsilon(1e-8));
            }
    }
}

TEST_CASE("abstract bracket satisfies antisymmetry and the Jacobi identity") {
    drg::Rng rng(533);
    const auto space = drg::extend_solvable(drg::catalog(AlgebraFamily::quaternionic, 1));
    const int n = space.dim();
    for (int trial = 0; trial < 10; ++trial) {
        const Vec x = rng.uniform_vec(n, -1.0, 1.0);
        const Vec y = rng.uniform_vec(n, -1.0, 1.0);
        const Vec z = rng.uniform_vec(n, -1.0, 1.0);
        CHECK((space.bracket(x, y) + space.bracket(y, x)).cwiseAbs().maxCoeff() ==
              doctest::Approx(0.0).epsilon(1e-14));
        const Vec jac = space.bracket(space.bracket(x, y), z) +
                        space.bracket(space.bracket(y, z), x) +
                        space.bracket(space.bracket(z, x), y);
        CHECK(jac.cwiseAbs().maxCoeff() == doctest::Approx(0.0).epsilon(1e-13));
    }
}

TEST_CASE("s0 subframe picks V, J_Z V, Z, A") {
    const auto space = drg::extend_solvable(drg::catalog(AlgebraFamily::quaternionic, 2));
    const int n = space.dim(); // 12
    drg::Rng rng(544);
    const Vec p = rng.uniform_vec(n, -1.0, 1.0);
    const Mat f = space.frame_at(p);
    const Mat sub = space.s0_subframe(p);
    REQUIRE(sub.cols() == 4);
    CHECK((sub.col(0) - f.col(0)).norm() == doctest::Approx(0.0));
    CHECK((sub.col(1) - f.col(1)).norm() == doctest::Approx(0.0));
    CHECK((sub.col(2) - f.col(8)).norm() == doctest::Approx(0.0));
    CHECK((sub.col(3) - f.col(11)).norm() == doctest::Approx(0.0));

    // A valid but misaligned algebra (J e_1 = -e_2) must be rejected.
    Mat neg_rot(2, 2);
    neg_rot << 0, 1, -1, 0;
    const auto misaligned = drg::extend_solvable(drg::build_algebra({neg_rot}));
    CHECK_THROWS_AS(misaligned.s0_subframe(Vec::Zero(4)), drg::BasisNotAligned);
}

TEST_CASE("point validation guards the exponential range") {
    const auto space = drg::extend_solvable(drg::catalog(AlgebraFamily::heisenberg, 1));
    Vec p = Vec::Zero(4);
    p(3) = 50.0;
    CHECK_THROWS_AS(space.frame_at(p), drg::Overflow);
    p(3) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(space.frame_at(p), drg::NonFinitePoint);
    CHECK_THROWS_AS(space.metric_at(Vec::Zero(5)), drg::DimensionMismatch);
}
