#include <cmath>
#include <vector>

#include "doctest.h"
#include "drg/algebra.hpp"
#include "drg/coeffsys.hpp"
#include "drg/errors.hpp"
#include "drg/rng.hpp"
#include "drg/space.hpp"

using namespace drg;

namespace {

DamekRicciSpace make_space(AlgebraFamily family, int multiplicity) {
    return extend_solvable(catalog(family, multiplicity));
}

double binom_real(int n, int j) {
    double out = 1.0;
    for (int i = 1; i <= j; ++i)
        out = out * static_cast<double>(n - j + i) / static_cast<double>(i);
    return out;
}

double eval_monomial(const std::vector<int>& exps, const Vec& pt) {
    double out = 1.0;
    for (std::size_t i = 0; i < exps.size(); ++i)
        for (int rep = 0; rep < exps[i]; ++rep)
            out *= pt(static_cast<int>(i));
    return out;
}

double max_abs_coeff(const Polynomial& p) {
    double out = 0.0;
    for (const auto& [exps, c] : p.terms())
        out = std::max(out, std::abs(c));
    return out;
}

// Independent evaluator of the displayed equation families against a
// candidate coefficient vector: polynomial calculus on the C's, no shared
// code with the symbolic row assembly.
struct IdentityOracle {
    const DamekRicciSpace& space;
    const TruncatedCoefficientSystem& sys;
    Vec v;
    int R, M, k, mc;
    std::vector<Polynomial> C1, C2; // index by harmonic degree, entry 0 unused
    Polynomial C4, C5, C5m;

    IdentityOracle(const DamekRicciSpace& s, const TruncatedCoefficientSystem& sy, const Vec& sol)
        : space(s), sys(sy), v(sol), R(sy.ring_vars()), M(sy.truncation()), k(s.dim_v()),
          mc(s.dim_center()), C4(sy.coefficient_polynomial(sol, CoeffFn::C4, 0)),
          C5(sy.coefficient_polynomial(sol, CoeffFn::C5, 0)),
          C5m(sy.coefficient_polynomial(sol, CoeffFn::C5m, 0)) {
        C1.assign(static_cast<std::size_t>(M + 3), Polynomial(R));
        C2.assign(static_cast<std::size_t>(M + 3), Polynomial(R));
        for (int m = 1; m <= M; ++m) {
            C1[static_cast<std::size_t>(m)] = sys.coefficient_polynomial(v, CoeffFn::C1, m);
            C2[static_cast<std::size_t>(m)] = sys.coefficient_polynomial(v, CoeffFn::C2, m);
        }
    }

    Polynomial derive(const Polynomial& p, bool mirror) const {
        Polynomial out = p.derivative(mirror ? 2 : 1);
        for (int r = 2; r <= mc; ++r) {
            const int zr = k + r - 1;
            const Polynomial dz = p.derivative(zr);
            if (dz.is_zero())
                continue;
            std::vector<int> e(static_cast<std::size_t>(R), 0);
            if (!mirror) {
                e[static_cast<std::size_t>(r + 1)] = 1;
                out = out - dz.times_monomial(e, 0.5);
            } else {
                for (int j = 1; j <= k; ++j) {
                    const double a = space.algebra().structure(r - 1, 1, j - 1);
                    if (a == 0.0)
                        continue;
                    std::vector<int> ej(static_cast<std::size_t>(R), 0);
                    ej[static_cast<std::size_t>(j)] = 1;
                    out = out - dz.times_monomial(ej, 0.5 * a);
                }
            }
        }
        return out;
    }

    Polynomial derive_n(const Polynomial& p, int n, bool mirror) const {
        Polynomial out = p;
        for (int i = 0; i < n; ++i)
            out = derive(out, mirror);
        return out;
    }

    // The shorthand C^{(p)}_{[m,j]} = D^p C1^[m] sin(pi j/2) + D^p C2^[m] cos(pi j/2).
    double cc(int p, int m, int j, bool mirror, const Vec& pt) const {
        if (m > M)
            return 0.0;
        static const int sins[4] = {0, 1, 0, -1};
        static const int coss[4] = {1, 0, -1, 0};
        double out = 0.0;
        if (sins[j % 4] != 0)
            out += sins[j % 4] * derive_n(C1[static_cast<std::size_t>(m)], p, mirror).eval(pt);
        if (coss[j % 4] != 0)
            out += coss[j % 4] * derive_n(C2[static_cast<std::size_t>(m)], p, mirror).eval(pt);
        return out;
    }

    double uval(bool mirror, const Vec& pt) const { return mirror ? -pt(1) : pt(2); }

    double eval_16mk(int j, bool mirror, const Vec& pt) const {
        const double z = pt(0);
        const double u = uval(mirror, pt);
        double total = 0.0;
        for (int m = j; m <= M; ++m) {
            double term = binom_real(m, j) / j * cc(2, m, j, mirror, pt);
            term -= u * binom_real(m + 1, j) * static_cast<double>(m - j + 1) / j *
                    cc(1, m + 1, j, mirror, pt);
            term += 0.25 * u * u * binom_real(m + 2, j) *
                    static_cast<double>((m - j + 2) * (m - j + 1)) / j * cc(0, m + 2, j, mirror, pt);
            term += binom_real(m + 1, j + 1) * (j + 0.5) * cc(0, m + 1, j + 1, mirror, pt);
            total += std::pow(z, m - j) * term;
        }
        return total;
    }

    double eval_161(bool mirror, const Vec& pt) const {
        const double z = pt(0);
        const double u = uval(mirror, pt);
        double total = derive_n(C4, 2, mirror).eval(pt);
        for (int m = 1; m <= M; ++m) {
            total += std::pow(z, m) * derive_n(C2[static_cast<std::size_t>(m)], 2, mirror).eval(pt);
            double inner = -u * derive(C2[static_cast<std::size_t>(m)], mirror).eval(pt);
            if (m + 1 <= M)
                inner += 0.25 * (m + 1) * u * u * C2[static_cast<std::size_t>(m + 1)].eval(pt);
            total += m * std::pow(z, m - 1) * inner;
        }
        return total;
    }

    double eval_162(const Vec& pt) const {
        double total = C4.eval(pt);
        for (int m = 1; m <= M; ++m)
            total += std::pow(pt(0), m) * C2[static_cast<std::size_t>(m)].eval(pt);
        return total;
    }

    double eval_163(bool mirror, const Vec& pt) const {
        const double u = uval(mirror, pt);
        const Polynomial& c5 = mirror ? C5m : C5;
        double total = -derive(c5, mirror).eval(pt) + 0.5 * u * c5.derivative(0).eval(pt);
        for (int m = 1; m <= M; ++m)
            total += 0.5 * m * std::pow(pt(0), m - 1) * C1[static_cast<std::size_t>(m)].eval(pt);
        return total;
    }

    // Re-sum the assembled rows of one family into the identity value at pt.
    double bucket_from_rows(int kind, int grade, bool mirror, const Vec& pt) const {
        double total = 0.0;
        for (std::size_t i = 0; i < sys.rows().size(); ++i) {
            const RowInfo& info = sys.rows()[i];
            if (info.kind != kind || info.grade != grade || info.mirror != mirror)
                continue;
            total += eval_monomial(info.exps, pt) *
                     sys.matrix().row(static_cast<int>(i)).dot(v);
        }
        return total;
    }
};

} // namespace

TEST_CASE("system shape and guards") {
    const auto space = make_space(AlgebraFamily::heisenberg, 1);
    SUBCASE("unknown layout for heisenberg(1), M=4, d=2") {
        const auto sys = build_system(4, 2, space);
        // C1/C2: 4 degrees x 6 monomials each; C4: 6; C5/C5m: 4 z-powers x 10.
        CHECK(static_cast<int>(sys.unknowns().size()) == 2 * 4 * 6 + 6 + 2 * 40);
        CHECK(sys.ring_vars() == 3);
        const std::vector<int> const_mono = {0, 0, 0};
        CHECK(sys.unknown_index(CoeffFn::C1, 1, const_mono) >= 0);
        CHECK(sys.unknown_index(CoeffFn::C1, 5, const_mono) == -1);
        std::vector<int> zx = {1, 1, 0};
        CHECK(sys.unknown_index(CoeffFn::C5, 0, zx) >= 0);
        CHECK(sys.unknown_index(CoeffFn::C1, 1, zx) == -1); // C's are z-free
    }
    SUBCASE("default-size system is overdetermined") {
        const auto sys = build_system(8, 2, space);
        CHECK(sys.rows().size() >= sys.unknowns().size());
        CHECK(sys.matrix().allFinite());
    }
    SUBCASE("guards") {
        CHECK_THROWS_AS(build_system(2, 2, space), TruncationTooSmall);
        CHECK_THROWS_AS(build_system(4, 0, space), ConfigError);
        Mat neg_rot = Mat::Zero(2, 2);
        neg_rot(0, 1) = 1.0;
        neg_rot(1, 0) = -1.0;
        const auto crooked = extend_solvable(build_algebra({neg_rot}));
        CHECK_THROWS_AS(build_system(4, 2, crooked), BasisNotAligned);
    }
}

TEST_CASE("(16-2) rows pin C2 and C4 directly") {
    const auto space = make_space(AlgebraFamily::heisenberg, 1);
    const auto sys = build_system(4, 2, space);
    int seen = 0;
    std::vector<bool> hit(sys.unknowns().size(), false);
    for (std::size_t i = 0; i < sys.rows().size(); ++i) {
        const RowInfo& info = sys.rows()[i];
        if (info.kind != 2)
            continue;
        ++seen;
        const Vec row = sys.matrix().row(static_cast<int>(i));
        int nnz = 0, col = -1;
        for (int c = 0; c < row.size(); ++c)
            if (row(c) != 0.0) {
                ++nnz;
                col = c;
            }
        REQUIRE(nnz == 1);
        CHECK(row(col) == 1.0); // after the -2 normalization of the e^{-a} part
        const UnknownKey& u = sys.unknowns()[static_cast<std::size_t>(col)];
        const bool is_c2 = u.fn == CoeffFn::C2;
        const bool is_c4 = u.fn == CoeffFn::C4;
        CHECK((is_c2 || is_c4));
        CHECK(info.exps[0] == (is_c2 ? u.m : 0)); // z-power tags the degree
        hit[static_cast<std::size_t>(col)] = true;
    }
    CHECK(seen > 0);
    // Every C2 and C4 unknown is forced to zero by some (16-2) row.
    for (std::size_t id = 0; id < sys.unknowns().size(); ++id) {
        const auto& u = sys.unknowns()[id];
        if (u.fn == CoeffFn::C2 || u.fn == CoeffFn::C4)
            CHECK(hit[id]);
    }
}

TEST_CASE("assembled rows match the displayed equations pointwise") {
    Rng rng(91);
    SUBCASE("heisenberg(1), M=5, d=2") {
        const auto space = make_space(AlgebraFamily::heisenberg, 1);
        const auto sys = build_system(5, 2, space);
        const Vec v = rng.uniform_vec(static_cast<int>(sys.unknowns().size()), -1.0, 1.0);
        const IdentityOracle oracle(space, sys, v);
        for (int trial = 0; trial < 8; ++trial) {
            const Vec pt = rng.uniform_vec(sys.ring_vars(), -1.0, 1.0);
            for (bool mirror : {false, true}) {
                for (int j = 1; j <= sys.truncation(); ++j)
                    CHECK(oracle.bucket_from_rows(0, j, mirror, pt) ==
                          doctest::Approx(oracle.eval_16mk(j, mirror, pt)).epsilon(1e-10));
                CHECK(oracle.bucket_from_rows(1, 0, mirror, pt) ==
                      doctest::Approx(oracle.eval_161(mirror, pt)).epsilon(1e-10));
                CHECK(oracle.bucket_from_rows(2, 0, mirror, pt) ==
                      doctest::Approx(oracle.eval_162(pt)).epsilon(1e-10));
                CHECK(oracle.bucket_from_rows(3, 0, mirror, pt) ==
                      doctest::Approx(oracle.eval_163(mirror, pt)).epsilon(1e-10));
            }
        }
    }
    SUBCASE("clifford2(1), M=4, d=1 exercises the z_r corrections") {
        const auto space = make_space(AlgebraFamily::clifford2, 1);
        const auto sys = build_system(4, 1, space);
        const Vec v = rng.uniform_vec(static_cast<int>(sys.unknowns().size()), -1.0, 1.0);
        const IdentityOracle oracle(space, sys, v);
        for (int trial = 0; trial < 4; ++trial) {
            const Vec pt = rng.uniform_vec(sys.ring_vars(), -1.0, 1.0);
            for (bool mirror : {false, true}) {
                for (int j = 1; j <= sys.truncation(); ++j)
                    CHECK(oracle.bucket_from_rows(0, j, mirror, pt) ==
                          doctest::Approx(oracle.eval_16mk(j, mirror, pt)).epsilon(1e-10));
                CHECK(oracle.bucket_from_rows(1, 0, mirror, pt) ==
                      doctest::Approx(oracle.eval_161(mirror, pt)).epsilon(1e-10));
                CHECK(oracle.bucket_from_rows(3, 0, mirror, pt) ==
                      doctest::Approx(oracle.eval_163(mirror, pt)).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("pinned row reductions") {
    const auto space = make_space(AlgebraFamily::heisenberg, 1);
    const auto sys = build_system(5, 2, space);
    Rng rng(92);
    SUBCASE("k=2 family with C2 = 0 reduces to the C1^[m+1] killer") {
        // Populate only C1^[3] with a random polynomial; the k=2 bucket must
        // evaluate to -(5/12)(m+1)m(m-1) C1^[m+1] summed over z-powers, which
        // for C1^[3] alone is the m=2 term.
        Vec v = Vec::Zero(static_cast<int>(sys.unknowns().size()));
        for (std::size_t id = 0; id < sys.unknowns().size(); ++id)
            if (sys.unknowns()[id].fn == CoeffFn::C1 && sys.unknowns()[id].m == 3)
                v(static_cast<int>(id)) = rng.uniform(-1.0, 1.0);
        const IdentityOracle oracle(space, sys, v);
        for (int trial = 0; trial < 5; ++trial) {
            const Vec pt = rng.uniform_vec(3, -1.0, 1.0);
            const double c13 = oracle.C1[3].eval(pt);
            CHECK(oracle.bucket_from_rows(0, 2, false, pt) ==
                  doctest::Approx(-(5.0 / 12.0) * 3 * 2 * 1 * c13).epsilon(1e-11));
        }
    }
    SUBCASE("k=1, m=2 row binds exactly D_x^2 C1^[2]") {
        // Affine C1^[2] passes; an x^2 component is rejected.
        Vec affine = Vec::Zero(static_cast<int>(sys.unknowns().size()));
        affine(sys.unknown_index(CoeffFn::C1, 2, {0, 0, 0})) = 0.7;
        affine(sys.unknown_index(CoeffFn::C1, 2, {0, 1, 0})) = -0.3;
        affine(sys.unknown_index(CoeffFn::C1, 2, {0, 0, 1})) = 0.2;
        Vec quad = Vec::Zero(static_cast<int>(sys.unknowns().size()));
        quad(sys.unknown_index(CoeffFn::C1, 2, {0, 2, 0})) = 1.0;
        double affine_norm = 0.0, quad_norm = 0.0;
        for (std::size_t i = 0; i < sys.rows().size(); ++i) {
            const RowInfo& info = sys.rows()[i];
            if (info.kind != 0 || info.grade != 1 || info.mirror || info.exps[0] != 1)
                continue;
            affine_norm += std::abs(sys.matrix().row(static_cast<int>(i)).dot(affine));
            quad_norm += std::abs(sys.matrix().row(static_cast<int>(i)).dot(quad));
        }
        CHECK(affine_norm == doctest::Approx(0.0));
        CHECK(quad_norm > 1.0); // the binom(2,1) D_x^2 x^2 = 4 entry
    }
    SUBCASE("a fake C2^[1] = 1 vector is loudly infeasible") {
        Vec fake = Vec::Zero(static_cast<int>(sys.unknowns().size()));
        fake(sys.unknown_index(CoeffFn::C2, 1, {0, 0, 0})) = 1.0;
        CHECK((sys.matrix() * fake).norm() > 0.5);
    }
}

TEST_CASE("solution space of heisenberg(1)") {
    const auto space = make_space(AlgebraFamily::heisenberg, 1);
    const auto sys = build_system(6, 2, space);
    const Mat basis = solve_system(sys);
    REQUIRE(basis.cols() > 0);
    Rng rng(93);

    SUBCASE("coefficient-vanishing conclusions") {
        for (int c = 0; c < basis.cols(); ++c) {
            const Vec sol = basis.col(c);
            CHECK(max_abs_coeff(sys.coefficient_polynomial(sol, CoeffFn::C4, 0)) < 1e-9);
            for (int m = 1; m <= sys.truncation(); ++m)
                CHECK(max_abs_coeff(sys.coefficient_polynomial(sol, CoeffFn::C2, m)) < 1e-9);
            for (int m = 3; m <= sys.truncation(); ++m)
                CHECK(max_abs_coeff(sys.coefficient_polynomial(sol, CoeffFn::C1, m)) < 1e-9);
        }
    }
    SUBCASE("surviving coefficients satisfy the second-derivative relations") {
        for (int c = 0; c < basis.cols(); ++c) {
            const Vec sol = basis.col(c);
            const Polynomial c11 = sys.coefficient_polynomial(sol, CoeffFn::C1, 1);
            const Polynomial c12 = sys.coefficient_polynomial(sol, CoeffFn::C1, 2);
            // D_x = d/dx here (m 1); ring var 1 is x, var 2 is y.
            const Polynomial dxx_c11 = c11.derivative(1).derivative(1);
            std::vector<int> ey = {0, 0, 1};
            const Polynomial rel = dxx_c11 - c12.derivative(1).times_monomial(ey, 2.0);
            CHECK(max_abs_coeff(rel) < 1e-9);
            CHECK(max_abs_coeff(c12.derivative(1).derivative(1)) < 1e-9);
        }
    }
    SUBCASE("f4 takes the theorem's final form and the potential vanishes") {
        for (int c = 0; c < basis.cols(); ++c) {
            const Vec sol = basis.col(c);
            const Polynomial c11 = sys.coefficient_polynomial(sol, CoeffFn::C1, 1);
            const Polynomial c12 = sys.coefficient_polynomial(sol, CoeffFn::C1, 2);
            for (int trial = 0; trial < 5; ++trial) {
                const Vec p = rng.uniform_vec(4, -1.0, 1.0);
                Vec ring_pt(3);
                ring_pt << p(2), p(0), p(1); // (z, x, y)
                const double expected = c11.eval(ring_pt) + 2.0 * p(2) * c12.eval(ring_pt);
                CHECK(f4_from_solution(sys, sol, p) ==
                      doctest::Approx(expected).epsilon(1e-11));
                CHECK(std::abs(rho_of_solution(sys, sol, p)) < 1e-9);
            }
        }
    }
    SUBCASE("the survivor space is exactly span{1, x, y, xy} + constant C1^[2]") {
        std::vector<int> c_cols;
        for (std::size_t id = 0; id < sys.unknowns().size(); ++id) {
            const auto fn = sys.unknowns()[id].fn;
            if (fn == CoeffFn::C1 || fn == CoeffFn::C2 || fn == CoeffFn::C4)
                c_cols.push_back(static_cast<int>(id));
        }
        Mat proj(static_cast<int>(c_cols.size()), basis.cols());
        for (std::size_t r = 0; r < c_cols.size(); ++r)
            proj.row(static_cast<int>(r)) = basis.row(c_cols[r]);
        Eigen::BDCSVD<Mat> svd(proj, Eigen::ComputeThinU);
        int rank = 0;
        for (int i = 0; i < svd.singularValues().size(); ++i)
            if (svd.singularValues()(i) > 1e-8 * svd.singularValues()(0))
                ++rank;
        CHECK(rank == 5);
        const Mat q = svd.matrixU().leftCols(rank);
        auto check_contains = [&](CoeffFn fn, int m, const std::vector<int>& exps) {
            Vec t = Vec::Zero(static_cast<int>(c_cols.size()));
            const int idx = sys.unknown_index(fn, m, exps);
            for (std::size_t r = 0; r < c_cols.size(); ++r)
                if (c_cols[r] == idx)
                    t(static_cast<int>(r)) = 1.0;
            CHECK((t - q * (q.transpose() * t)).norm() < 1e-8);
        };
        check_contains(CoeffFn::C1, 1, {0, 0, 0});
        check_contains(CoeffFn::C1, 1, {0, 1, 0});
        check_contains(CoeffFn::C1, 1, {0, 0, 1});
        check_contains(CoeffFn::C1, 1, {0, 1, 1});
        check_contains(CoeffFn::C1, 2, {0, 0, 0});
    }
}

TEST_CASE("truncation stability") {
    const auto space = make_space(AlgebraFamily::heisenberg, 1);
    auto c_projection = [](const TruncatedCoefficientSystem& sys, const Mat& basis,
                           const std::vector<std::pair<CoeffFn, std::pair<int, std::vector<int>>>>&
                               shared) {
        Mat proj(static_cast<int>(shared.size()), basis.cols());
        for (std::size_t r = 0; r < shared.size(); ++r) {
            const int idx =
                sys.unknown_index(shared[r].first, shared[r].second.first, shared[r].second.second);
            REQUIRE(idx >= 0);
            proj.row(static_cast<int>(r)) = basis.row(idx);
        }
        Eigen::BDCSVD<Mat> svd(proj, Eigen::ComputeThinU);
        int rank = 0;
        for (int i = 0; i < svd.singularValues().size(); ++i)
            if (svd.singularValues()(i) > 1e-8 * svd.singularValues()(0))
                ++rank;
        return Mat(svd.matrixU().leftCols(rank));
    };

    for (int d : {1, 2}) {
        CAPTURE(d);
        // Shared coordinates: all C unknowns present at every truncation >= 4.
        const auto ref = build_system(4, d, space);
        std::vector<std::pair<CoeffFn, std::pair<int, std::vector<int>>>> shared;
        for (const auto& u : ref.unknowns())
            if (u.fn == CoeffFn::C1 || u.fn == CoeffFn::C2 || u.fn == CoeffFn::C4)
                shared.emplace_back(u.fn, std::make_pair(u.m, u.exps));

        std::vector<Mat> spans;
        std::vector<int> dims;
        for (int M : {4, 6, 8}) {
            const auto sys = build_system(M, d, space);
            const Mat basis = solve_system(sys);
            dims.push_back(static_cast<int>(basis.cols()));
            spans.push_back(c_projection(sys, basis, shared));
        }
        CHECK(dims[0] == dims[1]);
        CHECK(dims[1] == dims[2]);
        for (std::size_t i = 1; i < spans.size(); ++i) {
            REQUIRE(spans[i].cols() == spans[0].cols());
            // All principal angles ~ 0: projectors agree.
            const Mat diff = spans[i] * spans[i].transpose() - spans[0] * spans[0].transpose();
            CHECK(diff.cwiseAbs().maxCoeff() < 1e-8);
        }
        CHECK(spans[0].cols() == (d == 2 ? 5 : 4));
    }
}

TEST_CASE("solution export and pinned f4 forms") {
    const auto space = make_space(AlgebraFamily::heisenberg, 1);
    const auto sys = build_system(4, 2, space);
    Vec v = Vec::Zero(static_cast<int>(sys.unknowns().size()));
    SUBCASE("C1^[1] = 1 gives f4 = 1") {
        v(sys.unknown_index(CoeffFn::C1, 1, {0, 0, 0})) = 1.0;
        const Vec p = (Eigen::VectorXd(4) << 0.3, -0.5, 0.8, 0.4).finished();
        CHECK(f4_from_solution(sys, v, p) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(rho_of_solution(sys, v, p)) < 1e-10);
    }
    SUBCASE("C1^[2] = 1 gives f4 = 2z") {
        v(sys.unknown_index(CoeffFn::C1, 2, {0, 0, 0})) = 1.0;
        const Vec p = (Eigen::VectorXd(4) << -0.2, 0.6, 0.9, -0.7).finished();
        CHECK(f4_from_solution(sys, v, p) == doctest::Approx(2.0 * 0.9).epsilon(1e-12));
        CHECK(std::abs(rho_of_solution(sys, v, p)) < 1e-10);
    }
    SUBCASE("expansion round-trip keeps C5 and drops C5m") {
        v(sys.unknown_index(CoeffFn::C5, 0, {1, 1, 0})) = 2.0;
        v(sys.unknown_index(CoeffFn::C5m, 0, {1, 0, 1})) = 3.0;
        const auto exp = expansion_from_solution(sys, v);
        REQUIRE(exp.c5.has_value());
        CHECK(exp.c5->terms().size() == 1);
        CHECK(exp.truncation == 4);
        CHECK(exp.dim_v == 2);
        CHECK(exp.dim_center == 1);
    }
}

TEST_CASE("clifford2(1) solution space obeys the same conclusions") {
    const auto space = make_space(AlgebraFamily::clifford2, 1);
    const auto sys = build_system(4, 1, space);
    const Mat basis = solve_system(sys);
    REQUIRE(basis.cols() > 0);
    Rng rng(94);
    for (int c = 0; c < basis.cols(); ++c) {
        const Vec sol = basis.col(c);
        CHECK(max_abs_coeff(sys.coefficient_polynomial(sol, CoeffFn::C4, 0)) < 1e-9);
        for (int m = 1; m <= sys.truncation(); ++m)
            CHECK(max_abs_coeff(sys.coefficient_polynomial(sol, CoeffFn::C2, m)) < 1e-9);
        for (int m = 3; m <= sys.truncation(); ++m)
            CHECK(max_abs_coeff(sys.coefficient_polynomial(sol, CoeffFn::C1, m)) < 1e-9);
    }
    // Potentials vanish on a sample of nullspace combinations.
    for (int trial = 0; trial < 3; ++trial) {
        const Vec weights = rng.uniform_vec(static_cast<int>(basis.cols()), -1.0, 1.0);
        const Vec sol = basis * weights;
        const Vec p = rng.uniform_vec(space.dim(), -1.0, 1.0);
        CHECK(std::abs(rho_of_solution(sys, sol, p)) < 1e-8);
    }
}
