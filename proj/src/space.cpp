#include "drg/space.hpp"

#include <cmath>

namespace drg {

namespace {
constexpr double kMaxAbsA = 40.0;
}

DamekRicciSpace::DamekRicciSpace(GeneralizedHeisenbergAlgebra algebra)
    : algebra_(std::move(algebra)) {}

DamekRicciSpace extend_solvable(GeneralizedHeisenbergAlgebra algebra) {
    return DamekRicciSpace(std::move(algebra));
}

void DamekRicciSpace::validate_point(const Vec& x) const {
    if (x.size() != dim())
        throw DimensionMismatch("point has length " + std::to_string(x.size()) + ", expected " +
                                std::to_string(dim()));
    if (!x.allFinite())
        throw NonFinitePoint("point has a non-finite coordinate");
    if (std::abs(x(dim() - 1)) > kMaxAbsA)
        throw Overflow("coordinate a = " + std::to_string(x(dim() - 1)) +
                       " exceeds the safe range |a| <= 40");
}

Mat DamekRicciSpace::frame_at(const Vec& x) const {
    validate_point(x);
    const int k = dim_v();
    const int m = dim_center();
    const int n = dim();
    const double a = x(n - 1);
    const double eh = std::exp(a / 2.0);
    const double ea = std::exp(a);
    const Vec v = x.head(k);

    Mat f = Mat::Zero(n, n);
    for (int i = 0; i < k; ++i) {
        f(i, i) = eh;
        for (int r = 0; r < m; ++r) {
            // z_r component of V_i: -(e^{a/2}/2) sum_j A(r,i,j) v_j.
            f(k + r, i) = -0.5 * eh * algebra_.structure_slice(r).row(i).dot(v);
        }
    }
    for (int r = 0; r < m; ++r)
        f(k + r, k + r) = ea;
    f(n - 1, n - 1) = 1.0;
    return f;
}

Mat DamekRicciSpace::metric_at(const Vec& x) const {
    const Mat f = frame_at(x);
    const Mat finv = f.inverse();
    Mat g = finv.transpose() * finv;
    return 0.5 * (g + g.transpose());
}

Mat DamekRicciSpace::s0_subframe(const Vec& x) const {
    if (!algebra_.basis_aligned())
        throw BasisNotAligned("s0_subframe needs V_2 = J_1 V_1; call align_basis first");
    const Mat f = frame_at(x);
    const int n = dim();
    Mat sub(n, 4);
    sub.col(0) = f.col(0);          // V
    sub.col(1) = f.col(1);          // J_Z V
    sub.col(2) = f.col(dim_v());    // Z (first center direction)
    sub.col(3) = f.col(n - 1);      // A
    return sub;
}

Vec DamekRicciSpace::bracket(const Vec& lhs, const Vec& rhs) const {
    const int k = dim_v();
    const int m = dim_center();
    const int n = dim();
    if (lhs.size() != n || rhs.size() != n)
        throw DimensionMismatch("bracket operands must have length " + std::to_string(n));
    const double al = lhs(n - 1), ar = rhs(n - 1);
    Vec out = Vec::Zero(n);
    out.head(k) = 0.5 * (al * rhs.head(k) - ar * lhs.head(k));
    out.segment(k, m) = al * rhs.segment(k, m) - ar * lhs.segment(k, m) +
                        algebra_.bracket_v(lhs.head(k), rhs.head(k));
    return out;
}

double DamekRicciSpace::frame_determinant(const Vec& x) const {
    validate_point(x);
    const double a = x(dim() - 1);
    return std::exp((dim_v() / 2.0 + dim_center()) * a);
}

} // namespace drg
