#include "drg/algebra.hpp"

#include <Eigen/SVD>
#include <array>
#include <cmath>

namespace drg {

namespace {

Mat blkdiag(const Mat& block, int copies) {
    const int b = static_cast<int>(block.rows());
    Mat out = Mat::Zero(b * copies, b * copies);
    for (int c = 0; c < copies; ++c)
        out.block(c * b, c * b, b, b) = block;
    return out;
}

// Quaternion product in the basis (1, i, j, k).
Eigen::Vector4d quat_mul(const Eigen::Vector4d& p, const Eigen::Vector4d& q) {
    return {p(0) * q(0) - p(1) * q(1) - p(2) * q(2) - p(3) * q(3),
            p(0) * q(1) + p(1) * q(0) + p(2) * q(3) - p(3) * q(2),
            p(0) * q(2) - p(1) * q(3) + p(2) * q(0) + p(3) * q(1),
            p(0) * q(3) + p(1) * q(2) - p(2) * q(1) + p(3) * q(0)};
}

Eigen::Vector4d quat_conj(const Eigen::Vector4d& p) { return {p(0), -p(1), -p(2), -p(3)}; }

// Octonion product via the Cayley-Dickson doubling (a,b)(c,d) = (ac - conj(d) b, d a + b conj(c)).
Eigen::Matrix<double, 8, 1> oct_mul(const Eigen::Matrix<double, 8, 1>& p,
                                    const Eigen::Matrix<double, 8, 1>& q) {
    const Eigen::Vector4d a = p.head<4>(), b = p.tail<4>();
    const Eigen::Vector4d c = q.head<4>(), d = q.tail<4>();
    Eigen::Matrix<double, 8, 1> out;
    out.head<4>() = quat_mul(a, c) - quat_mul(quat_conj(d), b);
    out.tail<4>() = quat_mul(d, a) + quat_mul(b, quat_conj(c));
    return out;
}

// Left multiplication by the imaginary unit e_t (t = 1..7) on R^8.
Mat oct_left_mul(int t) {
    Eigen::Matrix<double, 8, 1> u = Eigen::Matrix<double, 8, 1>::Zero();
    u(t) = 1.0;
    Mat l(8, 8);
    for (int s = 0; s < 8; ++s) {
        Eigen::Matrix<double, 8, 1> e = Eigen::Matrix<double, 8, 1>::Zero();
        e(s) = 1.0;
        l.col(s) = oct_mul(u, e);
    }
    return l;
}

Mat quat_left_i() {
    Mat l(4, 4);
    l << 0, -1, 0, 0, 1, 0, 0, 0, 0, 0, 0, -1, 0, 0, 1, 0;
    return l;
}

Mat quat_left_j() {
    Mat l(4, 4);
    l << 0, 0, -1, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, -1, 0, 0;
    return l;
}

Mat quat_left_k() {
    Mat l(4, 4);
    l << 0, 0, 0, -1, 0, 0, -1, 0, 0, 1, 0, 0, 1, 0, 0, 0;
    return l;
}

} // namespace

GeneralizedHeisenbergAlgebra::GeneralizedHeisenbergAlgebra(std::vector<Mat> j_maps, double tol)
    : j_maps_(std::move(j_maps)) {
    if (j_maps_.empty())
        throw DimensionMismatch("algebra needs at least one J-map");
    m_ = static_cast<int>(j_maps_.size());
    k_ = static_cast<int>(j_maps_.front().rows());
    if (k_ < 1)
        throw DimensionMismatch("J-maps must be nonempty square matrices");
    for (const Mat& j : j_maps_)
        if (j.rows() != k_ || j.cols() != k_)
            throw DimensionMismatch("all J-maps must be square of equal size");
    if (k_ <= m_)
        throw DimensionMismatch("dim v must exceed dim z (k > m)");
    for (int r = 0; r < m_; ++r) {
        const double skew_err = (j_maps_[r] + j_maps_[r].transpose()).cwiseAbs().maxCoeff();
        if (skew_err > tol)
            throw NotSkew("J_" + std::to_string(r + 1) + " deviates from skewness by " +
                          std::to_string(skew_err));
    }
    const Mat id = Mat::Identity(k_, k_);
    for (int r = 0; r < m_; ++r)
        for (int s = r; s < m_; ++s) {
            Mat anti = j_maps_[r] * j_maps_[s] + j_maps_[s] * j_maps_[r];
            if (r == s)
                anti += 2.0 * id;
            const double err = anti.cwiseAbs().maxCoeff();
            if (err > tol)
                throw CliffordViolation("pair (" + std::to_string(r + 1) + "," +
                                        std::to_string(s + 1) + ") violates the Clifford relation by " +
                                        std::to_string(err));
        }
    structure_.reserve(m_);
    for (int r = 0; r < m_; ++r)
        structure_.push_back(j_maps_[r].transpose()); // A(r,i,j) = <J_r e_i, e_j>
}

Mat GeneralizedHeisenbergAlgebra::j_of(const Vec& z) const {
    if (z.size() != m_)
        throw DimensionMismatch("center vector has wrong length");
    Mat j = Mat::Zero(k_, k_);
    for (int r = 0; r < m_; ++r)
        j += z(r) * j_maps_[r];
    return j;
}

Vec GeneralizedHeisenbergAlgebra::bracket_v(const Vec& v, const Vec& w) const {
    if (v.size() != k_ || w.size() != k_)
        throw DimensionMismatch("bracket_v operands have wrong length");
    Vec out(m_);
    for (int r = 0; r < m_; ++r)
        out(r) = (j_maps_[r] * v).dot(w);
    return out;
}

bool GeneralizedHeisenbergAlgebra::basis_aligned(double tol) const {
    if (k_ < m_ + 1)
        return false;
    for (int r = 0; r < m_; ++r) {
        Vec expect = Vec::Zero(k_);
        expect(r + 1) = 1.0;
        if ((j_maps_[r].col(0) - expect).cwiseAbs().maxCoeff() > tol)
            return false;
    }
    return true;
}

AlgebraFamily family_from_string(const std::string& name) {
    if (name == "heisenberg")
        return AlgebraFamily::heisenberg;
    if (name == "clifford2")
        return AlgebraFamily::clifford2;
    if (name == "quaternionic")
        return AlgebraFamily::quaternionic;
    if (name == "octonionic")
        return AlgebraFamily::octonionic;
    throw ConfigError("unknown algebra family '" + name + "'");
}

std::string family_to_string(AlgebraFamily family) {
    switch (family) {
    case AlgebraFamily::heisenberg: return "heisenberg";
    case AlgebraFamily::clifford2: return "clifford2";
    case AlgebraFamily::quaternionic: return "quaternionic";
    case AlgebraFamily::octonionic: return "octonionic";
    }
    throw ConfigError("invalid algebra family enum");
}

GeneralizedHeisenbergAlgebra build_algebra(std::vector<Mat> j_maps, double tol) {
    return GeneralizedHeisenbergAlgebra(std::move(j_maps), tol);
}

GeneralizedHeisenbergAlgebra catalog(AlgebraFamily family, int v_multiplicity) {
    if (v_multiplicity < 1)
        throw ConfigError("catalog multiplicity must be at least 1");
    const int n = v_multiplicity;
    std::vector<Mat> js;
    switch (family) {
    case AlgebraFamily::heisenberg: {
        Mat rot(2, 2);
        rot << 0, -1, 1, 0;
        js.push_back(blkdiag(rot, n));
        break;
    }
    case AlgebraFamily::clifford2:
        js.push_back(blkdiag(quat_left_i(), n));
        js.push_back(blkdiag(quat_left_j(), n));
        break;
    case AlgebraFamily::quaternionic:
        js.push_back(blkdiag(quat_left_i(), n));
        js.push_back(blkdiag(quat_left_j(), n));
        js.push_back(blkdiag(quat_left_k(), n));
        break;
    case AlgebraFamily::octonionic:
        for (int t = 1; t <= 7; ++t)
            js.push_back(blkdiag(oct_left_mul(t), n));
        break;
    }
    return build_algebra(std::move(js), 1e-12);
}

AdSplit kernel_ad(const GeneralizedHeisenbergAlgebra& alg, const Vec& v, double tol) {
    const int k = alg.dim_v();
    const int m = alg.dim_center();
    if (v.size() != k)
        throw DimensionMismatch("kernel_ad: vector has wrong length");
    if (std::abs(v.norm() - 1.0) > tol)
        throw NotUnit("kernel_ad expects a unit vector, got norm " + std::to_string(v.norm()));

    AdSplit split;
    split.j_image.resize(k, m);
    for (int r = 0; r < m; ++r)
        split.j_image.col(r) = alg.j_map(r) * v;

    // ad(v): W -> [v, W], an m x k map whose rows are (J_r v)^T.
    Mat ad = split.j_image.transpose();
    Eigen::JacobiSVD<Mat> svd(ad, Eigen::ComputeFullV);
    const double smax = svd.singularValues()(0);
    int rank = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > tol * smax)
            ++rank;
    if (rank != m)
        throw Error("kernel_ad: ad(v) has rank " + std::to_string(rank) + ", expected " +
                    std::to_string(m));
    split.kernel = svd.matrixV().rightCols(k - m);
    return split;
}

J2Result j2_condition(const GeneralizedHeisenbergAlgebra& alg, double tol) {
    const int k = alg.dim_v();
    const int m = alg.dim_center();
    J2Result res;
    // The J-maps are Frobenius-orthogonal with <J_r, J_r>_F = k, so the
    // least-squares projection of P onto their span has coefficients
    // trace(J_t^T P) / k.
    for (int r = 0; r < m; ++r)
        for (int s = r + 1; s < m; ++s) {
            const Mat p = alg.j_map(r) * alg.j_map(s);
            Mat resid = p;
            for (int t = 0; t < m; ++t) {
                const double c = (alg.j_map(t).transpose() * p).trace() / static_cast<double>(k);
                resid -= c * alg.j_map(t);
            }
            const double rel = resid.norm() / p.norm();
            if (rel > res.max_residual) {
                res.max_residual = rel;
                if (rel > tol)
                    res.witness = {r, s};
            }
        }
    res.holds = res.max_residual <= tol;
    if (res.holds)
        res.witness.reset();
    return res;
}

GeneralizedHeisenbergAlgebra align_basis(const GeneralizedHeisenbergAlgebra& alg, const Vec& v1,
                                         double tol) {
    const int k = alg.dim_v();
    const int m = alg.dim_center();
    Vec u = v1;
    const double nrm = u.norm();
    if (nrm < tol)
        throw NotUnit("align_basis: zero vector");
    u /= nrm;

    const AdSplit split = kernel_ad(alg, u, tol);
    Mat q(k, k);
    q.col(0) = u;
    q.middleCols(1, m) = split.j_image;
    if (k > m + 1) {
        // The kernel of ad(u) contains u; complete with its orthogonal
        // complement inside the kernel.
        Mat rest = (Mat::Identity(k, k) - u * u.transpose()) * split.kernel;
        Eigen::JacobiSVD<Mat> svd(rest, Eigen::ComputeThinU);
        const double smax = svd.singularValues()(0);
        int rank = 0;
        for (int i = 0; i < svd.singularValues().size(); ++i)
            if (svd.singularValues()(i) > tol * smax)
                ++rank;
        if (rank != k - m - 1)
            throw IllConditionedBasis("align_basis: kernel completion has rank " +
                                      std::to_string(rank));
        q.rightCols(k - m - 1) = svd.matrixU().leftCols(k - m - 1);
    }
    const double orth_err = (q.transpose() * q - Mat::Identity(k, k)).cwiseAbs().maxCoeff();
    if (orth_err > 1e-8)
        throw IllConditionedBasis("align_basis produced a non-orthogonal frame, error " +
                                  std::to_string(orth_err));

    std::vector<Mat> js;
    js.reserve(m);
    for (int r = 0; r < m; ++r)
        js.push_back(q.transpose() * alg.j_map(r) * q);
    return build_algebra(std::move(js), 1e-8);
}

} // namespace drg
