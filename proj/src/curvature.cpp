#include "drg/curvature.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace drg {

std::vector<Mat> christoffel_at(const MatrixFn& metric, const Vec& p, double h) {
    const int n = static_cast<int>(p.size());
    const Mat g = metric(p);
    Eigen::FullPivLU<Mat> lu(g);
    if (!lu.isInvertible())
        throw SingularMetric("metric not invertible in christoffel_at");
    const Mat ginv = lu.inverse();

    std::vector<Mat> dg(n);
    for (int l = 0; l < n; ++l)
        dg[l] = fd::partial(metric, p, l, h);

    std::vector<Mat> gamma(n, Mat::Zero(n, n));
    for (int l = 0; l < n; ++l)
        for (int mu = 0; mu < n; ++mu)
            for (int nu = mu; nu < n; ++nu) {
                double acc = 0.0;
                for (int s = 0; s < n; ++s)
                    acc += ginv(l, s) * (dg[mu](s, nu) + dg[nu](s, mu) - dg[s](mu, nu));
                gamma[l](mu, nu) = 0.5 * acc;
                gamma[l](nu, mu) = gamma[l](mu, nu);
            }
    return gamma;
}

Mat ricci_at(const MatrixFn& metric, const Vec& p, double h) {
    const int n = static_cast<int>(p.size());
    // Flatten Gamma^s_{mu nu} into a (n*n) x n matrix so one fd::partial per
    // coordinate differentiates the whole symbol.
    MatrixFn christ_flat = [&, h](const Vec& q) -> Mat {
        const std::vector<Mat> gma = christoffel_at(metric, q, h);
        Mat flat(n * n, n);
        for (int s = 0; s < n; ++s)
            for (int mu = 0; mu < n; ++mu)
                for (int nu = 0; nu < n; ++nu)
                    flat(s * n + mu, nu) = gma[s](mu, nu);
        return flat;
    };
    const double outer = 1e-2 * std::sqrt(h / fd::kDefaultStep);
    std::vector<Mat> dgamma(n); // dgamma[l] = d_l of the flattened symbol
    for (int l = 0; l < n; ++l)
        dgamma[l] = fd::partial(christ_flat, p, l, outer);

    const std::vector<Mat> gamma = christoffel_at(metric, p, h);
    auto dG = [&](int l, int s, int mu, int nu) { return dgamma[l](s * n + mu, nu); };

    Mat ric(n, n);
    for (int mu = 0; mu < n; ++mu)
        for (int nu = 0; nu < n; ++nu) {
            double acc = 0.0;
            for (int l = 0; l < n; ++l) {
                acc += dG(l, l, mu, nu) - dG(nu, l, mu, l);
                for (int s = 0; s < n; ++s)
                    acc += gamma[l](l, s) * gamma[s](mu, nu) - gamma[l](nu, s) * gamma[s](mu, l);
            }
            ric(mu, nu) = acc;
        }
    return ric;
}

EinsteinCheck einstein_check(const MatrixFn& metric, const std::vector<Vec>& points, double h) {
    EinsteinCheck out;
    if (points.empty())
        return out;
    double lo = 0.0, hi = 0.0, sum = 0.0;
    bool first = true;
    for (const Vec& p : points) {
        const int n = static_cast<int>(p.size());
        const Mat g = metric(p);
        const Mat ric = ricci_at(metric, p, h);
        Eigen::FullPivLU<Mat> lu(g);
        if (!lu.isInvertible())
            throw SingularMetric("metric not invertible in einstein_check");
        const double lambda = lu.solve(ric).trace() / n;
        out.max_dev = std::max(out.max_dev, (ric - lambda * g).norm());
        sum += lambda;
        lo = first ? lambda : std::min(lo, lambda);
        hi = first ? lambda : std::max(hi, lambda);
        first = false;
    }
    out.lambda = sum / static_cast<double>(points.size());
    out.lambda_spread = hi - lo;
    return out;
}

} // namespace drg
