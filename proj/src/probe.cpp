#include "drg/probe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <atomic>
#include <mutex>
#include <thread>

#include "drg/rng.hpp"
#include "drg/spaceforms.hpp"

namespace drg {
namespace {

/// Coordinates carrying the polynomial part (everything but the exponential
/// coordinate), in chart order.
std::vector<int> poly_coords(const ProbeChart& chart) {
    std::vector<int> coords;
    for (int i = 0; i < chart.dim; ++i)
        if (i != chart.a_index) coords.push_back(i);
    return coords;
}

/// Value and derivative of the Legendre polynomial P_n at t.
std::pair<double, double> legendre(int n, double t) {
    double p0 = 1.0, d0 = 0.0;
    if (n == 0) return {p0, d0};
    double p1 = t, d1 = 1.0;
    for (int k = 1; k < n; ++k) {
        const double p2 = ((2 * k + 1) * t * p1 - k * p0) / (k + 1);
        const double d2 = d0 + (2 * k + 1) * p1;
        p0 = p1;
        d0 = d1;
        p1 = p2;
        d1 = d2;
    }
    return {p1, d1};
}

void collect_monomials(int nvars, int var, int remaining, std::vector<int>& current,
                       std::vector<std::vector<int>>& out) {
    if (var == nvars) {
        out.push_back(current);
        return;
    }
    for (int e = 0; e <= remaining; ++e) {
        current[static_cast<std::size_t>(var)] = e;
        collect_monomials(nvars, var + 1, remaining - e, current, out);
    }
    current[static_cast<std::size_t>(var)] = 0;
}

std::vector<std::vector<int>> monomials_up_to(int nvars, int degree) {
    std::vector<std::vector<int>> out;
    std::vector<int> current(static_cast<std::size_t>(nvars), 0);
    collect_monomials(nvars, 0, degree, current, out);
    auto total = [](const std::vector<int>& e) {
        int t = 0;
        for (int v : e) t += v;
        return t;
    };
    std::sort(out.begin(), out.end(), [&](const auto& a, const auto& b) {
        const int ta = total(a), tb = total(b);
        if (ta != tb) return ta < tb;
        return a < b;
    });
    return out;
}

/// Scalar factor of a basis element (box-scaled Legendre product times the
/// exponential profile) with its full gradient.
struct ScalarEval {
    double value = 0.0;
    Vec gradient;
};

ScalarEval scalar_eval(const ProbeChart& chart, const std::vector<int>& pc, const BasisElement& el,
                       const Vec& p) {
    const std::size_t nq = pc.size();
    std::vector<double> vals(nq), ders(nq);
    for (std::size_t q = 0; q < nq; ++q) {
        const double lo = chart.sample_lo(pc[q]);
        const double hi = chart.sample_hi(pc[q]);
        const double span = hi - lo;
        double t = 0.0, scale = 0.0;
        if (span > 0.0) {
            t = (2.0 * p(pc[q]) - lo - hi) / span;
            scale = 2.0 / span;
        }
        const auto [v, d] = legendre(el.degrees[q], t);
        vals[q] = v;
        ders[q] = d * scale;
    }
    double poly = 1.0;
    for (std::size_t q = 0; q < nq; ++q) poly *= vals[q];
    const double a = chart.a_index >= 0 ? p(chart.a_index) : 0.0;
    double e = 0.0, de = 0.0;
    for (const auto& [j, w] : el.exp_profile) {
        const double term = w * std::exp(0.5 * j * a);
        e += term;
        de += 0.5 * j * term;
    }
    ScalarEval out;
    out.value = poly * e;
    out.gradient = Vec::Zero(chart.dim);
    for (std::size_t q = 0; q < nq; ++q) {
        double prod = ders[q];
        for (std::size_t r = 0; r < nq; ++r)
            if (r != q) prod *= vals[r];
        out.gradient(pc[q]) = prod * e;
    }
    if (chart.a_index >= 0) out.gradient(chart.a_index) = poly * de;
    return out;
}

void validate_chart(const ProbeChart& chart) {
    if (chart.dim <= 0 || !chart.metric) throw ConfigError("probe chart missing dimension or metric");
    if (chart.a_index >= chart.dim)
        throw ConfigError("probe chart exponential coordinate out of range");
    if (chart.sample_lo.size() != chart.dim || chart.sample_hi.size() != chart.dim)
        throw ConfigError("probe chart sampling box has wrong dimension");
}

/// Symmetric inverse square root of the metric; throws SingularMetric when g
/// is not positive definite at p.
Mat inverse_sqrt(const Mat& g) {
    Eigen::SelfAdjointEigenSolver<Mat> eig(g);
    const Vec& lam = eig.eigenvalues();
    if (lam.minCoeff() <= 0.0) throw SingularMetric("metric not positive definite at a sample point");
    return eig.eigenvectors() * lam.cwiseSqrt().cwiseInverse().asDiagonal() *
           eig.eigenvectors().transpose();
}

struct SampleData {
    Mat g;
    Mat ginv;
    Mat e; // g^{-1/2}
    std::vector<Mat> dg;
};

SampleData sample_data(const ProbeChart& chart, const Vec& p, double h) {
    SampleData d;
    d.g = chart.metric(p);
    Eigen::SelfAdjointEigenSolver<Mat> eig(d.g);
    const Vec& lam = eig.eigenvalues();
    if (lam.minCoeff() <= 0.0) throw SingularMetric("metric not positive definite at a sample point");
    d.e = eig.eigenvectors() * lam.cwiseSqrt().cwiseInverse().asDiagonal() *
          eig.eigenvectors().transpose();
    d.ginv = eig.eigenvectors() * lam.cwiseInverse().asDiagonal() * eig.eigenvectors().transpose();
    d.dg.reserve(static_cast<std::size_t>(chart.dim));
    for (int mu = 0; mu < chart.dim; ++mu) d.dg.push_back(fd::partial(chart.metric, p, mu, h));
    return d;
}

std::vector<Vec> draw_points(const ProbeChart& chart, Rng& rng, int count) {
    std::vector<Vec> pts;
    pts.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        Vec p(chart.dim);
        for (int c = 0; c < chart.dim; ++c) p(c) = rng.uniform(chart.sample_lo(c), chart.sample_hi(c));
        pts.push_back(std::move(p));
    }
    return pts;
}

int nullspace_dimension(const Vec& singular_values, double rel_tol) {
    if (singular_values.size() == 0) return 0;
    const double cutoff = rel_tol * singular_values(0);
    int dim = 0;
    for (int i = 0; i < singular_values.size(); ++i)
        if (singular_values(i) <= cutoff) ++dim;
    return dim;
}

} // namespace

ProbeChart damek_ricci_chart(const DamekRicciSpace& space) {
    ProbeChart chart;
    chart.dim = space.dim();
    chart.metric = [space](const Vec& p) { return space.metric_at(p); };
    chart.a_index = space.dim() - 1;
    chart.sample_lo = Vec::Constant(chart.dim, -1.0);
    chart.sample_hi = Vec::Constant(chart.dim, 1.0);
    return chart;
}

ProbeChart euclidean_chart(int n) {
    if (n <= 0) throw ConfigError("euclidean chart needs positive dimension");
    ProbeChart chart;
    chart.dim = n;
    chart.metric = euclidean_metric(n);
    chart.sample_lo = Vec::Constant(n, -1.0);
    chart.sample_hi = Vec::Constant(n, 1.0);
    return chart;
}

ProbeChart half_plane_chart() {
    ProbeChart chart;
    chart.dim = 2;
    chart.metric = hyperbolic_metric(2);
    chart.sample_lo = Vec(2);
    chart.sample_hi = Vec(2);
    chart.sample_lo << -1.0, 0.5;
    chart.sample_hi << 1.0, 1.5;
    return chart;
}

std::vector<BasisElement> enumerate_basis(const ProbeChart& chart, const AnsatzSpec& ansatz) {
    validate_chart(chart);
    if (ansatz.degree < 0) throw ConfigError("ansatz degree must be nonnegative");
    if (chart.a_index < 0 && (ansatz.exp_min != 0 || ansatz.exp_max != 0))
        throw ConfigError("exponential grid requires a chart with an exponential coordinate");
    std::vector<int> components = ansatz.components;
    if (components.empty())
        for (int c = 0; c < chart.dim; ++c) components.push_back(c);
    for (int c : components)
        if (c < 0 || c >= chart.dim) throw ConfigError("ansatz component index out of range");

    // Orthonormalize the exponential grid in closed form against the uniform
    // measure on the box: Gram(l, k) = mean of e^{(j_l + j_k) a / 2} over
    // [lo_a, hi_a], Cholesky, then profiles = columns of L^{-T}.
    const int nexp = ansatz.exp_max - ansatz.exp_min + 1;
    if (nexp <= 0) throw ConfigError("ansatz basis is empty (exp_min > exp_max)");
    std::vector<std::vector<std::pair<int, double>>> profiles;
    if (chart.a_index < 0) {
        profiles.push_back({{0, 1.0}});
    } else {
        const double lo = chart.sample_lo(chart.a_index);
        const double hi = chart.sample_hi(chart.a_index);
        auto mean_exp = [&](double c) {
            if (c == 0.0) return 1.0;
            if (!(hi > lo)) return std::exp(c * lo);
            return (std::exp(c * hi) - std::exp(c * lo)) / (c * (hi - lo));
        };
        Mat gram(nexp, nexp);
        for (int l = 0; l < nexp; ++l)
            for (int k = 0; k < nexp; ++k)
                gram(l, k) = mean_exp(0.5 * (2 * ansatz.exp_min + l + k));
        Eigen::LLT<Mat> llt(gram);
        if (llt.info() != Eigen::Success)
            throw IllConditionedBasis("exponential grid could not be orthogonalized");
        const Mat w = llt.matrixL().transpose().solve(Mat::Identity(nexp, nexp));
        for (int l = 0; l < nexp; ++l) {
            std::vector<std::pair<int, double>> profile;
            for (int k = 0; k <= l; ++k) profile.push_back({ansatz.exp_min + k, w(k, l)});
            profiles.push_back(std::move(profile));
        }
    }

    const auto monos = monomials_up_to(static_cast<int>(poly_coords(chart).size()), ansatz.degree);
    std::vector<BasisElement> basis;
    for (int mu : components)
        for (const auto& profile : profiles)
            for (const auto& alpha : monos) basis.push_back({mu, profile, alpha});
    if (basis.empty()) throw ConfigError("ansatz basis is empty");
    return basis;
}

CoordinateVectorField basis_field(const ProbeChart& chart, const BasisElement& element) {
    validate_chart(chart);
    const auto pc = poly_coords(chart);
    if (element.degrees.size() != pc.size())
        throw DimensionMismatch("basis element degree vector length");
    CoordinateVectorField field;
    field.dim = chart.dim;
    field.value = [chart, pc, element](const Vec& p) {
        Vec v = Vec::Zero(chart.dim);
        v(element.component) = scalar_eval(chart, pc, element, p).value;
        return v;
    };
    field.jacobian = [chart, pc, element](const Vec& p) {
        Mat j = Mat::Zero(chart.dim, chart.dim);
        j.row(element.component) = scalar_eval(chart, pc, element, p).gradient.transpose();
        return j;
    };
    return field;
}

CoordinateVectorField combined_field(const ProbeChart& chart, const std::vector<BasisElement>& basis,
                                     const Vec& coeffs) {
    validate_chart(chart);
    if (coeffs.size() != static_cast<Eigen::Index>(basis.size()))
        throw DimensionMismatch("combined field coefficient count");
    const auto pc = poly_coords(chart);
    for (const auto& el : basis)
        if (el.degrees.size() != pc.size())
            throw DimensionMismatch("basis element degree vector length");
    CoordinateVectorField field;
    field.dim = chart.dim;
    field.value = [chart, pc, basis, coeffs](const Vec& p) {
        Vec v = Vec::Zero(chart.dim);
        for (std::size_t b = 0; b < basis.size(); ++b)
            v(basis[b].component) +=
                coeffs(static_cast<Eigen::Index>(b)) * scalar_eval(chart, pc, basis[b], p).value;
        return v;
    };
    field.jacobian = [chart, pc, basis, coeffs](const Vec& p) {
        Mat j = Mat::Zero(chart.dim, chart.dim);
        for (std::size_t b = 0; b < basis.size(); ++b)
            j.row(basis[b].component) += coeffs(static_cast<Eigen::Index>(b)) *
                                         scalar_eval(chart, pc, basis[b], p).gradient.transpose();
        return j;
    };
    return field;
}

DefectOperator assemble_defect_operator(const ProbeChart& chart, const AnsatzSpec& ansatz,
                                        const std::vector<Vec>& samples, double h, int workers) {
    DefectOperator op;
    op.basis = enumerate_basis(chart, ansatz);
    const int n = chart.dim;
    const int ncols = static_cast<int>(op.basis.size());
    const int per_sample = n * (n + 1) / 2;
    const int nsamples = static_cast<int>(samples.size());
    const int nrows = nsamples * per_sample;
    if (nrows < 2 * ncols)
        throw ConfigError("defect operator undersampled: " + std::to_string(nrows) + " rows for " +
                          std::to_string(ncols) + " columns (need oversampling factor >= 2)");
    for (const auto& p : samples)
        if (p.size() != n) throw DimensionMismatch("sample point dimension");

    const auto pc = poly_coords(chart);
    const double sqrt2 = std::sqrt(2.0);
    Mat raw(nrows, ncols);

    // Samples are processed in fixed-size tasks with per-task accumulators
    // reduced in task order afterwards, so every result is bitwise identical
    // for any worker count.
    constexpr int kTaskSize = 16;
    const int ntasks = (nsamples + kTaskSize - 1) / kTaskSize;
    std::vector<Mat> partial_gram(static_cast<std::size_t>(ntasks), Mat::Zero(ncols, ncols));
    std::vector<Vec> partial_norm(static_cast<std::size_t>(ntasks), Vec::Zero(ncols));
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::atomic<int> next_task{0};

    auto body = [&]() {
        try {
            Mat y = Mat::Zero(n, ncols);
            for (int t = next_task.fetch_add(1); t < ntasks; t = next_task.fetch_add(1)) {
                const int lo = t * kTaskSize;
                const int hi = std::min(nsamples, lo + kTaskSize);
                for (int s = lo; s < hi; ++s) {
                    const Vec& p = samples[static_cast<std::size_t>(s)];
                    const SampleData data = sample_data(chart, p, h);
                    y.setZero();
                    for (int b = 0; b < ncols; ++b) {
                        const BasisElement& el = op.basis[static_cast<std::size_t>(b)];
                        const ScalarEval se = scalar_eval(chart, pc, el, p);
                        const double sv = se.value;
                        const Vec& w = se.gradient;
                        // L_xi g for xi = s e_mu: s dg_mu + (grad s) g_mu. + g_.mu (grad s)^T
                        Mat lie = sv * data.dg[static_cast<std::size_t>(el.component)];
                        lie += w * data.g.row(el.component);
                        lie += data.g.col(el.component) * w.transpose();
                        const double trace = (data.ginv * lie).trace();
                        const Mat tf = data.e * (lie - (trace / n) * data.g) * data.e;
                        int row = s * per_sample;
                        for (int mu = 0; mu < n; ++mu)
                            for (int nu = mu; nu < n; ++nu)
                                raw(row++, b) = (mu == nu ? 1.0 : sqrt2) * tf(mu, nu);
                        y(el.component, b) = sv;
                    }
                    partial_gram[static_cast<std::size_t>(t)] += y.transpose() * data.g * y;
                    for (int b = 0; b < ncols; ++b) {
                        const int mu = op.basis[static_cast<std::size_t>(b)].component;
                        partial_norm[static_cast<std::size_t>(t)](b) +=
                            y(mu, b) * y(mu, b) * data.g(mu, mu);
                    }
                }
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    };
    const int nworkers = std::max(1, std::min(workers, ntasks));
    if (nworkers == 1) {
        body();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < nworkers; ++w) pool.emplace_back(body);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    Mat gram = Mat::Zero(ncols, ncols);
    Vec norm_sq = Vec::Zero(ncols);
    for (const auto& pg : partial_gram) gram += pg;
    for (const auto& pn : partial_norm) norm_sq += pn;

    op.column_scale = (norm_sq / nsamples).cwiseSqrt();
    for (int b = 0; b < ncols; ++b)
        if (!(op.column_scale(b) > 1e-14))
            throw IllConditionedBasis("basis field " + std::to_string(b) +
                                      " vanishes on the sample set");
    raw.array().rowwise() /= op.column_scale.transpose().array();
    gram /= nsamples;
    gram = op.column_scale.cwiseInverse().asDiagonal() * gram *
           op.column_scale.cwiseInverse().asDiagonal();
    Eigen::SelfAdjointEigenSolver<Mat> geig(gram);
    const double lam_min = geig.eigenvalues().minCoeff();
    const double lam_max = geig.eigenvalues().maxCoeff();
    op.gram_condition = lam_min > 0.0 ? lam_max / lam_min : std::numeric_limits<double>::infinity();
    if (!(op.gram_condition <= 1e8))
        throw IllConditionedBasis("basis Gram condition " + std::to_string(op.gram_condition) +
                                  " exceeds 1e8 on the sample set");
    op.matrix = std::move(raw);
    return op;
}

RigidityReport probe_rigidity(const ProbeChart& chart, const AnsatzSpec& ansatz, int samples,
                              int validation_points, const ProbeTolerances& tol, std::uint64_t seed,
                              int workers) {
    validate_chart(chart);
    if (samples <= 0 || validation_points <= 0)
        throw ConfigError("probe needs positive sample and validation counts");
    if (!(tol.svd > 0.0) || !(tol.rho > 0.0) || !(tol.defect > 0.0))
        throw ConfigError("probe tolerances must be positive");

    Rng rng(seed);
    const std::vector<Vec> all_samples = draw_points(chart, rng, 2 * samples);
    const std::vector<Vec> base(all_samples.begin(), all_samples.begin() + samples);
    const std::vector<Vec> validation = draw_points(chart, rng, validation_points);

    const DefectOperator op = assemble_defect_operator(chart, ansatz, base, fd::kDefaultStep, workers);
    Eigen::JacobiSVD<Mat> svd(op.matrix, Eigen::ComputeFullV);
    const int null_dim = nullspace_dimension(svd.singularValues(), tol.svd);

    const DefectOperator op2 =
        assemble_defect_operator(chart, ansatz, all_samples, fd::kDefaultStep, workers);
    Eigen::JacobiSVD<Mat> svd2(op2.matrix);
    const int null_dim2 = nullspace_dimension(svd2.singularValues(), tol.svd);
    if (null_dim != null_dim2)
        throw InconclusiveSampling("nullspace dimension changed when samples were doubled: " +
                                   std::to_string(null_dim) + " at " + std::to_string(samples) +
                                   " vs " + std::to_string(null_dim2) + " at " +
                                   std::to_string(2 * samples));

    RigidityReport report;
    report.samples = samples;
    report.validation_count = validation_points;
    report.basis_size = static_cast<int>(op.basis.size());
    report.gram_condition = op.gram_condition;
    report.singular_values = svd.singularValues();
    report.nullspace_dim = null_dim;

    const int ncols = static_cast<int>(op.basis.size());
    bool all_killing = null_dim > 0;
    bool conformal_witness = false;
    for (int f = 0; f < null_dim; ++f) {
        Vec raw = svd.matrixV().col(ncols - 1 - f).cwiseQuotient(op.column_scale);
        CoordinateVectorField cand = combined_field(chart, op.basis, raw);
        double sum_sq = 0.0;
        for (const Vec& p : validation) {
            const Vec v = cand.value(p);
            sum_sq += v.dot(chart.metric(p) * v);
        }
        const double rms = std::sqrt(sum_sq / validation_points);
        if (!(rms > 1e-12)) {
            all_killing = false;
            continue;
        }
        raw /= rms;
        cand = combined_field(chart, op.basis, raw);
        CandidateField entry;
        entry.coefficients = raw;
        for (const Vec& p : validation) {
            const ConformalDefect defect = conformal_defect(chart.metric, cand, p);
            entry.max_abs_rho = std::max(entry.max_abs_rho, std::abs(defect.rho));
            entry.max_tracefree = std::max(entry.max_tracefree, defect.tracefree_norm);
        }
        const bool conformal = entry.max_tracefree < tol.defect;
        if (!(conformal && entry.max_abs_rho < tol.rho)) all_killing = false;
        if (conformal && entry.max_abs_rho >= tol.rho) conformal_witness = true;
        report.fields.push_back(std::move(entry));
    }
    if (null_dim > 0 && all_killing)
        report.verdict = RigidityVerdict::rigid;
    else if (conformal_witness)
        report.verdict = RigidityVerdict::non_rigid;
    else
        report.verdict = RigidityVerdict::inconclusive;
    return report;
}

GeneratorBasis right_invariant_generators(const DamekRicciSpace& space) {
    GeneratorBasis basis;
    const int k = space.dim_v();
    const int m = space.dim_center();
    const int n = space.dim();
    const GeneralizedHeisenbergAlgebra alg = space.algebra();
    for (int i = 0; i < k; ++i) {
        CoordinateVectorField field;
        field.dim = n;
        field.value = [n, k, m, i, alg](const Vec& p) {
            Vec v = Vec::Zero(n);
            v(i) = 1.0;
            for (int r = 0; r < m; ++r) {
                double corr = 0.0;
                for (int j = 0; j < k; ++j) corr += alg.structure(r, i, j) * p(j);
                v(k + r) = 0.5 * corr;
            }
            return v;
        };
        field.jacobian = [n, k, m, i, alg](const Vec&) {
            Mat jac = Mat::Zero(n, n);
            for (int r = 0; r < m; ++r)
                for (int j = 0; j < k; ++j) jac(k + r, j) = 0.5 * alg.structure(r, i, j);
            return jac;
        };
        basis.fields.push_back(std::move(field));
        basis.names.push_back("V" + std::to_string(i + 1));
    }
    for (int r = 0; r < m; ++r) {
        CoordinateVectorField field;
        field.dim = n;
        field.value = [n, k, r](const Vec&) {
            Vec v = Vec::Zero(n);
            v(k + r) = 1.0;
            return v;
        };
        field.jacobian = [n](const Vec&) { return Mat::Zero(n, n); };
        basis.fields.push_back(std::move(field));
        basis.names.push_back("Z" + std::to_string(r + 1));
    }
    {
        CoordinateVectorField field;
        field.dim = n;
        field.value = [n, k, m](const Vec& p) {
            Vec v(n);
            for (int i = 0; i < k; ++i) v(i) = 0.5 * p(i);
            for (int r = 0; r < m; ++r) v(k + r) = p(k + r);
            v(n - 1) = 1.0;
            return v;
        };
        field.jacobian = [n, k, m](const Vec&) {
            Mat jac = Mat::Zero(n, n);
            for (int i = 0; i < k; ++i) jac(i, i) = 0.5;
            for (int r = 0; r < m; ++r) jac(k + r, k + r) = 1.0;
            return jac;
        };
        basis.fields.push_back(std::move(field));
        basis.names.push_back("A");
    }
    return basis;
}

KillingMatch match_killing(const DamekRicciSpace& space, const CoordinateVectorField& field,
                           int points, std::uint64_t seed) {
    if (points <= 0) throw ConfigError("match_killing needs a positive point count");
    if (field.dim != space.dim()) throw DimensionMismatch("field dimension vs space dimension");
    const GeneratorBasis gens = right_invariant_generators(space);
    const int n = space.dim();
    const int ngen = static_cast<int>(gens.fields.size());

    Rng rng(seed);
    Mat design(points * n, ngen);
    Vec target(points * n);
    for (int s = 0; s < points; ++s) {
        const Vec p = rng.uniform_vec(n, -1.0, 1.0);
        const auto lu = space.frame_at(p).partialPivLu();
        target.segment(s * n, n) = lu.solve(field.value(p));
        for (int c = 0; c < ngen; ++c)
            design.col(c).segment(s * n, n) = lu.solve(gens.fields[static_cast<std::size_t>(c)].value(p));
    }
    const double target_norm = target.norm();
    if (!(target_norm > 1e-12 * std::sqrt(static_cast<double>(points * n))))
        throw ConfigError("match_killing: field is numerically zero on the sample set");

    KillingMatch match;
    const Vec origin = Vec::Zero(n);
    match.frame_coefficients = space.frame_at(origin).partialPivLu().solve(field.value(origin));
    match.generator_coefficients = design.colPivHouseholderQr().solve(target);
    match.combination_residual =
        (design * match.generator_coefficients - target).norm() / target_norm;
    match.best_residual = std::numeric_limits<double>::infinity();
    for (int c = 0; c < ngen; ++c) {
        const double col_norm = design.col(c).norm();
        const double cosine = col_norm > 0.0 ? design.col(c).dot(target) / (col_norm * target_norm) : 0.0;
        const double residual = std::sqrt(std::max(0.0, 1.0 - cosine * cosine));
        if (residual < match.best_residual) {
            match.best_residual = residual;
            match.best_generator = gens.names[static_cast<std::size_t>(c)];
        }
    }
    match.killing_like = match.combination_residual < 1e-5;
    return match;
}

double fit_half_plane_potential(const std::vector<Vec>& points, const Vec& rho_values, Vec* params) {
    const int npts = static_cast<int>(points.size());
    if (npts < 3) throw ConfigError("potential fit needs at least 3 points");
    if (rho_values.size() != npts) throw DimensionMismatch("potential fit value count");
    Mat design(npts, 3);
    for (int i = 0; i < npts; ++i) {
        const Vec& p = points[static_cast<std::size_t>(i)];
        if (p.size() != 2) throw DimensionMismatch("potential fit points must be planar");
        const double x = p(0), y = p(1);
        if (!(y > 0.0)) throw NonPositiveY("potential fit point with y <= 0");
        design(i, 0) = -1.0 / y;
        design(i, 1) = -x / y;
        design(i, 2) = -(x * x + y * y) / y;
    }
    const Vec beta = design.colPivHouseholderQr().solve(rho_values);
    if (params) *params = beta;
    return (design * beta - rho_values).cwiseAbs().maxCoeff();
}

} // namespace drg
