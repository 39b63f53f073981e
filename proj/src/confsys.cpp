#include "drg/confsys.hpp"

#include <cmath>

#include "drg/errors.hpp"

namespace drg {

namespace {

// Exact values of cos(pi k/2) and sin(pi k/2) by residue of k mod 4.
constexpr std::array<int, 4> kCosTable = {1, 0, -1, 0};
constexpr std::array<int, 4> kSinTable = {0, 1, 0, -1};

void require_aligned(const DamekRicciSpace& space, const char* what) {
    if (!space.algebra().basis_aligned())
        throw BasisNotAligned(std::string(what) + " needs the V2 = J_{Z1}V1 convention");
}

// D_x f computed from a full coordinate gradient g of f at p.
double dx_from_gradient(const DamekRicciSpace& space, const Vec& p, const Vec& g) {
    const int k = space.dim_v();
    const int m = space.dim_center();
    double out = g(0);
    for (int r = 2; r <= m; ++r)
        out -= 0.5 * p(r) * g(k + r - 1); // v_{r+1} d/dz_r
    return out;
}

// D_y f from a gradient; the z_r coefficients come from the second row of the
// structure tensor, matching the frame formula for V2.
double dy_from_gradient(const DamekRicciSpace& space, const Vec& p, const Vec& g) {
    const int k = space.dim_v();
    const int m = space.dim_center();
    const auto& alg = space.algebra();
    double out = g(1);
    for (int r = 2; r <= m; ++r) {
        double coeff = 0.0;
        for (int j = 1; j <= k; ++j)
            coeff += alg.structure(r - 1, 1, j - 1) * p(j - 1);
        out -= 0.5 * coeff * g(k + r - 1);
    }
    return out;
}

double binom_real(int n, int j) {
    double out = 1.0;
    for (int i = 1; i <= j; ++i)
        out = out * static_cast<double>(n - j + i) / static_cast<double>(i);
    return out;
}

} // namespace

S0FieldData s0_components(const DamekRicciSpace& space, const CoordinateVectorField& field) {
    require_aligned(space, "s0_components");
    if (field.dim != space.dim())
        throw DimensionMismatch("field dimension does not match the space");
    const int k = space.dim_v();
    const int n = space.dim();
    auto component = [&space, &field, n](const Vec& p, int index) {
        const Mat frame = space.frame_at(p);
        const Vec coeffs = frame.partialPivLu().solve(field.value(p));
        if (!coeffs.allFinite())
            throw NonFinite("frame components of the probed field");
        return coeffs(index);
    };
    S0FieldData data;
    data.f1 = [component](const Vec& p) { return component(p, 0); };
    data.f2 = [component](const Vec& p) { return component(p, 1); };
    data.f3 = [component, k](const Vec& p) { return component(p, k); };
    data.f4 = [component, n](const Vec& p) { return component(p, n - 1); };
    return data;
}

HarmonicExpansion empty_expansion(int truncation, int dim_v, int dim_center) {
    if (truncation < 0 || dim_v < 1 || dim_center < 1)
        throw DimensionMismatch("invalid harmonic expansion shape");
    HarmonicExpansion exp;
    exp.truncation = truncation;
    exp.dim_v = dim_v;
    exp.dim_center = dim_center;
    const int nv = exp.reduced_vars();
    exp.c1.assign(static_cast<std::size_t>(truncation), Polynomial(nv));
    exp.c2.assign(static_cast<std::size_t>(truncation), Polynomial(nv));
    exp.c3 = Polynomial(nv);
    exp.c4 = Polynomial(nv);
    return exp;
}

Vec reduced_point(int dim_v, int dim_center, const Vec& p) {
    const int n = dim_v + dim_center + 1;
    if (p.size() != n)
        throw DimensionMismatch("point length does not match the space dimension");
    Vec out(n - 2);
    out.head(dim_v) = p.head(dim_v);                          // x, y, v_3..v_k
    out.tail(dim_center - 1) = p.segment(dim_v + 1, dim_center - 1); // z_2..z_m
    return out;
}

double dx_apply(const DamekRicciSpace& space, const ScalarFn& f, const Vec& p, double h) {
    require_aligned(space, "dx_apply");
    const int k = space.dim_v();
    const int m = space.dim_center();
    double out = fd::partial(f, p, 0, h);
    for (int r = 2; r <= m; ++r)
        out -= 0.5 * p(r) * fd::partial(f, p, k + r - 1, h);
    return out;
}

double dy_apply(const DamekRicciSpace& space, const ScalarFn& f, const Vec& p, double h) {
    require_aligned(space, "dy_apply");
    const int k = space.dim_v();
    const int m = space.dim_center();
    const auto& alg = space.algebra();
    double out = fd::partial(f, p, 1, h);
    for (int r = 2; r <= m; ++r) {
        double coeff = 0.0;
        for (int j = 1; j <= k; ++j)
            coeff += alg.structure(r - 1, 1, j - 1) * p(j - 1);
        out -= 0.5 * coeff * fd::partial(f, p, k + r - 1, h);
    }
    return out;
}

double BlockResiduals::max_abs() const {
    return std::max({eq11.cwiseAbs().maxCoeff(), eq21.cwiseAbs().maxCoeff(),
                     eq22.cwiseAbs().maxCoeff()});
}

BlockResiduals block_residuals(const DamekRicciSpace& space, const S0FieldData& data,
                               const ScalarFn& rho, const Vec& p, double h) {
    require_aligned(space, "block_residuals");
    const int k = space.dim_v();
    const int n = space.dim();
    const Mat frame = space.frame_at(p);
    const Vec dirV = frame.col(0);
    const Vec dirJ = frame.col(1);
    const Vec dirZ = frame.col(k);
    const Vec dirA = frame.col(n - 1);

    const double f1 = data.f1(p), f2 = data.f2(p), f3 = data.f3(p), f4 = data.f4(p);
    const double r = rho ? rho(p) : 0.0;
    const Vec g1 = fd::gradient(data.f1, p, h);
    const Vec g2 = fd::gradient(data.f2, p, h);
    const Vec g3 = fd::gradient(data.f3, p, h);
    const Vec g4 = fd::gradient(data.f4, p, h);

    auto along = [](const Vec& g, const Vec& dir) { return g.dot(dir); };

    BlockResiduals out;
    out.eq11(0, 0) = -f4 + 2.0 * along(g1, dirV) - 2.0 * r;
    out.eq11(0, 1) = along(g2, dirV) + along(g1, dirJ);
    out.eq11(1, 0) = out.eq11(0, 1);
    out.eq11(1, 1) = -f4 + 2.0 * along(g2, dirJ) - 2.0 * r;

    out.eq21(0, 0) = f2 + along(g3, dirV) + along(g1, dirZ);
    out.eq21(0, 1) = -f1 + along(g3, dirJ) + along(g2, dirZ);
    out.eq21(1, 0) = 0.5 * f1 + along(g4, dirV) + along(g1, dirA);
    out.eq21(1, 1) = 0.5 * f2 + along(g4, dirJ) + along(g2, dirA);

    out.eq22(0, 0) = -2.0 * f4 + 2.0 * along(g3, dirZ) - 2.0 * r;
    out.eq22(0, 1) = f3 + along(g4, dirZ) + along(g3, dirA);
    out.eq22(1, 0) = out.eq22(0, 1);
    out.eq22(1, 1) = 2.0 * along(g4, dirA) - 2.0 * r;

    if (!out.eq11.allFinite() || !out.eq21.allFinite() || !out.eq22.allFinite())
        throw NonFinite("block residual evaluation");
    return out;
}

double potential_from_f4(const S0FieldData& data, const Vec& p, double h) {
    return fd::partial(data.f4, p, static_cast<int>(p.size()) - 1, h);
}

std::pair<double, double> cauchy_riemann_residual(const ZWFn& f3, const ZWFn& f4, double z,
                                                  double w, const Vec& n0, double h) {
    if (!(w > 0.0))
        throw NonPositiveW("Cauchy-Riemann residual needs w = e^a > 0");
    // Keep all stencil points strictly inside {w > 0}; richardson/central4
    // evaluates at offsets up to 1.5 h.
    const double hw = std::min(h, w / 8.0);
    ScalarFn g3 = [&f3, &n0](const Vec& q) { return f3(q(0), q(1), n0); };
    ScalarFn g4 = [&f4, &n0](const Vec& q) { return f4(q(0), q(1), n0); };
    Vec q(2);
    q << z, w;
    const double d3z = fd::partial(g3, q, 0, h);
    const double d3w = fd::partial(g3, q, 1, hw);
    const double d4z = fd::partial(g4, q, 0, h);
    const double d4w = fd::partial(g4, q, 1, hw);
    return {d3z - d4w, d3w + d4z};
}

std::pair<double, double> harmonic_component(int m, double c1, double c2, double z, double w) {
    if (m < 0)
        throw DimensionMismatch("harmonic component degree must be nonnegative");
    double f3 = 0.0, f4 = 0.0;
    for (int k = 0; k <= m; ++k) {
        const double base = binom_real(m, k) * std::pow(z, m - k) * std::pow(w, k);
        const int ck = kCosTable[static_cast<std::size_t>(k % 4)];
        const int sk = kSinTable[static_cast<std::size_t>(k % 4)];
        f3 += base * (c1 * ck - c2 * sk);
        f4 += base * (c1 * sk + c2 * ck);
    }
    return {f3, f4};
}

std::pair<double, double> assemble_f3_f4(const HarmonicExpansion& exp, const Vec& p) {
    if (static_cast<int>(exp.c1.size()) != exp.truncation ||
        static_cast<int>(exp.c2.size()) != exp.truncation)
        throw DimensionMismatch("harmonic expansion coefficient count does not match truncation");
    const Vec n0 = reduced_point(exp.dim_v, exp.dim_center, p);
    const double a = p(p.size() - 1);
    if (!(std::abs(a) <= 40.0))
        throw Overflow("harmonic expansion evaluated at |a| > 40");
    const double w = std::exp(a);
    const double z = p(exp.dim_v);
    const double zz = z - exp.alpha;
    const double ww = w - exp.beta;
    double sum3 = exp.c3.eval(n0);
    double sum4 = exp.c4.eval(n0);
    for (int m = 1; m <= exp.truncation; ++m) {
        const auto [f3m, f4m] = harmonic_component(m, exp.c1[static_cast<std::size_t>(m - 1)].eval(n0),
                                                   exp.c2[static_cast<std::size_t>(m - 1)].eval(n0),
                                                   zz, ww);
        sum3 += f3m;
        sum4 += f4m;
    }
    const double decay = std::exp(-a);
    const double f3 = decay * sum3;
    const double f4 = decay * sum4;
    if (!std::isfinite(f3) || !std::isfinite(f4))
        throw NonFinite("harmonic expansion evaluation");
    return {f3, f4};
}

std::array<double, 7> subsystem_residuals(const DamekRicciSpace& space, const S0FieldData& data,
                                          const Vec& p, double h) {
    require_aligned(space, "subsystem_residuals");
    const int k = space.dim_v();
    const int n = space.dim();
    const double x = p(0);
    const double y = p(1);
    const double a = p(n - 1);
    const double ea = std::exp(a);
    const double eh = std::exp(0.5 * a);

    const double f1 = data.f1(p), f2 = data.f2(p), f3 = data.f3(p), f4 = data.f4(p);
    const Vec g1 = fd::gradient(data.f1, p, h);
    const Vec g2 = fd::gradient(data.f2, p, h);
    const Vec g3 = fd::gradient(data.f3, p, h);
    const Vec g4 = fd::gradient(data.f4, p, h);

    auto lx = [&](const Vec& g) { return dx_from_gradient(space, p, g) - 0.5 * y * g(k); };
    auto ly = [&](const Vec& g) { return dy_from_gradient(space, p, g) + 0.5 * x * g(k); };

    const double da4 = eh * (g4(n - 1) + 0.5 * f4); // d_a(e^{a/2} f4)

    std::array<double, 7> out{};
    out[0] = lx(g1) - da4 / ea;
    out[1] = ly(g1) + lx(g2);
    out[2] = ly(g2) - da4 / ea;
    out[3] = ea * g1(k) + eh * lx(g3) + f2;
    out[4] = ea * g2(k) + eh * ly(g3) - f1;
    out[5] = ea * lx(g4) + eh * (g1(n - 1) + 0.5 * f1);
    out[6] = ea * ly(g4) + eh * (g2(n - 1) + 0.5 * f2);
    for (double v : out)
        if (!std::isfinite(v))
            throw NonFinite("subsystem residual evaluation");
    return out;
}

} // namespace drg
