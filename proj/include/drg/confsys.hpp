#ifndef DRG_CONFSYS_HPP
#define DRG_CONFSYS_HPP

#include <array>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "drg/fd.hpp"
#include "drg/polynomial.hpp"
#include "drg/space.hpp"
#include "drg/tensor.hpp"

namespace drg {

/// Frame components of a vector field along the distinguished 4-dimensional
/// subframe (V1, V2 = J_{Z1}V1, Z1, A): f1, f2, f3, f4 as functions of the
/// full coordinate tuple. rho optionally carries the candidate potential.
struct S0FieldData {
    ScalarFn f1;
    ScalarFn f2;
    ScalarFn f3;
    ScalarFn f4;
    ScalarFn rho; // may be empty
};

/// Extract the four subframe components (and nothing else) of a coordinate
/// vector field: f_i(p) = i-th coefficient of xi(p) in the left-invariant
/// frame, picked at the subframe columns.
S0FieldData s0_components(const DamekRicciSpace& space, const CoordinateVectorField& field);

/// Truncated expansion of (e^a f3, e^a f4) into harmonic polynomials of
/// (z, w = e^a): for each degree m, the pair C1[m-1], C2[m-1] multiplies
/// Re/Im of (z + iw)^m; C3 and C4 are the degree-zero additions entering f3
/// and f4 respectively. All coefficient functions are polynomials in the
/// reduced variables n0 = (x, y, v_3..v_k, z_2..z_m); c5, when present, is a
/// polynomial in (z, n0) used by the coefficient system (variable 0 = z).
/// The series may be centered away from the origin via (alpha, beta),
/// replacing z + iw by (z - alpha) + i(w - beta).
struct HarmonicExpansion {
    int truncation = 0; // M
    int dim_v = 0;      // k of the underlying space
    int dim_center = 0; // m of the underlying space
    double alpha = 0.0;
    double beta = 0.0;
    std::vector<Polynomial> c1; // size M, entry j is C1^[j+1]
    std::vector<Polynomial> c2; // size M, entry j is C2^[j+1]
    Polynomial c3;
    Polynomial c4;
    std::optional<PolyT<double>> c5;

    int reduced_vars() const { return dim_v + dim_center - 1; }
};

/// An empty expansion (all coefficient polynomials zero) for a space of the
/// given dimensions.
HarmonicExpansion empty_expansion(int truncation, int dim_v, int dim_center);

/// The reduced variable tuple n0(p) = (x, y, v_3..v_k, z_2..z_m): the full
/// coordinate point with z_1 and a removed.
Vec reduced_point(int dim_v, int dim_center, const Vec& p);

/// D_x f at p: the derivation d/dx - (1/2) sum_{r=2..m} v_{r+1} d/dz_r.
/// Requires the aligned basis convention V2 = J_{Z1}V1 (the operators below
/// presume the (V1, V2, Z1, A) subframe).
double dx_apply(const DamekRicciSpace& space, const ScalarFn& f, const Vec& p,
                double h = fd::kDefaultStep);

/// D_y f at p: the derivation d/dy - (1/2) sum_{r=2..m} (sum_j A^r_{2j} v_j) d/dz_r,
/// read off from the frame formula for V2 (the published display of D_y has a
/// duplicated summation index, so the frame formula is the source of truth).
double dy_apply(const DamekRicciSpace& space, const ScalarFn& f, const Vec& p,
                double h = fd::kDefaultStep);

/// Residuals of the three 2x2 block equations (the s0-block of
/// L_xi g = 2 rho g in the frame (V1, V2, Z1, A)):
///   block(1,1):  diag(-f4,-f4) + [[2Vf1, Vf2+JVf1],[sym, 2JVf2]] - 2 rho I
///   block(2,1):  [[f2,-f1],[f1/2,f2/2]] + [[Vf3+Zf1, JVf3+Zf2],[Vf4+Af1, JVf4+Af2]]
///   block(2,2):  [[-2f4,f3],[f3,0]] + [[2Zf3, Zf4+Af3],[sym, 2Af4]] - 2 rho I
/// with V = V1, JV = V2 = J_{Z1}V1, Z = Z1 applied as differential operators.
struct BlockResiduals {
    Eigen::Matrix2d eq11;
    Eigen::Matrix2d eq21;
    Eigen::Matrix2d eq22;
    double max_abs() const;
};
BlockResiduals block_residuals(const DamekRicciSpace& space, const S0FieldData& data,
                               const ScalarFn& rho, const Vec& p, double h = fd::kDefaultStep);

/// The candidate potential rho = df4/da at p (FD derivative along the last
/// coordinate).
double potential_from_f4(const S0FieldData& data, const Vec& p, double h = fd::kDefaultStep);

/// Functions of (z, w, n0) used for Cauchy-Riemann checks on F_i = e^a f_i.
using ZWFn = std::function<double(double z, double w, const Vec& n0)>;

/// Cauchy-Riemann residuals of the pair (F3, F4) in the variable z + iw:
/// r1 = dF3/dz - dF4/dw, r2 = dF3/dw + dF4/dz. Requires w > 0 (w = e^a).
std::pair<double, double> cauchy_riemann_residual(const ZWFn& f3, const ZWFn& f4, double z,
                                                  double w, const Vec& n0,
                                                  double h = fd::kDefaultStep);

/// Degree-m harmonic pair: the trigonometric-binomial evaluation of
///   F3 = sum_k C(m,k) z^{m-k} w^k (c1 cos(pi k/2) - c2 sin(pi k/2))
///   F4 = sum_k C(m,k) z^{m-k} w^k (c1 sin(pi k/2) + c2 cos(pi k/2)),
/// which equals (Re, Im) of (c1 + i c2)(z + iw)^m.
std::pair<double, double> harmonic_component(int m, double c1, double c2, double z, double w);

/// Evaluate (f3, f4) of the truncated expansion at a full coordinate point:
/// f_i = e^{-a} (sum_m F_i^[m](z - alpha, w - beta) + C_{2+i}(n0)) with w = e^a.
std::pair<double, double> assemble_f3_f4(const HarmonicExpansion& exp, const Vec& p);

/// Residuals of the seven scalar component equations at p, in display order:
///   [0] (11-(1,1)): (D_x - (y/2) d_z) f1 - e^{-a} d_a(e^{a/2} f4)
///   [1] (11-(2,1)): (D_y + (x/2) d_z) f1 + (D_x - (y/2) d_z) f2
///   [2] (11-(2,2)): (D_y + (x/2) d_z) f2 - e^{-a} d_a(e^{a/2} f4)
///   [3] (12-(1,1)): e^a d_z f1 + e^{a/2} (D_x - (y/2) d_z) f3 + f2
///   [4] (12-(1,2)): e^a d_z f2 + e^{a/2} (D_y + (x/2) d_z) f3 - f1
///   [5] (12-(2,1)): e^a (D_x - (y/2) d_z) f4 + d_a(e^{a/2} f1)
///   [6] (12-(2,2)): e^a (D_y + (x/2) d_z) f4 + d_a(e^{a/2} f2)
std::array<double, 7> subsystem_residuals(const DamekRicciSpace& space, const S0FieldData& data,
                                          const Vec& p, double h = fd::kDefaultStep);

} // namespace drg

#endif
