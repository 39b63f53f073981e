#ifndef DRG_SPACE_HPP
#define DRG_SPACE_HPP

#include "drg/algebra.hpp"

namespace drg {

/// Solvable extension s = v + z + R A of a generalized Heisenberg algebra,
/// with brackets [A, V] = V/2, [A, Z] = Z and the nilpotent bracket on v.
/// Realized as the simply connected group S with global coordinates
/// x = (v_1..v_k, z_1..z_m, a); the left-invariant orthonormal frame in
/// these coordinates is
///   V_i = e^{a/2} d/dv_i - (e^{a/2}/2) sum_r (sum_j A(r,i,j) v_j) d/dz_r,
///   Z_r = e^a d/dz_r,   A = d/da.
class DamekRicciSpace {
public:
    explicit DamekRicciSpace(GeneralizedHeisenbergAlgebra algebra);

    const GeneralizedHeisenbergAlgebra& algebra() const { return algebra_; }
    int dim_v() const { return algebra_.dim_v(); }
    int dim_center() const { return algebra_.dim_center(); }
    int dim() const { return algebra_.dim() + 1; }

    /// Columns are the coordinate components of V_1..V_k, Z_1..Z_m, A at x.
    /// Throws NonFinitePoint for bad input and Overflow for |a| > 40.
    Mat frame_at(const Vec& x) const;

    /// Riemannian metric making the frame orthonormal: g = F^{-T} F^{-1}.
    Mat metric_at(const Vec& x) const;

    /// Columns V_1, V_2 (= J_1 V_1), Z_1, A of the frame at x: the totally
    /// geodesic slice spanned by {V, J_Z V, Z, A}. Requires an aligned basis.
    Mat s0_subframe(const Vec& x) const;

    /// Lie bracket on s; arguments and result are frame coordinates
    /// (v-part, z-part, A-part).
    Vec bracket(const Vec& lhs, const Vec& rhs) const;

    /// det frame_at = e^{(k/2 + m) a}, exposed for diagnostics.
    double frame_determinant(const Vec& x) const;

private:
    void validate_point(const Vec& x) const;

    GeneralizedHeisenbergAlgebra algebra_;
};

DamekRicciSpace extend_solvable(GeneralizedHeisenbergAlgebra algebra);

} // namespace drg

#endif
