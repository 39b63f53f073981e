#ifndef DRG_ALGEBRA_HPP
#define DRG_ALGEBRA_HPP

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "drg/errors.hpp"

namespace drg {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Two-step nilpotent algebra v + z with an inner product, where the center
/// z acts on v through skew maps J_r satisfying the Clifford relations
///   J_r J_s + J_s J_r = -2 delta_rs Id.
/// The structure tensor A(r,i,j) = <J_r V_i, V_j> gives the bracket
/// [V_i, V_j] = sum_r A(r,i,j) Z_r.
class GeneralizedHeisenbergAlgebra {
public:
    /// Validates the J-map data and precomputes the structure tensor.
    /// Throws DimensionMismatch, NotSkew or CliffordViolation.
    GeneralizedHeisenbergAlgebra(std::vector<Mat> j_maps, double tol);

    int dim_v() const { return k_; }
    int dim_center() const { return m_; }
    int dim() const { return k_ + m_; }

    const Mat& j_map(int r) const { return j_maps_.at(r); }
    const std::vector<Mat>& j_maps() const { return j_maps_; }

    /// A(r,i,j) = <J_r V_i, V_j>.
    double structure(int r, int i, int j) const { return structure_[r](i, j); }
    const Mat& structure_slice(int r) const { return structure_.at(r); }

    /// J_Z for an arbitrary center vector Z (length m).
    Mat j_of(const Vec& z) const;

    /// [V, W] as a center vector; bilinear and antisymmetric.
    Vec bracket_v(const Vec& v, const Vec& w) const;

    /// True when V_{r+1} = J_r V_1 for r = 1..m, the frame convention the
    /// coordinate formulas of the solvable extension assume.
    bool basis_aligned(double tol = 1e-10) const;

private:
    int k_ = 0;
    int m_ = 0;
    std::vector<Mat> j_maps_;
    std::vector<Mat> structure_;
};

/// Named catalog families. heisenberg: m=1, k=2n; clifford2: m=2, k=4n;
/// quaternionic: m=3, k=4n; octonionic: m=7, k=8n.
enum class AlgebraFamily { heisenberg, clifford2, quaternionic, octonionic };

AlgebraFamily family_from_string(const std::string& name);
std::string family_to_string(AlgebraFamily family);

GeneralizedHeisenbergAlgebra build_algebra(std::vector<Mat> j_maps, double tol = 1e-10);
GeneralizedHeisenbergAlgebra catalog(AlgebraFamily family, int v_multiplicity);

/// Orthogonal split of v induced by a unit vector V: the image J_z V
/// (always m-dimensional) and the kernel of W -> [V, W] (dimension k - m,
/// contains V itself). Columns of each matrix are orthonormal.
struct AdSplit {
    Mat j_image;  // k x m
    Mat kernel;   // k x (k - m)
};

/// Throws NotUnit unless ||V|| = 1 within tol. Rank decisions use singular
/// value thresholding at tol * sigma_max.
AdSplit kernel_ad(const GeneralizedHeisenbergAlgebra& alg, const Vec& v, double tol = 1e-10);

struct J2Result {
    bool holds = true;
    std::optional<std::pair<int, int>> witness;  // basis indices of a violating pair
    double max_residual = 0.0;                   // relative Frobenius residual
};

/// Checks whether J_{Z_r} J_{Z_s} stays inside span{J_{Z_1}..J_{Z_m}} for all
/// r < s (least-squares projection in the Frobenius inner product). Vacuously
/// true for m = 1.
J2Result j2_condition(const GeneralizedHeisenbergAlgebra& alg, double tol = 1e-8);

/// New algebra whose basis of v is reordered/rebuilt so that the first basis
/// vector is v1 (unit), followed by J_1 v1 .. J_m v1, followed by an
/// orthonormal basis of ker ad(v1). J-maps are conjugated accordingly.
GeneralizedHeisenbergAlgebra align_basis(const GeneralizedHeisenbergAlgebra& alg, const Vec& v1,
                                         double tol = 1e-10);

} // namespace drg

#endif
