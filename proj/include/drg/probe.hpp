#ifndef DRG_PROBE_HPP
#define DRG_PROBE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "drg/space.hpp"
#include "drg/tensor.hpp"

namespace drg {

/// Chart data the rigidity probe needs: a metric, a sampling box, and
/// (optionally) which coordinate carries the exponential ansatz factor.
/// Damek-Ricci spaces use their global solvable chart with the last
/// coordinate exponential; space-form charts have no exponential coordinate.
struct ProbeChart {
    int dim = 0;
    MatrixFn metric;
    int a_index = -1; // coordinate multiplied into e^{j a/2}, or -1 if none
    Vec sample_lo;    // per-coordinate sampling box bounds
    Vec sample_hi;
};

/// Global solvable chart of a Damek-Ricci space; all coordinates (including
/// a) sampled uniformly in [-1, 1].
ProbeChart damek_ricci_chart(const DamekRicciSpace& space);

/// Flat R^n with coordinates sampled in [-1, 1]^n.
ProbeChart euclidean_chart(int n);

/// Hyperbolic half-plane {y > 0} with metric y^{-2} delta; x in [-1, 1],
/// y in [1/2, 3/2].
ProbeChart half_plane_chart();

/// Search ansatz: the span of  q(p) e^{j a / 2} d/dx^mu  with q a polynomial
/// of total degree <= `degree` over the non-exponential coordinates,
/// j in [exp_min, exp_max] and mu ranging over `components` (empty = all
/// coordinates).
struct AnsatzSpec {
    int degree = 2;
    int exp_min = 0;
    int exp_max = 0;
    std::vector<int> components{};
};

/// One working-basis field of the ansatz. To keep the sample Gram matrix
/// well conditioned the working basis is not the raw monomial x exponential
/// product family (the grid functions e^{j a / 2} are nearly collinear on
/// the sampling box) but an exactly orthogonalized basis of the same span:
/// products of per-coordinate Legendre polynomials scaled to the sampling
/// box, times a combination of grid exponentials orthonormalized in closed
/// form against the uniform measure on the box.
struct BasisElement {
    int component = 0; // mu: coordinate direction of the field
    std::vector<std::pair<int, double>> exp_profile; // sum of w e^{j a/2}
    std::vector<int> degrees; // per-coordinate Legendre degrees (non-exponential coords)
};

/// Deterministic enumeration of the ansatz working basis (components outer,
/// exponential levels middle, polynomial degrees graded-lexicographic
/// inner). Throws ConfigError for an empty basis, an exponential grid
/// without an exponential coordinate, or out-of-range component indices.
std::vector<BasisElement> enumerate_basis(const ProbeChart& chart, const AnsatzSpec& ansatz);

/// The basis element as a chart vector field with closed-form jacobian.
CoordinateVectorField basis_field(const ProbeChart& chart, const BasisElement& element);

/// Linear combination sum_b coeffs[b] * basis[b] with closed-form jacobian.
CoordinateVectorField combined_field(const ProbeChart& chart, const std::vector<BasisElement>& basis,
                                     const Vec& coeffs);

/// Least-squares operator for the conformal equation. Each sample point
/// contributes the dim(dim+1)/2 orthonormal-frame components of the
/// trace-free part of L_{xi_b} g (off-diagonals weighted by sqrt 2 so each
/// row block has the tensor's Frobenius norm). Columns are normalized to
/// unit RMS frame-norm over the samples; `column_scale` maps matrix
/// coefficients back to raw basis coefficients (raw = coeff / scale).
struct DefectOperator {
    Mat matrix;
    std::vector<BasisElement> basis;
    Vec column_scale;
    double gram_condition = 0.0; // of the normalized basis Gram on the samples
};

/// Assembles the defect operator on the given sample points.
/// Requires #rows >= 2 #columns (oversampling); throws IllConditionedBasis
/// when the normalized basis Gram condition exceeds 1e8.
DefectOperator assemble_defect_operator(const ProbeChart& chart, const AnsatzSpec& ansatz,
                                        const std::vector<Vec>& samples,
                                        double h = fd::kDefaultStep, int workers = 1);

struct ProbeTolerances {
    double svd = 1e-7;    // nullspace threshold, relative to sigma_max
    double rho = 1e-6;    // |rho| bound for "Killing" on validation points
    double defect = 1e-6; // tracefree-norm bound for "conformal" on validation points
};

enum class RigidityVerdict { rigid, non_rigid, inconclusive };

/// A normalized nullspace field: raw-basis coefficients of the candidate
/// scaled to unit RMS frame-norm over the validation points, with its
/// worst-case conformal-defect numbers there.
struct CandidateField {
    Vec coefficients;
    double max_abs_rho = 0.0;
    double max_tracefree = 0.0;
};

struct RigidityReport {
    int samples = 0;
    int validation_count = 0;
    int basis_size = 0;
    double gram_condition = 0.0;
    Vec singular_values; // full list, descending
    int nullspace_dim = 0;
    std::vector<CandidateField> fields;
    RigidityVerdict verdict = RigidityVerdict::inconclusive;
};

/// Samples the chart box (seeded, deterministic), assembles the defect
/// operator, extracts the SVD nullspace at threshold tol.svd * sigma_max and
/// re-runs with doubled samples as a stability check (mismatch throws
/// InconclusiveSampling). Each nullspace field is normalized and measured
/// with tensor::conformal_defect on held-out validation points. Verdict:
/// rigid when the nullspace is nonempty and every field stays below both
/// tolerances; non-rigid when some field is conformal (defect below
/// tolerance) with |rho| above tolerance; inconclusive otherwise.
RigidityReport probe_rigidity(const ProbeChart& chart, const AnsatzSpec& ansatz, int samples,
                              int validation_points, const ProbeTolerances& tol = {},
                              std::uint64_t seed = 0, int workers = 1);

/// Right-invariant generators X with X(e) = V_i, Z_r, A. They generate left
/// translations, so all of them are Killing fields; in coordinates
///   X_{V_i} = d_{v_i} + 1/2 sum_r (sum_j A^r_{ij} v_j) d_{z_r},
///   X_{Z_r} = d_{z_r},
///   X_A    = 1/2 sum_i v_i d_{v_i} + sum_r z_r d_{z_r} + d_a.
struct GeneratorBasis {
    std::vector<CoordinateVectorField> fields;
    std::vector<std::string> names; // "V1".."Vk", "Z1".."Zm", "A"
};
GeneratorBasis right_invariant_generators(const DamekRicciSpace& space);

/// Readability classification of a nullspace field: its value at the
/// identity in the (identity) frame, the best least-squares match by a
/// single right-invariant generator and by their full span, both as
/// relative RMS residuals over seeded sample points. `killing_like` means
/// the field is numerically a combination of right translations.
struct KillingMatch {
    Vec frame_coefficients;
    std::string best_generator;
    double best_residual = 0.0;
    Vec generator_coefficients;
    double combination_residual = 0.0;
    bool killing_like = false;
};

/// Throws ConfigError for a numerically zero field.
KillingMatch match_killing(const DamekRicciSpace& space, const CoordinateVectorField& field,
                           int points = 100, std::uint64_t seed = 0);

/// Least-squares fit of rho(x, y) = -(b0 + b1 x + b2 (x^2 + y^2)) / y to
/// sampled potential values on the half-plane; returns the max abs residual
/// and, optionally, the fitted (b0, b1, b2).
double fit_half_plane_potential(const std::vector<Vec>& points, const Vec& rho_values,
                                Vec* params = nullptr);

} // namespace drg

#endif
