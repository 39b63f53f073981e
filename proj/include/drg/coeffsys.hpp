#ifndef DRG_COEFFSYS_HPP
#define DRG_COEFFSYS_HPP

#include <map>
#include <vector>

#include "drg/confsys.hpp"
#include "drg/polynomial.hpp"
#include "drg/rational.hpp"
#include "drg/space.hpp"

namespace drg {

/// Sparse linear form over unknown indices with exact rational coefficients;
/// the coefficient type of the symbolic polynomials the system is built from.
struct LinForm {
    std::map<int, Rational> entries;

    bool is_zero() const { return entries.empty(); }

    LinForm operator-() const {
        LinForm out;
        for (const auto& [i, c] : entries)
            out.entries.emplace(i, -c);
        return out;
    }
    friend LinForm operator+(const LinForm& a, const LinForm& b) {
        LinForm out = a;
        for (const auto& [i, c] : b.entries) {
            auto it = out.entries.find(i);
            if (it == out.entries.end()) {
                out.entries.emplace(i, c);
            } else {
                it->second += c;
                if (it->second.is_zero())
                    out.entries.erase(it);
            }
        }
        return out;
    }
    friend LinForm operator*(const LinForm& a, const Rational& s) {
        LinForm out;
        if (s.is_zero())
            return out;
        for (const auto& [i, c] : a.entries)
            out.entries.emplace(i, c * s);
        return out;
    }
};

/// Which coefficient function an unknown belongs to. C5 is the integration
/// "constant" of the f1 recovery; C5m its counterpart from the mirrored
/// derivation (the one starting from (11-(2,2)) and (12-(2,2))).
enum class CoeffFn { C1, C2, C4, C5, C5m };

/// One scalar unknown: the coefficient of a fixed monomial of one coefficient
/// polynomial. Exponents run over the ring (z, x, y, v_3..v_k, z_2..z_m);
/// only C5/C5m may have a nonzero z-exponent. For C1/C2, `m` is the harmonic
/// degree; it is 0 for C4/C5/C5m.
struct UnknownKey {
    CoeffFn fn = CoeffFn::C1;
    int m = 0;
    std::vector<int> exps;
};

/// Provenance of one constraint row: which family of the displayed equations
/// it came from, the e^{ka} grade for the (16mk) family, whether it belongs
/// to the mirrored derivation, and the monomial whose coefficient it is.
struct RowInfo {
    int kind = 0; // 0 = (16mk), 1 = (16-1), 2 = (16-2), 3 = (16-3)
    int grade = 0;
    bool mirror = false;
    std::vector<int> exps;
};

/// The finite linear system obtained by truncating the harmonic expansion at
/// degree M and the coefficient polynomials at total degree d, then equating
/// every monomial coefficient of the component equations to zero. Assembly is
/// exact rational arithmetic; only the nullspace step is floating point.
class TruncatedCoefficientSystem {
public:
    int truncation() const { return truncation_; }
    int degree() const { return degree_; }
    int dim_v() const { return dim_v_; }
    int dim_center() const { return dim_center_; }
    bool has_mirror() const { return mirror_; }
    int ring_vars() const { return dim_v_ + dim_center_; } // z + n0

    const std::vector<UnknownKey>& unknowns() const { return unknowns_; }
    const std::vector<RowInfo>& rows() const { return rows_; }
    const Mat& matrix() const { return matrix_; }

    /// Index of an unknown, or -1 when the monomial is outside the ansatz.
    int unknown_index(CoeffFn fn, int m, const std::vector<int>& exps) const;

    /// The polynomial (over the full ring, z included) that a solution vector
    /// assigns to one coefficient function.
    Polynomial coefficient_polynomial(const Vec& solution, CoeffFn fn, int m) const;

private:
    friend TruncatedCoefficientSystem build_system(int, int, const DamekRicciSpace&, bool);

    int truncation_ = 0;
    int degree_ = 0;
    int dim_v_ = 0;
    int dim_center_ = 0;
    bool mirror_ = true;
    std::vector<UnknownKey> unknowns_;
    std::map<std::pair<int, std::pair<int, std::vector<int>>>, int> index_;
    std::vector<RowInfo> rows_;
    Mat matrix_;
};

/// Assemble the truncated system for the given space. Rows are the monomial
/// coefficients of (16mk) for k = 1..M, m = k..M, of (16-1), (16-2), (16-3),
/// and (behind `mirror`, default on) of the same families derived from the
/// mirrored component equations (D_x -> D_y, y -> -x, C5 -> C5m).
TruncatedCoefficientSystem build_system(int truncation, int degree, const DamekRicciSpace& space,
                                        bool mirror = true);

/// Orthonormal nullspace basis (columns) via SVD thresholding at tol * sigma_max.
Mat solve_system(const TruncatedCoefficientSystem& sys, double tol = 1e-10);

/// Interpret a solution vector as a HarmonicExpansion (C3 = 0; C5 attached
/// when present in the unknowns).
HarmonicExpansion expansion_from_solution(const TruncatedCoefficientSystem& sys, const Vec& sol);

/// f4 of the solution's expansion at a full coordinate point.
double f4_from_solution(const TruncatedCoefficientSystem& sys, const Vec& sol, const Vec& p);

/// Potential rho = df4/da of the solution's expansion at p (0 for genuine
/// solutions: the theorem's conclusion).
double rho_of_solution(const TruncatedCoefficientSystem& sys, const Vec& sol, const Vec& p);

} // namespace drg

#endif
