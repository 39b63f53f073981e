#include "drg/coeffsys.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

#include "drg/errors.hpp"
#include "drg/fd.hpp"

namespace drg {

namespace {

using LPoly = PolyT<LinForm>;
using BucketKey = std::pair<int, int>; // (e^{ka} grade, power of the bare a)
using Graded = std::map<BucketKey, LPoly>;

constexpr std::array<int, 4> kCosTable = {1, 0, -1, 0};
constexpr std::array<int, 4> kSinTable = {0, 1, 0, -1};

Rational to_rational(double v) {
    const double r = std::llround(v);
    if (std::abs(v - r) > 1e-9)
        throw ConfigError("coefficient system requires integer structure constants");
    return Rational(static_cast<std::int64_t>(std::llround(v)));
}

// Exponent vectors over q variables with total degree <= d, lexicographically
// sorted.
std::vector<std::vector<int>> bounded_monomials(int q, int d) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(static_cast<std::size_t>(q), 0);
    std::function<void(int, int)> rec = [&](int var, int left) {
        if (var == q) {
            out.push_back(cur);
            return;
        }
        for (int e = 0; e <= left; ++e) {
            cur[static_cast<std::size_t>(var)] = e;
            rec(var + 1, left - e);
        }
        cur[static_cast<std::size_t>(var)] = 0;
    };
    rec(0, d);
    std::sort(out.begin(), out.end());
    return out;
}

struct Assembler {
    const DamekRicciSpace& space;
    int trunc;  // M
    int degree; // d
    bool with_mirror;
    int k;  // dim v
    int mc; // dim center
    int R;  // ring variables: z, x, y, v_3..v_k, z_2..z_m

    std::vector<UnknownKey> unknowns;
    std::map<std::pair<int, std::pair<int, std::vector<int>>>, int> index;
    std::vector<std::vector<Rational>> dy_coeffs; // per r = 2..mc, length k
    std::vector<RowInfo> row_info;
    std::vector<Vec> row_data;

    Assembler(const DamekRicciSpace& s, int M, int d, bool mirror)
        : space(s), trunc(M), degree(d), with_mirror(mirror), k(s.dim_v()), mc(s.dim_center()),
          R(s.dim_v() + s.dim_center()) {
        for (int r = 2; r <= mc; ++r) {
            std::vector<Rational> row(static_cast<std::size_t>(k));
            for (int j = 1; j <= k; ++j)
                row[static_cast<std::size_t>(j - 1)] =
                    to_rational(space.algebra().structure(r - 1, 1, j - 1));
            dy_coeffs.push_back(std::move(row));
        }
        register_unknowns();
    }

    std::vector<int> lift(const std::vector<int>& n0_exps) const {
        std::vector<int> e(static_cast<std::size_t>(R), 0);
        for (int i = 0; i < R - 1; ++i)
            e[static_cast<std::size_t>(i + 1)] = n0_exps[static_cast<std::size_t>(i)];
        return e;
    }

    void add_unknown(CoeffFn fn, int m, const std::vector<int>& exps) {
        const int id = static_cast<int>(unknowns.size());
        unknowns.push_back(UnknownKey{fn, m, exps});
        index.emplace(std::make_pair(static_cast<int>(fn), std::make_pair(m, exps)), id);
    }

    void register_unknowns() {
        const auto c_monos = bounded_monomials(R - 1, degree);
        // C5 must be able to absorb the antiderivatives of the surviving
        // coefficients, which raises the n0 degree by one (and needs degree 3
        // for the z-linear part even when d = 1); z-degree 3 suffices for the
        // survivors and the transport kernel.
        const auto c5_n0 = bounded_monomials(R - 1, std::max(degree + 1, 3));
        for (int m = 1; m <= trunc; ++m)
            for (const auto& e : c_monos)
                add_unknown(CoeffFn::C1, m, lift(e));
        for (int m = 1; m <= trunc; ++m)
            for (const auto& e : c_monos)
                add_unknown(CoeffFn::C2, m, lift(e));
        for (const auto& e : c_monos)
            add_unknown(CoeffFn::C4, 0, lift(e));
        for (CoeffFn fn : {CoeffFn::C5, CoeffFn::C5m}) {
            if (fn == CoeffFn::C5m && !with_mirror)
                continue;
            for (int zp = 0; zp <= 3; ++zp)
                for (const auto& e : c5_n0) {
                    auto full = lift(e);
                    full[0] = zp;
                    add_unknown(fn, 0, full);
                }
        }
    }

    LPoly generic(CoeffFn fn, int m) const {
        LPoly out(R);
        for (std::size_t id = 0; id < unknowns.size(); ++id) {
            const auto& u = unknowns[id];
            if (u.fn != fn || u.m != m)
                continue;
            LinForm lf;
            lf.entries.emplace(static_cast<int>(id), Rational(1));
            out.add_term(u.exps, lf);
        }
        return out;
    }

    std::vector<int> unit(int var) const {
        std::vector<int> e(static_cast<std::size_t>(R), 0);
        e[static_cast<std::size_t>(var)] = 1;
        return e;
    }

    std::vector<int> unit2(int var) const {
        std::vector<int> e(static_cast<std::size_t>(R), 0);
        e[static_cast<std::size_t>(var)] = 2;
        return e;
    }

    /// D_x (main) or D_y (mirror) as an exact derivation on the ring.
    LPoly derive(const LPoly& p, bool mirror) const {
        LPoly out = p.derivative(mirror ? 2 : 1); // d/dy : d/dx
        for (int r = 2; r <= mc; ++r) {
            const int zr = k + r - 1;
            const LPoly dz = p.derivative(zr);
            if (dz.is_zero())
                continue;
            if (!mirror) {
                out = out - dz.times_monomial(unit(r + 1), Rational(1, 2)); // v_{r+1}
            } else {
                const auto& coeffs = dy_coeffs[static_cast<std::size_t>(r - 2)];
                for (int j = 1; j <= k; ++j) {
                    const Rational& a = coeffs[static_cast<std::size_t>(j - 1)];
                    if (a.is_zero())
                        continue;
                    out = out - dz.times_monomial(unit(j), a * Rational(1, 2));
                }
            }
        }
        return out;
    }

    template <typename F>
    Graded apply(const Graded& g, F&& f) const {
        Graded out;
        for (const auto& [key, poly] : g) {
            LPoly q = f(poly);
            if (!q.is_zero())
                out.emplace(key, std::move(q));
        }
        return out;
    }

    static void accumulate(Graded& into, const Graded& from) {
        for (const auto& [key, poly] : from) {
            auto it = into.find(key);
            if (it == into.end())
                into.emplace(key, poly);
            else
                it->second = it->second + poly;
        }
    }

    /// Integrate a pure e^{ka} sum against da: grade k >= 1 picks up 1/k,
    /// grade 0 becomes the coefficient of the bare a.
    Graded integrate(const Graded& g) const {
        Graded out;
        for (const auto& [key, poly] : g) {
            if (key.second != 0 || key.first < 0)
                throw Error("integrate expects nonnegative pure exponential grades");
            if (key.first == 0)
                accumulate_single(out, {0, 1}, poly);
            else
                accumulate_single(out, key, poly.scaled(Rational(1, key.first)));
        }
        return out;
    }

    /// e^{-a/2} d/da (e^{-a/2} * .): grade k -> grade k-1 with factor (k - 1/2).
    Graded shift_down(const Graded& g) const {
        Graded out;
        for (const auto& [key, poly] : g) {
            if (key.second != 0)
                throw Error("shift_down expects pure exponential grades");
            accumulate_single(out, {key.first - 1, 0},
                              poly.scaled(Rational(2 * key.first - 1, 2)));
        }
        return out;
    }

    static void accumulate_single(Graded& into, BucketKey key, const LPoly& poly) {
        if (poly.is_zero())
            return;
        auto it = into.find(key);
        if (it == into.end())
            into.emplace(key, poly);
        else
            it->second = it->second + poly;
    }

    /// The generic series F = e^a f4 = sum_m sum_{j<=m} C(m,j) z^{m-j} e^{ja}
    /// (C1^[m] sin(pi j/2) + C2^[m] cos(pi j/2)) + C4, graded by e^{ja}.
    Graded series() const {
        Graded F;
        for (int m = 1; m <= trunc; ++m) {
            const LPoly c1 = generic(CoeffFn::C1, m);
            const LPoly c2 = generic(CoeffFn::C2, m);
            for (int j = 0; j <= m; ++j) {
                const int s = kSinTable[static_cast<std::size_t>(j % 4)];
                const int c = kCosTable[static_cast<std::size_t>(j % 4)];
                LPoly part(R);
                if (s != 0)
                    part = part + c1.scaled(Rational(s));
                if (c != 0)
                    part = part + c2.scaled(Rational(c));
                if (part.is_zero())
                    continue;
                std::vector<int> zpow(static_cast<std::size_t>(R), 0);
                zpow[0] = m - j;
                accumulate_single(F, {j, 0}, part.times_monomial(zpow, binomial(m, j)));
            }
        }
        accumulate_single(F, {0, 0}, generic(CoeffFn::C4, 0));
        return F;
    }

    /// Assemble the graded expression of one derivation branch (main: D_x and
    /// t = -y/2; mirror: D_y and t = +x/2) and emit its rows.
    void emit_branch(bool mirror) {
        const int tvar = mirror ? 1 : 2; // x : y
        const Rational two_t(mirror ? 1 : -1);
        const Rational t_sq(1, 4);

        const Graded F = series();
        const Graded dF = apply(F, [&](const LPoly& p) { return derive(p, mirror); });
        const Graded ddF = apply(dF, [&](const LPoly& p) { return derive(p, mirror); });
        const Graded dzdF = apply(dF, [](const LPoly& p) { return p.derivative(0); });
        const Graded dzdzF = apply(F, [](const LPoly& p) { return p.derivative(0).derivative(0); });

        Graded G = integrate(ddF);
        accumulate(G, apply(integrate(dzdF),
                            [&](const LPoly& p) { return p.times_monomial(unit(tvar), two_t); }));
        accumulate(G, apply(integrate(dzdzF),
                            [&](const LPoly& p) { return p.times_monomial(unit2(tvar), t_sq); }));

        // -D C5 - t dz C5, entering the constant (grade 0, a^0) bucket.
        const LPoly c5 = generic(mirror ? CoeffFn::C5m : CoeffFn::C5, 0);
        LPoly constant_part = LPoly(R) - derive(c5, mirror);
        constant_part = constant_part -
                        c5.derivative(0).times_monomial(unit(tvar), two_t * Rational(1, 2));
        accumulate_single(G, {0, 0}, constant_part);

        accumulate(G, shift_down(F));

        for (const auto& [key, poly] : G)
            emit_bucket(key, poly, mirror);
    }

    void emit_bucket(BucketKey key, const LPoly& poly, bool mirror) {
        int kind;
        Rational scale(1);
        if (key.second == 1 && key.first == 0) {
            kind = 1; // (16-1)
        } else if (key.second == 0 && key.first >= 1) {
            kind = 0; // (16mk), grade = key.first
        } else if (key.second == 0 && key.first == -1) {
            kind = 2; // (16-2); the assembly carries an overall -1/2
            scale = Rational(-2);
        } else if (key.second == 0 && key.first == 0) {
            kind = 3; // (16-3)
        } else {
            throw Error("unexpected bucket in coefficient-system assembly");
        }
        for (const auto& [exps, lf] : poly.terms()) {
            Vec row = Vec::Zero(static_cast<int>(unknowns.size()));
            for (const auto& [id, coeff] : lf.entries)
                row(id) = (coeff * scale).to_double();
            row_info.push_back(RowInfo{kind, kind == 0 ? key.first : 0, mirror, exps});
            row_data.push_back(std::move(row));
        }
    }
};

} // namespace

int TruncatedCoefficientSystem::unknown_index(CoeffFn fn, int m,
                                              const std::vector<int>& exps) const {
    const auto it = index_.find(std::make_pair(static_cast<int>(fn), std::make_pair(m, exps)));
    return it == index_.end() ? -1 : it->second;
}

Polynomial TruncatedCoefficientSystem::coefficient_polynomial(const Vec& solution, CoeffFn fn,
                                                              int m) const {
    if (solution.size() != static_cast<int>(unknowns_.size()))
        throw DimensionMismatch("solution length does not match the unknown count");
    Polynomial out(ring_vars());
    for (std::size_t id = 0; id < unknowns_.size(); ++id) {
        const auto& u = unknowns_[id];
        if (u.fn == fn && u.m == m)
            out.add_term(u.exps, solution(static_cast<int>(id)));
    }
    return out;
}

TruncatedCoefficientSystem build_system(int truncation, int degree, const DamekRicciSpace& space,
                                        bool mirror) {
    if (truncation < 3)
        throw TruncationTooSmall("need truncation >= 3 to express the theorem's content");
    if (degree < 1)
        throw ConfigError("coefficient degree must be at least 1");
    if (!space.algebra().basis_aligned())
        throw BasisNotAligned("coefficient system needs the V2 = J_{Z1}V1 convention");

    Assembler assembler(space, truncation, degree, mirror);
    assembler.emit_branch(false);
    if (mirror)
        assembler.emit_branch(true);

    TruncatedCoefficientSystem sys;
    sys.truncation_ = truncation;
    sys.degree_ = degree;
    sys.dim_v_ = space.dim_v();
    sys.dim_center_ = space.dim_center();
    sys.mirror_ = mirror;
    sys.unknowns_ = std::move(assembler.unknowns);
    sys.index_ = std::move(assembler.index);
    sys.rows_ = std::move(assembler.row_info);
    sys.matrix_ = Mat::Zero(static_cast<int>(assembler.row_data.size()),
                            static_cast<int>(sys.unknowns_.size()));
    for (std::size_t i = 0; i < assembler.row_data.size(); ++i)
        sys.matrix_.row(static_cast<int>(i)) = assembler.row_data[i].transpose();
    return sys;
}

Mat solve_system(const TruncatedCoefficientSystem& sys, double tol) {
    const Mat& A = sys.matrix();
    // Jacobi rather than divide-and-conquer: the latter can mis-deflate tiny
    // singular values on these exact-rational matrices, shifting the rank by one.
    Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cutoff = sv.size() > 0 ? tol * sv(0) : 0.0;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff)
            ++rank;
    const int cols = static_cast<int>(A.cols());
    return svd.matrixV().rightCols(cols - rank);
}

HarmonicExpansion expansion_from_solution(const TruncatedCoefficientSystem& sys, const Vec& sol) {
    HarmonicExpansion exp = empty_expansion(sys.truncation(), sys.dim_v(), sys.dim_center());
    const int nv = exp.reduced_vars();
    auto drop_z = [nv](const std::vector<int>& exps) {
        std::vector<int> out(exps.begin() + 1, exps.end());
        if (static_cast<int>(out.size()) != nv)
            throw DimensionMismatch("unexpected exponent length");
        return out;
    };
    if (sol.size() != static_cast<int>(sys.unknowns().size()))
        throw DimensionMismatch("solution length does not match the unknown count");
    Polynomial c5(sys.ring_vars());
    bool has_c5 = false;
    for (std::size_t id = 0; id < sys.unknowns().size(); ++id) {
        const auto& u = sys.unknowns()[id];
        const double v = sol(static_cast<int>(id));
        switch (u.fn) {
        case CoeffFn::C1:
            exp.c1[static_cast<std::size_t>(u.m - 1)].add_term(drop_z(u.exps), v);
            break;
        case CoeffFn::C2:
            exp.c2[static_cast<std::size_t>(u.m - 1)].add_term(drop_z(u.exps), v);
            break;
        case CoeffFn::C4:
            exp.c4.add_term(drop_z(u.exps), v);
            break;
        case CoeffFn::C5:
            c5.add_term(u.exps, v);
            has_c5 = true;
            break;
        case CoeffFn::C5m:
            break; // diagnostic only; not part of the expansion
        }
    }
    if (has_c5)
        exp.c5 = std::move(c5);
    return exp;
}

double f4_from_solution(const TruncatedCoefficientSystem& sys, const Vec& sol, const Vec& p) {
    return assemble_f3_f4(expansion_from_solution(sys, sol), p).second;
}

double rho_of_solution(const TruncatedCoefficientSystem& sys, const Vec& sol, const Vec& p) {
    const HarmonicExpansion exp = expansion_from_solution(sys, sol);
    ScalarFn f4 = [&exp](const Vec& q) { return assemble_f3_f4(exp, q).second; };
    return fd::partial(f4, p, static_cast<int>(p.size()) - 1);
}

} // namespace drg
