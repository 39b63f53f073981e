#ifndef DRG_POLYNOMIAL_HPP
#define DRG_POLYNOMIAL_HPP

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <numeric>
#include <vector>

#include "drg/errors.hpp"

namespace drg {

/// Sparse multivariate polynomial over an ordered coefficient ring C.
/// Terms are keyed by exponent vectors (one entry per variable) in a
/// deterministic (lexicographic) order. C is double for numeric work and
/// Rational or a linear form over unknowns for exact symbolic assembly.
template <typename C>
class PolyT {
public:
    using Exponents = std::vector<int>;
    using TermMap = std::map<Exponents, C>;

    PolyT() = default;
    explicit PolyT(int nvars) : nvars_(nvars) {
        if (nvars < 0)
            throw DimensionMismatch("polynomial needs a nonnegative variable count");
    }

    static PolyT constant(int nvars, const C& value) {
        PolyT p(nvars);
        p.add_term(Exponents(static_cast<std::size_t>(nvars), 0), value);
        return p;
    }

    static PolyT monomial(int nvars, const Exponents& exps, const C& coeff) {
        PolyT p(nvars);
        p.add_term(exps, coeff);
        return p;
    }

    /// The monomial x_var (first-degree in a single variable).
    static PolyT variable(int nvars, int var, const C& coeff) {
        Exponents e(static_cast<std::size_t>(nvars), 0);
        e.at(static_cast<std::size_t>(var)) = 1;
        return monomial(nvars, e, coeff);
    }

    int nvars() const { return nvars_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    int total_degree() const {
        int deg = 0;
        for (const auto& [exps, coeff] : terms_)
            deg = std::max(deg, std::accumulate(exps.begin(), exps.end(), 0));
        return deg;
    }

    int degree_in(int var) const {
        int deg = 0;
        for (const auto& [exps, coeff] : terms_)
            deg = std::max(deg, exps.at(static_cast<std::size_t>(var)));
        return deg;
    }

    void add_term(const Exponents& exps, const C& coeff) {
        if (static_cast<int>(exps.size()) != nvars_)
            throw DimensionMismatch("exponent vector length does not match variable count");
        for (int e : exps)
            if (e < 0)
                throw DimensionMismatch("negative exponent");
        if (is_zero_coeff(coeff))
            return;
        auto it = terms_.find(exps);
        if (it == terms_.end()) {
            terms_.emplace(exps, coeff);
        } else {
            it->second = it->second + coeff;
            if (is_zero_coeff(it->second))
                terms_.erase(it);
        }
    }

    PolyT operator+(const PolyT& other) const {
        check_same(other);
        PolyT out = *this;
        for (const auto& [exps, coeff] : other.terms_)
            out.add_term(exps, coeff);
        return out;
    }

    PolyT operator-(const PolyT& other) const {
        check_same(other);
        PolyT out = *this;
        for (const auto& [exps, coeff] : other.terms_)
            out.add_term(exps, negate(coeff));
        return out;
    }

    template <typename S>
    PolyT scaled(const S& factor) const {
        PolyT out(nvars_);
        for (const auto& [exps, coeff] : terms_)
            out.add_term(exps, coeff * factor);
        return out;
    }

    /// Multiply by a single monomial with a scalar factor (keeps C linear,
    /// so it is safe even when C is a linear form over unknowns).
    template <typename S>
    PolyT times_monomial(const Exponents& exps, const S& factor) const {
        if (static_cast<int>(exps.size()) != nvars_)
            throw DimensionMismatch("exponent vector length does not match variable count");
        PolyT out(nvars_);
        for (const auto& [e, coeff] : terms_) {
            Exponents shifted = e;
            for (std::size_t i = 0; i < shifted.size(); ++i)
                shifted[i] += exps[i];
            out.add_term(shifted, coeff * factor);
        }
        return out;
    }

    PolyT derivative(int var) const {
        if (var < 0 || var >= nvars_)
            throw DimensionMismatch("derivative variable out of range");
        PolyT out(nvars_);
        for (const auto& [exps, coeff] : terms_) {
            const int e = exps.at(static_cast<std::size_t>(var));
            if (e == 0)
                continue;
            Exponents lowered = exps;
            lowered[static_cast<std::size_t>(var)] = e - 1;
            out.add_term(lowered, coeff * e);
        }
        return out;
    }

    /// Product of two polynomials (requires C * C to be defined).
    PolyT operator*(const PolyT& other) const {
        check_same(other);
        PolyT out(nvars_);
        for (const auto& [ea, ca] : terms_)
            for (const auto& [eb, cb] : other.terms_) {
                Exponents e = ea;
                for (std::size_t i = 0; i < e.size(); ++i)
                    e[i] += eb[i];
                out.add_term(e, ca * cb);
            }
        return out;
    }

    /// Numeric evaluation; only instantiated for arithmetic coefficient types.
    double eval(const Eigen::VectorXd& point) const {
        if (point.size() != nvars_)
            throw DimensionMismatch("evaluation point length does not match variable count");
        double total = 0.0;
        for (const auto& [exps, coeff] : terms_) {
            double term = to_double_coeff(coeff);
            for (int i = 0; i < nvars_; ++i)
                for (int rep = 0; rep < exps[static_cast<std::size_t>(i)]; ++rep)
                    term *= point(i);
            total += term;
        }
        return total;
    }

private:
    static bool is_zero_coeff(const C& c) {
        if constexpr (std::is_floating_point_v<C>)
            return c == 0.0;
        else
            return c.is_zero();
    }
    static C negate(const C& c) { return -c; }
    static double to_double_coeff(const C& c) {
        if constexpr (std::is_floating_point_v<C>)
            return c;
        else
            return c.to_double();
    }
    void check_same(const PolyT& other) const {
        if (other.nvars_ != nvars_)
            throw DimensionMismatch("polynomials over different variable counts");
    }

    int nvars_ = 0;
    TermMap terms_;
};

using Polynomial = PolyT<double>;

} // namespace drg

#endif
