#ifndef DRG_RNG_HPP
#define DRG_RNG_HPP

#include <Eigen/Dense>
#include <cstdint>

namespace drg {

/// xoshiro256** seeded through SplitMix64. Both generators are published
/// reference designs, so ports in other languages reproduce the exact
/// sample streams. Uniform doubles are built from the top 53 bits, which
/// avoids any dependence on library distribution internals.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& w : state_) {
            // SplitMix64 step
            x += 0x9e3779b97f4a7c15ULL;
            std::uint64_t z = x;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            w = z ^ (z >> 31);
        }
    }

    std::uint64_t next_u64() {
        auto rotl = [](std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); };
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Vector with iid uniform entries in [lo, hi).
    Eigen::VectorXd uniform_vec(int n, double lo, double hi) {
        Eigen::VectorXd v(n);
        for (int i = 0; i < n; ++i) v(i) = uniform(lo, hi);
        return v;
    }

    /// Matrix with iid uniform entries in [lo, hi), filled row-major.
    Eigen::MatrixXd uniform_mat(int rows, int cols, double lo, double hi) {
        Eigen::MatrixXd m(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) m(i, j) = uniform(lo, hi);
        return m;
    }

    /// Random skew-symmetric matrix with entries in [-s, s].
    Eigen::MatrixXd skew(int n, double s) {
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                const double v = uniform(-s, s);
                m(i, j) = v;
                m(j, i) = -v;
            }
        return m;
    }

private:
    std::uint64_t state_[4];
};

} // namespace drg

#endif
