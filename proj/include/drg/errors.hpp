#ifndef DRG_ERRORS_HPP
#define DRG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace drg {

/// Base class for all toolkit errors. Config/usage problems and failed
/// numerical preconditions both derive from here; the CLI maps them to
/// exit codes.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct DimensionMismatch : Error {
    explicit DimensionMismatch(const std::string& msg) : Error("DimensionMismatch: " + msg) {}
};

struct NotSkew : Error {
    explicit NotSkew(const std::string& msg) : Error("NotSkew: " + msg) {}
};

struct CliffordViolation : Error {
    explicit CliffordViolation(const std::string& msg) : Error("CliffordViolation: " + msg) {}
};

struct UnsupportedFamily : Error {
    explicit UnsupportedFamily(const std::string& msg) : Error("UnsupportedFamily: " + msg) {}
};

struct NotUnit : Error {
    explicit NotUnit(const std::string& msg) : Error("NotUnit: " + msg) {}
};

struct NonFinitePoint : Error {
    explicit NonFinitePoint(const std::string& msg) : Error("NonFinitePoint: " + msg) {}
};

struct NonFinite : Error {
    explicit NonFinite(const std::string& msg) : Error("NonFinite: " + msg) {}
};

struct BasisNotAligned : Error {
    explicit BasisNotAligned(const std::string& msg) : Error("BasisNotAligned: " + msg) {}
};

struct SingularMetric : Error {
    explicit SingularMetric(const std::string& msg) : Error("SingularMetric: " + msg) {}
};

struct ShapeMismatch : Error {
    explicit ShapeMismatch(const std::string& msg) : Error("ShapeMismatch: " + msg) {}
};

struct ChartPole : Error {
    explicit ChartPole(const std::string& msg) : Error("ChartPole: " + msg) {}
};

struct NonPositiveY : Error {
    explicit NonPositiveY(const std::string& msg) : Error("NonPositiveY: " + msg) {}
};

struct NonPositiveW : Error {
    explicit NonPositiveW(const std::string& msg) : Error("NonPositiveW: " + msg) {}
};

struct Overflow : Error {
    explicit Overflow(const std::string& msg) : Error("Overflow: " + msg) {}
};

struct TruncationTooSmall : Error {
    explicit TruncationTooSmall(const std::string& msg) : Error("TruncationTooSmall: " + msg) {}
};

struct IllConditionedBasis : Error {
    explicit IllConditionedBasis(const std::string& msg) : Error("IllConditionedBasis: " + msg) {}
};

struct InconclusiveSampling : Error {
    explicit InconclusiveSampling(const std::string& msg) : Error("InconclusiveSampling: " + msg) {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error("ConfigError: " + msg) {}
};

} // namespace drg

#endif
