#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace sk {

using cplx = std::complex<double>;

inline constexpr double PI = 3.14159265358979323846;

// Location of a spectral point relative to the real axis.
enum class PointKind { RealAxis, UpperHalfPlane, PointMass };

// A point λ of the spectral plane together with where it is supposed to live.
// Upper-half-plane and point-mass points must have Im λ > 0.
struct ComplexPoint {
    cplx value;
    PointKind kind = PointKind::UpperHalfPlane;

    static ComplexPoint real(double x) { return {cplx(x, 0.0), PointKind::RealAxis}; }
    static ComplexPoint upper(cplx z) {
        if (z.imag() <= 0.0)
            throw std::invalid_argument("ComplexPoint::upper: Im must be positive");
        return {z, PointKind::UpperHalfPlane};
    }
    static ComplexPoint mass(cplx z) {
        if (z.imag() <= 0.0)
            throw std::invalid_argument("ComplexPoint::mass: Im must be positive");
        return {z, PointKind::PointMass};
    }
};

struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when input data violates an admissibility condition (Szego integral
// divergent, Blaschke sums divergent, pole hit, ...).
struct ConditionViolation : NumericalError {
    explicit ConditionViolation(const std::string& what) : NumericalError(what) {}
};

inline double sq(double x) { return x * x; }
inline double abs2(cplx z) { return z.real() * z.real() + z.imag() * z.imag(); }

} // namespace sk
