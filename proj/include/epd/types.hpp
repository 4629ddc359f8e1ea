#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace epd {

using Complex = std::complex<double>;

// Relative tolerance below which an evaluation point is considered to sit on
// a kernel singularity.
inline constexpr double kSingularTol = 1e-12;

// Second-order mixed jet of a scalar field W(z, zb).  The two arguments are
// treated as independent complex variables; on the physical slice zb is the
// conjugate of z.
struct Jet2 {
    Complex w{};
    Complex wz{};
    Complex wzb{};
    Complex wzz{};
    Complex wzbzb{};
    Complex wzzb{};

    Jet2& operator+=(const Jet2& o) {
        w += o.w; wz += o.wz; wzb += o.wzb;
        wzz += o.wzz; wzbzb += o.wzbzb; wzzb += o.wzzb;
        return *this;
    }
    Jet2& operator*=(const Complex& c) {
        w *= c; wz *= c; wzb *= c;
        wzz *= c; wzbzb *= c; wzzb *= c;
        return *this;
    }
    friend Jet2 operator*(const Jet2& j, const Complex& c) {
        Jet2 r = j; r *= c; return r;
    }
    friend Jet2 operator+(Jet2 a, const Jet2& b) { a += b; return a; }
};

// Error hierarchy.  DomainError covers invalid inputs (bad grids, points on
// singularities, invalid contours); ConvergenceError covers iterative
// procedures that fail to meet their tolerance.
struct Error : std::runtime_error {
    explicit Error(const std::string& m) : std::runtime_error(m) {}
};
struct DomainError : Error {
    explicit DomainError(const std::string& m) : Error(m) {}
};
struct ConvergenceError : Error {
    explicit ConvergenceError(const std::string& m) : Error(m) {}
};

inline void require_finite(const Complex& v, const char* what) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw DomainError(std::string(what) + ": non-finite value");
}

}  // namespace epd
