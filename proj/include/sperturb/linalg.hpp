#pragma once

// Tridiagonal solves, the discrete Green column A^{-1} e_n, and the minor
// ratios r_i = |g_{i-1}/g_i| that locate intersection points. Determinants
// are never formed: at eps = 1e-10 they over/underflow while their ratios
// stay O(1).

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "sperturb/assembly.hpp"

namespace sperturb {

using Vector = std::vector<double>;

struct SingularSystemError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegenerateRatioError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void matvec(const TridiagonalSystem& s, const Vector& x, Vector& out) {
    const std::size_t n = x.size();
    out.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = s.diag[i] * x[i];
        if (i > 0)
            acc = std::fma(s.sub[i - 1], x[i - 1], acc);
        if (i + 1 < n)
            acc = std::fma(s.super[i], x[i + 1], acc);
        out[i] = acc;
    }
}

inline double row_max(const TridiagonalSystem& s, std::size_t i) {
    double m = std::abs(s.diag[i]);
    if (i > 0)
        m = std::max(m, std::abs(s.sub[i - 1]));
    if (i + 1 < s.diag.size())
        m = std::max(m, std::abs(s.super[i]));
    return m;
}

// elimination without row exchange; false when a pivot decays below
// 1e-14 of its original row magnitude
inline bool thomas(const TridiagonalSystem& s, const Vector& rhs, Vector& x) {
    const std::size_t n = s.diag.size();
    Vector d = s.diag;
    x = rhs;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (std::abs(d[i]) < 1e-14 * row_max(s, i))
            return false;
        const double w = s.sub[i] / d[i];
        d[i + 1] -= w * s.super[i];
        x[i + 1] -= w * x[i];
    }
    if (std::abs(d[n - 1]) < 1e-14 * row_max(s, n - 1))
        return false;
    x[n - 1] /= d[n - 1];
    for (std::size_t i = n - 1; i-- > 0;)
        x[i] = (x[i] - s.super[i] * x[i + 1]) / d[i];
    return true;
}

// banded elimination with partial pivoting; row swaps fill a second
// superdiagonal
inline void pivoted(const TridiagonalSystem& s, const Vector& rhs, Vector& x) {
    const std::size_t n = s.diag.size();
    Vector a(n, 0.0), b = s.diag, c(n, 0.0), d2(n, 0.0), f = rhs;
    for (std::size_t i = 1; i < n; ++i)
        a[i] = s.sub[i - 1];
    for (std::size_t i = 0; i + 1 < n; ++i)
        c[i] = s.super[i];
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (std::abs(a[k + 1]) > std::abs(b[k])) {
            std::swap(b[k], a[k + 1]);
            std::swap(c[k], b[k + 1]);
            std::swap(d2[k], c[k + 1]);
            std::swap(f[k], f[k + 1]);
        }
        if (b[k] == 0.0)
            throw SingularSystemError("solve_tridiagonal: singular system");
        const double m = a[k + 1] / b[k];
        b[k + 1] -= m * c[k];
        c[k + 1] -= m * d2[k];
        f[k + 1] -= m * f[k];
    }
    if (b[n - 1] == 0.0)
        throw SingularSystemError("solve_tridiagonal: singular system");
    x.assign(n, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        double acc = f[i];
        if (i + 1 < n)
            acc -= c[i] * x[i + 1];
        if (i + 2 < n)
            acc -= d2[i] * x[i + 2];
        x[i] = acc / b[i];
    }
}

inline void solve_once(const TridiagonalSystem& s, const Vector& rhs, Vector& x) {
    if (!thomas(s, rhs, x))
        pivoted(s, rhs, x);
}

}  // namespace detail

// solves A x = rhs with one iterative-refinement pass, then enforces the
// residual bound ||Ax - rhs||_inf <= 1e-10 (||A||_inf ||x||_inf + ||rhs||_inf)
inline Vector solve_with_load(const TridiagonalSystem& sys, const Vector& rhs) {
    const std::size_t n = sys.diag.size();
    if (rhs.size() != n)
        throw std::invalid_argument("solve_tridiagonal: load length mismatch");
    if (n == 0)
        return {};
    Vector x;
    detail::solve_once(sys, rhs, x);

    Vector r, corr;
    detail::matvec(sys, x, r);
    for (std::size_t i = 0; i < n; ++i)
        r[i] = rhs[i] - r[i];
    detail::solve_once(sys, r, corr);
    for (std::size_t i = 0; i < n; ++i)
        x[i] += corr[i];

    detail::matvec(sys, x, r);
    double res = 0.0, xmax = 0.0, fmax = 0.0, amax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        res = std::max(res, std::abs(rhs[i] - r[i]));
        xmax = std::max(xmax, std::abs(x[i]));
        fmax = std::max(fmax, std::abs(rhs[i]));
        double row = std::abs(sys.diag[i]);
        if (i > 0)
            row += std::abs(sys.sub[i - 1]);
        if (i + 1 < n)
            row += std::abs(sys.super[i]);
        amax = std::max(amax, row);
    }
    if (!(res <= 1e-10 * (amax * xmax + fmax)))
        throw SingularSystemError("solve_tridiagonal: residual bound violated");
    for (double v : x)
        if (!std::isfinite(v))
            throw SingularSystemError("solve_tridiagonal: non-finite solution");
    return x;
}

inline Vector solve_tridiagonal(const TridiagonalSystem& sys) {
    return solve_with_load(sys, sys.load);
}

// g = A^{-1} e_n, the response to a unit load at the last interior node
inline Vector green_column(const TridiagonalSystem& sys) {
    Vector e(sys.diag.size(), 0.0);
    e.back() = 1.0;
    return solve_with_load(sys, e);
}

// r_i = |g_{i-1}/g_i| for i in 2..n (1-based); by Cramer's rule this is the
// determinant ratio of A with column i-1 resp. i replaced by e_n
inline double det_ratio(const Vector& g, int i) {
    const int n = static_cast<int>(g.size());
    if (i < 2 || i > n)
        throw std::invalid_argument("det_ratio: index out of range 2..n");
    const double gi = g[static_cast<std::size_t>(i - 1)];
    if (std::abs(gi) <= 1e-300)
        throw DegenerateRatioError("det_ratio: g_i vanishes, ratio undefined");
    return std::abs(g[static_cast<std::size_t>(i - 2)] / gi);
}

}  // namespace sperturb
