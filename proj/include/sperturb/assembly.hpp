#pragma once

// Linear-element Galerkin discretization of -eps u'' - b u' + c u = f with
// hat-function trial and test space. Row i of the tridiagonal system couples
// node i to its neighbours through the element widths h_i = x_i - x_{i-1}
// and h_{i+1} = x_{i+1} - x_i.
//
// The reaction moment in the super entry uses the right element width; the
// left_moment_super variant substitutes the left width there, which breaks
// the symmetry c would otherwise contribute and shifts reaction-dominated
// results slightly.

#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "sperturb/mesh.hpp"
#include "sperturb/problem.hpp"

namespace sperturb {

enum class StencilVariant { galerkin, left_moment_super };

struct StencilRow {
    double sub, diag, super;
};

inline StencilRow stiffness_row(double h_i, double h_next, double eps, double b, double c,
                                StencilVariant variant = StencilVariant::galerkin) {
    if (!(h_i > 0.0 && h_next > 0.0))
        throw std::invalid_argument("stiffness_row: element widths must be positive");
    StencilRow r;
    r.sub = -eps / h_i + b / 2.0 + c * h_i / 6.0;
    r.diag = eps * (1.0 / h_i + 1.0 / h_next) + c * (h_i + h_next) / 3.0;
    const double super_moment = (variant == StencilVariant::left_moment_super) ? h_i : h_next;
    r.super = -eps / h_next - b / 2.0 + c * super_moment / 6.0;
    return r;
}

struct TridiagonalSystem {
    std::vector<double> sub;    // n-1 entries, sub[i] couples row i+1 to row i
    std::vector<double> diag;   // n entries
    std::vector<double> super;  // n-1 entries, super[i] couples row i to row i+1
    std::vector<double> load;   // n entries

    int size() const { return static_cast<int>(diag.size()); }
};

// hat centered at interior node i, evaluated anywhere in [x_0, x_{n+1}]
inline double hat_value(const Mesh& m, int i, double x) {
    const std::size_t k = static_cast<std::size_t>(i);
    const double xl = m.nodes[k - 1], xc = m.nodes[k], xr = m.nodes[k + 1];
    if (x <= xl || x >= xr)
        return 0.0;
    if (x <= xc)
        return (x - xl) / m.widths[k - 1];
    return (xr - x) / m.widths[k];
}

namespace detail {

// coefficients of f(a + t) in powers of t, ascending
inline std::vector<double> shift_poly(const std::vector<double>& coeffs, double a) {
    std::vector<double> g(coeffs.size(), 0.0);
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
        double binom = 1.0;  // C(j, k) * a^{j-k}, built from k = j downward
        double apow = 1.0;
        for (std::size_t k = j + 1; k-- > 0;) {
            g[k] += coeffs[j] * binom * apow;
            if (k > 0) {
                binom = binom * k / (j - k + 1);
                apow *= a;
            }
        }
    }
    return g;
}

// int_0^h g(t) (t/h) dt and int_0^h g(t) (1 - t/h) dt for ascending g
inline double moment_rising(const std::vector<double>& g, double h) {
    double acc = 0.0, hp = 1.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        hp *= h;  // h^{k+1}
        acc += g[k] * hp / (static_cast<double>(k) + 2.0);
    }
    return acc;
}

inline double moment_falling(const std::vector<double>& g, double h) {
    double acc = 0.0, hp = 1.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        hp *= h;  // h^{k+1}
        acc += g[k] * hp / ((static_cast<double>(k) + 1.0) * (static_cast<double>(k) + 2.0));
    }
    return acc;
}

// 3-point Gauss-Legendre on [a, b]
inline double gauss3(const std::function<double(double)>& f, double a, double b) {
    static const double s = std::sqrt(0.6);
    static const std::array<double, 3> xs = {-s, 0.0, s};
    static const std::array<double, 3> ws = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double acc = 0.0;
    for (int q = 0; q < 3; ++q)
        acc += ws[static_cast<std::size_t>(q)] * f(mid + half * xs[static_cast<std::size_t>(q)]);
    return acc * half;
}

}  // namespace detail

// int f(x) phi_i(x) dx over the two elements adjacent to interior node i:
// exact moments for polynomials, phi_i(alpha) for a point mass, 3-point
// Gauss per element otherwise
inline double load_entry(const Mesh& m, int i, const Rhs& rhs) {
    if (i < 1 || i > m.interior_count())
        throw std::invalid_argument("load_entry: interior node index out of range");
    const std::size_t k = static_cast<std::size_t>(i);
    const double xl = m.nodes[k - 1], xc = m.nodes[k];
    const double hl = m.widths[k - 1], hr = m.widths[k];

    if (const auto* poly = std::get_if<Polynomial>(&rhs)) {
        const auto gl = detail::shift_poly(poly->coeffs, xl);
        const auto gr = detail::shift_poly(poly->coeffs, xc);
        return detail::moment_rising(gl, hl) + detail::moment_falling(gr, hr);
    }
    if (const auto* pm = std::get_if<PointMass>(&rhs))
        return hat_value(m, i, pm->alpha);
    const auto& f = std::get<Generic>(rhs).f;
    const double xr = m.nodes[k + 1];
    auto rising = [&](double x) { return f(x) * (x - xl) / hl; };
    auto falling = [&](double x) { return f(x) * (xr - x) / hr; };
    return detail::gauss3(rising, xl, xc) + detail::gauss3(falling, xc, xr);
}

inline TridiagonalSystem assemble(const Problem& p, const Mesh& m,
                                  StencilVariant variant = StencilVariant::galerkin) {
    check_problem(p);
    const int n = m.interior_count();
    TridiagonalSystem sys;
    sys.diag.resize(static_cast<std::size_t>(n));
    sys.load.resize(static_cast<std::size_t>(n));
    sys.sub.resize(static_cast<std::size_t>(n) - 1);
    sys.super.resize(static_cast<std::size_t>(n) - 1);
    for (int i = 1; i <= n; ++i) {
        const StencilRow row =
            stiffness_row(m.width(i - 1), m.width(i), p.epsilon, p.b, p.c, variant);
        sys.diag[static_cast<std::size_t>(i - 1)] = row.diag;
        sys.load[static_cast<std::size_t>(i - 1)] = load_entry(m, i, p.rhs);
        if (i > 1)
            sys.sub[static_cast<std::size_t>(i - 2)] = row.sub;
        else
            sys.load[0] -= row.sub * p.left_value;
        if (i < n)
            sys.super[static_cast<std::size_t>(i - 1)] = row.super;
        else
            sys.load[static_cast<std::size_t>(n - 1)] -= row.super * p.right_value;
    }
    return sys;
}

}  // namespace sperturb
