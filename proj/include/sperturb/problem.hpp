#pragma once

// Two-point boundary value problem  -eps u'' - b u' + c u = f  on (0,1),
// u(0) = left_value, u(1) = right_value, with b <= 0, c >= 0, not both zero.
// The boundary layer sits at x = 1; problems with b > 0 must go through
// reflect() first.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <variant>
#include <vector>

namespace sperturb {

// coefficient list, constant term first: f(x) = c0 + c1 x + c2 x^2 + ...
struct Polynomial {
    std::vector<double> coeffs;
};

// unit point mass at alpha (Dirac load), alpha strictly inside the domain
struct PointMass {
    double alpha;
};

struct Generic {
    std::function<double(double)> f;
};

using Rhs = std::variant<Polynomial, PointMass, Generic>;

struct Problem {
    double epsilon = 0.0;
    double b = 0.0;
    double c = 0.0;
    Rhs rhs;
    double left_value = 0.0;
    double right_value = 0.0;
    double domain_lo = 0.0;
    double domain_hi = 1.0;
};

inline void check_problem(const Problem& p) {
    if (!(p.epsilon > 0.0))
        throw std::invalid_argument("problem: epsilon must be positive");
    if (p.b > 0.0)
        throw std::invalid_argument("problem: b must be <= 0 (use reflect for b > 0)");
    if (p.c < 0.0)
        throw std::invalid_argument("problem: c must be >= 0");
    if (p.b == 0.0 && p.c == 0.0)
        throw std::invalid_argument("problem: b and c cannot both be zero");
    if (!(p.domain_lo < p.domain_hi))
        throw std::invalid_argument("problem: domain endpoints must be strictly ordered");
    if (const auto* pm = std::get_if<PointMass>(&p.rhs)) {
        if (!(pm->alpha > p.domain_lo && pm->alpha < p.domain_hi))
            throw std::invalid_argument("problem: point mass must lie strictly inside the domain");
    }
    if (const auto* poly = std::get_if<Polynomial>(&p.rhs)) {
        if (poly->coeffs.empty())
            throw std::invalid_argument("problem: polynomial rhs needs at least one coefficient");
    }
}

// -eps u'' + u' = x, u(0) = u(1) = 0   (convection-diffusion, layer at x=1)
inline Problem make_cde(double epsilon) {
    if (!(epsilon > 0.0))
        throw std::invalid_argument("make_cde: epsilon must be positive");
    Problem p;
    p.epsilon = epsilon;
    p.b = -1.0;
    p.c = 0.0;
    p.rhs = Polynomial{{0.0, 1.0}};
    check_problem(p);
    return p;
}

// -eps u'' + u = x, u(0) = u(1) = 0   (reaction-diffusion)
inline Problem make_rde(double epsilon) {
    if (!(epsilon > 0.0))
        throw std::invalid_argument("make_rde: epsilon must be positive");
    Problem p;
    p.epsilon = epsilon;
    p.b = 0.0;
    p.c = 1.0;
    p.rhs = Polynomial{{0.0, 1.0}};
    check_problem(p);
    return p;
}

// -eps^2 u'' + u = delta_alpha, u(0) = u(1) = 0; the Problem's perturbation
// field holds eps^2.
inline Problem make_green(double epsilon, double alpha) {
    if (!(epsilon > 0.0))
        throw std::invalid_argument("make_green: epsilon must be positive");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("make_green: alpha must lie in (0,1)");
    Problem p;
    p.epsilon = epsilon * epsilon;
    p.b = 0.0;
    p.c = 1.0;
    p.rhs = PointMass{alpha};
    check_problem(p);
    return p;
}

enum class ExampleKind { cde, rde, green };

// Closed-form solution of one of the three examples. For green, epsilon is
// the parameter of -eps^2 u'' + u = delta_alpha (not the squared value).
struct ExactSolution {
    ExampleKind kind = ExampleKind::cde;
    double epsilon = 0.0;
    double alpha = 0.0;
};

// All layer exponentials are differences of exponentials with nonpositive
// arguments; nothing here overflows for any epsilon > 0.
inline double exact_eval(const ExactSolution& sol, double x) {
    if (!(x >= 0.0 && x <= 1.0))
        throw std::domain_error("exact_eval: x outside [0,1]");
    const double eps = sol.epsilon;
    switch (sol.kind) {
    case ExampleKind::cde: {
        const double em = std::exp(-1.0 / eps);
        return x * (x / 2.0 + eps)
             - (0.5 + eps) * (std::exp((x - 1.0) / eps) - em) / (1.0 - em);
    }
    case ExampleKind::rde: {
        const double r = std::sqrt(eps);
        return x - (std::exp((x - 1.0) / r) - std::exp(-(x + 1.0) / r))
                 / (1.0 - std::exp(-2.0 / r));
    }
    case ExampleKind::green: {
        // sinh(x/e) sinh((1-a)/e) / (e sinh(1/e)) for x <= a, symmetric in
        // x <-> a beyond; normalized by the unit flux jump
        // eps^2 (u'(a-) - u'(a+)) = 1.
        const double a = sol.alpha;
        const double d = std::abs(x - a);
        const double num = std::exp(-d / eps) - std::exp(-(x + a) / eps)
                         - std::exp(-(2.0 - x - a) / eps) + std::exp(-(2.0 - d) / eps);
        return num / (2.0 * eps * (1.0 - std::exp(-2.0 / eps)));
    }
    }
    throw std::logic_error("exact_eval: unknown kind");
}

inline double rhs_eval(const Rhs& rhs, double x) {
    if (const auto* poly = std::get_if<Polynomial>(&rhs)) {
        double v = 0.0;
        for (auto it = poly->coeffs.rbegin(); it != poly->coeffs.rend(); ++it)
            v = v * x + *it;
        return v;
    }
    if (const auto* g = std::get_if<Generic>(&rhs))
        return g->f(x);
    throw std::invalid_argument("rhs_eval: point mass has no pointwise value");
}

// Substitution w(x) = u(1-x): flips the convection sign, mirrors the load,
// and swaps the boundary values. Applying it twice gives back the problem.
inline Problem reflect(const Problem& p) {
    Problem q = p;
    q.b = -p.b;
    q.left_value = p.right_value;
    q.right_value = p.left_value;
    if (const auto* poly = std::get_if<Polynomial>(&p.rhs)) {
        // re-expand f(1-x) = sum c_k (1-x)^k in powers of x
        const auto& c = poly->coeffs;
        std::vector<double> out(c.size(), 0.0);
        std::vector<double> binom{1.0};  // coefficients of (1-x)^k
        for (std::size_t k = 0; k < c.size(); ++k) {
            for (std::size_t j = 0; j <= k; ++j)
                out[j] += c[k] * binom[j];
            std::vector<double> next(k + 2, 0.0);
            for (std::size_t j = 0; j <= k; ++j) {
                next[j] += binom[j];
                next[j + 1] -= binom[j];
            }
            binom = std::move(next);
        }
        q.rhs = Polynomial{std::move(out)};
    } else if (const auto* pm = std::get_if<PointMass>(&p.rhs)) {
        q.rhs = PointMass{1.0 - pm->alpha};
    } else {
        const auto f = std::get<Generic>(p.rhs).f;
        q.rhs = Generic{[f](double x) { return f(1.0 - x); }};
    }
    return q;
}

}  // namespace sperturb
