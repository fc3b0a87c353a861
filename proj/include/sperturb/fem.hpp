#pragma once

// End-to-end solve on a given mesh, piecewise-linear evaluation, exact
// solution interpolants, and the nodal max norm used by the error tables.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "sperturb/assembly.hpp"
#include "sperturb/linalg.hpp"
#include "sperturb/mesh.hpp"
#include "sperturb/problem.hpp"

namespace sperturb {

struct FemSolution {
    Mesh mesh;
    std::vector<double> values;  // nodal values at x_0..x_{n+1}, boundaries included
};

inline FemSolution solve(const Problem& p, const Mesh& m,
                         StencilVariant variant = StencilVariant::galerkin) {
    const TridiagonalSystem sys = assemble(p, m, variant);
    const Vector interior = solve_tridiagonal(sys);
    FemSolution s;
    s.mesh = m;
    s.values.reserve(m.nodes.size());
    s.values.push_back(p.left_value);
    s.values.insert(s.values.end(), interior.begin(), interior.end());
    s.values.push_back(p.right_value);
    return s;
}

inline double eval(const FemSolution& s, double x) {
    const auto& nd = s.mesh.nodes;
    if (x < nd.front() || x > nd.back())
        throw std::domain_error("eval: point outside the mesh domain");
    auto it = std::upper_bound(nd.begin(), nd.end(), x);
    std::size_t j = static_cast<std::size_t>(it - nd.begin());
    if (j == 0)
        j = 1;
    if (j == nd.size())
        j = nd.size() - 1;
    const double t = (x - nd[j - 1]) / s.mesh.widths[j - 1];
    return (1.0 - t) * s.values[j - 1] + t * s.values[j];
}

// piecewise-linear function agreeing with the exact solution at every node
inline FemSolution interpolant(const ExactSolution& sol, const Mesh& m) {
    FemSolution s;
    s.mesh = m;
    s.values.reserve(m.nodes.size());
    for (double x : m.nodes)
        s.values.push_back(exact_eval(sol, x));
    return s;
}

// max over interior nodes x_1..x_upto of |a_i - b_i|; exact for the max-norm
// difference of two piecewise linears on [0, x_upto] sharing this mesh
inline double max_node_error(const FemSolution& a, const FemSolution& b, int upto) {
    if (a.mesh.nodes != b.mesh.nodes)
        throw std::invalid_argument("max_node_error: solutions live on different meshes");
    if (upto < 1 || upto > a.mesh.interior_count())
        throw std::invalid_argument("max_node_error: node index out of range");
    double worst = 0.0;
    for (int i = 1; i <= upto; ++i)
        worst = std::max(worst, std::abs(a.values[static_cast<std::size_t>(i)] -
                                         b.values[static_cast<std::size_t>(i)]));
    return worst;
}

}  // namespace sperturb
