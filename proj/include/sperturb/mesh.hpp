#pragma once

// Grids on [0,1]: uniform, uniform plus arbitrary added points, piecewise
// uniform with a layer region (Shishkin), and uniform plus the single layer
// isolation node s1.
//
// Element widths are carried alongside the nodes. The isolation node is
// placed at x_n + offset where the offset solves c h^2 - 3 b h - 6 eps = 0;
// storing that offset as the element width (instead of re-differencing node
// coordinates near 1) is what lets the coupling entry a_{n,s1} vanish to the
// last bit in the assembled system.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "sperturb/problem.hpp"

namespace sperturb {

struct LayerTooWideError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Mesh {
    std::vector<double> nodes;   // x_0 < x_1 < ... < x_{n+1}
    std::vector<double> widths;  // widths[i] = x_{i+1} - x_i, carried exactly

    int interior_count() const { return static_cast<int>(nodes.size()) - 2; }
    double width(int element) const { return widths[static_cast<std::size_t>(element)]; }
};

inline Mesh mesh_from_nodes(std::vector<double> nodes) {
    if (nodes.size() < 4)
        throw std::invalid_argument("mesh: need at least 2 interior nodes");
    Mesh m;
    m.widths.resize(nodes.size() - 1);
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        m.widths[i] = nodes[i + 1] - nodes[i];
        if (!(m.widths[i] > 0.0))
            throw std::invalid_argument("mesh: nodes must be strictly increasing");
    }
    m.nodes = std::move(nodes);
    return m;
}

// n interior nodes at i/(n+1)
inline Mesh uniform(int n) {
    if (n < 2)
        throw std::invalid_argument("uniform: need n >= 2");
    std::vector<double> nodes(static_cast<std::size_t>(n) + 2);
    for (int i = 0; i <= n + 1; ++i)
        nodes[static_cast<std::size_t>(i)] = static_cast<double>(i) / (n + 1);
    nodes.back() = 1.0;
    return mesh_from_nodes(std::move(nodes));
}

// merged mesh; points must be strictly inside and not duplicate a node
// (tolerance 1e-14 of the domain width)
inline Mesh add_points(const Mesh& m, std::vector<double> points) {
    if (points.empty())
        return m;
    const double lo = m.nodes.front(), hi = m.nodes.back();
    const double dup_tol = 1e-14 * (hi - lo);
    std::sort(points.begin(), points.end());
    for (std::size_t i = 0; i + 1 < points.size(); ++i)
        if (points[i + 1] - points[i] <= dup_tol)
            throw std::invalid_argument("add_points: duplicate point");
    for (double s : points)
        if (!(s > lo && s < hi))
            throw std::invalid_argument("add_points: point outside the open domain");

    for (double s : points)
        for (double x : m.nodes)
            if (std::abs(s - x) <= dup_tol)
                throw std::invalid_argument("add_points: point duplicates a node");

    std::vector<double> merged;
    std::vector<double> widths;
    merged.reserve(m.nodes.size() + points.size());
    std::size_t pi = 0;
    for (std::size_t i = 0; i + 1 < m.nodes.size(); ++i) {
        const double xl = m.nodes[i], xr = m.nodes[i + 1];
        merged.push_back(xl);
        double prev = xl;
        bool split = false;
        while (pi < points.size() && points[pi] < xr) {
            widths.push_back(points[pi] - prev);
            prev = points[pi];
            merged.push_back(points[pi]);
            split = true;
            ++pi;
        }
        // untouched elements keep their carried width
        widths.push_back(split ? xr - prev : m.widths[i]);
    }
    merged.push_back(m.nodes.back());
    Mesh out;
    out.nodes = std::move(merged);
    out.widths = std::move(widths);
    return out;
}

// 2n elements: n uniform on [0, 1-theta], n uniform on [1-theta, 1]
inline Mesh shishkin(int n, double theta) {
    if (n < 2)
        throw std::invalid_argument("shishkin: need n >= 2");
    if (!(theta > 0.0 && theta < 1.0))
        throw std::invalid_argument("shishkin: theta must lie in (0,1)");
    const double split = 1.0 - theta;
    std::vector<double> nodes(static_cast<std::size_t>(2 * n) + 1);
    for (int i = 0; i <= n; ++i)
        nodes[static_cast<std::size_t>(i)] = split * i / n;
    for (int i = 1; i <= n; ++i)
        nodes[static_cast<std::size_t>(n + i)] = split + theta * i / n;
    nodes.back() = 1.0;
    return mesh_from_nodes(std::move(nodes));
}

// Layer-region width for the Shishkin split. epsilon is the coefficient of
// -u'' in the assembled system (for the point-mass example that is the
// squared parameter).
inline double shishkin_theta(ExampleKind kind, double epsilon, int n) {
    if (n < 2)
        throw std::invalid_argument("shishkin_theta: need n >= 2");
    if (!(epsilon > 0.0))
        throw std::invalid_argument("shishkin_theta: epsilon must be positive");
    const double ln2n = std::log(2.0 * n);
    if (kind == ExampleKind::cde)
        return std::min(0.5, 2.0 * epsilon * ln2n);   // |b| = 1
    return std::min(0.5, std::sqrt(epsilon) * ln2n);  // c = 1
}

// positive root of c h^2 - 3 b h - 6 eps = 0 (element width that cancels the
// coupling entry); conjugate form avoids cancellation when eps*c << b^2
inline double eps_uniform_offset(double epsilon, double b, double c) {
    if (!(epsilon > 0.0))
        throw std::invalid_argument("eps_uniform_offset: epsilon must be positive");
    if (b > 0.0 || c < 0.0 || (b == 0.0 && c == 0.0))
        throw std::invalid_argument("eps_uniform_offset: need b <= 0, c >= 0, not both zero");
    if (c == 0.0)
        return -2.0 * epsilon / b;
    return 12.0 * epsilon / (std::sqrt(9.0 * b * b + 24.0 * epsilon * c) - 3.0 * b);
}

// base mesh plus the isolation node s1 = x_n + offset; the new element's
// width is the offset itself
inline Mesh eps_uniform_mesh(const Mesh& base, double epsilon, double b, double c) {
    const double h = eps_uniform_offset(epsilon, b, c);
    const std::size_t last = base.nodes.size() - 1;
    const double xn = base.nodes[last - 1];
    const double s1 = xn + h;
    if (!(s1 < base.nodes[last]))
        throw LayerTooWideError("eps_uniform_mesh: isolation offset does not fit in the last element");
    Mesh out;
    out.nodes.assign(base.nodes.begin(), base.nodes.end() - 1);
    out.nodes.push_back(s1);
    out.nodes.push_back(base.nodes[last]);
    out.widths.assign(base.widths.begin(), base.widths.end() - 1);
    out.widths.push_back(h);
    out.widths.push_back(base.nodes[last] - s1);
    return out;
}

}  // namespace sperturb
