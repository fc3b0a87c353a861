#pragma once

// Fixed intersection points Q_i of two FEM solutions on nested meshes.
// Geometric path: root of the linear difference over intervals where both
// solutions are linear. Predictive path: sign pattern and minor ratios of the
// Green column A^{-1} e_n, no second solve required.

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "sperturb/fem.hpp"
#include "sperturb/linalg.hpp"

namespace sperturb {

struct Intersection {
    int interval_index = 0;  // i in 2..n, the interval (x_{i-1}, x_i) of the coarse mesh
    bool exists = false;
    bool coincident = false;
    double x = std::numeric_limits<double>::quiet_NaN();
    double y = std::numeric_limits<double>::quiet_NaN();
    double ratio = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

// both nodal differences below 1e-6 of the local value scale: the graphs are
// locally indistinguishable and a crossing position would be pure rounding
// noise, so no transversal intersection is reported
inline bool locally_coincident(double da, double db, double sa, double sb) {
    const double tau = 1e-6;
    return std::abs(da) <= tau * sa && std::abs(db) <= tau * sb;
}

}  // namespace detail

// a on the coarse mesh, b on the same mesh with extra points confined to one
// coarse interval; returns Q_i for every coarse interval i in 2..n that
// received no extra points
inline std::vector<Intersection> geometric_intersections(const FemSolution& a,
                                                         const FemSolution& b) {
    const auto& ca = a.mesh.nodes;
    const auto& cb = b.mesh.nodes;
    if (cb.size() < ca.size())
        throw std::invalid_argument("geometric_intersections: meshes not nested");

    // map coarse node -> fine node index; extra fine nodes must sit in a
    // single coarse interval
    std::vector<std::size_t> at(ca.size());
    int augmented_interval = -1;  // 1-based interval of the coarse mesh, -1 if none
    std::size_t j = 0;
    for (std::size_t i = 0; i < ca.size(); ++i) {
        std::size_t extras = 0;
        while (j < cb.size() && cb[j] != ca[i]) {
            ++extras;
            ++j;
        }
        if (j == cb.size())
            throw std::invalid_argument("geometric_intersections: meshes not nested");
        if (extras > 0) {
            if (i == 0 || (augmented_interval != -1 && augmented_interval != static_cast<int>(i)))
                throw std::invalid_argument(
                    "geometric_intersections: extra points span more than one interval");
            augmented_interval = static_cast<int>(i);
        }
        at[i] = j++;
    }
    if (j != cb.size())
        throw std::invalid_argument("geometric_intersections: meshes not nested");

    const int n = a.mesh.interior_count();
    std::vector<Intersection> out;
    for (int i = 2; i <= n; ++i) {
        if (i == augmented_interval)
            continue;
        Intersection q;
        q.interval_index = i;
        const std::size_t l = static_cast<std::size_t>(i - 1), r = static_cast<std::size_t>(i);
        const double al = a.values[l], ar = a.values[r];
        const double bl = b.values[at[l]], br = b.values[at[r]];
        const double dl = al - bl, dr = ar - br;
        if (detail::locally_coincident(dl, dr, std::abs(al) + std::abs(bl),
                                       std::abs(ar) + std::abs(br))) {
            q.coincident = true;
            out.push_back(q);
            continue;
        }
        if (dl * dr < 0.0) {
            q.exists = true;
            q.ratio = std::abs(dl / dr);
            q.x = (q.ratio * ca[r] + ca[l]) / (q.ratio + 1.0);
            q.y = (q.ratio * ar + al) / (q.ratio + 1.0);
        }
        out.push_back(q);
    }
    return out;
}

// existence in interval i iff g_{i-1} g_i < 0 for g = A^{-1} e_n; coordinates
// from the minor ratio r_i, independent of any augmentation
inline std::vector<Intersection> predicted_intersections(const TridiagonalSystem& sys,
                                                         const FemSolution& solution) {
    const int n = solution.mesh.interior_count();
    if (sys.size() != n)
        throw std::invalid_argument("predicted_intersections: system/mesh size mismatch");
    const Vector g = green_column(sys);
    const auto& nd = solution.mesh.nodes;
    std::vector<Intersection> out;
    for (int i = 2; i <= n; ++i) {
        Intersection q;
        q.interval_index = i;
        const double gl = g[static_cast<std::size_t>(i - 2)];
        const double gr = g[static_cast<std::size_t>(i - 1)];
        if (gl * gr < 0.0) {
            q.exists = true;
            q.ratio = det_ratio(g, i);
            const std::size_t l = static_cast<std::size_t>(i - 1), r = static_cast<std::size_t>(i);
            q.x = (q.ratio * nd[r] + nd[l]) / (q.ratio + 1.0);
            q.y = (q.ratio * solution.values[r] + solution.values[l]) / (q.ratio + 1.0);
        }
        out.push_back(q);
    }
    return out;
}

}  // namespace sperturb
