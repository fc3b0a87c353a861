#pragma once

// Verification suites and table reproduction: layer isolation through the
// extra node, intersection invariance under random augmentations, error
// tables against Shishkin baselines, intersection accuracy tables, and
// convergence studies with fitted slopes.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "sperturb/fem.hpp"
#include "sperturb/intersect.hpp"
#include "sperturb/mesh.hpp"
#include "sperturb/problem.hpp"
#include "sperturb/rng.hpp"

namespace sperturb {

struct Augmentation {
    int interval = 0;                // 1-based interval (x_{k-1}, x_k); n+1 is the layer interval
    std::vector<double> positions;   // fractions in (0,1) of that interval
};

struct ExperimentReport {
    ExampleKind kind{};
    double epsilon = 0.0;            // headline parameter, unsquared for the point-mass example
    std::uint64_t seed = 0;
    std::string timestamp;           // metadata only, never serialized into data rows
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<std::string> notes;  // diagnostics, e.g. unconstructible cells
    bool has_slope = false;
    double slope = 0.0;
    bool below_precision = false;
};

inline Problem example_problem(ExampleKind kind, double epsilon, double alpha = 0.5) {
    switch (kind) {
        case ExampleKind::cde:
            return make_cde(epsilon);
        case ExampleKind::rde:
            return make_rde(epsilon);
        case ExampleKind::green:
            return make_green(epsilon, alpha);
    }
    throw std::invalid_argument("example_problem: unknown kind");
}

inline ExactSolution example_exact(ExampleKind kind, double epsilon, double alpha = 0.5) {
    return ExactSolution{kind, epsilon, alpha};
}

namespace detail {

inline std::string iso_timestamp_utc() {
    std::time_t t = std::time(nullptr);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline ExperimentReport make_report(ExampleKind kind, double epsilon, std::uint64_t seed = 0) {
    ExperimentReport rep;
    rep.kind = kind;
    rep.epsilon = epsilon;
    rep.seed = seed;
    rep.timestamp = iso_timestamp_utc();
    return rep;
}

inline std::vector<double> augmentation_points(const Mesh& base, const Augmentation& aug) {
    const int nint = base.interior_count();
    if (aug.interval < 1 || aug.interval > nint + 1)
        throw std::invalid_argument("augmentation: interval index out of range");
    if (aug.positions.empty())
        throw std::invalid_argument("augmentation: no points");
    const std::size_t k = static_cast<std::size_t>(aug.interval);
    const double xl = base.nodes[k - 1], h = base.widths[k - 1];
    std::vector<double> pts;
    pts.reserve(aug.positions.size());
    for (double f : aug.positions) {
        if (!(f > 0.0 && f < 1.0))
            throw std::invalid_argument("augmentation: position fraction outside (0,1)");
        pts.push_back(xl + f * h);
    }
    return pts;
}

}  // namespace detail

// Solves on the mesh with the extra layer node, then re-solves the truncated
// problem on [0, s1] whose right boundary value is the exact u(s1). The
// coupling entry a_{n,s1} vanishes by construction, so the two solutions
// agree at x_1..x_n; returns the max deviation found there.
inline double verify_isolation(ExampleKind kind, double epsilon, int n) {
    const double alpha = 0.5;
    const Problem p = example_problem(kind, epsilon, alpha);
    const Mesh em = eps_uniform_mesh(uniform(n), p.epsilon, p.b, p.c);
    const FemSolution uhat = solve(p, em);

    const double s1 = em.nodes[em.nodes.size() - 2];
    Problem aux = p;
    aux.domain_hi = s1;
    aux.right_value = exact_eval(example_exact(kind, epsilon, alpha), s1);
    Mesh am;
    am.nodes.assign(em.nodes.begin(), em.nodes.end() - 1);
    am.widths.assign(em.widths.begin(), em.widths.end() - 1);
    const FemSolution w = solve(aux, am);

    double dev = 0.0;
    for (int i = 1; i <= n; ++i)
        dev = std::max(dev, std::abs(uhat.values[static_cast<std::size_t>(i)] -
                                     w.values[static_cast<std::size_t>(i)]));
    return dev;
}

// Runs `trials` random augmentations of one interval (sizes 1..10, positions
// uniform in the middle 96% of the interval) and returns the largest spread
// of any intersection coordinate across trials, over intervals where the
// intersection exists in every trial.
inline double verify_invariance(ExampleKind kind, double epsilon, int n, int trials,
                                std::uint64_t seed, int augmented_interval_index,
                                double alpha = 0.5) {
    if (trials < 2)
        throw std::invalid_argument("verify_invariance: need at least 2 trials");
    const Problem p = example_problem(kind, epsilon, alpha);
    const Mesh base = uniform(n);
    if (augmented_interval_index < 1 || augmented_interval_index > n + 1)
        throw std::invalid_argument("verify_invariance: interval index out of range");
    const FemSolution a = solve(p, base);

    const std::size_t k = static_cast<std::size_t>(augmented_interval_index);
    const double xl = base.nodes[k - 1], h = base.widths[k - 1];
    SplitMix64 rng(seed);

    struct Spread {
        bool seen = false, all_exist = true;
        double xlo = 0, xhi = 0, ylo = 0, yhi = 0;
    };
    std::vector<Spread> acc(static_cast<std::size_t>(n) + 1);

    for (int t = 0; t < trials; ++t) {
        const int m = 1 + static_cast<int>(rng.next() % 10);
        std::vector<double> pts;
        for (int attempt = 0;; ++attempt) {
            if (attempt > 100)
                throw std::runtime_error("verify_invariance: cannot draw distinct points");
            pts.clear();
            for (int j = 0; j < m; ++j)
                pts.push_back(xl + (0.02 + 0.96 * rng.next_double()) * h);
            std::sort(pts.begin(), pts.end());
            bool ok = true;
            for (std::size_t j = 0; j + 1 < pts.size(); ++j)
                if (pts[j + 1] - pts[j] <= 1e-13)
                    ok = false;
            if (ok)
                break;
        }
        const FemSolution b = solve(p, add_points(base, pts));
        for (const Intersection& q : geometric_intersections(a, b)) {
            Spread& s = acc[static_cast<std::size_t>(q.interval_index)];
            if (!q.exists) {
                s.all_exist = false;
                continue;
            }
            if (!s.seen) {
                s.seen = true;
                s.xlo = s.xhi = q.x;
                s.ylo = s.yhi = q.y;
            } else {
                s.xlo = std::min(s.xlo, q.x);
                s.xhi = std::max(s.xhi, q.x);
                s.ylo = std::min(s.ylo, q.y);
                s.yhi = std::max(s.yhi, q.y);
            }
        }
    }

    double dev = 0.0;
    for (const Spread& s : acc)
        if (s.seen && s.all_exist)
            dev = std::max(dev, std::max(s.xhi - s.xlo, s.yhi - s.ylo));
    return dev;
}

// Per n: error of the layer-node solution at x_1..x_n, and error of the
// Shishkin baseline at its own coarse nodes y_1..y_n (transition included).
// Cells where the layer offset does not fit the last element carry NaN and a
// diagnostic note.
inline ExperimentReport table_shishkin_comparison(ExampleKind kind, double epsilon,
                                                  const std::vector<int>& n_list,
                                                  double alpha = 0.5) {
    if (n_list.empty())
        throw std::invalid_argument("table_shishkin_comparison: empty n list");
    ExperimentReport rep = detail::make_report(kind, epsilon);
    rep.columns = {"n", "err_eps_uniform", "err_shishkin"};
    const Problem p = example_problem(kind, epsilon, alpha);
    const ExactSolution es = example_exact(kind, epsilon, alpha);
    for (int n : n_list) {
        double e1 = std::numeric_limits<double>::quiet_NaN();
        try {
            const Mesh em = eps_uniform_mesh(uniform(n), p.epsilon, p.b, p.c);
            e1 = max_node_error(solve(p, em), interpolant(es, em), n);
        } catch (const LayerTooWideError& ex) {
            rep.notes.push_back("n=" + std::to_string(n) + ": " + ex.what());
        }
        const double theta = shishkin_theta(kind, p.epsilon, n);
        const Mesh sm = shishkin(n, theta);
        const double e2 = max_node_error(solve(p, sm), interpolant(es, sm), n);
        rep.rows.push_back({static_cast<double>(n), e1, e2});
    }
    return rep;
}

// One augmentation, every surviving intersection: position, deviation from
// the exact solution, deviation from the exact solution's interpolant on the
// coarse mesh.
inline ExperimentReport table_qi_accuracy(ExampleKind kind, double epsilon, int n,
                                          const Augmentation& aug, double alpha = 0.5) {
    ExperimentReport rep = detail::make_report(kind, epsilon);
    rep.columns = {"i", "x_q", "err_vs_exact", "err_vs_interp"};
    const Problem p = example_problem(kind, epsilon, alpha);
    const ExactSolution es = example_exact(kind, epsilon, alpha);
    const Mesh base = uniform(n);
    const FemSolution a = solve(p, base);
    const FemSolution ui = interpolant(es, base);
    const FemSolution b = solve(p, add_points(base, detail::augmentation_points(base, aug)));
    for (const Intersection& q : geometric_intersections(a, b)) {
        if (!q.exists)
            continue;
        rep.rows.push_back({static_cast<double>(q.interval_index), q.x,
                            std::abs(q.y - exact_eval(es, q.x)), std::abs(q.y - eval(ui, q.x))});
    }
    return rep;
}

// Errors of the layer-node solution per n plus the least-squares slope of
// log(error) against log(n). Errors at machine precision make the fit
// meaningless; the below_precision flag replaces it then.
inline ExperimentReport convergence_study(ExampleKind kind, double epsilon,
                                          const std::vector<int>& n_list, double alpha = 0.5) {
    if (n_list.size() < 4)
        throw std::invalid_argument("convergence_study: need at least 4 mesh sizes");
    int nmin = n_list.front(), nmax = n_list.front();
    for (int n : n_list) {
        nmin = std::min(nmin, n);
        nmax = std::max(nmax, n);
    }
    if (nmax < 4 * nmin)
        throw std::invalid_argument("convergence_study: n range must span at least 2 octaves");

    ExperimentReport rep = detail::make_report(kind, epsilon);
    rep.columns = {"n", "error"};
    const Problem p = example_problem(kind, epsilon, alpha);
    const ExactSolution es = example_exact(kind, epsilon, alpha);
    for (int n : n_list) {
        const Mesh em = eps_uniform_mesh(uniform(n), p.epsilon, p.b, p.c);
        const double err = max_node_error(solve(p, em), interpolant(es, em), n);
        rep.rows.push_back({static_cast<double>(n), err});
    }

    double emax = 0.0;
    for (const auto& r : rep.rows)
        emax = std::max(emax, r[1]);
    if (emax <= 1e-12) {
        rep.below_precision = true;
        return rep;
    }

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double cnt = static_cast<double>(rep.rows.size());
    for (const auto& r : rep.rows) {
        const double lx = std::log(r[0]), ly = std::log(r[1]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    rep.has_slope = true;
    rep.slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    return rep;
}

}  // namespace sperturb
