// Command-line front end: solves, intersection dumps, theorem verification,
// golden tables, and convergence studies, all emitting single-header CSV.
// Exit codes: 0 success / verification PASS, 1 numerical failure or
// verification FAIL, 2 usage error.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sperturb/sperturb.hpp"

namespace {

using namespace sperturb;

ExampleKind parse_kind(const std::string& s) {
    if (s == "cde")
        return ExampleKind::cde;
    if (s == "rde")
        return ExampleKind::rde;
    if (s == "green")
        return ExampleKind::green;
    throw CLI::ValidationError("--example", "expected one of cde|rde|green");
}

struct OutStream {
    std::ofstream file;
    std::ostream* os = &std::cout;

    explicit OutStream(const std::string& path) {
        if (!path.empty()) {
            file.open(path);
            if (!file)
                throw std::runtime_error("cannot open output file: " + path);
            os = &file;
        }
    }
    std::ostream& get() { return *os; }
};

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
    if (flag)
        return *flag;
    if (const char* env = std::getenv("SPERTURB_SEED"))
        return std::strtoull(env, nullptr, 10);
    return 20260825ULL;
}

Augmentation parse_add(const std::string& s, int n) {
    Augmentation aug;
    if (s == "last-mid") {
        aug.interval = n + 1;
        aug.positions = {0.5};
        return aug;
    }
    if (s == "first-mid") {
        aug.interval = 1;
        aug.positions = {0.5};
        return aug;
    }
    if (s.rfind("interval:", 0) == 0) {
        std::istringstream in(s.substr(9));
        std::string field;
        if (!std::getline(in, field, ':'))
            throw CLI::ValidationError("--add", "expected interval:k:pos[,pos...]");
        aug.interval = std::stoi(field);
        if (!std::getline(in, field))
            throw CLI::ValidationError("--add", "expected interval:k:pos[,pos...]");
        std::istringstream ps(field);
        std::string tok;
        while (std::getline(ps, tok, ','))
            aug.positions.push_back(std::stod(tok));
        if (aug.positions.empty())
            throw CLI::ValidationError("--add", "no positions given");
        return aug;
    }
    throw CLI::ValidationError("--add", "expected last-mid|first-mid|interval:k:pos[,pos...]");
}

void require_alpha(ExampleKind kind, const std::optional<double>& alpha) {
    if (kind == ExampleKind::green && !alpha)
        throw CLI::RequiredError("--alpha (required for --example green)");
}

void dump_mesh_csv(const Mesh& m, const std::string& path) {
    std::ofstream f(path);
    if (!f)
        throw std::runtime_error("cannot open mesh dump file: " + path);
    CsvWriter w(f);
    w.header({"x"});
    for (double x : m.nodes)
        w.row({csv_double(x)});
}

void dump_system_csv(const TridiagonalSystem& sys, const std::string& path) {
    std::ofstream f(path);
    if (!f)
        throw std::runtime_error("cannot open system dump file: " + path);
    CsvWriter w(f);
    w.header({"i", "sub", "diag", "super", "load"});
    const int n = sys.size();
    for (int i = 1; i <= n; ++i) {
        const std::size_t k = static_cast<std::size_t>(i - 1);
        w.row({std::to_string(i), i > 1 ? csv_double(sys.sub[k - 1]) : std::string(),
               csv_double(sys.diag[k]), i < n ? csv_double(sys.super[k]) : std::string(),
               csv_double(sys.load[k])});
    }
}

struct SolveOpts {
    std::string example = "cde", mesh = "uniform", out, dump_mesh, dump_system;
    double eps = 0.0;
    int n = 0;
    std::optional<double> alpha;
    bool left_moment = false;
};

int run_solve(const SolveOpts& o) {
    const ExampleKind kind = parse_kind(o.example);
    require_alpha(kind, o.alpha);
    const double alpha = o.alpha.value_or(0.5);
    const Problem p = example_problem(kind, o.eps, alpha);
    const ExactSolution es = example_exact(kind, o.eps, alpha);

    Mesh m = [&] {
        if (o.mesh == "uniform")
            return uniform(o.n);
        if (o.mesh == "shishkin")
            return shishkin(o.n, shishkin_theta(kind, p.epsilon, o.n));
        if (o.mesh == "eps-uniform")
            return eps_uniform_mesh(uniform(o.n), p.epsilon, p.b, p.c);
        throw CLI::ValidationError("--mesh", "expected uniform|shishkin|eps-uniform");
    }();

    if (!o.dump_mesh.empty())
        dump_mesh_csv(m, o.dump_mesh);
    const StencilVariant variant =
        o.left_moment ? StencilVariant::left_moment_super : StencilVariant::galerkin;
    if (!o.dump_system.empty())
        dump_system_csv(assemble(p, m, variant), o.dump_system);

    const FemSolution s = solve(p, m, variant);
    OutStream out(o.out);
    CsvWriter w(out.get());
    w.header({"x", "value", "exact", "error"});
    for (std::size_t i = 0; i < m.nodes.size(); ++i) {
        const double ex = exact_eval(es, m.nodes[i]);
        w.row_values({m.nodes[i], s.values[i], ex, std::abs(s.values[i] - ex)});
    }
    return 0;
}

struct IntersectOpts {
    std::string example = "cde", add, out;
    double eps = 0.0;
    int n = 0;
    std::optional<double> alpha;
    bool predicted = false;
};

int run_intersections(const IntersectOpts& o) {
    const ExampleKind kind = parse_kind(o.example);
    require_alpha(kind, o.alpha);
    const double alpha = o.alpha.value_or(0.5);
    const Problem p = example_problem(kind, o.eps, alpha);
    const ExactSolution es = example_exact(kind, o.eps, alpha);
    const Mesh base = uniform(o.n);
    const FemSolution a = solve(p, base);

    std::vector<Intersection> qs;
    if (o.predicted) {
        qs = predicted_intersections(assemble(p, base), a);
    } else {
        const Augmentation aug = parse_add(o.add, o.n);
        std::vector<double> pts;
        const double xl = base.nodes[static_cast<std::size_t>(aug.interval - 1)];
        const double h = base.widths[static_cast<std::size_t>(aug.interval - 1)];
        for (double f : aug.positions)
            pts.push_back(xl + f * h);
        qs = geometric_intersections(a, solve(p, add_points(base, pts)));
    }

    OutStream out(o.out);
    CsvWriter w(out.get());
    w.header({"i", "exists", "x", "y", "r", "err_vs_exact"});
    for (const Intersection& q : qs) {
        const double err = q.exists ? std::abs(q.y - exact_eval(es, q.x))
                                    : std::numeric_limits<double>::quiet_NaN();
        w.row({std::to_string(q.interval_index), q.exists ? "1" : "0", csv_double(q.x),
               csv_double(q.y), csv_double(q.ratio), csv_double(err)});
    }
    return 0;
}

struct VerifyOpts {
    std::string example = "cde", interval = "last";
    double eps = 0.0;
    int n = 0, trials = 20;
    std::optional<double> alpha;
    std::optional<std::uint64_t> seed;
};

int run_verify_invariance(const VerifyOpts& o) {
    const ExampleKind kind = parse_kind(o.example);
    require_alpha(kind, o.alpha);
    int k;
    if (o.interval == "last")
        k = o.n + 1;
    else if (o.interval == "first")
        k = 1;
    else
        k = std::stoi(o.interval);
    const double dev = verify_invariance(kind, o.eps, o.n, o.trials, resolve_seed(o.seed), k,
                                         o.alpha.value_or(0.5));
    const double threshold = 1e-9;
    const bool pass = dev <= threshold;
    std::cout << "max_deviation=" << csv_double(dev) << " threshold=" << csv_double(threshold)
              << (pass ? " PASS" : " FAIL") << "\n";
    if (!pass)
        std::cerr << "invariance deviation exceeds threshold\n";
    return pass ? 0 : 1;
}

int run_verify_isolation(const VerifyOpts& o) {
    const ExampleKind kind = parse_kind(o.example);
    const double dev = verify_isolation(kind, o.eps, o.n);
    const double threshold = 1e-12;
    const bool pass = dev <= threshold;
    std::cout << "max_deviation=" << csv_double(dev) << " threshold=" << csv_double(threshold)
              << (pass ? " PASS" : " FAIL") << "\n";
    if (!pass)
        std::cerr << "isolation deviation exceeds threshold\n";
    return pass ? 0 : 1;
}

struct TableOpts {
    int index = 0;
    std::optional<double> eps;
    std::string out;
};

const std::vector<int> kTableNs = {4, 8, 16, 32, 64, 128, 256, 512};

int run_table(const TableOpts& o) {
    OutStream out(o.out);
    CsvWriter w(out.get());
    if (o.index == 1 || o.index == 3) {
        const ExampleKind kind = (o.index == 1) ? ExampleKind::cde : ExampleKind::rde;
        std::vector<double> eps_list = o.eps ? std::vector<double>{*o.eps}
                                             : std::vector<double>{1e-5, 1e-10};
        w.header({"eps", "n", "err_eps_uniform", "err_shishkin"});
        for (double eps : eps_list) {
            const ExperimentReport rep = table_shishkin_comparison(kind, eps, kTableNs);
            for (const auto& r : rep.rows)
                w.row_values({eps, r[0], r[1], r[2]});
            for (const auto& note : rep.notes)
                std::cerr << "eps=" << csv_double(eps) << " " << note << "\n";
        }
        return 0;
    }
    if (o.index == 2) {
        // crossings of the plain and midpoint-refined solutions on an 8-element mesh
        const ExperimentReport rep =
            table_qi_accuracy(ExampleKind::cde, 1e-10, 7, Augmentation{8, {0.5}});
        w.header(rep.columns);
        for (const auto& r : rep.rows)
            w.row_values(r);
        return 0;
    }
    if (o.index == 4) {
        // the refined interval contains the point mass in both cases:
        // mass at 13/14 with the last interval split, mass at 1/2 with the 4th split
        w.header({"augmentation", "i", "x_q", "err_vs_exact", "err_vs_interp"});
        const ExperimentReport last = table_qi_accuracy(
            ExampleKind::green, 1e-5, 6, Augmentation{7, {0.5}}, 13.0 / 14.0);
        for (const auto& r : last.rows)
            w.row({"last", csv_double(r[0]), csv_double(r[1]), csv_double(r[2]),
                   csv_double(r[3])});
        const ExperimentReport interior =
            table_qi_accuracy(ExampleKind::green, 1e-5, 6, Augmentation{4, {0.5}}, 0.5);
        for (const auto& r : interior.rows)
            w.row({"interior:4", csv_double(r[0]), csv_double(r[1]), csv_double(r[2]),
                   csv_double(r[3])});
        return 0;
    }
    throw CLI::ValidationError("table", "expected index 1|2|3|4");
}

struct ConvergenceOpts {
    std::string example = "cde", out;
    double eps = 0.0;
    std::vector<int> n_list = kTableNs;
    std::optional<double> alpha;
};

int run_convergence(const ConvergenceOpts& o) {
    const ExampleKind kind = parse_kind(o.example);
    require_alpha(kind, o.alpha);
    const ExperimentReport rep =
        convergence_study(kind, o.eps, o.n_list, o.alpha.value_or(0.5));
    OutStream out(o.out);
    CsvWriter w(out.get());
    w.header({"n", "error", "fitted_slope"});
    for (const auto& r : rep.rows)
        w.row({csv_double(r[0]), csv_double(r[1]), ""});
    if (rep.below_precision)
        w.row({"", "", "below-precision"});
    else
        w.row({"", "", csv_double(rep.slope)});
    return 0;
}

}  // namespace

namespace sperturb {

int run(int argc, char** argv) {
    CLI::App app{"epsilon-uniform linear FEM for two-point boundary layer problems"};
    app.require_subcommand(1);

    SolveOpts so;
    CLI::App* solve_cmd = app.add_subcommand("solve", "solve one problem, CSV (x,value,exact,error)");
    solve_cmd->add_option("--example", so.example, "cde|rde|green")->required();
    solve_cmd->add_option("--eps", so.eps, "perturbation parameter")->required();
    solve_cmd->add_option("--n", so.n, "interior node count of the base mesh")->required();
    solve_cmd->add_option("--mesh", so.mesh, "uniform|shishkin|eps-uniform");
    solve_cmd->add_option("--alpha", so.alpha, "point-mass location (green only)");
    solve_cmd->add_option("--out", so.out, "output CSV path (default stdout)");
    solve_cmd->add_option("--dump-mesh", so.dump_mesh, "write mesh nodes CSV here");
    solve_cmd->add_option("--dump-system", so.dump_system, "write assembled system CSV here");
    solve_cmd->add_flag("--stencil-left-moment", so.left_moment,
                        "super-diagonal reaction term uses the left element width");

    IntersectOpts io;
    CLI::App* isc_cmd = app.add_subcommand(
        "intersections", "intersections of coarse and augmented solutions, CSV");
    isc_cmd->add_option("--example", io.example, "cde|rde|green")->required();
    isc_cmd->add_option("--eps", io.eps, "perturbation parameter")->required();
    isc_cmd->add_option("--n", io.n, "interior node count of the coarse mesh")->required();
    isc_cmd->add_option("--add", io.add, "last-mid|first-mid|interval:k:pos[,pos...]");
    isc_cmd->add_option("--alpha", io.alpha, "point-mass location (green only)");
    isc_cmd->add_option("--out", io.out, "output CSV path (default stdout)");
    isc_cmd->add_flag("--predicted", io.predicted,
                      "use the Green-column predictor instead of an augmented solve");

    VerifyOpts vo;
    CLI::App* verify_cmd = app.add_subcommand("verify", "check a theorem, print PASS/FAIL");
    verify_cmd->require_subcommand(1);
    CLI::App* inv_cmd = verify_cmd->add_subcommand(
        "invariance", "intersection coordinates are augmentation-independent");
    inv_cmd->add_option("--example", vo.example, "cde|rde|green")->required();
    inv_cmd->add_option("--eps", vo.eps, "perturbation parameter")->required();
    inv_cmd->add_option("--n", vo.n, "interior node count")->required();
    inv_cmd->add_option("--trials", vo.trials, "random augmentations (default 20)");
    inv_cmd->add_option("--seed", vo.seed, "RNG seed (fallback: SPERTURB_SEED)");
    inv_cmd->add_option("--interval", vo.interval, "last|first|<k>");
    inv_cmd->add_option("--alpha", vo.alpha, "point-mass location (green only)");
    CLI::App* iso_cmd = verify_cmd->add_subcommand(
        "isolation", "extra layer node decouples the outer solution");
    iso_cmd->add_option("--example", vo.example, "cde|rde|green")->required();
    iso_cmd->add_option("--eps", vo.eps, "perturbation parameter")->required();
    iso_cmd->add_option("--n", vo.n, "interior node count")->required();

    TableOpts to;
    CLI::App* table_cmd = app.add_subcommand("table", "reproduce a golden table as CSV");
    table_cmd->add_option("index", to.index, "table index 1|2|3|4")->required();
    table_cmd->add_option("--eps", to.eps, "restrict tables 1/3 to one eps");
    table_cmd->add_option("--out", to.out, "output CSV path (default stdout)");

    ConvergenceOpts co;
    CLI::App* conv_cmd =
        app.add_subcommand("convergence", "errors vs n with fitted log-log slope");
    conv_cmd->add_option("--example", co.example, "cde|rde|green")->required();
    conv_cmd->add_option("--eps", co.eps, "perturbation parameter")->required();
    conv_cmd->add_option("--n-list", co.n_list, "comma-separated mesh sizes")->delimiter(',');
    conv_cmd->add_option("--alpha", co.alpha, "point-mass location (green only)");
    conv_cmd->add_option("--out", co.out, "output CSV path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (solve_cmd->parsed())
            return run_solve(so);
        if (isc_cmd->parsed())
            return run_intersections(io);
        if (verify_cmd->parsed())
            return inv_cmd->parsed() ? run_verify_invariance(vo) : run_verify_isolation(vo);
        if (table_cmd->parsed())
            return run_table(to);
        if (conv_cmd->parsed())
            return run_convergence(co);
    } catch (const CLI::ParseError& e) {
        // post-parse validation (value grammar) counts as usage error
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace sperturb

int main(int argc, char** argv) { return sperturb::run(argc, argv); }
