#include "cli.hpp"

#include "sphcover/constellation.hpp"
#include "sphcover/errors.hpp"
#include "sphcover/io.hpp"
#include "sphcover/qp.hpp"
#include "sphcover/recursive_cover.hpp"
#include "sphcover/sampling.hpp"
#include "sphcover/witness.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

namespace sphcover::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr int kExitYes = 0;
constexpr int kExitNo = 1;
constexpr int kExitError = 2;

unsigned default_threads()
{
    return std::max(1u, std::thread::hardware_concurrency());
}

std::ifstream open_input(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open '" + path + "'");
    }
    return in;
}

Constellation load_constellation(const std::string& path, const std::string& theta_text)
{
    auto in = open_input(path);
    const ConstellationFile file = read_constellation_file(in);
    std::optional<double> theta;
    if (!theta_text.empty()) {
        theta = parse_theta(theta_text);
    }
    return to_constellation(file, theta);
}

std::string format_vec(const Vec& v)
{
    std::string s;
    char buf[32];
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%.10g", v[k]);
        s += (k ? " " : "");
        s += buf;
    }
    return s;
}

std::string format_num(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

json vec_json(const Vec& v)
{
    json a = json::array();
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        a.push_back(v[k]);
    }
    return a;
}

json stats_json(const CoverStats& s)
{
    return json{{"recursive_calls", s.recursive_calls},
                {"max_depth", s.max_depth},
                {"rotations", s.rotations},
                {"max_fanout", s.max_fanout}};
}

// Infinite values are not representable in JSON.
json number_or_inf(double x)
{
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    return x;
}

struct VerifyOpts {
    std::string file;
    std::string theta;
    double eps = kDefaultEps;
    bool witness = false;
    bool json_out = false;
    unsigned threads = default_threads();
};

int cmd_verify(const VerifyOpts& o, std::ostream& out)
{
    const Constellation cst = load_constellation(o.file, o.theta);
    CoverConfig cfg;
    cfg.tol.eps = o.eps;
    cfg.threads = o.threads;
    const Verdict v = cover(cst, cfg);

    json j{{"command", "verify"},
           {"verdict", v.covered ? "COVERED" : "NOT_COVERED"},
           {"dim", cst.dim()},
           {"caps", cst.size()},
           {"stats", stats_json(v.stats)}};
    std::optional<WitnessReport> report;
    std::string witness_error;
    if (!v.covered && o.witness) {
        try {
            report = find_uncovered(cst, {}, cfg);
        } catch (const AlphaExhausted& e) {
            witness_error = e.what();
        }
        if (report) {
            j["witness"] = vec_json(report->point);
            j["margin"] = report->margin;
            j["alpha"] = report->alpha_used;
            j["attempts"] = report->attempts;
        } else {
            j["witness"] = nullptr;
            j["witness_error"] = witness_error;
        }
    }

    if (o.json_out) {
        out << j.dump(2) << '\n';
    } else {
        out << (v.covered ? "COVERED" : "NOT_COVERED") << '\n';
        out << "stats: calls=" << v.stats.recursive_calls << " max_depth=" << v.stats.max_depth
            << " rotations=" << v.stats.rotations << " max_fanout=" << v.stats.max_fanout << '\n';
        if (report) {
            out << "witness: " << format_vec(report->point) << '\n';
            out << "margin: " << format_num(report->margin) << '\n';
            out << "alpha: " << format_num(report->alpha_used) << '\n';
        } else if (!witness_error.empty()) {
            out << "witness: unavailable (" << witness_error << ")\n";
        }
    }
    return v.covered ? kExitYes : kExitNo;
}

struct McOpts {
    std::string file;
    std::string theta;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    bool json_out = false;
    unsigned threads = default_threads();
};

int cmd_mc(const McOpts& o, std::ostream& out)
{
    const Constellation cst = load_constellation(o.file, o.theta);
    const McVerdict v = mc_verify(cst, o.samples, o.seed, o.threads);
    json j{{"command", "mc"},
           {"verdict", v.no_counterexample ? "NO_COUNTEREXAMPLE" : "NOT_COVERED"},
           {"samples_used", v.samples_used},
           {"seed", v.seed}};
    if (v.witness) {
        j["witness"] = vec_json(*v.witness);
        j["margin"] = cst.margin(*v.witness);
    }
    if (o.json_out) {
        out << j.dump(2) << '\n';
    } else {
        out << (v.no_counterexample ? "NO_COUNTEREXAMPLE" : "NOT_COVERED") << '\n';
        out << "samples: " << v.samples_used << " seed: " << v.seed << '\n';
        if (v.witness) {
            out << "witness: " << format_vec(*v.witness) << '\n';
            out << "margin: " << format_num(cst.margin(*v.witness)) << '\n';
        }
    }
    return v.no_counterexample ? kExitYes : kExitNo;
}

struct QpOpts {
    std::string file;
    std::string theta;
    std::size_t starts = 16;
    std::vector<std::string> extra;
    std::uint64_t seed = 0;
    bool json_out = false;
};

Vec parse_start(const std::string& text, int dim)
{
    std::vector<double> values;
    std::stringstream ss(text);
    std::string field;
    while (std::getline(ss, field, ',')) {
        values.push_back(std::stod(field));
    }
    if (static_cast<int>(values.size()) != dim) {
        throw InvalidArgument("--start needs " + std::to_string(dim) + " comma-separated values");
    }
    return Eigen::Map<Vec>(values.data(), dim);
}

int cmd_qp(const QpOpts& o, std::ostream& out)
{
    const Constellation cst = load_constellation(o.file, o.theta);
    QpCoverConfig cfg;
    cfg.start_count = o.starts;
    cfg.seed = o.seed;
    for (const auto& s : o.extra) {
        cfg.extra_starts.push_back(parse_start(s, cst.dim()));
    }
    const QpVerdict v = cover_qp(cst, cfg);

    json j{{"command", "qp"},
           {"verdict", v.covered ? "COVERED" : "NOT_COVERED"},
           {"heuristic", v.covered},
           {"degenerate", v.degenerate},
           {"infeasible", v.infeasible},
           {"m", v.m},
           {"m_hat", number_or_inf(v.m_hat)},
           {"seed", o.seed}};
    if (v.x_max.size() > 0) {
        j["x_max"] = vec_json(v.x_max);
    }
    if (o.json_out) {
        out << j.dump(2) << '\n';
    } else {
        out << (v.covered ? "COVERED" : "NOT_COVERED") << '\n';
        if (v.covered) {
            out << "HEURISTIC — false positives possible\n";
        }
        if (v.degenerate) {
            out << "degenerate constraint system\n";
        } else if (v.infeasible) {
            out << "constraint system infeasible\n";
        } else {
            out << "m: " << format_num(v.m) << '\n';
            out << "M_hat: " << format_num(v.m_hat) << '\n';
            if (v.x_max.size() > 0) {
                out << "x_max: " << format_vec(v.x_max) << '\n';
            }
        }
    }
    return v.covered ? kExitYes : kExitNo;
}

struct GenerateOpts {
    int dim = 3;
    int count = 0;
    std::uint64_t seed = 0;
    std::string out_path;
    std::string theta;
    int max_iter = 50000;
    bool json_out = false;
};

int cmd_generate(const GenerateOpts& o, std::ostream& out)
{
    RelaxConfig rc;
    rc.d = o.dim;
    rc.n = o.count;
    rc.seed = o.seed;
    rc.max_iter = o.max_iter;
    const RelaxResult r = relax(rc);
    std::optional<double> theta;
    if (!o.theta.empty()) {
        theta = parse_theta(o.theta);
    }

    std::ostringstream body;
    body << "# relaxed constellation: n=" << o.count << " seed=" << o.seed << '\n';
    write_constellation(body, o.dim, r.points, theta);
    if (o.out_path.empty() || o.out_path == "-") {
        out << body.str();
    } else {
        std::ofstream f(o.out_path);
        if (!f) {
            throw Error("cannot write '" + o.out_path + "'");
        }
        f << body.str();
    }
    if (o.json_out) {
        out << json{{"command", "generate"},
                    {"dim", o.dim},
                    {"count", o.count},
                    {"seed", o.seed},
                    {"iterations", r.iterations},
                    {"converged", r.converged},
                    {"initial_energy", r.initial_energy},
                    {"final_energy", r.final_energy}}
                   .dump(2)
            << '\n';
    }
    return kExitYes;
}

struct BoundOpts {
    int dim = 3;
    std::string theta;
    int restarts = 50;
    std::uint64_t seed = 0;
    int nstart = 30;
    int patience = 3;
    bool json_out = false;
    unsigned threads = default_threads();
};

int cmd_bound(const BoundOpts& o, std::ostream& out)
{
    BoundConfig cfg;
    cfg.d = o.dim;
    cfg.theta = parse_theta(o.theta);
    cfg.restarts = o.restarts;
    cfg.seed = o.seed;
    cfg.n_start = o.nstart;
    cfg.patience = o.patience;
    cfg.threads = o.threads;
    const BoundSearchResult r = bound_search(cfg);

    if (o.json_out) {
        json log = json::array();
        for (const auto& a : r.log) {
            log.push_back({{"n", a.n},
                           {"restart", a.restart},
                           {"seed", a.seed},
                           {"covered", a.covered},
                           {"relax_converged", a.relax_converged}});
        }
        json covering = json::array();
        for (const auto& p : r.covering) {
            covering.push_back(vec_json(p));
        }
        out << json{{"command", "bound"},
                    {"dim", r.dim},
                    {"theta", r.theta},
                    {"m_u", r.m_u},
                    {"failed_n", r.failed_n},
                    {"seed", o.seed},
                    {"patience", o.patience},
                    {"attempts", log},
                    {"covering", covering}}
                   .dump(2)
            << '\n';
    } else {
        int current = 0;
        int tried = 0;
        bool covered = false;
        auto flush = [&] {
            if (current != 0) {
                out << "n=" << current << " restarts=" << tried << ' '
                    << (covered ? "covered" : "none covered") << '\n';
            }
        };
        for (const auto& a : r.log) {
            if (a.n != current) {
                flush();
                current = a.n;
                tried = 0;
                covered = false;
            }
            ++tried;
            covered = covered || a.covered;
        }
        flush();
        out << "M_u(" << r.dim << ") = " << r.m_u << '\n';
    }
    return kExitYes;
}

struct ReduceOpts {
    std::string qp_file;
    std::string graph_file;
    int k = 0;
    bool json_out = false;
    unsigned threads = default_threads();
};

int cmd_qpreduce(const ReduceOpts& o, std::ostream& out)
{
    QpInstance q;
    if (!o.graph_file.empty()) {
        auto in = open_input(o.graph_file);
        const Graph g = read_graph(in);
        q = clique_instance(g, o.k);
    } else if (!o.qp_file.empty()) {
        auto in = open_input(o.qp_file);
        q = read_qp(in);
    } else {
        throw InvalidArgument("qpreduce needs a QP file or --clique with --k");
    }
    CoverConfig cfg;
    cfg.threads = o.threads;
    const bool yes = qp_to_cover(q, cfg);
    if (o.json_out) {
        out << json{{"command", "qpreduce"},
                    {"verdict", yes ? "YES" : "NO"},
                    {"rows", q.rows()},
                    {"dim", q.dim()},
                    {"c", q.c}}
                   .dump(2)
            << '\n';
    } else {
        out << (yes ? "YES" : "NO") << '\n';
    }
    return yes ? kExitYes : kExitNo;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Hypersphere cap coverage verification"};
    app.require_subcommand(1);

    VerifyOpts verify;
    auto* sv = app.add_subcommand("verify", "Decide coverage with the recursive solver");
    sv->add_option("file", verify.file, "Constellation file")->required();
    sv->add_option("--theta", verify.theta, "Threshold for caps without one (decimal or sqrt3/2)");
    sv->add_option("--eps", verify.eps, "Boundary tolerance");
    sv->add_flag("--witness", verify.witness, "Report a certified uncovered point");
    sv->add_flag("--json", verify.json_out, "JSON output");
    sv->add_option("--threads", verify.threads, "Worker threads")->check(CLI::PositiveNumber);

    McOpts mc;
    auto* sm = app.add_subcommand("mc", "Monte Carlo falsification");
    sm->add_option("file", mc.file, "Constellation file")->required();
    sm->add_option("--theta", mc.theta, "Threshold for caps without one");
    sm->add_option("--samples", mc.samples, "Number of sample points")->required()->check(
        CLI::PositiveNumber);
    sm->add_option("--seed", mc.seed, "Random seed")->required();
    sm->add_flag("--json", mc.json_out, "JSON output");
    sm->add_option("--threads", mc.threads, "Worker threads")->check(CLI::PositiveNumber);

    QpOpts qp;
    auto* sq = app.add_subcommand("qp", "QP-based heuristic check");
    sq->add_option("file", qp.file, "Constellation file")->required();
    sq->add_option("--theta", qp.theta, "Threshold for caps without one");
    sq->add_option("--starts", qp.starts, "Number of default starting points");
    sq->add_option("--start", qp.extra, "Extra starting point x1,x2,...");
    sq->add_option("--seed", qp.seed, "Seed for random starts");
    sq->add_flag("--json", qp.json_out, "JSON output");

    GenerateOpts gen;
    auto* sg = app.add_subcommand("generate", "Relaxed near-uniform constellation");
    sg->add_option("--dim", gen.dim, "Dimension")->required();
    sg->add_option("--count", gen.count, "Number of points")->required();
    sg->add_option("--seed", gen.seed, "Random seed")->required();
    sg->add_option("--out", gen.out_path, "Output file ('-' for stdout)");
    sg->add_option("--theta", gen.theta, "Write this threshold on every row");
    sg->add_option("--max-iter", gen.max_iter, "Relaxation iteration cap");
    sg->add_flag("--json", gen.json_out, "JSON summary");

    BoundOpts bound;
    auto* sb = app.add_subcommand("bound", "Search for the smallest covering constellation");
    sb->add_option("--dim", bound.dim, "Dimension")->required();
    sb->add_option("--theta", bound.theta, "Cap threshold")->required();
    sb->add_option("--restarts", bound.restarts, "Constellations tried per n");
    sb->add_option("--seed", bound.seed, "Random seed")->required();
    sb->add_option("--nstart", bound.nstart, "Starting constellation size");
    sb->add_option("--patience", bound.patience,
                   "Stop after this many consecutive sizes without a covering")
        ->check(CLI::PositiveNumber);
    sb->add_flag("--json", bound.json_out, "JSON output");
    sb->add_option("--threads", bound.threads, "Worker threads")->check(CLI::PositiveNumber);

    ReduceOpts reduce;
    auto* sr = app.add_subcommand("qpreduce", "Decide a concave QP instance via coverage");
    sr->add_option("qpfile", reduce.qp_file, "QP instance file");
    sr->add_option("--clique", reduce.graph_file, "Graph file for the k-clique instance");
    sr->add_option("--k", reduce.k, "Clique size");
    sr->add_flag("--json", reduce.json_out, "JSON output");
    sr->add_option("--threads", reduce.threads, "Worker threads")->check(CLI::PositiveNumber);

    std::vector<const char*> argv{"sphcover"};
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : kExitError;
    }

    try {
        if (*sv) {
            return cmd_verify(verify, out);
        }
        if (*sm) {
            return cmd_mc(mc, out);
        }
        if (*sq) {
            return cmd_qp(qp, out);
        }
        if (*sg) {
            return cmd_generate(gen, out);
        }
        if (*sb) {
            return cmd_bound(bound, out);
        }
        if (*sr) {
            return cmd_qpreduce(reduce, out);
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}

} // namespace sphcover::cli
