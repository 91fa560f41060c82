// Command-line front end. Every number printed comes from a library call;
// the CLI only parses, dispatches and formats.
//
// Exit codes: 0 ok, 1 verification failure, 2 usage/parse error,
//             3 invariant violation, 4 record self-consistency failure.

#include "rotosense/rotosense.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace rotosense;

constexpr int kExitOk           = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage        = 2;
constexpr int kExitInvariant    = 3;
constexpr int kExitInconsistent = 4;

struct OutputTarget {
    std::ofstream file;
    std::ostream* os = &std::cout;
    bool to_file     = false;

    explicit OutputTarget(const std::string& path)
    {
        if (path.empty()) return;
        file.open(path);
        if (!file) throw std::invalid_argument("cannot open output file '" + path + "'");
        os      = &file;
        to_file = true;
    }
    std::ostream& stream() { return *os; }
    /// stream for human-readable summaries that must not corrupt CSV output
    std::ostream& summary() { return to_file ? std::cout : std::cerr; }
};

std::string join_numbers(const std::vector<double>& v, const char* sep = ", ")
{
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out += sep;
        out += format_number(v[i]);
    }
    return out;
}

std::vector<double> parse_profile_list(const std::string& text)
{
    std::vector<double> vals;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        // accept simple fractions like 3/4 alongside decimals
        const auto slash = tok.find('/');
        if (slash != std::string::npos)
            vals.push_back(std::stod(tok.substr(0, slash)) / std::stod(tok.substr(slash + 1)));
        else
            vals.push_back(std::stod(tok));
    }
    return vals;
}

// ---------------------------------------------------------------------------

struct MeasuresOpts {
    std::string j, state = "coherent", format = "plain", output;
    double chi = 0.0;
};

int cmd_measures(const MeasuresOpts& o)
{
    const Spin j      = Spin::from_string(o.j);
    const SpinState s = parse_state_spec(j, o.state, o.chi);
    OutputTarget out(o.output);

    const AnticoherenceProfile p = profile(s);
    if (o.format == "json") {
        nlohmann::json doc;
        doc["two_j"]    = j.two_j();
        doc["j"]        = j.str();
        doc["measures"] = p.measures;
        doc["purities"] = p.purities;
        out.stream() << doc.dump(2) << '\n';
    } else if (o.format == "csv") {
        out.stream() << "t,purity,measure\n";
        for (int t = 0; t <= j.two_j(); ++t) {
            out.stream() << t << ',' << format_number(p.purities[t]) << ',';
            if (t >= 1 && t <= j.floor_j()) out.stream() << format_number(p.measures[t - 1]);
            out.stream() << '\n';
        }
    } else {
        out.stream() << "j = " << j.str() << '\n';
        if (p.measures.empty())
            out.stream() << "A: (none; every spin-1/2 state is coherent)\n";
        else
            out.stream() << "A: " << join_numbers(p.measures) << '\n';
        out.stream() << "purities: " << join_numbers(p.purities) << '\n';
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct PhiOpts {
    std::string j, eta, grid, route = "closed", format = "plain", output;
    int t             = 0;
    bool coefficients = false;
};

int cmd_phi(const PhiOpts& o)
{
    const Spin j = Spin::from_string(o.j);
    if (o.coefficients) {
        OutputTarget out(o.output);
        angular_table(j).write_csv(out.stream());
        return kExitOk;
    }
    if (o.eta.empty() == o.grid.empty())
        throw std::invalid_argument("phi: give exactly one of --eta or --grid");
    if (o.route != "closed" && o.route != "dicke")
        throw std::invalid_argument("phi: --route must be closed or dicke");
    const AngularTable& table = angular_table(j);
    if (o.t < 0 || o.t > table.max_t())
        throw std::domain_error("phi: t out of range 0..floor(j)");
    OutputTarget out(o.output);

    auto value = [&](double eta) {
        if (o.route == "dicke") return phi_via_dicke(j, eta)[o.t];
        return table.phi(o.t, eta);
    };

    if (!o.eta.empty()) {
        out.stream() << format_number(value(parse_angle(o.eta))) << '\n';
        return kExitOk;
    }
    const auto grid = parse_grid(o.grid);
    if (o.format == "csv") out.stream() << "eta,value\n";
    for (double eta : grid)
        out.stream() << format_number(eta) << (o.format == "csv" ? "," : "  ")
                     << format_number(value(eta)) << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct FidelityOpts {
    std::string j, state = "coherent", eta, grid, route = "closed", format = "plain", output;
    double chi = 0.0;
};

int cmd_fidelity(const FidelityOpts& o)
{
    const Spin j      = Spin::from_string(o.j);
    const SpinState s = parse_state_spec(j, o.state, o.chi);
    if (o.eta.empty() == o.grid.empty())
        throw std::invalid_argument("fidelity: give exactly one of --eta or --grid");
    if (o.route != "closed" && o.route != "quadrature" && o.route != "both")
        throw std::invalid_argument("fidelity: --route must be closed, quadrature or both");
    OutputTarget out(o.output);

    const AngularTable& table = angular_table(j);
    const QuadratureGrid qgrid = QuadratureGrid::for_spin_two_j(j.two_j());

    auto closed = [&](double eta) { return average_fidelity(table, s, eta); };
    auto quad   = [&](double eta) { return quadrature_fidelity(s, eta, qgrid); };

    std::vector<double> etas =
        o.eta.empty() ? parse_grid(o.grid) : std::vector<double>{parse_angle(o.eta)};

    const bool single = !o.grid.empty() ? false : true;
    if (o.format == "csv") {
        out.stream() << (o.route == "both"        ? "eta,closed,quadrature,difference\n"
                         : o.route == "quadrature" ? "eta,value,route\n"
                                                    : "eta,value\n");
    }
    for (double eta : etas) {
        if (o.route == "both") {
            const double c = closed(eta), q = quad(eta);
            if (o.format == "csv")
                out.stream() << format_number(eta) << ',' << format_number(c) << ','
                             << format_number(q) << ',' << format_number(c - q) << '\n';
            else if (single)
                out.stream() << "closed     = " << format_number(c) << '\n'
                             << "quadrature = " << format_number(q) << '\n'
                             << "difference = " << format_number(c - q) << '\n';
            else
                out.stream() << format_number(eta) << "  " << format_number(c) << "  "
                             << format_number(q) << "  " << format_number(c - q) << '\n';
        } else {
            const double v = (o.route == "quadrature") ? quad(eta) : closed(eta);
            if (o.format == "csv" && o.route == "quadrature")
                out.stream() << format_number(eta) << ',' << format_number(v) << ",quadrature\n";
            else if (o.format == "csv")
                out.stream() << format_number(eta) << ',' << format_number(v) << '\n';
            else if (single)
                out.stream() << format_number(v) << '\n';
            else
                out.stream() << format_number(eta) << "  " << format_number(v) << '\n';
        }
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct OptimizeOpts {
    std::string j, eta, format = "plain", output;
    SearchConfig cfg;
    bool maximize = false;
};

int check_record(const AngularTable& table, const SweepRecord& rec)
{
    const double direct = average_fidelity(table, rec.best_state, rec.eta);
    if (std::fabs(direct - rec.best_value) > 1e-12) {
        std::cerr << "self-consistency failure: record value " << format_number(rec.best_value)
                  << " vs direct evaluation " << format_number(direct) << " at eta = "
                  << format_number(rec.eta) << '\n';
        return kExitInconsistent;
    }
    return kExitOk;
}

int cmd_optimize(const OptimizeOpts& o)
{
    const Spin j     = Spin::from_string(o.j);
    const double eta = parse_angle(o.eta);
    OutputTarget out(o.output);

    const AngularTable& table = angular_table(j);
    const SweepRecord rec = o.maximize ? maximize_fidelity(table, eta, o.cfg)
                                       : minimize_fidelity(table, eta, o.cfg);
    if (int rc = check_record(table, rec); rc != kExitOk) return rc;

    if (o.format == "json") {
        out.stream() << sweep_to_json({rec}).dump(2) << '\n';
    } else if (o.format == "csv") {
        write_sweep_csv(out.stream(), {rec});
    } else {
        out.stream() << "eta = " << format_number(rec.eta) << '\n'
                     << (o.maximize ? "max" : "min") << " fidelity = "
                     << format_number(rec.best_value) << '\n'
                     << "A: " << join_numbers(rec.profile.measures) << '\n'
                     << "restarts hitting best: " << rec.restarts_hitting_best << '/'
                     << o.cfg.restarts << '\n'
                     << "state: " << state_to_json(rec.best_state).dump() << '\n';
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct SweepOpts {
    std::string j, grid, format = "csv", output;
    SearchConfig cfg;
    bool maximize = false;
};

int cmd_sweep(const SweepOpts& o)
{
    const Spin j    = Spin::from_string(o.j);
    const auto grid = parse_grid(o.grid);
    OutputTarget out(o.output);

    const AngularTable& table = angular_table(j);
    const auto records        = sweep(table, grid, o.cfg, o.maximize);
    for (const auto& rec : records)
        if (int rc = check_record(table, rec); rc != kExitOk) return rc;

    const auto transitions = detect_transitions(table, records);
    if (o.format == "json")
        out.stream() << sweep_to_json(records, transitions).dump(2) << '\n';
    else
        write_sweep_csv(out.stream(), records);

    auto& sum = out.summary();
    sum << "transitions: " << transitions.size() << '\n';
    for (const auto& t : transitions) {
        sum << "  profile change in (" << format_number(t.lo) << ", " << format_number(t.hi)
            << ")";
        if (t.solved) sum << ": eta* = " << format_number(t.eta_star);
        else sum << ": no fidelity crossing inside bracket";
        sum << "  [" << join_numbers(t.left_profile) << "] -> [" << join_numbers(t.right_profile)
            << "]\n";
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct CriticalOpts {
    std::string j, profile1, profile2, bracket;
    bool first_zero = false;
};

int cmd_critical(const CriticalOpts& o)
{
    const Spin j              = Spin::from_string(o.j);
    const AngularTable& table = angular_table(j);

    if (o.first_zero) {
        std::cout << format_number(first_zero_phi1(table)) << '\n';
        return kExitOk;
    }
    if (o.profile1.empty() || o.profile2.empty() || o.bracket.empty())
        throw std::invalid_argument("critical: need --profile1, --profile2 and --bracket");
    const auto a1 = parse_profile_list(o.profile1);
    const auto a2 = parse_profile_list(o.profile2);
    const auto colon = o.bracket.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("critical: --bracket expects lo:hi");
    const double lo = parse_angle(o.bracket.substr(0, colon));
    const double hi = parse_angle(o.bracket.substr(colon + 1));

    const CriticalAngle ca = critical_angle(table, a1, a2, {lo, hi});
    std::cout << "eta* = " << format_number(ca.eta_star) << '\n'
              << "bracket = [" << format_number(ca.bracket.first) << ", "
              << format_number(ca.bracket.second) << "]\n"
              << "residual = " << format_number(ca.residual) << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct VerifyOpts {
    std::string checks = "oracle,dicke,identity,negativity";
    std::string max_j;
    std::uint64_t seed = 1234;
    int threads        = 0;
};

struct CheckResult {
    std::string name;
    std::string detail;
    bool pass = true;
};

CheckResult verify_oracle(int max_two_j, std::uint64_t seed)
{
    CheckResult res{"oracle", "", true};
    double worst = 0.0;
    for (int two_j = 1; two_j <= max_two_j; ++two_j) {
        const Spin j((int)two_j);
        const AngularTable& table = angular_table(j);
        const QuadratureGrid grid = QuadratureGrid::for_spin_two_j(two_j);
        std::vector<SpinState> states;
        states.push_back(named_state("coherent", j));
        if (two_j >= 2) states.push_back(named_state("cat", j));
        for (int r = 0; r < 3; ++r)
            states.push_back(SpinState::haar_random(j, seed + 97 * two_j + r));
        for (const auto& s : states) {
            for (int i = 1; i <= 15; ++i) {
                const double eta = 2.0 * M_PI * i / 16.0;
                const double c   = average_fidelity(table, s, eta);
                const double q   = quadrature_fidelity(s, eta, grid);
                const double d   = std::fabs(c - q);
                worst            = std::max(worst, d);
                if (d >= 1e-10 && res.pass) {
                    res.pass   = false;
                    res.detail = "first failure at (j = " + j.str() +
                                 ", eta = " + format_number(eta) + ", route = quadrature)";
                }
            }
        }
    }
    if (res.pass) res.detail = "max |closed - quadrature| = " + format_number(worst);
    return res;
}

CheckResult verify_dicke(int max_two_j)
{
    CheckResult res{"dicke", "", true};
    double worst = 0.0;
    for (int two_j = 1; two_j <= max_two_j; ++two_j) {
        const Spin j(two_j);
        const AngularTable& table = angular_table(j);
        for (int i = 0; i <= 40; ++i) {
            const double eta = M_PI * i / 40.0;
            const auto closed = table.phi_all(eta);
            const auto viaD   = phi_via_dicke(j, eta);
            for (size_t t = 0; t < closed.size(); ++t) {
                const double d = std::fabs(closed[t] - viaD[t]);
                worst          = std::max(worst, d);
                if (d >= 1e-8 && res.pass) {
                    res.pass   = false;
                    res.detail = "first failure at (j = " + j.str() +
                                 ", eta = " + format_number(eta) + ", route = dicke)";
                }
            }
        }
    }
    if (res.pass) res.detail = "max |closed - dicke| = " + format_number(worst);
    return res;
}

CheckResult verify_identity(int max_n)
{
    CheckResult res{"identity", "", true};
    int count = 0;
    for (int N = 1; N <= max_n; ++N) {
        for (int k = 0; k <= N; ++k) {
            ++count;
            if (!combinatorial_identity_check(N, k)) {
                res.pass   = false;
                res.detail = "fails at (N = " + std::to_string(N) + ", k = " + std::to_string(k) +
                             ", route = identity)";
                return res;
            }
        }
    }
    res.detail = std::to_string(count) + " (N,k) pairs verified exactly";
    return res;
}

CheckResult verify_negativity(int max_two_j)
{
    CheckResult res{"negativity", "", true};
    for (int two_j = 2; two_j <= max_two_j; ++two_j) {
        const Spin j(two_j);
        const AngularTable& table = angular_table(j);
        for (int t = 1; t <= table.max_t(); ++t) {
            if (!(table.b(t, t) < 0)) {
                res.pass   = false;
                res.detail = "b_{t,t} >= 0 at (j = " + j.str() + ", t = " + std::to_string(t) +
                             ", route = coefficients)";
                return res;
            }
        }
        if (!negativity_window(table)) {
            res.pass   = false;
            res.detail = "phi_t > 0 inside (0, eta_0) at (j = " + j.str() + ", route = window)";
            return res;
        }
        if (two_j >= 5) {
            const double eta0  = first_zero_phi1(table);
            const double ratio = eta0 * (2.0 * two_j) / (3.0 * M_PI); // eta0 * 4j / (3 pi)
            if (two_j <= 40 && (ratio < 0.85 || ratio > 1.15)) {
                res.pass   = false;
                res.detail = "eta_0 scaling off at (j = " + j.str() +
                             ", ratio = " + format_number(ratio) + ", route = eta0)";
                return res;
            }
        }
    }
    res.detail = "b_{t,t} < 0, negativity window and eta_0 scaling hold";
    return res;
}

int cmd_verify(const VerifyOpts& o)
{
    std::vector<std::string> names;
    std::stringstream ss(o.checks);
    std::string tok;
    while (std::getline(ss, tok, ',')) names.push_back(tok);

    std::optional<int> max_two_j;
    if (!o.max_j.empty()) max_two_j = Spin::from_string(o.max_j).two_j();

    bool all_pass = true;
    const auto t0 = std::chrono::steady_clock::now();
    for (const auto& name : names) {
        CheckResult r;
        if (name == "oracle")          r = verify_oracle(max_two_j.value_or(12), o.seed);
        else if (name == "dicke")      r = verify_dicke(max_two_j.value_or(20));
        else if (name == "identity")   r = verify_identity(max_two_j.value_or(26) * 2);
        else if (name == "negativity") r = verify_negativity(max_two_j.value_or(52));
        else throw std::invalid_argument("verify: unknown check '" + name + "'");
        all_pass &= r.pass;
        std::printf("[%s] %-10s %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                    r.detail.c_str());
    }
    const auto dt =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0);
    std::printf("verify %s in %.1f s\n", all_pass ? "passed" : "FAILED", dt.count() / 1000.0);
    return all_pass ? kExitOk : kExitVerifyFailed;
}

} // namespace

// ---------------------------------------------------------------------------

int main(int argc, char** argv)
{
    CLI::App app{"rotation-averaged fidelity of spin-j states: anticoherence measures,\n"
                 "angular functions, optimal rotosensors and critical angles"};
    app.require_subcommand(1);
    app.set_config("--config", "",
                   "key=value file mirroring long options, one [subcommand] section; "
                   "give before the subcommand; command-line flags win");

    int threads = 0;
    app.add_option("--threads", threads, "cap worker threads (0 = hardware)");

    const auto with_config = [](CLI::App* sub) { return sub->configurable(); };

    MeasuresOpts mo;
    auto* m = with_config(app.add_subcommand("measures", "anticoherence measures and purities of a state"));
    m->add_option("--j", mo.j, "spin as fraction string, e.g. 2 or 7/2")->required();
    m->add_option("--state", mo.state, "catalog id | dicke:m | JSON file | amplitude list");
    m->add_option("--chi", mo.chi, "phase parameter of the j=9/2 optimal family");
    m->add_option("--format", mo.format, "plain|csv|json")->default_str("plain");
    m->add_option("--output,-o", mo.output, "output path (default stdout)");

    PhiOpts po;
    auto* p = with_config(app.add_subcommand("phi", "angular functions phi_t(eta)"));
    p->add_option("--j", po.j)->required();
    p->add_option("--t", po.t, "order t, 0..floor(j) (default 0)");
    p->add_option("--eta", po.eta, "angle (radians; pi literals allowed)");
    p->add_option("--grid", po.grid, "start:stop:count");
    p->add_option("--route", po.route, "closed|dicke");
    p->add_flag("--coefficients", po.coefficients,
                "dump the exact coefficient table as t,k,numerator,denominator CSV");
    p->add_option("--format", po.format, "plain|csv");
    p->add_option("--output,-o", po.output);

    FidelityOpts fo;
    auto* f = with_config(app.add_subcommand("fidelity", "rotation-averaged fidelity of a state"));
    f->add_option("--j", fo.j)->required();
    f->add_option("--state", fo.state);
    f->add_option("--chi", fo.chi);
    f->add_option("--eta", fo.eta);
    f->add_option("--grid", fo.grid);
    f->add_option("--route", fo.route, "closed|quadrature|both");
    f->add_option("--format", fo.format, "plain|csv");
    f->add_option("--output,-o", fo.output);

    OptimizeOpts oo;
    auto* opt = with_config(app.add_subcommand("optimize", "minimize (or maximize) the fidelity at fixed eta"));
    opt->add_option("--j", oo.j)->required();
    opt->add_option("--eta", oo.eta)->required();
    opt->add_option("--seed", oo.cfg.seed);
    opt->add_option("--restarts", oo.cfg.restarts);
    opt->add_option("--max-iter", oo.cfg.max_iterations);
    opt->add_option("--tol", oo.cfg.function_tolerance);
    opt->add_option("--scale", oo.cfg.simplex_scale);
    opt->add_flag("--maximize", oo.maximize);
    opt->add_option("--format", oo.format, "plain|csv|json");
    opt->add_option("--output,-o", oo.output);

    SweepOpts so;
    auto* sw = with_config(app.add_subcommand("sweep", "optimize along an eta grid, report transitions"));
    sw->add_option("--j", so.j)->required();
    sw->add_option("--grid", so.grid, "start:stop:count inside (0, pi]")->required();
    sw->add_option("--seed", so.cfg.seed);
    sw->add_option("--restarts", so.cfg.restarts);
    sw->add_option("--max-iter", so.cfg.max_iterations);
    sw->add_flag("--maximize", so.maximize);
    bool no_warm = false;
    sw->add_flag("--no-warm", no_warm, "disable warm starts between grid points");
    sw->add_option("--format", so.format, "csv|json");
    sw->add_option("--output,-o", so.output);

    CriticalOpts co;
    auto* cr = with_config(app.add_subcommand("critical", "critical angle between two profiles"));
    cr->add_option("--j", co.j)->required();
    cr->add_option("--profile1", co.profile1, "A_1..A_floor(j), e.g. 1,3/4");
    cr->add_option("--profile2", co.profile2);
    cr->add_option("--bracket", co.bracket, "lo:hi");
    cr->add_flag("--first-zero", co.first_zero, "print the first zero of phi_1 instead");

    VerifyOpts vo;
    auto* ve = with_config(app.add_subcommand("verify", "cross-route and identity verification suite"));
    ve->add_option("--checks", vo.checks, "comma list: oracle,dicke,identity,negativity");
    ve->add_option("--max-j", vo.max_j, "cap j (fraction string)");
    ve->add_option("--seed", vo.seed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    oo.cfg.threads = threads;
    so.cfg.threads = threads;
    so.cfg.warm_start = !no_warm;
    vo.threads     = threads;

    try {
        if (*m) return cmd_measures(mo);
        if (*p) return cmd_phi(po);
        if (*f) return cmd_fidelity(fo);
        if (*opt) return cmd_optimize(oo);
        if (*sw) return cmd_sweep(so);
        if (*cr) return cmd_critical(co);
        if (*ve) return cmd_verify(vo);
    } catch (const invariant_error& e) {
        std::cerr << "invariant violation: " << e.what() << '\n';
        return kExitInvariant;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvariant;
    }
    return kExitUsage;
}
