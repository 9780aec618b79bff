// openlab command line: closed-form states, packet observables, grid evolution,
// Wigner transforms and the invariant suite.
//
// Exit codes: 0 success, 1 invalid input or configuration, 2 numerical failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "openlab/boundstate.hpp"
#include "openlab/errors.hpp"
#include "openlab/field_io.hpp"
#include "openlab/liouville.hpp"
#include "openlab/model.hpp"
#include "openlab/stationary.hpp"
#include "openlab/verify.hpp"
#include "openlab/wavepacket.hpp"
#include "openlab/wigner.hpp"

using namespace openlab;
namespace fs = std::filesystem;

namespace {

struct Common {
    std::string params_path;
    bool allow_non_lindblad{false};
    std::optional<EnvParams> inline_params;  // set by scenario files

    EnvParams params() const {
        EnvParams p;
        if (inline_params)
            p = *inline_params;
        else if (!params_path.empty())
            p = load_params(params_path);
        else
            throw DomainError("--params is required");
        return make_params(p, allow_non_lindblad);
    }
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--params", c.params_path, "parameter file (flat JSON)");
    sub->add_flag("--allow-non-lindblad", c.allow_non_lindblad, "accept parameters violating m nu <= sqrt(2 d0 d2)");
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::vector<std::size_t> parse_pair(const std::string& s) {
    std::vector<std::size_t> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stoul(tok));
    if (out.size() == 1) out.push_back(out[0]);
    if (out.size() != 2) throw DomainError("--grid expects nx,nxd");
    return out;
}

std::map<std::string, double> parse_kv(const std::string& s) {
    std::map<std::string, double> kv;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        const auto eq = tok.find('=');
        if (eq == std::string::npos) throw DomainError("expected key=value in '" + tok + "'");
        kv[tok.substr(0, eq)] = std::stod(tok.substr(eq + 1));
    }
    return kv;
}

double get(const std::map<std::string, double>& kv, const std::string& k, double def) {
    auto it = kv.find(k);
    return it == kv.end() ? def : it->second;
}

// packet:sigma=1 | plane:k=1 | tunnel:q=1,n=0[,omega=..] | propagating[:omega=..,ell0=..]
// | boundstate[:q=..] | file:<path> | JSON state descriptor
Field2D initial_field(const std::string& desc, const Grid2D& g, const EnvParams& p) {
    if (!desc.empty() && desc.front() == '{') {
        const auto j = nlohmann::json::parse(desc);
        const std::string type = j.at("type");
        if (type == "tunneling")
            return sample(g, tunneling(p, j.at("q"), j.value("Omega", 0.0), j.value("n", 0), j.value("a", 0.0)));
        if (type == "propagating") {
            std::optional<double> l0;
            if (j.contains("ell0")) l0 = j.at("ell0").get<double>();
            return sample(g, propagating(p, j.value("Omega", 0.0), l0));
        }
        throw DomainError("unknown state type '" + type + "'");
    }
    const auto colon = desc.find(':');
    const std::string kind = desc.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : desc.substr(colon + 1);
    if (kind == "file") {
        Field2D f = read_field(rest);
        if (!f.grid.same_as(g)) throw GridError("initial field grid does not match --grid/--xmax/--xdmax");
        return f;
    }
    const auto kv = parse_kv(rest);
    if (kind == "packet") {
        const PacketObservables o = packet_observables(p, get(kv, "sigma", 1.0), 0.0);
        return sample(g, [o](double x, double xd) { return o.density_matrix(x, xd); });
    }
    if (kind == "plane") {
        const double k = get(kv, "k", 1.0);
        return sample(g, [k](double, double xd) { return std::exp(cplx{0.0, k * xd}); });
    }
    if (kind == "tunnel") {
        const double q = get(kv, "q", 1.0);
        const int n = int(get(kv, "n", 0));
        const double Om = kv.count("omega") ? kv.at("omega") : tunneling_level(p, q, n);
        return sample(g, tunneling(p, q, Om, n));
    }
    if (kind == "propagating") {
        std::optional<double> l0;
        if (kv.count("ell0")) l0 = kv.at("ell0");
        return sample(g, propagating(p, get(kv, "omega", 0.0), l0));
    }
    if (kind == "boundstate") {
        const BoundStateAC b = kv.count("q") ? bound_state(p, kv.at("q")) : bound_state(p);
        return sample(g, b.as_state());
    }
    throw DomainError("unknown initial state '" + desc + "'");
}

void write_gnuplot(const std::string& path, const std::string& csv, const std::vector<std::string>& cols) {
    std::ofstream out(path);
    if (!out) throw DomainError("cannot write " + path);
    out << "set datafile separator ','\nset key autotitle columnhead\nset xlabel '" << cols.front() << "'\n";
    out << "plot ";
    for (std::size_t c = 1; c < cols.size(); ++c)
        out << (c > 1 ? ", \\\n     " : "") << "'" << csv << "' using 1:" << c + 1 << " with lines";
    out << "\n";
}

struct StationaryOpts {
    Common c;
    double omega{0.0};
    std::optional<double> ell0;
    double xdmax{4.0};
    int points{401};
    std::string out{"stationary.csv"};
};

int cmd_stationary(const StationaryOpts& o) {
    const EnvParams p = o.c.params();
    const PropagatingState s = propagating(p, o.omega, o.ell0);
    CsvTable t{{"xd", "re", "im", "abs"}, {}};
    double worst = 0.0;
    for (int i = 0; i < o.points; ++i) {
        const double xd = -o.xdmax + 2.0 * o.xdmax * i / (o.points - 1);
        const auto v = s.try_value(xd);
        if (!v) {
            t.rows.push_back({xd, std::nan(""), std::nan(""), std::nan("")});
            continue;
        }
        t.rows.push_back({xd, v->real(), v->imag(), std::abs(*v)});
        if (i % 20 == 10)
            worst = std::max(worst, std::abs(propagating_quadrature_oracle(p, o.omega, xd, o.ell0) - *v) /
                                        std::max(std::abs(*v), 1e-300));
    }
    auto com = provenance_comments(params_hash(p));
    com.push_back("state " + state_descriptor(s));
    write_table_csv(o.out, t, com);
    std::cout << "stationary: ell_dec=" << fmt(s.ell_dec) << " k_f=" << fmt(s.k_f) << " max_oracle_rel=" << fmt(worst)
              << " -> " << o.out << "\n";
    return 0;
}

struct TunnelOpts {
    Common c;
    double q{1.0};
    std::optional<double> omega;
    int n{0};
    std::string grid{"129,129"};
    double xmax{4.0}, xdmax{4.0};
    std::string out{"tunnel.csv"};
};

int cmd_tunnel(const TunnelOpts& o) {
    const EnvParams p = o.c.params();
    const double Om = o.omega ? *o.omega : tunneling_level(p, o.q, o.n);
    const TunnelingState s = tunneling(p, o.q, Om, o.n);
    const auto n = parse_pair(o.grid);
    const Grid2D g = Grid2D::make(-o.xmax, o.xmax, n[0], o.xdmax, n[1]);
    const Field2D f = sample(g, s);
    EnvParams pl = p;
    pl.lambda = 0.0;
    const double res = eigen_residual(f, pl, Om);
    std::string flux = "n/a";
    if (o.n == 0) flux = fmt(tunneling_flux(s, 0.0).J_of_x);
    auto com = provenance_comments(params_hash(p));
    com.push_back("state " + state_descriptor(s));
    write_field(o.out, f, com);
    std::cout << "tunnel: q=" << fmt(o.q) << " Omega=" << fmt(Om) << " n=" << o.n << " r=" << fmt(s.r) << " p=" << fmt(s.p)
              << " k=" << fmt(s.k) << " J(0)=" << flux << " eigen_residual=" << fmt(res) << " -> " << o.out
              << "\n";
    return 0;
}

struct BoundOpts {
    Common c;
    std::optional<double> q;
    double h0{0.05};
    int levels{5};
    std::string out{"boundstate.csv"};
};

int cmd_boundstate(const BoundOpts& o) {
    const EnvParams p = o.c.params();
    const BoundStateAC b = o.q ? bound_state(p, *o.q) : bound_state(p);
    const StateFn s = b.as_state();
    const ConsistencyReport cr = consistency_residual(s, p, o.h0, o.levels);
    CsvTable t{{"h", "consistency_re", "consistency_im", "consistency_abs", "jump_h", "jump_plus", "jump_minus",
                "gap_minus"},
               {}};
    for (std::size_t i = 0; i < cr.h.size(); ++i) {
        const double hj = cr.h[i] / 25.0;
        const JumpResiduals j = jump_residuals(s, p, hj);
        t.rows.push_back({cr.h[i], cr.raw[i].real(), cr.raw[i].imag(), std::abs(cr.raw[i]), hj, j.on_plus, j.on_minus,
                          j.gap_minus});
    }
    auto com = provenance_comments(params_hash(p));
    com.push_back("q=" + fmt(b.q) + " q_d=" + fmt(adiabatic_q(p)) + " ell_dec=" + fmt(decoherence_length(p)));
    com.push_back("consistency_extrapolated=" + fmt(std::abs(cr.value)) + " error=" + fmt(cr.error) +
                  " scale=" + fmt(cr.scale));
    write_table_csv(o.out, t, com);
    std::cout << "boundstate: q=" << fmt(b.q) << " q_d=" << fmt(adiabatic_q(p)) << " ell_dec=" << fmt(decoherence_length(p))
              << " consistency_rel=" << fmt(cr.relative()) << " -> " << o.out << "\n";
    return 0;
}

struct PacketOpts {
    Common c;
    double sigma{1.0};
    double tmax{40.0};
    int steps{400};
    std::string out{"wavepacket.csv"};
    std::string plot;
};

int cmd_wavepacket(const PacketOpts& o) {
    const EnvParams p = o.c.params();
    if (o.steps < 1) throw DomainError("--steps must be >= 1");
    CsvTable t{{"t", "X", "Dx2", "inv_ell_eff2", "k_eff", "Q2", "kappa2", "Dx2_asym", "Q2_asym", "kappa2_asym"}, {}};
    double last_slope = 0.0, prev = 0.0;
    for (int i = 0; i <= o.steps; ++i) {
        const double tt = o.tmax * i / o.steps;
        const PacketObservables ob = packet_observables(p, o.sigma, tt);
        double a0 = std::nan(""), a1 = std::nan(""), a2 = std::nan("");
        if (p.nu * tt >= 1.0) {
            const PacketAsymptotes as = packet_asymptotes(p, tt);
            a0 = as.Dx2;
            a1 = as.Q2;
            a2 = as.kappa2;
        }
        if (i > 0) last_slope = (ob.Dx2 - prev) / (o.tmax / o.steps);
        prev = ob.Dx2;
        t.rows.push_back({tt, ob.X, ob.Dx2, ob.inv_ell_eff2, ob.k_eff, ob.Q2, ob.kappa2, a0, a1, a2});
    }
    write_table_csv(o.out, t, provenance_comments(params_hash(p)));
    if (!o.plot.empty()) write_gnuplot(o.plot, o.out, t.columns);
    std::cout << "wavepacket: sigma=" << fmt(o.sigma) << " tmax=" << fmt(o.tmax) << " final dDx2/dt=" << fmt(last_slope)
              << " -> " << o.out << "\n";
    return 0;
}

struct EvolveOpts {
    Common c;
    std::string grid{"129,129"};
    double xmax{8.0}, xdmax{8.0};
    std::optional<double> dt;
    double tmax{1.0};
    std::string init{"packet:sigma=1"};
    std::string out{"evolve.csv"};
    std::size_t stride{1};
    double safety{0.25};
};

int cmd_evolve(const EvolveOpts& o) {
    const EnvParams p = o.c.params();
    const auto n = parse_pair(o.grid);
    const Grid2D g = Grid2D::make(-o.xmax, o.xmax, n[0], o.xdmax, n[1]);
    const double bound = stability_bound(g, p, o.safety);
    const std::size_t stride = std::max<std::size_t>(1, o.stride);
    double dt = o.dt ? *o.dt : 0.9 * bound;
    if (!o.dt && o.tmax > 0) {
        // land on tmax with a whole number of strides so snapshots stay uniform
        std::size_t n = std::size_t(std::ceil(o.tmax / dt));
        n = (n + stride - 1) / stride * stride;
        dt = o.tmax / double(n);
    }
    const double snap_dt = dt * double(stride);
    Field2D rho0 = initial_field(o.init, g, p);
    ContinuityMonitor mon(p);
    Field2D last = rho0;
    double herm = 0.0;
    EvolveOptions opt;
    opt.safety = o.safety;
    opt.store = false;
    opt.stride = stride;
    opt.observer = [&](double t, const Field2D& f) {
        // a shortened final step is skipped by the continuity monitor
        if (std::abs(t / snap_dt - std::round(t / snap_dt)) < 1e-6) mon.push(t, f);
        herm = std::max(herm, f.hermiticity_defect());
        last = f;
    };
    evolve(rho0, p, o.tmax, dt, opt);
    std::string cont = "n/a";
    const ContinuityReport cr = mon.report();
    if (cr.snapshots >= 3) cont = fmt(cr.value);
    auto com = provenance_comments(params_hash(p));
    com.push_back("init " + o.init + " t=" + fmt(o.tmax));
    write_field(o.out, last, com);
    std::cout << "evolve: grid=" << g.nx << "x" << g.nxd << " dt=" << fmt(dt) << " bound=" << fmt(bound)
              << " norm=" << fmt(last.norm() / rho0.norm()) << " hermiticity=" << fmt(herm) << " continuity=" << cont
              << " -> " << o.out << "\n";
    return 0;
}

struct WignerOpts {
    std::string in, out{"wigner.csv"};
};

int cmd_wigner(const WignerOpts& o) {
    const Field2D f = read_field(o.in);
    const WignerField w = transform(f);
    std::ofstream out(o.out);
    if (!out) throw DomainError("cannot write " + o.out);
    out << "# openlab " << OPENLAB_VERSION << "\n# source " << fs::path(o.in).filename().string() << "\n";
    out << "x\\k";
    char buf[40];
    for (double k : w.k) {
        std::snprintf(buf, sizeof buf, ",%.17g", k);
        out << buf;
    }
    out << "\n";
    for (std::size_t i = 0; i < w.x.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", w.x[i]);
        out << buf;
        for (std::size_t m = 0; m < w.k.size(); ++m) {
            std::snprintf(buf, sizeof buf, ",%.17g", w.at(i, m));
            out << buf;
        }
        out << "\n";
    }
    if (w.boundary_warning)
        std::cerr << "warning: rho does not decay at the x_d edges (ratio " << fmt(w.boundary_ratio) << ")\n";
    std::cout << "wigner: " << w.x.size() << "x" << w.k.size() << " max_imag=" << fmt(w.max_imag()) << " -> " << o.out
              << "\n";
    return 0;
}

struct VerifyOpts {
    Common c;
    std::string suite{"fast"};
    std::string out{"report.json"};
};

int cmd_verify(const VerifyOpts& o) {
    const EnvParams p = o.c.params();
    const Suite s = parse_suite(o.suite);
    const VerifyReport r = run_verify(p, s);
    std::ofstream(o.out) << r.to_json();
    for (const auto& sk : r.skipped) std::cerr << "skipped " << sk << "\n";
    std::size_t passed = 0;
    for (const auto& c : r.checks) {
        if (c.pass)
            ++passed;
        else
            std::cerr << "FAIL " << c.name << " value=" << fmt(c.value) << " tolerance=" << fmt(c.tolerance) << "\n";
    }
    std::cout << "verify " << o.suite << ": " << passed << "/" << r.checks.size()
              << " passed, worst value/tolerance=" << fmt(r.worst_ratio()) << " -> " << o.out << "\n";
    return r.ok() ? 0 : 2;
}

struct CompareOpts {
    std::string a, b;
};

int cmd_compare(const CompareOpts& o) {
    const FieldComparison c = compare_fields(read_field(o.a), read_field(o.b));
    nlohmann::ordered_json j;
    j["l2"] = c.l2;
    j["max"] = c.max;
    j["scale_re"] = c.scale.real();
    j["scale_im"] = c.scale.imag();
    std::cout << j.dump() << "\n";
    return 0;
}

int run_guarded(const std::function<int()>& f) {
    try {
        return f();
    } catch (const StabilityError& e) {
        std::cerr << "error: " << e.what() << " (stability bound dt <= " << fmt(e.bound) << ")\n";
        return 1;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: bad number: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    }
}

struct App {
    CLI::App app{"openlab: open quantum systems on a line"};
    int threads{0};
    std::function<int()> action;

    StationaryOpts st;
    TunnelOpts tu;
    BoundOpts bo;
    PacketOpts wp;
    EvolveOpts ev;
    WignerOpts wi;
    VerifyOpts ve;
    CompareOpts co;
    std::string scenario;

    App() {
        app.require_subcommand(1);
        app.add_option("--threads", threads, "worker threads for grid kernels (OPENLAB_THREADS overrides)");
        app.set_version_flag("--version", std::string(OPENLAB_VERSION));

        auto* s = app.add_subcommand("stationary", "propagating state rho_{0,Omega} over x_d");
        add_common(s, st.c);
        s->add_option("--omega", st.omega);
        s->add_option("--ell0", st.ell0);
        s->add_option("--xdmax", st.xdmax);
        s->add_option("--points", st.points);
        s->add_option("--out", st.out);
        s->callback([this] { action = [this] { return cmd_stationary(st); }; });

        s = app.add_subcommand("tunnel", "tunneling state rho_{n,q,Omega} on a grid");
        add_common(s, tu.c);
        s->add_option("--q", tu.q);
        s->add_option("--omega", tu.omega, "default: the level with p = n");
        s->add_option("--n", tu.n);
        s->add_option("--grid", tu.grid, "nx,nxd");
        s->add_option("--xmax", tu.xmax);
        s->add_option("--xdmax", tu.xdmax);
        s->add_option("--out", tu.out, "field file (.csv or .bin)");
        s->callback([this] { action = [this] { return cmd_tunnel(tu); }; });

        s = app.add_subcommand("boundstate", "bound-state report: residual table vs h");
        add_common(s, bo.c);
        s->add_option("--q", bo.q, "default: q_d = lambda m/hbar^2");
        s->add_option("--h0", bo.h0);
        s->add_option("--levels", bo.levels);
        s->add_option("--out", bo.out);
        s->callback([this] { action = [this] { return cmd_boundstate(bo); }; });

        s = app.add_subcommand("wavepacket", "packet observables vs t");
        add_common(s, wp.c);
        s->add_option("--sigma", wp.sigma);
        s->add_option("--tmax", wp.tmax);
        s->add_option("--steps", wp.steps);
        s->add_option("--out", wp.out);
        s->add_option("--plot", wp.plot, "also write a gnuplot script");
        s->callback([this] { action = [this] { return cmd_wavepacket(wp); }; });

        s = app.add_subcommand("evolve", "RK4 evolution on an (x, x_d) grid");
        add_common(s, ev.c);
        s->add_option("--grid", ev.grid, "nx,nxd");
        s->add_option("--xmax", ev.xmax);
        s->add_option("--xdmax", ev.xdmax);
        s->add_option("--dt", ev.dt, "default: 0.9 of the stability bound");
        s->add_option("--tmax", ev.tmax);
        s->add_option("--init", ev.init,
                      "packet:sigma=S | plane:k=K | tunnel:q=Q,n=N[,omega=W] | propagating[:omega=W] | "
                      "boundstate[:q=Q] | file:PATH | JSON descriptor");
        s->add_option("--stride", ev.stride);
        s->add_option("--safety", ev.safety);
        s->add_option("--out", ev.out, "final field (.csv or .bin)");
        s->callback([this] { action = [this] { return cmd_evolve(ev); }; });

        s = app.add_subcommand("wigner", "Wigner transform of a field file");
        s->add_option("--in", wi.in)->required();
        s->add_option("--out", wi.out);
        s->callback([this] { action = [this] { return cmd_wigner(wi); }; });

        s = app.add_subcommand("verify", "invariant suite, writes report.json");
        add_common(s, ve.c);
        s->add_option("--suite", ve.suite)->check(CLI::IsMember({"fast", "all"}));
        s->add_option("--out", ve.out);
        s->callback([this] { action = [this] { return cmd_verify(ve); }; });

        s = app.add_subcommand("compare", "differences of two fields after complex-scalar alignment");
        s->add_option("a", co.a)->required();
        s->add_option("b", co.b)->required();
        s->callback([this] { action = [this] { return cmd_compare(co); }; });

        s = app.add_subcommand("run", "run a scenario file");
        s->add_option("--scenario", scenario)->required();
        s->callback([this] { action = [this] { return run_scenario(); }; });
    }

    int run_scenario();
};

// {"name", "params": path | object, "command", "options": {flag: value}}
// A params path is resolved against the scenario's directory.
int App::run_scenario() {
    std::ifstream in(scenario);
    if (!in) throw DomainError("cannot read scenario " + scenario);
    const auto j = nlohmann::json::parse(in);
    const std::string command = j.at("command");
    static const std::vector<std::string> known{"stationary", "tunnel",  "boundstate", "wavepacket",
                                                "evolve",     "wigner",  "verify"};
    if (std::find(known.begin(), known.end(), command) == known.end())
        throw DomainError("scenario command '" + command + "' is not one of stationary, tunnel, boundstate, "
                          "wavepacket, evolve, wigner, verify");

    std::vector<std::string> args{"openlab", command};
    std::optional<EnvParams> inline_p;
    if (j.contains("params")) {
        const auto& pj = j.at("params");
        if (pj.is_string()) {
            fs::path pp = pj.get<std::string>();
            if (pp.is_relative()) pp = fs::path(scenario).parent_path() / pp;
            if (!fs::exists(pp)) throw DomainError("scenario params file not found: " + pp.string());
            args.push_back("--params");
            args.push_back(pp.string());
        } else {
            inline_p = params_from_json(pj.dump());
        }
    }
    if (j.contains("options"))
        for (const auto& [k, v] : j.at("options").items()) {
            if (v.is_boolean()) {
                if (v.get<bool>()) args.push_back("--" + k);
                continue;
            }
            args.push_back("--" + k);
            args.push_back(v.is_string() ? v.get<std::string>() : v.dump());
        }

    App inner;
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        inner.app.parse(int(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        throw DomainError(std::string("scenario options: ") + e.what());
    }
    for (Common* c : {&inner.st.c, &inner.tu.c, &inner.bo.c, &inner.wp.c, &inner.ev.c, &inner.ve.c})
        c->inline_params = inline_p;
    std::cout << "scenario " << j.value("name", fs::path(scenario).stem().string()) << "\n";
    return inner.action();
}

}  // namespace

int main(int argc, char** argv) {
    App a;
    try {
        a.app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = a.app.exit(e);
        return rc == 0 ? 0 : 1;
    }
    if (a.threads > 0) set_threads(a.threads);
    return run_guarded(a.action);
}
