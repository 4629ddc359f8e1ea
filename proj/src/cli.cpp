#include "epd/cli.hpp"

#include <cstdlib>
#include <future>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "epd/critical.hpp"
#include "epd/darios.hpp"
#include "epd/hamiltonian.hpp"
#include "epd/hydro.hpp"
#include "epd/report.hpp"

namespace epd {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitTolerance = 1;
constexpr int kExitConfig = 2;

Complex parse_complex(const std::string& s) {
    std::istringstream in(s);
    double re = 0.0, im = 0.0;
    char comma = 0;
    if (!(in >> re >> comma >> im) || comma != ',')
        throw DomainError("expected complex as 're,im': " + s);
    return {re, im};
}

std::vector<double> parse_doubles(const std::string& s) {
    std::vector<double> out;
    std::istringstream in(s);
    std::string tok;
    while (std::getline(in, tok, ',')) out.push_back(std::stod(tok));
    return out;
}

// Inline JSON, or @path to read it from a file.
SolutionSpec load_spec(const std::string& arg) {
    if (!arg.empty() && arg.front() == '@')
        return SolutionSpec::from_json(read_text_file(arg.substr(1)));
    return SolutionSpec::from_json(arg);
}

FlowLabel parse_label(const std::string& s) {
    const auto pos = s.rfind(',');
    if (pos == std::string::npos) throw DomainError("expected flow label as 'family,index'");
    return {s.substr(0, pos), std::stoi(s.substr(pos + 1))};
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty())
        std::cout << text << std::endl;
    else
        write_text_file(out_path, text);
}

nlohmann::json jet_json(const Jet2& j) {
    nlohmann::json o;
    o["w"] = {j.w.real(), j.w.imag()};
    o["wz"] = {j.wz.real(), j.wz.imag()};
    o["wzb"] = {j.wzb.real(), j.wzb.imag()};
    o["wzz"] = {j.wzz.real(), j.wzz.imag()};
    o["wzbzb"] = {j.wzbzb.real(), j.wzbzb.imag()};
    o["wzzb"] = {j.wzzb.real(), j.wzzb.imag()};
    return o;
}

int cmd_evaluate(const std::string& spec_arg, const std::string& z_arg, int nodes,
                 const std::string& out_path) {
    SolutionSpec spec = load_spec(spec_arg);
    if (nodes > 0) spec.nodes = nodes;
    const Complex z = parse_complex(z_arg);
    const Jet2 j = eval_jet(spec, z, std::conj(z));
    nlohmann::json o;
    o["schema"] = 1;
    o["z"] = {z.real(), z.imag()};
    o["jet"] = jet_json(j);
    const Complex r = epd_residual(j, z, std::conj(z));
    o["residual"] = {r.real(), r.imag()};
    emit(o.dump(2), out_path);
    return kExitOk;
}

int cmd_critical(const std::string& spec_arg, const std::string& guess_arg, double tol,
                 int nodes, const std::string& out_path) {
    SolutionSpec spec = load_spec(spec_arg);
    if (nodes > 0) spec.nodes = nodes;
    NewtonOptions opt;
    if (tol > 0.0) opt.tol = tol;
    const CriticalPoint cp = find_critical(spec, parse_complex(guess_arg), opt);
    nlohmann::json o;
    o["schema"] = 1;
    o["beta"] = {cp.beta.real(), cp.beta.imag()};
    o["wbb"] = {cp.wbb.real(), cp.wbb.imag()};
    o["wmix"] = {cp.wmix.real(), cp.wmix.imag()};
    o["order"] = cp.order;
    o["iterations"] = cp.iterations;
    o["residual"] = cp.residual;
    emit(o.dump(2), out_path);
    return kExitOk;
}

int cmd_evolve(const std::string& spec_arg, const std::string& la_arg,
               const std::string& lb_arg, const std::string& grid_arg,
               const std::string& guess_arg, double tol, const std::string& out_path,
               const std::string& report_path) {
    const SolutionSpec templ = load_spec(spec_arg);
    const auto g = parse_doubles(grid_arg);
    if (g.size() != 6) throw DomainError("--grid expects 'a0,da,na,b0,db,nb'");
    const HodographField field =
        hodograph_solve(templ, parse_label(la_arg), g[0], g[1], static_cast<int>(g[2]),
                        parse_label(lb_arg), g[3], g[4], static_cast<int>(g[5]),
                        parse_complex(guess_arg));
    if (!out_path.empty()) write_text_file(out_path, field.to_csv());
    const ResidualReport rep = pde_residual(templ, field);
    emit(rep.to_json(), report_path);
    return rep.max <= tol ? kExitOk : kExitTolerance;
}

int cmd_verify(const std::string& identity, const std::string& spec_arg, int grid,
               double tol, const std::string& out_path) {
    const SolutionSpec spec = load_spec(spec_arg);
    if (grid < 2) throw DomainError("--grid must be at least 2");
    // Deterministic box in the upper half plane.
    const double re0 = -1.0, re1 = 1.0, im0 = 0.4, im1 = 2.4;
    std::vector<Complex> pts;
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j)
            pts.emplace_back(re0 + (re1 - re0) * i / (grid - 1),
                             im0 + (im1 - im0) * j / (grid - 1));
    auto point_residual = [&](Complex z) -> double {
        if (identity == "epd") {
            const Jet2 jet = eval_jet(spec, z, std::conj(z));
            double scale = std::abs(z - std::conj(z)) * std::abs(jet.wzzb) +
                           0.5 * std::abs(jet.wz - jet.wzb);
            return std::abs(epd_residual(jet, z, std::conj(z))) / (1.0 + scale);
        }
        if (identity == "dual") return std::abs(dual_residual(spec, z, std::conj(z)));
        if (identity == "closed-form") {
            SolutionSpec forced = spec;
            forced.force_quadrature = true;
            const Jet2 a = eval_jet(spec, z, std::conj(z));
            const Jet2 b = eval_jet(forced, z, std::conj(z));
            return std::abs(a.w - b.w) + std::abs(a.wz - b.wz) + std::abs(a.wzb - b.wzb);
        }
        throw DomainError("unknown identity '" + identity + "'");
    };
    const int workers = std::min<int>(thread_cap(), 8);
    std::vector<std::future<double>> futs;
    const size_t chunk = (pts.size() + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const size_t lo = w * chunk, hi = std::min(pts.size(), lo + chunk);
        if (lo >= hi) break;
        futs.push_back(std::async(std::launch::async, [&, lo, hi] {
            double m = 0.0;
            for (size_t p = lo; p < hi; ++p) m = std::max(m, point_residual(pts[p]));
            return m;
        }));
    }
    double mx = 0.0;
    for (auto& f : futs) mx = std::max(mx, f.get());
    ResidualReport rep;
    rep.identity = identity;
    rep.max = mx;
    rep.mean = mx;  // max-only sweep
    rep.n1 = rep.n2 = grid;
    emit(rep.to_json(), out_path);
    return mx <= tol ? kExitOk : kExitTolerance;
}

int cmd_dual(const std::string& spec_arg, const std::string& z_arg,
             const std::string& out_path) {
    const SolutionSpec spec = load_spec(spec_arg);
    const Complex z = parse_complex(z_arg);
    const Complex v = dual_value(spec, {z});
    nlohmann::json o;
    o["schema"] = 1;
    o["z"] = {z.real(), z.imag()};
    o["dual"] = {v.real(), v.imag()};
    const Complex r = dual_residual(spec, z, std::conj(z));
    o["residual"] = {r.real(), r.imag()};
    emit(o.dump(2), out_path);
    return kExitOk;
}

int cmd_ham(int n, unsigned seed, const std::string& eps_arg, double tol,
            const std::string& out_path) {
    const FieldState s = random_state(n, 2.0 * 3.14159265358979323846, seed);
    nlohmann::json o;
    o["schema"] = 1;
    double worst_skew = 0.0;
    for (const Operator& op :
         {Operator{Operator::Kind::J0, 0.0, DiffScheme::Spectral},
          Operator{Operator::Kind::J1, 0.0, DiffScheme::Spectral},
          Operator{Operator::Kind::J1Eps, 0.1, DiffScheme::Spectral}}) {
        const ResidualReport rep = skew_check(op, s, 8, seed + 1);
        const char* name = op.kind == Operator::Kind::J0   ? "J0"
                           : op.kind == Operator::Kind::J1 ? "J1"
                                                           : "J1eps";
        o["skew"][name] = rep.max;
        worst_skew = std::max(worst_skew, rep.max);
    }
    // Casimir annihilation under both resonant operators.
    const GradPair gc = grad(Functional::casimir_u(), s);
    double casimir = 0.0;
    for (const Operator::Kind k : {Operator::Kind::J0, Operator::Kind::J1}) {
        const Flow f = apply({k, 0.0, DiffScheme::Spectral}, gc, s);
        for (double v : f.first) casimir = std::max(casimir, std::abs(v));
        for (double v : f.second) casimir = std::max(casimir, std::abs(v));
    }
    o["casimir"] = casimir;
    const LimitFlowReport lim = limit_flow(s, parse_doubles(eps_arg));
    o["limit_flow"] = nlohmann::json::parse(lim.to_json());
    emit(o.dump(2), out_path);
    return (worst_skew <= tol && casimir <= tol) ? kExitOk : kExitTolerance;
}

int cmd_darios(const std::string& flow_arg, const std::string& densities_arg,
               const std::string& grid_arg, const std::string& guess_arg, double tol,
               const std::string& out_path, const std::string& report_path) {
    DariosFlow flow;
    if (flow_arg == "darios")
        flow = DariosFlow::DaRios;
    else if (flow_arg == "higher2")
        flow = DariosFlow::Higher2;
    else if (flow_arg == "dtoda")
        flow = DariosFlow::DTodaFlow;
    else if (flow_arg == "log2")
        flow = DariosFlow::Log2Flow;
    else
        throw DomainError("unknown flow '" + flow_arg + "'");
    SampledSpec background;
    if (densities_arg.empty()) {
        background.a = -3.0;
        background.b = 3.0;
        background.psi = [](double l) { return std::exp(-4.0 * l * l); };
    } else if (densities_arg.front() == '@') {
        background = densities_from_csv(read_text_file(densities_arg.substr(1)));
    } else {
        throw DomainError("--densities expects @path to a CSV file");
    }
    const auto g = parse_doubles(grid_arg);
    if (g.size() != 6) throw DomainError("--grid expects 'x0,dx,nx,t0,dt,nt'");
    const FilamentHistory h =
        solve_hodograph_darios(background, flow, g[0], g[1], static_cast<int>(g[2]),
                               g[3], g[4], static_cast<int>(g[5]),
                               parse_complex(guess_arg));
    if (!out_path.empty()) write_text_file(out_path, h.to_csv());
    const ResidualReport rep = flow_residual(h, flow);
    emit(rep.to_json(), report_path);
    return rep.max <= tol ? kExitOk : kExitTolerance;
}

}  // namespace

int thread_cap() {
    if (const char* env = std::getenv("EPD_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
}

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Contour-integral solutions of the elliptic equation "
                 "(z - zb) W_zzb = (W_z - W_zb)/2: evaluation, critical points, "
                 "hodograph hierarchies, duality, Poisson operators, filament flows."};
    app.require_subcommand(1);

    std::string spec_arg, z_arg = "0,1", guess_arg = "0,1", out_path, report_path;
    std::string identity = "epd", la_arg, lb_arg, grid_arg;
    std::string flow_arg = "darios", densities_arg;
    std::string eps_arg = "0.1,0.05,0.025,0.0125";
    double tol = 1e-8;
    int nodes = 0, grid_n = 21, ham_n = 64;
    unsigned seed = 20260826;

    auto* ev = app.add_subcommand("evaluate", "Evaluate W and its jet at a point");
    ev->add_option("--spec", spec_arg, "Solution spec: inline JSON or @file")->required();
    ev->add_option("--z", z_arg, "Evaluation point 're,im'");
    ev->add_option("--nodes", nodes, "Contour resolution override");
    ev->add_option("--out", out_path, "Write JSON here instead of stdout");

    auto* cr = app.add_subcommand("critical", "Locate a critical point of W");
    cr->add_option("--spec", spec_arg, "Solution spec: inline JSON or @file")->required();
    cr->add_option("--guess", guess_arg, "Newton start 're,im'");
    cr->add_option("--tol", tol, "Gradient tolerance");
    cr->add_option("--nodes", nodes, "Contour resolution override");
    cr->add_option("--out", out_path, "Write JSON here instead of stdout");

    auto* evo = app.add_subcommand("evolve", "Track the critical point over a 2-coefficient grid");
    evo->add_option("--spec", spec_arg, "Template spec: inline JSON or @file")->required();
    evo->add_option("--flow-a", la_arg, "First axis label 'family,index'")->required();
    evo->add_option("--flow-b", lb_arg, "Second axis label 'family,index'")->required();
    evo->add_option("--grid", grid_arg, "'a0,da,na,b0,db,nb'")->required();
    evo->add_option("--guess", guess_arg, "Newton start 're,im'");
    evo->add_option("--tol", tol, "Max hierarchy residual allowed");
    evo->add_option("--out", out_path, "CSV output path");
    evo->add_option("--report", report_path, "JSON residual report path");

    auto* vf = app.add_subcommand("verify", "Check an identity on an upper-half-plane grid");
    vf->add_option("--identity", identity, "epd | dual | closed-form");
    vf->add_option("--spec", spec_arg, "Solution spec: inline JSON or @file")->required();
    vf->add_option("--grid", grid_n, "Grid points per axis");
    vf->add_option("--tol", tol, "Max residual allowed");
    vf->add_option("--out", out_path, "JSON report path");

    auto* du = app.add_subcommand("dual", "Evaluate the dual solution W*");
    du->add_option("--spec", spec_arg, "Solution spec: inline JSON or @file")->required();
    du->add_option("--z", z_arg, "Target point 're,im'");
    du->add_option("--out", out_path, "Write JSON here instead of stdout");

    auto* hm = app.add_subcommand("ham", "Poisson-operator diagnostics on a periodic grid");
    hm->add_option("--n", ham_n, "Grid size (even, >= 8)");
    hm->add_option("--seed", seed, "RNG seed for the random smooth state");
    hm->add_option("--eps", eps_arg, "Decreasing eps list for the limit flow");
    hm->add_option("--tol", tol, "Max skew/Casimir residual allowed");
    hm->add_option("--out", out_path, "Write JSON here instead of stdout");

    auto* da = app.add_subcommand("darios", "Filament hodograph solve and flow residual");
    da->add_option("--flow", flow_arg, "darios | higher2 | dtoda | log2");
    da->add_option("--densities", densities_arg, "@file with CSV lambda,phi,psi "
                                                 "(default: a Gaussian psi)");
    da->add_option("--grid", grid_arg, "'x0,dx,nx,t0,dt,nt'")->required();
    da->add_option("--guess", guess_arg, "Newton start 're,im'");
    da->add_option("--tol", tol, "Max flow residual allowed");
    da->add_option("--out", out_path, "CSV output path");
    da->add_option("--report", report_path, "JSON residual report path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (ev->parsed()) return cmd_evaluate(spec_arg, z_arg, nodes, out_path);
        if (cr->parsed()) return cmd_critical(spec_arg, guess_arg, tol, nodes, out_path);
        if (evo->parsed())
            return cmd_evolve(spec_arg, la_arg, lb_arg, grid_arg, guess_arg, tol,
                              out_path, report_path);
        if (vf->parsed()) return cmd_verify(identity, spec_arg, grid_n, tol, out_path);
        if (du->parsed()) return cmd_dual(spec_arg, z_arg, out_path);
        if (hm->parsed()) return cmd_ham(ham_n, seed, eps_arg, tol, out_path);
        if (da->parsed())
            return cmd_darios(flow_arg, densities_arg, grid_arg, guess_arg, tol,
                              out_path, report_path);
    } catch (const ConvergenceError& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return kExitConfig;
    }
    return kExitConfig;
}

}  // namespace epd
