// cpshift: Casimir-Polder level shifts of an atom above a layered dielectric.
//
// Subcommands: ground, excited, modes, completeness, greens, resonance-map.
// Values are in natural units (hbar = c = eps0 = 1); multiply shift values by
// 1/eps0 when restoring SI-compatible natural units.

#include "CLI11.hpp"

#include "cpshift/asymptotics.hpp"
#include "cpshift/greens.hpp"
#include "cpshift/modes.hpp"
#include "cpshift/scan.hpp"
#include "cpshift/shift.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace {

using namespace cpshift;

constexpr int kExitOk = 0;
constexpr int kExitBadArgs = 2;
constexpr int kExitAllRowsFailed = 3;
constexpr int kExitIo = 4;

struct CommonOpts {
    double n_l = 1.5, n_s = 1.0, L = 0.0;
    double Z = 1.0, E = 1.0;
    double mu_par2 = 1.0, mu_perp2 = 0.0;
    double k_par = 1.0, rho = 0.0;
    std::string sweep;
    std::string range; // lo:hi:count[:log]
    std::string normalize = "raw";
    std::string format = "csv";
    std::string out;
    std::string config;
    double rel_tol = 1e-9;
    int threads = 0;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config, "key=value config file; flags override");
    cmd->add_option("--n-l", o.n_l, "layer refractive index");
    cmd->add_option("--n-s", o.n_s, "substrate refractive index");
    cmd->add_option("--L", o.L, "layer thickness");
    cmd->add_option("--Z", o.Z, "atom-surface distance");
    cmd->add_option("--E", o.E, "transition energy (signed)");
    cmd->add_option("--mu-par2", o.mu_par2, "|mu_par|^2");
    cmd->add_option("--mu-perp2", o.mu_perp2, "|mu_perp|^2");
    cmd->add_option("--k-par", o.k_par, "transverse wave number");
    cmd->add_option("--rho", o.rho, "in-plane separation");
    cmd->add_option("--sweep", o.sweep, "sweep variable: Z|L|E|n_l|n_s|k_par");
    cmd->add_option("--range", o.range, "lo:hi:count[:log]");
    cmd->add_option("--normalize", o.normalize, "raw|times-Z3|times-Z4");
    cmd->add_option("--format", o.format, "csv|json");
    cmd->add_option("--out", o.out, "output path (default stdout)");
    cmd->add_option("--rel-tol", o.rel_tol, "quadrature relative tolerance");
    cmd->add_option("--threads", o.threads, "worker threads (0 = hardware)");
}

void apply_config_file(CommonOpts& o) {
    if (o.config.empty()) return;
    std::ifstream in(o.config);
    if (!in) throw ValidationError("cannot open config file: " + o.config);
    std::map<std::string, double CommonOpts::*> dkeys{
        {"n_l", &CommonOpts::n_l},       {"n_s", &CommonOpts::n_s},
        {"L", &CommonOpts::L},           {"Z", &CommonOpts::Z},
        {"E", &CommonOpts::E},           {"mu_par2", &CommonOpts::mu_par2},
        {"mu_perp2", &CommonOpts::mu_perp2}, {"k_par", &CommonOpts::k_par},
        {"rho", &CommonOpts::rho},       {"rel_tol", &CommonOpts::rel_tol}};
    std::map<std::string, std::string CommonOpts::*> skeys{{"sweep", &CommonOpts::sweep},
                                                           {"range", &CommonOpts::range},
                                                           {"normalize", &CommonOpts::normalize},
                                                           {"format", &CommonOpts::format},
                                                           {"out", &CommonOpts::out}};
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string v) {
            const auto a = v.find_first_not_of(" \t\r");
            const auto b = v.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : v.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (auto it = dkeys.find(key); it != dkeys.end())
            o.*(it->second) = std::stod(val);
        else if (auto is = skeys.find(key); is != skeys.end())
            o.*(is->second) = val;
        else
            throw ValidationError("unknown config key: " + key);
    }
}

scan::SweepVar parse_sweep(const std::string& s) {
    if (s == "Z") return scan::SweepVar::Z;
    if (s == "L") return scan::SweepVar::L;
    if (s == "E") return scan::SweepVar::E;
    if (s == "n_l") return scan::SweepVar::NL;
    if (s == "n_s") return scan::SweepVar::NS;
    if (s == "k_par") return scan::SweepVar::KPar;
    throw ValidationError("unknown sweep variable: " + s);
}

scan::Range parse_range(const std::string& s) {
    scan::Range r;
    std::stringstream ss(s);
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(ss, part, ':')) parts.push_back(part);
    if (parts.size() < 3 || parts.size() > 4) throw ValidationError("range must be lo:hi:count[:log]");
    r.lo = std::stod(parts[0]);
    r.hi = std::stod(parts[1]);
    r.count = std::stoi(parts[2]);
    r.log = parts.size() == 4 && parts[3] == "log";
    return r;
}

scan::Normalization parse_norm(const std::string& s) {
    if (s == "raw") return scan::Normalization::Raw;
    if (s == "times-Z3") return scan::Normalization::TimesZ3;
    if (s == "times-Z4") return scan::Normalization::TimesZ4;
    throw ValidationError("unknown normalization: " + s);
}

scan::ScanSpec make_spec(const CommonOpts& o, scan::Quantity q) {
    scan::ScanSpec spec;
    spec.quantity = q;
    spec.stack = validate_stack({o.n_l, o.n_s, o.L});
    spec.transitions = {{o.E, o.mu_par2, o.mu_perp2}};
    spec.Z = o.Z;
    spec.k_par = o.k_par;
    spec.rho = o.rho;
    spec.normalization = parse_norm(o.normalize);
    spec.cfg.rel_tol = o.rel_tol;
    spec.threads = o.threads;
    if (o.sweep.empty() || o.range.empty())
        throw ValidationError("this subcommand needs --sweep and --range");
    spec.sweep = parse_sweep(o.sweep);
    spec.range = parse_range(o.range);
    return spec;
}

int write_table(const scan::ScanTable& table, const CommonOpts& o) {
    std::ostringstream body;
    if (o.format == "json")
        scan::emit_json(table, body);
    else if (o.format == "csv")
        scan::emit_csv(table, body);
    else
        throw ValidationError("unknown format: " + o.format);
    if (o.out.empty()) {
        std::cout << body.str();
    } else {
        std::ofstream f(o.out, std::ios::binary);
        if (!f || !(f << body.str())) {
            std::cerr << "error: cannot write " << o.out << "\n";
            return kExitIo;
        }
    }
    bool all_failed = !table.rows.empty();
    for (const auto& r : table.rows)
        if (r.flag != scan::RowFlag::Failed) all_failed = false;
    return all_failed ? kExitAllRowsFailed : kExitOk;
}

int run_scan_command(const CommonOpts& o, scan::Quantity q) {
    CommonOpts opts = o;
    apply_config_file(opts);
    return write_table(scan::run_scan(make_spec(opts, q)), opts);
}

int run_modes(const CommonOpts& o) {
    CommonOpts opts = o;
    apply_config_file(opts);
    if (!opts.sweep.empty()) return run_scan_command(opts, scan::Quantity::TrappedModes);
    const Stack s = validate_stack({opts.n_l, opts.n_s, opts.L});
    std::ostringstream body;
    body << "# n_l=" << opts.n_l << "\n# n_s=" << opts.n_s << "\n# L=" << opts.L
         << "\n# k_par=" << opts.k_par << "\n";
    body << "pol,q,kzl,sigma,norm,residual\n";
    char buf[256];
    for (Polarization pol : {Polarization::TE, Polarization::TM}) {
        for (const auto& root : modes::find_trapped_modes(s, opts.k_par, pol)) {
            const auto m = modes::solve_trapped_mode(s, root);
            std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                          pol == Polarization::TE ? "TE" : "TM", root.q, m.kzl, m.sigma, m.norm,
                          root.residual);
            body << buf;
        }
    }
    if (opts.out.empty()) {
        std::cout << body.str();
    } else {
        std::ofstream f(opts.out, std::ios::binary);
        if (!f || !(f << body.str())) return kExitIo;
    }
    return kExitOk;
}

int run_resonance_map(const CommonOpts& o, int kappa_max) {
    CommonOpts opts = o;
    apply_config_file(opts);
    const Stack s = validate_stack({opts.n_l, opts.n_s, opts.L});
    const auto pts = asymptotics::resonance_condition(s, std::abs(opts.E), kappa_max);
    std::ostringstream body;
    if (opts.format == "json") {
        body << "{\"n_l\": " << opts.n_l << ", \"E\": " << std::abs(opts.E) << ", \"rows\": [";
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (i) body << ", ";
            body << "{\"kappa\": " << pts[i].kappa << ", \"L_res\": " << pts[i].L_res
                 << ", \"L_antires\": " << pts[i].L_antires << "}";
        }
        body << "]}\n";
    } else {
        body << "# n_l=" << opts.n_l << "\n# E=" << std::abs(opts.E) << "\n";
        body << "kappa,L_res,L_antires\n";
        char buf[128];
        for (const auto& p : pts) {
            std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g\n", p.kappa, p.L_res, p.L_antires);
            body << buf;
        }
    }
    if (opts.out.empty()) {
        std::cout << body.str();
    } else {
        std::ofstream f(opts.out, std::ios::binary);
        if (!f || !(f << body.str())) return kExitIo;
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Casimir-Polder shifts of an atom above a layered dielectric half-space"};
    app.require_subcommand(1);

    CommonOpts o;
    bool resonant_only = false;
    int kappa_max = 5;
    std::string comp = "xx";
    double zp = 0.0;

    auto* ground = app.add_subcommand("ground", "ground-state shift sweep");
    add_common(ground, o);
    auto* excited = app.add_subcommand("excited", "excited-state shift sweep (E < 0 adds the resonant part)");
    add_common(excited, o);
    excited->add_flag("--resonant-only", resonant_only, "emit only the resonant part");
    auto* modes_cmd = app.add_subcommand("modes", "trapped-mode table or count sweep");
    add_common(modes_cmd, o);
    auto* compl_cmd = app.add_subcommand("completeness", "mode-sum vs Green-function audit");
    add_common(compl_cmd, o);
    compl_cmd->add_option("--comp", comp, "component pair: xx|yy|zz|xz|zx");
    compl_cmd->add_option("--zp", zp, "second z (default: 1.001 z)");
    auto* greens_cmd = app.add_subcommand("greens", "reflected Green's function sweep");
    add_common(greens_cmd, o);
    auto* rmap = app.add_subcommand("resonance-map", "resonant/anti-resonant layer thicknesses");
    add_common(rmap, o);
    rmap->add_option("--kappa-max", kappa_max, "largest interference order");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitBadArgs;
    }

    try {
        if (ground->parsed()) return run_scan_command(o, scan::Quantity::GroundShift);
        if (excited->parsed())
            return run_scan_command(o, resonant_only ? scan::Quantity::ResonantShift
                                                     : scan::Quantity::ExcitedShift);
        if (modes_cmd->parsed()) return run_modes(o);
        if (greens_cmd->parsed()) return run_scan_command(o, scan::Quantity::Greens);
        if (rmap->parsed()) return run_resonance_map(o, kappa_max);
        if (compl_cmd->parsed()) {
            CommonOpts opts = o;
            apply_config_file(opts);
            if (!opts.sweep.empty())
                return run_scan_command(opts, scan::Quantity::Completeness);
            const Stack s = validate_stack({opts.n_l, opts.n_s, opts.L});
            const double z = s.L / 2.0 + opts.Z;
            const double z2 = zp > 0.0 ? zp : z * 1.001;
            auto parse_comp = [](char c) {
                if (c == 'x') return modes::Component::X;
                if (c == 'y') return modes::Component::Y;
                return modes::Component::Z;
            };
            if (comp.size() != 2) throw ValidationError("--comp needs two letters, e.g. xx");
            const auto r = modes::completeness_audit(s, z, z2, opts.rho, parse_comp(comp[0]),
                                                     parse_comp(comp[1]));
            std::ostringstream body;
            body << "{\"mode_sum\": " << r.mode_sum << ", \"target\": " << r.target
                 << ", \"residual\": " << r.residual
                 << ", \"converged\": " << (r.converged ? "true" : "false") << "}\n";
            if (opts.out.empty()) {
                std::cout << body.str();
            } else {
                std::ofstream f(opts.out, std::ios::binary);
                if (!f || !(f << body.str())) return kExitIo;
            }
            return kExitOk;
        }
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadArgs;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadArgs;
    }
    return kExitOk;
}
