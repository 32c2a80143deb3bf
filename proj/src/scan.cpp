#include "cpshift/scan.hpp"

#include "cpshift/asymptotics.hpp"
#include "cpshift/greens.hpp"
#include "cpshift/modes.hpp"
#include "cpshift/shift.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <thread>

namespace cpshift::scan {

void ScanSpec::validate() const {
    validate_stack(stack);
    cfg.validate();
    if (!(range.lo < range.hi)) throw ValidationError("scan: range lo < hi required");
    if (range.count < 2) throw ValidationError("scan: range count >= 2 required");
    if (range.log && !(range.lo > 0.0)) throw ValidationError("scan: log sweep requires lo > 0");
    if (quantity == Quantity::GroundShift || quantity == Quantity::ExcitedShift ||
        quantity == Quantity::ResonantShift) {
        if (transitions.empty()) throw ValidationError("scan: needs at least one transition");
        for (const auto& t : transitions) validate_transition(t);
    }
}

namespace {

double sweep_point(const Range& r, int i) {
    const double f = static_cast<double>(i) / (r.count - 1);
    if (r.log) return r.lo * std::pow(r.hi / r.lo, f);
    return r.lo + (r.hi - r.lo) * f;
}

struct Problem {
    Stack stack;
    std::vector<Transition> transitions;
    double Z, k_par, rho;
};

Problem apply_sweep(const ScanSpec& spec, double v) {
    Problem p{spec.stack, spec.transitions, spec.Z, spec.k_par, spec.rho};
    switch (spec.sweep) {
        case SweepVar::Z: p.Z = v; break;
        case SweepVar::L: p.stack.L = v; break;
        case SweepVar::E:
            for (auto& t : p.transitions) t.E = std::copysign(v, t.E);
            break;
        case SweepVar::NL: p.stack.n_l = v; break;
        case SweepVar::NS: p.stack.n_s = v; break;
        case SweepVar::KPar: p.k_par = v; break;
    }
    return p;
}

double norm_factor(Normalization n, double Z) {
    switch (n) {
        case Normalization::TimesZ3: return Z * Z * Z;
        case Normalization::TimesZ4: return Z * Z * Z * Z;
        default: return 1.0;
    }
}

ScanRow evaluate_row(const ScanSpec& spec, double v) {
    ScanRow row;
    row.sweep_value = v;
    const Problem p = apply_sweep(spec, v);
    validate_stack(p.stack);
    const double nf = norm_factor(spec.normalization, p.Z);
    bool converged = true;

    switch (spec.quantity) {
        case Quantity::GroundShift:
        case Quantity::ExcitedShift: {
            ShiftAccumulator par, perp;
            for (const Transition& t : p.transitions) {
                Transition tp = t, tq = t;
                tp.mu_perp_sq = 0.0;
                tq.mu_par_sq = 0.0;
                par.add(shift::nonresonant_shift(p.stack, tp, p.Z, spec.cfg));
                perp.add(shift::nonresonant_shift(p.stack, tq, p.Z, spec.cfg));
                if (spec.quantity == Quantity::ExcitedShift && t.E < 0.0) {
                    if (tp.mu_par_sq > 0.0) par.add(shift::resonant_shift(p.stack, tp, p.Z, spec.cfg));
                    if (tq.mu_perp_sq > 0.0) perp.add(shift::resonant_shift(p.stack, tq, p.Z, spec.cfg));
                }
            }
            row.value_par = nf * par.total.value;
            row.value_perp = nf * perp.total.value;
            row.value_total = row.value_par + row.value_perp;
            row.abs_error = nf * (par.total.abs_error + perp.total.abs_error);
            converged = par.total.converged && perp.total.converged;
            break;
        }
        case Quantity::ResonantShift: {
            ShiftAccumulator par, perp;
            std::size_t n_poles = 0;
            for (const Transition& t : p.transitions) {
                if (!(t.E < 0.0)) continue;
                const auto [a, b] = reduced_units(t, {p.Z, p.stack.L});
                const auto k = shift::resonant_kernel(p.stack, a, b, spec.cfg);
                const double pref = std::abs(t.E * t.E * t.E) / (8.0 * M_PI);
                par.add({pref * t.mu_par_sq * k.K_par, pref * t.mu_par_sq * k.abs_error,
                         k.evaluations, k.converged});
                perp.add({pref * t.mu_perp_sq * k.K_perp, pref * t.mu_perp_sq * k.abs_error, 0,
                          k.converged});
                n_poles += k.pole_list.size();
            }
            row.value_par = nf * par.total.value;
            row.value_perp = nf * perp.total.value;
            row.value_total = row.value_par + row.value_perp;
            row.abs_error = nf * (par.total.abs_error + perp.total.abs_error);
            converged = par.total.converged && perp.total.converged;
            if (n_poles > 0 && row.flag == RowFlag::Ok) row.flag = RowFlag::PoleNear;
            break;
        }
        case Quantity::TrappedModes: {
            const auto te =
                modes::find_trapped_modes(p.stack, p.k_par, Polarization::TE, spec.cfg);
            const auto tm =
                modes::find_trapped_modes(p.stack, p.k_par, Polarization::TM, spec.cfg);
            row.value_par = static_cast<double>(te.size());
            row.value_perp = static_cast<double>(tm.size());
            row.value_total = row.value_par + row.value_perp;
            break;
        }
        case Quantity::Completeness: {
            const double z = p.stack.L / 2.0 + p.Z;
            const auto r = modes::completeness_audit(p.stack, z, z * (1.0 + 1e-3), p.rho,
                                                     modes::Component::X, modes::Component::X,
                                                     spec.cfg);
            row.value_par = r.mode_sum;
            row.value_perp = r.target;
            row.value_total = r.residual;
            converged = r.converged;
            break;
        }
        case Quantity::Greens: {
            const auto integral = greens::greens_reflected(p.stack, p.rho, 2.0 * p.Z, spec.cfg);
            row.value_par = integral.value;
            row.abs_error = integral.abs_error;
            // Image expansion of the same kernel (oracle-style companion column).
            const auto K = greens::ImageKernel::from(p.stack);
            const double s2 = 2.0 * p.Z;
            double series = -K.alpha / (4.0 * M_PI * std::hypot(p.rho, s2));
            if (p.stack.L > 0.0) {
                double geom = 1.0; // (alpha beta)^(v-1)
                for (int v = 1; v <= 200; ++v) {
                    const double depth = s2 + 2.0 * v * p.stack.L;
                    const double term = K.beta * (1.0 - K.alpha * K.alpha) * geom /
                                        (4.0 * M_PI * std::hypot(p.rho, depth));
                    series += term;
                    if (std::abs(term) < 1e-15 * std::abs(series) + 1e-300) break;
                    geom *= K.r_im;
                }
            }
            row.value_perp = series;
            row.value_total = integral.value;
            converged = integral.converged;
            break;
        }
    }
    if (!converged && row.flag == RowFlag::Ok) row.flag = RowFlag::Unconverged;
    return row;
}

} // namespace

ScanTable run_scan(const ScanSpec& spec) {
    spec.validate();
    ScanTable table;
    table.spec = spec;
    table.rows.resize(spec.range.count);

    const int hw = static_cast<int>(std::thread::hardware_concurrency());
    const int n_threads = std::min(spec.range.count,
                                   spec.threads > 0 ? spec.threads : std::max(1, hw));
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= spec.range.count) return;
            const double v = sweep_point(spec.range, i);
            try {
                table.rows[i] = evaluate_row(spec, v);
            } catch (const std::exception&) {
                table.rows[i] = ScanRow{v, 0.0, 0.0, 0.0, 0.0, RowFlag::Failed};
            }
        }
    };
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return table;
}

std::string to_string(Quantity q) {
    switch (q) {
        case Quantity::GroundShift: return "ground-shift";
        case Quantity::ExcitedShift: return "excited-shift";
        case Quantity::ResonantShift: return "resonant-shift";
        case Quantity::TrappedModes: return "trapped-modes";
        case Quantity::Completeness: return "completeness";
        case Quantity::Greens: return "greens";
    }
    return "?";
}

std::string to_string(SweepVar v) {
    switch (v) {
        case SweepVar::Z: return "Z";
        case SweepVar::L: return "L";
        case SweepVar::E: return "E";
        case SweepVar::NL: return "n_l";
        case SweepVar::NS: return "n_s";
        case SweepVar::KPar: return "k_par";
    }
    return "?";
}

std::string to_string(Normalization n) {
    switch (n) {
        case Normalization::Raw: return "raw";
        case Normalization::TimesZ3: return "times-Z3";
        case Normalization::TimesZ4: return "times-Z4";
    }
    return "?";
}

std::string to_string(RowFlag f) {
    switch (f) {
        case RowFlag::Ok: return "ok";
        case RowFlag::Unconverged: return "unconverged";
        case RowFlag::PoleNear: return "pole-near";
        case RowFlag::Failed: return "failed";
    }
    return "?";
}

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void emit_spec_keys(const ScanSpec& s, std::ostream& os, const std::string& prefix,
                    const std::string& sep, const std::string& suffix, bool quote_strings) {
    auto kv = [&](const std::string& k, const std::string& v, bool is_str) {
        os << prefix << k << sep << (is_str && quote_strings ? "\"" + v + "\"" : v) << suffix;
    };
    kv("quantity", to_string(s.quantity), true);
    kv("sweep", to_string(s.sweep), true);
    kv("range_lo", fmt17(s.range.lo), false);
    kv("range_hi", fmt17(s.range.hi), false);
    kv("range_count", std::to_string(s.range.count), false);
    kv("range_scale", s.range.log ? "log" : "linear", true);
    kv("n_l", fmt17(s.stack.n_l), false);
    kv("n_s", fmt17(s.stack.n_s), false);
    kv("L", fmt17(s.stack.L), false);
    kv("Z", fmt17(s.Z), false);
    kv("k_par", fmt17(s.k_par), false);
    kv("rho", fmt17(s.rho), false);
    for (std::size_t i = 0; i < s.transitions.size(); ++i) {
        const auto& t = s.transitions[i];
        const std::string tag = "transition" + std::to_string(i);
        kv(tag + "_E", fmt17(t.E), false);
        kv(tag + "_mu_par2", fmt17(t.mu_par_sq), false);
        kv(tag + "_mu_perp2", fmt17(t.mu_perp_sq), false);
    }
    kv("normalize", to_string(s.normalization), true);
    kv("rel_tol", fmt17(s.cfg.rel_tol), false);
    kv("abs_tol", fmt17(s.cfg.abs_tol), false);
}

} // namespace

void emit_csv(const ScanTable& table, std::ostream& os) {
    emit_spec_keys(table.spec, os, "# ", "=", "\n", false);
    os << to_string(table.spec.sweep) << ",value_par,value_perp,value_total,abs_error,flag\n";
    for (const auto& r : table.rows) {
        os << fmt17(r.sweep_value) << ',' << fmt17(r.value_par) << ',' << fmt17(r.value_perp)
           << ',' << fmt17(r.value_total) << ',' << fmt17(r.abs_error) << ','
           << to_string(r.flag) << '\n';
    }
}

void emit_json(const ScanTable& table, std::ostream& os) {
    os << "{\"spec\": {";
    bool first = true;
    auto kv = [&](const std::string& k, const std::string& v, bool is_str) {
        if (!first) os << ", ";
        first = false;
        os << '"' << k << "\": " << (is_str ? "\"" + v + "\"" : v);
    };
    const ScanSpec& s = table.spec;
    kv("quantity", to_string(s.quantity), true);
    kv("sweep", to_string(s.sweep), true);
    kv("range_lo", fmt17(s.range.lo), false);
    kv("range_hi", fmt17(s.range.hi), false);
    kv("range_count", std::to_string(s.range.count), false);
    kv("range_scale", s.range.log ? "log" : "linear", true);
    kv("n_l", fmt17(s.stack.n_l), false);
    kv("n_s", fmt17(s.stack.n_s), false);
    kv("L", fmt17(s.stack.L), false);
    kv("Z", fmt17(s.Z), false);
    kv("k_par", fmt17(s.k_par), false);
    kv("rho", fmt17(s.rho), false);
    for (std::size_t i = 0; i < s.transitions.size(); ++i) {
        const auto& t = s.transitions[i];
        const std::string tag = "transition" + std::to_string(i);
        kv(tag + "_E", fmt17(t.E), false);
        kv(tag + "_mu_par2", fmt17(t.mu_par_sq), false);
        kv(tag + "_mu_perp2", fmt17(t.mu_perp_sq), false);
    }
    kv("normalize", to_string(s.normalization), true);
    kv("rel_tol", fmt17(s.cfg.rel_tol), false);
    kv("abs_tol", fmt17(s.cfg.abs_tol), false);
    os << "}, \"rows\": [";
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& r = table.rows[i];
        if (i) os << ", ";
        os << "{\"sweep\": " << fmt17(r.sweep_value) << ", \"par\": " << fmt17(r.value_par)
           << ", \"perp\": " << fmt17(r.value_perp) << ", \"total\": " << fmt17(r.value_total)
           << ", \"abs_error\": " << fmt17(r.abs_error) << ", \"flag\": \"" << to_string(r.flag)
           << "\"}";
    }
    os << "]}\n";
}

} // namespace cpshift::scan
