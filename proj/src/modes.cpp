#include "cpshift/modes.hpp"

#include "cpshift/greens.hpp"

#include <cmath>

namespace cpshift::modes {

using numerics::QuadratureConfig;

namespace {

constexpr cplx kI(0.0, 1.0);

struct WindowGeom {
    double kzl, sigma, omega; // at kz = i q
};

WindowGeom window_geometry(const Stack& s, double k_par, double q) {
    WindowGeom g;
    g.kzl = std::sqrt(std::max((s.n_l * s.n_l - 1.0) * k_par * k_par - s.n_l * s.n_l * q * q, 0.0));
    g.sigma = std::sqrt(std::max(s.n_s * s.n_s * q * q - (s.n_s * s.n_s - 1.0) * k_par * k_par, 0.0));
    g.omega = std::sqrt(std::max(k_par * k_par - q * q, 0.0));
    return g;
}

// TM polarization vector for wave vector (k_par, 0, kz_i) in medium n_i;
// omega is the vacuum frequency sqrt(k_par^2 + kz^2).
Eigen::Vector3cd e_tm(double k_par, cplx kz_i, double n_i, cplx omega) {
    Eigen::Vector3cd e;
    const cplx den = n_i * omega;
    e << kz_i / den, cplx(0.0), -k_par / den;
    return e;
}

Eigen::Vector3cd e_te() {
    Eigen::Vector3cd e;
    e << cplx(0.0), cplx(-1.0), cplx(0.0);
    return e;
}

} // namespace

cplx dispersion(const Stack& s, double k_par, cplx kz, Polarization pol) {
    const auto wv = fresnel::wave_vectors(s, k_par, kz);
    const auto [r_vl, t_vl] = fresnel::single_interface(1.0, s.n_l, wv.kz, wv.kzl, pol);
    const auto [r_ls, t_ls] = fresnel::single_interface(s.n_l, s.n_s, wv.kzl, wv.kzs, pol);
    (void)t_vl;
    (void)t_ls;
    return 1.0 + r_vl * r_ls * std::exp(2.0 * kI * wv.kzl * s.L);
}

double dispersion_reduced(const Stack& s, double k_par, double q, Polarization pol) {
    const WindowGeom g = window_geometry(s, k_par, q);
    if (pol == Polarization::TE) {
        const double phi = std::atan2(g.sigma, g.kzl) - g.kzl * s.L;
        return q * std::cos(phi) + g.kzl * std::sin(phi);
    }
    const double nl2 = s.n_l * s.n_l, ns2 = s.n_s * s.n_s;
    const double phi = std::atan2(g.sigma * nl2, g.kzl * ns2) - g.kzl * s.L;
    return q * std::cos(phi) + (g.kzl / nl2) * std::sin(phi);
}

std::optional<std::pair<double, double>> trapped_window(const Stack& s, double k_par) {
    if (s.n_l <= s.n_s || !(k_par > 0.0)) return std::nullopt;
    const double lo = k_par * std::sqrt(1.0 - 1.0 / (s.n_s * s.n_s));
    const double hi = k_par * std::sqrt(1.0 - 1.0 / (s.n_l * s.n_l));
    if (!(hi > lo)) return std::nullopt;
    return std::make_pair(lo, hi);
}

namespace {

std::vector<TrappedRoot> scan_window(const Stack& s, double k_par, Polarization pol,
                                     double lo, double hi, int points,
                                     const QuadratureConfig& cfg) {
    auto h = [&](double q) { return dispersion_reduced(s, k_par, q, pol); };
    auto found = numerics::find_roots_bracketed(h, lo, hi, points, cfg);
    std::vector<TrappedRoot> roots;
    roots.reserve(found.size());
    for (const auto& r : found)
        roots.push_back({pol, k_par, r.x, std::abs(dispersion(s, k_par, kI * r.x, pol))});
    return roots;
}

} // namespace

std::vector<TrappedRoot> find_trapped_modes(const Stack& s, double k_par, Polarization pol,
                                            const QuadratureConfig& cfg) {
    const auto win = trapped_window(s, k_par);
    if (!win) return {};
    // Margins keep the scan off the branch points where kzl or sigma vanish.
    const double width = win->second - win->first;
    const double lo = win->first + 1e-11 * width;
    const double hi = win->second - 1e-11 * width;
    // Phase across the window grows like kzl_max L + pi; 64 cells per pi of phase.
    const double kzl_max =
        k_par * std::sqrt(std::max(s.n_l * s.n_l / (s.n_s * s.n_s) - 1.0, 0.0));
    const int points = 64 * (1 + static_cast<int>(std::ceil((kzl_max * s.L + M_PI) / M_PI)));
    auto roots = scan_window(s, k_par, pol, lo, hi, points, cfg);
    auto verify = scan_window(s, k_par, pol, lo, hi, 2 * points + 1, cfg);
    if (verify.size() != roots.size())
        throw Error("find_trapped_modes: increase scan_points (two roots in one scan cell)");
    return roots;
}

TrappedMode solve_trapped_mode(const Stack& s, const TrappedRoot& root) {
    TrappedMode m;
    m.root = root;
    const WindowGeom g = window_geometry(s, root.k_par, root.q);
    m.kzl = g.kzl;
    m.sigma = g.sigma;
    m.omega = g.omega;
    const cplx kz = kI * root.q;
    const cplx kzs = kI * m.sigma;
    const auto [r_lv, t_lv] = fresnel::single_interface(s.n_l, 1.0, m.kzl, kz, root.pol);
    const auto [r_ls, t_ls] = fresnel::single_interface(s.n_l, s.n_s, m.kzl, kzs, root.pol);
    m.V = r_lv * std::exp(kI * m.kzl * s.L);
    m.T_lv = t_lv * std::exp(kI * (m.kzl - kz) * s.L / 2.0);
    m.T_ls = (t_ls / r_ls) * std::exp(-kI * (m.kzl + kzs) * s.L / 2.0);
    m.norm = trapped_normalization(s, root);
    return m;
}

double trapped_normalization(const Stack& s, const TrappedRoot& root) {
    const WindowGeom g = window_geometry(s, root.k_par, root.q);
    if (!(g.kzl > 0.0) || !(g.sigma > 0.0) || !(g.omega > 0.0))
        throw Error("trapped_normalization: root outside the trapped window");
    const double q = root.q;
    const cplx kz = kI * q;
    const cplx kzs = kI * g.sigma;
    const auto [r_lv, t_lv] = fresnel::single_interface(s.n_l, 1.0, g.kzl, kz, root.pol);
    const auto [r_ls, t_ls] = fresnel::single_interface(s.n_l, s.n_s, g.kzl, kzs, root.pol);
    (void)r_ls;
    const cplx V = r_lv * std::exp(kI * g.kzl * s.L);
    const cplx T_lv = t_lv * std::exp(kI * (g.kzl - kz) * s.L / 2.0);
    const cplx T_ls = (t_ls / r_ls) * std::exp(-kI * (g.kzl + kzs) * s.L / 2.0);

    double evac2 = 1.0, esub2 = 1.0, elayp2 = 1.0, elaym2 = 1.0;
    cplx cross_pol(1.0);
    if (root.pol == Polarization::TM) {
        const auto ev = e_tm(root.k_par, kz, 1.0, g.omega);
        const auto es = e_tm(root.k_par, -kzs, s.n_s, g.omega);
        const auto ep = e_tm(root.k_par, cplx(g.kzl), s.n_l, g.omega);
        const auto em = e_tm(root.k_par, cplx(-g.kzl), s.n_l, g.omega);
        evac2 = ev.squaredNorm();
        esub2 = es.squaredNorm();
        elayp2 = ep.squaredNorm();
        elaym2 = em.squaredNorm();
        cross_pol = em.dot(ep); // conj(e(kl-)) . e(kl+)
    }
    const double vac = std::norm(T_lv) * evac2 * std::exp(-q * s.L) / (2.0 * q);
    const double sub =
        s.n_s * s.n_s * std::norm(T_ls) * esub2 * std::exp(-g.sigma * s.L) / (2.0 * g.sigma);
    const double lay =
        s.n_l * s.n_l *
        ((std::norm(V) * elaym2 + elayp2) * s.L +
         2.0 * std::real(std::conj(V) * cross_pol) * std::sin(g.kzl * s.L) / g.kzl);
    const double bracket = vac + sub + lay;
    if (!(bracket > 0.0)) throw Error("trapped_normalization: normalization breakdown");
    return 1.0 / (2.0 * M_PI * std::sqrt(bracket));
}

std::vector<double> find_eta_poles(const Stack& s, double E_abs, Polarization pol,
                                   const QuadratureConfig& cfg) {
    if (s.n_l <= s.n_s || s.L <= 0.0) return {};
    const double lo0 = std::sqrt(std::max(s.n_s * s.n_s - 1.0, 0.0));
    const double hi0 = std::sqrt(s.n_l * s.n_l - 1.0);
    const double width = hi0 - lo0;
    if (!(width > 0.0)) return {};
    const double lo = lo0 + 1e-11 * std::max(width, 1.0);
    const double hi = hi0 - 1e-11 * std::max(width, 1.0);
    // Same reduced dispersion evaluated along the fixed-frequency path:
    // q = |E| eta, k_par = |E| sqrt(1+eta^2).
    auto h = [&](double eta) {
        const double k_par = E_abs * std::hypot(1.0, eta);
        return dispersion_reduced(s, k_par, E_abs * eta, pol);
    };
    const double phase = s.n_l * E_abs * s.L;
    const int points = 64 * (1 + static_cast<int>(std::ceil((phase + M_PI) / M_PI)));
    auto refine = [&](int n) {
        std::vector<double> out;
        for (const auto& r : numerics::find_roots_bracketed(h, lo, hi, n, cfg)) out.push_back(r.x);
        return out;
    };
    auto roots = refine(points);
    auto verify = refine(2 * points + 1);
    if (verify.size() != roots.size())
        throw Error("find_eta_poles: increase scan_points (two roots in one scan cell)");
    return roots;
}

Eigen::Vector3cd mode_function(const Stack& s, const ModeId& id, const Eigen::Vector3d& r) {
    const double z = r.z();
    const double pref = 1.0 / std::pow(2.0 * M_PI, 1.5);
    const cplx phase_par = std::exp(kI * id.k_par * r.x());
    const Polarization pol = id.pol;

    auto evec = [&](cplx kz_i, double n_i, cplx omega) -> Eigen::Vector3cd {
        return pol == Polarization::TE ? e_te() : e_tm(id.k_par, kz_i, n_i, omega);
    };

    if (id.kind == ModeId::Kind::Trapped) {
        TrappedRoot root{pol, id.k_par, id.param, 0.0};
        const TrappedMode m = solve_trapped_mode(s, root);
        const cplx kz = kI * root.q;
        const cplx kzs = kI * m.sigma;
        Eigen::Vector3cd v;
        if (z >= s.L / 2.0) {
            v = m.T_lv * evec(kz, 1.0, m.omega) * std::exp(kI * kz * z);
        } else if (z >= -s.L / 2.0) {
            v = m.V * evec(cplx(-m.kzl), s.n_l, m.omega) * std::exp(-kI * m.kzl * z) +
                evec(cplx(m.kzl), s.n_l, m.omega) * std::exp(kI * m.kzl * z);
        } else {
            v = m.T_ls * evec(-kzs, s.n_s, m.omega) * std::exp(-kI * kzs * z);
        }
        return m.norm * phase_par * v;
    }

    if (id.kind == ModeId::Kind::RightIncident) {
        const cplx kz(id.param);
        const auto wv = fresnel::wave_vectors(s, id.k_par, kz);
        const cplx omega = std::sqrt(id.k_par * id.k_par + kz * kz);
        const auto c = fresnel::stack_coefficients(s, wv, pol, fresnel::Side::Right);
        Eigen::Vector3cd v;
        if (z >= s.L / 2.0) {
            v = evec(-wv.kz, 1.0, omega) * std::exp(-kI * wv.kz * z) +
                c.R * evec(wv.kz, 1.0, omega) * std::exp(kI * wv.kz * z);
        } else if (z >= -s.L / 2.0) {
            v = c.I * evec(-wv.kzl, s.n_l, omega) * std::exp(-kI * wv.kzl * z) +
                c.J * evec(wv.kzl, s.n_l, omega) * std::exp(kI * wv.kzl * z);
        } else {
            v = c.T * evec(-wv.kzs, s.n_s, omega) * std::exp(-kI * wv.kzs * z);
        }
        return pref * phase_par * v;
    }

    // Left incident, parametrized by substrate kzs > 0.
    const double kzs_in = id.param;
    // Recover the vacuum kz on the branch consistent with a left mode:
    // kz^2 = (kzs^2 - (n_s^2-1) k_par^2)/n_s^2, propagating or evanescent.
    const double kz2 =
        (kzs_in * kzs_in - (s.n_s * s.n_s - 1.0) * id.k_par * id.k_par) / (s.n_s * s.n_s);
    const cplx kz = kz2 >= 0.0 ? cplx(std::sqrt(kz2)) : cplx(0.0, std::sqrt(-kz2));
    const auto wv = fresnel::wave_vectors(s, id.k_par, kz);
    const cplx omega = std::sqrt(id.k_par * id.k_par + kz * kz);
    const auto c = fresnel::stack_coefficients(s, wv, pol, fresnel::Side::Left);
    Eigen::Vector3cd v;
    if (z >= s.L / 2.0) {
        v = c.T * evec(wv.kz, 1.0, omega) * std::exp(kI * wv.kz * z);
    } else if (z >= -s.L / 2.0) {
        v = c.I * evec(wv.kzl, s.n_l, omega) * std::exp(kI * wv.kzl * z) +
            c.J * evec(-wv.kzl, s.n_l, omega) * std::exp(-kI * wv.kzl * z);
    } else {
        v = evec(wv.kzs, s.n_s, omega) * std::exp(kI * wv.kzs * z) +
            c.R * evec(-wv.kzs, s.n_s, omega) * std::exp(-kI * wv.kzs * z);
    }
    return (pref / s.n_s) * phase_par * v;
}

namespace {

// Angular integral over the k_par azimuth of e_i(k+) e_j(k-), in-plane
// separation along +x; includes the 2 pi normalization of the transform.
cplx angular_pol_product(Polarization pol, Component ci, Component cj, double k_par, cplx kz,
                         double rho) {
    const double x = k_par * rho;
    const double J0 = numerics::bessel_j0(x);
    const double J1 = numerics::bessel_j1(x);
    const double J1_over_x = x > 0.0 ? J1 / x : 0.5;
    const double J2 = 2.0 * J1_over_x - J0;
    const int i = static_cast<int>(ci), j = static_cast<int>(cj);
    if (pol == Polarization::TE) {
        if (i == 0 && j == 0) return M_PI * (J0 + J2);
        if (i == 1 && j == 1) return M_PI * (J0 - J2);
        return 0.0;
    }
    const cplx om2 = k_par * k_par + kz * kz;
    if (i == 0 && j == 0) return -kz * kz / om2 * M_PI * (J0 - J2);
    if (i == 1 && j == 1) return -kz * kz / om2 * M_PI * (J0 + J2);
    if (i == 2 && j == 2) return k_par * k_par / om2 * 2.0 * M_PI * J0;
    if (i == 0 && j == 2) return -k_par * kz / om2 * 2.0 * M_PI * kI * J1;
    if (i == 2 && j == 0) return k_par * kz / om2 * 2.0 * M_PI * kI * J1;
    return 0.0;
}

struct BracketParts {
    cplx value{};
    double abs_error = 0.0;
    bool converged = true;
};

// The curly-brace content of the completeness sum at fixed k_par:
// trapped-mode sum + evanescent kz-segment + travelling kz-integral.
BracketParts audit_bracket(const Stack& s, double k_par, double zsum, double rho, Component ci,
                           Component cj, const QuadratureConfig& cfg) {
    BracketParts out;
    const double inv8pi3 = 1.0 / std::pow(2.0 * M_PI, 3);
    const double u = zsum - s.L;
    for (Polarization pol : {Polarization::TE, Polarization::TM}) {
        // trapped modes
        for (const auto& root : find_trapped_modes(s, k_par, pol, cfg)) {
            const TrappedMode m = solve_trapped_mode(s, root);
            out.value += m.norm * m.norm * std::norm(m.T_lv) *
                         angular_pol_product(pol, ci, cj, k_par, kI * root.q, rho) *
                         std::exp(-root.q * zsum);
        }
        // evanescent segment kz = i t, 0 < t < Gamma_s
        const double Gs = k_par * std::sqrt(s.n_s * s.n_s - 1.0) / s.n_s;
        if (Gs > 0.0) {
            auto ev = [&](double t) -> cplx {
                const auto wv = fresnel::wave_vectors(s, k_par, kI * t);
                const auto c = fresnel::stack_coefficients(s, wv, pol, fresnel::Side::Left);
                return (t / wv.kzs.real()) * std::norm(c.T) *
                       angular_pol_product(pol, ci, cj, k_par, kI * t, rho) * std::exp(-t * zsum);
            };
            auto r = numerics::detail::integrate_adaptive<cplx>(ev, 0.0, Gs * (1.0 - 1e-12), cfg);
            out.value += inv8pi3 * r.value;
            out.abs_error += inv8pi3 * r.abs_error;
            out.converged = out.converged && r.converged;
        }
        // travelling: int_{-inf}^{inf} R^R P e^{i kz zsum} dkz
        //  = int_0^kc [F(kz) + F(-kz)] + 2 Re[i int_0^inf F(kc+iu) du]
        auto F = [&](cplx kz) -> cplx {
            const auto wv = fresnel::wave_vectors(s, k_par, kz);
            const auto c = fresnel::stack_coefficients(s, wv, pol, fresnel::Side::Right);
            return c.R * angular_pol_product(pol, ci, cj, k_par, kz, rho) *
                   std::exp(kI * kz * zsum);
        };
        const double kc = std::max({3.0 * k_par, 30.0 / u, 5.0});
        auto central = [&](double kz) { return F(cplx(kz)) + F(cplx(-kz)); };
        // Seed panels at the oscillation scale: the phase rate of
        // e^{i kz zsum + 2 i kzl L} is bounded by zsum + 2 n_l L.
        const double phase_rate = zsum + 2.0 * s.n_l * s.L;
        const int n_panels = std::max(1, static_cast<int>(std::ceil(kc * phase_rate / M_PI)));
        std::vector<double> cuts(n_panels + 1);
        for (int i = 0; i <= n_panels; ++i) cuts[i] = kc * i / n_panels;
        auto rc = numerics::detail::integrate_segments<cplx>(central, cuts, cfg);
        auto tail = [&](double t) { return kI * F(cplx(kc, t)); };
        const double t_max = numerics::detail::semi_infinite_cutoff(u, cfg);
        auto rt = numerics::detail::integrate_adaptive<cplx>(tail, 0.0, t_max, cfg);
        out.value += inv8pi3 * (rc.value + 2.0 * rt.value.real());
        out.abs_error += inv8pi3 * (rc.abs_error + 2.0 * rt.abs_error);
        out.converged = out.converged && rc.converged && rt.converged;
    }
    return out;
}

} // namespace

AuditResult completeness_audit(const Stack& s, double z, double zp, double rho, Component ci,
                               Component cj, const QuadratureConfig& cfg) {
    if (!(z > s.L / 2.0) || !(zp > s.L / 2.0))
        throw ValidationError("completeness_audit: needs z, z' > L/2");
    if (!(z + zp - s.L > 0.0)) throw ValidationError("completeness_audit: needs z + z' - L > 0");
    if (rho < 0.0) throw ValidationError("completeness_audit: rho >= 0");
    if (z == zp && rho == 0.0)
        throw ValidationError("completeness_audit: coincident points hit the delta term");

    const double zsum = z + zp;
    const double u = zsum - s.L;

    // The outer k_par sweep integrates a bracket that itself carries inner
    // quadrature noise, so its tolerance must sit well above the inner one;
    // the oscillatory travelling integrals need generous subdivision depth.
    QuadratureConfig outer = cfg;
    outer.rel_tol = std::max(cfg.rel_tol, 1e-7);
    outer.abs_tol = std::max(cfg.abs_tol, 1e-12);
    outer.max_subdivisions = std::max(cfg.max_subdivisions, 120);
    QuadratureConfig inner = cfg;
    inner.rel_tol = 0.02 * outer.rel_tol;
    inner.abs_tol = 1e-13;
    inner.max_subdivisions = std::max(cfg.max_subdivisions, 400);

    bool inner_ok = true;
    auto f = [&](double k_par) {
        auto b = audit_bracket(s, k_par, zsum, rho, ci, cj, inner);
        inner_ok = inner_ok && b.converged;
        return k_par * b.value.real();
    };
    const auto ms = numerics::integrate_semi_infinite(f, u, outer);
    const auto tg = greens::greens_reflected_dd(s, rho, u, static_cast<greens::Axis>(ci),
                                                static_cast<greens::Axis>(cj), inner);

    AuditResult res;
    res.mode_sum = ms.value;
    res.target = tg.value;
    res.converged = ms.converged && tg.converged && inner_ok;
    const double floor = std::max(ms.abs_error + tg.abs_error, 1e-300);
    res.residual = std::abs(ms.value - tg.value) / std::max(std::abs(tg.value), floor);
    return res;
}

} // namespace cpshift::modes
