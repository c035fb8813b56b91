#include "tvgap/premodular.hpp"

#include "tvgap/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace tvgap {

std::string_view to_string(F0Location l) {
    switch (l) {
    case F0Location::Interior: return "interior";
    case F0Location::BoundaryLeft: return "boundary_left";
    case F0Location::BoundaryRight: return "boundary_right";
    case F0Location::BoundaryCircle: return "boundary_circle";
    case F0Location::Outside: return "outside";
    }
    return "?";
}

F0Location classify_f0(cplx tau, double tol) {
    if (!(tau.imag() > 0.0)) return F0Location::Outside;
    const double x = tau.real();
    const double d = std::abs(tau - 0.5) - 0.5;
    if (x < -tol || x > 1.0 + tol || d < -tol) return F0Location::Outside;
    if (std::abs(x) <= tol) return F0Location::BoundaryLeft;
    if (std::abs(x - 1.0) <= tol) return F0Location::BoundaryRight;
    if (std::abs(d) <= tol) return F0Location::BoundaryCircle;
    return F0Location::Interior;
}

std::string_view to_string(RsTriangle t) {
    switch (t) {
    case RsTriangle::T0: return "T0";
    case RsTriangle::T1: return "T1";
    case RsTriangle::T2: return "T2";
    case RsTriangle::T3: return "T3";
    case RsTriangle::None: return "none";
    }
    return "?";
}

RsTriangle triangle_of(double r, double s) {
    if (r > 0 && r < 0.5 && s > 0 && s < 0.5 && r + s > 0.5) return RsTriangle::T0;
    if (r > 0.5 && r < 1 && s > 0 && s < 0.5 && r + s > 1) return RsTriangle::T1;
    if (r > 0.5 && r < 1 && s > 0 && s < 0.5 && r + s < 1) return RsTriangle::T2;
    if (r > 0 && s > 0 && r + s < 0.5) return RsTriangle::T3;
    return RsTriangle::None;
}

bool on_half_lattice(double r, double s, double tol) {
    auto half = [tol](double x) { return std::abs(2.0 * x - std::round(2.0 * x)) <= 2.0 * tol; };
    return half(r) && half(s);
}

cplx z_rs(const LatticeData& L, double r, double s) {
    return L.zeta(r + s * L.tau()) - r * L.eta1() - s * L.eta2();
}

cplx z_n(const LatticeData& L, double r, double s, int n) {
    if (n < 1 || n > 4) throw DomainError("pre-modular index must be 1..4");
    const cplx Z = z_rs(L, r, s);
    if (n == 1) return Z;
    const auto [p, dp] = L.wp_and_prime(r + s * L.tau());
    const cplx g2 = L.g2(), g3 = L.g3();
    const cplx Z2 = Z * Z;
    if (n == 2) return Z * Z2 - 3.0 * p * Z - dp;
    const cplx p2 = p * p;
    if (n == 3) {
        return Z2 * Z2 * Z2 - 15.0 * p * Z2 * Z2 - 20.0 * dp * Z2 * Z + (27.0 / 4.0 * g2 - 45.0 * p2) * Z2 -
               12.0 * p * dp * Z - 5.0 / 4.0 * dp * dp;
    }
    const cplx c[11] = {
        3.0 / 4.0 * (25.0 * g2 - 3.0 * p2) * dp * dp,
        -(40.0 * p2 * p - 163.0 * g2 * p + 125.0 * g3) * dp,
        -9.0 / 4.0 * (140.0 * p2 * p2 - 245.0 * g2 * p2 + 190.0 * g3 * p + 21.0 * g2 * g2),
        15.0 * (11.0 * g2 - 24.0 * p2) * dp,
        -15.0 / 4.0 * (280.0 * p2 * p - 49.0 * g2 * p - 115.0 * g3),
        -504.0 * p * dp,
        399.0 / 4.0 * g2 - 630.0 * p2,
        -120.0 * dp,
        -45.0 * p,
        0.0,
        1.0,
    };
    cplx acc = 0.0;
    for (int k = 10; k >= 0; --k) acc = acc * Z + c[k];
    return acc;
}

cplx z_n(cplx tau, double r, double s, int n) { return z_n(LatticeData(tau), r, s, n); }

std::vector<std::pair<double, double>> rs_grid(int nr, int ns) {
    std::vector<std::pair<double, double>> g;
    g.reserve(static_cast<std::size_t>(nr * ns));
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < ns; ++j) g.emplace_back((i + 0.5) / nr, (j + 0.5) / (2.0 * ns));
    return g;
}

std::vector<cplx> boundary_tau_grid(int per_piece, double h_min, double h_max) {
    if (per_piece < 2 || !(h_min > 0) || !(h_max > h_min) || h_min >= 0.5)
        throw DomainError("boundary grid needs per_piece >= 2 and 0 < h_min < min(h_max, 1/2)");
    std::vector<cplx> t;
    for (double x : {0.0, 1.0})
        for (int k = 0; k < per_piece; ++k) {
            const double h = h_min * std::pow(h_max / h_min, static_cast<double>(k) / (per_piece - 1));
            t.emplace_back(x, h);
        }
    const double phi0 = std::asin(2.0 * h_min);
    for (int k = 0; k < per_piece; ++k) {
        const double phi = phi0 + (std::numbers::pi - 2.0 * phi0) * k / (per_piece - 1);
        t.push_back(0.5 + 0.5 * std::polar(1.0, phi));
    }
    return t;
}

BoundaryScanReport boundary_nonvanishing_scan(int n, const std::vector<std::pair<double, double>>& rs,
                                              const std::vector<cplx>& taus, double floor, unsigned threads) {
    if (n < 1 || n > 4) throw DomainError("pre-modular index must be 1..4");
    struct Local {
        double min_abs = std::numeric_limits<double>::infinity();
        std::size_t arg = 0;
        int evaluated = 0, below = 0, errors = 0;
    };
    std::vector<Local> per(taus.size());
    parallel_for(taus.size(), threads, [&](std::size_t t) {
        Local& loc = per[t];
        const LatticeData L(taus[t]);
        for (std::size_t k = 0; k < rs.size(); ++k) {
            const auto [r, s] = rs[k];
            if (on_half_lattice(r, s)) continue;
            try {
                const double a = std::abs(z_n(L, r, s, n));
                ++loc.evaluated;
                if (a < floor) ++loc.below;
                if (a < loc.min_abs) loc.min_abs = a, loc.arg = k;
            } catch (const std::exception&) {
                ++loc.errors;
            }
        }
    });
    BoundaryScanReport rep;
    rep.n = n;
    rep.floor = floor;
    rep.min_abs = std::numeric_limits<double>::infinity();
    for (const auto& [r, s] : rs)
        if (on_half_lattice(r, s)) ++rep.flagged;
    for (std::size_t t = 0; t < taus.size(); ++t) {
        const Local& loc = per[t];
        rep.evaluated += loc.evaluated;
        rep.below_floor += loc.below;
        rep.errors += loc.errors;
        if (loc.evaluated > 0 && loc.min_abs < rep.min_abs) {
            rep.min_abs = loc.min_abs;
            rep.argmin_r = rs[loc.arg].first;
            rep.argmin_s = rs[loc.arg].second;
            rep.argmin_tau = taus[t];
        }
    }
    rep.pass = rep.evaluated > 0 && rep.errors == 0 && rep.below_floor == 0 && rep.min_abs > floor;
    return rep;
}

ZeroFindResult zero_find(int n, double r, double s, cplx seed, const ZeroFindOptions& opt) {
    if (on_half_lattice(r, s)) throw DomainError("zero_find needs (r,s) off the half lattice");
    ZeroFindResult res;
    res.seed = seed;
    cplx tau = seed;
    auto F = [&](cplx t) { return z_n(t, r, s, n); };
    try {
        cplx f = F(tau);
        for (int it = 1; it <= opt.max_iter; ++it) {
            res.iterations = it;
            const cplx df = (F(tau + opt.h) - F(tau - opt.h)) / (2.0 * opt.h);
            if (df == 0.0 || !std::isfinite(std::abs(df))) {
                res.note = "vanishing derivative";
                break;
            }
            cplx step = f / df;
            // stay in the upper half plane
            while (tau.imag() - step.imag() <= 0.25 * tau.imag()) step *= 0.5;
            // backtrack until |Z| decreases
            cplx trial = tau - step, ft = F(trial);
            for (int k = 0; k < 40 && !(std::abs(ft) < std::abs(f)); ++k) {
                step *= 0.5;
                trial = tau - step;
                ft = F(trial);
            }
            tau = trial;
            f = ft;
            if (!std::isfinite(std::abs(f)) || tau.imag() > 1e3) {
                res.note = "diverged";
                break;
            }
            if (std::abs(f) < opt.z_tol && std::abs(step) < opt.step_tol) {
                res.converged = true;
                break;
            }
        }
        res.residual = std::abs(f);
        if (!res.converged && res.note.empty()) res.note = "iteration cap reached";
    } catch (const PoleError& e) {
        res.note = std::string("pole encountered: ") + e.what();
        res.residual = std::numeric_limits<double>::infinity();
    }
    res.tau_zero = tau;
    res.location = classify_f0(tau, opt.f0_tol);
    res.inside_f0 = res.converged && res.location != F0Location::Outside;
    return res;
}

std::vector<cplx> f0_seed_lattice() {
    std::vector<cplx> s;
    for (double x : {0.1, 0.3, 0.5, 0.7, 0.9})
        for (double y : {0.6, 0.9, 1.3, 1.8, 2.5}) s.emplace_back(x, y);
    return s;
}

MultiStartResult zero_find_multistart(int n, double r, double s, const std::vector<cplx>& seeds,
                                      const ZeroFindOptions& opt, unsigned threads) {
    MultiStartResult m;
    m.runs.resize(seeds.size());
    parallel_for(seeds.size(), threads, [&](std::size_t i) { m.runs[i] = zero_find(n, r, s, seeds[i], opt); });
    for (const auto& run : m.runs)
        if (run.inside_f0) {
            ++m.converged_in_f0;
            if (!m.found) m.found = run;
        }
    return m;
}

} // namespace tvgap
