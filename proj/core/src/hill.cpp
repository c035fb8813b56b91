#include "tvgap/hill.hpp"

#include "tvgap/spectral.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace tvgap {

namespace odeint = boost::numeric::odeint;

namespace {

using State = std::array<cplx, 4>; // row-major (y1, y2; y1', y2')

constexpr double kPi = std::numbers::pi;

Mat2 mul(const Mat2& a, const Mat2& b) {
    Mat2 r{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
    return r;
}

cplx det(const Mat2& m) { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }

double fro(const Mat2& m) {
    double s = 0.0;
    for (const auto& row : m)
        for (cplx v : row) s += std::norm(v);
    return std::sqrt(s);
}

// Eigenvector of M for eigenvalue lam, M in SL2: a column of M - lam^{-1} I.
std::array<cplx, 2> eigvec(const Mat2& m, cplx lam) {
    const cplx li = 1.0 / lam;
    const std::array<cplx, 2> c0{m[0][0] - li, m[1][0]};
    const std::array<cplx, 2> c1{m[0][1], m[1][1] - li};
    const double n0 = std::norm(c0[0]) + std::norm(c0[1]);
    const double n1 = std::norm(c1[0]) + std::norm(c1[1]);
    return n0 >= n1 ? c0 : c1;
}

// Real lattice coordinates (a, b) with z = a + b tau.
std::pair<double, double> coords(cplx z, cplx tau) {
    const double b = z.imag() / tau.imag();
    return {z.real() - b * tau.real(), b};
}

double seg_point_distance(cplx a, cplx b, cplx p) {
    const cplx d = b - a;
    const double len2 = std::norm(d);
    double t = len2 > 0.0 ? ((p - a) * std::conj(d)).real() / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::abs(a + t * d - p);
}

bool trace_ok(cplx d, double tol) {
    const double slack = tol * (1.0 + std::abs(d));
    return std::abs(d.imag()) <= slack && std::abs(d.real()) <= 2.0 + slack;
}

} // namespace

namespace {
SpectralReport report_for(const LatticeData& L, const MultiplicityTuple& n) { return spectral_report(L, n); }
} // namespace

GLEProblem::GLEProblem(const LatticeData& L, const MultiplicityTuple& n, const HillOptions& opt)
    : GLEProblem(L, n, report_for(L, n), opt) {}

GLEProblem::GLEProblem(const LatticeData& L, const MultiplicityTuple& n, const SpectralReport& rep,
                       const HillOptions& opt)
    : GLEProblem(L, n, rep.Q, opt, rep.roots.roots) {}

GLEProblem::GLEProblem(const LatticeData& L, const MultiplicityTuple& n, ComplexPoly Q, const HillOptions& opt,
                       std::vector<cplx> roots)
    : L_(L), n_(n), opt_(opt), Q_(std::move(Q)), roots_(std::move(roots)) {
    if (Q_.degree() != n_.degree()) throw DomainError("Q has the wrong degree for this tuple");
    if (roots_.empty()) roots_ = find_roots(Q_).roots;
    if (static_cast<int>(roots_.size()) != Q_.degree()) throw DomainError("root count does not match deg Q");
    for (int k = 0; k < 4; ++k) weight_[static_cast<std::size_t>(k)] = n_[k] * (n_[k] + 1.0);
}

cplx GLEProblem::potential(cplx z, cplx E) const {
    const cplx w = L_.wp(z);
    cplx I = weight_[0] * w + E;
    for (int k = 1; k <= 3; ++k) {
        if (weight_[static_cast<std::size_t>(k)] == 0.0) continue;
        const cplx ek = L_.e(k), ej = L_.e(k % 3 + 1), el = L_.e((k + 1) % 3 + 1);
        I += weight_[static_cast<std::size_t>(k)] * (ek + (ek - ej) * (ek - el) / (w - ek));
    }
    return I;
}

void GLEProblem::check_segment(cplx a, cplx b) const {
    const cplx tau = L_.tau();
    const auto [a0, b0] = coords(a, tau);
    const auto [a1, b1] = coords(b, tau);
    const long mlo = static_cast<long>(std::floor(std::min(a0, a1))) - 2;
    const long mhi = static_cast<long>(std::ceil(std::max(a0, a1))) + 2;
    const long nlo = static_cast<long>(std::floor(std::min(b0, b1))) - 2;
    const long nhi = static_cast<long>(std::ceil(std::max(b0, b1))) + 2;
    double best = std::numeric_limits<double>::infinity();
    cplx where{};
    for (int k = 0; k < 4; ++k) {
        if (n_[k] == 0) continue;
        for (long m = mlo; m <= mhi; ++m)
            for (long j = nlo; j <= nhi; ++j) {
                const cplx s = L_.half_period(k) + static_cast<double>(m) + static_cast<double>(j) * tau;
                const double d = seg_point_distance(a, b, s);
                if (d < best) best = d, where = s;
            }
    }
    if (best <= L_.pole_guard()) throw PoleError("integration segment too close to a pole", where, best);
}

Mat2 GLEProblem::integrate(cplx a, cplx b, cplx E, int& steps) const {
    const cplx d = b - a;
    auto rhs = [&](const State& x, State& dx, double t) {
        const cplx I = potential(a + t * d, E);
        dx[0] = d * x[2];
        dx[1] = d * x[3];
        dx[2] = d * I * x[0];
        dx[3] = d * I * x[1];
    };
    State x{1.0, 0.0, 0.0, 1.0};
    auto stepper = odeint::make_controlled(opt_.atol, opt_.rtol, odeint::runge_kutta_fehlberg78<State>());
    double t = 0.0, dt = 0.05;
    int ok = 0;
    while (1.0 - t > 1e-15) {
        if (t + dt > 1.0) dt = 1.0 - t;
        if (stepper.try_step(rhs, x, t, dt) == odeint::success) {
            ++ok;
        } else if (dt < 1e-13) {
            throw ConvergenceError("step-size underflow in monodromy integration");
        }
        if (ok > 200000) throw ConvergenceError("too many integration steps");
    }
    steps += ok;
    return Mat2{{{x[0], x[1]}, {x[2], x[3]}}};
}

Mat2 GLEProblem::transfer(cplx a, cplx b, cplx E, int* steps, cplx* det_product) const {
    check_segment(a, b);
    const int K = std::max(1, opt_.segments);
    Mat2 T{{{1.0, 0.0}, {0.0, 1.0}}};
    cplx dp = 1.0;
    int st = 0;
    for (int k = 0; k < K; ++k) {
        const Mat2 S = integrate(a + (b - a) * (static_cast<double>(k) / K), a + (b - a) * (static_cast<double>(k + 1) / K), E, st);
        dp *= det(S);
        T = mul(S, T);
    }
    if (steps) *steps += st;
    if (det_product) *det_product = dp;
    return T;
}

MonodromyRecord GLEProblem::monodromy(cplx E, std::optional<cplx> base) const {
    MonodromyRecord r;
    r.E = E;
    r.base = base.value_or(default_base());
    cplx w1, w2;
    r.M1 = transfer(r.base, r.base + 1.0, E, &r.steps, &w1);
    r.M2 = transfer(r.base, r.base + L_.tau(), E, &r.steps, &w2);
    r.delta1 = r.M1[0][0] + r.M1[1][1];
    r.delta2 = r.M2[0][0] + r.M2[1][1];
    r.wronskian_drift = std::max(std::abs(w1 - 1.0), std::abs(w2 - 1.0));
    r.det_direct = std::max(std::abs(det(r.M1) - 1.0), std::abs(det(r.M2) - 1.0));
    const Mat2 a = mul(r.M1, r.M2), b = mul(r.M2, r.M1);
    Mat2 c{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) c[i][j] = a[i][j] - b[i][j];
    r.commutator_norm = fro(c);

    r.theta1 = std::acos(r.delta1 / 2.0) / kPi;
    const cplx i1 = cplx(0, 1);
    const cplx lam1 = std::exp(i1 * kPi * r.theta1);
    if (std::abs(lam1 - 1.0 / lam1) > 1e-6) {
        const auto v = eigvec(r.M1, lam1);
        const cplx num = std::conj(v[0]) * (r.M2[0][0] * v[0] + r.M2[0][1] * v[1]) +
                         std::conj(v[1]) * (r.M2[1][0] * v[0] + r.M2[1][1] * v[1]);
        const cplx mu = num / (std::norm(v[0]) + std::norm(v[1]));
        r.theta2 = -i1 * std::log(mu) / kPi;
    } else {
        r.theta2 = std::acos(r.delta2 / 2.0) / kPi;
    }
    if (r.theta2.real() <= -1.0) r.theta2 += 2.0;
    return r;
}

cplx GLEProblem::delta1(cplx E, std::optional<cplx> base) const {
    const cplx p = base.value_or(default_base());
    const Mat2 m = transfer(p, p + 1.0, E);
    return m[0][0] + m[1][1];
}

bool GLEProblem::at_root(cplx E) const {
    return std::abs(Q_(E)) <= opt_.at_root_tol * std::pow(1.0 + std::abs(E), n_.degree());
}

UnitarityReport GLEProblem::unitarity_probe(cplx E) const {
    const MonodromyRecord m = monodromy(E);
    UnitarityReport u;
    u.E = E;
    u.delta1 = m.delta1;
    u.delta2 = m.delta2;
    u.at_root = at_root(E);
    u.unitary = !u.at_root && trace_ok(m.delta1, opt_.trace_tol) && trace_ok(m.delta2, opt_.trace_tol);
    return u;
}

std::vector<Band> GLEProblem::bands_raw(double lo, double hi, int steps,
                                         std::vector<std::pair<double, double>>* samples) const {
    if (!(hi > lo) || steps < 2) throw DomainError("band scan needs lo < hi and at least 2 steps");
    std::vector<double> Eg(static_cast<std::size_t>(steps));
    std::vector<bool> in(Eg.size());
    auto f = [&](double E) { return std::abs(delta1(cplx(E, 0.0)).real()) - 2.0; };
    for (std::size_t i = 0; i < Eg.size(); ++i) {
        Eg[i] = lo + (hi - lo) * static_cast<double>(i) / (steps - 1);
        const double d = delta1(cplx(Eg[i], 0.0)).real();
        in[i] = std::abs(d) <= 2.0;
        if (samples) samples->emplace_back(Eg[i], d);
    }
    auto edge = [&](double out, double inside) {
        while (std::abs(inside - out) > opt_.edge_tol) {
            const double mid = 0.5 * (out + inside);
            (f(mid) <= 0.0 ? inside : out) = mid;
        }
        return 0.5 * (out + inside);
    };
    std::vector<Band> bands;
    std::size_t i = 0;
    while (i < Eg.size()) {
        if (!in[i]) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < Eg.size() && in[j + 1]) ++j;
        Band b;
        b.open_left = i == 0;
        b.open_right = j + 1 == Eg.size();
        if (!b.open_left) b.lo = edge(Eg[i - 1], Eg[i]);
        if (!b.open_right) b.hi = edge(Eg[j + 1], Eg[j]);
        bands.push_back(b);
        i = j + 1;
    }
    return bands;
}

BandReport GLEProblem::stability_set_1d(double E_lo, double E_hi, int steps) const {
    if (std::abs(L_.tau().real()) > 1e-12) throw DomainError("stability_set_1d needs tau on the imaginary axis");
    if (n_.condition_class() != ConditionClass::Neither)
        throw DomainError("stability_set_1d needs a tuple outside C1 and C2");
    BandReport r;
    r.bands = bands_raw(E_lo, E_hi, steps, &r.samples);
    for (const Band& b : r.bands) {
        if (b.open_left || b.open_right) ++r.semi_infinite;
        if (!b.open_left) r.edges.push_back(b.lo);
        if (!b.open_right) r.edges.push_back(b.hi);
    }
    std::sort(r.edges.begin(), r.edges.end());
    r.left_semi_infinite = !r.bands.empty() && r.bands.front().open_left;
    for (cplx e : roots_) r.roots.push_back(e.real());
    std::sort(r.roots.begin(), r.roots.end());
    if (r.edges.size() == r.roots.size()) {
        r.max_edge_error = 0.0;
        for (std::size_t k = 0; k < r.edges.size(); ++k)
            r.max_edge_error = std::max(r.max_edge_error, std::abs(r.edges[k] - r.roots[k]));
    }
    r.edges_match = r.edges.size() == r.roots.size() && r.max_edge_error <= opt_.edge_match_tol &&
                    r.semi_infinite == 1 && r.left_semi_infinite;
    return r;
}

DevelopingMapReport GLEProblem::developing_map_periodicity(cplx E, const std::vector<cplx>& sample_z) const {
    const UnitarityReport u = unitarity_probe(E);
    if (u.at_root) throw DomainError("developing map check refused: E is a root of Q");
    if (!u.unitary) throw DomainError("developing map check refused: monodromy is not unitary");
    const MonodromyRecord m = monodromy(E);
    const cplx i1(0, 1);
    const cplx lam1 = std::exp(i1 * kPi * m.theta1);
    const cplx lam2 = std::exp(i1 * kPi * m.theta2);
    // diagonalize whichever generator has the better separated eigenvalues
    const bool use1 = std::abs(lam1 - 1.0 / lam1) >= std::abs(lam2 - 1.0 / lam2);
    const Mat2& M = use1 ? m.M1 : m.M2;
    const cplx lam = use1 ? lam1 : lam2;
    const auto v1 = eigvec(M, lam);
    const auto v2 = eigvec(M, 1.0 / lam);

    const cplx base = default_base();
    const cplx tau = L_.tau();
    auto G = [&](const Mat2& Y) {
        const cplx y1 = Y[0][0] * v1[0] + Y[0][1] * v1[1];
        const cplx y2 = Y[0][0] * v2[0] + Y[0][1] * v2[1];
        return std::norm(y1) + std::norm(y2);
    };
    DevelopingMapReport r;
    r.theta1 = m.theta1.real();
    r.theta2 = m.theta2.real();
    for (cplx z : sample_z) {
        const auto [a, b] = coords(z - base, tau);
        const cplx p1 = base + a;
        Mat2 Y = mul(transfer(p1, z, E), transfer(base, p1, E));
        const double g0 = G(Y);
        const double g1 = G(mul(transfer(z, z + 1.0, E), Y));
        const double g2 = G(mul(transfer(z, z + tau, E), Y));
        r.drift1 = std::max(r.drift1, std::abs(g1 - g0) / g0);
        r.drift2 = std::max(r.drift2, std::abs(g2 - g0) / g0);
    }
    return r;
}

DualTorusReport dual_torus_exclusion(const GLEProblem& P, double E_lo, double E_hi, int steps) {
    const LatticeData& L = P.lattice();
    const cplx tau = L.tau();
    if (std::abs(tau.real()) > 1e-12) throw DomainError("dual_torus_exclusion needs tau on the imaginary axis");
    if (P.tuple().condition_class() != ConditionClass::Neither)
        throw DomainError("dual_torus_exclusion needs a tuple outside C1 and C2");
    const HillOptions& opt = P.options();
    const double t2 = (tau * tau).real(); // -b^2
    const LatticeData Ld(-1.0 / tau, L.truncation_tol(), L.pole_guard());
    const GLEProblem D(Ld, P.tuple().swapped12(), opt);

    DualTorusReport r;
    r.bands = P.stability_set_1d(E_lo, E_hi, steps).bands;
    const auto raw = D.stability_set_1d(t2 * E_hi, t2 * E_lo, steps).bands;
    const double inf = std::numeric_limits<double>::infinity();
    for (const Band& b : raw) {
        Band m;
        m.open_left = b.open_right;
        m.open_right = b.open_left;
        m.lo = b.open_right ? -inf : b.hi / t2;
        m.hi = b.open_left ? inf : b.lo / t2;
        r.dual_bands.push_back(m);
    }
    std::reverse(r.dual_bands.begin(), r.dual_bands.end());
    for (cplx e : P.roots()) r.roots.push_back(e.real());
    std::sort(r.roots.begin(), r.roots.end());

    const double slack = 10.0 * opt.edge_tol * std::max(1.0, 1.0 / std::abs(t2));
    for (const Band& a : r.bands)
        for (const Band& b : r.dual_bands) {
            const double lo = std::max(a.lo, b.lo), hi = std::min(a.hi, b.hi);
            if (lo <= hi + slack) r.intersections.push_back({lo, std::max(lo, hi)});
        }
    std::vector<bool> hit(r.roots.size(), false);
    for (const Interval& iv : r.intersections) {
        bool near = false;
        for (std::size_t k = 0; k < r.roots.size(); ++k)
            if (std::abs(iv.lo - r.roots[k]) <= opt.dual_tol && std::abs(iv.hi - r.roots[k]) <= opt.dual_tol)
                near = true, hit[k] = true;
        if (!near) ++r.far_from_roots;
    }
    r.roots_hit = static_cast<int>(std::count(hit.begin(), hit.end(), true));
    r.pass = r.far_from_roots == 0 && r.roots_hit == static_cast<int>(r.roots.size());
    return r;
}

} // namespace tvgap
