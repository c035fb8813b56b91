#include "tvgap/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace tvgap {

namespace {

constexpr double pi = std::numbers::pi;
constexpr cplx I{0.0, 1.0};

struct ThetaAt {
    cplx t1, t1p, t2, t2p;
};

// theta_1, theta_2 and their v-derivatives at v for nome q = exp(i pi tau).
ThetaAt theta12(cplx v, cplx tau, double tol) {
    ThetaAt r{};
    const cplx E = std::exp(I * v);
    const cplx E2 = E * E;
    const cplx Ei = 1.0 / E;
    const cplx Ei2 = Ei * Ei;
    cplx Ek = E, Eik = Ei;
    double acc = 0.0;
    for (int n = 0; n < 64; ++n) {
        const double k = 2.0 * n + 1.0;
        const cplx qn = std::exp(I * pi * tau * ((n + 0.5) * (n + 0.5)));
        const cplx s = (Ek - Eik) / (2.0 * I);
        const cplx c = (Ek + Eik) / 2.0;
        const double sg = (n % 2 == 0) ? 2.0 : -2.0;
        r.t1 += sg * qn * s;
        r.t1p += sg * qn * k * c;
        r.t2 += 2.0 * qn * c;
        r.t2p -= 2.0 * qn * k * s;
        const double mag = std::abs(qn) * k * (std::abs(Ek) + std::abs(Eik));
        acc += mag;
        if (n > 0 && mag <= tol * acc) break;
        Ek *= E2;
        Eik *= Ei2;
    }
    return r;
}

// theta_3 and theta_4 at v.
std::pair<cplx, cplx> theta34(cplx v, cplx tau, double tol) {
    cplx t3 = 1.0, t4 = 1.0;
    double acc = 1.0;
    for (int n = 1; n < 64; ++n) {
        const cplx term = 2.0 * std::exp(I * pi * tau * static_cast<double>(n * n)) * std::cos(2.0 * n * v);
        t3 += term;
        t4 += (n % 2 == 0) ? term : -term;
        acc += std::abs(term);
        if (std::abs(term) <= tol * acc) break;
    }
    return {t3, t4};
}

// sum_{n>=1} n^p x^n / (1 - x^n)
cplx lambert(cplx x, int p, double tol) {
    cplx acc{};
    double mag_acc = 0.0;
    cplx xn = 1.0;
    for (int n = 1; n < 400; ++n) {
        xn *= x;
        const cplx term = std::pow(static_cast<double>(n), p) * xn / (1.0 - xn);
        acc += term;
        mag_acc += std::abs(term);
        if (std::abs(term) <= tol * std::max(mag_acc, 1.0)) break;
    }
    return acc;
}

} // namespace

LatticeData::LatticeData(cplx tau, double tol, double pole_guard)
    : tau_(tau), tol_(tol), guard_(pole_guard) {
    if (!(tau.imag() > 0.0)) throw DomainError("Im(tau) must be positive");
    if (!(tol > 0.0 && tol < 1.0)) throw DomainError("truncation tolerance must lie in (0, 1)");
    if (!(pole_guard >= 0.0)) throw DomainError("pole guard must be non-negative");
    nome_ = std::exp(I * pi * tau);

    // SL(2,Z) reduction, tracking tau' = (a tau + b) / (c tau + d).
    cplx t = tau;
    long a = 1, b = 0, c = 0, d = 1;
    for (int it = 0; it < 1000; ++it) {
        const long n = std::lround(t.real());
        if (n != 0) {
            t -= static_cast<double>(n);
            a -= n * c;
            b -= n * d;
        }
        if (std::norm(t) < 1.0 - 1e-14) {
            t = -1.0 / t;
            const long na = -c, nb = -d, nc = a, nd = b;
            a = na; b = nb; c = nc; d = nd;
        } else {
            break;
        }
    }
    ma_ = static_cast<int>(a); mb_ = static_cast<int>(b);
    mc_ = static_cast<int>(c); md_ = static_cast<int>(d);
    tr_ = t;
    lam_ = static_cast<double>(c) * tau + static_cast<double>(d);
    qr_ = std::exp(I * pi * tr_);

    th2_ = th3_ = th4_ = 0.0;
    {
        double acc = 0.0;
        for (int n = 0; n < 64; ++n) {
            const cplx term = 2.0 * std::exp(I * pi * tr_ * ((n + 0.5) * (n + 0.5)));
            th2_ += term;
            acc += std::abs(term);
            if (std::abs(term) <= tol * acc) break;
        }
        th3_ = th4_ = 1.0;
        for (int n = 1; n < 64; ++n) {
            const cplx term = 2.0 * std::exp(I * pi * tr_ * static_cast<double>(n * n));
            th3_ += term;
            th4_ += (n % 2 == 0) ? term : -term;
            if (std::abs(term) <= tol) break;
        }
    }
    const cplx t2 = th2_ * th2_, t3 = th3_ * th3_, t4 = th4_ * th4_;
    const cplx t2q = t2 * t2, t3q = t3 * t3, t4q = t4 * t4;
    e1r_ = pi * pi / 3.0 * (t3q + t4q);
    er_ = {e1r_, -pi * pi / 3.0 * (t2q + t3q), pi * pi / 3.0 * (t2q - t4q)};

    const cplx q2 = qr_ * qr_;
    const cplx E2 = 1.0 - 24.0 * lambert(q2, 1, tol);
    const cplx E4 = 1.0 + 240.0 * lambert(q2, 3, tol);
    const cplx E6 = 1.0 - 504.0 * lambert(q2, 5, tol);
    eta1r_ = pi * pi / 3.0 * E2;
    eta2r_ = tr_ * eta1r_ - 2.0 * pi * I;

    const cplx il = 1.0 / lam_;
    const cplx il2 = il * il;
    g2_ = 4.0 * std::pow(pi, 4) / 3.0 * E4 * il2 * il2;
    g3_ = 8.0 * std::pow(pi, 6) / 27.0 * E6 * il2 * il2 * il2;
    eta1_ = il * (static_cast<double>(ma_) * eta1r_ - static_cast<double>(mc_) * eta2r_);
    eta2_ = tau_ * eta1_ - 2.0 * pi * I;

    // omega = x + y tau = lambda (p + q tau') with p = a x - b y, q = d y - c x.
    const int xy[3][2] = {{1, 0}, {0, 1}, {1, 1}};
    for (int k = 0; k < 3; ++k) {
        const int x = xy[k][0], y = xy[k][1];
        const int p = ((ma_ * x - mb_ * y) % 2 + 2) % 2;
        const int q = ((md_ * y - mc_ * x) % 2 + 2) % 2;
        const int idx = (p == 1 && q == 0) ? 0 : (p == 0 && q == 1) ? 1 : 2;
        e_[static_cast<std::size_t>(k)] = er_[static_cast<std::size_t>(idx)] * il2;
        eidx_[static_cast<std::size_t>(k)] = idx;
    }
}

cplx LatticeData::half_period(int k) const {
    switch (k) {
    case 0: return 0.0;
    case 1: return 0.5;
    case 2: return tau_ / 2.0;
    case 3: return (1.0 + tau_) / 2.0;
    default: throw DomainError("half-period index must be in 0..3");
    }
}

cplx LatticeData::reduce(cplx z, long& m, long& n) const {
    cplx w = z / lam_;
    n = std::lround(w.imag() / tr_.imag());
    w -= static_cast<double>(n) * tr_;
    m = std::lround(w.real());
    w -= static_cast<double>(m);
    return w;
}

double LatticeData::reduced_distance(cplx w) const {
    double best = std::numeric_limits<double>::infinity();
    for (int j = -1; j <= 1; ++j)
        for (int k = -1; k <= 1; ++k)
            best = std::min(best, std::abs(w - (static_cast<double>(j) + static_cast<double>(k) * tr_)));
    return best;
}

double LatticeData::lattice_distance(cplx z) const {
    long m = 0, n = 0;
    const cplx w = reduce(z, m, n);
    return std::abs(lam_) * reduced_distance(w);
}

void LatticeData::check_pole(cplx z, cplx w) const {
    const double dist = std::abs(lam_) * reduced_distance(w);
    if (dist < guard_ || dist == 0.0) throw PoleError("point lies within the pole guard of the lattice", z, dist);
}

LatticeData::Local LatticeData::eval_reduced(cplx w, bool want_zeta) const {
    const ThetaAt th = theta12(pi * w, tr_, tol_);
    const auto [t3, t4] = theta34(pi * w, tr_, tol_);
    const cplx pp = pi * pi;
    const cplx r0 = th3_ * th4_ * th.t2 / th.t1, r1 = th2_ * th3_ * t4 / th.t1, r2 = th2_ * th4_ * t3 / th.t1;
    const cplx d0 = pp * r0 * r0, d1 = pp * r1 * r1, d2 = pp * r2 * r2;
    Local out;
    out.wp = er_[0] + d0;
    // product forms; the quotient derivative loses digits once Im w is large
    out.wp_prime = -2.0 * pi * pp * r0 * r1 * r2;
    out.wp_second = 2.0 * (d0 * d1 + d0 * d2 + d1 * d2);
    out.zeta_theta = want_zeta ? pi * th.t1p / th.t1 : cplx{};
    return out;
}

std::pair<cplx, cplx> LatticeData::wp_and_prime(cplx z) const {
    long m = 0, n = 0;
    const cplx w = reduce(z, m, n);
    check_pole(z, w);
    const Local l = eval_reduced(w, false);
    const cplx il = 1.0 / lam_;
    return {l.wp * il * il, l.wp_prime * il * il * il};
}

cplx LatticeData::wp(cplx z) const { return wp_and_prime(z).first; }

cplx LatticeData::wp_prime(cplx z) const { return wp_and_prime(z).second; }

cplx LatticeData::wp_second(cplx z) const {
    long m = 0, n = 0;
    const cplx w = reduce(z, m, n);
    check_pole(z, w);
    const cplx il = 1.0 / lam_;
    return eval_reduced(w, false).wp_second * il * il * il * il;
}

cplx LatticeData::zeta(cplx z) const {
    long m = 0, n = 0;
    const cplx w = reduce(z, m, n);
    check_pole(z, w);
    const Local l = eval_reduced(w, true);
    const cplx zr = eta1r_ * w + l.zeta_theta + static_cast<double>(m) * eta1r_ + static_cast<double>(n) * eta2r_;
    return zr / lam_;
}

cplx LatticeData::wp_half_shift(cplx z, int i) const {
    if (i < 1 || i > 3) throw DomainError("half-shift index must be in 1..3");
    {
        const cplx zs = z + half_period(i);
        long m = 0, n = 0;
        const cplx w = reduce(zs, m, n);
        check_pole(zs, w);
    }
    const int j = i % 3 + 1, k = (i + 1) % 3 + 1;
    return e(i) + e_diff(i, j) * e_diff(i, k) / wp_minus_e(z, i);
}

cplx LatticeData::e_diff(int i, int j) const {
    const int a = eidx_[static_cast<std::size_t>(i - 1)], b = eidx_[static_cast<std::size_t>(j - 1)];
    if (a == b) return 0.0;
    // e1 - e2 = pi^2 th3^4, e1 - e3 = pi^2 th4^4, e3 - e2 = pi^2 th2^4 in the reduced frame
    const int lo = std::min(a, b), hi = std::max(a, b);
    const cplx t = lo == 0 ? (hi == 1 ? th3_ : th4_) : th2_;
    const cplx d = pi * pi * t * t * t * t / (lam_ * lam_);
    const bool forward = (lo == 0) ? a == 0 : a == 2;
    return forward ? d : -d;
}

cplx LatticeData::wp_minus_e(cplx z, int i) const {
    long m = 0, n = 0;
    const cplx w = reduce(z, m, n);
    check_pole(z, w);
    // wp - e_k as a squared theta quotient, so it keeps full relative accuracy near omega_k/2
    const ThetaAt th = theta12(pi * w, tr_, tol_);
    const auto [t3, t4] = theta34(pi * w, tr_, tol_);
    cplx d;
    switch (eidx_[static_cast<std::size_t>(i - 1)]) {
    case 0: d = th3_ * th4_ * th.t2 / th.t1; break;
    case 1: d = th2_ * th3_ * t4 / th.t1; break;
    default: d = th2_ * th4_ * t3 / th.t1; break;
    }
    const cplx il = 1.0 / lam_;
    return pi * pi * d * d * il * il;
}

} // namespace tvgap
