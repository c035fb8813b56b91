#include "tvgap/heun.hpp"

#include <algorithm>
#include <cmath>

namespace tvgap {

TildeAlpha::TildeAlpha(std::array<int, 4> twice) : twice_(twice) {
    const int s = twice[0] + twice[1] + twice[2] + twice[3];
    if (s > 0 || s % 2 != 0) throw DomainError("-sum of tilde-alpha must be a non-negative integer");
    n_ = -s / 2;
}

TildeAlpha TildeAlpha::from_tuple(const MultiplicityTuple& n, std::array<bool, 4> upper) {
    std::array<int, 4> tw{};
    for (int i = 0; i < 4; ++i) tw[static_cast<std::size_t>(i)] = upper[static_cast<std::size_t>(i)] ? n[i] + 1 : -n[i];
    return TildeAlpha(tw);
}

void validate(const HeunParams& h) {
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (std::abs(h.t[static_cast<std::size_t>(i)] - h.t[static_cast<std::size_t>(j)]) == 0.0)
                throw DomainError("Heun singular points must be distinct");
    const double g3 = h.gamma[2];
    if (g3 <= 0.0 && std::abs(g3 - std::round(g3)) < 1e-12)
        throw DomainError("gamma_3 must not be a non-positive integer");
    if (h.N < 0 || std::abs(h.alpha + h.N) > 1e-12) throw DomainError("alpha must equal -N with N >= 0");
    if (std::abs(h.alpha + h.beta + 1.0 - (h.gamma[0] + h.gamma[1] + h.gamma[2])) > 1e-12)
        throw DomainError("alpha + beta + 1 must equal gamma_1 + gamma_2 + gamma_3");
}

HeunParams heun_from_tuple(const LatticeData& L, const TildeAlpha& ta) {
    HeunParams h;
    const double a0 = ta[0], a1 = ta[1], a2 = ta[2], a3 = ta[3];
    h.alpha = a0 + a1 + a2 + a3;
    h.N = ta.N();
    h.beta = -a0 + 0.5 + a1 + a2 + a3;
    h.gamma = {2.0 * a1 + 0.5, 2.0 * a2 + 0.5, 2.0 * a3 + 0.5};
    h.t = {L.e(1), L.e(2), L.e(3)};
    h.q_intercept = L.e(1) * ((a2 + a3) * (a2 + a3)) + L.e(2) * ((a1 + a3) * (a1 + a3)) +
                    L.e(3) * ((a1 + a2) * (a1 + a2)) - L.e(3) * (h.alpha * h.beta);
    validate(h);
    return h;
}

std::vector<ComplexPoly> coeff_sequence(const HeunParams& h, int m_max) {
    if (m_max < 1) throw DomainError("coeff_sequence needs m_max >= 1");
    const cplx a = h.t[0] - h.t[2];
    const cplx b = h.t[1] - h.t[2];
    const cplx ab = a * b;
    const double g1 = h.gamma[0], g2 = h.gamma[1], g3 = h.gamma[2];
    if (g3 == 0.0) throw DomainError("recursion denominator vanishes at m = 0");

    std::vector<ComplexPoly> c;
    c.reserve(static_cast<std::size_t>(m_max) + 1);
    c.push_back(ComplexPoly::constant(1.0));
    c.push_back(ComplexPoly::linear(1.0 / (ab * g3), 0.0));
    for (int m = 1; m < m_max; ++m) {
        const double den_m = m + g3;
        if (std::abs(den_m) < 1e-14) throw DomainError("recursion denominator vanishes (m + gamma_3 = 0)");
        const cplx lin = static_cast<double>(m) * ((m - 1 + g3) * (a + b) + b * g1 + a * g2);
        const auto& cm = c[static_cast<std::size_t>(m)];
        const auto& cm1 = c[static_cast<std::size_t>(m - 1)];
        ComplexPoly next = ComplexPoly::linear(1.0, lin) * cm - cm1 * ((m - 1 + h.alpha) * (m - 1 + h.beta));
        next *= 1.0 / (ab * static_cast<double>(m + 1) * den_m);
        c.push_back(std::move(next));
    }
    return c;
}

ComplexPoly p_polynomial(const HeunParams& h) {
    const auto c = coeff_sequence(h, h.N + 1);
    return c.back().compose_affine(0.25, h.q_intercept).monic();
}

ComplexPoly p_polynomial(const LatticeData& L, const TildeAlpha& ta) { return p_polynomial(heun_from_tuple(L, ta)); }

ComplexPoly polynomial_solution(const HeunParams& h, cplx q0) {
    const auto c = coeff_sequence(h, std::max(h.N, 1));
    ComplexPoly f;
    ComplexPoly u_pow = ComplexPoly::constant(1.0);
    const ComplexPoly u = ComplexPoly::linear(1.0, -h.t[2]);
    for (int m = 0; m <= h.N; ++m) {
        f += u_pow * c[static_cast<std::size_t>(m)](q0);
        u_pow = u_pow * u;
    }
    return f;
}

namespace {

std::vector<double> real_roots(const ComplexPoly& p, bool& real_ok, bool& distinct_ok) {
    const auto rr = find_roots(p);
    double scale = 1.0;
    for (cplx r : rr.roots) scale = std::max(scale, 1.0 + std::abs(r));
    std::vector<double> out;
    for (cplx r : rr.roots) {
        if (std::abs(r.imag()) > 1e-6 * scale) real_ok = false;
        out.push_back(r.real());
    }
    std::sort(out.begin(), out.end());
    const double gap = std::max(1e-8, 1e-6 * scale);
    for (std::size_t i = 1; i < out.size(); ++i)
        if (out[i] - out[i - 1] <= gap) distinct_ok = false;
    return out;
}

int sgn(double v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

} // namespace

InterlacingReport interlacing_check(const HeunParams& h, int N) {
    for (cplx t : h.t)
        if (std::abs(t.imag()) > 1e-10 * (1.0 + std::abs(t))) throw DomainError("interlacing check needs real t_i");
    const double a = h.t[0].real() - h.t[2].real();
    const double b = h.t[1].real() - h.t[2].real();
    if (!(a * b < 0.0)) throw DomainError("interlacing check needs (t1 - t3)(t2 - t3) < 0");

    InterlacingReport rep;
    const double g3 = h.gamma[2];
    if (g3 > 0.0 && h.beta > 0.0) {
        rep.regime = SturmRegime::Sturm;
        rep.n3 = 0;
    } else if (g3 < 0.0 && std::abs(g3 - h.beta) < 1e-12 &&
               std::abs((0.5 - g3) - std::round(0.5 - g3)) < 1e-12) {
        rep.regime = SturmRegime::Sturm1;
        rep.n3 = static_cast<int>(std::lround(0.5 - g3));
    } else {
        throw DomainError("parameters lie outside both real-root regimes");
    }

    auto c = coeff_sequence(h, N + 2);
    for (auto& p : c) {
        const double m = p.max_abs_coeff();
        if (p.max_abs_imag() > 1e-10 * m) throw DomainError("coefficient polynomials are not real to tolerance");
        p = p.real_part_if_negligible(1e-10);
    }

    rep.all_real = true;
    bool distinct = true;
    for (int m = 1; m <= N + 1; ++m) {
        const auto& p = c[static_cast<std::size_t>(m)];
        rep.roots.push_back(real_roots(p, rep.all_real, distinct));
        rep.leading_signs.push_back(sgn(p.leading().real()));
        rep.expected_signs.push_back(m <= rep.n3 ? 1 : ((m - rep.n3) % 2 == 0 ? 1 : -1));
    }
    rep.all_real = rep.all_real && distinct;

    rep.interlaced = rep.all_real;
    for (std::size_t k = 1; k < rep.roots.size() && rep.interlaced; ++k) {
        const auto& s = rep.roots[k];       // roots of c_{k+1}
        const auto& sp = rep.roots[k - 1];  // roots of c_k
        for (std::size_t i = 0; i < sp.size(); ++i)
            if (!(s[i] < sp[i] && sp[i] < s[i + 1])) rep.interlaced = false;
    }

    // Sturm-regime signs follow (-1)^m; the expected pattern with n3 = 0 covers it.
    rep.leading_signs_ok = rep.leading_signs == rep.expected_signs;
    for (std::size_t k = 0; k + 1 < rep.leading_signs.size(); ++k)
        if (rep.leading_signs[k + 1] == -rep.leading_signs[k]) {
            rep.first_flip = static_cast<int>(k) + 1;
            break;
        }

    rep.p2_ok = rep.all_real;
    for (int m = 1; m <= N && rep.p2_ok; ++m) {
        for (double s : rep.roots[static_cast<std::size_t>(m - 1)]) {
            const double prev = c[static_cast<std::size_t>(m - 1)](s).real();
            if (prev == 0.0) continue;
            const double next = c[static_cast<std::size_t>(m + 1)](s).real();
            const int want = (m == rep.n3) ? 1 : -1;
            if (sgn(prev * next) != want) rep.p2_ok = false;
        }
    }
    return rep;
}

} // namespace tvgap
