#include "tvgap/spectral.hpp"

#include "laurent.hpp"
#include "tvgap/heun.hpp"
#include "tvgap/parallel.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

namespace tvgap {

std::string_view to_string(RootClass c) {
    switch (c) {
    case RootClass::RealDistinct: return "real_distinct";
    case RootClass::HasComplex: return "has_complex";
    case RootClass::HasMultiple: return "has_multiple";
    }
    return "?";
}

RootReport classify_roots(const ComplexPoly& Q, std::vector<cplx> roots, double tol_im, double tol_gap,
                          double residual_tol) {
    std::sort(roots.begin(), roots.end(),
              [](cplx a, cplx b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); });
    RootReport rep;
    rep.roots = std::move(roots);
    for (cplx r : rep.roots) rep.residuals.push_back(std::abs(Q(r)));
    for (cplx r : rep.roots) rep.scale = std::max(rep.scale, 1.0 + std::abs(r));
    const double lead = std::abs(Q.leading());
    for (cplx r : rep.roots)
        rep.residual_bounds.push_back(residual_tol * lead * std::pow(1.0 + std::abs(r), Q.degree()));

    rep.classification = RootClass::RealDistinct;
    for (cplx r : rep.roots)
        if (std::abs(r.imag()) > tol_im * rep.scale) rep.classification = RootClass::HasComplex;
    if (rep.classification == RootClass::RealDistinct) {
        for (std::size_t i = 0; i < rep.roots.size(); ++i)
            for (std::size_t j = i + 1; j < rep.roots.size(); ++j)
                if (std::abs(rep.roots[i] - rep.roots[j]) <= tol_gap * rep.scale)
                    rep.classification = RootClass::HasMultiple;
    }
    return rep;
}

RootReport roots_and_classify(const ComplexPoly& Q, double tol_im, double tol_gap, double residual_tol) {
    if (Q.degree() < 1) throw DomainError("roots_and_classify needs degree >= 1");
    return classify_roots(Q, find_roots(Q).roots, tol_im, tol_gap, residual_tol);
}

namespace {

using detail::Laurent;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

constexpr int kXor[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};

struct Column {
    int site; ///< -1 for the constant c0
    int power;
};

struct Pencil {
    Mat A0, A1;               ///< equilibrated, A1 already multiplied by R
    Eigen::VectorXd colscale; ///< x_true = colscale .* y
    std::vector<Column> cols;
};

// Principal-part conditions for L(Phi) = Phi''' - 4 I Phi' - 2 I' Phi at
// every occupied half period; E enters only through -4 E Phi'.
Pencil build_pencil(const LatticeData& L, const MultiplicityTuple& n, double R) {
    const int nmax = n.max();
    const int H = 4 * nmax + 12;

    std::array<Laurent, 4> S;
    S[0] = detail::wp_laurent(L.g2(), L.g3(), H);
    for (int j = 1; j <= 3; ++j) {
        const cplx ej = L.e(j), ek = L.e(j % 3 + 1), el = L.e((j + 1) % 3 + 1);
        const Laurent inv = detail::inverse(S[0] - Laurent::constant(ej, H));
        S[static_cast<std::size_t>(j)] = Laurent::constant(ej, H + 4) + ((ej - ek) * (ej - el)) * inv;
    }

    // Rows are weighted as if expanded in s = t / rho, which makes the series
    // coefficients O(1); no per-row equilibration, so rows that vanish
    // structurally stay at roundoff level.
    double emax = 0.0;
    for (int k = 1; k <= 3; ++k) emax = std::max(emax, std::abs(L.e(k)));
    const double rho = 1.0 / std::sqrt(1.0 + emax);

    Pencil P;
    P.cols.push_back({-1, 0});
    for (int m = 0; m < 4; ++m)
        for (int p = 1; p <= n[m]; ++p) P.cols.push_back({m, p});
    const auto U = static_cast<Eigen::Index>(P.cols.size());

    // Rows are the coefficients of t^-1, t^-3, .., t^-(2n_k+1); the t^-(2n_k+3)
    // coefficient vanishes identically by the indicial equation.
    int rows = 0;
    for (int k = 0; k < 4; ++k)
        if (n[k] >= 1) rows += n[k] + 1;
    P.A0 = Mat::Zero(rows, U);
    P.A1 = Mat::Zero(rows, U);

    int row0 = 0;
    for (int k = 0; k < 4; ++k) {
        if (n[k] < 1) continue;
        Laurent I0 = Laurent::constant(0.0, H);
        for (int m = 0; m < 4; ++m)
            if (n[m] > 0)
                I0 = I0 + static_cast<double>(n[m] * (n[m] + 1)) * S[static_cast<std::size_t>(kXor[m][k])];
        const Laurent I0p = I0.derivative();
        for (Eigen::Index c = 0; c < U; ++c) {
            const Column col = P.cols[static_cast<std::size_t>(c)];
            Laurent f = Laurent::constant(1.0, H);
            if (col.site >= 0) {
                const Laurent& base = S[static_cast<std::size_t>(kXor[col.site][k])];
                f = base;
                for (int p = 1; p < col.power; ++p) f = f * base;
            }
            const Laurent f1 = f.derivative();
            const Laurent f3 = f1.derivative().derivative();
            const Laurent l0 = f3 - 4.0 * (I0 * f1) - 2.0 * (I0p * f);
            for (int r = 0; r <= n[k]; ++r) {
                const int pw = -(2 * r + 1);
                const double w = std::pow(rho, pw);
                P.A0(row0 + r, c) = w * l0[pw];
                P.A1(row0 + r, c) = -4.0 * R * w * f1[pw];
            }
        }
        row0 += n[k] + 1;
    }
    P.colscale = Eigen::VectorXd::Ones(U);
    for (Eigen::Index c = 0; c < U; ++c) {
        const double s = std::max(P.A0.col(c).cwiseAbs().maxCoeff(), P.A1.col(c).cwiseAbs().maxCoeff());
        if (s > 0) {
            P.A0.col(c) /= s;
            P.A1.col(c) /= s;
            P.colscale(c) = 1.0 / s;
        }
    }
    const double big = std::max(P.A0.cwiseAbs().maxCoeff(), P.A1.cwiseAbs().maxCoeff());
    P.A0 /= big;
    P.A1 /= big;
    return P;
}

Mat block_pencil(const Pencil& P, int D) {
    const Eigen::Index r = P.A0.rows(), u = P.A0.cols();
    Mat B = Mat::Zero(r * (D + 2), u * (D + 1));
    for (int d = 0; d <= D; ++d) {
        B.block(r * d, u * d, r, u) = P.A0;
        B.block(r * (d + 1), u * d, r, u) = P.A1;
    }
    return B;
}

struct Null {
    Vec v;
    double ratio;     // sigma_min / sigma_max
    double gap_ratio; // sigma_{min+1} / sigma_max
};

Null smallest_singular(const Mat& M) {
    Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const Eigen::Index k = s.size();
    Null out;
    out.v = svd.matrixV().col(M.cols() - 1);
    const double smax = s(0);
    out.ratio = M.cols() > k ? 0.0 : s(k - 1) / smax;
    out.gap_ratio = (M.cols() > k || k < 2) ? 0.0 : s(k - 2) / smax;
    return out;
}

struct PhiPoly {
    // Coefficient vectors x_d, d = 0..g, in true (unscaled) units, variable eps = E/R.
    std::vector<Vec> x;
    std::vector<Column> cols;
};

// Q(eps) at z from the polynomial null vector.
ComplexPoly q_at(const LatticeData& L, const MultiplicityTuple& n, const PhiPoly& phi, cplx z, double R) {
    std::array<cplx, 4> P{}, Pp{};
    for (int m = 0; m < 4; ++m) {
        if (n[m] == 0) continue;
        const auto [p, dp] = L.wp_and_prime(z + L.half_period(m));
        P[static_cast<std::size_t>(m)] = p;
        Pp[static_cast<std::size_t>(m)] = dp;
    }
    cplx I0{};
    for (int m = 0; m < 4; ++m) I0 += static_cast<double>(n[m] * (n[m] + 1)) * P[static_cast<std::size_t>(m)];

    const std::size_t D = phi.x.size();
    std::vector<cplx> f(D), f1(D), f2(D);
    for (std::size_t d = 0; d < D; ++d) {
        for (std::size_t c = 0; c < phi.cols.size(); ++c) {
            const cplx xc = phi.x[d](static_cast<Eigen::Index>(c));
            const Column col = phi.cols[c];
            if (col.site < 0) {
                f[d] += xc;
                continue;
            }
            const cplx p = P[static_cast<std::size_t>(col.site)], dp = Pp[static_cast<std::size_t>(col.site)];
            const cplx ddp = 6.0 * p * p - L.g2() / 2.0;
            const int k = col.power;
            const cplx pk1 = std::pow(p, k - 1);
            f[d] += xc * pk1 * p;
            f1[d] += xc * static_cast<double>(k) * pk1 * dp;
            const cplx pk2 = k >= 2 ? std::pow(p, k - 2) : cplx{};
            f2[d] += xc * (static_cast<double>(k * (k - 1)) * pk2 * dp * dp + static_cast<double>(k) * pk1 * ddp);
        }
    }
    const ComplexPoly F(f), F1(f1), F2(f2);
    return ComplexPoly::linear(R, I0) * F * F + F1 * F1 * 0.25 - F * F2 * 0.5;
}

double chebyshev(int s, int count) {
    return std::cos(std::numbers::pi * (2.0 * s + 1.0) / (2.0 * count));
}

} // namespace

ComplexPoly q_via_phi_ansatz(const LatticeData& L, const MultiplicityTuple& n, PhiDiagnostics* diag,
                             const SpectralOptions& opt) {
    const int g = n.genus();
    double emax = 0.0;
    for (int k = 1; k <= 3; ++k) emax = std::max(emax, std::abs(L.e(k)));
    int weight = 0;
    for (int k = 0; k < 4; ++k) weight += n[k] * (n[k] + 1);
    const double R = 4.0 * (1.0 + weight * emax);

    const Pencil P = build_pencil(L, n, R);
    const auto U = P.A0.cols();
    PhiDiagnostics dg;
    dg.sample_radius = R;
    auto fail = [&](const char* msg) {
        if (diag) *diag = dg;
        throw AssertionFailure(msg);
    };

    const Null nv = smallest_singular(block_pencil(P, g));
    dg.null_ratio = nv.ratio;
    dg.gap_ratio = nv.gap_ratio;
    if (nv.ratio > opt.rank_tol || nv.gap_ratio <= opt.rank_tol)
        fail("polynomial null vector of the Phi pencil is not one-dimensional at degree g");
    if (g >= 1) {
        dg.lower_degree_ratio = smallest_singular(block_pencil(P, g - 1)).ratio;
        if (dg.lower_degree_ratio <= opt.rank_tol)
            fail("Phi pencil has a null vector of degree below g");
    } else {
        dg.lower_degree_ratio = 1.0;
    }

    PhiPoly phi;
    phi.cols = P.cols;
    for (int d = 0; d <= g; ++d) {
        Vec y = nv.v.segment(static_cast<Eigen::Index>(d) * U, U);
        phi.x.push_back(y.cwiseProduct(P.colscale.cast<cplx>()));
    }
    const cplx lead = phi.x.back()(0);
    if (std::abs(lead) == 0.0) fail("c0 has degree below g");
    for (auto& x : phi.x) x /= lead;
    {
        // Leading E^g coefficients of the b_j^(k) in the equilibrated units.
        double bl = 0.0;
        const Vec& y = phi.x.back();
        for (Eigen::Index c = 1; c < U; ++c) bl = std::max(bl, std::abs(y(c) / P.colscale(c)));
        dg.b_leading = bl * P.colscale(0);
    }

    const cplx tau = L.tau();
    const ComplexPoly q0 = q_at(L, n, phi, 0.27 + 0.31 * tau, R);
    const ComplexPoly q1 = q_at(L, n, phi, 0.38 + 0.14 * tau, R);
    if (q0.degree() != 2 * g + 1) fail("Q has the wrong degree");
    dg.z_discrepancy = relative_coeff_discrepancy(q0.monic(), q1.monic(), 1.0);
    if (dg.z_discrepancy > opt.z_check_tol) fail("Q depends on the evaluation point");

    // Per-sample nullspaces at Chebyshev E in [-R, R].
    const int ns = 2 * g + 2;
    dg.samples = ns;
    double worst = 0.0;
    for (int s = 0; s < ns; ++s) {
        const double eps = chebyshev(s, ns);
        const Null sn = smallest_singular(P.A0 + eps * P.A1);
        dg.null_ratio = std::max(dg.null_ratio, sn.ratio);
        dg.gap_ratio = std::min(dg.gap_ratio, sn.gap_ratio);
        if (sn.ratio > opt.rank_tol || sn.gap_ratio <= opt.rank_tol)
            fail("nullspace at a sample E is not one-dimensional");
        Vec xs = Vec::Zero(U);
        cplx e = 1.0;
        for (int d = 0; d <= g; ++d, e *= eps) xs += e * (phi.x[static_cast<std::size_t>(d)].cwiseQuotient(P.colscale.cast<cplx>()));
        const cplx alpha = sn.v.dot(xs) / sn.v.squaredNorm();
        worst = std::max(worst, (alpha * sn.v - xs).norm() / xs.norm());
    }
    dg.sample_discrepancy = worst;

    if (diag) *diag = dg;
    return q0.compose_affine(1.0 / R, 0.0).monic();
}

std::vector<cplx> refine_roots_direct(const LatticeData& L, const MultiplicityTuple& n, std::vector<cplx> roots,
                                      double max_shift) {
    double emax = 0.0;
    for (int k = 1; k <= 3; ++k) emax = std::max(emax, std::abs(L.e(k)));
    int weight = 0;
    for (int k = 0; k < 4; ++k) weight += n[k] * (n[k] + 1);
    const double R = 4.0 * (1.0 + weight * emax);
    const Pencil P = build_pencil(L, n, R);

    const cplx z0 = 0.27 + 0.31 * L.tau();
    std::array<cplx, 4> Pz{}, Ppz{};
    cplx I0{};
    for (int m = 0; m < 4; ++m) {
        if (n[m] == 0) continue;
        const auto [p, dp] = L.wp_and_prime(z0 + L.half_period(m));
        Pz[static_cast<std::size_t>(m)] = p;
        Ppz[static_cast<std::size_t>(m)] = dp;
        I0 += static_cast<double>(n[m] * (n[m] + 1)) * p;
    }
    // Q up to a non-vanishing factor: the quadratic form in the null vector at
    // E, divided by the bilinear norm so the arbitrary SVD phase cancels.
    auto q = [&](cplx E) {
        const Vec y = smallest_singular(P.A0 + (E / R) * P.A1).v;
        cplx f{}, f1{}, f2{};
        for (std::size_t c = 0; c < P.cols.size(); ++c) {
            const auto ci = static_cast<Eigen::Index>(c);
            const cplx xc = y(ci) * P.colscale(ci);
            const Column col = P.cols[c];
            if (col.site < 0) {
                f += xc;
                continue;
            }
            const cplx p = Pz[static_cast<std::size_t>(col.site)], dp = Ppz[static_cast<std::size_t>(col.site)];
            const cplx ddp = 6.0 * p * p - L.g2() / 2.0;
            const int k = col.power;
            const cplx pk1 = std::pow(p, k - 1);
            f += xc * pk1 * p;
            f1 += xc * static_cast<double>(k) * pk1 * dp;
            const cplx pk2 = k >= 2 ? std::pow(p, k - 2) : cplx{};
            f2 += xc * (static_cast<double>(k * (k - 1)) * pk2 * dp * dp + static_cast<double>(k) * pk1 * ddp);
        }
        return ((E + I0) * f * f + 0.25 * f1 * f1 - 0.5 * f * f2) / y.transpose().dot(y);
    };

    double scale = 1.0;
    for (cplx r : roots) scale = std::max(scale, 1.0 + std::abs(r));
    std::vector<cplx> out = roots;
    for (std::size_t j = 0; j < roots.size(); ++j) {
        cplx a = roots[j], b = roots[j] + 1e-9 * scale;
        cplx qa = q(a), qb = q(b);
        for (int it = 0; it < 40; ++it) {
            if (qb == qa) break;
            const cplx c = b - qb * (b - a) / (qb - qa);
            a = b, qa = qb;
            b = c, qb = q(b);
            if (std::abs(b - a) <= 4.0 * std::numeric_limits<double>::epsilon() * scale) break;
        }
        if (std::isfinite(std::abs(b)) && std::abs(b - roots[j]) <= max_shift * scale) out[j] = b;
    }
    for (std::size_t i = 0; i < out.size(); ++i)
        for (std::size_t j = i + 1; j < out.size(); ++j)
            if (std::abs(out[i] - out[j]) < 0.25 * std::abs(roots[i] - roots[j])) return roots; // collapsed onto one root
    return out;
}

std::array<int, 4> l_transform(const std::array<int, 4>& n) {
    const int s = n[0] + n[1] + n[2] + n[3];
    if (s % 2 == 0) throw DomainError("l-transform needs an odd sum");
    std::array<int, 4> l = {(s + 1) / 2, (n[0] + n[1] - n[2] - n[3] - 1) / 2, (n[0] - n[1] + n[2] - n[3] - 1) / 2,
                            (n[0] - n[1] - n[2] + n[3] - 1) / 2};
    for (int& v : l)
        if (v < 0) v = -v - 1;
    return l;
}

namespace {

std::array<ComplexPoly, 4> even_factors(const LatticeData& L, const std::array<int, 4>& n) {
    const MultiplicityTuple t(n);
    auto P = [&](bool u0, bool u1, bool u2, bool u3) { return p_polynomial(L, TildeAlpha::from_tuple(t, {u0, u1, u2, u3})); };
    const ComplexPoly one = ComplexPoly::constant(1.0);
    std::array<ComplexPoly, 4> f;
    f[0] = P(false, false, false, false);
    const int d1 = (n[0] + n[1]) - (n[2] + n[3]);
    f[1] = d1 >= 2 ? P(false, false, true, true) : d1 == 0 ? one : P(true, true, false, false);
    const int d2 = (n[0] + n[2]) - (n[1] + n[3]);
    f[2] = d2 >= 2 ? P(false, true, false, true) : d2 == 0 ? one : P(true, false, true, false);
    const int d3 = (n[0] + n[3]) - (n[1] + n[2]);
    f[3] = d3 >= 2 ? P(false, true, true, false) : d3 == 0 ? one : P(true, false, false, true);
    return f;
}

} // namespace

FactorizationResult q_via_factorization(const LatticeData& L, const MultiplicityTuple& n) {
    FactorizationResult out;
    std::array<int, 4> t = n.n();
    if (n.parity() == 1) {
        const auto l = l_transform(t);
        if ((l[0] + l[1] + l[2] + l[3]) % 2 != 0) {
            out.note = "odd sum: l-transform gives (" + std::to_string(l[0]) + "," + std::to_string(l[1]) + "," +
                       std::to_string(l[2]) + "," + std::to_string(l[3]) + "), still odd; not constructible";
            return out;
        }
        t = l;
        out.note = "odd sum: l-transform to (" + std::to_string(t[0]) + "," + std::to_string(t[1]) + "," +
                   std::to_string(t[2]) + "," + std::to_string(t[3]) + ")";
    }
    out.even_tuple = t;
    out.factors = even_factors(L, t);
    ComplexPoly Q = ComplexPoly::constant(1.0);
    for (const auto& f : out.factors) Q = Q * f;
    if (Q.degree() != n.degree()) throw AssertionFailure("factor degrees do not add up to 2g+1");
    out.Q = Q;
    out.constructible = true;
    return out;
}

double factor_root_separation(const FactorizationResult& f) {
    std::array<std::vector<cplx>, 4> roots;
    for (std::size_t i = 0; i < 4; ++i)
        if (f.factors[i].degree() >= 1) roots[i] = find_roots(f.factors[i]).roots;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j)
            for (cplx a : roots[i])
                for (cplx b : roots[j]) best = std::min(best, std::abs(a - b));
    return best;
}

SpectralReport spectral_report(const LatticeData& L, const MultiplicityTuple& n, const SpectralOptions& opt) {
    SpectralReport rep{n, L.tau(), {}, {}, {}, false, {}, std::nullopt, std::nullopt, "phi", {}};
    rep.Q = q_via_phi_ansatz(L, n, &rep.phi, opt);
    const FactorizationResult f = q_via_factorization(L, n);
    rep.factorization_constructible = f.constructible;
    rep.factorization_note = f.note;
    if (!f.constructible) {
        rep.roots = classify_roots(rep.Q, refine_roots_direct(L, n, find_roots(rep.Q).roots), opt.tol_im,
                                   opt.tol_gap, opt.residual_tol);
        rep.root_source = "phi+refined";
        return rep;
    }
    // near-double roots of Q sit in different factors, where they are well conditioned
    std::vector<cplx> roots;
    for (const ComplexPoly& P : f.factors)
        if (P.degree() >= 1)
            for (cplx r : find_roots(P).roots) roots.push_back(r);
    rep.roots = classify_roots(rep.Q, std::move(roots), opt.tol_im, opt.tol_gap, opt.residual_tol);
    rep.root_source = "factors";
    rep.route_discrepancy = relative_coeff_discrepancy(rep.Q, f.Q, rep.roots.scale);
    rep.factor_separation = factor_root_separation(f);
    if (*rep.route_discrepancy > opt.route_tol) throw AssertionFailure("Phi route and factorization route disagree");
    return rep;
}

CovarianceReport modular_covariance_check(const LatticeData& L, const MultiplicityTuple& n, const SpectralOptions& opt) {
    CovarianceReport rep;
    const cplx tau = L.tau();
    const LatticeData Ld(-1.0 / tau, L.truncation_tol(), L.pole_guard());
    rep.roots = find_roots(q_via_phi_ansatz(L, n, nullptr, opt)).roots;
    rep.dual_roots = find_roots(q_via_phi_ansatz(Ld, n.swapped12(), nullptr, opt)).roots;
    for (cplx e : rep.roots) {
        rep.mapped.push_back(tau * tau * e);
        rep.scale = std::max(rep.scale, 1.0 + std::abs(rep.mapped.back()));
    }
    rep.distance = matching_distance(rep.mapped, rep.dual_roots);
    return rep;
}

ScanResult tau_scan(const MultiplicityTuple& n, double b_lo, double b_hi, int steps, const SpectralOptions& opt,
                    unsigned threads) {
    if (!(b_lo > 0.0) || !(b_hi >= b_lo) || steps < 1) throw DomainError("b range must lie in (0, inf) with steps >= 1");
    ScanResult res{n, std::vector<ScanPoint>(static_cast<std::size_t>(steps)), true, {}, 0};
    parallel_for(static_cast<std::size_t>(steps), threads, [&](std::size_t i) {
        ScanPoint& pt = res.points[i];
        pt.b = steps == 1 ? b_lo : b_lo + (b_hi - b_lo) * static_cast<double>(i) / (steps - 1);
        try {
            const LatticeData L(cplx(0.0, pt.b));
            pt.report = spectral_report(L, n, opt);
        } catch (const std::exception& e) {
            pt.error = e.what();
        }
    });
    for (const auto& pt : res.points) {
        if (!pt.report) {
            ++res.errors;
            res.all_real_distinct = false;
        } else if (pt.report->roots.classification != RootClass::RealDistinct) {
            res.all_real_distinct = false;
            res.not_real_distinct.push_back(pt.b);
        }
    }
    return res;
}

} // namespace tvgap
