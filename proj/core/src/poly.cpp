#include "tvgap/poly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace tvgap {

ComplexPoly::ComplexPoly(std::vector<cplx> coeffs) : c_(std::move(coeffs)) { normalize(); }

void ComplexPoly::normalize() {
    while (!c_.empty() && c_.back() == cplx{}) c_.pop_back();
}

ComplexPoly ComplexPoly::from_roots(std::span<const cplx> roots) {
    ComplexPoly p = constant(1.0);
    for (cplx r : roots) p = p * linear(1.0, -r);
    return p;
}

cplx ComplexPoly::operator()(cplx x) const {
    cplx acc{};
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

std::pair<cplx, cplx> ComplexPoly::eval_with_derivative(cplx x) const {
    cplx p{}, dp{};
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
        dp = dp * x + p;
        p = p * x + *it;
    }
    return {p, dp};
}

double ComplexPoly::abs_eval(double x) const {
    double acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + std::abs(*it);
    return acc;
}

ComplexPoly ComplexPoly::derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<cplx> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<double>(i);
    return ComplexPoly(std::move(d));
}

ComplexPoly ComplexPoly::monic() const {
    if (c_.empty()) throw DomainError("cannot normalize the zero polynomial");
    ComplexPoly r = *this;
    const cplx lead = c_.back();
    for (auto& v : r.c_) v /= lead;
    r.c_.back() = 1.0;
    return r;
}

ComplexPoly ComplexPoly::compose_affine(cplx a, cplx b) const {
    // Horner in polynomial arithmetic: p(ax+b) = (...(c_n (ax+b) + c_{n-1})(ax+b) ...)
    ComplexPoly acc;
    const ComplexPoly lin = linear(a, b);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * lin + constant(*it);
    return acc;
}

ComplexPoly ComplexPoly::trimmed(double tol) const {
    ComplexPoly r = *this;
    const double m = max_abs_coeff();
    while (!r.c_.empty() && std::abs(r.c_.back()) <= tol * m) r.c_.pop_back();
    return r;
}

ComplexPoly ComplexPoly::real_part_if_negligible(double tol) const {
    ComplexPoly r = *this;
    const double m = max_abs_coeff();
    for (auto& v : r.c_)
        if (std::abs(v.imag()) <= tol * m) v.imag(0.0);
    return r;
}

double ComplexPoly::max_abs_coeff() const noexcept {
    double m = 0.0;
    for (cplx v : c_) m = std::max(m, std::abs(v));
    return m;
}

double ComplexPoly::max_abs_imag() const noexcept {
    double m = 0.0;
    for (cplx v : c_) m = std::max(m, std::abs(v.imag()));
    return m;
}

ComplexPoly& ComplexPoly::operator+=(const ComplexPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    normalize();
    return *this;
}

ComplexPoly& ComplexPoly::operator-=(const ComplexPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    normalize();
    return *this;
}

ComplexPoly& ComplexPoly::operator*=(cplx s) {
    for (auto& v : c_) v *= s;
    normalize();
    return *this;
}

ComplexPoly operator*(const ComplexPoly& a, const ComplexPoly& b) {
    if (a.c_.empty() || b.c_.empty()) return {};
    std::vector<cplx> r(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
        for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    return ComplexPoly(std::move(r));
}

double relative_coeff_discrepancy(const ComplexPoly& a, const ComplexPoly& b, double scale) {
    const int n = std::max(a.degree(), b.degree());
    double num = 0.0, den = 0.0, s = 1.0;
    for (int i = 0; i <= n; ++i, s *= scale) {
        num = std::max(num, std::abs(a[i] - b[i]) * s);
        den = std::max(den, std::abs(a[i]) * s);
    }
    return den > 0.0 ? num / den : num;
}

namespace {

bool root_less(cplx a, cplx b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

} // namespace

RootResult find_roots(const ComplexPoly& p_in, const RootOptions& opt) {
    if (p_in.degree() < 1) throw DomainError("find_roots needs degree >= 1");
    const ComplexPoly p = p_in.monic();
    const int n = p.degree();
    RootResult out;

    if (n == 1) {
        out.roots = {-p[0]};
        out.residuals = {std::abs(p_in(out.roots[0]))};
        out.converged = true;
        return out;
    }

    // Start on a circle around the centroid; radius from the Fujiwara bound of
    // the recentred polynomial.
    const cplx center = -p[n - 1] / static_cast<double>(n);
    const ComplexPoly shifted = p.compose_affine(1.0, center);
    double radius = 0.0;
    for (int k = 1; k <= n; ++k) {
        double v = std::pow(std::abs(shifted[n - k]), 1.0 / k);
        if (k == n) v = std::pow(std::abs(shifted[0]) / 2.0, 1.0 / k);
        radius = std::max(radius, 2.0 * v);
    }
    if (radius == 0.0) radius = 1.0;

    std::vector<cplx> z(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const double ang = 2.0 * std::numbers::pi * k / n + 0.4;
        z[static_cast<std::size_t>(k)] = center + radius * std::polar(1.0, ang);
    }

    constexpr double eps = std::numeric_limits<double>::epsilon();
    std::vector<bool> done(static_cast<std::size_t>(n), false);
    int it = 0;
    for (; it < opt.max_iterations; ++it) {
        bool all_done = true;
        for (std::size_t i = 0; i < z.size(); ++i) {
            if (done[i]) continue;
            auto [v, dv] = p.eval_with_derivative(z[i]);
            const double bound = 4.0 * n * eps * p.abs_eval(std::abs(z[i]));
            if (std::abs(v) <= bound) {
                done[i] = true;
                continue;
            }
            const cplx ratio = v / dv;
            cplx sum{};
            for (std::size_t j = 0; j < z.size(); ++j)
                if (j != i) sum += 1.0 / (z[i] - z[j]);
            const cplx w = ratio / (1.0 - ratio * sum);
            z[i] -= w;
            if (std::abs(w) <= 2.0 * eps * std::abs(z[i])) done[i] = true;
            else all_done = false;
        }
        if (all_done) break;
    }
    out.iterations = it;
    out.converged = it < opt.max_iterations;

    // Newton polish on the caller's coefficients; keep a step only if it
    // lowers the residual.
    for (auto& r : z) {
        for (int s = 0; s < opt.polish_steps; ++s) {
            auto [v, dv] = p_in.eval_with_derivative(r);
            if (dv == cplx{}) break;
            const cplx cand = r - v / dv;
            if (std::abs(p_in(cand)) < std::abs(v)) r = cand;
            else break;
        }
    }
    std::sort(z.begin(), z.end(), root_less);
    if (!out.converged) throw ConvergenceError("Aberth iteration did not converge", z);
    out.roots = z;
    out.residuals.reserve(z.size());
    for (cplx r : z) out.residuals.push_back(std::abs(p_in(r)));
    return out;
}

double matching_distance(std::span<const cplx> a, std::span<const cplx> b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    struct Pair { double d; std::size_t i, j; };
    std::vector<Pair> pairs;
    pairs.reserve(a.size() * b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) pairs.push_back({std::abs(a[i] - b[j]), i, j});
    std::sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) { return x.d < y.d; });
    std::vector<bool> ua(a.size()), ub(b.size());
    double worst = 0.0;
    std::size_t matched = 0;
    for (const auto& pr : pairs) {
        if (ua[pr.i] || ub[pr.j]) continue;
        ua[pr.i] = ub[pr.j] = true;
        worst = std::max(worst, pr.d);
        if (++matched == a.size()) break;
    }
    return worst;
}

} // namespace tvgap
