#ifndef TVGAP_LAURENT_HPP
#define TVGAP_LAURENT_HPP

#include "tvgap/error.hpp"

#include <algorithm>
#include <vector>

namespace tvgap::detail {

/// Truncated Laurent series sum_{r=lo}^{hi} c_r t^r. Terms above `hi` are
/// dropped, so products are exact only up to hi minus the other factor's
/// pole order; callers size `hi` with that margin.
struct Laurent {
    int lo = 0;
    int hi = 0;
    std::vector<cplx> c; // c[r - lo]

    Laurent() = default;
    Laurent(int lo_, int hi_) : lo(lo_), hi(hi_), c(static_cast<std::size_t>(std::max(0, hi_ - lo_ + 1))) {}

    cplx operator[](int r) const {
        return (r < lo || r > hi) ? cplx{} : c[static_cast<std::size_t>(r - lo)];
    }
    cplx& at(int r) { return c[static_cast<std::size_t>(r - lo)]; }

    static Laurent constant(cplx v, int hi) {
        Laurent s(0, hi);
        s.at(0) = v;
        return s;
    }

    Laurent derivative() const {
        Laurent d(lo - 1, hi - 1);
        for (int r = lo; r <= hi; ++r) d.at(r - 1) = static_cast<double>(r) * (*this)[r];
        return d;
    }

    friend Laurent operator*(const Laurent& a, const Laurent& b) {
        const int hi = std::min(a.hi + b.lo, b.hi + a.lo);
        Laurent p(a.lo + b.lo, hi);
        for (int i = a.lo; i <= a.hi; ++i) {
            const cplx ai = a[i];
            if (ai == cplx{}) continue;
            for (int j = b.lo; j <= b.hi && i + j <= hi; ++j) p.at(i + j) += ai * b[j];
        }
        return p;
    }

    friend Laurent operator*(cplx s, Laurent a) {
        for (auto& v : a.c) v *= s;
        return a;
    }

    friend Laurent operator+(const Laurent& a, const Laurent& b) {
        Laurent s(std::min(a.lo, b.lo), std::min(a.hi, b.hi));
        for (int r = s.lo; r <= s.hi; ++r) s.at(r) = a[r] + b[r];
        return s;
    }
    friend Laurent operator-(const Laurent& a, const Laurent& b) { return a + cplx(-1.0) * b; }
};

/// 1/s for a series whose lowest coefficient s[lo] is non-zero.
inline Laurent inverse(const Laurent& s) {
    const int n = s.hi - s.lo;
    Laurent r(-s.lo, -s.lo + n);
    const cplx a0 = s[s.lo];
    r.at(-s.lo) = 1.0 / a0;
    for (int k = 1; k <= n; ++k) {
        cplx acc{};
        for (int j = 1; j <= k; ++j) acc += s[s.lo + j] * r[-s.lo + k - j];
        r.at(-s.lo + k) = -acc / a0;
    }
    return r;
}

/// wp(t) = t^-2 + sum_{k>=2} c_k t^{2k-2} about t = 0, up to t^hi.
inline Laurent wp_laurent(cplx g2, cplx g3, int hi) {
    Laurent s(-2, hi);
    s.at(-2) = 1.0;
    const int kmax = hi / 2 + 1;
    std::vector<cplx> ck(static_cast<std::size_t>(std::max(kmax, 3)) + 1);
    ck[2] = g2 / 20.0;
    ck[3] = g3 / 28.0;
    for (int k = 4; k <= kmax; ++k) {
        cplx acc{};
        for (int m = 2; m <= k - 2; ++m) acc += ck[static_cast<std::size_t>(m)] * ck[static_cast<std::size_t>(k - m)];
        ck[static_cast<std::size_t>(k)] = 3.0 / ((2.0 * k + 1.0) * (k - 3.0)) * acc;
    }
    for (int k = 2; k <= kmax; ++k)
        if (2 * k - 2 <= hi) s.at(2 * k - 2) = ck[static_cast<std::size_t>(k)];
    return s;
}

} // namespace tvgap::detail

#endif
