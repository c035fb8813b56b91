#include "../oracle.hpp"

#include "doctest.h"
#include "tvgap/premodular.hpp"

#include <random>

using namespace tvgap;

namespace {

const cplx I(0, 1);

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

} // namespace

TEST_CASE("Z vanishes at the half periods") {
    for (cplx tau : {I, 0.3 + 0.8 * I, 0.5 + 2.0 * I}) {
        const LatticeData L(tau);
        CHECK(std::abs(z_rs(L, 0.5, 0.0)) < 1e-12);
        CHECK(std::abs(z_rs(L, 0.0, 0.5)) < 1e-12);
        CHECK(std::abs(z_rs(L, 0.5, 0.5)) < 1e-12);
        CHECK(std::abs(z_n(L, 0.5, 0.0, 2)) < 1e-10);
        CHECK(on_half_lattice(0.5, 1.0));
        CHECK_FALSE(on_half_lattice(0.5, 0.3));
    }
    CHECK_THROWS_AS(z_rs(LatticeData(I), 0.0, 0.0), PoleError);
    CHECK_THROWS_AS(z_n(LatticeData(I), 0.2, 0.1, 5), DomainError);
}

TEST_CASE("Z against the row-sum oracle") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.05, 0.95), re(-0.5, 1.5), im(0.3, 2.0);
    for (int k = 0; k < 20; ++k) {
        const cplx tau(re(rng), im(rng));
        const double r = u(rng), s = u(rng);
        const cplx e1 = oracle::eta1(tau), e2 = tau * e1 - 2.0 * oracle::pi * I;
        const cplx want = oracle::zeta(r + s * tau, tau) - r * e1 - s * e2;
        CHECK(rel(z_rs(LatticeData(tau), r, s), want) < 1e-10);
    }
}

TEST_CASE("parity: odd for n = 1, 2 and even for n = 3, 4") {
    const LatticeData L(0.2 + 1.1 * I);
    for (auto [r, s] : std::vector<std::pair<double, double>>{{0.13, 0.27}, {0.71, 0.4}, {0.33, 0.9}}) {
        for (int n = 1; n <= 4; ++n) {
            const double sign = (n * (n + 1) / 2) % 2 ? -1.0 : 1.0;
            CHECK(rel(z_n(L, -r, -s, n), sign * z_n(L, r, s, n)) < 1e-10);
        }
    }
}

TEST_CASE("integer translations of (r,s) leave Z^(n) unchanged") {
    const LatticeData L(0.35 + 0.9 * I);
    for (int n = 1; n <= 4; ++n) {
        const cplx z = z_n(L, 0.21, 0.34, n);
        CHECK(rel(z_n(L, 1.21, 0.34, n), z) < 1e-9);
        CHECK(rel(z_n(L, 0.21, 1.34, n), z) < 1e-9);
        CHECK(rel(z_n(L, -0.79, -0.66, n), z) < 1e-9);
        CHECK(std::abs(std::abs(z_n(L, 0.79, 0.66, n)) - std::abs(z)) < 1e-9 * std::max(1.0, std::abs(z)));
    }
}

TEST_CASE("n = 2 transformation laws") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.02, 0.98), re(-0.5, 0.5), im(0.6, 2.0);
    for (int k = 0; k < 20; ++k) {
        const double r = u(rng), s = u(rng);
        const cplx tau(re(rng), im(rng));
        CHECK(rel(z_n(tau, r, s, 2), z_n(tau - 1.0, r + s, s, 2)) < 1e-8);
        CHECK(rel(std::pow(1.0 - tau, 3) * z_n(tau, r, s, 2), z_n(tau / (1.0 - tau), r, r + s, 2)) < 1e-8);
    }
}

TEST_CASE("modular weight under Gamma(5) at 5-torsion points") {
    // gamma = [[1, 5], [5, 26]]
    const double r = 0.2, s = 0.4;
    for (double h : {0.15, 0.3, 1.0}) {
        const cplx tau(-5.2, h);
        const cplx g = (tau + 5.0) / (5.0 * tau + 26.0), j = 5.0 * tau + 26.0;
        for (int n = 1; n <= 4; ++n)
            CHECK(rel(z_n(g, r, s, n), std::pow(j, n * (n + 1) / 2) * z_n(tau, r, s, n)) < 1e-8);
    }
}

TEST_CASE("F0 and triangle classification") {
    CHECK(classify_f0(0.5 + 1.0 * I) == F0Location::Interior);
    CHECK(classify_f0(2.0 * I) == F0Location::BoundaryLeft);
    CHECK(classify_f0(1.0 + 2.0 * I) == F0Location::BoundaryRight);
    CHECK(classify_f0(0.5 + 0.5 * I) == F0Location::BoundaryCircle);
    CHECK(classify_f0(-0.1 + I) == F0Location::Outside);
    CHECK(classify_f0(0.5 + 0.3 * I) == F0Location::Outside);
    CHECK(classify_f0(cplx(0.5, -1.0)) == F0Location::Outside);
    CHECK(triangle_of(0.15, 0.15) == RsTriangle::T3);
    CHECK(triangle_of(0.3, 0.3) == RsTriangle::T0);
    CHECK(triangle_of(0.8, 0.4) == RsTriangle::T1);
    CHECK(triangle_of(0.6, 0.1) == RsTriangle::T2);
    CHECK(triangle_of(0.25, 0.25) == RsTriangle::None);
}

TEST_CASE("grids") {
    const auto rs = rs_grid(20, 20);
    CHECK(rs.size() == 400);
    for (auto [r, s] : rs) {
        CHECK(r > 0);
        CHECK(r < 1);
        CHECK(s > 0);
        CHECK(s < 0.5);
        CHECK_FALSE(on_half_lattice(r, s));
    }
    const auto taus = boundary_tau_grid(20, 0.05, 10.0);
    CHECK(taus.size() == 60);
    for (cplx t : taus) {
        CHECK(t.imag() >= 0.05 - 1e-12);
        CHECK(t.imag() <= 10.0 + 1e-12);
        CHECK(classify_f0(t) != F0Location::Interior);
        CHECK(classify_f0(t) != F0Location::Outside);
    }
}

TEST_CASE("boundary scan stays away from zero") {
    const auto rs = rs_grid(10, 10);
    const auto taus = boundary_tau_grid(10, 0.05, 10.0);
    for (int n : {1, 2}) {
        const BoundaryScanReport a = boundary_nonvanishing_scan(n, rs, taus, 1e-8, 1);
        const BoundaryScanReport b = boundary_nonvanishing_scan(n, rs, taus, 1e-8, 3);
        CHECK(a.pass);
        CHECK(a.min_abs > (n == 1 ? 1e-3 : 1e-8));
        CHECK(a.min_abs == b.min_abs);
        CHECK(a.evaluated == static_cast<int>(rs.size() * taus.size()));
    }
    // half-lattice inputs are flagged and skipped
    const BoundaryScanReport f = boundary_nonvanishing_scan(2, {{0.5, 0.0}, {0.2, 0.1}}, taus, 1e-8);
    CHECK(f.flagged == 1);
}

TEST_CASE("n = 1 has no zeros on the imaginary axis") {
    double m = 1e300;
    for (auto [r, s] : rs_grid(12, 12))
        for (double b = 0.1; b <= 5.0; b *= 1.25) m = std::min(m, std::abs(z_n(I * b, r, s, 1)));
    CHECK(m > 1e-3);
}

TEST_CASE("zero finding") {
    const auto seeds = f0_seed_lattice();
    CHECK(seeds.size() == 25);

    const ZeroFindResult a = zero_find(2, 0.15, 0.15, 0.7 + 0.7 * I);
    CHECK(a.converged);
    CHECK(a.residual < 1e-10);
    CHECK(a.location == F0Location::Interior);
    CHECK(std::abs(a.tau_zero - cplx(0.689283, 0.724492)) < 1e-5);

    const MultiStartResult b = zero_find_multistart(2, 0.3, 0.3, seeds);
    CHECK(b.runs.size() == 25);
    CHECK(b.converged_in_f0 == 0);
    CHECK_FALSE(b.found.has_value());

    const MultiStartResult c = zero_find_multistart(1, 0.3, 0.3, seeds);
    REQUIRE(c.found.has_value());
    CHECK(c.found->inside_f0);
    CHECK(std::abs(c.found->tau_zero - cplx(0.595968, 0.803008)) < 1e-5);

    const MultiStartResult d = zero_find_multistart(2, 0.6, 0.1, seeds, {}, 2);
    CHECK(d.found.has_value());
}
