#ifndef TVGAP_PREMODULAR_HPP
#define TVGAP_PREMODULAR_HPP

#include "tvgap/elliptic.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tvgap {

/// Position relative to F0 = {0 <= Re tau <= 1, |tau - 1/2| >= 1/2}.
enum class F0Location { Interior, BoundaryLeft, BoundaryRight, BoundaryCircle, Outside };
std::string_view to_string(F0Location l);
F0Location classify_f0(cplx tau, double tol = 1e-9);

/// The open triangles T0..T3 of [0,1] x [0,1/2]; None off all of them.
enum class RsTriangle { T0, T1, T2, T3, None };
std::string_view to_string(RsTriangle t);
RsTriangle triangle_of(double r, double s);

bool on_half_lattice(double r, double s, double tol = 1e-12);

/// zeta(r + s tau) - r eta1 - s eta2
cplx z_rs(const LatticeData& L, double r, double s);

/// The pre-modular form of index n = 1..4.
cplx z_n(const LatticeData& L, double r, double s, int n);
cplx z_n(cplx tau, double r, double s, int n);

/// (i + 1/2)/nr by (j + 1/2)/(2 ns): nr x ns points in (0,1) x (0,1/2), none on the half lattice.
std::vector<std::pair<double, double>> rs_grid(int nr = 20, int ns = 20);

/// per_piece samples each on Re tau = 0, Re tau = 1 (Im log-spaced in
/// [h_min, h_max]) and on |tau - 1/2| = 1/2 with Im tau >= h_min.
std::vector<cplx> boundary_tau_grid(int per_piece = 20, double h_min = 0.05, double h_max = 10.0);

struct BoundaryScanReport {
    int n = 0;
    double min_abs = 0.0;
    double argmin_r = 0.0, argmin_s = 0.0;
    cplx argmin_tau;
    double floor = 1e-8;
    int evaluated = 0;
    int below_floor = 0;
    int flagged = 0;  ///< (r,s) on the half lattice, skipped
    int errors = 0;
    bool pass = false;
};

BoundaryScanReport boundary_nonvanishing_scan(int n, const std::vector<std::pair<double, double>>& rs,
                                              const std::vector<cplx>& taus, double floor = 1e-8,
                                              unsigned threads = 1);

struct ZeroFindOptions {
    double h = 1e-6;
    double z_tol = 1e-10;
    double step_tol = 1e-10;
    int max_iter = 80;
    double f0_tol = 1e-9;
};

struct ZeroFindResult {
    bool converged = false;
    cplx seed;
    cplx tau_zero;
    double residual = 0.0;
    F0Location location = F0Location::Outside;
    bool inside_f0 = false;
    int iterations = 0;
    std::string note;
};

/// Newton on tau with a central-difference derivative.
ZeroFindResult zero_find(int n, double r, double s, cplx seed, const ZeroFindOptions& opt = {});

struct MultiStartResult {
    std::vector<ZeroFindResult> runs;
    std::optional<ZeroFindResult> found;  ///< first converged run landing in F0
    int converged_in_f0 = 0;
};

/// Re tau in {0.1, 0.3, 0.5, 0.7, 0.9}, Im tau in {0.6, 0.9, 1.3, 1.8, 2.5}.
std::vector<cplx> f0_seed_lattice();

MultiStartResult zero_find_multistart(int n, double r, double s, const std::vector<cplx>& seeds,
                                      const ZeroFindOptions& opt = {}, unsigned threads = 1);

} // namespace tvgap

#endif
