#ifndef TVGAP_SPECTRAL_HPP
#define TVGAP_SPECTRAL_HPP

#include "tvgap/elliptic.hpp"
#include "tvgap/multiplicity.hpp"
#include "tvgap/poly.hpp"

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tvgap {

struct SpectralOptions {
    double rank_tol = 1e-8;        ///< relative singular-value threshold
    double tol_im = 1e-6;          ///< |Im E| <= tol_im * scale counts as real
    double tol_gap = 1e-6;         ///< pairwise gaps must exceed tol_gap * scale
    double z_check_tol = 1e-9;     ///< Q at z0 vs z1
    double route_tol = 1e-8;       ///< Phi route vs factorization route
    double residual_tol = 1e-8;    ///< |Q(r)| <= residual_tol (1+|r|)^(2g+1)
};

enum class RootClass { RealDistinct, HasComplex, HasMultiple };
std::string_view to_string(RootClass c);

struct RootReport {
    std::vector<cplx> roots;             ///< sorted by (real, imag)
    std::vector<double> residuals;       ///< |Q(root)|
    std::vector<double> residual_bounds; ///< residual_tol (1+|root|)^deg
    double scale = 1.0;                  ///< 1 + max |root|
    RootClass classification = RootClass::RealDistinct;
};

RootReport roots_and_classify(const ComplexPoly& Q, double tol_im = 1e-6, double tol_gap = 1e-6,
                              double residual_tol = 1e-8);
/// Classification of externally computed roots of Q.
RootReport classify_roots(const ComplexPoly& Q, std::vector<cplx> roots, double tol_im = 1e-6,
                          double tol_gap = 1e-6, double residual_tol = 1e-8);

/// Self-checks of the Phi construction.
struct PhiDiagnostics {
    double sample_radius = 0.0;       ///< R: E is sampled on [-R, R]
    int samples = 0;                  ///< 2g + 2 Chebyshev samples
    double null_ratio = 0.0;          ///< worst sigma_min / sigma_max over pencil and samples
    double gap_ratio = 0.0;           ///< smallest sigma_{min+1} / sigma_max (must exceed rank_tol)
    double lower_degree_ratio = 0.0;  ///< sigma_min / sigma_max with degree g-1 (must exceed rank_tol)
    double b_leading = 0.0;           ///< largest |b_j^(k)| coefficient at E^g relative to c0's
    double z_discrepancy = 0.0;       ///< Q(z0) vs Q(z1), normwise in E/R
    double sample_discrepancy = 0.0;  ///< per-sample null vectors vs the pencil null vector
};

/// Monic Q of degree 2g+1 from the even elliptic solution of the second
/// symmetric product equation. Throws AssertionFailure when a nullspace has
/// the wrong dimension or the z-independence check fails.
ComplexPoly q_via_phi_ansatz(const LatticeData& L, const MultiplicityTuple& n,
                             PhiDiagnostics* diag = nullptr, const SpectralOptions& opt = {});

/// Secant refinement of approximate roots of Q on the zeros of the pencil
/// null vector's Q-form at each E, which avoids the monomial coefficients.
/// Roots that would move by more than max_shift * scale are kept as given.
std::vector<cplx> refine_roots_direct(const LatticeData& L, const MultiplicityTuple& n, std::vector<cplx> roots,
                                      double max_shift = 1e-6);

struct FactorizationResult {
    bool constructible = false;
    std::string note;                     ///< why not, or which transform was used
    std::array<int, 4> even_tuple{};      ///< the even-sum tuple the table was applied to
    std::array<ComplexPoly, 4> factors;   ///< P^(0) .. P^(3)
    ComplexPoly Q;
};

/// Q as P^(0) P^(1) P^(2) P^(3). Odd sums go through the l-transform; when
/// no even tuple is reachable the result is flagged not constructible.
FactorizationResult q_via_factorization(const LatticeData& L, const MultiplicityTuple& n);

/// Smallest distance between roots of two different non-trivial factors.
double factor_root_separation(const FactorizationResult& f);

/// The l-transform of an odd-sum tuple with negative entries folded by l -> -l-1.
std::array<int, 4> l_transform(const std::array<int, 4>& n);

struct SpectralReport {
    MultiplicityTuple tuple;
    cplx tau;
    ComplexPoly Q;
    RootReport roots;
    PhiDiagnostics phi;
    bool factorization_constructible = false;
    std::string factorization_note;
    std::optional<double> route_discrepancy;   ///< normwise, variable scaled by root scale
    std::optional<double> factor_separation;
    std::string root_source;                   ///< "phi+refined" or "factors"
    std::vector<std::pair<double, double>> bands; ///< filled by hill when requested
};

/// Both routes, roots and classification. Throws AssertionFailure if the
/// routes disagree beyond route_tol.
SpectralReport spectral_report(const LatticeData& L, const MultiplicityTuple& n, const SpectralOptions& opt = {});

struct CovarianceReport {
    std::vector<cplx> roots;        ///< E_j(tau)
    std::vector<cplx> mapped;       ///< tau^2 E_j(tau)
    std::vector<cplx> dual_roots;   ///< roots of Q^(n0,n2,n1,n3)(.; -1/tau)
    double distance = 0.0;          ///< greedy matching distance
    double scale = 1.0;             ///< 1 + max |mapped|
};

CovarianceReport modular_covariance_check(const LatticeData& L, const MultiplicityTuple& n,
                                          const SpectralOptions& opt = {});

struct ScanPoint {
    double b = 0.0;
    std::optional<SpectralReport> report;
    std::string error;
};

struct ScanResult {
    MultiplicityTuple tuple;
    std::vector<ScanPoint> points;
    bool all_real_distinct = false;
    std::vector<double> not_real_distinct; ///< b values where classification differs
    int errors = 0;
};

/// tau = i b over `steps` evenly spaced b in [b_lo, b_hi]. Per-point
/// failures are recorded and the scan continues.
ScanResult tau_scan(const MultiplicityTuple& n, double b_lo, double b_hi, int steps,
                    const SpectralOptions& opt = {}, unsigned threads = 1);

} // namespace tvgap

#endif
