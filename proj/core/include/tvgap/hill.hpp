#ifndef TVGAP_HILL_HPP
#define TVGAP_HILL_HPP

#include "tvgap/elliptic.hpp"
#include "tvgap/multiplicity.hpp"
#include "tvgap/poly.hpp"
#include "tvgap/spectral.hpp"

#include <array>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

namespace tvgap {

using Mat2 = std::array<std::array<cplx, 2>, 2>;

struct HillOptions {
    double rtol = 1e-14;
    double atol = 1e-16;
    int segments = 16;           ///< sub-segments per path; det is tracked per piece
    double at_root_tol = 1e-4;   ///< |Q(E)| <= at_root_tol (1+|E|)^(2g+1)
    double trace_tol = 1e-7;     ///< realness / [-2,2] slack for traces, relative to 1+|Delta|
    double edge_tol = 1e-8;      ///< band-edge bisection tolerance in E
    double edge_match_tol = 1e-5;
    double dual_tol = 1e-4;
};

struct MonodromyRecord {
    cplx E;
    cplx base;
    Mat2 M1, M2;          ///< z -> z+1 and z -> z+tau, common frame at `base`
    cplx delta1, delta2;  ///< traces
    cplx theta1, theta2;  ///< 2 cos(pi theta_j) = delta_j, Re theta in (-1, 1]
    double commutator_norm = 0.0;
    double wronskian_drift = 0.0; ///< max_j |prod_k det T_jk - 1| over the sub-segment transfers
    double det_direct = 0.0;      ///< max_j |det M_j - 1| from the entries (cancels like ||M||^2 eps)
    int steps = 0;
};

struct UnitarityReport {
    cplx E;
    cplx delta1, delta2;
    bool at_root = false;
    bool unitary = false;
};

struct Band {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    bool open_left = false;  ///< extends past the low end of the scanned window
    bool open_right = false; ///< extends past the high end
};

struct BandReport {
    std::vector<Band> bands;
    std::vector<double> edges;  ///< finite band edges, sorted
    std::vector<double> roots;  ///< sorted real parts of the roots of Q
    std::vector<std::pair<double, double>> samples; ///< (E, Re Delta1) on the scan grid
    double max_edge_error = std::numeric_limits<double>::infinity();
    int semi_infinite = 0;
    bool left_semi_infinite = false;
    bool edges_match = false;
};

struct Interval {
    double lo, hi;
};

struct DualTorusReport {
    std::vector<Band> bands;       ///< S~ on tau
    std::vector<Band> dual_bands;  ///< tau^-2 S~' from -1/tau, swapped tuple
    std::vector<Interval> intersections;
    std::vector<double> roots;
    int far_from_roots = 0;        ///< intersection pieces not within dual_tol of a root
    int roots_hit = 0;             ///< roots covered by some intersection piece
    bool pass = false;
};

struct DevelopingMapReport {
    double drift1 = 0.0; ///< max |G(z+1) - G(z)| / |G(z)|
    double drift2 = 0.0; ///< max |G(z+tau) - G(z)| / |G(z)|
    double theta1 = 0.0, theta2 = 0.0;
};

/// y'' = [sum n_k (n_k+1) wp(z + omega_k/2) + E] y on a fixed torus, with
/// Q and its roots from spectral_report by default.
class GLEProblem {
public:
    GLEProblem(const LatticeData& L, const MultiplicityTuple& n, const HillOptions& opt = {});
    GLEProblem(const LatticeData& L, const MultiplicityTuple& n, const SpectralReport& rep,
               const HillOptions& opt = {});
    /// Supplying Q skips its construction; roots are then taken from Q alone,
    /// or from `roots` when given.
    GLEProblem(const LatticeData& L, const MultiplicityTuple& n, ComplexPoly Q, const HillOptions& opt = {},
               std::vector<cplx> roots = {});

    const LatticeData& lattice() const noexcept { return L_; }
    const MultiplicityTuple& tuple() const noexcept { return n_; }
    const HillOptions& options() const noexcept { return opt_; }
    const ComplexPoly& Q() const noexcept { return Q_; }
    const std::vector<cplx>& roots() const noexcept { return roots_; }

    /// (1 + tau)/4: off every singular line for rectangular tau.
    cplx default_base() const { return (1.0 + L_.tau()) / 4.0; }

    cplx potential(cplx z, cplx E) const;

    /// Transfer matrix of (y, y') along the straight segment from a to b.
    /// `det_product` receives the product of the sub-segment determinants.
    Mat2 transfer(cplx a, cplx b, cplx E, int* steps = nullptr, cplx* det_product = nullptr) const;

    MonodromyRecord monodromy(cplx E, std::optional<cplx> base = std::nullopt) const;
    /// tr M1 only.
    cplx delta1(cplx E, std::optional<cplx> base = std::nullopt) const;

    bool at_root(cplx E) const;
    UnitarityReport unitarity_probe(cplx E) const;

    /// Conditional stability set on [E_lo, E_hi]. Requires rectangular tau
    /// and a tuple in neither sharp class.
    BandReport stability_set_1d(double E_lo, double E_hi, int steps) const;

    /// Throws DomainError unless unitarity_probe(E).unitary.
    DevelopingMapReport developing_map_periodicity(cplx E, const std::vector<cplx>& sample_z) const;

private:
    std::vector<Band> bands_raw(double lo, double hi, int steps,
                                std::vector<std::pair<double, double>>* samples = nullptr) const;
    void check_segment(cplx a, cplx b) const;
    Mat2 integrate(cplx a, cplx b, cplx E, int& steps) const;

    LatticeData L_;
    MultiplicityTuple n_;
    HillOptions opt_;
    ComplexPoly Q_;
    std::vector<cplx> roots_;
    std::array<double, 4> weight_{};
};

DualTorusReport dual_torus_exclusion(const GLEProblem& P, double E_lo, double E_hi, int steps);

} // namespace tvgap

#endif
