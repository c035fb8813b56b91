#ifndef TVGAP_ELLIPTIC_HPP
#define TVGAP_ELLIPTIC_HPP

#include "tvgap/error.hpp"

#include <array>
#include <complex>

namespace tvgap {

inline constexpr double kDefaultTruncationTol = 1e-14;
inline constexpr double kDefaultPoleGuard = 1e-6;

/// Weierstrass data for the lattice Z + Z tau. Values are computed on an
/// SL(2,Z)-equivalent reduced modulus (|Re tau'| <= 1/2, |tau'| >= 1) and
/// carried back by the lattice homothety, so every series runs with
/// |q'| <= exp(-pi sqrt(3)/2).
///
/// Immutable after construction.
class LatticeData {
public:
    explicit LatticeData(cplx tau, double tol = kDefaultTruncationTol,
                         double pole_guard = kDefaultPoleGuard);

    cplx tau() const noexcept { return tau_; }
    /// exp(i pi tau) for the original modulus.
    cplx nome() const noexcept { return nome_; }
    double truncation_tol() const noexcept { return tol_; }
    double pole_guard() const noexcept { return guard_; }

    /// e_k = wp(omega_k / 2), k = 1, 2, 3.
    cplx e(int k) const { return e_.at(static_cast<std::size_t>(k - 1)); }
    const std::array<cplx, 3>& e_all() const noexcept { return e_; }
    cplx g2() const noexcept { return g2_; }
    cplx g3() const noexcept { return g3_; }
    cplx eta1() const noexcept { return eta1_; }
    cplx eta2() const noexcept { return eta2_; }

    /// omega_k / 2 for k = 0..3: 0, 1/2, tau/2, (1+tau)/2.
    cplx half_period(int k) const;

    /// Distance from z to the nearest lattice point.
    double lattice_distance(cplx z) const;

    cplx wp(cplx z) const;
    cplx wp_prime(cplx z) const;
    cplx wp_second(cplx z) const;
    cplx zeta(cplx z) const;
    /// wp and wp' from a single theta evaluation.
    std::pair<cplx, cplx> wp_and_prime(cplx z) const;
    /// wp(z + omega_i/2) by the half-period addition formula, i in {1,2,3}.
    cplx wp_half_shift(cplx z, int i) const;

    /// Reduced modulus and homothety factor: Lambda_tau = lambda * Lambda_tau'.
    cplx reduced_tau() const noexcept { return tr_; }
    cplx homothety() const noexcept { return lam_; }

private:
    struct Local {
        cplx wp, wp_prime, wp_second, zeta_theta;
    };
    /// Maps z to w = z/lambda - (m + n tau') in the centred reduced cell.
    cplx reduce(cplx z, long& m, long& n) const;
    double reduced_distance(cplx w) const;
    Local eval_reduced(cplx w, bool want_zeta) const;
    void check_pole(cplx z, cplx w) const;
    cplx wp_minus_e(cplx z, int i) const;
    cplx e_diff(int i, int j) const;

    cplx tau_, nome_;
    double tol_, guard_;
    cplx tr_, lam_, qr_;
    int ma_ = 1, mb_ = 0, mc_ = 0, md_ = 1;
    std::array<int, 3> eidx_{0, 1, 2}; ///< e_k of tau is il^2 er_[eidx_[k-1]]

    // Reduced-lattice constants.
    cplx th2_, th3_, th4_;
    cplx e1r_, eta1r_, eta2r_;
    std::array<cplx, 3> er_{};

    std::array<cplx, 3> e_{};
    cplx g2_, g3_, eta1_, eta2_;
};

inline LatticeData make_lattice(cplx tau, double tol = kDefaultTruncationTol) { return LatticeData(tau, tol); }
inline cplx wp(const LatticeData& L, cplx z) { return L.wp(z); }
inline cplx wp_prime(const LatticeData& L, cplx z) { return L.wp_prime(z); }
inline cplx wp_second(const LatticeData& L, cplx z) { return L.wp_second(z); }
inline cplx zeta_w(const LatticeData& L, cplx z) { return L.zeta(z); }
inline cplx wp_half_shift(const LatticeData& L, cplx z, int i) { return L.wp_half_shift(z, i); }

} // namespace tvgap

#endif
