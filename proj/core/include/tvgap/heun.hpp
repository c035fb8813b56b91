#ifndef TVGAP_HEUN_HPP
#define TVGAP_HEUN_HPP

#include "tvgap/elliptic.hpp"
#include "tvgap/multiplicity.hpp"
#include "tvgap/poly.hpp"

#include <array>
#include <vector>

namespace tvgap {

/// Exponent choice (a0, a1, a2, a3) with a_i in {-n_i/2, (n_i+1)/2}, stored
/// as the integers 2*a_i so half-integers stay exact.
class TildeAlpha {
public:
    /// Throws DomainError unless -sum a_i is a non-negative integer.
    explicit TildeAlpha(std::array<int, 4> twice);
    /// upper[i] selects (n_i+1)/2 instead of -n_i/2.
    static TildeAlpha from_tuple(const MultiplicityTuple& n, std::array<bool, 4> upper);

    double operator[](int i) const { return 0.5 * twice_.at(static_cast<std::size_t>(i)); }
    const std::array<int, 4>& twice() const noexcept { return twice_; }
    int N() const noexcept { return n_; }

private:
    std::array<int, 4> twice_;
    int n_ = 0;
};

/// Heun equation with singular points t1, t2, t3, infinity:
///   y'' + sum_i gamma_i/(x - t_i) y' + (alpha beta (x - t3) - q)/prod(x - t_i) y = 0.
struct HeunParams {
    std::array<cplx, 3> t{};
    std::array<double, 3> gamma{};
    double alpha = 0.0;
    double beta = 0.0;
    int N = 0; ///< -alpha
    /// Affine link to the spectral parameter: q = E/4 + q_intercept.
    cplx q_intercept{};
};

/// Checks distinct t_i, gamma_3 not in -Z_{>=0}, alpha = -N and the Fuchs
/// relation alpha + beta + 1 = gamma_1 + gamma_2 + gamma_3.
void validate(const HeunParams& h);

HeunParams heun_from_tuple(const LatticeData& L, const TildeAlpha& ta);

/// c_0(q) .. c_{m_max}(q) from the three-term recursion, in polynomial
/// arithmetic. Throws DomainError if m + gamma_3 = 0 is hit.
std::vector<ComplexPoly> coeff_sequence(const HeunParams& h, int m_max);

/// Monic P(E) of degree N+1 from c_{N+1}(E/4 + q_intercept).
ComplexPoly p_polynomial(const LatticeData& L, const TildeAlpha& ta);
ComplexPoly p_polynomial(const HeunParams& h);

/// sum_{m<=N} c_m(q0) (x - t3)^m as a polynomial in x.
ComplexPoly polynomial_solution(const HeunParams& h, cplx q0);

enum class SturmRegime { Sturm, Sturm1 };

struct InterlacingReport {
    SturmRegime regime = SturmRegime::Sturm;
    int n3 = 0; ///< 1/2 - gamma_3 in the Sturm1 regime, 0 otherwise
    bool all_real = false;
    bool interlaced = false;
    std::vector<std::vector<double>> roots;  ///< roots[m-1] are the sorted roots of c_m
    std::vector<int> leading_signs;          ///< sign of the leading coefficient of c_m
    std::vector<int> expected_signs;         ///< +1 for m <= n3, (-1)^(m-n3) after
    bool leading_signs_ok = false;
    int first_flip = 0;                      ///< smallest m with sign(c_{m+1}) = -sign(c_m)
    bool p2_ok = false;                      ///< sign rule for c_{m+1} c_{m-1} at roots of c_m
};

/// Real-root and interlacing diagnostics for c_1 .. c_{N+1}. Requires real
/// t_i with (t1 - t3)(t2 - t3) < 0 and either gamma_3 > 0, beta > 0 or
/// gamma_3 = beta = 1/2 - n3 < 0; throws DomainError otherwise.
InterlacingReport interlacing_check(const HeunParams& h, int N);

} // namespace tvgap

#endif
