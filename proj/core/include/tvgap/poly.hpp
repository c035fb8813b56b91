#ifndef TVGAP_POLY_HPP
#define TVGAP_POLY_HPP

#include "tvgap/error.hpp"

#include <complex>
#include <span>
#include <vector>

namespace tvgap {

/// Dense univariate polynomial with complex coefficients, lowest degree
/// first. The zero polynomial has degree -1.
class ComplexPoly {
public:
    ComplexPoly() = default;
    explicit ComplexPoly(std::vector<cplx> coeffs);

    static ComplexPoly constant(cplx c) { return ComplexPoly({c}); }
    /// a*x + b
    static ComplexPoly linear(cplx a, cplx b) { return ComplexPoly({b, a}); }
    static ComplexPoly from_roots(std::span<const cplx> roots);

    int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const noexcept { return c_.empty(); }
    const std::vector<cplx>& coeffs() const noexcept { return c_; }
    cplx operator[](int i) const { return i >= 0 && i <= degree() ? c_[static_cast<std::size_t>(i)] : cplx{}; }
    cplx leading() const { return c_.empty() ? cplx{} : c_.back(); }

    cplx operator()(cplx x) const;
    /// p(x) and p'(x) in one Horner pass.
    std::pair<cplx, cplx> eval_with_derivative(cplx x) const;
    /// sum |a_i| |x|^i, the scale against which |p(x)| is measured.
    double abs_eval(double x) const;

    ComplexPoly derivative() const;
    ComplexPoly monic() const;
    bool is_monic(double tol = 1e-12) const { return !c_.empty() && std::abs(c_.back() - 1.0) <= tol; }
    /// p(a*x + b)
    ComplexPoly compose_affine(cplx a, cplx b) const;
    /// Drops leading coefficients with |c| <= tol * max|c|.
    ComplexPoly trimmed(double tol) const;
    /// Sets imaginary parts below tol * max|c| to zero.
    ComplexPoly real_part_if_negligible(double tol) const;
    double max_abs_coeff() const noexcept;
    double max_abs_imag() const noexcept;

    ComplexPoly& operator+=(const ComplexPoly& o);
    ComplexPoly& operator-=(const ComplexPoly& o);
    ComplexPoly& operator*=(cplx s);

    friend ComplexPoly operator+(ComplexPoly a, const ComplexPoly& b) { return a += b; }
    friend ComplexPoly operator-(ComplexPoly a, const ComplexPoly& b) { return a -= b; }
    friend ComplexPoly operator*(ComplexPoly a, cplx s) { return a *= s; }
    friend ComplexPoly operator*(cplx s, ComplexPoly a) { return a *= s; }
    friend ComplexPoly operator*(const ComplexPoly& a, const ComplexPoly& b);

private:
    void normalize();
    std::vector<cplx> c_;
};

/// Normwise coefficient discrepancy of two polynomials after rescaling the
/// variable by `scale` (E = scale * x):
///   max_i |a_i - b_i| scale^i / max_i |a_i| scale^i.
double relative_coeff_discrepancy(const ComplexPoly& a, const ComplexPoly& b, double scale);

struct RootOptions {
    int max_iterations = 2000;
    int polish_steps = 3;
};

struct RootResult {
    std::vector<cplx> roots;      ///< sorted by (real, imag)
    std::vector<double> residuals; ///< |p(root)| after polishing
    int iterations = 0;
    bool converged = false;
};

/// All roots by Aberth-Ehrlich simultaneous iteration followed by Newton
/// polishing on the original coefficients. Throws ConvergenceError (with the
/// partial roots attached) when the iteration cap is hit.
RootResult find_roots(const ComplexPoly& p, const RootOptions& opt = {});

/// Greedy nearest-pair matching between two equally sized point sets;
/// returns the largest matched distance.
double matching_distance(std::span<const cplx> a, std::span<const cplx> b);

} // namespace tvgap

#endif
