#ifndef TVGAP_ERROR_HPP
#define TVGAP_ERROR_HPP

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace tvgap {

using cplx = std::complex<double>;

/// Invalid argument or violated precondition (bad tuple, Im tau <= 0, ...).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Evaluation point lies within the pole-guard radius of a singularity.
class PoleError : public std::domain_error {
public:
    PoleError(const std::string& what, cplx where, double distance)
        : std::domain_error(what), where_(where), distance_(distance) {}
    cplx where() const noexcept { return where_; }
    double distance() const noexcept { return distance_; }

private:
    cplx where_;
    double distance_;
};

/// An iterative method failed to converge. Partial results, when there are
/// any, travel with the exception.
class ConvergenceError : public std::runtime_error {
public:
    explicit ConvergenceError(const std::string& what, std::vector<cplx> partial = {})
        : std::runtime_error(what), partial_(std::move(partial)) {}
    const std::vector<cplx>& partial() const noexcept { return partial_; }

private:
    std::vector<cplx> partial_;
};

/// A numerical self-check failed (nullspace dimension, route disagreement,
/// band/root mismatch).
class AssertionFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace tvgap

#endif
