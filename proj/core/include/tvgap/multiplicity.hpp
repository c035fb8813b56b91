#ifndef TVGAP_MULTIPLICITY_HPP
#define TVGAP_MULTIPLICITY_HPP

#include <array>
#include <string>
#include <string_view>

namespace tvgap {

/// Which side of the sharp real-root condition a tuple falls on.
///   C1: (n1+n2-n0-n3)/2 >= 1 with n1, n2 >= 1
///   C2: (n1+n2-n0-n3)/2 <= -1 with n0, n3 >= 1
enum class ConditionClass { C1, C2, Neither };

std::string_view to_string(ConditionClass c);

/// Genus of the spectral curve for multiplicities at the four half periods.
/// Throws DomainError for negative entries or the all-zero tuple.
int genus_of(const std::array<int, 4>& n);

ConditionClass condition_class_of(const std::array<int, 4>& n);

/// The multiplicities (n0, n1, n2, n3) of the singular sources at
/// 0, 1/2, tau/2, (1+tau)/2 together with derived metadata.
class MultiplicityTuple {
public:
    explicit MultiplicityTuple(const std::array<int, 4>& n);

    const std::array<int, 4>& n() const noexcept { return n_; }
    int operator[](int k) const { return n_.at(static_cast<std::size_t>(k)); }
    int sum() const noexcept { return n_[0] + n_[1] + n_[2] + n_[3]; }
    int parity() const noexcept { return sum() % 2; }
    int genus() const noexcept { return genus_; }
    int max() const noexcept;
    /// deg Q = 2g + 1
    int degree() const noexcept { return 2 * genus_ + 1; }
    ConditionClass condition_class() const noexcept { return class_; }

    /// (n0, n2, n1, n3): the tuple seen from the dual torus -1/tau.
    MultiplicityTuple swapped12() const;

    std::string str() const;

    friend bool operator==(const MultiplicityTuple& a, const MultiplicityTuple& b) {
        return a.n_ == b.n_;
    }

private:
    std::array<int, 4> n_;
    int genus_;
    ConditionClass class_;
};

} // namespace tvgap

#endif
