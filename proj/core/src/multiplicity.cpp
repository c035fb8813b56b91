#include "tvgap/multiplicity.hpp"

#include "tvgap/error.hpp"

#include <algorithm>
#include <functional>

namespace tvgap {

std::string_view to_string(ConditionClass c) {
    switch (c) {
    case ConditionClass::C1: return "C1";
    case ConditionClass::C2: return "C2";
    case ConditionClass::Neither: return "NEITHER";
    }
    return "?";
}

int genus_of(const std::array<int, 4>& n) {
    if (std::any_of(n.begin(), n.end(), [](int v) { return v < 0; }))
        throw DomainError("multiplicities must be non-negative");
    if (std::all_of(n.begin(), n.end(), [](int v) { return v == 0; }))
        throw DomainError("at least one multiplicity must be >= 1");

    auto m = n;
    std::sort(m.begin(), m.end(), std::greater<>());
    const int sum = m[0] + m[1] + m[2] + m[3];
    if (sum % 2 == 0) {
        if (m[0] + m[3] >= m[1] + m[2]) return m[0];
        return (m[0] + m[1] + m[2] - m[3]) / 2;
    }
    if (m[0] > m[1] + m[2] + m[3]) return m[0];
    return (sum + 1) / 2;
}

ConditionClass condition_class_of(const std::array<int, 4>& n) {
    const int d = n[1] + n[2] - n[0] - n[3];
    if (d >= 2 && n[1] >= 1 && n[2] >= 1) return ConditionClass::C1;
    if (d <= -2 && n[0] >= 1 && n[3] >= 1) return ConditionClass::C2;
    return ConditionClass::Neither;
}

MultiplicityTuple::MultiplicityTuple(const std::array<int, 4>& n)
    : n_(n), genus_(genus_of(n)), class_(condition_class_of(n)) {}

int MultiplicityTuple::max() const noexcept { return *std::max_element(n_.begin(), n_.end()); }

MultiplicityTuple MultiplicityTuple::swapped12() const {
    return MultiplicityTuple({n_[0], n_[2], n_[1], n_[3]});
}

std::string MultiplicityTuple::str() const {
    return "(" + std::to_string(n_[0]) + "," + std::to_string(n_[1]) + "," + std::to_string(n_[2]) +
           "," + std::to_string(n_[3]) + ")";
}

} // namespace tvgap
