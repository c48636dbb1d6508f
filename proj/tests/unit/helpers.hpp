#pragma once

#include <cmath>

#include "localize/linalg.hpp"

namespace test {

inline localize::Vector vec(std::initializer_list<localize::Complex> xs) {
    localize::Vector v(static_cast<localize::Index>(xs.size()));
    localize::Index i = 0;
    for (const auto& x : xs) v(i++) = x;
    return v;
}

inline localize::Matrix mat(std::initializer_list<std::initializer_list<localize::Complex>> rows) {
    const auto n = static_cast<localize::Index>(rows.size());
    localize::Matrix m(n, static_cast<localize::Index>(rows.begin()->size()));
    localize::Index i = 0;
    for (const auto& r : rows) {
        localize::Index j = 0;
        for (const auto& x : r) m(i, j++) = x;
        ++i;
    }
    return m;
}

inline localize::HermitianOperator herm(std::initializer_list<std::initializer_list<localize::Complex>> rows) {
    return localize::HermitianOperator::from_matrix(mat(rows));
}

inline localize::Subspace span(std::initializer_list<localize::Vector> vs) {
    std::vector<localize::Vector> list(vs);
    return localize::Subspace::span(std::span<const localize::Vector>(list));
}

inline localize::Vector e(localize::Index n, localize::Index i) { return localize::Vector::Unit(n, i); }

inline double diff(const localize::Matrix& a, const localize::Matrix& b) { return (a - b).norm(); }

}  // namespace test
