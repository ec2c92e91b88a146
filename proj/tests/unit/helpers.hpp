#pragma once

#include <initializer_list>

#include "shortcalc/numcore.hpp"

namespace testutil {

using shortcalc::ComplexMatrix;

inline ComplexMatrix real(std::initializer_list<std::initializer_list<double>> rows) {
    const auto r = static_cast<Eigen::Index>(rows.size());
    const auto c = static_cast<Eigen::Index>(rows.begin()->size());
    ComplexMatrix m(r, c);
    Eigen::Index i = 0;
    for (const auto& row : rows) {
        Eigen::Index j = 0;
        for (double v : row) m(i, j++) = v;
        ++i;
    }
    return m;
}

inline ComplexMatrix col(std::initializer_list<double> v) {
    ComplexMatrix m(static_cast<Eigen::Index>(v.size()), 1);
    Eigen::Index i = 0;
    for (double x : v) m(i++, 0) = x;
    return m;
}

inline double gap(const ComplexMatrix& a, const ComplexMatrix& b) { return (a - b).norm(); }

inline ComplexMatrix running_w() { return real({{2, 1}, {1, 1}}); }

}  // namespace testutil
