#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "nfedof/errors.hpp"

namespace nfedof {

using cplx = std::complex<double>;

// Row-major so the raw entry order matches the NFCM dump layout.
using ComplexMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RealVector = std::vector<double>;

inline bool all_finite(const ComplexMatrix& A) {
    for (Eigen::Index i = 0; i < A.size(); ++i) {
        const cplx v = A.data()[i];
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    }
    return true;
}

inline void require_finite(const ComplexMatrix& A, const char* what) {
    if (!all_finite(A)) throw NumericalError(std::string(what) + ": non-finite entry");
}

// Pairwise (cascade) summation; error grows like log n instead of n.
template <class T>
T pairwise_sum(const T* x, std::size_t n) {
    if (n == 0) return T{};
    if (n <= 8) {
        T s = x[0];
        for (std::size_t i = 1; i < n; ++i) s += x[i];
        return s;
    }
    const std::size_t h = n / 2;
    return pairwise_sum(x, h) + pairwise_sum(x + h, n - h);
}

template <class T>
T pairwise_sum(const std::vector<T>& x) {
    return pairwise_sum(x.data(), x.size());
}

inline double frobenius_sq(const ComplexMatrix& A) {
    return A.squaredNorm();
}

}  // namespace nfedof
