#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "nfedof/errors.hpp"
#include "nfedof/numerics/matrix.hpp"

namespace nfedof {

struct JacobiOptions {
    double tolerance = 1e-12;  // off-diagonal Frobenius norm, relative to ||A||_F
    int max_sweeps = 100;
    double hermitian_tolerance = 1e-10;
};

struct HermitianEigen {
    std::vector<double> values;  // descending
    ComplexMatrix vectors;       // column k belongs to values[k]
    int sweeps = 0;
};

inline double hermitian_defect(const ComplexMatrix& A) {
    const double n = A.norm();
    if (n == 0.0) return 0.0;
    return (A - A.adjoint()).norm() / n;
}

// Cyclic complex Jacobi. Each rotation first makes a_pq real with a phase on
// index q, then applies the real symmetric Jacobi rotation.
inline HermitianEigen hermitian_eigen(const ComplexMatrix& input, const JacobiOptions& opt = {}) {
    if (input.rows() != input.cols()) throw ArgumentError("hermitian_eigen: matrix not square");
    const Eigen::Index n = input.rows();
    if (n == 0) return {};
    if (!all_finite(input)) throw ArgumentError("hermitian_eigen: non-finite entry");
    if (hermitian_defect(input) > opt.hermitian_tolerance)
        throw ArgumentError("hermitian_eigen: matrix not Hermitian within tolerance");

    ComplexMatrix A = 0.5 * (input + input.adjoint());
    ComplexMatrix V = ComplexMatrix::Identity(n, n);
    const double scale = A.norm();

    auto off_norm = [&] {
        double s = 0.0;
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = i + 1; j < n; ++j) s += std::norm(A(i, j));
        return std::sqrt(2.0 * s);
    };

    HermitianEigen out;
    int sweep = 0;
    for (; sweep < opt.max_sweeps; ++sweep) {
        if (scale == 0.0 || off_norm() <= opt.tolerance * scale) break;
        for (Eigen::Index p = 0; p < n - 1; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const double apq = std::abs(A(p, q));
                if (apq == 0.0) continue;
                const cplx ph = A(p, q) / apq;  // e^{i theta}
                const cplx phc = std::conj(ph);
                // column q *= e^{-i theta}, row q *= e^{+i theta}
                for (Eigen::Index k = 0; k < n; ++k) {
                    A(k, q) *= phc;
                    V(k, q) *= phc;
                }
                for (Eigen::Index k = 0; k < n; ++k) A(q, k) *= ph;

                const double app = A(p, p).real();
                const double aqq = A(q, q).real();
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (Eigen::Index k = 0; k < n; ++k) {
                    const cplx akp = A(k, p), akq = A(k, q);
                    A(k, p) = c * akp - s * akq;
                    A(k, q) = s * akp + c * akq;
                    const cplx vkp = V(k, p), vkq = V(k, q);
                    V(k, p) = c * vkp - s * vkq;
                    V(k, q) = s * vkp + c * vkq;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const cplx apk = A(p, k), aqk = A(q, k);
                    A(p, k) = c * apk - s * aqk;
                    A(q, k) = s * apk + c * aqk;
                }
                A(p, q) = 0.0;
                A(q, p) = 0.0;
                A(p, p) = app - t * apq;
                A(q, q) = aqq + t * apq;
            }
        }
    }
    if (scale != 0.0 && off_norm() > opt.tolerance * scale)
        throw NumericalError("hermitian_eigen: no convergence after " + std::to_string(opt.max_sweeps) + " sweeps");

    std::vector<Eigen::Index> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return A(a, a).real() > A(b, b).real(); });
    out.values.resize(n);
    out.vectors.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        out.values[k] = A(idx[k], idx[k]).real();
        out.vectors.col(k) = V.col(idx[k]);
    }
    out.sweeps = sweep;
    return out;
}

inline std::vector<double> hermitian_eigenvalues(const ComplexMatrix& A, const JacobiOptions& opt = {}) {
    return hermitian_eigen(A, opt).values;
}

}  // namespace nfedof
