#pragma once

// PCA projection: columns centered, covariance eigendecomposition (Jacobi),
// components in descending eigenvalue order with the sign fixed so each
// component's largest-magnitude loading is positive.

#include <cstddef>
#include <span>
#include <vector>

namespace flowids {

struct PcaResult {
    std::size_t n = 0;
    std::size_t k = 0;
    std::size_t p = 0;
    std::vector<double> coords;       // n x k, row-major
    std::vector<double> components;   // k x p, row-major (one eigenvector per row)
    std::vector<double> eigenvalues;  // all p, descending

    double total_variance() const;
    std::vector<double> explained_ratio() const;  // k entries
};

PcaResult pca_project(std::span<const double> data, std::size_t n_rows, std::size_t n_cols,
                      std::size_t k);

// Full eigendecomposition of a symmetric p x p matrix (row-major, destroyed).
// Eigenpairs come back sorted by descending eigenvalue; eigenvectors[i*p..]
// is the i-th eigenvector.
void jacobi_eigen_symmetric(std::vector<double> matrix, std::size_t p,
                            std::vector<double>& eigenvalues,
                            std::vector<double>& eigenvectors);

}  // namespace flowids
