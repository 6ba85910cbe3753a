#include "flowids/pca.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace flowids {

void jacobi_eigen_symmetric(std::vector<double> a, std::size_t p,
                            std::vector<double>& eigenvalues,
                            std::vector<double>& eigenvectors) {
    std::vector<double> v(p * p, 0.0);
    for (std::size_t i = 0; i < p; ++i) v[i * p + i] = 1.0;

    auto off_norm = [&] {
        double sum = 0.0;
        for (std::size_t i = 0; i < p; ++i)
            for (std::size_t j = i + 1; j < p; ++j) sum += a[i * p + j] * a[i * p + j];
        return std::sqrt(sum);
    };

    double scale = 0.0;
    for (std::size_t i = 0; i < p * p; ++i) scale = std::max(scale, std::abs(a[i]));
    const double tol = std::max(scale, 1.0) * 1e-14;

    for (int sweep = 0; sweep < 100 && off_norm() > tol; ++sweep) {
        for (std::size_t q = 0; q < p; ++q) {
            for (std::size_t r = q + 1; r < p; ++r) {
                const double apq = a[q * p + r];
                if (std::abs(apq) <= tol * 1e-2) continue;
                const double app = a[q * p + q];
                const double aqq = a[r * p + r];
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < p; ++k) {
                    const double akq = a[k * p + q];
                    const double akr = a[k * p + r];
                    a[k * p + q] = c * akq - s * akr;
                    a[k * p + r] = s * akq + c * akr;
                }
                for (std::size_t k = 0; k < p; ++k) {
                    const double aqk = a[q * p + k];
                    const double ark = a[r * p + k];
                    a[q * p + k] = c * aqk - s * ark;
                    a[r * p + k] = s * aqk + c * ark;
                }
                for (std::size_t k = 0; k < p; ++k) {
                    const double vkq = v[k * p + q];
                    const double vkr = v[k * p + r];
                    v[k * p + q] = c * vkq - s * vkr;
                    v[k * p + r] = s * vkq + c * vkr;
                }
            }
        }
    }

    std::vector<std::size_t> order(p);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return a[x * p + x] > a[y * p + y]; });

    eigenvalues.resize(p);
    eigenvectors.resize(p * p);
    for (std::size_t i = 0; i < p; ++i) {
        eigenvalues[i] = a[order[i] * p + order[i]];
        for (std::size_t k = 0; k < p; ++k) eigenvectors[i * p + k] = v[k * p + order[i]];
    }
}

double PcaResult::total_variance() const {
    return std::accumulate(eigenvalues.begin(), eigenvalues.end(), 0.0);
}

std::vector<double> PcaResult::explained_ratio() const {
    const double total = total_variance();
    std::vector<double> ratio(k, 0.0);
    for (std::size_t i = 0; i < k; ++i)
        ratio[i] = total > 0.0 ? eigenvalues[i] / total : 0.0;
    return ratio;
}

PcaResult pca_project(std::span<const double> data, std::size_t n_rows, std::size_t n_cols,
                      std::size_t k) {
    if (k > n_cols)
        throw std::invalid_argument("pca_project: k = " + std::to_string(k) +
                                    " exceeds feature count " + std::to_string(n_cols));
    if (data.size() != n_rows * n_cols)
        throw std::invalid_argument("pca_project: data size does not match dimensions");

    PcaResult result;
    result.n = n_rows;
    result.k = k;
    result.p = n_cols;

    std::vector<double> means(n_cols, 0.0);
    for (std::size_t r = 0; r < n_rows; ++r)
        for (std::size_t c = 0; c < n_cols; ++c) means[c] += data[r * n_cols + c];
    if (n_rows > 0)
        for (double& m : means) m /= static_cast<double>(n_rows);

    std::vector<double> centered(n_rows * n_cols);
    for (std::size_t r = 0; r < n_rows; ++r)
        for (std::size_t c = 0; c < n_cols; ++c)
            centered[r * n_cols + c] = data[r * n_cols + c] - means[c];

    std::vector<double> cov(n_cols * n_cols, 0.0);
    const double denom = n_rows > 1 ? static_cast<double>(n_rows - 1) : 1.0;
    for (std::size_t r = 0; r < n_rows; ++r) {
        const double* row = centered.data() + r * n_cols;
        for (std::size_t i = 0; i < n_cols; ++i) {
            for (std::size_t j = i; j < n_cols; ++j) cov[i * n_cols + j] += row[i] * row[j];
        }
    }
    for (std::size_t i = 0; i < n_cols; ++i) {
        for (std::size_t j = i; j < n_cols; ++j) {
            cov[i * n_cols + j] /= denom;
            cov[j * n_cols + i] = cov[i * n_cols + j];
        }
    }

    std::vector<double> vectors;
    jacobi_eigen_symmetric(std::move(cov), n_cols, result.eigenvalues, vectors);

    // sign convention: largest-magnitude loading positive (lowest index on ties)
    result.components.resize(k * n_cols);
    for (std::size_t comp = 0; comp < k; ++comp) {
        std::size_t arg = 0;
        double best = -1.0;
        for (std::size_t c = 0; c < n_cols; ++c) {
            const double mag = std::abs(vectors[comp * n_cols + c]);
            if (mag > best) {
                best = mag;
                arg = c;
            }
        }
        const double flip = vectors[comp * n_cols + arg] < 0.0 ? -1.0 : 1.0;
        for (std::size_t c = 0; c < n_cols; ++c)
            result.components[comp * n_cols + c] = flip * vectors[comp * n_cols + c];
    }

    result.coords.assign(n_rows * k, 0.0);
    for (std::size_t r = 0; r < n_rows; ++r) {
        for (std::size_t comp = 0; comp < k; ++comp) {
            double dot = 0.0;
            for (std::size_t c = 0; c < n_cols; ++c)
                dot += centered[r * n_cols + c] * result.components[comp * n_cols + c];
            result.coords[r * k + comp] = dot;
        }
    }
    return result;
}

}  // namespace flowids
