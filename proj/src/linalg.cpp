#include "clickmodel/linalg.hpp"

#include <cmath>

#include "clickmodel/types.hpp"

namespace clickmodel::linalg {

std::vector<double> solve_spd(Matrix a, std::vector<double> b) {
    const int n = a.rows();
    if (n == 0) return {};
    double scale = 0.0;
    for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(a(i, i)));
    const double tol = scale * 1e-13;

    // In-place Cholesky, lower triangle.
    for (int j = 0; j < n; ++j) {
        double d = a(j, j);
        for (int k = 0; k < j; ++k) d -= a(j, k) * a(j, k);
        if (!(d > tol)) throw NumericError("normal matrix not positive definite");
        d = std::sqrt(d);
        a(j, j) = d;
        for (int i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (int k = 0; k < j; ++k) s -= a(i, k) * a(j, k);
            a(i, j) = s / d;
        }
    }
    // Forward then backward substitution.
    for (int i = 0; i < n; ++i) {
        double s = b[static_cast<std::size_t>(i)];
        for (int k = 0; k < i; ++k) s -= a(i, k) * b[static_cast<std::size_t>(k)];
        b[static_cast<std::size_t>(i)] = s / a(i, i);
    }
    for (int i = n - 1; i >= 0; --i) {
        double s = b[static_cast<std::size_t>(i)];
        for (int k = i + 1; k < n; ++k) s -= a(k, i) * b[static_cast<std::size_t>(k)];
        b[static_cast<std::size_t>(i)] = s / a(i, i);
    }
    return b;
}

std::vector<double> solve_least_squares(Matrix a, std::vector<double> b) {
    const int m = a.rows();
    const int n = a.cols();
    if (n == 0) return {};
    if (m < n) throw NumericError("least squares needs at least as many rows as unknowns");

    // Householder QR, applying reflections to b as we go.
    std::vector<double> v(static_cast<std::size_t>(m));
    double rmax = 0.0;
    for (int k = 0; k < n; ++k) {
        double norm = 0.0;
        for (int i = k; i < m; ++i) norm += a(i, k) * a(i, k);
        norm = std::sqrt(norm);
        if (norm == 0.0) throw NumericError("rank-deficient least-squares system");
        double alpha = a(k, k) > 0 ? -norm : norm;
        double vnorm_sq = 0.0;
        for (int i = k; i < m; ++i) {
            v[static_cast<std::size_t>(i)] = a(i, k) - (i == k ? alpha : 0.0);
            vnorm_sq += v[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)];
        }
        if (vnorm_sq == 0.0) throw NumericError("rank-deficient least-squares system");
        for (int j = k; j < n; ++j) {
            double dot = 0.0;
            for (int i = k; i < m; ++i) dot += v[static_cast<std::size_t>(i)] * a(i, j);
            double f = 2.0 * dot / vnorm_sq;
            for (int i = k; i < m; ++i) a(i, j) -= f * v[static_cast<std::size_t>(i)];
        }
        double dot = 0.0;
        for (int i = k; i < m; ++i) dot += v[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(i)];
        double f = 2.0 * dot / vnorm_sq;
        for (int i = k; i < m; ++i) b[static_cast<std::size_t>(i)] -= f * v[static_cast<std::size_t>(i)];
        rmax = std::max(rmax, std::abs(a(k, k)));
    }
    for (int k = 0; k < n; ++k)
        if (std::abs(a(k, k)) < rmax * 1e-14)
            throw NumericError("rank-deficient least-squares system");

    std::vector<double> x(static_cast<std::size_t>(n));
    for (int i = n - 1; i >= 0; --i) {
        double s = b[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < n; ++j) s -= a(i, j) * x[static_cast<std::size_t>(j)];
        x[static_cast<std::size_t>(i)] = s / a(i, i);
    }
    return x;
}

}  // namespace clickmodel::linalg
