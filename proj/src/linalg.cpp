#include "convexuq/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "convexuq/error.hpp"

namespace convexuq {

namespace {

constexpr int kMaxSweeps = 100;
constexpr double kOffDiagonalTolerance = 1e-12;
constexpr double kSymmetryTolerance = 1e-9;

double off_diagonal_norm(const Matrix& a) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j) sum += a(i, j) * a(i, j);
    return std::sqrt(sum);
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// Largest-magnitude entry made positive; ties go to the lowest index.
void normalize_sign(std::span<double> v) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (std::abs(v[i]) > std::abs(v[best])) best = i;
    if (v[best] < 0.0)
        for (double& x : v) x = -x;
}

// Removes the projection of `v` onto every row of `basis` in [0, count).
void orthogonalize(std::vector<double>& v, const Matrix& basis, std::size_t count) {
    for (std::size_t r = 0; r < count; ++r) {
        const double p = dot(v, basis.row(r));
        for (std::size_t k = 0; k < v.size(); ++k) v[k] -= p * basis(r, k);
    }
}

double norm(std::span<const double> v) { return std::sqrt(dot(v, v)); }

// Writes unit vector `v` into row `r` of `basis`, falling back to the first
// standard basis vector independent of the rows already filled when `v`
// carries no usable direction.
void place_component(Matrix& basis, std::size_t r, std::vector<double> v, bool usable) {
    const std::size_t d = basis.cols();
    if (usable) {
        orthogonalize(v, basis, r);
        const double len = norm(v);
        if (len > 1e-8) {
            for (std::size_t k = 0; k < d; ++k) basis(r, k) = v[k] / len;
            normalize_sign(basis.row(r));
            return;
        }
    }
    for (std::size_t j = 0; j < d; ++j) {
        std::vector<double> e(d, 0.0);
        e[j] = 1.0;
        orthogonalize(e, basis, r);
        const double len = norm(e);
        if (len > 0.5) {
            for (std::size_t k = 0; k < d; ++k) basis(r, k) = e[k] / len;
            normalize_sign(basis.row(r));
            return;
        }
    }
}

}  // namespace

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) return {};
    Matrix m(rows.size(), rows.front().size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != m.cols()) throw Error("ragged rows");
        std::copy(rows[r].begin(), rows[r].end(), m.row(r).begin());
    }
    return m;
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

double Matrix::frobenius_norm() const {
    double s = 0.0;
    for (double x : data_) s += x * x;
    return std::sqrt(s);
}

EmbeddingMatrix::EmbeddingMatrix(Matrix m) : m_(std::move(m)) {
    if (m_.rows() > 0 && m_.cols() < 2) throw Error("embedding dimension must be >= 2");
    for (double x : m_.data())
        if (!std::isfinite(x)) throw Error("invalid embedding");
}

EmbeddingMatrix EmbeddingMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
    return EmbeddingMatrix(Matrix::from_rows(rows));
}

CenteredData mean_center(const Matrix& m) {
    if (m.empty()) throw Error("empty input");
    const std::size_t n = m.rows(), d = m.cols();
    std::vector<double> mean(d, 0.0);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < d; ++c) mean[c] += m(r, c);
    for (double& x : mean) x /= static_cast<double>(n);

    Matrix centered(n, d);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < d; ++c) centered(r, c) = m(r, c) - mean[c];
    return {std::move(centered), std::move(mean)};
}

Matrix covariance(const Matrix& centered) {
    const std::size_t n = centered.rows(), d = centered.cols();
    if (n < 2) throw Error("insufficient rows for covariance");
    const double scale = 1.0 / static_cast<double>(n - 1);
    Matrix cov(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = i; j < d; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k) s += centered(k, i) * centered(k, j);
            cov(i, j) = s * scale;
            cov(j, i) = cov(i, j);
        }
    }
    return cov;
}

EigenDecomposition symmetric_eigen(const Matrix& input) {
    const std::size_t d = input.rows();
    if (input.cols() != d) throw Error("matrix not square");
    const double fro = input.frobenius_norm();
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j)
            if (std::abs(input(i, j) - input(j, i)) > kSymmetryTolerance * std::max(1.0, fro))
                throw Error("matrix not symmetric");

    Matrix a = input;
    Matrix v = Matrix::identity(d);
    const double threshold = kOffDiagonalTolerance * fro;

    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        if (off_diagonal_norm(a) <= threshold) break;
        for (std::size_t p = 0; p + 1 < d; ++p) {
            for (std::size_t q = p + 1; q < d; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                double t;
                if (std::abs(theta) > 1e150) {
                    t = 0.5 / theta;
                } else {
                    t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                }
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (std::size_t k = 0; k < d; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < d; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t k = 0; k < d; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(d);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });

    EigenDecomposition out{std::vector<double>(d), Matrix(d, d)};
    for (std::size_t i = 0; i < d; ++i) {
        out.values[i] = a(order[i], order[i]);
        for (std::size_t k = 0; k < d; ++k) out.vectors(i, k) = v(k, order[i]);
        normalize_sign(out.vectors.row(i));
    }
    return out;
}

ProjectedPoints pca_project_2d(const EmbeddingMatrix& em) {
    const Matrix& m = em.matrix();
    const std::size_t n = m.rows(), d = m.cols();
    if (n < 2 || d < 2) throw Error("pca underdetermined");

    auto [centered, mean] = mean_center(m);
    ProjectedPoints out;
    out.components = Matrix(2, d);

    if (d <= n) {
        const EigenDecomposition eig = symmetric_eigen(covariance(centered));
        for (std::size_t i = 0; i < 2; ++i) {
            out.eigenvalues[i] = std::max(0.0, eig.values[i]);
            std::vector<double> comp(eig.vectors.row(i).begin(), eig.vectors.row(i).end());
            place_component(out.components, i, std::move(comp), true);
        }
    } else {
        // Wide data: diagonalize the n x n Gram matrix and lift its
        // eigenvectors back through X^T. Same nonzero spectrum as the
        // d x d covariance at O(n^3) instead of O(d^3).
        Matrix gram(n, n);
        const double scale = 1.0 / static_cast<double>(n - 1);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) {
                gram(i, j) = dot(centered.row(i), centered.row(j)) * scale;
                gram(j, i) = gram(i, j);
            }
        const EigenDecomposition eig = symmetric_eigen(gram);
        const double top = std::max(0.0, eig.values[0]);
        for (std::size_t i = 0; i < 2; ++i) {
            const double lambda = std::max(0.0, eig.values[i]);
            out.eigenvalues[i] = lambda;
            std::vector<double> lifted(d, 0.0);
            for (std::size_t k = 0; k < n; ++k) {
                const double u = eig.vectors(i, k);
                for (std::size_t c = 0; c < d; ++c) lifted[c] += u * centered(k, c);
            }
            const bool usable = lambda > 1e-14 * top && lambda > 0.0;
            place_component(out.components, i, std::move(lifted), usable);
        }
    }

    out.points = Matrix(n, 2);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t i = 0; i < 2; ++i) out.points(r, i) = dot(centered.row(r), out.components.row(i));
    out.mean = std::move(mean);
    return out;
}

}  // namespace convexuq
