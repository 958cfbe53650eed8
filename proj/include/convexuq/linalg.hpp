#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace convexuq {

/// Dense row-major matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix from_rows(const std::vector<std::vector<double>>& rows);
    static Matrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    const std::vector<double>& data() const { return data_; }

    double frobenius_norm() const;

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// n x d response embeddings for one analysis cell. Construction enforces
/// finite entries and d >= 2.
class EmbeddingMatrix {
public:
    explicit EmbeddingMatrix(Matrix m);
    static EmbeddingMatrix from_rows(const std::vector<std::vector<double>>& rows);

    const Matrix& matrix() const { return m_; }
    std::size_t n() const { return m_.rows(); }
    std::size_t d() const { return m_.cols(); }

private:
    Matrix m_;
};

struct CenteredData {
    Matrix centered;
    std::vector<double> mean;
};

/// Result of the 2D principal-component projection.
struct ProjectedPoints {
    Matrix points;                        // n x 2
    double eigenvalues[2] = {0.0, 0.0};   // descending, >= 0
    Matrix components;                    // 2 x d, orthonormal rows
    std::vector<double> mean;             // centering offset, length d
};

struct EigenDecomposition {
    std::vector<double> values;  // descending
    Matrix vectors;              // row i is the eigenvector for values[i]
};

CenteredData mean_center(const Matrix& m);

/// Sample covariance (1/(n-1)) X^T X of already-centered rows.
Matrix covariance(const Matrix& centered);

/// Cyclic Jacobi eigendecomposition of a symmetric matrix. Eigenvectors are
/// sign-normalized so that their largest-magnitude entry is positive.
EigenDecomposition symmetric_eigen(const Matrix& a);

ProjectedPoints pca_project_2d(const EmbeddingMatrix& m);

}  // namespace convexuq
