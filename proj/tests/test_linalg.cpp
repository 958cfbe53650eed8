#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "convexuq/error.hpp"
#include "convexuq/linalg.hpp"
#include "oracles.hpp"

using namespace convexuq;

namespace {

Matrix random_matrix(std::mt19937_64& rng, std::size_t n, std::size_t d, double scale = 1.0) {
    std::normal_distribution<double> g(0.0, scale);
    Matrix m(n, d);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < d; ++c) m(r, c) = g(rng);
    return m;
}

double column_variance(const Matrix& m, std::size_t c) {
    double mu = 0.0;
    for (std::size_t r = 0; r < m.rows(); ++r) mu += m(r, c);
    mu /= static_cast<double>(m.rows());
    double s = 0.0;
    for (std::size_t r = 0; r < m.rows(); ++r) s += (m(r, c) - mu) * (m(r, c) - mu);
    return s / static_cast<double>(m.rows() - 1);
}

}  // namespace

TEST_CASE("mean_center") {
    SUBCASE("symmetric pair") {
        auto [c, mean] = mean_center(Matrix::from_rows({{1, 1}, {3, 3}}));
        CHECK(c == Matrix::from_rows({{-1, -1}, {1, 1}}));
        CHECK(mean == std::vector<double>{2, 2});
    }
    SUBCASE("single row") {
        auto [c, mean] = mean_center(Matrix::from_rows({{5, 7}}));
        CHECK(c == Matrix::from_rows({{0, 0}}));
        CHECK(mean == std::vector<double>{5, 7});
    }
    SUBCASE("random rows have zero column sums") {
        std::mt19937_64 rng(1);
        auto [c, mean] = mean_center(random_matrix(rng, 10, 4, 5.0));
        for (std::size_t j = 0; j < 4; ++j) {
            double s = 0.0;
            for (std::size_t r = 0; r < 10; ++r) s += c(r, j);
            CHECK(std::abs(s) < 1e-8);
        }
    }
    SUBCASE("empty") { CHECK_THROWS_WITH_AS(mean_center(Matrix{}), "empty input", Error); }
}

TEST_CASE("covariance") {
    CHECK(covariance(Matrix::from_rows({{-1, 0}, {1, 0}})) == Matrix::from_rows({{2, 0}, {0, 0}}));
    CHECK(covariance(Matrix::from_rows({{-1, -1}, {1, 1}})) == Matrix::from_rows({{2, 2}, {2, 2}}));
    CHECK_THROWS_WITH_AS(covariance(Matrix::from_rows({{0, 0}})), "insufficient rows for covariance", Error);

    std::mt19937_64 rng(2);
    const auto centered = mean_center(random_matrix(rng, 20, 5)).centered;
    const Matrix c = covariance(centered);
    const Matrix ref = oracle::naive_covariance(centered);
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(c(i, i) >= 0.0);
        for (std::size_t j = 0; j < 5; ++j) {
            CHECK(std::abs(c(i, j) - ref(i, j)) < 1e-10);
            CHECK(std::abs(c(i, j) - c(j, i)) < 1e-12);
        }
    }
}

TEST_CASE("symmetric_eigen") {
    SUBCASE("identity") {
        const auto e = symmetric_eigen(Matrix::identity(3));
        CHECK(e.values == std::vector<double>{1, 1, 1});
    }
    SUBCASE("diagonal") {
        Matrix a(3, 3);
        a(0, 0) = 5;
        a(1, 1) = 2;
        a(2, 2) = 9;
        const auto e = symmetric_eigen(a);
        CHECK(e.values == std::vector<double>{9, 5, 2});
        CHECK(e.vectors == Matrix::from_rows({{0, 0, 1}, {1, 0, 0}, {0, 1, 0}}));
    }
    SUBCASE("asymmetric rejected") {
        Matrix a = Matrix::identity(2);
        a(0, 1) = 0.5;
        CHECK_THROWS_WITH_AS(symmetric_eigen(a), "matrix not symmetric", Error);
    }
    SUBCASE("random 6x6 against power iteration") {
        std::mt19937_64 rng(3);
        for (int trial = 0; trial < 5; ++trial) {
            Matrix b = random_matrix(rng, 6, 6);
            Matrix a(6, 6);
            for (std::size_t i = 0; i < 6; ++i)
                for (std::size_t j = 0; j < 6; ++j) a(i, j) = b(i, j) + b(j, i);
            const auto e = symmetric_eigen(a);
            auto ref = oracle::power_iteration(a, 6);
            std::vector<std::size_t> order{0, 1, 2, 3, 4, 5};
            std::sort(order.begin(), order.end(), [&](auto x, auto y) { return ref.values[x] > ref.values[y]; });
            const double norm = a.frobenius_norm();
            for (std::size_t i = 0; i < 6; ++i) {
                CHECK(e.values[i] == doctest::Approx(ref.values[order[i]]).epsilon(1e-6));
                // A v = lambda v
                for (std::size_t r = 0; r < 6; ++r) {
                    double av = 0.0;
                    for (std::size_t c = 0; c < 6; ++c) av += a(r, c) * e.vectors(i, c);
                    CHECK(std::abs(av - e.values[i] * e.vectors(i, r)) < 1e-7 * norm);
                }
                for (std::size_t j = 0; j < 6; ++j) {
                    double dot = 0.0;
                    for (std::size_t c = 0; c < 6; ++c) dot += e.vectors(i, c) * e.vectors(j, c);
                    CHECK(std::abs(dot - (i == j ? 1.0 : 0.0)) < 1e-8);
                }
            }
            for (std::size_t i = 0; i + 1 < 6; ++i) CHECK(e.values[i] >= e.values[i + 1]);
        }
    }
    SUBCASE("sign convention: largest entry positive") {
        Matrix a = Matrix::from_rows({{2, -1}, {-1, 2}});
        const auto e = symmetric_eigen(a);
        for (std::size_t i = 0; i < 2; ++i) {
            const auto row = e.vectors.row(i);
            std::size_t best = std::abs(row[1]) > std::abs(row[0]) ? 1 : 0;
            CHECK(row[best] > 0.0);
        }
    }
}

TEST_CASE("pca_project_2d") {
    SUBCASE("rank-2 square embedded in R^4 is an isometry") {
        std::mt19937_64 rng(4);
        const auto iso = oracle::random_isometry(rng, 4);
        const std::vector<Point2> square{{0, 0}, {2, 0}, {2, 2}, {0, 2}};
        std::vector<std::vector<double>> rows;
        for (const auto& p : square) rows.push_back(iso.apply(p));
        const auto proj = pca_project_2d(EmbeddingMatrix::from_rows(rows));
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) {
                const double d2 = std::hypot(square[i].x - square[j].x, square[i].y - square[j].y);
                const double dp = std::hypot(proj.points(i, 0) - proj.points(j, 0), proj.points(i, 1) - proj.points(j, 1));
                CHECK(std::abs(d2 - dp) < 1e-8);
            }
        // Reconstruction: mean + points * components recovers the input.
        for (std::size_t r = 0; r < 4; ++r)
            for (std::size_t k = 0; k < 4; ++k) {
                const double rec = proj.mean[k] + proj.points(r, 0) * proj.components(0, k) +
                                   proj.points(r, 1) * proj.components(1, k);
                CHECK(std::abs(rec - rows[r][k]) < 1e-8);
            }
    }
    SUBCASE("identical rows") {
        const auto proj = pca_project_2d(EmbeddingMatrix::from_rows({{1, 2, 3}, {1, 2, 3}, {1, 2, 3}}));
        CHECK(proj.eigenvalues[0] == 0.0);
        CHECK(proj.eigenvalues[1] == 0.0);
        for (double x : proj.points.data()) CHECK(x == 0.0);
    }
    SUBCASE("variance capture against power iteration") {
        std::mt19937_64 rng(5);
        const Matrix m = random_matrix(rng, 30, 8);
        const auto proj = pca_project_2d(EmbeddingMatrix(m));
        const auto ref = oracle::power_iteration(covariance(mean_center(m).centered), 2);
        CHECK(column_variance(proj.points, 0) + column_variance(proj.points, 1) ==
              doctest::Approx(ref.values[0] + ref.values[1]).epsilon(1e-6));
        for (std::size_t i = 0; i < 2; ++i) CHECK(column_variance(proj.points, i) == doctest::Approx(proj.eigenvalues[i]).epsilon(1e-7));
    }
    SUBCASE("wide data (d > n) takes the Gram route and agrees with covariance") {
        std::mt19937_64 rng(6);
        const Matrix m = random_matrix(rng, 12, 40);
        const auto proj = pca_project_2d(EmbeddingMatrix(m));
        const auto ref = oracle::power_iteration(covariance(mean_center(m).centered), 2);
        for (std::size_t i = 0; i < 2; ++i) {
            CHECK(proj.eigenvalues[i] == doctest::Approx(ref.values[i]).epsilon(1e-6));
            double dot = 0.0;
            for (std::size_t k = 0; k < 40; ++k) dot += proj.components(i, k) * ref.vectors[i][k];
            CHECK(std::abs(dot) == doctest::Approx(1.0).epsilon(1e-6));
        }
    }
    SUBCASE("translation invariance and determinism") {
        std::mt19937_64 rng(7);
        Matrix m = random_matrix(rng, 15, 6);
        const auto a = pca_project_2d(EmbeddingMatrix(m));
        const auto again = pca_project_2d(EmbeddingMatrix(m));
        CHECK(a.points == again.points);
        for (std::size_t r = 0; r < m.rows(); ++r)
            for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) += 100.0 + static_cast<double>(c);
        const auto b = pca_project_2d(EmbeddingMatrix(m));
        for (std::size_t i = 0; i < a.points.data().size(); ++i) CHECK(std::abs(a.points.data()[i] - b.points.data()[i]) < 1e-8);
    }
    SUBCASE("errors") {
        CHECK_THROWS_WITH_AS(pca_project_2d(EmbeddingMatrix::from_rows({{1, 2}})), "pca underdetermined", Error);
        CHECK_THROWS_WITH_AS(EmbeddingMatrix::from_rows({{1}, {2}}), "embedding dimension must be >= 2", Error);
        CHECK_THROWS_WITH_AS(EmbeddingMatrix::from_rows({{1, NAN}, {2, 3}}), "invalid embedding", Error);
    }
}

TEST_CASE("degenerate spectrum: projector onto the top-2 eigenspace is basis independent") {
    // Isotropic data in a 2D plane of R^5: any orthonormal basis of the plane is valid.
    std::mt19937_64 rng(8);
    const auto iso = oracle::random_isometry(rng, 5);
    std::vector<std::vector<double>> rows;
    for (const Point2 p : {Point2{1, 0}, Point2{-1, 0}, Point2{0, 1}, Point2{0, -1}}) rows.push_back(iso.apply(p));
    const auto proj = pca_project_2d(EmbeddingMatrix::from_rows(rows));
    CHECK(proj.eigenvalues[0] == doctest::Approx(proj.eigenvalues[1]));
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j) {
            const double p = proj.components(0, i) * proj.components(0, j) + proj.components(1, i) * proj.components(1, j);
            const double q = iso.u[i] * iso.u[j] + iso.v[i] * iso.v[j];
            CHECK(std::abs(p - q) < 1e-8);
        }
}
