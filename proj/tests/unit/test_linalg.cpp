#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "lcm/kmeans.hpp"
#include "lcm/rng.hpp"
#include "lcm/svd.hpp"

using namespace lcm;

namespace {

// Reference oracle, independent of the library path: cyclic Jacobi
// eigendecomposition of the Gram matrix of the smaller dimension.
std::vector<double> jacobi_singular_values(const Matrix& r) {
    Matrix a = r.cols() <= r.rows() ? Matrix(r.transpose() * r) : Matrix(r * r.transpose());
    const Index n = a.rows();
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (Index p = 0; p < n; ++p)
            for (Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
        if (off < 1e-24 * std::max(1.0, a.squaredNorm())) break;
        for (Index p = 0; p < n; ++p) {
            for (Index q = p + 1; q < n; ++q) {
                if (std::abs(a(p, q)) < 1e-300) continue;
                const double theta_ang = 0.5 * std::atan2(2.0 * a(p, q), a(q, q) - a(p, p));
                const double c = std::cos(theta_ang);
                const double s = std::sin(theta_ang);
                for (Index i = 0; i < n; ++i) {
                    const double aip = a(i, p);
                    const double aiq = a(i, q);
                    a(i, p) = c * aip - s * aiq;
                    a(i, q) = s * aip + c * aiq;
                }
                for (Index i = 0; i < n; ++i) {
                    const double api = a(p, i);
                    const double aqi = a(q, i);
                    a(p, i) = c * api - s * aqi;
                    a(q, i) = s * api + c * aqi;
                }
            }
        }
    }
    std::vector<double> vals(static_cast<size_t>(n));
    for (Index i = 0; i < n; ++i) vals[static_cast<size_t>(i)] = std::sqrt(std::max(a(i, i), 0.0));
    std::sort(vals.rbegin(), vals.rend());
    return vals;
}

Matrix random_matrix(Index n, Index j, Rng& rng) {
    Matrix m(n, j);
    for (Index i = 0; i < n; ++i)
        for (Index c = 0; c < j; ++c) m(i, c) = rng.normal();
    return m;
}

// Householder-based random orthonormal columns.
Matrix random_orthonormal(Index n, Index k, Rng& rng) {
    Matrix g = random_matrix(n, k, rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    return Matrix(qr.householderQ()).leftCols(k);
}

double kmeans_objective_of_partition(const Matrix& pts, const std::vector<int>& part, int k) {
    double obj = 0.0;
    for (int c = 0; c < k; ++c) {
        Vector mean = Vector::Zero(pts.cols());
        int count = 0;
        for (Index i = 0; i < pts.rows(); ++i) {
            if (part[static_cast<size_t>(i)] == c) {
                mean += pts.row(i).transpose();
                ++count;
            }
        }
        if (count == 0) continue;
        mean /= count;
        for (Index i = 0; i < pts.rows(); ++i) {
            if (part[static_cast<size_t>(i)] == c) {
                obj += (pts.row(i).transpose() - mean).squaredNorm();
            }
        }
    }
    return obj;
}

// Exhaustive best 2-partition objective for tiny point sets.
double best_two_partition(const Matrix& pts) {
    const Index n = pts.rows();
    double best = std::numeric_limits<double>::infinity();
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        std::vector<int> part(static_cast<size_t>(n));
        for (Index i = 0; i < n; ++i) part[static_cast<size_t>(i)] = (mask >> i) & 1u;
        best = std::min(best, kmeans_objective_of_partition(pts, part, 2));
    }
    return best;
}

}  // namespace

TEST_SUITE("linalg") {

TEST_CASE("truncated_svd recovers a planted spectrum") {
    Rng rng(17);
    const Matrix u = random_orthonormal(5, 3, rng);
    const Matrix v = random_orthonormal(4, 3, rng);
    Vector s(3);
    s << 3.0, 2.0, 1.0;
    const Matrix r = u * s.asDiagonal() * v.transpose();

    const TruncatedSvd svd = truncated_svd(r, 2);
    CHECK(svd.sigma(0) == doctest::Approx(3.0).epsilon(1e-8));
    CHECK(svd.sigma(1) == doctest::Approx(2.0).epsilon(1e-8));
    CHECK((svd.u.transpose() * svd.u - Matrix::Identity(2, 2)).norm() < 1e-8);
    CHECK((svd.v.transpose() * svd.v - Matrix::Identity(2, 2)).norm() < 1e-8);
    for (Index i = 0; i < 2; ++i) {
        CHECK((r * svd.v.col(i) - svd.sigma(i) * svd.u.col(i)).norm() < 1e-8 * svd.sigma(0));
    }
}

TEST_CASE("truncated_svd of a rank-1 outer product") {
    Rng rng(21);
    Vector a = random_matrix(30, 1, rng).col(0);
    Vector b = random_matrix(12, 1, rng).col(0);
    const Matrix r = a * b.transpose();
    const TruncatedSvd svd = truncated_svd(r, 1);
    CHECK(svd.sigma(0) == doctest::Approx(a.norm() * b.norm()).epsilon(1e-10));
}

TEST_CASE("truncated_svd matches the Jacobi oracle on random input") {
    Rng rng(33);
    const Matrix r = random_matrix(50, 30, rng);
    const TruncatedSvd svd = truncated_svd(r, 5);
    const auto oracle = jacobi_singular_values(r);
    for (Index i = 0; i < 5; ++i) {
        CHECK(svd.sigma(i) ==
              doctest::Approx(oracle[static_cast<size_t>(i)]).epsilon(1e-6));
    }
    // Reconstruction optimality: top-k energy matches the oracle.
    double lib = 0.0, ref = 0.0;
    for (Index i = 0; i < 5; ++i) {
        lib += svd.sigma(i) * svd.sigma(i);
        ref += oracle[static_cast<size_t>(i)] * oracle[static_cast<size_t>(i)];
    }
    CHECK(lib == doctest::Approx(ref).epsilon(1e-6));
}

TEST_CASE("randomized path agrees with the dense path") {
    Rng rng(41);
    // Low-rank + small noise, the regime the randomized method targets.
    const Matrix u = random_orthonormal(120, 4, rng);
    const Matrix v = random_orthonormal(90, 4, rng);
    Vector s(4);
    s << 50.0, 30.0, 20.0, 10.0;
    Matrix r = u * s.asDiagonal() * v.transpose() + 0.01 * random_matrix(120, 90, rng);

    SvdOptions dense_opts;
    const TruncatedSvd dense = truncated_svd(r, 4, dense_opts);

    SvdOptions rand_opts;
    rand_opts.dense_limit = 0;  // force the randomized path
    rand_opts.seed = 5;
    rand_opts.tol = 1e-8;
    const TruncatedSvd randomized = truncated_svd(r, 4, rand_opts);

    for (Index i = 0; i < 4; ++i) {
        CHECK(randomized.sigma(i) == doctest::Approx(dense.sigma(i)).epsilon(1e-6));
    }
    CHECK(randomized.residual <= rand_opts.tol);

    // Determinism given the seed.
    const TruncatedSvd again = truncated_svd(r, 4, rand_opts);
    CHECK(again.u == randomized.u);
    CHECK(again.sigma == randomized.sigma);
}

TEST_CASE("non-convergence carries the achieved residual") {
    Rng rng(47);
    const Matrix r = random_matrix(40, 30, rng);  // full noise spectrum
    SvdOptions opts;
    opts.dense_limit = 0;
    opts.tol = 1e-15;  // unreachable for closely spaced directions
    opts.max_iter = 1;
    try {
        truncated_svd(r, 10, opts);
        FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& e) {
        CHECK(e.residual() > 0.0);
        CHECK(e.residual() < 1.0);
    }
}

TEST_CASE("all_singular_values") {
    CHECK(all_singular_values(Matrix::Zero(4, 3), 3).isZero());
    CHECK(all_singular_values(Matrix::Identity(3, 3), 3).isApprox(Vector::Ones(3)));

    Rng rng(55);
    const Matrix r = random_matrix(24, 18, rng);
    const Vector sv = all_singular_values(r, 18);
    const auto oracle = jacobi_singular_values(r);
    for (Index i = 0; i < 18; ++i) {
        CHECK(sv(i) == doctest::Approx(oracle[static_cast<size_t>(i)]).epsilon(1e-6));
    }
    CHECK_THROWS_AS(all_singular_values(r, 19), std::invalid_argument);
    CHECK_THROWS_AS(truncated_svd(r, 0), std::invalid_argument);
}

TEST_CASE("kmeans recovers duplicated locations exactly") {
    Matrix pts(6, 2);
    pts << 0, 0, 0, 0, 5, 5, 5, 5, -3, 4, -3, 4;
    const KMeansResult res = kmeans(pts, 3);
    CHECK(res.objective == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(res.assignments[0] == res.assignments[1]);
    CHECK(res.assignments[2] == res.assignments[3]);
    CHECK(res.assignments[4] == res.assignments[5]);
    CHECK(res.assignments[0] != res.assignments[2]);
    CHECK(res.assignments[2] != res.assignments[4]);
}

TEST_CASE("kmeans with k=1 returns the mean") {
    Rng rng(60);
    const Matrix pts = random_matrix(40, 3, rng);
    const KMeansResult res = kmeans(pts, 1);
    CHECK((res.centers.row(0).transpose() - pts.colwise().mean().transpose()).norm() < 1e-10);
    const double total = (pts.rowwise() - pts.colwise().mean()).squaredNorm();
    CHECK(res.objective == doctest::Approx(total).epsilon(1e-10));
}

TEST_CASE("kmeans matches exhaustive 2-partition search on tiny inputs") {
    SUBCASE("well separated 1-d clusters") {
        Matrix pts(12, 1);
        pts << 0.0, 0.1, 0.2, 5.0, 5.1, 5.2, 0.05, 0.15, 5.05, 5.15, 0.12, 5.12;
        KMeansOptions opts;
        opts.restarts = 20;
        const KMeansResult res = kmeans(pts, 2, opts);
        CHECK(res.objective == doctest::Approx(best_two_partition(pts)).epsilon(1e-9));
    }
    SUBCASE("random point sets") {
        Rng rng(61);
        for (int trial = 0; trial < 8; ++trial) {
            const Matrix pts = random_matrix(10, 2, rng);
            KMeansOptions opts;
            opts.restarts = 40;
            opts.seed = 100 + static_cast<std::uint64_t>(trial);
            const KMeansResult res = kmeans(pts, 2, opts);
            CHECK(res.objective == doctest::Approx(best_two_partition(pts)).epsilon(1e-9));
        }
    }
}

TEST_CASE("kmeans survives fewer distinct locations than clusters") {
    // Only two distinct points but k=3: the empty-cluster re-seed keeps the
    // run well-defined and the optimum (objective 0) is still reached.
    Matrix pts(4, 1);
    pts << 0.0, 0.0, 0.0, 10.0;
    const KMeansResult res = kmeans(pts, 3);
    CHECK(res.objective == doctest::Approx(0.0));
    CHECK(res.assignments[0] == res.assignments[1]);
    CHECK(res.assignments[0] == res.assignments[2]);
    CHECK(res.assignments[0] != res.assignments[3]);
}

TEST_CASE("kmeans objective consistency and restart monotonicity") {
    Rng rng(62);
    const Matrix pts = random_matrix(60, 4, rng);
    KMeansOptions opts;
    opts.seed = 7;
    const KMeansResult res = kmeans(pts, 4, opts);

    // Recomputed objective matches, and every point sits at its nearest center.
    double recomputed = 0.0;
    for (Index i = 0; i < pts.rows(); ++i) {
        const int assigned = res.assignments[i] - 1;
        double best = std::numeric_limits<double>::infinity();
        for (int c = 0; c < 4; ++c) {
            best = std::min(best, (pts.row(i) - res.centers.row(c)).squaredNorm());
        }
        const double mine = (pts.row(i) - res.centers.row(assigned)).squaredNorm();
        CHECK(mine == doctest::Approx(best).epsilon(1e-8));
        recomputed += mine;
    }
    CHECK(recomputed == doctest::Approx(res.objective).epsilon(1e-8));

    double prev = std::numeric_limits<double>::infinity();
    for (int restarts : {1, 3, 10}) {
        KMeansOptions o;
        o.restarts = restarts;
        o.seed = 7;
        const double obj = kmeans(pts, 4, o).objective;
        CHECK(obj <= prev * (1 + 1e-12));
        prev = obj;
    }
    CHECK_THROWS_AS(kmeans(pts, 61), std::invalid_argument);
}

}  // TEST_SUITE
