#include "lcm/svd.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>

#include "lcm/rng.hpp"

namespace lcm {

namespace {

// Orthonormal extension for zero singular directions: canonical basis vectors
// orthogonalized against all previous columns. Deterministic.
void fill_null_columns(Matrix& q, Index from) {
    const Index n = q.rows();
    Index next_basis = 0;
    for (Index c = from; c < q.cols(); ++c) {
        while (true) {
            if (next_basis >= n) return;  // cannot happen for k <= min(N,J)
            Vector cand = Vector::Zero(n);
            cand(next_basis++) = 1.0;
            for (Index p = 0; p < c; ++p) cand -= q.col(p).dot(cand) * q.col(p);
            const double norm = cand.norm();
            if (norm > 1e-8) {
                q.col(c) = cand / norm;
                break;
            }
        }
    }
}

TruncatedSvd dense_gram_svd(const Matrix& r, Index k) {
    const Index n = r.rows();
    const Index j = r.cols();
    TruncatedSvd out;
    out.sigma = Vector::Zero(k);
    out.u = Matrix::Zero(n, k);
    out.v = Matrix::Zero(j, k);

    const bool tall = j <= n;  // eigendecompose the smaller Gram matrix
    const Matrix gram = tall ? Matrix(r.transpose() * r) : Matrix(r * r.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
    const Index m = gram.rows();

    // Eigenvalues come back ascending.
    for (Index i = 0; i < k; ++i) {
        const Index src = m - 1 - i;
        const double lambda = std::max(es.eigenvalues()(src), 0.0);
        out.sigma(i) = std::sqrt(lambda);
        if (tall) {
            out.v.col(i) = es.eigenvectors().col(src);
        } else {
            out.u.col(i) = es.eigenvectors().col(src);
        }
    }

    // Recover the other factor as R v / sigma (or R^T u / sigma). Directions
    // with sigma ~ 0 get a deterministic orthonormal completion instead; they
    // pair with a zero singular value so the residual contract still holds.
    const double sigma1 = out.sigma(0);
    const double cutoff = sigma1 * 1e-13;
    Index rank_kept = k;
    for (Index i = 0; i < k; ++i) {
        if (out.sigma(i) <= cutoff) {
            rank_kept = i;
            break;
        }
        if (tall) {
            out.u.col(i) = r * out.v.col(i) / out.sigma(i);
        } else {
            out.v.col(i) = r.transpose() * out.u.col(i) / out.sigma(i);
        }
    }
    if (rank_kept < k) {
        fill_null_columns(tall ? out.u : out.v, rank_kept);
    }
    out.residual = 0.0;
    for (Index i = 0; i < k; ++i) {
        if (out.sigma(i) > cutoff && sigma1 > 0.0) {
            const double res = (r * out.v.col(i) - out.sigma(i) * out.u.col(i)).norm() / sigma1;
            out.residual = std::max(out.residual, res);
        }
    }
    return out;
}

Matrix thin_q(const Matrix& y) {
    Eigen::HouseholderQR<Matrix> qr(y);
    Matrix q = qr.householderQ() * Matrix::Identity(y.rows(), y.cols());
    return q;
}

TruncatedSvd randomized_svd(const Matrix& r, Index k, const SvdOptions& opts) {
    const Index n = r.rows();
    const Index j = r.cols();
    const Index l = std::min<Index>(k + opts.oversampling, std::min(n, j));

    Rng rng = Rng::stream(opts.seed, 0x53564453ull);  // svd sampling stream
    Matrix omega(j, l);
    for (Index c = 0; c < l; ++c)
        for (Index row = 0; row < j; ++row) omega(row, c) = rng.normal();

    Matrix q = thin_q(r * omega);
    int rounds = 0;
    double achieved = std::numeric_limits<double>::infinity();
    TruncatedSvd out;
    while (true) {
        for (int p = 0; p < opts.power_iters; ++p) {
            q = thin_q(r.transpose() * q);
            q = thin_q(r * q);
        }
        const Matrix b = q.transpose() * r;  // l x J
        Eigen::JacobiSVD<Matrix> small(b, Eigen::ComputeThinU | Eigen::ComputeThinV);

        out.sigma = small.singularValues().head(k);
        out.u = q * small.matrixU().leftCols(k);
        out.v = small.matrixV().leftCols(k);

        const double sigma1 = out.sigma(0);
        achieved = 0.0;
        for (Index i = 0; i < k; ++i) {
            if (sigma1 > 0.0 && out.sigma(i) > opts.tol * sigma1) {
                const double res =
                    (r * out.v.col(i) - out.sigma(i) * out.u.col(i)).norm() / sigma1;
                achieved = std::max(achieved, res);
            }
        }
        out.residual = achieved;
        if (achieved <= opts.tol || sigma1 == 0.0) return out;
        if (++rounds >= opts.max_iter) {
            throw ConvergenceError("truncated_svd: randomized path did not reach tolerance",
                                   achieved);
        }
    }
}

}  // namespace

TruncatedSvd truncated_svd(const Matrix& r, Index k, const SvdOptions& opts) {
    const Index min_dim = std::min(r.rows(), r.cols());
    if (k < 1 || k > min_dim) {
        throw std::invalid_argument("truncated_svd: k out of range");
    }
    if (min_dim <= opts.dense_limit) return dense_gram_svd(r, k);
    return randomized_svd(r, k, opts);
}

Vector all_singular_values(const Matrix& r, Index m, const SvdOptions& opts) {
    const Index min_dim = std::min(r.rows(), r.cols());
    if (m < 1 || m > min_dim) {
        throw std::invalid_argument("all_singular_values: m out of range");
    }
    // Values-only work keeps the dense eigensolver practical far beyond the
    // factor path's cutoff, and it avoids chasing Ritz-vector residuals in
    // the closely spaced noise bulk of large matrices.
    if (min_dim <= std::max<Index>(opts.dense_limit, kDenseValuesLimit)) {
        const bool tall = r.cols() <= r.rows();
        const Matrix gram = tall ? Matrix(r.transpose() * r) : Matrix(r * r.transpose());
        Eigen::SelfAdjointEigenSolver<Matrix> es(gram, Eigen::EigenvaluesOnly);
        Vector out(m);
        const Index sz = gram.rows();
        for (Index i = 0; i < m; ++i) out(i) = std::sqrt(std::max(es.eigenvalues()(sz - 1 - i), 0.0));
        return out;
    }
    return truncated_svd(r, m, opts).sigma;
}

}  // namespace lcm
