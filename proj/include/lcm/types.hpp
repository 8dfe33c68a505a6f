#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lcm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Default clamp for probabilities used inside logarithms.
inline constexpr double kClampEps = 1e-6;

/// Thrown when an iterative solver exhausts its iteration budget.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& msg, double residual)
        : std::runtime_error(msg), residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

/// Thrown when a class-wise estimate has no members for some class.
class EmptyClassError : public std::runtime_error {
public:
    explicit EmptyClassError(int class_index)
        : std::runtime_error("class " + std::to_string(class_index) + " has no members"),
          class_index_(class_index) {}
    int class_index() const { return class_index_; }

private:
    int class_index_;
};

/// Thrown by file ingestion with the offending 1-based row/column.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, long row, long col)
        : std::runtime_error(msg), row_(row), col_(col) {}
    long row() const { return row_; }
    long col() const { return col_; }

private:
    long row_;
    long col_;
};

/// N x J binary observations. Missing cells are stored as NaN and must be
/// imputed before any model fit (see ingest_csv).
class ResponseMatrix {
public:
    ResponseMatrix() = default;

    explicit ResponseMatrix(Matrix cells) : cells_(std::move(cells)) {
        if (cells_.rows() < 1 || cells_.cols() < 1) {
            throw std::invalid_argument("ResponseMatrix: need at least one row and one column");
        }
        for (Index i = 0; i < cells_.rows(); ++i) {
            for (Index j = 0; j < cells_.cols(); ++j) {
                const double v = cells_(i, j);
                if (!std::isnan(v) && v != 0.0 && v != 1.0) {
                    throw std::invalid_argument("ResponseMatrix: cell (" + std::to_string(i) +
                                                "," + std::to_string(j) +
                                                ") is neither 0, 1 nor missing");
                }
            }
        }
    }

    Index rows() const { return cells_.rows(); }
    Index cols() const { return cells_.cols(); }
    double operator()(Index i, Index j) const { return cells_(i, j); }

    const Matrix& dense() const { return cells_; }

    bool fully_observed() const { return !cells_.hasNaN(); }

    Index missing_count() const {
        Index c = 0;
        for (Index i = 0; i < cells_.rows(); ++i)
            for (Index j = 0; j < cells_.cols(); ++j)
                if (std::isnan(cells_(i, j))) ++c;
        return c;
    }

    /// Sub-matrix restricted to the given row indices (0-based).
    ResponseMatrix rows_subset(const std::vector<Index>& idx) const {
        Matrix out(static_cast<Index>(idx.size()), cells_.cols());
        for (Index r = 0; r < out.rows(); ++r) out.row(r) = cells_.row(idx[static_cast<size_t>(r)]);
        return ResponseMatrix(std::move(out));
    }

private:
    Matrix cells_;
};

/// Length-N class assignment with entries in 1..K.
class LabelVector {
public:
    LabelVector() = default;

    LabelVector(std::vector<int> labels, int k) : labels_(std::move(labels)), k_(k) {
        if (k_ < 1) throw std::invalid_argument("LabelVector: k must be >= 1");
        for (int v : labels_) {
            if (v < 1 || v > k_) {
                throw std::invalid_argument("LabelVector: label " + std::to_string(v) +
                                            " outside 1.." + std::to_string(k_));
            }
        }
    }

    Index size() const { return static_cast<Index>(labels_.size()); }
    int k() const { return k_; }
    int operator[](Index i) const { return labels_[static_cast<size_t>(i)]; }

    const std::vector<int>& values() const { return labels_; }

    /// Member count per class (index c holds the size of class c+1).
    std::vector<Index> class_counts() const {
        std::vector<Index> counts(static_cast<size_t>(k_), 0);
        for (int v : labels_) ++counts[static_cast<size_t>(v - 1)];
        return counts;
    }

    bool has_empty_class() const {
        for (Index c : class_counts())
            if (c == 0) return true;
        return false;
    }

    friend bool operator==(const LabelVector& a, const LabelVector& b) {
        return a.k_ == b.k_ && a.labels_ == b.labels_;
    }

private:
    std::vector<int> labels_;
    int k_ = 1;
};

/// J x K matrix of class-conditional positive-response probabilities.
class ItemParams {
public:
    ItemParams() = default;

    explicit ItemParams(Matrix theta) : theta_(std::move(theta)) {
        if (theta_.rows() < 1 || theta_.cols() < 1) {
            throw std::invalid_argument("ItemParams: need at least one item and one class");
        }
        if ((theta_.array() < 0.0).any() || (theta_.array() > 1.0).any() || theta_.hasNaN()) {
            throw std::invalid_argument("ItemParams: entries must lie in [0,1]");
        }
    }

    Index items() const { return theta_.rows(); }
    Index classes() const { return theta_.cols(); }
    double operator()(Index j, Index k) const { return theta_(j, k); }

    const Matrix& dense() const { return theta_; }

    /// Copy with every entry clamped to [eps, 1-eps].
    ItemParams clamped(double eps = kClampEps) const {
        ItemParams out;
        out.theta_ = theta_.array().max(eps).min(1.0 - eps).matrix();
        return out;
    }

private:
    Matrix theta_;
};

/// Nonnegative class weights summing to one.
class MixingProportions {
public:
    MixingProportions() = default;

    explicit MixingProportions(Vector p) : p_(std::move(p)) {
        if (p_.size() < 1) throw std::invalid_argument("MixingProportions: empty");
        if ((p_.array() < 0.0).any()) {
            throw std::invalid_argument("MixingProportions: negative entry");
        }
        if (std::abs(p_.sum() - 1.0) > 1e-12) {
            throw std::invalid_argument("MixingProportions: entries must sum to 1");
        }
    }

    Index size() const { return p_.size(); }
    double operator[](Index k) const { return p_(k); }
    const Vector& dense() const { return p_; }

private:
    Vector p_;
};

/// Generator settings recorded with simulated data.
struct GenSpec {
    Index n = 0;
    Index j = 0;
    int k = 0;
    double beta_a = 1.0;
    double beta_b = 1.0;
};

/// Simulated data bundled with its ground truth.
struct ModelInstance {
    LabelVector truth_labels;
    ItemParams truth_theta;
    ResponseMatrix responses;
    std::uint64_t seed = 0;
    GenSpec gen_spec;
};

enum class FitFailure { none, empty_class, numeric };

inline const char* to_string(FitFailure f) {
    switch (f) {
        case FitFailure::none: return "none";
        case FitFailure::empty_class: return "empty_class";
        case FitFailure::numeric: return "numeric";
    }
    return "unknown";
}

}  // namespace lcm
