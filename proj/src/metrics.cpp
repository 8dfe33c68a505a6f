#include "lcm/metrics.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace lcm {

double raw_disagreement(const LabelVector& s, const LabelVector& s_star) {
    if (s.size() != s_star.size()) {
        throw std::invalid_argument("raw_disagreement: length mismatch");
    }
    Index mismatches = 0;
    for (Index i = 0; i < s.size(); ++i) {
        if (s[i] != s_star[i]) ++mismatches;
    }
    return static_cast<double>(mismatches) / static_cast<double>(s.size());
}

std::vector<int> solve_assignment(const Matrix& cost) {
    // Shortest augmenting path with potentials (Jonker-Volgenant style).
    const int n = static_cast<int>(cost.rows());
    if (cost.cols() != n) throw std::invalid_argument("solve_assignment: cost must be square");
    const double inf = std::numeric_limits<double>::infinity();

    std::vector<double> u(static_cast<size_t>(n) + 1, 0.0), v(static_cast<size_t>(n) + 1, 0.0);
    std::vector<int> match(static_cast<size_t>(n) + 1, 0);  // match[col] = row, 1-based
    std::vector<int> way(static_cast<size_t>(n) + 1, 0);

    for (int i = 1; i <= n; ++i) {
        match[0] = i;
        int j0 = 0;
        std::vector<double> minv(static_cast<size_t>(n) + 1, inf);
        std::vector<char> used(static_cast<size_t>(n) + 1, 0);
        do {
            used[static_cast<size_t>(j0)] = 1;
            const int i0 = match[static_cast<size_t>(j0)];
            double delta = inf;
            int j1 = -1;
            for (int j = 1; j <= n; ++j) {
                if (used[static_cast<size_t>(j)]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[static_cast<size_t>(i0)] -
                                   v[static_cast<size_t>(j)];
                if (cur < minv[static_cast<size_t>(j)]) {
                    minv[static_cast<size_t>(j)] = cur;
                    way[static_cast<size_t>(j)] = j0;
                }
                if (minv[static_cast<size_t>(j)] < delta) {
                    delta = minv[static_cast<size_t>(j)];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[static_cast<size_t>(j)]) {
                    u[static_cast<size_t>(match[static_cast<size_t>(j)])] += delta;
                    v[static_cast<size_t>(j)] -= delta;
                } else {
                    minv[static_cast<size_t>(j)] -= delta;
                }
            }
            j0 = j1;
        } while (match[static_cast<size_t>(j0)] != 0);
        do {
            const int j1 = way[static_cast<size_t>(j0)];
            match[static_cast<size_t>(j0)] = match[static_cast<size_t>(j1)];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<int> row_to_col(static_cast<size_t>(n), -1);
    for (int j = 1; j <= n; ++j) row_to_col[static_cast<size_t>(match[static_cast<size_t>(j)] - 1)] = j - 1;
    return row_to_col;
}

double hamming_loss(const LabelVector& s, const LabelVector& s_star) {
    if (s.size() != s_star.size()) throw std::invalid_argument("hamming_loss: length mismatch");
    if (s.k() != s_star.k()) throw std::invalid_argument("hamming_loss: class count mismatch");

    const int k = s.k();
    const Index n = s.size();

    // counts(a, b) = #{ i : s_i = a+1, s*_i = b+1 }
    Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(k, k);
    for (Index i = 0; i < n; ++i) counts(s[i] - 1, s_star[i] - 1) += 1.0;

    double max_matches = 0.0;
    if (k <= 8) {
        std::vector<int> perm(static_cast<size_t>(k));
        std::iota(perm.begin(), perm.end(), 0);
        do {
            double matches = 0.0;
            for (int b = 0; b < k; ++b) matches += counts(perm[static_cast<size_t>(b)], b);
            max_matches = std::max(max_matches, matches);
        } while (std::next_permutation(perm.begin(), perm.end()));
    } else {
        const std::vector<int> assign = solve_assignment(-counts);
        double matches = 0.0;
        for (int a = 0; a < k; ++a) matches += counts(a, assign[static_cast<size_t>(a)]);
        max_matches = matches;
    }
    return 1.0 - max_matches / static_cast<double>(n);
}

}  // namespace lcm
