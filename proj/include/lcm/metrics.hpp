#pragma once

#include <vector>

#include "lcm/types.hpp"

namespace lcm {

/// Fraction of positions where the two label vectors disagree, without any
/// relabeling. Mostly useful inside alignment tests.
double raw_disagreement(const LabelVector& s, const LabelVector& s_star);

/// Mis-clustering proportion minimized over all relabelings of 1..K.
///
/// The minimum is exact: permutations are enumerated for K <= 8 and solved
/// as an assignment problem on the confusion-count matrix above that.
double hamming_loss(const LabelVector& s, const LabelVector& s_star);

/// Exact minimum-cost assignment (square cost matrix). Returns, for each row,
/// the column it is assigned to. O(n^3).
std::vector<int> solve_assignment(const Matrix& cost);

}  // namespace lcm
