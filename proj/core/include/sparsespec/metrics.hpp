#pragma once

#include <array>
#include <iosfwd>
#include <utility>
#include <vector>

#include "sparsespec/model.hpp"

namespace sparsespec {

/// One estimated scene matched against its ground truth. `pairing` maps
/// estimate index -> truth index over min(K_true, K_est) components; the
/// error arrays follow the pairing order, one (dimension-1, dimension-2)
/// entry per matched pair, as relative errors (true - est) / true.
struct TrialOutcome {
    ComponentSet truth;
    ComponentSet estimate;
    std::vector<std::pair<int, int>> pairing; // (estimate_idx, truth_idx)
    std::vector<std::array<double, 2>> freq_errors;
    std::vector<std::array<double, 2>> damp_errors;
    std::vector<int> unmatched_truth;
    std::vector<int> unmatched_estimate;
};

/// The bijection (on the smaller count) minimizing total squared Euclidean
/// distance in (omega1, omega2) space, found by exact enumeration (the
/// component counts here are <= 8). Returns (estimate_idx, truth_idx)
/// pairs sorted by estimate index.
std::vector<std::pair<int, int>> match_components(const ComponentSet& truth,
                                                  const ComponentSet& estimate);

/// Matching plus per-pair relative errors; unmatched components (under a
/// size mismatch) are flagged, not dropped.
TrialOutcome make_trial_outcome(const ComponentSet& truth, const ComponentSet& estimate);

/// sqrt( (1/8)(1/P) sum_p sum_k sum_l ((w - w_hat)/w)^2 ) over P outcomes
/// of exactly 4 matched pairs each. Throws when a true frequency is zero
/// or an outcome does not carry 4 pairs.
double rmse_frequency(const std::vector<TrialOutcome>& outcomes);

/// Same with dampings in place of frequencies.
double rmse_damping(const std::vector<TrialOutcome>& outcomes);

/// Audit rows: header
/// trial,k,true_w1,true_w2,est_w1,est_w2,true_b1,true_b2,est_b1,est_b2
/// with one row per matched pair, trials numbered by vector position.
void write_trial_outcomes_csv(std::ostream& out, const std::vector<TrialOutcome>& outcomes);

} // namespace sparsespec
