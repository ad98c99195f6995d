#include "sparsespec/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace sparsespec {

namespace {

double pair_cost(const Component& a, const Component& b) {
    const double d1 = a.omega1 - b.omega1;
    const double d2 = a.omega2 - b.omega2;
    return d1 * d1 + d2 * d2;
}

// Exhaustive assignment of the smaller set into the larger one.
struct Assignment {
    std::vector<int> to_large; // per small index, the matched large index
    double cost = std::numeric_limits<double>::infinity();
};

void enumerate(const std::vector<Component>& small, const std::vector<Component>& large,
               std::vector<int>& current, std::vector<bool>& used, double cost_so_far,
               Assignment& best) {
    const auto depth = current.size();
    if (depth == small.size()) {
        if (cost_so_far < best.cost) {
            best.cost = cost_so_far;
            best.to_large = current;
        }
        return;
    }
    for (int j = 0; j < static_cast<int>(large.size()); ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double c = pair_cost(small[depth], large[static_cast<std::size_t>(j)]);
        if (cost_so_far + c >= best.cost) continue;
        used[static_cast<std::size_t>(j)] = true;
        current.push_back(j);
        enumerate(small, large, current, used, cost_so_far + c, best);
        current.pop_back();
        used[static_cast<std::size_t>(j)] = false;
    }
}

Assignment best_assignment(const std::vector<Component>& small,
                           const std::vector<Component>& large) {
    Assignment best;
    std::vector<int> current;
    std::vector<bool> used(large.size(), false);
    current.reserve(small.size());
    enumerate(small, large, current, used, 0.0, best);
    return best;
}

void format_value(std::ostream& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf;
}

} // namespace

std::vector<std::pair<int, int>> match_components(const ComponentSet& truth,
                                                  const ComponentSet& estimate) {
    if (truth.components.empty() || estimate.components.empty())
        throw std::invalid_argument("match_components requires non-empty component sets");

    std::vector<std::pair<int, int>> pairs;
    if (estimate.k() <= truth.k()) {
        const auto best = best_assignment(estimate.components, truth.components);
        for (int e = 0; e < static_cast<int>(estimate.k()); ++e)
            pairs.emplace_back(e, best.to_large[static_cast<std::size_t>(e)]);
    } else {
        const auto best = best_assignment(truth.components, estimate.components);
        for (int t = 0; t < static_cast<int>(truth.k()); ++t)
            pairs.emplace_back(best.to_large[static_cast<std::size_t>(t)], t);
        std::sort(pairs.begin(), pairs.end());
    }
    return pairs;
}

TrialOutcome make_trial_outcome(const ComponentSet& truth, const ComponentSet& estimate) {
    TrialOutcome outcome;
    outcome.truth = truth;
    outcome.estimate = estimate;
    outcome.pairing = match_components(truth, estimate);

    std::vector<bool> truth_used(truth.k(), false);
    std::vector<bool> est_used(estimate.k(), false);
    for (const auto& [e, t] : outcome.pairing) {
        const auto& ct = truth.components[static_cast<std::size_t>(t)];
        const auto& ce = estimate.components[static_cast<std::size_t>(e)];
        outcome.freq_errors.push_back({(ct.omega1 - ce.omega1) / ct.omega1,
                                       (ct.omega2 - ce.omega2) / ct.omega2});
        outcome.damp_errors.push_back(
            {(ct.beta1 - ce.beta1) / ct.beta1, (ct.beta2 - ce.beta2) / ct.beta2});
        truth_used[static_cast<std::size_t>(t)] = true;
        est_used[static_cast<std::size_t>(e)] = true;
    }
    for (int t = 0; t < static_cast<int>(truth.k()); ++t)
        if (!truth_used[static_cast<std::size_t>(t)]) outcome.unmatched_truth.push_back(t);
    for (int e = 0; e < static_cast<int>(estimate.k()); ++e)
        if (!est_used[static_cast<std::size_t>(e)]) outcome.unmatched_estimate.push_back(e);
    return outcome;
}

namespace {

double rmse_over(const std::vector<TrialOutcome>& outcomes, bool damping) {
    if (outcomes.empty())
        throw std::invalid_argument("rmse requires at least one trial outcome");

    double sum = 0.0;
    for (const auto& o : outcomes) {
        if (o.pairing.size() != 4)
            throw std::invalid_argument(
                "rmse expects exactly 4 matched components per trial (got " +
                std::to_string(o.pairing.size()) + ")");
        for (const auto& [e, t] : o.pairing) {
            const auto& ct = o.truth.components[static_cast<std::size_t>(t)];
            const auto& ce = o.estimate.components[static_cast<std::size_t>(e)];
            const double true1 = damping ? ct.beta1 : ct.omega1;
            const double true2 = damping ? ct.beta2 : ct.omega2;
            const double est1 = damping ? ce.beta1 : ce.omega1;
            const double est2 = damping ? ce.beta2 : ce.omega2;
            if (true1 == 0.0 || true2 == 0.0)
                throw std::invalid_argument(
                    damping ? "relative damping error undefined for zero true damping"
                            : "relative frequency error undefined for zero true frequency");
            const double r1 = (true1 - est1) / true1;
            const double r2 = (true2 - est2) / true2;
            sum += r1 * r1 + r2 * r2;
        }
    }
    return std::sqrt(sum / (8.0 * static_cast<double>(outcomes.size())));
}

} // namespace

double rmse_frequency(const std::vector<TrialOutcome>& outcomes) {
    return rmse_over(outcomes, false);
}

double rmse_damping(const std::vector<TrialOutcome>& outcomes) {
    return rmse_over(outcomes, true);
}

void write_trial_outcomes_csv(std::ostream& out, const std::vector<TrialOutcome>& outcomes) {
    out << "trial,k,true_w1,true_w2,est_w1,est_w2,true_b1,true_b2,est_b1,est_b2\n";
    for (std::size_t trial = 0; trial < outcomes.size(); ++trial) {
        const auto& o = outcomes[trial];
        for (std::size_t p = 0; p < o.pairing.size(); ++p) {
            const auto& ct = o.truth.components[static_cast<std::size_t>(o.pairing[p].second)];
            const auto& ce = o.estimate.components[static_cast<std::size_t>(o.pairing[p].first)];
            out << trial << ',' << p << ',';
            format_value(out, ct.omega1);
            out << ',';
            format_value(out, ct.omega2);
            out << ',';
            format_value(out, ce.omega1);
            out << ',';
            format_value(out, ce.omega2);
            out << ',';
            format_value(out, ct.beta1);
            out << ',';
            format_value(out, ct.beta2);
            out << ',';
            format_value(out, ce.beta1);
            out << ',';
            format_value(out, ce.beta2);
            out << '\n';
        }
    }
}

} // namespace sparsespec
