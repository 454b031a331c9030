// Procrustean concentration: the single-pair filter that trims the larger
// Schmidt coefficient down to the smaller one.
#pragma once

#include "entcon/locc.hpp"

namespace entcon::procrustean {

// Two-outcome generalized measurement on Alice's qubit. The pass operator
// scales the majority amplitude by tan(min(theta, pi/2 - theta)) and leaves
// the minority amplitude alone; pass†pass + fail†fail = I.
struct ProcrusteanFilter {
    double theta;
    qcore::Matrix pass_operator;
    qcore::Matrix fail_operator;

    // Outcome 0 = pass, outcome 1 = fail.
    locc::LocalOperation local_operation() const;
};

ProcrusteanFilter build_filter(double theta);

// 2 min(sin^2 theta, cos^2 theta).
double success_probability(double theta);
// Success probability times the 1 ebit a passing pair carries.
double expected_yield(double theta);

enum class FilterOutcome { Pass, Fail };

struct FilterResult {
    FilterOutcome outcome;
    double probability;
    qcore::PureBipartiteState residual;
};

// Filters one partly_entangled_pair(theta); Bob performs no measurement and
// discards his particle exactly when Alice discards hers.
FilterResult apply_procrustean(const qcore::PureBipartiteState& pair, double theta, Rng& rng);

} // namespace entcon::procrustean
