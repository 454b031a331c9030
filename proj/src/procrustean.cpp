#include "entcon/procrustean.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace entcon::procrustean {

namespace {

using qcore::Matrix;

constexpr double kQuarterPi = std::numbers::pi / 4.0;

} // namespace

locc::LocalOperation ProcrusteanFilter::local_operation() const {
    return locc::LocalOperation::povm(locc::PartyId::Alice, {pass_operator, fail_operator});
}

ProcrusteanFilter build_filter(double theta) {
    if (!(theta > 0.0) || !(theta < std::numbers::pi / 2.0))
        throw std::invalid_argument("build_filter: theta must lie in (0, pi/2)");

    // The filter trims whichever amplitude is larger; theta > pi/4 is the
    // mirror image with the down component filtered instead.
    const double t = std::tan(std::min(theta, std::numbers::pi / 2.0 - theta));
    Matrix pass = Matrix::Zero(2, 2);
    Matrix fail = Matrix::Zero(2, 2);
    if (theta <= kQuarterPi) {
        pass(0, 0) = t;
        pass(1, 1) = 1.0;
        fail(0, 0) = std::sqrt(std::max(0.0, 1.0 - t * t));
    } else {
        pass(0, 0) = 1.0;
        pass(1, 1) = t;
        fail(1, 1) = std::sqrt(std::max(0.0, 1.0 - t * t));
    }
    return ProcrusteanFilter{theta, std::move(pass), std::move(fail)};
}

double success_probability(double theta) {
    const double c2 = std::cos(theta) * std::cos(theta);
    return 2.0 * std::min(c2, 1.0 - c2);
}

double expected_yield(double theta) {
    if (theta < 0.0 || theta > std::numbers::pi / 2.0)
        throw std::invalid_argument("expected_yield: theta must lie in [0, pi/2]");
    return success_probability(theta);  // passing pairs carry exactly 1 ebit
}

FilterResult apply_procrustean(const qcore::PureBipartiteState& pair, double theta, Rng& rng) {
    if (pair.dim_a() != 2 || pair.dim_b() != 2)
        throw std::invalid_argument("apply_procrustean: expects a two-qubit pair");
    const ProcrusteanFilter filter = build_filter(theta);
    const locc::MeasurementResult r =
        locc::apply_local_operation(pair, filter.local_operation(), rng);
    return FilterResult{r.outcome == 0 ? FilterOutcome::Pass : FilterOutcome::Fail,
                        r.probability, r.residual};
}

} // namespace entcon::procrustean
