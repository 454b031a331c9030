#include "entcon/schmidt_projection.hpp"

#include "entcon/detail/format.hpp"

#include <bit>
#include <cmath>
#include <istream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace entcon::schmidt {

namespace {

using exact::BigInt;
using locc::PartyId;
using qcore::Matrix;
using qcore::PureBipartiteState;

int message_width(int n) {
    int width = 1;
    while ((1 << width) <= n) ++width;  // enough bits for k in [0, n]
    return width;
}

std::vector<double> probability_vector(const PairEnsembleSpec& spec) {
    std::vector<double> probs;
    probs.reserve(static_cast<std::size_t>(spec.pair_count) + 1);
    for (const KOutcome& o : outcome_distribution(spec)) probs.push_back(o.probability);
    return probs;
}

} // namespace

void PairEnsembleSpec::validate() const {
    if (!(theta > 0.0) || !(theta < std::numbers::pi / 2.0))
        throw std::invalid_argument("PairEnsembleSpec: theta must lie in (0, pi/2)");
    if (pair_count < 1) throw std::invalid_argument("PairEnsembleSpec: pair_count >= 1 required");
}

std::vector<KOutcome> outcome_distribution(const PairEnsembleSpec& spec) {
    spec.validate();
    const int n = spec.pair_count;
    const double log2_c2 = 2.0 * std::log2(std::abs(std::cos(spec.theta)));
    const double log2_s2 = 2.0 * std::log2(std::abs(std::sin(spec.theta)));

    std::vector<KOutcome> outcomes;
    outcomes.reserve(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) {
        KOutcome o;
        o.k = k;
        o.residual_dimension = exact::binomial(n, k);
        o.residual_entanglement = exact::log2_value(o.residual_dimension);
        // Log-space keeps the tails finite for large n; underflow to 0 is
        // harmless there.
        o.probability =
            std::exp2(o.residual_entanglement + (n - k) * log2_c2 + k * log2_s2);
        outcomes.push_back(std::move(o));
    }
    return outcomes;
}

double expected_concentrated_entanglement(const PairEnsembleSpec& spec) {
    double total = 0.0;
    for (const KOutcome& o : outcome_distribution(spec)) {
        if (o.k == 0 || o.k == spec.pair_count) continue;  // log2 C = 0 at the endpoints
        total += o.probability * o.residual_entanglement;
    }
    return total;
}

int sample_k(const PairEnsembleSpec& spec, Rng& rng) {
    return rng.sample_discrete(probability_vector(spec));
}

locc::LocalOperation weight_measurement(int pair_count, PartyId party) {
    if (pair_count < 1 || pair_count > kDenseCap)
        throw std::invalid_argument("weight_measurement: pair_count outside dense range");
    const Eigen::Index dim = Eigen::Index(1) << pair_count;
    std::vector<Matrix> projectors(static_cast<std::size_t>(pair_count) + 1,
                                   Matrix::Zero(dim, dim));
    for (Eigen::Index x = 0; x < dim; ++x) {
        const int w = std::popcount(static_cast<unsigned long long>(x));
        projectors[static_cast<std::size_t>(w)](x, x) = 1.0;
    }
    return locc::LocalOperation::von_neumann(party, std::move(projectors));
}

KMeasurement measure_k(locc::Referee& referee, int pair_count, Rng& rng,
                       CoordinationMode mode) {
    const locc::MeasurementResult alice =
        referee.apply(weight_measurement(pair_count, PartyId::Alice), rng);

    if (mode == CoordinationMode::ClassicalMessage) {
        referee.send_message(PartyId::Alice,
                             detail::to_binary_string(static_cast<unsigned long>(alice.outcome),
                                                      message_width(pair_count)));
    } else {
        // Bob skips the message and measures his own block; the shared state
        // forces his outcome to agree with Alice's.
        const locc::MeasurementResult bob =
            referee.apply(weight_measurement(pair_count, PartyId::Bob), rng);
        if (bob.outcome != alice.outcome)
            throw std::logic_error("correlated k-measurements disagreed");
    }
    return KMeasurement{alice.outcome, referee.joint()};
}

const char* run_status_name(RunStatus s) {
    switch (s) {
        case RunStatus::Success: return "success";
        case RunStatus::ProtocolFailure: return "failure";
        case RunStatus::StepLimit: return "step_limit";
    }
    return "?";
}

ConcentrationRun standardize(const std::function<std::optional<int>()>& k_source,
                             int batch_n, double epsilon, long max_steps, Rng& rng) {
    if (batch_n < 1) throw std::invalid_argument("standardize: batch_n >= 1 required");
    if (epsilon < 0.0) throw std::invalid_argument("standardize: epsilon >= 0 required");
    if (max_steps < 1) throw std::invalid_argument("standardize: max_steps >= 1 required");

    ConcentrationRun run;
    run.batch_n = batch_n;
    run.epsilon = epsilon;

    BigInt d = 1;
    for (long m = 1; m <= max_steps; ++m) {
        const std::optional<int> k = k_source();
        if (!k.has_value()) break;
        if (*k < 0 || *k > batch_n)
            throw std::invalid_argument("standardize: k outside [0, batch_n]");
        run.k_sequence.push_back(*k);
        d *= exact::binomial(batch_n, *k);
        run.steps = m;

        const long ell = exact::floor_log2(d);
        const double mantissa = exact::log2_value(d) - static_cast<double>(ell);
        run.mantissas.push_back(mantissa);

        if (exact::within_power_window(d, ell, epsilon)) {
            run.accumulated_dimension = d;
            run.success_probability = exact::ratio_as_double(BigInt(1) << ell, d);
            if (rng.uniform() < run.success_probability) {
                run.status = RunStatus::Success;
                run.singlet_count = ell;
            } else {
                run.status = RunStatus::ProtocolFailure;
                run.singlet_count = 0;
            }
            run.pairs_consumed = run.steps * batch_n;
            return run;
        }
    }

    run.accumulated_dimension = d;
    run.status = RunStatus::StepLimit;
    run.singlet_count = 0;
    run.pairs_consumed = run.steps * batch_n;
    return run;
}

ConcentrationRun standardize(std::span<const int> k_values, int batch_n, double epsilon,
                             Rng& rng) {
    std::size_t next = 0;
    const auto source = [&]() -> std::optional<int> {
        if (next >= k_values.size()) return std::nullopt;
        return k_values[next++];
    };
    const long max_steps = std::max<long>(1, static_cast<long>(k_values.size()));
    return standardize(source, batch_n, epsilon, max_steps, rng);
}

std::vector<int> load_k_sequence(std::istream& in) {
    std::vector<int> ks;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::size_t pos = 0;
        const int k = std::stoi(line, &pos);
        ks.push_back(k);
    }
    return ks;
}

std::string run_csv_header() {
    return "seed,theta,n,epsilon,m,ell,pairs_consumed,status";
}

std::string run_csv_row(std::uint64_t seed, const PairEnsembleSpec& spec,
                        const ConcentrationRun& run) {
    std::ostringstream out;
    out << seed << ',' << detail::format_double(spec.theta) << ',' << spec.pair_count << ','
        << detail::format_double(run.epsilon) << ',' << run.steps << ',' << run.singlet_count
        << ',' << run.pairs_consumed << ',' << run_status_name(run.status);
    return out.str();
}

ProtocolResult run_full_protocol(const PairEnsembleSpec& spec, double epsilon,
                                 long max_batches, Rng& rng, const ProtocolOptions& options) {
    spec.validate();
    if (max_batches < 1) throw std::invalid_argument("run_full_protocol: max_batches >= 1");

    ProtocolResult result;
    result.dense = options.force_dense.value_or(spec.pair_count <= 8);
    if (result.dense && spec.pair_count > kDenseCap)
        throw std::invalid_argument("run_full_protocol: dense mode capped at 12 pairs");

    if (result.dense) {
        locc::Referee referee(PureBipartiteState::pair_block(spec.theta, spec.pair_count),
                              /*audit_each_step=*/true);
        const auto source = [&]() -> std::optional<int> {
            referee.replace_joint(PureBipartiteState::pair_block(spec.theta, spec.pair_count));
            const KMeasurement m = measure_k(referee, spec.pair_count, rng, options.coordination);
            result.batch_residuals.push_back(m.residual);
            return m.k;
        };
        result.run = standardize(source, spec.pair_count, epsilon, max_batches, rng);
        result.transcript = referee.transcript();
        result.worst_no_signaling = referee.worst_no_signaling_deviation();
        result.worst_nonincrease_excess = referee.worst_nonincrease_excess();
        result.worst_lower_bound_shortfall = referee.worst_lower_bound_shortfall();
    } else {
        const std::vector<double> probs = probability_vector(spec);
        locc::Transcript transcript;
        const auto source = [&]() -> std::optional<int> {
            const int k = rng.sample_discrete(probs);
            transcript.record_measurement(PartyId::Alice, locc::OpKind::VonNeumann, k,
                                          probs[static_cast<std::size_t>(k)]);
            transcript.record_message(PartyId::Alice,
                                      detail::to_binary_string(static_cast<unsigned long>(k),
                                                               message_width(spec.pair_count)));
            return k;
        };
        result.run = standardize(source, spec.pair_count, epsilon, max_batches, rng);
        result.transcript = std::move(transcript);
    }

    // The two-outcome standardization projection, recorded once the walk stops.
    if (result.run.status != RunStatus::StepLimit) {
        const bool ok = result.run.status == RunStatus::Success;
        result.transcript.record_measurement(
            PartyId::Alice, locc::OpKind::VonNeumann, ok ? 0 : 1,
            ok ? result.run.success_probability : 1.0 - result.run.success_probability);
    }
    return result;
}

} // namespace entcon::schmidt
