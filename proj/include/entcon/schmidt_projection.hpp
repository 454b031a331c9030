// Schmidt projection concentration: the k-measurement over n pairs, exact
// expected yield, and the standardization walk distilling standard singlets.
#pragma once

#include "entcon/exactmath.hpp"
#include "entcon/locc.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace entcon::schmidt {

// Dense joint simulation holds 4^n amplitudes; beyond this the symbolic
// k-type representation is exact and mandatory.
inline constexpr int kDenseCap = 12;

struct PairEnsembleSpec {
    double theta;
    int pair_count;

    void validate() const;  // 0 < theta < pi/2, pair_count >= 1
};

struct KOutcome {
    int k;
    double probability;
    exact::BigInt residual_dimension;  // C(n, k)
    double residual_entanglement;      // log2 C(n, k)
};

// The n+1 binomial outcomes p_k = C(n,k) (cos^2)^(n-k) (sin^2)^k.
std::vector<KOutcome> outcome_distribution(const PairEnsembleSpec& spec);

// sum_k p_k log2 C(n,k): expected concentrated entanglement in ebits for one
// n-pair block. Per-pair yield is this value divided by n.
double expected_concentrated_entanglement(const PairEnsembleSpec& spec);

// Symbolic path: draw k from the binomial outcome law.
int sample_k(const PairEnsembleSpec& spec, Rng& rng);

// The incomplete von Neumann measurement sorting basis strings of the given
// party's block by weight (number of |1> factors): n+1 diagonal projectors.
locc::LocalOperation weight_measurement(int pair_count, locc::PartyId party);

enum class CoordinationMode { ClassicalMessage, CorrelatedMeasurement };

struct KMeasurement {
    int k;
    qcore::PureBipartiteState residual;
};

// Dense path. The referee must hold a pair_block state of `pair_count` pairs.
// ClassicalMessage: Alice measures and sends k. CorrelatedMeasurement: Bob
// repeats the measurement on his block and must observe the same k.
KMeasurement measure_k(locc::Referee& referee, int pair_count, Rng& rng,
                       CoordinationMode mode = CoordinationMode::ClassicalMessage);

enum class RunStatus { Success, ProtocolFailure, StepLimit };
const char* run_status_name(RunStatus s);

struct ConcentrationRun {
    int batch_n = 0;
    double epsilon = 0.0;
    std::vector<int> k_sequence;
    std::vector<double> mantissas;            // Z_m after each batch
    exact::BigInt accumulated_dimension = 1;  // D_m at stop (or last step)
    RunStatus status = RunStatus::StepLimit;
    long singlet_count = 0;                   // ell on success, else 0
    long steps = 0;                           // m
    long pairs_consumed = 0;
    double success_probability = 0.0;         // 2^ell / D_m at the stop step
};

// Accumulates D_m = prod C(batch_n, k_i) exactly and stops at the first m
// whose mantissa satisfies the epsilon window (checked in exact arithmetic);
// then plays the two-outcome success/failure projection. A source returning
// nullopt ends the run with StepLimit.
ConcentrationRun standardize(const std::function<std::optional<int>()>& k_source,
                             int batch_n, double epsilon, long max_steps, Rng& rng);
ConcentrationRun standardize(std::span<const int> k_values, int batch_n, double epsilon,
                             Rng& rng);

// One integer per line; blank lines ignored.
std::vector<int> load_k_sequence(std::istream& in);

std::string run_csv_header();
std::string run_csv_row(std::uint64_t seed, const PairEnsembleSpec& spec,
                        const ConcentrationRun& run);

struct ProtocolOptions {
    CoordinationMode coordination = CoordinationMode::ClassicalMessage;
    // Dense simulation with per-step locc audits when pair_count allows it;
    // symbolic otherwise.
    std::optional<bool> force_dense;
};

struct ProtocolResult {
    ConcentrationRun run;
    locc::Transcript transcript;
    bool dense = false;
    std::vector<qcore::PureBipartiteState> batch_residuals;  // dense mode only
    double worst_no_signaling = 0.0;
    double worst_nonincrease_excess = 0.0;
    double worst_lower_bound_shortfall = 0.0;
};

// Composes measure_k over batches with standardize. Dense mode routes every
// batch through the locc referee with auditing on.
ProtocolResult run_full_protocol(const PairEnsembleSpec& spec, double epsilon,
                                 long max_batches, Rng& rng,
                                 const ProtocolOptions& options = {});

} // namespace entcon::schmidt
