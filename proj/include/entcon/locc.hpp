// Two-party harness: one-sided local operations plus classical messages,
// transcripts, and the no-signaling / entanglement-nonincrease audits.
#pragma once

#include "entcon/qcore.hpp"
#include "entcon/rng.hpp"

#include <string>
#include <variant>
#include <vector>

namespace entcon::locc {

using qcore::Matrix;
using qcore::PureBipartiteState;
using qcore::Side;

enum class PartyId { Alice, Bob };

constexpr Side side_of(PartyId p) { return p == PartyId::Alice ? Side::A : Side::B; }
const char* party_name(PartyId p);

enum class OpKind { Unitary, VonNeumann, Povm };
const char* op_kind_name(OpKind k);

// A one-sided operation, held as measurement operators M_j so residual states
// are well-defined (POVM elements alone would not determine them).
struct LocalOperation {
    PartyId party;
    OpKind kind;
    std::vector<Matrix> operators;

    static LocalOperation unitary(PartyId party, Matrix u);
    static LocalOperation von_neumann(PartyId party, std::vector<Matrix> projectors);
    static LocalOperation povm(PartyId party, std::vector<Matrix> measurement_ops);

    Eigen::Index dimension() const;
    int outcome_count() const { return static_cast<int>(operators.size()); }
    // Kind-specific completeness/orthogonality checks at kOpTol.
    void validate() const;
};

struct MeasurementResult {
    int outcome;
    double probability;
    PureBipartiteState residual;
};

std::vector<double> outcome_probabilities(const PureBipartiteState& joint,
                                          const LocalOperation& op);
MeasurementResult apply_local_operation(const PureBipartiteState& joint,
                                        const LocalOperation& op, Rng& rng);
// Deterministic variant for tests and replay; rejects zero-probability outcomes.
MeasurementResult apply_local_operation(const PureBipartiteState& joint,
                                        const LocalOperation& op, int forced_outcome);

struct EntanglementAudit {
    double entanglement_before;
    double expected_entanglement_after;  // sum_j p_j E(residual_j)
    double outcome_entropy;              // H of the outcome distribution
};

// Returns the three quantities of the nonincrease bound
// E - H <= sum_j p_j E_j <= E.
EntanglementAudit audit_expected_entanglement(const PureBipartiteState& joint,
                                              const LocalOperation& op);

// Max-entry deviation between the untouched side's density matrix and its
// outcome-averaged post-measurement density matrix.
double verify_no_signaling(const PureBipartiteState& joint, const LocalOperation& op);

struct MeasurementEvent {
    PartyId party;
    OpKind kind;
    int outcome;
    double probability;
};

struct MessageEvent {
    PartyId sender;
    std::string bits;
};

using TranscriptEvent = std::variant<MeasurementEvent, MessageEvent>;

class Transcript {
public:
    void record_measurement(PartyId party, OpKind kind, int outcome, double probability);
    void record_message(PartyId sender, std::string bits);
    void append(const Transcript& other);

    const std::vector<TranscriptEvent>& events() const { return events_; }
    std::size_t size() const { return events_.size(); }
    // One event per line: step index, party, op kind, outcome, probability
    // (messages: step index, party, "msg", bits).
    std::string to_log() const;

private:
    std::vector<TranscriptEvent> events_;
};

// Owns the joint state; parties never touch it directly, so nonlocal
// operations cannot be expressed. Optionally audits every step.
class Referee {
public:
    explicit Referee(PureBipartiteState initial, bool audit_each_step = false);

    const PureBipartiteState& joint() const { return joint_; }
    const Transcript& transcript() const { return transcript_; }

    MeasurementResult apply(const LocalOperation& op, Rng& rng);
    MeasurementResult apply(const LocalOperation& op, int forced_outcome);
    void send_message(PartyId sender, std::string bits);
    // Loads a fresh joint state (next batch of shared pairs).
    void replace_joint(PureBipartiteState state);

    // Audit extremes over all applied operations (zero when auditing is off
    // or nothing ran).
    double worst_no_signaling_deviation() const { return worst_signaling_; }
    // max over steps of expected_after - before; nonincrease demands <= ~1e-9.
    double worst_nonincrease_excess() const { return worst_excess_; }
    // max over steps of (before - H) - expected_after; the lower bound of the
    // gambling inequality demands <= ~1e-9.
    double worst_lower_bound_shortfall() const { return worst_shortfall_; }

private:
    void audit(const LocalOperation& op);

    PureBipartiteState joint_;
    Transcript transcript_;
    bool audit_each_step_;
    double worst_signaling_ = 0.0;
    double worst_excess_ = 0.0;
    double worst_shortfall_ = 0.0;
};

} // namespace entcon::locc
