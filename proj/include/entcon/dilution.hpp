// Entanglement dilution: generalized teleportation, remote preparation of
// partly-entangled states from singlets, and Schumacher-compressed dilution
// with singlet/classical-bit accounting.
#pragma once

#include "entcon/qdc.hpp"

#include <optional>

namespace entcon::dilution {

struct TeleportationLedger {
    long singlets_consumed = 0;      // ceil(log2 d)
    long classical_bits_sent = 0;    // 2 ceil(log2 d) uncompressed
    Eigen::Index target_dimension = 0;
};

struct TeleportResult {
    qcore::Vector output;
    int shift;   // generalized Bell outcome indices (p, q)
    int phase;
    double outcome_probability;
    TeleportationLedger ledger;
};

// Teleports a d-dimensional state through a maximally entangled d x d
// resource using the shift-and-phase Bell basis; the correction conditioned
// on (shift, phase) restores the input exactly. Refuses resources that are
// not maximally entangled.
TeleportResult generalized_teleport(const qcore::Vector& input,
                                    const qcore::PureBipartiteState& resource, Rng& rng);
TeleportResult generalized_teleport(const qcore::Vector& input,
                                    const qcore::PureBipartiteState& resource,
                                    int shift, int phase);

// Reference route for small d: builds the tripartite pure state, performs
// Alice's Bell measurement through a locc referee (recording the transcript
// and the classical message), and applies Bob's correction as a local
// unitary. Must agree with the closed-form route outcome by outcome.
TeleportResult teleport_via_referee(const qcore::Vector& input,
                                    const qcore::PureBipartiteState& resource, Rng& rng,
                                    locc::Transcript* transcript = nullptr);

// Bob's marginal before the classical message arrives: maximally mixed.
qcore::DensityMatrix premessage_bob_marginal(const qcore::Vector& input,
                                             const qcore::PureBipartiteState& resource);

struct RemotePreparation {
    qcore::PureBipartiteState shared;
    TeleportationLedger ledger;
    int shift;
    int phase;
};

// Alice prepares the target on local systems A and C, then teleports C into
// Bob's B through ceil(log2 d) singlets' worth of maximal entanglement.
RemotePreparation prepare_entangled_remote(const qcore::PureBipartiteState& target,
                                           long singlet_supply, Rng& rng);

struct CompressedPreparation {
    TeleportationLedger ledger;
    exact::BigInt retained_dimension;
    double fidelity;             // retained probability mass, exact
    bool projection_succeeded;
    std::optional<qcore::PureBipartiteState> shared;  // success branch
};

// n copies of correlated_pair(theta) shared by compressing the C block to the
// likely subspace before teleporting. Dense verification path (copies <=
// schmidt::kDenseCap): the returned shared state on success equals the
// renormalized projected target.
CompressedPreparation prepare_entangled_compressed(double theta, int copies, double delta,
                                                   Rng& rng);

struct CompressedCost {
    long singlets;
    long classical_bits;
    exact::BigInt retained_dimension;
    double fidelity;           // retained mass
    double singlets_per_copy;
};

// Accounting-only mode for any n: subspace dimensions and the qubit budget
// min(n, ceil(n (H2 + delta))).
CompressedCost compressed_cost(double theta, long copies, double delta);

} // namespace entcon::dilution
