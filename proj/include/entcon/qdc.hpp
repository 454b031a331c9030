// Quantum data compression: sources induced by Bob's measurement,
// likely-subspace coding, exact block fidelity, the two-sided-compression
// degradation, and the complement-pair coding counterexample.
#pragma once

#include "entcon/exactmath.hpp"
#include "entcon/locc.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace entcon::qdc {

using qcore::Matrix;
using qcore::Vector;

// Dense block states live in 2^n dimensions; density matrices square that.
inline constexpr int kDenseBlockCap = 10;

struct QuantumSource {
    std::vector<Vector> signal_states;
    std::vector<double> probabilities;
    Matrix density_matrix;

    void validate() const;
    double entropy_bits() const;

    // Up/down emitted with cos^2 / sin^2 (the classical-looking source).
    static QuantumSource orthogonal_biased(double theta);
    // psi0 = cos|0> + sin|1>, psi1 = cos|0> - sin|1>, equal probabilities.
    static QuantumSource rotated_equiprobable(double theta);
};

// The ensemble Bob's measurement induces on Alice's subsystem. Every outcome
// must leave Alice pure; the ensemble density matrix always equals Alice's
// partial trace.
QuantumSource source_from_entangled_state(const qcore::PureBipartiteState& state,
                                          const locc::LocalOperation& bob_measurement);

// An n-bit emission label x; bit i indexes the i-th emitted signal state.
struct SequenceLabel {
    int length;
    std::uint64_t bits;

    bool bit(int i) const { return (bits >> (length - 1 - i)) & 1u; }
    int weight() const;
    SequenceLabel complement() const;
    static SequenceLabel random(int length, Rng& rng);
};

// Tensor product of the labeled signal states, 2^n-dimensional.
Vector sequence_state(const QuantumSource& source, const SequenceLabel& label);

// Span of the eigenvectors of rho^(n) with the largest eigenvalues, retained
// in whole weight classes, capped at 2^(n(H+delta)).
struct LikelySubspace {
    int block_length;
    double delta;
    double cap_log2;                 // n (H + delta)
    double majority_eigenvalue;      // p >= 1/2
    double minority_eigenvalue;
    bool minority_is_basis_one;      // orientation of weight counting
    int max_retained_weight;         // classes w = 0 .. max_retained_weight
    exact::BigInt dimension;
    double retained_mass;

    bool retains_weight(int w) const { return w <= max_retained_weight; }
    int string_weight(std::size_t index) const;  // minority count of a basis string
    // Retained computational-basis indices, class by class (block_length <= 24).
    std::vector<std::size_t> dense_indices() const;
    // Highest-eigenvalue basis state, the deterministic junk replacement.
    std::size_t junk_index() const;
};

LikelySubspace build_likely_subspace(const QuantumSource& source, int block_length,
                                     double delta);

// P|psi><psi|P + (1 - <psi|P|psi>) |junk><junk|.
qcore::DensityMatrix compress_block(const Vector& block_state, const LikelySubspace& subspace);

// F = sum_x p(x) <Psi^x|W^x|Psi^x>. The closed form exploits the
// x-independence of ||P Psi^x||^2 for rotated-equiprobable sources; the
// enumerated form builds all 2^n blocks (block_length <= kDenseBlockCap).
double fidelity_eq10_closed_form(const QuantumSource& source, int block_length, double delta);
double fidelity_eq10_enumerated(const QuantumSource& source, int block_length, double delta);

struct TwoSidedCompressionReport {
    int block_length;
    double delta;
    exact::BigInt retained_dimension;
    double retained_mass;
    // max/min retained squared Schmidt coefficient; the paper's growing
    // "variance" reported in an unambiguous convention.
    double coefficient_dispersion;
    double max_entangled_fidelity;
};

TwoSidedCompressionReport two_sided_compression_analysis(double theta, int block_length,
                                                         double delta);
// Dense compressed bipartite state for cross-checks (block_length <= kDenseBlockCap).
qcore::PureBipartiteState two_sided_compressed_state(double theta, int block_length,
                                                     double delta);

struct CounterexampleReport {
    double theta;
    int block_length;
    // max over labels/basis strings of |<y|Psi^xbar> - (-1)^w(y) <y|Psi^x>|.
    double max_sign_rule_deviation;
    // max entry deviation between the k-measurement encodings of x and xbar.
    double max_encoding_deviation;
    double mean_abs_overlap;   // measured |<Psi^x|Psi^xbar>|
    double predicted_overlap;  // (cos 2 theta)^n
    double fidelity_ceiling;   // (1 + |overlap|)/2 for any decoder
};

CounterexampleReport schmidt_coding_counterexample(double theta, int block_length,
                                                   std::span<const SequenceLabel> labels);
CounterexampleReport schmidt_coding_counterexample(double theta, int block_length,
                                                   int sample_count, Rng& rng);

struct DataExpansionReport {
    double max_roundtrip_error;            // isometry decode(encode(psi)) vs psi
    Eigen::Vector2d marginal_eigenvalues;  // single-qubit marginal, descending
    double marginal_entropy_bits;
};

// Encodes two qubits into the majority-up subspace of three; checks the round
// trip on random states and the marginals of the encoded maximally mixed state.
DataExpansionReport data_expansion_demo(Rng& rng);

} // namespace entcon::qdc
