#include "entcon/qdc.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace entcon::qdc {

namespace {

using exact::BigInt;
using qcore::Complex;
using qcore::DensityMatrix;
using qcore::PureBipartiteState;
using qcore::RealVector;

constexpr double kDiagTol = 1e-12;

// Rotate the global phase so the largest-magnitude entry is real positive.
Vector canonical_phase(Vector v) {
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    const Complex pivot = v(imax);
    if (std::abs(pivot) > 0.0) v *= std::conj(pivot) / std::abs(pivot);
    return v;
}

double log2_or_neg_inf(double v) {
    return v > 0.0 ? std::log2(v) : -std::numeric_limits<double>::infinity();
}

// Class mass C(n,w) p_max^(n-w) p_min^w in log space.
double class_mass(int n, int w, double log2_pmax, double log2_pmin) {
    if (std::isinf(log2_pmin) && w > 0) return 0.0;
    return std::exp2(exact::log2_value(exact::binomial(n, w)) + (n - w) * log2_pmax +
                     w * log2_pmin);
}

void require_diagonal_density(const Matrix& rho) {
    if (std::abs(rho(0, 1)) > kDiagTol || std::abs(rho(1, 0)) > kDiagTol)
        throw std::invalid_argument(
            "likely-subspace coding requires a source diagonal in the computational basis");
}

} // namespace

void QuantumSource::validate() const {
    if (signal_states.empty() || signal_states.size() != probabilities.size())
        throw std::invalid_argument("QuantumSource: states/probabilities mismatch");
    const Eigen::Index d = signal_states.front().size();
    double total = 0.0;
    Matrix expected = Matrix::Zero(d, d);
    for (std::size_t j = 0; j < signal_states.size(); ++j) {
        const Vector& psi = signal_states[j];
        if (psi.size() != d) throw std::invalid_argument("QuantumSource: state dimension mismatch");
        if (std::abs(psi.squaredNorm() - 1.0) > qcore::kNormTol)
            throw std::invalid_argument("QuantumSource: signal state not normalized");
        if (probabilities[j] < 0.0)
            throw std::invalid_argument("QuantumSource: negative probability");
        total += probabilities[j];
        expected += probabilities[j] * (psi * psi.adjoint());
    }
    if (std::abs(total - 1.0) > qcore::kNormTol)
        throw std::invalid_argument("QuantumSource: probabilities do not sum to 1 within 1e-12");
    if ((expected - density_matrix).cwiseAbs().maxCoeff() > qcore::kNormTol)
        throw std::invalid_argument("QuantumSource: density matrix inconsistent with ensemble");
}

double QuantumSource::entropy_bits() const {
    return DensityMatrix(density_matrix).entropy_bits();
}

QuantumSource QuantumSource::orthogonal_biased(double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    QuantumSource source;
    source.signal_states = {Vector{{1.0, 0.0}}, Vector{{0.0, 1.0}}};
    source.probabilities = {c * c, s * s};
    source.density_matrix = Matrix{{Complex(c * c), Complex(0.0)},
                                   {Complex(0.0), Complex(s * s)}};
    source.validate();
    return source;
}

QuantumSource QuantumSource::rotated_equiprobable(double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    QuantumSource source;
    source.signal_states = {Vector{{c, s}}, Vector{{c, -s}}};
    source.probabilities = {0.5, 0.5};
    source.density_matrix = Matrix{{Complex(c * c), Complex(0.0)},
                                   {Complex(0.0), Complex(s * s)}};
    source.validate();
    return source;
}

QuantumSource source_from_entangled_state(const qcore::PureBipartiteState& state,
                                          const locc::LocalOperation& bob_measurement) {
    if (bob_measurement.party != locc::PartyId::Bob)
        throw std::invalid_argument("source_from_entangled_state: measurement must act on Bob's side");
    bob_measurement.validate();

    QuantumSource source;
    const Eigen::Index da = state.dim_a();
    source.density_matrix = Matrix::Zero(da, da);

    const std::vector<double> probs = locc::outcome_probabilities(state, bob_measurement);
    for (int j = 0; j < bob_measurement.outcome_count(); ++j) {
        if (probs[j] < 1e-15) continue;  // outcome never occurs
        const locc::MeasurementResult r = locc::apply_local_operation(state, bob_measurement, j);
        const DensityMatrix alice = qcore::partial_trace(r.residual, qcore::Side::A);
        Eigen::SelfAdjointEigenSolver<Matrix> solver(alice.matrix());
        const RealVector evals = solver.eigenvalues();  // ascending
        if (evals(evals.size() - 1) < 1.0 - qcore::kOpTol)
            throw std::invalid_argument(
                "source_from_entangled_state: an outcome leaves Alice in a mixed state");
        source.signal_states.push_back(canonical_phase(solver.eigenvectors().col(evals.size() - 1)));
        source.probabilities.push_back(probs[j]);
        source.density_matrix +=
            probs[j] * (source.signal_states.back() * source.signal_states.back().adjoint());
    }
    source.validate();
    return source;
}

int SequenceLabel::weight() const {
    return std::popcount(bits);
}

SequenceLabel SequenceLabel::complement() const {
    const std::uint64_t mask =
        length >= 64 ? ~0ull : ((std::uint64_t(1) << length) - 1);
    return SequenceLabel{length, bits ^ mask};
}

SequenceLabel SequenceLabel::random(int length, Rng& rng) {
    if (length < 1 || length > 63) throw std::invalid_argument("SequenceLabel: length in [1, 63]");
    const std::uint64_t mask = (std::uint64_t(1) << length) - 1;
    return SequenceLabel{length, rng.next() & mask};
}

Vector sequence_state(const QuantumSource& source, const SequenceLabel& label) {
    if (source.signal_states.size() != 2 || source.signal_states.front().size() != 2)
        throw std::invalid_argument("sequence_state: needs a two-state qubit source");
    if (label.length < 1 || label.length > 24)
        throw std::invalid_argument("sequence_state: block length outside dense range");
    Vector state = source.signal_states[label.bit(0) ? 1 : 0];
    for (int i = 1; i < label.length; ++i)
        state = qcore::kron(state, source.signal_states[label.bit(i) ? 1 : 0]);
    return state;
}

int LikelySubspace::string_weight(std::size_t index) const {
    const int ones = std::popcount(static_cast<unsigned long long>(index));
    return minority_is_basis_one ? ones : block_length - ones;
}

std::vector<std::size_t> LikelySubspace::dense_indices() const {
    if (block_length > 24)
        throw std::invalid_argument("dense_indices: block length outside dense range");
    const std::size_t dim = std::size_t(1) << block_length;
    std::vector<std::size_t> indices;
    // Class by class, i.e. decreasing eigenvalue, ascending index inside a class.
    for (int w = 0; w <= max_retained_weight; ++w)
        for (std::size_t x = 0; x < dim; ++x)
            if (string_weight(x) == w) indices.push_back(x);
    return indices;
}

std::size_t LikelySubspace::junk_index() const {
    if (minority_is_basis_one) return 0;
    return (std::size_t(1) << block_length) - 1;
}

LikelySubspace build_likely_subspace(const QuantumSource& source, int block_length,
                                     double delta) {
    source.validate();
    if (source.density_matrix.rows() != 2)
        throw std::invalid_argument("build_likely_subspace: qubit sources only");
    require_diagonal_density(source.density_matrix);
    if (block_length < 1) throw std::invalid_argument("build_likely_subspace: n >= 1 required");

    LikelySubspace ls;
    ls.block_length = block_length;
    ls.delta = delta;

    const double p0 = source.density_matrix(0, 0).real();
    const double p1 = source.density_matrix(1, 1).real();
    ls.minority_is_basis_one = p0 >= p1;
    ls.majority_eigenvalue = std::max(p0, p1);
    ls.minority_eigenvalue = std::min(p0, p1);

    const double entropy = qcore::binary_entropy(ls.majority_eigenvalue);
    ls.cap_log2 = block_length * (entropy + delta);
    if (ls.cap_log2 < 0.0)
        throw std::invalid_argument("build_likely_subspace: empty subspace (capacity below one state)");

    const double log2_pmax = log2_or_neg_inf(ls.majority_eigenvalue);
    const double log2_pmin = log2_or_neg_inf(ls.minority_eigenvalue);

    BigInt cumulative = 0;
    ls.max_retained_weight = -1;
    ls.retained_mass = 0.0;
    for (int w = 0; w <= block_length; ++w) {
        const BigInt candidate = cumulative + exact::binomial(block_length, w);
        if (exact::log2_value(candidate) > ls.cap_log2) break;
        cumulative = candidate;
        ls.max_retained_weight = w;
        ls.retained_mass += class_mass(block_length, w, log2_pmax, log2_pmin);
    }
    if (ls.max_retained_weight < 0)
        throw std::invalid_argument("build_likely_subspace: empty subspace (capacity below one state)");
    ls.dimension = cumulative;
    ls.retained_mass = std::min(ls.retained_mass, 1.0);
    return ls;
}

qcore::DensityMatrix compress_block(const Vector& block_state, const LikelySubspace& subspace) {
    const int n = subspace.block_length;
    if (n > kDenseBlockCap)
        throw std::invalid_argument("compress_block: block length outside dense range");
    const Eigen::Index dim = Eigen::Index(1) << n;
    if (block_state.size() != dim)
        throw std::invalid_argument("compress_block: state dimension mismatch");

    Vector projected = Vector::Zero(dim);
    for (Eigen::Index x = 0; x < dim; ++x)
        if (subspace.retains_weight(subspace.string_weight(static_cast<std::size_t>(x))))
            projected(x) = block_state(x);

    const double mass = projected.squaredNorm();
    Matrix w = projected * projected.adjoint();
    const Eigen::Index junk = static_cast<Eigen::Index>(subspace.junk_index());
    w(junk, junk) += 1.0 - mass;
    return DensityMatrix(std::move(w));
}

namespace {

// The closed form needs ||P Psi^x||^2 independent of x: both signal states
// must have the same per-basis magnitudes (they differ by signs only).
void require_sign_symmetric(const QuantumSource& source) {
    if (source.signal_states.size() != 2 || source.signal_states.front().size() != 2)
        throw std::invalid_argument("fidelity_eq10_closed_form: needs a two-state qubit source");
    const Vector& a = source.signal_states[0];
    const Vector& b = source.signal_states[1];
    if (std::abs(std::abs(a(0)) - std::abs(b(0))) > kDiagTol ||
        std::abs(std::abs(a(1)) - std::abs(b(1))) > kDiagTol ||
        std::abs(source.probabilities[0] - 0.5) > kDiagTol)
        throw std::invalid_argument(
            "fidelity_eq10_closed_form: source is not of the equiprobable sign-symmetric form");
}

} // namespace

double fidelity_eq10_closed_form(const QuantumSource& source, int block_length, double delta) {
    require_sign_symmetric(source);
    const LikelySubspace ls = build_likely_subspace(source, block_length, delta);
    const double mass = ls.retained_mass;
    // Junk state is the majority string; its overlap with any Psi^x is the
    // majority eigenvalue to the n-th power, independent of x.
    const double junk_overlap = std::exp2(block_length * log2_or_neg_inf(ls.majority_eigenvalue));
    return mass * mass + (1.0 - mass) * junk_overlap;
}

double fidelity_eq10_enumerated(const QuantumSource& source, int block_length, double delta) {
    if (block_length > 8)
        throw std::invalid_argument("fidelity_eq10_enumerated: capped at 8 (2^n blocks)");
    const LikelySubspace ls = build_likely_subspace(source, block_length, delta);

    double total = 0.0;
    const std::uint64_t count = std::uint64_t(1) << block_length;
    for (std::uint64_t x = 0; x < count; ++x) {
        const SequenceLabel label{block_length, x};
        double px = 1.0;
        for (int i = 0; i < block_length; ++i)
            px *= source.probabilities[label.bit(i) ? 1 : 0];
        if (px == 0.0) continue;
        const Vector psi = sequence_state(source, label);
        total += px * qcore::fidelity(psi, compress_block(psi, ls));
    }
    return total;
}

TwoSidedCompressionReport two_sided_compression_analysis(double theta, int block_length,
                                                         double delta) {
    const QuantumSource source = QuantumSource::rotated_equiprobable(theta);
    const LikelySubspace ls = build_likely_subspace(source, block_length, delta);

    TwoSidedCompressionReport report;
    report.block_length = block_length;
    report.delta = delta;
    report.retained_dimension = ls.dimension;
    report.retained_mass = ls.retained_mass;

    const double log2_pmax = log2_or_neg_inf(ls.majority_eigenvalue);
    const double log2_pmin = log2_or_neg_inf(ls.minority_eigenvalue);
    // Retained squared coefficients range over the class eigenvalues;
    // renormalization cancels in the ratio.
    report.coefficient_dispersion =
        std::exp2(ls.max_retained_weight * (log2_pmax - log2_pmin));

    // (sum_i c_i)^2 / d on the renormalized truncation, class by class in
    // log space: terms C(n,w) sqrt(p_w).
    double max_log = -std::numeric_limits<double>::infinity();
    std::vector<double> logs;
    for (int w = 0; w <= ls.max_retained_weight; ++w) {
        const double lg = exact::log2_value(exact::binomial(block_length, w)) +
                          0.5 * ((block_length - w) * log2_pmax + w * log2_pmin);
        logs.push_back(lg);
        max_log = std::max(max_log, lg);
    }
    double sum = 0.0;
    for (double lg : logs) sum += std::exp2(lg - max_log);
    const double log2_sum = max_log + std::log2(sum);
    report.max_entangled_fidelity =
        std::exp2(2.0 * log2_sum - std::log2(ls.retained_mass) - exact::log2_value(ls.dimension));
    return report;
}

qcore::PureBipartiteState two_sided_compressed_state(double theta, int block_length,
                                                     double delta) {
    if (block_length > kDenseBlockCap)
        throw std::invalid_argument("two_sided_compressed_state: block length outside dense range");
    const QuantumSource source = QuantumSource::rotated_equiprobable(theta);
    const LikelySubspace ls = build_likely_subspace(source, block_length, delta);
    const std::vector<std::size_t> indices = ls.dense_indices();

    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const Eigen::Index d = static_cast<Eigen::Index>(indices.size());
    Matrix amps = Matrix::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        const int w = ls.string_weight(indices[static_cast<std::size_t>(i)]);
        amps(i, i) = std::pow(c, block_length - w) * std::pow(s, w);
    }
    amps /= std::sqrt(ls.retained_mass);
    // Renormalization from double arithmetic can sit slightly off 1.
    amps /= amps.norm();
    return PureBipartiteState(std::move(amps));
}

CounterexampleReport schmidt_coding_counterexample(double theta, int block_length,
                                                   std::span<const SequenceLabel> labels) {
    if (block_length < 2)
        throw std::invalid_argument("schmidt_coding_counterexample: n >= 2 required");
    if (block_length > 20)
        throw std::invalid_argument("schmidt_coding_counterexample: n outside dense range");
    const QuantumSource source = QuantumSource::rotated_equiprobable(theta);

    // Precompute basis indices per weight class.
    const std::size_t dim = std::size_t(1) << block_length;
    std::vector<std::vector<std::size_t>> classes(static_cast<std::size_t>(block_length) + 1);
    for (std::size_t y = 0; y < dim; ++y)
        classes[static_cast<std::size_t>(std::popcount(static_cast<unsigned long long>(y)))]
            .push_back(y);

    CounterexampleReport report{};
    report.theta = theta;
    report.block_length = block_length;
    report.predicted_overlap = std::pow(std::cos(2.0 * theta), block_length);

    double overlap_sum = 0.0;
    for (const SequenceLabel& x : labels) {
        if (x.length != block_length)
            throw std::invalid_argument("schmidt_coding_counterexample: label length mismatch");
        const Vector psi = sequence_state(source, x);
        const Vector psi_bar = sequence_state(source, x.complement());

        // Amplitude-level sign rule <y|Psi^xbar> = (-1)^w(y) <y|Psi^x>.
        for (std::size_t y = 0; y < dim; ++y) {
            const double sign =
                (std::popcount(static_cast<unsigned long long>(y)) % 2 == 0) ? 1.0 : -1.0;
            report.max_sign_rule_deviation =
                std::max(report.max_sign_rule_deviation,
                         std::abs(psi_bar(static_cast<Eigen::Index>(y)) -
                                  sign * psi(static_cast<Eigen::Index>(y))));
        }

        // The k-measurement encoding is the block-diagonal restriction of
        // |psi><psi|; compare the two encodings block by block.
        for (const std::vector<std::size_t>& cls : classes) {
            for (std::size_t a = 0; a < cls.size(); ++a) {
                const Eigen::Index ia = static_cast<Eigen::Index>(cls[a]);
                for (std::size_t b = 0; b < cls.size(); ++b) {
                    const Eigen::Index ib = static_cast<Eigen::Index>(cls[b]);
                    const Complex lhs = psi(ia) * std::conj(psi(ib));
                    const Complex rhs = psi_bar(ia) * std::conj(psi_bar(ib));
                    report.max_encoding_deviation =
                        std::max(report.max_encoding_deviation, std::abs(lhs - rhs));
                }
            }
        }

        overlap_sum += std::abs((psi.adjoint() * psi_bar)(0));
    }
    if (!labels.empty()) report.mean_abs_overlap = overlap_sum / static_cast<double>(labels.size());
    report.fidelity_ceiling = 0.5 * (1.0 + std::abs(report.predicted_overlap));
    return report;
}

CounterexampleReport schmidt_coding_counterexample(double theta, int block_length,
                                                   int sample_count, Rng& rng) {
    std::vector<SequenceLabel> labels;
    labels.reserve(static_cast<std::size_t>(sample_count));
    for (int i = 0; i < sample_count; ++i)
        labels.push_back(SequenceLabel::random(block_length, rng));
    return schmidt_coding_counterexample(theta, block_length, labels);
}

DataExpansionReport data_expansion_demo(Rng& rng) {
    // Majority-up strings of three qubits, lexicographic: 000, 001, 010, 100.
    const std::array<Eigen::Index, 4> encoding = {0, 1, 2, 4};
    Matrix isometry = Matrix::Zero(8, 4);
    for (Eigen::Index b = 0; b < 4; ++b) isometry(encoding[static_cast<std::size_t>(b)], b) = 1.0;

    DataExpansionReport report{};
    for (int trial = 0; trial < 20; ++trial) {
        Vector psi(4);
        for (Eigen::Index i = 0; i < 4; ++i) psi(i) = Complex(rng.normal(), rng.normal());
        psi /= psi.norm();
        const Vector back = isometry.adjoint() * (isometry * psi);
        report.max_roundtrip_error =
            std::max(report.max_roundtrip_error, (back - psi).cwiseAbs().maxCoeff());
    }

    // Encoded maximally mixed two-qubit state: (1/4) sum_b |enc b><enc b|.
    Matrix rho = Matrix::Zero(8, 8);
    for (Eigen::Index b = 0; b < 4; ++b) {
        const Eigen::Index e = encoding[static_cast<std::size_t>(b)];
        rho(e, e) += 0.25;
    }

    // Single-qubit marginals; the three must agree.
    std::array<Matrix, 3> marginals;
    for (int q = 0; q < 3; ++q) {
        Matrix m = Matrix::Zero(2, 2);
        for (Eigen::Index i = 0; i < 8; ++i)
            for (Eigen::Index j = 0; j < 8; ++j) {
                const Eigen::Index bi = (i >> (2 - q)) & 1;
                const Eigen::Index bj = (j >> (2 - q)) & 1;
                // Keep qubit q, trace the others: indices must agree elsewhere.
                const Eigen::Index rest_i = i & ~(Eigen::Index(1) << (2 - q));
                const Eigen::Index rest_j = j & ~(Eigen::Index(1) << (2 - q));
                if (rest_i == rest_j) m(bi, bj) += rho(i, j);
            }
        marginals[static_cast<std::size_t>(q)] = std::move(m);
    }
    for (int q = 1; q < 3; ++q)
        if ((marginals[0] - marginals[static_cast<std::size_t>(q)]).cwiseAbs().maxCoeff() > 1e-12)
            throw std::logic_error("data_expansion_demo: asymmetric single-qubit marginals");

    const DensityMatrix marginal(marginals[0]);
    const RealVector evals = marginal.eigenvalues();
    report.marginal_eigenvalues = Eigen::Vector2d(evals(0), evals(1));
    report.marginal_entropy_bits = marginal.entropy_bits();
    return report;
}

} // namespace entcon::qdc
