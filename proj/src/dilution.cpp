#include "entcon/dilution.hpp"

#include "entcon/detail/format.hpp"
#include "entcon/schmidt_projection.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace entcon::dilution {

namespace {

using exact::BigInt;
using qcore::Complex;
using qcore::Matrix;
using qcore::PureBipartiteState;
using qcore::Vector;

long ceil_log2_dim(Eigen::Index d) {
    long bits = 0;
    while ((Eigen::Index(1) << bits) < d) ++bits;
    return bits;
}

// Extracts the unitary W with resource amplitudes R = W / sqrt(d); the check
// R R† = I/d is exactly the maximal-entanglement test.
Matrix resource_unitary(const PureBipartiteState& resource) {
    if (resource.dim_a() != resource.dim_b())
        throw std::invalid_argument("teleport: resource must be square");
    const Eigen::Index d = resource.dim_a();
    const Matrix& r = resource.amplitudes();
    const Matrix gram = r * r.adjoint();
    if ((gram - Matrix::Identity(d, d) / static_cast<double>(d)).cwiseAbs().maxCoeff() >
        qcore::kOpTol)
        throw std::invalid_argument("teleport: resource is not maximally entangled");
    return std::sqrt(static_cast<double>(d)) * r;
}

// Shift and phase operators of the generalized Bell basis.
Matrix shift_operator(Eigen::Index d, int p) {
    Matrix x = Matrix::Zero(d, d);
    for (Eigen::Index j = 0; j < d; ++j) x((j + p) % d, j) = 1.0;
    return x;
}

Matrix phase_operator(Eigen::Index d, int q) {
    Matrix z = Matrix::Zero(d, d);
    for (Eigen::Index j = 0; j < d; ++j) {
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(q) *
                             static_cast<double>(j) / static_cast<double>(d);
        z(j, j) = Complex(std::cos(angle), std::sin(angle));
    }
    return z;
}

// Bell vector |Phi_pq> on C ⊗ A: (1/sqrt d) sum_j w^(jq) |j>_C |j+p>_A.
Vector bell_vector(Eigen::Index d, int p, int q) {
    Vector v = Vector::Zero(d * d);
    const double inv = 1.0 / std::sqrt(static_cast<double>(d));
    for (Eigen::Index j = 0; j < d; ++j) {
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(q) *
                             static_cast<double>(j) / static_cast<double>(d);
        v(j * d + (j + p) % d) = inv * Complex(std::cos(angle), std::sin(angle));
    }
    return v;
}

TeleportationLedger make_ledger(Eigen::Index d) {
    const long qubits = ceil_log2_dim(d);
    return TeleportationLedger{qubits, 2 * qubits, d};
}

Matrix correction_operator(const Matrix& w, Eigen::Index d, int p, int q) {
    return phase_operator(d, q) * shift_operator(d, (d - p) % d) * w.conjugate();
}

// Bob's unnormalized branch for outcome (p, q): (1/d) W^T X^p Z^(-q) input.
Vector bob_branch(const Vector& input, const Matrix& w, int p, int q) {
    const Eigen::Index d = input.size();
    const Vector v = phase_operator(d, -q) * input;
    const Vector u = shift_operator(d, p) * v;
    return (w.transpose() * u) / static_cast<double>(d);
}

TeleportResult finish_teleport(const Vector& input, const Matrix& w, Eigen::Index d, int p,
                               int q, double probability) {
    Vector branch = bob_branch(input, w, p, q);
    branch /= std::sqrt(probability);
    TeleportResult result{correction_operator(w, d, p, q) * branch, p, q, probability,
                          make_ledger(d)};
    return result;
}

} // namespace

TeleportResult generalized_teleport(const Vector& input, const PureBipartiteState& resource,
                                    Rng& rng) {
    const Matrix w = resource_unitary(resource);
    const Eigen::Index d = resource.dim_a();
    if (input.size() != d) throw std::invalid_argument("teleport: input dimension mismatch");
    if (std::abs(input.squaredNorm() - 1.0) > qcore::kNormTol)
        throw std::invalid_argument("teleport: input not normalized");

    std::vector<double> probs;
    probs.reserve(static_cast<std::size_t>(d) * static_cast<std::size_t>(d));
    for (int p = 0; p < d; ++p)
        for (int q = 0; q < d; ++q) probs.push_back(bob_branch(input, w, p, q).squaredNorm());
    const int outcome = rng.sample_discrete(probs);
    const int p = outcome / static_cast<int>(d);
    const int q = outcome % static_cast<int>(d);
    return finish_teleport(input, w, d, p, q, probs[static_cast<std::size_t>(outcome)]);
}

TeleportResult generalized_teleport(const Vector& input, const PureBipartiteState& resource,
                                    int shift, int phase) {
    const Matrix w = resource_unitary(resource);
    const Eigen::Index d = resource.dim_a();
    if (input.size() != d) throw std::invalid_argument("teleport: input dimension mismatch");
    if (shift < 0 || shift >= d || phase < 0 || phase >= d)
        throw std::invalid_argument("teleport: outcome indices out of range");
    const double probability = bob_branch(input, w, shift, phase).squaredNorm();
    return finish_teleport(input, w, d, shift, phase, probability);
}

TeleportResult teleport_via_referee(const Vector& input, const PureBipartiteState& resource,
                                    Rng& rng, locc::Transcript* transcript) {
    const Matrix w = resource_unitary(resource);
    const Eigen::Index d = resource.dim_a();
    if (input.size() != d) throw std::invalid_argument("teleport: input dimension mismatch");

    // Alice holds C ⊗ A (input and her resource half), Bob holds B.
    Matrix joint(d * d, d);
    for (Eigen::Index c = 0; c < d; ++c)
        for (Eigen::Index a = 0; a < d; ++a)
            for (Eigen::Index b = 0; b < d; ++b)
                joint(c * d + a, b) = input(c) * resource.amplitudes()(a, b);
    locc::Referee referee(PureBipartiteState(std::move(joint)), /*audit_each_step=*/true);

    std::vector<Matrix> projectors;
    projectors.reserve(static_cast<std::size_t>(d) * static_cast<std::size_t>(d));
    for (int p = 0; p < d; ++p)
        for (int q = 0; q < d; ++q) {
            const Vector phi = bell_vector(d, p, q);
            projectors.push_back(phi * phi.adjoint());
        }
    const locc::MeasurementResult bell =
        referee.apply(locc::LocalOperation::von_neumann(locc::PartyId::Alice, projectors), rng);
    const int p = bell.outcome / static_cast<int>(d);
    const int q = bell.outcome % static_cast<int>(d);
    referee.send_message(locc::PartyId::Alice,
                         detail::to_binary_string(static_cast<unsigned long>(bell.outcome),
                                                  static_cast<int>(2 * ceil_log2_dim(d))));

    referee.apply(
        locc::LocalOperation::unitary(locc::PartyId::Bob, correction_operator(w, d, p, q)), rng);

    // The Bell register factored out; contract it away to read Bob's state.
    const Vector phi = bell_vector(d, p, q);
    const Matrix& amps = referee.joint().amplitudes();
    Vector output = Vector::Zero(d);
    for (Eigen::Index row = 0; row < d * d; ++row)
        for (Eigen::Index b = 0; b < d; ++b) output(b) += std::conj(phi(row)) * amps(row, b);

    if (referee.worst_no_signaling_deviation() > 1e-9)
        throw std::logic_error("teleport_via_referee: no-signaling audit failed");
    if (transcript != nullptr) *transcript = referee.transcript();
    return TeleportResult{std::move(output), p, q, bell.probability, make_ledger(d)};
}

qcore::DensityMatrix premessage_bob_marginal(const Vector& input,
                                             const PureBipartiteState& resource) {
    const Matrix w = resource_unitary(resource);
    const Eigen::Index d = resource.dim_a();
    if (input.size() != d) throw std::invalid_argument("teleport: input dimension mismatch");
    Matrix rho = Matrix::Zero(d, d);
    for (int p = 0; p < d; ++p)
        for (int q = 0; q < d; ++q) {
            const Vector branch = bob_branch(input, w, p, q);  // carries its probability
            rho += branch * branch.adjoint();
        }
    return qcore::DensityMatrix(std::move(rho));
}

RemotePreparation prepare_entangled_remote(const PureBipartiteState& target,
                                           long singlet_supply, Rng& rng) {
    const Eigen::Index d = target.dim_b();
    const long needed = ceil_log2_dim(d);
    if (singlet_supply < needed)
        throw std::invalid_argument("prepare_entangled_remote: insufficient singlet supply");
    const Eigen::Index dim_resource = Eigen::Index(1) << needed;

    // Alice prepares the target on A ⊗ C locally, padding C up to the
    // resource dimension, then teleports C into Bob's B.
    Matrix padded = Matrix::Zero(target.dim_a(), dim_resource);
    padded.leftCols(d) = target.amplitudes();

    const PureBipartiteState resource = PureBipartiteState::maximally_entangled(dim_resource);
    const Matrix w = resource_unitary(resource);

    // Joint pure state over Alice = A ⊗ C ⊗ A' and Bob = B.
    const Eigen::Index da = target.dim_a();
    Matrix joint(da * dim_resource * dim_resource, dim_resource);
    for (Eigen::Index a = 0; a < da; ++a)
        for (Eigen::Index c = 0; c < dim_resource; ++c)
            for (Eigen::Index ap = 0; ap < dim_resource; ++ap)
                for (Eigen::Index b = 0; b < dim_resource; ++b)
                    joint((a * dim_resource + c) * dim_resource + ap, b) =
                        padded(a, c) * resource.amplitudes()(ap, b);
    locc::Referee referee(PureBipartiteState(std::move(joint)), /*audit_each_step=*/false);

    // Bell measurement on C ⊗ A'; identity on A.
    std::vector<Matrix> projectors;
    const Matrix id_a = Matrix::Identity(da, da);
    for (int p = 0; p < dim_resource; ++p)
        for (int q = 0; q < dim_resource; ++q) {
            const Vector phi = bell_vector(dim_resource, p, q);
            projectors.push_back(qcore::kron(id_a, Matrix(phi * phi.adjoint())));
        }
    const locc::MeasurementResult bell =
        referee.apply(locc::LocalOperation::von_neumann(locc::PartyId::Alice, projectors), rng);
    const int p = bell.outcome / static_cast<int>(dim_resource);
    const int q = bell.outcome % static_cast<int>(dim_resource);
    referee.send_message(locc::PartyId::Alice,
                         detail::to_binary_string(static_cast<unsigned long>(bell.outcome),
                                                  static_cast<int>(2 * needed)));
    referee.apply(locc::LocalOperation::unitary(locc::PartyId::Bob,
                                                correction_operator(w, dim_resource, p, q)),
                  rng);

    // Contract the collapsed Bell register to obtain the shared A:B state.
    const Vector phi = bell_vector(dim_resource, p, q);
    const Matrix& amps = referee.joint().amplitudes();
    Matrix shared = Matrix::Zero(da, dim_resource);
    for (Eigen::Index a = 0; a < da; ++a)
        for (Eigen::Index c = 0; c < dim_resource; ++c)
            for (Eigen::Index ap = 0; ap < dim_resource; ++ap)
                shared.row(a) += std::conj(phi(c * dim_resource + ap)) *
                                 amps.row((a * dim_resource + c) * dim_resource + ap);

    // Drop the padding columns; they carry no amplitude.
    Matrix trimmed = shared.leftCols(d);
    trimmed /= trimmed.norm();
    return RemotePreparation{PureBipartiteState(std::move(trimmed)),
                             TeleportationLedger{needed, 2 * needed, d}, p, q};
}

namespace {

// Qubit budget of the compressed teleport: the likely-subspace cap rounded up
// to whole qubits, never more than the uncompressed n and never below what
// the retained dimension itself needs.
long compression_budget(long copies, double cap_log2, const BigInt& retained_dim) {
    long budget = std::max<long>(static_cast<long>(std::ceil(cap_log2 - 1e-12)), 0);
    if (retained_dim > 0) budget = std::max(budget, exact::ceil_log2(retained_dim));
    return std::min(copies, budget);
}

} // namespace

CompressedPreparation prepare_entangled_compressed(double theta, int copies, double delta,
                                                   Rng& rng) {
    if (copies < 1 || copies > schmidt::kDenseCap)
        throw std::invalid_argument("prepare_entangled_compressed: copies outside dense range");

    const qdc::QuantumSource source = qdc::QuantumSource::rotated_equiprobable(theta);
    const qdc::LikelySubspace subspace = qdc::build_likely_subspace(source, copies, delta);
    const long budget = compression_budget(copies, subspace.cap_log2, subspace.dimension);

    CompressedPreparation prep;
    prep.retained_dimension = subspace.dimension;
    prep.fidelity = subspace.retained_mass;
    prep.ledger = TeleportationLedger{budget, 2 * budget, Eigen::Index(1) << budget};

    // Alice's A:C copy of the target block; C is her local stand-in for B.
    const PureBipartiteState target = PureBipartiteState::pair_block(theta, copies);

    // Schumacher step: Alice's local two-outcome projection of C onto the
    // likely subspace.
    const Eigen::Index dim = target.dim_b();
    Matrix projected = target.amplitudes();
    for (Eigen::Index x = 0; x < dim; ++x)
        if (!subspace.retains_weight(subspace.string_weight(static_cast<std::size_t>(x))))
            projected.col(x).setZero();
    const double mass = projected.squaredNorm();
    prep.projection_succeeded = rng.uniform() < mass;
    if (!prep.projection_succeeded) return prep;
    projected /= std::sqrt(mass);

    // Pack the retained C basis into a 2^budget register.
    const std::vector<std::size_t> retained = subspace.dense_indices();
    const Eigen::Index packed_dim = Eigen::Index(1) << budget;
    if (static_cast<Eigen::Index>(retained.size()) > packed_dim)
        throw std::logic_error("prepare_entangled_compressed: budget below retained dimension");

    Matrix packed = Matrix::Zero(target.dim_a(), packed_dim);
    for (std::size_t slot = 0; slot < retained.size(); ++slot)
        packed.col(static_cast<Eigen::Index>(slot)) =
            projected.col(static_cast<Eigen::Index>(retained[slot]));

    // Teleport the packed register through the canonical 2^budget resource.
    // The branch maps scale unitaries, so every Bell outcome has probability
    // exactly 1/D^2; sample one and play its branch plus correction.
    const Eigen::Index big_d = packed_dim;
    const int outcome =
        static_cast<int>(std::min<double>(rng.uniform() * static_cast<double>(big_d * big_d),
                                          static_cast<double>(big_d * big_d - 1)));
    const int p = outcome / static_cast<int>(big_d);
    const int q = outcome % static_cast<int>(big_d);

    Matrix teleported = Matrix::Zero(target.dim_a(), big_d);
    for (Eigen::Index c = 0; c < big_d; ++c) {
        const double angle = -2.0 * std::numbers::pi * static_cast<double>(q) *
                             static_cast<double>(c) / static_cast<double>(big_d);
        teleported.col((c + p) % big_d) =
            Complex(std::cos(angle), std::sin(angle)) * packed.col(c);
    }
    Matrix corrected = Matrix::Zero(target.dim_a(), big_d);
    for (Eigen::Index b = 0; b < big_d; ++b)
        corrected.col((b + big_d - p) % big_d) = teleported.col(b);
    for (Eigen::Index b = 0; b < big_d; ++b) {
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(q) *
                             static_cast<double>(b) / static_cast<double>(big_d);
        corrected.col(b) *= Complex(std::cos(angle), std::sin(angle));
    }

    // Bob unpacks the retained basis back into the original block dimensions.
    Matrix decoded = Matrix::Zero(target.dim_a(), dim);
    for (std::size_t slot = 0; slot < retained.size(); ++slot)
        decoded.col(static_cast<Eigen::Index>(retained[slot])) =
            corrected.col(static_cast<Eigen::Index>(slot));
    decoded /= decoded.norm();
    prep.shared = PureBipartiteState(std::move(decoded));
    return prep;
}

CompressedCost compressed_cost(double theta, long copies, double delta) {
    if (copies < 1) throw std::invalid_argument("compressed_cost: copies >= 1 required");
    const double c2 = std::cos(theta) * std::cos(theta);
    const double entropy = qcore::binary_entropy(c2);
    const double cap_log2 = static_cast<double>(copies) * (entropy + delta);
    if (cap_log2 < 0.0) throw std::invalid_argument("compressed_cost: empty subspace");

    const double pmax = std::max(c2, 1.0 - c2);
    const double pmin = std::min(c2, 1.0 - c2);
    const double log2_pmax = std::log2(pmax);
    const double log2_pmin = pmin > 0.0 ? std::log2(pmin) : -1e300;

    BigInt cumulative = 0;
    double mass = 0.0;
    for (long w = 0; w <= copies; ++w) {
        const BigInt candidate = cumulative + exact::binomial(copies, w);
        if (exact::log2_value(candidate) > cap_log2) break;
        cumulative = candidate;
        mass += std::exp2(exact::log2_value(exact::binomial(copies, w)) +
                          static_cast<double>(copies - w) * log2_pmax +
                          static_cast<double>(w) * log2_pmin);
    }
    const long budget = compression_budget(theta, copies, delta);
    CompressedCost cost;
    cost.singlets = budget;
    cost.classical_bits = 2 * budget;
    cost.retained_dimension = cumulative;
    cost.fidelity = std::min(mass, 1.0);
    cost.singlets_per_copy = static_cast<double>(budget) / static_cast<double>(copies);
    return cost;
}

} // namespace entcon::dilution
