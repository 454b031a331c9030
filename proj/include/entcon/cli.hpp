// CSV-emitting command runners behind the entcon CLI; kept here so tests can
// drive them directly.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace entcon::cli {

// %.12g with C-locale semantics; the single number formatter for all CSV.
std::string format_double(double v);

struct Fig1Options {
    int grid_points = 99;                    // cos^2 theta = i/(grid_points+1)
    std::vector<int> n_list = {2, 4, 8, 32};
};

// Columns: cos2theta,method,yield_per_pair. Deterministic, no sampling.
void run_fig1(const Fig1Options& options, std::ostream& out);

struct ConcentrateOptions {
    double theta = 0.0;
    int pair_count = 0;
    double epsilon = 0.0;
    long batches = 0;
    int trials = 0;
    std::uint64_t seed = 1;
};

// One row per trial plus a summary row carrying the mean yield rate and the
// exact per-pair prediction.
void run_concentrate(const ConcentrateOptions& options, std::ostream& out);

struct QdcOptions {
    double theta = 0.0;
    std::vector<int> n_list;
    double delta = 0.0;
};

// Columns: theta,n,delta,retained_dim,retained_mass,fidelity,
// max_ent_fidelity,overlap.
void run_qdc(const QdcOptions& options, std::ostream& out);

struct DiluteOptions {
    double theta = 0.0;
    int copies = 0;
    double delta = 0.0;
    int trials = 0;
    std::uint64_t seed = 1;
    // "auto": direct single-pair preparation when copies == 1, compressed
    // otherwise. Explicit "direct"/"compressed" override.
    std::string mode = "auto";
};

void run_dilute(const DiluteOptions& options, std::ostream& out);

// Shared flag resolution: exactly one of --theta/--cos2; returns theta.
double resolve_theta(bool has_theta, double theta, bool has_cos2, double cos2);

} // namespace entcon::cli
