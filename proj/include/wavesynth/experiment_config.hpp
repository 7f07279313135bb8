#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "wavesynth/sampling.hpp"

namespace wavesynth {

/// Names accepted by resolve_config / run_experiment.
const std::vector<std::string>& experiment_names();

/// Fully resolved parameters of one named experiment. Fields an experiment
/// does not consume keep their zero values and are omitted from to_json().
struct ExperimentConfig {
    std::string experiment;
    double kappa = 16.0;
    double eps = 1e-14;
    double oversampling = 2.0;
    std::vector<SamplingStrategy> strategies;
    std::uint64_t seed = 0;

    int P = 0;
    int M = 0;
    /// Explicit boundary sample count; 0 means ceil(oversampling * M).
    int S = 0;
    std::vector<int> Ms;
    int p_min = 0;
    int p_max = 0;

    std::vector<int> Ps;
    std::vector<double> ratios;

    double sigma = 0.0;
    double max_factor = 0.0;
    double resolution = 0.0;

    bool bulk = false;
    std::vector<std::string> sources;
    std::vector<std::string> kinds;

    std::vector<double> kappas;
    double p_factor = 0.0;

    /// Boundary sample count for an approximation set of size M.
    int samples_for(int M) const;
    /// True when the outcome depends on pseudo-random draws.
    bool randomized() const;
    /// Canonical JSON (sorted keys, two-space indent, trailing newline).
    std::string to_json() const;
};

/// Parses `json_text` (an object; may be empty) for `experiment`, fills
/// defaults derived from kappa and validates every field. Keys that the
/// experiment does not use are rejected. Throws ConfigError naming the key.
ExperimentConfig resolve_config(std::string_view experiment, std::string_view json_text);

} // namespace wavesynth
