#pragma once

#include "cdmd/methods.hpp"
#include "cdmd/montecarlo.hpp"

#include <map>
#include <ostream>
#include <string>
#include <vector>

// Config-file driven experiment runs. Configs are flat `key = value` text
// with dotted section prefixes (see configs/ for the bundled ones); every
// output under the chosen directory is a pure function of the config, so
// reruns are byte-identical.

namespace cdmd {

enum class Study { EigScatter, Consistency, Trajectory };

struct ExperimentConfig {
    Study study = Study::EigScatter;
    SystemConfig system;
    Index n = 32;                  // snapshot pairs (eigscatter/trajectory)
    std::vector<Index> n_list;     // consistency sweep sizes
    Index r = 0;                   // 0: per-system default
    NoiseSpec noise;
    std::vector<Method> methods;
    int trials = 500;
    std::uint64_t seed = 0;
    Complex truth{0.0, 0.0};
    bool truth_set = false;        // false: per-system default
    double metric_a = 0.9;
    SolverOptions solver;
    std::string output_dir = "results";
    std::map<std::string, std::string> raw;  // config file echo for the manifest

    /// Parses and validates a config file; throws std::invalid_argument with
    /// the offending key on any problem (unknown keys are errors).
    static ExperimentConfig from_file(const std::string& path);

    Index effective_r() const { return r > 0 ? r : system.default_rank(); }
    Complex effective_truth() const { return truth_set ? truth : system.default_truth(); }
};

/// Raw key-value view of a config file (used for the manifest echo).
std::map<std::string, std::string> read_config_pairs(const std::string& path);

/// Runs the configured study, writing CSV/JSON artifacts plus manifest.json
/// under `output_dir` (override with `out_override`). Returns the number of
/// failed trials across all batches.
int run_experiment(const ExperimentConfig& cfg, const std::string& out_override,
                   std::ostream& log);

}  // namespace cdmd
