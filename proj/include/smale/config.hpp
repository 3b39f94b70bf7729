#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace smale {

using Json = nlohmann::ordered_json;

// Schema-validated experiment description. Everything that can change a
// result lives here; command-line flags only pick output paths and verbosity.
struct ExperimentConfig {
    int schema_version = 1;
    std::uint64_t seed = 0;

    std::string model_type;                       // "sft" | "torus"
    std::vector<std::vector<long>> model_matrix;  // transition or torus matrix

    // P and Q as slices of the deterministic orbit list of a given period
    struct OrbitPick {
        int period = 1;
        int count = 1;
        int offset = 0;
    };
    OrbitPick p_pick, q_pick;

    int basis_bound = 6;

    struct PartitionCfg {
        int win_radius = 3;      // SFT support window
        int multiplicity = 1;    // centers per window
        double grid_factor = 1.4;  // torus cover cell sizing
        int support_halvings = 0;  // extra support shrink (phi-compatible covers)
        bool phi_disjoint = false;
        int seed_pairs = 200;      // tensor seed pairs
        int cover_v_bound = 60;    // torus lattice range for the cover basis
    };
    PartitionCfg partition;

    struct Horizons {
        int n_max = 30;
        int window = 30;
        int steps = 32;
    };
    Horizons horizons;

    struct Tolerances {
        double idem = 1e-9;
        double entrywise = 1e-12;
        double residue = 1e-12;
        double decay = 1e-6;
        double dual_norm = 1e-10;
        double continuity = 0.5;
    };
    Tolerances tolerances;

    struct Samples {
        long axioms = 10000;
        long partition = 10000;
        long lemma21 = 1000;
        int element_pairs = 50;
    };
    Samples samples;

    // k-theory suites
    int corpus_count = 100;
    int corpus_max_size = 6;
    int snf_random_count = 500;

    static ExperimentConfig from_json(const Json& j);
    static ExperimentConfig from_file(const std::string& path);
    Json to_json() const;
};

}  // namespace smale
