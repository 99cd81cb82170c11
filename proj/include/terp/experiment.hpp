#pragma once

#include "terp/pipeline.hpp"
#include "terp/simgen.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace terp {

/// Declarative description of one clustering run or Monte-Carlo benchmark.
/// Exactly one data source: a simulation model or a CSV file.
struct ExperimentConfig {
    std::optional<int> model;
    std::vector<int> sizes;
    std::optional<std::string> data_path;
    std::optional<std::string> truth_path;  // optional labels for CSV input
    Regime regime = Regime::Regular;
    int clusters = 2;
    std::vector<int> k_sweep;  // when non-empty, overrides `clusters`
    int derivative_order = 0;  // 0, 1 or 2 (regular CSV data only)
    EnsembleConfig ensemble;
    int replicates = 1;
    std::uint64_t master_seed = 1;
    std::string output_dir;   // empty: nothing is written
    bool plots = true;        // SVG for the first replicate
    bool record_time = false; // wall_seconds column; off keeps results byte-reproducible
    std::size_t threads = 0;

    void validate() const;
};

/// Simulated dataset in the requested regime: Regular on 100 points,
/// Irregular as 100 of 1000 fine-grid points, Fragmented as the 100-point
/// grid with one of ten segments removed.
LabeledDataset simulate_dataset(int model, const std::vector<int>& sizes, Regime regime, const SeedSpec& seed);

struct KSweepEntry {
    int clusters = 0;
    double cost = 0.0;
};

struct ReplicateSummary {
    int replicate = 0;  // 1-based
    int clusters = 0;
    EnsembleResult ensemble;
    std::vector<KSweepEntry> k_sweep;
    std::optional<double> rand;
    double wall_seconds = 0.0;
};

struct ExperimentReport {
    std::vector<ReplicateSummary> replicates;
    std::optional<double> mean_rand;
    std::optional<double> sd_rand;
    std::vector<std::string> family_names;

    /// Count of replicates per selected (l*, M*, s*).
    std::vector<std::pair<std::string, int>> selection_counts() const;
};

/// Best K by minimal final ensemble cost; ties go to the smaller K.
int best_k(const std::vector<KSweepEntry>& sweep);

/// Runs every replicate and, if cfg.output_dir is set, writes results.csv,
/// vtable.csv, summary.txt, labels_rep<r>.csv, ksweep.csv (with a K sweep)
/// and clusters_rep1.svg. Inputs are read before any computation starts.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

}  // namespace terp
