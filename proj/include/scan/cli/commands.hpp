#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace scan::cli {

// Command implementations behind the CLI parser. Each writes a manifest
// echoing its configuration next to its outputs and throws UsageError /
// DataError / NumericError, which main() maps to exit codes 1 / 2 / 3.

struct GenerateConfig {
    std::vector<std::string> classes = {"all"};
    int curves_per_class = 100;
    std::uint64_t seed = 0;
    std::string out_dir;
    int threads = 0; // 0: hardware concurrency
    bool noiseless = false;
};

struct EvaluateConfig {
    std::string dataset_path;
    std::string qgrid_path; // default: qgrid.csv next to the dataset
    std::vector<std::string> classifiers; // names, "all", "all-stack", "top5-stack"
    std::vector<std::string> stacks;      // "all" / "top5"
    std::vector<std::string> variants = {"all"};
    bool full_matrix = false;
    int folds = 5;
    std::uint64_t seed = 0;
    std::string out_dir;
    int threads = 0;
};

struct TrainConfig {
    std::string dataset_path;
    std::string qgrid_path;
    std::vector<std::string> classifiers; // default: random_forest + gradient_boosted_trees
    std::string variant = "all";
    std::uint64_t seed = 0;
    std::string out_dir;
    int threads = 0;
};

struct PredictConfig {
    std::vector<std::string> model_paths;
    std::string dataset_path;
    std::string qgrid_path;
    std::string out_dir;
    int threads = 0;
};

int cmd_generate(const GenerateConfig& config);
int cmd_evaluate(const EvaluateConfig& config);
int cmd_train(const TrainConfig& config);
int cmd_predict(const PredictConfig& config);

/// --out, falling back to $SCAN_HOME, falling back to the working directory.
std::string resolve_out_dir(const std::string& out_flag);

} // namespace scan::cli
