#pragma once

#include <string>
#include <vector>

#include "scan/eval/eval.hpp"
#include "scan/sim/dataset.hpp"

namespace scan {

/// Writes `content` to `path` via a temp file + rename, so interrupted runs
/// never leave half-written outputs.
void write_file_atomic(const std::string& path, const std::string& content);

// Dataset CSV schema (bit-exact):
//   header  label,p0,...,p7,meta_json,I_0,...,I_<n-1>
//   label   class name, empty for unlabeled curves
//   p0..p7  numeric parameter slots (scale, background, then class-specific)
//   meta_json  quoted JSON provenance record
//   I_*     intensities, 9 significant digits
// The label column may be absent (experimental data). A companion
// qgrid.csv (header `q`, one value per row) carries the grid.

void write_dataset_csv(const std::string& path, const Dataset& ds);
void write_qgrid_csv(const std::string& path, const QGrid& q);

QGrid read_qgrid_csv(const std::string& path);

/// Parses curves against the given grid; row-level errors carry 1-based data
/// row numbers. Unlabeled files are accepted (labels left unset).
Dataset read_curves_csv(const std::string& path, const QGrid& q);

/// Per-classifier prediction block for the predictions CSV.
struct PredictionBlock {
    std::string name;                 // column prefix
    std::vector<std::string> labels;  // predicted class names
    std::vector<double> confidences;  // max class probability per row
};

/// Columns: row_id, then <name>_label,<name>_confidence per block;
/// confidences with 6 decimal places.
void write_predictions_csv(const std::string& path, std::size_t n_rows,
                           const std::vector<PredictionBlock>& blocks);

/// Deterministic report file (fold accuracies, summary, confusion matrix).
/// Timing is written to a separate `*_timing.csv` sidecar so report files
/// are byte-identical across reruns.
void write_report_csv(const std::string& path, const EvalReport& report);
void write_timing_csv(const std::string& path, const EvalReport& report);

/// `<classifier>_<variant>` file stem used for report outputs.
std::string report_stem(const EvalReport& report);

// ModelParams <-> provenance JSON (meta_json column).
std::string params_to_json(const ModelParams& p);
ModelParams params_from_json(const std::string& json_text);

} // namespace scan
