#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "scan/sim/form_factors.hpp"
#include "scan/sim/params.hpp"
#include "scan/sim/qgrid.hpp"
#include "scan/util/rng.hpp"

namespace scan {

/// One measured or simulated curve on a shared q grid.
struct Curve {
    std::vector<double> intensity;
    std::optional<int> label;          // ShapeClass encoding when known
    std::optional<ModelParams> params; // provenance when simulated
    std::string meta;                  // raw meta_json when loaded from file
};

struct Dataset {
    QGrid q{std::vector<double>{1.0}};
    std::vector<Curve> curves;
    std::uint64_t seed = 0;

    bool labeled() const;
    /// Per-class curve counts (size kNumShapeClasses); requires labels.
    std::vector<int> class_counts() const;
    /// Label vector; throws DataError if any curve is unlabeled.
    std::vector<int> labels() const;
};

/// Counting noise: each point is replaced by
/// Poisson(intensity * exposure) / exposure. A non-finite exposure returns
/// the input unchanged (the noiseless pipeline).
std::vector<double> apply_poisson_noise(const std::vector<double>& intensity, double exposure,
                                        Rng& rng);

struct GenerateOptions {
    bool noiseless = false; // skip the Poisson stage entirely
    int threads = 1;
};

/// Balanced labeled dataset: curves_per_class curves for every requested
/// class. Each curve draws from an independent substream derived from
/// (seed, class, index), so output is bit-identical for any thread count.
Dataset generate_dataset(const std::vector<ShapeClass>& classes, int curves_per_class,
                         const QGrid& q, std::uint64_t seed, const GenerateOptions& opts = {});

} // namespace scan
