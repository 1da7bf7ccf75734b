#include "scan/sim/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>

#include "scan/util/error.hpp"
#include "scan/util/parallel.hpp"

namespace scan {

bool Dataset::labeled() const {
    return !curves.empty() &&
           std::all_of(curves.begin(), curves.end(), [](const Curve& c) { return c.label.has_value(); });
}

std::vector<int> Dataset::class_counts() const {
    std::vector<int> counts(kNumShapeClasses, 0);
    for (const auto& c : curves) {
        if (c.label) ++counts[*c.label];
    }
    return counts;
}

std::vector<int> Dataset::labels() const {
    std::vector<int> out;
    out.reserve(curves.size());
    for (std::size_t i = 0; i < curves.size(); ++i) {
        if (!curves[i].label) throw DataError("curve " + std::to_string(i) + " is unlabeled");
        out.push_back(*curves[i].label);
    }
    return out;
}

std::vector<double> apply_poisson_noise(const std::vector<double>& intensity, double exposure,
                                        Rng& rng) {
    if (!std::isfinite(exposure)) return intensity;
    if (exposure <= 0.0) throw std::invalid_argument("exposure must be > 0");
    std::vector<double> out(intensity.size());
    for (std::size_t i = 0; i < intensity.size(); ++i) {
        out[i] = static_cast<double>(rng.poisson(intensity[i] * exposure)) / exposure;
    }
    return out;
}

namespace {

// Per-curve generation. Draw order from the substream is fixed: geometry,
// relative background, peak counts, Poisson stream.
Curve generate_curve(ShapeClass cls, const QGrid& q, Rng& rng, bool noiseless, bool* shrunk) {
    Curve curve;
    ModelParams params = sample_params(cls, rng);
    const double rel_background = rng.log_uniform(1e-6, 1e-3);
    const double peak_counts = rng.log_uniform(1e3, 1e5);

    std::vector<double> intensity = evaluate_intensity(q, params, shrunk);
    const double peak = *std::max_element(intensity.begin(), intensity.end());
    params.background = rel_background * peak;
    for (double& v : intensity) v += params.background;

    if (!noiseless) {
        const double exposure = peak_counts / (peak + params.background);
        intensity = apply_poisson_noise(intensity, exposure, rng);
    }
    for (std::size_t i = 0; i < intensity.size(); ++i) {
        if (!std::isfinite(intensity[i]) || intensity[i] < 0.0) {
            throw NumericError("non-finite or negative intensity at grid point " +
                               std::to_string(i));
        }
    }
    curve.intensity = std::move(intensity);
    curve.label = static_cast<int>(cls);
    curve.params = params;
    return curve;
}

} // namespace

Dataset generate_dataset(const std::vector<ShapeClass>& classes, int curves_per_class,
                         const QGrid& q, std::uint64_t seed, const GenerateOptions& opts) {
    if (curves_per_class < 1) throw std::invalid_argument("curves_per_class must be >= 1");
    if (classes.empty()) throw std::invalid_argument("at least one class required");

    Dataset ds;
    ds.q = q;
    ds.seed = seed;
    ds.curves.resize(classes.size() * static_cast<std::size_t>(curves_per_class));

    std::vector<std::uint8_t> shrunk_flags(ds.curves.size(), 0);
    parallel_for(ds.curves.size(), opts.threads, [&](std::size_t idx) {
        const std::size_t class_pos = idx / curves_per_class;
        const std::size_t curve_idx = idx % curves_per_class;
        const ShapeClass cls = classes[class_pos];
        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(cls), curve_idx));
        try {
            bool shrunk = false;
            ds.curves[idx] = generate_curve(cls, q, rng, opts.noiseless, &shrunk);
            shrunk_flags[idx] = shrunk ? 1 : 0;
        } catch (const std::exception& e) {
            throw NumericError("generating " + to_string(cls) + " curve " +
                               std::to_string(curve_idx) + ": " + e.what());
        }
    });

    const auto shrunk_count = std::count(shrunk_flags.begin(), shrunk_flags.end(), 1);
    if (shrunk_count > 0) {
        std::cerr << "warning: polydispersity window shrunk for " << shrunk_count
                  << " curves (non-positive abscissae dropped)\n";
    }
    return ds;
}

} // namespace scan
