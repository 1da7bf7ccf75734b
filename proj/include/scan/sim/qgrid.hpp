#pragma once

#include <cstddef>
#include <vector>

namespace scan {

/// Scattering-vector grid. The standard grid is 500 log-spaced points on
/// [1e-3, 3] nm^-1 with both endpoints exact.
class QGrid {
public:
    static constexpr int kPoints = 500;
    static constexpr double kMin = 1e-3;
    static constexpr double kMax = 3.0;

    static QGrid standard();

    /// Wraps explicit values (file input); validated to be finite, positive
    /// and strictly increasing.
    explicit QGrid(std::vector<double> values);

    const std::vector<double>& values() const { return q_; }
    std::size_t size() const { return q_.size(); }
    double operator[](std::size_t i) const { return q_[i]; }

    /// True when both grids agree point-wise within 1e-9 relative (the
    /// 9-significant-digit serialization contract).
    bool matches(const QGrid& other) const;

private:
    QGrid() = default;
    std::vector<double> q_;
};

} // namespace scan
