#pragma once

#include <vector>

namespace corrucas {

/// Fixed-order Gauss-Legendre rule on [-1, 1], applied panel-wise.
class GaussLegendre {
public:
    explicit GaussLegendre(int order);

    int order() const noexcept { return static_cast<int>(nodes_.size()); }

    /// Composite rule: [lo, hi] split into `subdivisions` equal panels.
    template <class F>
    double integrate(F&& f, double lo, double hi, int subdivisions = 1) const {
        const double width = (hi - lo) / subdivisions;
        double total = 0.0;
        for (int p = 0; p < subdivisions; ++p) {
            const double a = lo + p * width;
            const double half = 0.5 * width;
            const double centre = a + half;
            double panel = 0.0;
            for (std::size_t i = 0; i < nodes_.size(); ++i) panel += weights_[i] * f(centre + half * nodes_[i]);
            total += half * panel;
        }
        return total;
    }

private:
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

} // namespace corrucas
