#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "dlab/errors.hpp"
#include "dlab/numeric.hpp"

namespace dlab {

enum class Domain { Physical, Spectral };

// Uniform 1-D grid; point i sits at x0 + i*dx.
struct Grid1D {
    double x0 = 0.0;
    double dx = 1.0;
    std::size_t n = 0;

    double point(std::size_t i) const { return x0 + static_cast<double>(i) * dx; }
    double back() const { return point(n == 0 ? 0 : n - 1); }
    double span() const { return n < 2 ? 0.0 : back() - x0; }

    bool compatible(const Grid1D& other, double rtol = 1e-9) const {
        if (n != other.n) return false;
        double scale = std::abs(dx) * static_cast<double>(n > 0 ? n : 1);
        return std::abs(x0 - other.x0) <= rtol * (scale + std::abs(x0) + std::abs(other.x0)) &&
               std::abs(dx - other.dx) <= rtol * std::abs(dx);
    }
};

// A complex-valued function sampled on a uniform grid, tagged with the domain
// it lives in so physical and spectral data cannot be mixed up silently.
struct SampledFunction {
    Domain domain = Domain::Physical;
    Grid1D grid;
    std::vector<Complex> values;

    std::size_t size() const { return values.size(); }

    void validate(const char* module) const {
        if (values.empty()) throw GridError(module, "sampled function has no values");
        if (grid.n != values.size())
            throw GridError(module, "grid point count does not match value count");
        if (!(grid.dx > 0.0) || !std::isfinite(grid.dx) || !std::isfinite(grid.x0))
            throw GridError(module, "grid spacing must be positive and finite");
        for (const Complex& v : values)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw GridError(module, "sampled function contains non-finite values");
    }
};

}  // namespace dlab
