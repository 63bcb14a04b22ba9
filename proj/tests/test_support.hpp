#pragma once

#include <cstdint>
#include <random>

#include "crowdflow/grid.hpp"

namespace testing_support {

using namespace crowdflow;

// Fixed-seed generator for property tests.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    std::size_t index(std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
    }
    bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }

    ScalarField field(std::size_t n, double lo, double hi) {
        ScalarField f(n);
        for (auto& v : f) v = uniform(lo, hi);
        return f;
    }

    BoundarySpec boundary() {
        BoundarySpec spec;
        for (auto& tag : spec.sides) tag = coin() ? BoundaryTag::Dirichlet : BoundaryTag::Neumann;
        spec.sides[index(0, 3)] = BoundaryTag::Dirichlet;
        return spec;
    }

    Grid grid(std::size_t max_cells_per_side) {
        const std::size_t nx = index(1, max_cells_per_side);
        const std::size_t ny = index(1, max_cells_per_side);
        const double x0 = uniform(-2.0, 2.0);
        const double y0 = uniform(-2.0, 2.0);
        return build_grid(nx, ny, {x0, y0, x0 + uniform(0.5, 3.0), y0 + uniform(0.5, 3.0)}, boundary());
    }

private:
    std::mt19937_64 rng_;
};

inline BoundarySpec sides(BoundaryTag left, BoundaryTag right, BoundaryTag bottom, BoundaryTag top) {
    BoundarySpec spec;
    spec.side(Side::Left) = left;
    spec.side(Side::Right) = right;
    spec.side(Side::Bottom) = bottom;
    spec.side(Side::Top) = top;
    return spec;
}

inline constexpr BoundaryTag D = BoundaryTag::Dirichlet;
inline constexpr BoundaryTag N = BoundaryTag::Neumann;

}  // namespace testing_support
