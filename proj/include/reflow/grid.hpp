#pragma once

#include <cstddef>
#include <vector>

#include "reflow/error.hpp"

namespace reflow {

// simply connected coordinate box, sampled on a regular grid; flat indexing is
// lexicographic with the last axis fastest
struct GridChart {
    std::vector<int> counts;
    std::vector<double> spacing;
    std::vector<double> origin;

    int dim() const { return static_cast<int>(counts.size()); }

    std::size_t size() const {
        std::size_t s = 1;
        for (int c : counts) s *= static_cast<std::size_t>(c);
        return s;
    }

    std::vector<std::size_t> strides() const {
        std::vector<std::size_t> st(counts.size(), 1);
        for (int i = dim() - 2; i >= 0; --i)
            st[static_cast<std::size_t>(i)] =
                st[static_cast<std::size_t>(i + 1)] *
                static_cast<std::size_t>(counts[static_cast<std::size_t>(i + 1)]);
        return st;
    }

    std::size_t flat(const std::vector<int>& idx) const {
        auto st = strides();
        std::size_t f = 0;
        for (std::size_t i = 0; i < idx.size(); ++i)
            f += static_cast<std::size_t>(idx[i]) * st[i];
        return f;
    }

    std::vector<int> unflat(std::size_t f) const {
        auto st = strides();
        std::vector<int> idx(counts.size());
        for (std::size_t i = 0; i < st.size(); ++i) {
            idx[i] = static_cast<int>(f / st[i]);
            f %= st[i];
        }
        return idx;
    }

    double coord(int axis, int i) const {
        return origin[static_cast<std::size_t>(axis)] +
               spacing[static_cast<std::size_t>(axis)] * i;
    }

    std::vector<double> point(const std::vector<int>& idx) const {
        std::vector<double> x(idx.size());
        for (std::size_t i = 0; i < idx.size(); ++i)
            x[i] = coord(static_cast<int>(i), idx[i]);
        return x;
    }

    void validate() const {
        if (counts.empty()) throw ConfigError("grid: no axes");
        if (counts.size() != spacing.size() || counts.size() != origin.size())
            throw ConfigError("grid: inconsistent axis lists");
        for (int c : counts)
            if (c < 3) throw ConfigError("grid: need at least 3 points per axis");
        for (double h : spacing)
            if (!(h > 0.0)) throw ConfigError("grid: spacing must be positive");
    }
};

inline GridChart make_box(const std::vector<int>& counts, double h,
                          const std::vector<double>& origin) {
    GridChart g;
    g.counts = counts;
    g.spacing.assign(counts.size(), h);
    g.origin = origin;
    g.validate();
    return g;
}

} // namespace reflow
