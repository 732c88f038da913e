#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ccwsim/errors.hpp"

namespace ccwsim {

// 2D lattice of categorical facies codes, row-major, row 0 at top.
// Every cell holds a code in [0, num_facies).
class CategoricalGrid {
public:
    CategoricalGrid() = default;

    CategoricalGrid(int height, int width, int num_facies, int fill = 0)
        : height_(height), width_(width), num_facies_(num_facies) {
        check_shape();
        if (fill < 0 || fill >= num_facies_)
            throw BoundsError("fill code " + std::to_string(fill) + " outside [0, " +
                              std::to_string(num_facies_) + ")");
        cells_.assign(static_cast<std::size_t>(height_) * width_, fill);
    }

    CategoricalGrid(int height, int width, int num_facies, std::vector<int> cells)
        : height_(height), width_(width), num_facies_(num_facies), cells_(std::move(cells)) {
        check_shape();
        if (cells_.size() != static_cast<std::size_t>(height_) * width_)
            throw StructureError("cell count " + std::to_string(cells_.size()) +
                                 " does not match " + std::to_string(height_) + "x" +
                                 std::to_string(width_));
        for (std::size_t i = 0; i < cells_.size(); ++i)
            if (cells_[i] < 0 || cells_[i] >= num_facies_)
                throw BoundsError("cell " + std::to_string(i) + " holds code " +
                                  std::to_string(cells_[i]) + " outside [0, " +
                                  std::to_string(num_facies_) + ")");
    }

    int height() const noexcept { return height_; }
    int width() const noexcept { return width_; }
    int num_facies() const noexcept { return num_facies_; }
    std::int64_t area() const noexcept { return static_cast<std::int64_t>(height_) * width_; }

    int at(int r, int c) const { return cells_[index(r, c)]; }

    void set(int r, int c, int code) {
        if (code < 0 || code >= num_facies_)
            throw BoundsError("code " + std::to_string(code) + " outside [0, " +
                              std::to_string(num_facies_) + ")");
        cells_[index(r, c)] = code;
    }

    const std::vector<int>& cells() const noexcept { return cells_; }

    bool operator==(const CategoricalGrid& o) const = default;

private:
    void check_shape() const {
        if (height_ <= 0 || width_ <= 0)
            throw DimensionError("grid dimensions must be positive");
        if (num_facies_ <= 0)
            throw DimensionError("num_facies must be positive");
    }

    std::size_t index(int r, int c) const {
        if (r < 0 || r >= height_ || c < 0 || c >= width_)
            throw BoundsError("cell (" + std::to_string(r) + ", " + std::to_string(c) +
                              ") outside " + std::to_string(height_) + "x" +
                              std::to_string(width_) + " grid");
        return static_cast<std::size_t>(r) * width_ + c;
    }

    int height_ = 0;
    int width_ = 0;
    int num_facies_ = 1;
    std::vector<int> cells_;
};

// Real-valued plane, row-major. Holds wavelet coefficients and indicator data.
class RealPlane {
public:
    RealPlane() = default;

    RealPlane(int height, int width, double fill = 0.0) : height_(height), width_(width) {
        if (height_ <= 0 || width_ <= 0)
            throw DimensionError("plane dimensions must be positive");
        values_.assign(static_cast<std::size_t>(height_) * width_, fill);
    }

    RealPlane(int height, int width, std::vector<double> values)
        : height_(height), width_(width), values_(std::move(values)) {
        if (height_ <= 0 || width_ <= 0)
            throw DimensionError("plane dimensions must be positive");
        if (values_.size() != static_cast<std::size_t>(height_) * width_)
            throw StructureError("value count does not match " + std::to_string(height_) + "x" +
                                 std::to_string(width_));
        for (double v : values_)
            if (!std::isfinite(v))
                throw StructureError("plane values must be finite");
    }

    int height() const noexcept { return height_; }
    int width() const noexcept { return width_; }

    double at(int r, int c) const { return values_[index(r, c)]; }
    void set(int r, int c, double v) { values_[index(r, c)] = v; }

    const double* row(int r) const { return values_.data() + static_cast<std::size_t>(r) * width_; }
    double* row(int r) { return values_.data() + static_cast<std::size_t>(r) * width_; }

    const std::vector<double>& values() const noexcept { return values_; }
    std::vector<double>& values() noexcept { return values_; }

private:
    std::size_t index(int r, int c) const {
        if (r < 0 || r >= height_ || c < 0 || c >= width_)
            throw BoundsError("plane cell (" + std::to_string(r) + ", " + std::to_string(c) +
                              ") outside " + std::to_string(height_) + "x" +
                              std::to_string(width_));
        return static_cast<std::size_t>(r) * width_ + c;
    }

    int height_ = 0;
    int width_ = 0;
    std::vector<double> values_;
};

// One cell-level observation the simulation must reproduce.
struct HardDatum {
    int row = 0;
    int col = 0;
    int facies = 0;

    bool operator==(const HardDatum&) const = default;
};

// Ordered set of hard data. Validation against grid bounds is a separate step
// because the target grid size is not known at construction time.
struct HardDataSet {
    std::vector<HardDatum> points;

    bool empty() const noexcept { return points.empty(); }
    std::size_t size() const noexcept { return points.size(); }
};

// Checks bounds, facies range and coordinate uniqueness against a target grid.
inline void validate_hard_data(const HardDataSet& hd, int height, int width, int num_facies) {
    std::map<std::pair<int, int>, std::size_t> seen;
    for (std::size_t i = 0; i < hd.points.size(); ++i) {
        const HardDatum& p = hd.points[i];
        if (p.row < 0 || p.row >= height || p.col < 0 || p.col >= width)
            throw BoundsError("hard datum " + std::to_string(i) + " at (" +
                              std::to_string(p.row) + ", " + std::to_string(p.col) +
                              ") outside " + std::to_string(height) + "x" +
                              std::to_string(width) + " grid");
        if (p.facies < 0 || p.facies >= num_facies)
            throw BoundsError("hard datum " + std::to_string(i) + " has facies " +
                              std::to_string(p.facies) + " outside [0, " +
                              std::to_string(num_facies) + ")");
        auto [it, inserted] = seen.emplace(std::make_pair(p.row, p.col), i);
        if (!inserted)
            throw StructureError("duplicate hard data at (" + std::to_string(p.row) + ", " +
                                 std::to_string(p.col) + "): entries " +
                                 std::to_string(it->second) + " and " + std::to_string(i));
    }
}

inline CategoricalGrid crop(const CategoricalGrid& grid, int top, int left, int h, int w) {
    if (h <= 0 || w <= 0)
        throw DimensionError("crop size must be positive");
    if (top < 0 || left < 0 || top + h > grid.height() || left + w > grid.width())
        throw BoundsError("crop rectangle (" + std::to_string(top) + ", " + std::to_string(left) +
                          ", " + std::to_string(h) + "x" + std::to_string(w) + ") outside " +
                          std::to_string(grid.height()) + "x" + std::to_string(grid.width()) +
                          " grid");
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(h) * w);
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c)
            out.push_back(grid.at(top + r, left + c));
    return CategoricalGrid(h, w, grid.num_facies(), std::move(out));
}

inline RealPlane crop(const RealPlane& plane, int top, int left, int h, int w) {
    if (h <= 0 || w <= 0)
        throw DimensionError("crop size must be positive");
    if (top < 0 || left < 0 || top + h > plane.height() || left + w > plane.width())
        throw BoundsError("crop rectangle outside " + std::to_string(plane.height()) + "x" +
                          std::to_string(plane.width()) + " plane");
    RealPlane out(h, w);
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c)
            out.set(r, c, plane.at(top + r, left + c));
    return out;
}

// Returns a copy of `grid` with `patch` written at (top, left).
inline CategoricalGrid paste(const CategoricalGrid& grid, const CategoricalGrid& patch, int top,
                             int left) {
    if (top < 0 || left < 0 || top + patch.height() > grid.height() ||
        left + patch.width() > grid.width())
        throw BoundsError("patch footprint (" + std::to_string(top) + ", " + std::to_string(left) +
                          ", " + std::to_string(patch.height()) + "x" +
                          std::to_string(patch.width()) + ") overflows " +
                          std::to_string(grid.height()) + "x" + std::to_string(grid.width()) +
                          " grid");
    if (patch.num_facies() > grid.num_facies())
        throw StructureError("patch facies count exceeds target grid's");
    CategoricalGrid out = grid;
    for (int r = 0; r < patch.height(); ++r)
        for (int c = 0; c < patch.width(); ++c)
            out.set(top + r, left + c, patch.at(r, c));
    return out;
}

// In-place paste for the simulator's working grid.
inline void paste_into(CategoricalGrid& grid, const CategoricalGrid& patch, int top, int left) {
    if (top < 0 || left < 0 || top + patch.height() > grid.height() ||
        left + patch.width() > grid.width())
        throw BoundsError("patch footprint overflows grid");
    if (patch.num_facies() > grid.num_facies())
        throw StructureError("patch facies count exceeds target grid's");
    for (int r = 0; r < patch.height(); ++r)
        for (int c = 0; c < patch.width(); ++c)
            grid.set(top + r, left + c, patch.at(r, c));
}

// Fraction of cells per facies code.  Fractions sum to 1 for non-empty grids.
inline std::map<int, double> facies_proportions(const CategoricalGrid& grid) {
    std::vector<std::int64_t> counts(grid.num_facies(), 0);
    for (int code : grid.cells())
        ++counts[code];
    std::map<int, double> out;
    const double area = static_cast<double>(grid.area());
    for (int f = 0; f < grid.num_facies(); ++f)
        out[f] = static_cast<double>(counts[f]) / area;
    return out;
}

// One 0/1 indicator plane per facies; planes sum cell-wise to exactly 1.
inline std::vector<RealPlane> to_indicator_planes(const CategoricalGrid& grid) {
    std::vector<RealPlane> planes;
    planes.reserve(grid.num_facies());
    for (int f = 0; f < grid.num_facies(); ++f)
        planes.emplace_back(grid.height(), grid.width(), 0.0);
    const std::vector<int>& cells = grid.cells();
    for (std::size_t i = 0; i < cells.size(); ++i)
        planes[cells[i]].values()[i] = 1.0;
    return planes;
}

// Grid cast to a single real plane of raw codes.
inline RealPlane to_real_plane(const CategoricalGrid& grid) {
    RealPlane out(grid.height(), grid.width());
    const std::vector<int>& cells = grid.cells();
    for (std::size_t i = 0; i < cells.size(); ++i)
        out.values()[i] = static_cast<double>(cells[i]);
    return out;
}

}  // namespace ccwsim
