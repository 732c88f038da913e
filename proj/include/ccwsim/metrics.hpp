#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "ccwsim/errors.hpp"
#include "ccwsim/grid.hpp"

namespace ccwsim {

enum class Direction { east_west, north_south };

inline const char* direction_name(Direction d) {
    return d == Direction::east_west ? "east_west" : "north_south";
}

// Experimental indicator variogram along one cardinal axis.
struct VariogramSeries {
    Direction direction = Direction::east_west;
    int facies = 0;
    bool facies_present = true;   // degenerate-input notice when false
    std::vector<double> gamma;    // gamma[h-1] for lag h = 1..maxLag
};

// Probability of connection along one axis; lags with no qualifying pair are
// left unset rather than reported as 0.
struct ConnectivitySeries {
    Direction direction = Direction::east_west;
    int facies = 0;
    std::vector<std::optional<double>> probability;  // [h-1] for h = 1..maxLag
};

// Multiset of w x w categorical windows, keyed by their canonical row-major
// byte encoding.
struct PatternHistogram {
    int window = 0;
    std::uint64_t total = 0;
    std::unordered_map<std::string, std::uint64_t> counts;
};

struct AnodiLevel {
    double between_a = 0.0;   // mean pairwise JS within ensemble A
    double between_b = 0.0;
    double within_a = 0.0;    // mean JS realization-vs-TI for ensemble A
    double within_b = 0.0;
    double d_between = 0.0;   // between_a / between_b
    double d_within = 0.0;    // within_a / within_b
    double ratio = 0.0;       // d_between / d_within
    double weight = 0.0;
};

struct AnodiResult {
    std::vector<AnodiLevel> levels;
    double aggregate = 0.0;  // sum of weight * ratio over levels
};

// gamma(h) = (1/2) * mean over axis-aligned pairs at lag h of
// (I_f(x) - I_f(x+h))^2.
inline VariogramSeries indicator_variogram(const CategoricalGrid& grid, int facies,
                                           Direction direction, int max_lag) {
    const int extent = direction == Direction::east_west ? grid.width() : grid.height();
    if (max_lag < 1 || max_lag >= extent)
        throw DimensionError("max_lag must be in [1, extent) = [1, " + std::to_string(extent) +
                             ")");
    VariogramSeries out;
    out.direction = direction;
    out.facies = facies;
    out.facies_present =
        std::find(grid.cells().begin(), grid.cells().end(), facies) != grid.cells().end();
    out.gamma.assign(static_cast<std::size_t>(max_lag), 0.0);

    for (int h = 1; h <= max_lag; ++h) {
        std::int64_t pairs = 0;
        std::int64_t sum_sq = 0;  // indicator differences are 0 or 1
        if (direction == Direction::east_west) {
            for (int r = 0; r < grid.height(); ++r) {
                for (int c = 0; c + h < grid.width(); ++c) {
                    const int a = grid.at(r, c) == facies;
                    const int b = grid.at(r, c + h) == facies;
                    sum_sq += (a - b) * (a - b);
                    ++pairs;
                }
            }
        } else {
            for (int r = 0; r + h < grid.height(); ++r) {
                for (int c = 0; c < grid.width(); ++c) {
                    const int a = grid.at(r, c) == facies;
                    const int b = grid.at(r + h, c) == facies;
                    sum_sq += (a - b) * (a - b);
                    ++pairs;
                }
            }
        }
        out.gamma[static_cast<std::size_t>(h) - 1] =
            pairs > 0 ? 0.5 * static_cast<double>(sum_sq) / static_cast<double>(pairs) : 0.0;
    }
    return out;
}

namespace detail {

// 4-connected component labels of the facies-f cell set; other cells get -1.
inline std::vector<int> label_components(const CategoricalGrid& grid, int facies) {
    const int h = grid.height();
    const int w = grid.width();
    const std::size_t n = static_cast<std::size_t>(h) * w;
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);

    auto find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    };
    auto unite = [&](int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b)
            parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
    };

    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            if (grid.at(r, c) != facies)
                continue;
            const int idx = r * w + c;
            if (c + 1 < w && grid.at(r, c + 1) == facies)
                unite(idx, idx + 1);
            if (r + 1 < h && grid.at(r + 1, c) == facies)
                unite(idx, idx + w);
        }
    }

    std::vector<int> labels(n, -1);
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c)
            if (grid.at(r, c) == facies)
                labels[static_cast<std::size_t>(r) * w + c] = find(r * w + c);
    return labels;
}

}  // namespace detail

// C(h) = fraction of same-facies axis pairs at lag h lying in one 4-connected
// component.  Lags with no same-facies pair are undefined.
inline ConnectivitySeries connectivity_function(const CategoricalGrid& grid, int facies,
                                                Direction direction, int max_lag) {
    const int extent = direction == Direction::east_west ? grid.width() : grid.height();
    if (max_lag < 1 || max_lag >= extent)
        throw DimensionError("max_lag must be in [1, extent) = [1, " + std::to_string(extent) +
                             ")");
    ConnectivitySeries out;
    out.direction = direction;
    out.facies = facies;
    out.probability.assign(static_cast<std::size_t>(max_lag), std::nullopt);

    const std::vector<int> labels = detail::label_components(grid, facies);
    const int w = grid.width();

    for (int h = 1; h <= max_lag; ++h) {
        std::int64_t both = 0;
        std::int64_t connected = 0;
        if (direction == Direction::east_west) {
            for (int r = 0; r < grid.height(); ++r) {
                for (int c = 0; c + h < grid.width(); ++c) {
                    const int la = labels[static_cast<std::size_t>(r) * w + c];
                    const int lb = labels[static_cast<std::size_t>(r) * w + c + h];
                    if (la >= 0 && lb >= 0) {
                        ++both;
                        if (la == lb)
                            ++connected;
                    }
                }
            }
        } else {
            for (int r = 0; r + h < grid.height(); ++r) {
                for (int c = 0; c < grid.width(); ++c) {
                    const int la = labels[static_cast<std::size_t>(r) * w + c];
                    const int lb = labels[static_cast<std::size_t>(r + h) * w + c];
                    if (la >= 0 && lb >= 0) {
                        ++both;
                        if (la == lb)
                            ++connected;
                    }
                }
            }
        }
        if (both > 0)
            out.probability[static_cast<std::size_t>(h) - 1] =
                static_cast<double>(connected) / static_cast<double>(both);
    }
    return out;
}

// Per-cell fraction of realizations equal to `facies`.
inline RealPlane ensemble_average(const std::vector<CategoricalGrid>& ensemble, int facies) {
    if (ensemble.empty())
        throw EmptyInputError("ensemble_average on empty ensemble");
    const int h = ensemble.front().height();
    const int w = ensemble.front().width();
    for (const CategoricalGrid& g : ensemble)
        if (g.height() != h || g.width() != w)
            throw StructureError("ensemble realizations differ in size");
    RealPlane out(h, w, 0.0);
    for (const CategoricalGrid& g : ensemble) {
        const std::vector<int>& cells = g.cells();
        for (std::size_t i = 0; i < cells.size(); ++i)
            if (cells[i] == facies)
                out.values()[i] += 1.0;
    }
    const double n = static_cast<double>(ensemble.size());
    for (double& v : out.values())
        v /= n;
    return out;
}

// Counts every w x w window at the given stride, keyed by exact content.
inline PatternHistogram pattern_histogram(const CategoricalGrid& grid, int w, int stride = 1) {
    if (w < 1 || w > grid.height() || w > grid.width())
        throw DimensionError("window " + std::to_string(w) + " does not fit " +
                             std::to_string(grid.height()) + "x" + std::to_string(grid.width()) +
                             " grid");
    if (stride < 1)
        throw DimensionError("stride must be >= 1");
    if (grid.num_facies() > 256)
        throw StructureError("byte pattern keys require num_facies <= 256");

    PatternHistogram hist;
    hist.window = w;
    std::string key(static_cast<std::size_t>(w) * w, '\0');
    for (int top = 0; top + w <= grid.height(); top += stride) {
        for (int left = 0; left + w <= grid.width(); left += stride) {
            std::size_t k = 0;
            for (int r = 0; r < w; ++r)
                for (int c = 0; c < w; ++c)
                    key[k++] = static_cast<char>(grid.at(top + r, left + c));
            ++hist.counts[key];
            ++hist.total;
        }
    }
    return hist;
}

// Jensen-Shannon divergence (base-2 logs) between the normalized histograms,
// taken over the union of their keys.  Symmetric, in [0, 1].
inline double js_divergence(const PatternHistogram& p, const PatternHistogram& q) {
    if (p.window != q.window)
        throw StructureError("window sizes disagree: " + std::to_string(p.window) + " vs " +
                             std::to_string(q.window));
    if (p.total == 0 || q.total == 0)
        throw EmptyInputError("js_divergence on empty histogram");

    const double pt = static_cast<double>(p.total);
    const double qt = static_cast<double>(q.total);
    double sum = 0.0;
    for (const auto& [key, cnt] : p.counts) {
        const double pp = static_cast<double>(cnt) / pt;
        const auto it = q.counts.find(key);
        const double qq = it == q.counts.end() ? 0.0 : static_cast<double>(it->second) / qt;
        sum += 0.5 * pp * std::log2(2.0 * pp / (pp + qq));
    }
    for (const auto& [key, cnt] : q.counts) {
        const double qq = static_cast<double>(cnt) / qt;
        const auto it = p.counts.find(key);
        const double pp = it == p.counts.end() ? 0.0 : static_cast<double>(it->second) / pt;
        sum += 0.5 * qq * std::log2(2.0 * qq / (pp + qq));
    }
    return std::clamp(sum, 0.0, 1.0);
}

// Block-majority downsampling by `factor`; ties pick the lowest code and
// trailing partial blocks are dropped.
inline CategoricalGrid downsample_majority(const CategoricalGrid& grid, int factor) {
    if (factor < 1)
        throw DimensionError("downsample factor must be >= 1");
    if (factor == 1)
        return grid;
    const int h = grid.height() / factor;
    const int w = grid.width() / factor;
    if (h < 1 || w < 1)
        throw DimensionError("downsample factor " + std::to_string(factor) + " too large for " +
                             std::to_string(grid.height()) + "x" + std::to_string(grid.width()));
    CategoricalGrid out(h, w, grid.num_facies(), 0);
    std::vector<int> counts(static_cast<std::size_t>(grid.num_facies()));
    for (int i = 0; i < h; ++i) {
        for (int j = 0; j < w; ++j) {
            std::fill(counts.begin(), counts.end(), 0);
            for (int r = 0; r < factor; ++r)
                for (int c = 0; c < factor; ++c)
                    ++counts[static_cast<std::size_t>(grid.at(i * factor + r, j * factor + c))];
            int best = 0;
            for (int f = 1; f < grid.num_facies(); ++f)
                if (counts[static_cast<std::size_t>(f)] > counts[static_cast<std::size_t>(best)])
                    best = f;  // ties keep the lowest code
            out.set(i, j, best);
        }
    }
    return out;
}

// Analysis-of-distance comparison of two ensembles against a TI.
//
// Per resolution level p (grids downsampled by 2^(p-1), level 1 = original):
//   between_X = mean pairwise JS among ensemble X's realizations
//   within_X  = mean JS between X's realizations and the TI
//   d_between = between_A / between_B,  d_within = within_A / within_B
//   ratio     = d_between / d_within
// Aggregate r = sum of w_p * ratio_p; weights default to uniform 1/P.
inline AnodiResult anodi(const std::vector<CategoricalGrid>& ensemble_a,
                         const std::vector<CategoricalGrid>& ensemble_b,
                         const CategoricalGrid& ti, int levels, int window,
                         std::vector<double> weights = {}) {
    if (ensemble_a.size() < 2 || ensemble_b.size() < 2)
        throw EmptyInputError("anodi requires at least 2 realizations per ensemble");
    if (levels < 1)
        throw DimensionError("anodi requires levels >= 1");
    if (weights.empty())
        weights.assign(static_cast<std::size_t>(levels), 1.0 / levels);
    if (weights.size() != static_cast<std::size_t>(levels))
        throw StructureError("weight count does not match level count");

    auto level_histograms = [&](const std::vector<CategoricalGrid>& grids, int factor) {
        std::vector<PatternHistogram> hists;
        hists.reserve(grids.size());
        for (const CategoricalGrid& g : grids)
            hists.push_back(pattern_histogram(downsample_majority(g, factor), window));
        return hists;
    };
    auto mean_pairwise = [](const std::vector<PatternHistogram>& hists) {
        double sum = 0.0;
        std::size_t pairs = 0;
        for (std::size_t i = 0; i < hists.size(); ++i)
            for (std::size_t j = i + 1; j < hists.size(); ++j) {
                sum += js_divergence(hists[i], hists[j]);
                ++pairs;
            }
        return sum / static_cast<double>(pairs);
    };
    auto mean_vs = [](const std::vector<PatternHistogram>& hists, const PatternHistogram& ref) {
        double sum = 0.0;
        for (const PatternHistogram& h : hists)
            sum += js_divergence(h, ref);
        return sum / static_cast<double>(hists.size());
    };

    AnodiResult result;
    result.levels.reserve(static_cast<std::size_t>(levels));
    for (int p = 1; p <= levels; ++p) {
        const int factor = 1 << (p - 1);
        const auto hists_a = level_histograms(ensemble_a, factor);
        const auto hists_b = level_histograms(ensemble_b, factor);
        const PatternHistogram ti_hist = pattern_histogram(downsample_majority(ti, factor), window);

        AnodiLevel lvl;
        lvl.between_a = mean_pairwise(hists_a);
        lvl.between_b = mean_pairwise(hists_b);
        lvl.within_a = mean_vs(hists_a, ti_hist);
        lvl.within_b = mean_vs(hists_b, ti_hist);
        lvl.weight = weights[static_cast<std::size_t>(p) - 1];
        if (lvl.within_a == 0.0 || lvl.within_b == 0.0)
            throw DegeneracyError("realizations identical to TI at level " + std::to_string(p));
        if (lvl.between_b == 0.0)
            throw DegeneracyError("ensemble B has zero between-realization variability at level " +
                                  std::to_string(p));
        lvl.d_between = lvl.between_a / lvl.between_b;
        lvl.d_within = lvl.within_a / lvl.within_b;
        lvl.ratio = lvl.d_between / lvl.d_within;
        result.aggregate += lvl.weight * lvl.ratio;
        result.levels.push_back(lvl);
    }
    return result;
}

// Classical (Torgerson) MDS into 2D: double-center the squared distances and
// scale the top-2 eigenvectors; negative eigenvalues clamp to zero.
inline std::vector<std::array<double, 2>> classical_mds(
    const std::vector<std::vector<double>>& distances) {
    const std::size_t n = distances.size();
    if (n == 0)
        throw EmptyInputError("classical_mds on empty matrix");
    for (std::size_t i = 0; i < n; ++i) {
        if (distances[i].size() != n)
            throw StructureError("distance matrix not square");
        if (std::abs(distances[i][i]) > 1e-12)
            throw StructureError("distance matrix diagonal not zero");
        for (std::size_t j = 0; j < n; ++j) {
            if (distances[i][j] < 0.0)
                throw StructureError("negative distance at (" + std::to_string(i) + ", " +
                                     std::to_string(j) + ")");
            if (std::abs(distances[i][j] - distances[j][i]) > 1e-12)
                throw StructureError("distance matrix not symmetric at (" + std::to_string(i) +
                                     ", " + std::to_string(j) + ")");
        }
    }

    Eigen::MatrixXd d_sq(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            d_sq(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                distances[i][j] * distances[i][j];

    const Eigen::VectorXd row_mean = d_sq.rowwise().mean();
    const double total_mean = d_sq.mean();
    Eigen::MatrixXd b(n, n);
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n); ++i)
        for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(n); ++j)
            b(i, j) = -0.5 * (d_sq(i, j) - row_mean(i) - row_mean(j) + total_mean);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(b);
    const Eigen::VectorXd& evals = solver.eigenvalues();  // ascending
    const Eigen::MatrixXd& evecs = solver.eigenvectors();

    std::vector<std::array<double, 2>> coords(n, {0.0, 0.0});
    const Eigen::Index last = static_cast<Eigen::Index>(n) - 1;
    const double s0 = n >= 1 ? std::sqrt(std::max(evals(last), 0.0)) : 0.0;
    const double s1 = n >= 2 ? std::sqrt(std::max(evals(last - 1), 0.0)) : 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        coords[i][0] = s0 * evecs(static_cast<Eigen::Index>(i), last);
        if (n >= 2)
            coords[i][1] = s1 * evecs(static_cast<Eigen::Index>(i), last - 1);
    }
    return coords;
}

}  // namespace ccwsim
