#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "ccwsim/errors.hpp"
#include "ccwsim/grid.hpp"
#include "ccwsim/rng.hpp"
#include "ccwsim/wavelet.hpp"

namespace ccwsim {

enum class ScoringMode { raw, normalized };

// Similarity values over every valid coarse-space placement.  For a TI of
// coarse size Hc x Wc and a template of coarse size Tc, the valid extent is
// (Hc - Tc + 1) x (Wc - Tc + 1).
struct ScoreMap {
    RealPlane scores;
};

struct Candidate {
    int row = 0;  // coarse-space placement
    int col = 0;
    double score = 0.0;
};

// Top-ranked placements, scores non-increasing, locations unique.
struct CandidateSet {
    std::vector<Candidate> entries;

    bool empty() const noexcept { return entries.empty(); }
    std::size_t size() const noexcept { return entries.size(); }
};

namespace detail {

// Row-wise runs of mask==1 cells: (row, col_begin, col_end).
inline std::vector<std::array<int, 3>> mask_runs(const RealPlane& mask) {
    std::vector<std::array<int, 3>> runs;
    for (int s = 0; s < mask.height(); ++s) {
        const double* m = mask.row(s);
        int t = 0;
        while (t < mask.width()) {
            if (m[t] == 1.0) {
                int t0 = t;
                while (t < mask.width() && m[t] == 1.0)
                    ++t;
                runs.push_back({s, t0, t});
            } else {
                ++t;
            }
        }
    }
    return runs;
}

// acc(x, y) += sum over mask runs of ti(x+s, y+t) * tmpl(s, t).
inline void accumulate_products(const RealPlane& ti, const RealPlane& tmpl,
                                const std::vector<std::array<int, 3>>& runs, RealPlane& acc) {
    for (int x = 0; x < acc.height(); ++x) {
        double* out = acc.row(x);
        for (const auto& [s, t0, t1] : runs) {
            const double* ti_row = ti.row(x + s);
            const double* tp = tmpl.row(s);
            for (int y = 0; y < acc.width(); ++y) {
                double sum = 0.0;
                const double* a = ti_row + y + t0;
                const double* b = tp + t0;
                for (int t = t0; t < t1; ++t)
                    sum += *a++ * *b++;
                out[y] += sum;
            }
        }
    }
}

// acc(x, y) += sum over mask runs of ti(x+s, y+t)^2.
inline void accumulate_masked_squares(const RealPlane& ti,
                                      const std::vector<std::array<int, 3>>& runs,
                                      RealPlane& acc) {
    for (int x = 0; x < acc.height(); ++x) {
        double* out = acc.row(x);
        for (const auto& [s, t0, t1] : runs) {
            const double* ti_row = ti.row(x + s);
            for (int y = 0; y < acc.width(); ++y) {
                double sum = 0.0;
                const double* a = ti_row + y + t0;
                for (int t = t0; t < t1; ++t, ++a)
                    sum += *a * *a;
                out[y] += sum;
            }
        }
    }
}

inline void check_ccw_inputs(const RealPlane& ti_approx, const RealPlane& or_approx,
                             const RealPlane& or_mask) {
    if (or_mask.height() != or_approx.height() || or_mask.width() != or_approx.width())
        throw StructureError("mask size " + std::to_string(or_mask.height()) + "x" +
                             std::to_string(or_mask.width()) + " does not match template " +
                             std::to_string(or_approx.height()) + "x" +
                             std::to_string(or_approx.width()));
    if (or_approx.height() > ti_approx.height() || or_approx.width() > ti_approx.width())
        throw DimensionError("template " + std::to_string(or_approx.height()) + "x" +
                             std::to_string(or_approx.width()) + " larger than TI coefficients " +
                             std::to_string(ti_approx.height()) + "x" +
                             std::to_string(ti_approx.width()));
    for (int s = 0; s < or_mask.height(); ++s) {
        for (int t = 0; t < or_mask.width(); ++t) {
            const double m = or_mask.at(s, t);
            if (m != 0.0 && m != 1.0)
                throw StructureError("mask values must be 0 or 1");
            if (m == 0.0 && or_approx.at(s, t) != 0.0)
                throw StructureError("template carries nonzero values outside the mask");
        }
    }
}

}  // namespace detail

// Sliding product-sum between the TI approximation coefficients and the
// overlap-region coefficients, restricted to the masked support:
//   score(x, y) = sum_{s,t : mask(s,t)=1} ti(x+s, y+t) * tmpl(s, t)
// Since the template is zero outside the mask this equals the plain
// product-sum over the whole template window.
inline ScoreMap ccw_score_map(const RealPlane& ti_approx, const RealPlane& or_approx,
                              const RealPlane& or_mask) {
    detail::check_ccw_inputs(ti_approx, or_approx, or_mask);
    const int out_h = ti_approx.height() - or_approx.height() + 1;
    const int out_w = ti_approx.width() - or_approx.width() + 1;
    ScoreMap map{RealPlane(out_h, out_w, 0.0)};
    const auto runs = detail::mask_runs(or_mask);
    detail::accumulate_products(ti_approx, or_approx, runs, map.scores);
    return map;
}

// Per-channel scores summed across channels; the indicator facies mode feeds
// one channel per facies here.  In normalized mode the raw sum is divided by
// the norm of the TI coefficients over the masked window, aggregated over all
// channels; windows with zero norm score 0.
inline ScoreMap ccw_score_map_channels(std::span<const RealPlane> ti_channels,
                                       std::span<const RealPlane> or_channels,
                                       const RealPlane& or_mask,
                                       ScoringMode mode = ScoringMode::raw) {
    if (ti_channels.empty() || ti_channels.size() != or_channels.size())
        throw StructureError("channel counts disagree");
    for (std::size_t f = 0; f < ti_channels.size(); ++f)
        detail::check_ccw_inputs(ti_channels[f], or_channels[f], or_mask);

    const int out_h = ti_channels[0].height() - or_channels[0].height() + 1;
    const int out_w = ti_channels[0].width() - or_channels[0].width() + 1;
    ScoreMap map{RealPlane(out_h, out_w, 0.0)};
    const auto runs = detail::mask_runs(or_mask);
    for (std::size_t f = 0; f < ti_channels.size(); ++f)
        detail::accumulate_products(ti_channels[f], or_channels[f], runs, map.scores);

    if (mode == ScoringMode::normalized) {
        RealPlane norm_sq(out_h, out_w, 0.0);
        for (std::size_t f = 0; f < ti_channels.size(); ++f)
            detail::accumulate_masked_squares(ti_channels[f], runs, norm_sq);
        for (std::size_t i = 0; i < map.scores.values().size(); ++i) {
            const double n = norm_sq.values()[i];
            map.scores.values()[i] = n > 0.0 ? map.scores.values()[i] / std::sqrt(n) : 0.0;
        }
    }
    return map;
}

// K highest-scoring locations, descending.  Ties break toward the earlier
// row-major location, so the result is a prefix of the full stable sort.
inline CandidateSet top_k(const ScoreMap& map, int k) {
    if (map.scores.values().empty())
        throw EmptyInputError("top_k on empty score map");
    if (k < 1)
        throw ConfigError("candidate count must be >= 1");

    CandidateSet set;
    set.entries.reserve(static_cast<std::size_t>(k) + 1);
    for (int r = 0; r < map.scores.height(); ++r) {
        const double* row = map.scores.row(r);
        for (int c = 0; c < map.scores.width(); ++c) {
            const double score = row[c];
            if (set.entries.size() == static_cast<std::size_t>(k) &&
                score <= set.entries.back().score)
                continue;
            // Insert after all entries with score >= this one; row-major scan
            // order then gives earlier locations precedence on ties.
            std::size_t pos = set.entries.size();
            while (pos > 0 && set.entries[pos - 1].score < score)
                --pos;
            set.entries.insert(set.entries.begin() + static_cast<std::ptrdiff_t>(pos),
                               Candidate{r, c, score});
            if (set.entries.size() > static_cast<std::size_t>(k))
                set.entries.pop_back();
        }
    }
    return set;
}

// Uniform draw among the candidates.
inline Candidate select_unconditional(const CandidateSet& cands, std::mt19937_64& rng) {
    if (cands.empty())
        throw EmptyInputError("select_unconditional on empty candidate set");
    return cands.entries[bounded(rng, cands.entries.size())];
}

struct ConditionalPick {
    Candidate candidate;
    int mismatches = 0;
};

// Scans candidates in score order and compares the TI pattern under each
// against the hard data inside the template footprint (template-local
// coordinates).  Returns the first candidate agreeing with every datum, else
// the one with the fewest mismatches; ties keep the higher-scored candidate.
inline ConditionalPick select_conditional(const CandidateSet& cands,
                                          const std::vector<HardDatum>& hd_in_footprint,
                                          const CategoricalGrid& ti, int levels) {
    if (cands.empty())
        throw EmptyInputError("select_conditional on empty candidate set");

    ConditionalPick best{cands.entries.front(), static_cast<int>(hd_in_footprint.size()) + 1};
    for (const Candidate& cand : cands.entries) {
        const auto [fr, fc] = coarse_to_fine({cand.row, cand.col}, levels);
        int mismatches = 0;
        for (const HardDatum& p : hd_in_footprint)
            if (ti.at(fr + p.row, fc + p.col) != p.facies)
                ++mismatches;
        if (mismatches == 0)
            return ConditionalPick{cand, 0};
        if (mismatches < best.mismatches)
            best = ConditionalPick{cand, mismatches};
    }
    return best;
}

}  // namespace ccwsim
