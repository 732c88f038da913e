#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include "ccwsim/errors.hpp"
#include "ccwsim/grid.hpp"
#include "ccwsim/matcher.hpp"
#include "ccwsim/rng.hpp"
#include "ccwsim/wavelet.hpp"

namespace ccwsim {

enum class FaciesMode { indicator, raw_codes };

// All user parameters of a simulation run.
struct SimConfig {
    int sg_height = 0;
    int sg_width = 0;
    int template_size = 0;  // T
    int overlap = 0;        // OV
    int dwt_level = 1;      // J
    int candidates = 1;     // K
    int n_realizations = 1;
    std::uint64_t master_seed = 0;
    ScoringMode scoring = ScoringMode::raw;
    FaciesMode facies_mode = FaciesMode::indicator;
    bool min_cut = false;
    std::optional<HardDataSet> hard_data;

    int block() const noexcept { return 1 << dwt_level; }
    int stride() const noexcept { return template_size - overlap; }

    // TI-independent invariants.
    void validate() const {
        if (sg_height < 1 || sg_width < 1)
            throw ConfigError("sg_size: dimensions must be positive");
        if (dwt_level < 1)
            throw ConfigError("dwt_level: must be >= 1");
        if (template_size < 2)
            throw ConfigError("template: must be >= 2");
        if (overlap < 1 || overlap >= template_size)
            throw ConfigError("overlap: must be in [1, template)");
        if (template_size % block() != 0)
            throw ConfigError("template: " + std::to_string(template_size) +
                              " not divisible by 2^dwt_level = " + std::to_string(block()));
        if (overlap % block() != 0)
            throw ConfigError("overlap: " + std::to_string(overlap) +
                              " not divisible by 2^dwt_level = " + std::to_string(block()));
        if (candidates < 1)
            throw ConfigError("candidates: must be >= 1");
        if (n_realizations < 1)
            throw ConfigError("realizations: must be >= 1");
        if (template_size > sg_height || template_size > sg_width)
            throw ConfigError("template: " + std::to_string(template_size) +
                              " exceeds simulation grid " + std::to_string(sg_height) + "x" +
                              std::to_string(sg_width));
    }

    // Invariants that need the training image.
    void validate_against(const CategoricalGrid& ti) const {
        validate();
        if (template_size > ti.height() || template_size > ti.width())
            throw ConfigError("template: " + std::to_string(template_size) +
                              " exceeds training image " + std::to_string(ti.height()) + "x" +
                              std::to_string(ti.width()));
        if (ti.height() % block() != 0 || ti.width() % block() != 0)
            throw ConfigError("training image " + std::to_string(ti.height()) + "x" +
                              std::to_string(ti.width()) + " not divisible by 2^dwt_level = " +
                              std::to_string(block()));
        if (hard_data)
            validate_hard_data(*hard_data, sg_height, sg_width, ti.num_facies());
    }
};

enum class OrShape { none, vertical_strip, horizontal_strip, l_shaped };

struct Placement {
    int top = 0;
    int left = 0;
    OrShape or_shape = OrShape::none;
};

enum class Corner { top_left, top_right, bottom_left, bottom_right };

inline const char* corner_name(Corner c) {
    switch (c) {
        case Corner::top_left: return "top_left";
        case Corner::top_right: return "top_right";
        case Corner::bottom_left: return "bottom_left";
        default: return "bottom_right";
    }
}

// Ordered raster path over the (possibly padded) working grid.
struct PlacementPlan {
    Corner origin = Corner::top_left;
    bool column_major = false;
    int work_height = 0;
    int work_width = 0;
    std::vector<Placement> placements;

    // Side of the template the overlap strips sit on, fixed by the origin.
    bool vertical_on_left() const noexcept {
        return origin == Corner::top_left || origin == Corner::bottom_left;
    }
    bool horizontal_on_top() const noexcept {
        return origin == Corner::top_left || origin == Corner::top_right;
    }
};

namespace detail {

inline int padded_extent(int sg, int t, int stride) {
    if (sg == t)
        return t;
    const int span = sg - t;
    const int steps = (span + stride - 1) / stride;  // ceil
    return t + steps * stride;
}

inline std::vector<int> axis_positions(int work, int t, int stride, bool ascending) {
    std::vector<int> pos;
    for (int p = 0; p + t <= work; p += stride)
        pos.push_back(p);
    if (!ascending)
        std::reverse(pos.begin(), pos.end());
    return pos;
}

}  // namespace detail

// Draws the origin corner and scan direction, then lays placements at stride
// T - OV.  When (SG - T) is not a multiple of the stride the working grid is
// enlarged to the next multiple; the simulator crops back to SG size.
// Consumes exactly two rng draws: corner in [0,4) then direction in [0,2).
inline PlacementPlan plan_raster_path(const SimConfig& cfg, std::mt19937_64& rng) {
    cfg.validate();
    const int t = cfg.template_size;
    const int stride = cfg.stride();

    PlacementPlan plan;
    plan.origin = static_cast<Corner>(bounded(rng, 4));
    plan.column_major = bounded(rng, 2) == 1;
    plan.work_height = detail::padded_extent(cfg.sg_height, t, stride);
    plan.work_width = detail::padded_extent(cfg.sg_width, t, stride);

    const bool rows_ascending =
        plan.origin == Corner::top_left || plan.origin == Corner::top_right;
    const bool cols_ascending =
        plan.origin == Corner::top_left || plan.origin == Corner::bottom_left;
    const std::vector<int> row_pos =
        detail::axis_positions(plan.work_height, t, stride, rows_ascending);
    const std::vector<int> col_pos =
        detail::axis_positions(plan.work_width, t, stride, cols_ascending);

    const std::vector<int>& outer = plan.column_major ? col_pos : row_pos;
    const std::vector<int>& inner = plan.column_major ? row_pos : col_pos;
    plan.placements.reserve(outer.size() * inner.size());
    for (std::size_t o = 0; o < outer.size(); ++o) {
        for (std::size_t i = 0; i < inner.size(); ++i) {
            Placement p;
            p.top = plan.column_major ? inner[i] : outer[o];
            p.left = plan.column_major ? outer[o] : inner[i];
            if (o == 0 && i == 0)
                p.or_shape = OrShape::none;
            else if (o == 0)
                p.or_shape =
                    plan.column_major ? OrShape::horizontal_strip : OrShape::vertical_strip;
            else if (i == 0)
                p.or_shape =
                    plan.column_major ? OrShape::vertical_strip : OrShape::horizontal_strip;
            else
                p.or_shape = OrShape::l_shaped;
            plan.placements.push_back(p);
        }
    }
    return plan;
}

// Template-local overlap support: which cells of the T x T footprint belong to
// the overlap region for this placement.
inline RealPlane or_support_mask(const Placement& p, const PlacementPlan& plan,
                                 const SimConfig& cfg) {
    const int t = cfg.template_size;
    const int ov = cfg.overlap;
    RealPlane mask(t, t, 0.0);
    const bool vertical = p.or_shape == OrShape::vertical_strip || p.or_shape == OrShape::l_shaped;
    const bool horizontal =
        p.or_shape == OrShape::horizontal_strip || p.or_shape == OrShape::l_shaped;
    if (vertical) {
        const int c0 = plan.vertical_on_left() ? 0 : t - ov;
        for (int r = 0; r < t; ++r)
            for (int c = c0; c < c0 + ov; ++c)
                mask.set(r, c, 1.0);
    }
    if (horizontal) {
        const int r0 = plan.horizontal_on_top() ? 0 : t - ov;
        for (int r = r0; r < r0 + ov; ++r)
            for (int c = 0; c < t; ++c)
                mask.set(r, c, 1.0);
    }
    return mask;
}

struct OrData {
    std::vector<RealPlane> channels;  // T x T, zero outside support
    RealPlane fine_mask;              // 1 on the overlap support
};

// Extracts the simulated overlap values under the placement's footprint.  The
// `simulated` flags are a bug guard: raster order must have filled the whole
// support already.
inline OrData extract_or(const CategoricalGrid& work, const std::vector<std::uint8_t>& simulated,
                         const Placement& p, const PlacementPlan& plan, const SimConfig& cfg) {
    const int t = cfg.template_size;
    OrData od;
    od.fine_mask = or_support_mask(p, plan, cfg);

    const int channel_count =
        cfg.facies_mode == FaciesMode::indicator ? work.num_facies() : 1;
    od.channels.assign(static_cast<std::size_t>(channel_count), RealPlane(t, t, 0.0));

    for (int r = 0; r < t; ++r) {
        for (int c = 0; c < t; ++c) {
            if (od.fine_mask.at(r, c) != 1.0)
                continue;
            const int gr = p.top + r;
            const int gc = p.left + c;
            if (!simulated[static_cast<std::size_t>(gr) * work.width() + gc])
                throw Error("internal sequencing error: overlap cell (" + std::to_string(gr) +
                            ", " + std::to_string(gc) + ") not yet simulated");
            const int code = work.at(gr, gc);
            if (cfg.facies_mode == FaciesMode::indicator)
                od.channels[static_cast<std::size_t>(code)].set(r, c, 1.0);
            else
                od.channels[0].set(r, c, static_cast<double>(code));
        }
    }
    return od;
}

// Downsamples a block-aligned 0/1 mask to coefficient space.  Mixed blocks
// would mean the overlap geometry is not aligned with the Haar blocks.
inline RealPlane coarse_mask_from_fine(const RealPlane& fine, int levels) {
    const int b = 1 << levels;
    if (fine.height() % b != 0 || fine.width() % b != 0)
        throw DimensionError("mask not divisible by 2^levels");
    RealPlane out(fine.height() / b, fine.width() / b, 0.0);
    for (int i = 0; i < out.height(); ++i) {
        for (int j = 0; j < out.width(); ++j) {
            const double v = fine.at(i * b, j * b);
            for (int r = 0; r < b; ++r)
                for (int c = 0; c < b; ++c)
                    if (fine.at(i * b + r, j * b + c) != v)
                        throw Error("internal error: overlap mask not block-aligned");
            out.set(i, j, v);
        }
    }
    return out;
}

struct OrGeometry {
    OrShape shape = OrShape::none;
    bool vertical_on_left = true;
    bool horizontal_on_top = true;
    int overlap = 0;
};

namespace detail {

// Monotone seam through a cost band (one cell per layer, steps of at most one
// cell sideways).  Returns the per-layer position; ties prefer the smaller
// index so the seam is deterministic.
inline std::vector<int> min_cost_seam(const std::vector<std::vector<int>>& cost) {
    const int layers = static_cast<int>(cost.size());
    const int width = static_cast<int>(cost[0].size());
    std::vector<std::vector<int>> dp(cost.size(), std::vector<int>(width, 0));
    std::vector<std::vector<int>> from(cost.size(), std::vector<int>(width, 0));
    dp[0] = cost[0];
    for (int l = 1; l < layers; ++l) {
        for (int j = 0; j < width; ++j) {
            int best = dp[l - 1][j];
            int arg = j;
            if (j > 0 && dp[l - 1][j - 1] < best) {
                best = dp[l - 1][j - 1];
                arg = j - 1;
            }
            if (j + 1 < width && dp[l - 1][j + 1] < best) {
                best = dp[l - 1][j + 1];
                arg = j + 1;
            }
            // Equal costs keep the smallest predecessor index.
            if (j > 0 && dp[l - 1][j - 1] == best && j - 1 < arg)
                arg = j - 1;
            dp[l][j] = cost[l][j] + best;
            from[l][j] = arg;
        }
    }
    int end = 0;
    for (int j = 1; j < width; ++j)
        if (dp[layers - 1][j] < dp[layers - 1][end])
            end = j;
    std::vector<int> seam(cost.size());
    seam[static_cast<std::size_t>(layers) - 1] = end;
    for (int l = layers - 1; l > 0; --l)
        seam[static_cast<std::size_t>(l) - 1] = from[l][seam[static_cast<std::size_t>(l)]];
    return seam;
}

}  // namespace detail

// Minimum-disagreement seam through the overlap band: cells on the simulated
// side of the seam keep the existing values, the rest take the incoming patch.
// L-shapes run the vertical seam first, then the horizontal seam over the
// partially stitched patch.
inline CategoricalGrid min_cut_stitch(const CategoricalGrid& existing,
                                      const CategoricalGrid& incoming, const OrGeometry& geom) {
    if (existing.height() != incoming.height() || existing.width() != incoming.width())
        throw StructureError("existing and incoming patch sizes disagree");
    if (geom.shape == OrShape::none)
        return incoming;
    const int t = incoming.height();
    const int ov = geom.overlap;
    if (ov < 1 || ov >= t)
        throw StructureError("overlap band width out of range");

    CategoricalGrid out = incoming;

    if (geom.shape == OrShape::vertical_strip || geom.shape == OrShape::l_shaped) {
        const int c0 = geom.vertical_on_left ? 0 : t - ov;
        std::vector<std::vector<int>> cost(static_cast<std::size_t>(t),
                                           std::vector<int>(static_cast<std::size_t>(ov)));
        for (int r = 0; r < t; ++r)
            for (int j = 0; j < ov; ++j)
                cost[r][j] = existing.at(r, c0 + j) != out.at(r, c0 + j) ? 1 : 0;
        const std::vector<int> seam = detail::min_cost_seam(cost);
        for (int r = 0; r < t; ++r) {
            for (int j = 0; j < ov; ++j) {
                const bool keep_existing = geom.vertical_on_left ? j < seam[r] : j > seam[r];
                if (keep_existing)
                    out.set(r, c0 + j, existing.at(r, c0 + j));
            }
        }
    }
    if (geom.shape == OrShape::horizontal_strip || geom.shape == OrShape::l_shaped) {
        const int r0 = geom.horizontal_on_top ? 0 : t - ov;
        std::vector<std::vector<int>> cost(static_cast<std::size_t>(t),
                                           std::vector<int>(static_cast<std::size_t>(ov)));
        for (int c = 0; c < t; ++c)
            for (int j = 0; j < ov; ++j)
                cost[c][j] = existing.at(r0 + j, c) != out.at(r0 + j, c) ? 1 : 0;
        const std::vector<int> seam = detail::min_cost_seam(cost);
        for (int c = 0; c < t; ++c) {
            for (int j = 0; j < ov; ++j) {
                const bool keep_existing = geom.horizontal_on_top ? j < seam[c] : j > seam[c];
                if (keep_existing)
                    out.set(r0 + j, c, existing.at(r0 + j, c));
            }
        }
    }
    return out;
}

struct SimDiagnostics {
    std::uint64_t seed = 0;
    Corner origin = Corner::top_left;
    bool column_major = false;
    int work_height = 0;
    int work_width = 0;
    int placement_count = 0;
    int hard_data_count = 0;
    int pre_overwrite_mismatches = 0;
    double wall_seconds = 0.0;

    double pre_overwrite_mismatch_rate() const noexcept {
        return hard_data_count > 0
                   ? static_cast<double>(pre_overwrite_mismatches) / hard_data_count
                   : 0.0;
    }
};

// Optional per-paste record, used to audit patch provenance.
struct SimTrace {
    struct PasteEvent {
        Placement placement;
        int ti_row = 0;  // fine-space origin of the chosen TI pattern
        int ti_col = 0;
        CategoricalGrid pasted;  // content actually written (after any stitching)
    };
    std::vector<PasteEvent> events;
};

struct SimResult {
    CategoricalGrid realization;
    SimDiagnostics diagnostics;
};

// One realization.  The TI approximation coefficients are computed once, the
// raster path is walked pasting the best-matched TI pattern per placement, and
// hard data are forced in at the end (their pre-overwrite mismatch count is
// reported in the diagnostics).
//
// Patterns are reconstructed by cropping the TI at the block-aligned fine
// coordinates of the chosen coarse location; by Haar locality this equals the
// inverse transform of the selected coefficients with their details.
inline SimResult simulate_one(const CategoricalGrid& ti, const SimConfig& cfg, std::uint64_t seed,
                              SimTrace* trace = nullptr) {
    cfg.validate_against(ti);
    const auto start = std::chrono::steady_clock::now();
    const int t = cfg.template_size;
    const int levels = cfg.dwt_level;
    const int b = cfg.block();

    std::mt19937_64 rng(seed);

    // TI scoring channels at level J.
    const std::vector<RealPlane> ti_fine = cfg.facies_mode == FaciesMode::indicator
                                               ? to_indicator_planes(ti)
                                               : std::vector<RealPlane>{to_real_plane(ti)};
    std::vector<RealPlane> ti_coarse;
    ti_coarse.reserve(ti_fine.size());
    for (const RealPlane& plane : ti_fine)
        ti_coarse.push_back(dwt2(plane, levels).apex);

    const PlacementPlan plan = plan_raster_path(cfg, rng);

    CategoricalGrid work(plan.work_height, plan.work_width, ti.num_facies(), 0);
    std::vector<std::uint8_t> simulated(
        static_cast<std::size_t>(plan.work_height) * plan.work_width, 0);

    const HardDataSet* hd = cfg.hard_data ? &*cfg.hard_data : nullptr;
    const OrGeometry geom_base{OrShape::none, plan.vertical_on_left(), plan.horizontal_on_top(),
                               cfg.overlap};

    for (const Placement& p : plan.placements) {
        int fr = 0;
        int fc = 0;
        if (p.or_shape == OrShape::none) {
            // First pattern: uniform random block-aligned TI patch.
            fr = static_cast<int>(bounded(rng, static_cast<std::uint64_t>((ti.height() - t) / b + 1))) * b;
            fc = static_cast<int>(bounded(rng, static_cast<std::uint64_t>((ti.width() - t) / b + 1))) * b;
        } else {
            OrData od = extract_or(work, simulated, p, plan, cfg);
            std::vector<RealPlane> or_coarse;
            or_coarse.reserve(od.channels.size());
            for (const RealPlane& ch : od.channels)
                or_coarse.push_back(dwt2(ch, levels).apex);
            const RealPlane cmask = coarse_mask_from_fine(od.fine_mask, levels);

            const ScoreMap smap =
                ccw_score_map_channels(ti_coarse, or_coarse, cmask, cfg.scoring);
            const CandidateSet cands = top_k(smap, cfg.candidates);

            // Hard data under this footprint, template-local coordinates.
            std::vector<HardDatum> hd_local;
            if (hd) {
                for (const HardDatum& d : hd->points)
                    if (d.row >= p.top && d.row < p.top + t && d.col >= p.left &&
                        d.col < p.left + t)
                        hd_local.push_back(HardDatum{d.row - p.top, d.col - p.left, d.facies});
            }

            Candidate chosen{};
            if (!hd_local.empty())
                chosen = select_conditional(cands, hd_local, ti, levels).candidate;
            else
                chosen = select_unconditional(cands, rng);
            std::tie(fr, fc) = coarse_to_fine({chosen.row, chosen.col}, levels);
        }

        CategoricalGrid patch = crop(ti, fr, fc, t, t);
        if (cfg.min_cut && p.or_shape != OrShape::none) {
            OrGeometry geom = geom_base;
            geom.shape = p.or_shape;
            patch = min_cut_stitch(crop(work, p.top, p.left, t, t), patch, geom);
        }
        paste_into(work, patch, p.top, p.left);
        for (int r = 0; r < t; ++r)
            std::fill_n(simulated.begin() + static_cast<std::size_t>(p.top + r) * plan.work_width +
                            p.left,
                        t, std::uint8_t{1});
        if (trace)
            trace->events.push_back(SimTrace::PasteEvent{p, fr, fc, std::move(patch)});
    }

    SimResult result;
    result.diagnostics.seed = seed;
    result.diagnostics.origin = plan.origin;
    result.diagnostics.column_major = plan.column_major;
    result.diagnostics.work_height = plan.work_height;
    result.diagnostics.work_width = plan.work_width;
    result.diagnostics.placement_count = static_cast<int>(plan.placements.size());

    if (hd) {
        result.diagnostics.hard_data_count = static_cast<int>(hd->points.size());
        for (const HardDatum& d : hd->points) {
            if (work.at(d.row, d.col) != d.facies)
                ++result.diagnostics.pre_overwrite_mismatches;
            work.set(d.row, d.col, d.facies);
        }
    }

    result.realization = crop(work, 0, 0, cfg.sg_height, cfg.sg_width);
    result.diagnostics.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

// n_realizations independent runs; realization r uses seed mix64(master, r).
// Results are ordered by r and identical for any worker count.
inline std::vector<SimResult> simulate_ensemble(const CategoricalGrid& ti, const SimConfig& cfg,
                                                int workers = 1) {
    cfg.validate_against(ti);
    const int n = cfg.n_realizations;
    std::vector<SimResult> results(static_cast<std::size_t>(n));

    if (workers <= 1) {
        for (int r = 0; r < n; ++r)
            results[static_cast<std::size_t>(r)] =
                simulate_one(ti, cfg, mix64(cfg.master_seed, static_cast<std::uint64_t>(r) + 1));
        return results;
    }

    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&]() {
        for (;;) {
            const int r = next.fetch_add(1);
            if (r >= n)
                return;
            try {
                results[static_cast<std::size_t>(r)] = simulate_one(
                    ti, cfg, mix64(cfg.master_seed, static_cast<std::uint64_t>(r) + 1));
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error)
                    first_error = std::current_exception();
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    const int count = std::min(workers, n);
    pool.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        pool.emplace_back(worker);
    for (std::thread& th : pool)
        th.join();
    if (first_error)
        std::rethrow_exception(first_error);
    return results;
}

}  // namespace ccwsim
