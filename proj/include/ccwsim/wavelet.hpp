#pragma once

#include <array>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ccwsim/errors.hpp"
#include "ccwsim/grid.hpp"

namespace ccwsim {

// Orthonormal Haar pair.  The 1/sqrt(2) taps make the transform energy
// preserving, so coefficient magnitudes stay comparable across levels.
struct HaarFilterBank {
    static constexpr double kInvSqrt2 = 0.70710678118654752440084436210485;

    static constexpr std::array<double, 2> analysis_low{kInvSqrt2, kInvSqrt2};
    static constexpr std::array<double, 2> analysis_high{kInvSqrt2, -kInvSqrt2};
    static constexpr std::array<double, 2> synthesis_low{kInvSqrt2, kInvSqrt2};
    static constexpr std::array<double, 2> synthesis_high{kInvSqrt2, -kInvSqrt2};

    // One analysis step on an even-length signal: n inputs -> n/2 + n/2.
    static void analyze(std::span<const double> x, std::span<double> approx,
                        std::span<double> detail) {
        const std::size_t half = x.size() / 2;
        for (std::size_t i = 0; i < half; ++i) {
            approx[i] = analysis_low[0] * x[2 * i] + analysis_low[1] * x[2 * i + 1];
            detail[i] = analysis_high[0] * x[2 * i] + analysis_high[1] * x[2 * i + 1];
        }
    }

    static void synthesize(std::span<const double> approx, std::span<const double> detail,
                           std::span<double> x) {
        for (std::size_t i = 0; i < approx.size(); ++i) {
            x[2 * i] = synthesis_low[0] * approx[i] + synthesis_high[0] * detail[i];
            x[2 * i + 1] = synthesis_low[1] * approx[i] + synthesis_high[1] * detail[i];
        }
    }
};

struct SubbandSet {
    RealPlane detail_h;  // variation between row pairs
    RealPlane detail_v;  // variation between column pairs
    RealPlane detail_d;  // diagonal variation
};

// Approximation apex plus the detail subbands of every level.
// details[j-1] holds the level-j subbands, each of size original/2^j.
struct WaveletPyramid {
    int levels = 0;
    int original_height = 0;
    int original_width = 0;
    RealPlane apex;  // cA at level `levels`
    std::vector<SubbandSet> details;
};

struct SingleLevelDwt {
    RealPlane approx;
    RealPlane detail_h;
    RealPlane detail_v;
    RealPlane detail_d;
};

// One analysis level.  For each 2x2 input block (p00 p01 / p10 p11):
//   cA = (p00+p01+p10+p11)/2   cH = (p00+p01-p10-p11)/2
//   cV = (p00-p01+p10-p11)/2   cD = (p00-p01-p10+p11)/2
inline SingleLevelDwt dwt2_single(const RealPlane& plane) {
    const int h = plane.height();
    const int w = plane.width();
    if (h % 2 != 0 || w % 2 != 0)
        throw DimensionError("dwt2_single requires even dimensions, got " + std::to_string(h) +
                             "x" + std::to_string(w));
    const int hh = h / 2;
    const int hw = w / 2;

    // Row pass: filter along each row.
    RealPlane row_low(h, hw), row_high(h, hw);
    for (int r = 0; r < h; ++r) {
        std::span<const double> src(plane.row(r), static_cast<std::size_t>(w));
        HaarFilterBank::analyze(src, {row_low.row(r), static_cast<std::size_t>(hw)},
                                {row_high.row(r), static_cast<std::size_t>(hw)});
    }

    // Column pass: filter along each column of both half-planes.
    SingleLevelDwt out{RealPlane(hh, hw), RealPlane(hh, hw), RealPlane(hh, hw),
                       RealPlane(hh, hw)};
    for (int i = 0; i < hh; ++i) {
        const double* l0 = row_low.row(2 * i);
        const double* l1 = row_low.row(2 * i + 1);
        const double* h0 = row_high.row(2 * i);
        const double* h1 = row_high.row(2 * i + 1);
        double* a = out.approx.row(i);
        double* dh = out.detail_h.row(i);
        double* dv = out.detail_v.row(i);
        double* dd = out.detail_d.row(i);
        for (int j = 0; j < hw; ++j) {
            a[j] = HaarFilterBank::kInvSqrt2 * (l0[j] + l1[j]);
            dh[j] = HaarFilterBank::kInvSqrt2 * (l0[j] - l1[j]);
            dv[j] = HaarFilterBank::kInvSqrt2 * (h0[j] + h1[j]);
            dd[j] = HaarFilterBank::kInvSqrt2 * (h0[j] - h1[j]);
        }
    }
    return out;
}

inline RealPlane idwt2_single(const RealPlane& approx, const RealPlane& detail_h,
                              const RealPlane& detail_v, const RealPlane& detail_d) {
    const int hh = approx.height();
    const int hw = approx.width();
    auto same_size = [&](const RealPlane& p) { return p.height() == hh && p.width() == hw; };
    if (!same_size(detail_h) || !same_size(detail_v) || !same_size(detail_d))
        throw StructureError("subband sizes disagree");

    // Inverse column pass.
    RealPlane row_low(2 * hh, hw), row_high(2 * hh, hw);
    for (int i = 0; i < hh; ++i) {
        const double* a = approx.row(i);
        const double* dh = detail_h.row(i);
        const double* dv = detail_v.row(i);
        const double* dd = detail_d.row(i);
        double* l0 = row_low.row(2 * i);
        double* l1 = row_low.row(2 * i + 1);
        double* h0 = row_high.row(2 * i);
        double* h1 = row_high.row(2 * i + 1);
        for (int j = 0; j < hw; ++j) {
            l0[j] = HaarFilterBank::kInvSqrt2 * (a[j] + dh[j]);
            l1[j] = HaarFilterBank::kInvSqrt2 * (a[j] - dh[j]);
            h0[j] = HaarFilterBank::kInvSqrt2 * (dv[j] + dd[j]);
            h1[j] = HaarFilterBank::kInvSqrt2 * (dv[j] - dd[j]);
        }
    }

    // Inverse row pass.
    RealPlane out(2 * hh, 2 * hw);
    for (int r = 0; r < 2 * hh; ++r) {
        HaarFilterBank::synthesize({row_low.row(r), static_cast<std::size_t>(hw)},
                                   {row_high.row(r), static_cast<std::size_t>(hw)},
                                   {out.row(r), static_cast<std::size_t>(2 * hw)});
    }
    return out;
}

// Multi-level analysis.  Each level re-applies dwt2_single to the previous
// approximation; all detail subbands are retained for exact reconstruction.
inline WaveletPyramid dwt2(const RealPlane& plane, int levels) {
    if (levels < 1)
        throw DimensionError("decomposition level must be >= 1");
    const int div = 1 << levels;
    if (plane.height() % div != 0 || plane.width() % div != 0)
        throw DimensionError("plane " + std::to_string(plane.height()) + "x" +
                             std::to_string(plane.width()) + " not divisible by 2^" +
                             std::to_string(levels));

    WaveletPyramid pyr;
    pyr.levels = levels;
    pyr.original_height = plane.height();
    pyr.original_width = plane.width();
    pyr.details.reserve(static_cast<std::size_t>(levels));

    RealPlane current = plane;
    for (int j = 1; j <= levels; ++j) {
        SingleLevelDwt step = dwt2_single(current);
        pyr.details.push_back(SubbandSet{std::move(step.detail_h), std::move(step.detail_v),
                                         std::move(step.detail_d)});
        current = std::move(step.approx);
    }
    pyr.apex = std::move(current);
    return pyr;
}

// Full synthesis back to the original plane.
inline RealPlane idwt2(const WaveletPyramid& pyr) {
    if (pyr.levels < 1 || pyr.details.size() != static_cast<std::size_t>(pyr.levels))
        throw StructureError("pyramid level count inconsistent");
    int h = pyr.original_height >> pyr.levels;
    int w = pyr.original_width >> pyr.levels;
    if (pyr.apex.height() != h || pyr.apex.width() != w)
        throw StructureError("apex size does not match original/2^levels");
    RealPlane current = pyr.apex;
    for (int j = pyr.levels; j >= 1; --j) {
        const SubbandSet& sb = pyr.details[static_cast<std::size_t>(j) - 1];
        if (sb.detail_h.height() != h || sb.detail_h.width() != w)
            throw StructureError("level " + std::to_string(j) + " subband size inconsistent");
        current = idwt2_single(current, sb.detail_h, sb.detail_v, sb.detail_d);
        h *= 2;
        w *= 2;
    }
    return current;
}

// Maps a coefficient-space coordinate at level J to the top-left fine cell of
// its 2^J x 2^J block.  With Haar block alignment, the coefficient rectangle
// [r, r+h) x [c, c+w) corresponds exactly to the fine rectangle
// [2^J r, 2^J (r+h)) x [2^J c, 2^J (c+w)).
inline std::pair<int, int> coarse_to_fine(std::pair<int, int> coord, int levels) {
    return {coord.first << levels, coord.second << levels};
}

}  // namespace ccwsim
