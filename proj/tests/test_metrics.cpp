#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <deque>
#include <map>
#include <random>
#include <vector>

#include "ccwsim/metrics.hpp"
#include "support/synthetic.hpp"

using namespace ccwsim;

namespace {

// Brute-force variogram: enumerate every axis pair per lag.
std::vector<double> variogram_oracle(const CategoricalGrid& g, int facies, Direction dir,
                                     int max_lag) {
    std::vector<double> out;
    for (int h = 1; h <= max_lag; ++h) {
        double sum = 0.0;
        int pairs = 0;
        for (int r = 0; r < g.height(); ++r)
            for (int c = 0; c < g.width(); ++c) {
                const int r2 = dir == Direction::north_south ? r + h : r;
                const int c2 = dir == Direction::east_west ? c + h : c;
                if (r2 >= g.height() || c2 >= g.width())
                    continue;
                const double a = g.at(r, c) == facies ? 1.0 : 0.0;
                const double b = g.at(r2, c2) == facies ? 1.0 : 0.0;
                sum += (a - b) * (a - b);
                ++pairs;
            }
        out.push_back(pairs > 0 ? 0.5 * sum / pairs : 0.0);
    }
    return out;
}

// Brute-force component labels via BFS flood fill.
std::vector<int> components_oracle(const CategoricalGrid& g, int facies) {
    std::vector<int> label(static_cast<std::size_t>(g.height()) * g.width(), -1);
    int next = 0;
    for (int r = 0; r < g.height(); ++r)
        for (int c = 0; c < g.width(); ++c) {
            if (g.at(r, c) != facies || label[static_cast<std::size_t>(r) * g.width() + c] != -1)
                continue;
            std::deque<std::pair<int, int>> queue{{r, c}};
            label[static_cast<std::size_t>(r) * g.width() + c] = next;
            while (!queue.empty()) {
                const auto [cr, cc] = queue.front();
                queue.pop_front();
                const int dr[] = {1, -1, 0, 0};
                const int dc[] = {0, 0, 1, -1};
                for (int k = 0; k < 4; ++k) {
                    const int nr = cr + dr[k], nc = cc + dc[k];
                    if (nr < 0 || nr >= g.height() || nc < 0 || nc >= g.width())
                        continue;
                    auto& l = label[static_cast<std::size_t>(nr) * g.width() + nc];
                    if (g.at(nr, nc) == facies && l == -1) {
                        l = next;
                        queue.emplace_back(nr, nc);
                    }
                }
            }
            ++next;
        }
    return label;
}

std::vector<std::optional<double>> connectivity_oracle(const CategoricalGrid& g, int facies,
                                                       Direction dir, int max_lag) {
    const std::vector<int> label = components_oracle(g, facies);
    auto at = [&](int r, int c) { return label[static_cast<std::size_t>(r) * g.width() + c]; };
    std::vector<std::optional<double>> out;
    for (int h = 1; h <= max_lag; ++h) {
        int both = 0, connected = 0;
        for (int r = 0; r < g.height(); ++r)
            for (int c = 0; c < g.width(); ++c) {
                const int r2 = dir == Direction::north_south ? r + h : r;
                const int c2 = dir == Direction::east_west ? c + h : c;
                if (r2 >= g.height() || c2 >= g.width())
                    continue;
                if (g.at(r, c) == facies && g.at(r2, c2) == facies) {
                    ++both;
                    if (at(r, c) == at(r2, c2))
                        ++connected;
                }
            }
        if (both == 0)
            out.push_back(std::nullopt);
        else
            out.push_back(static_cast<double>(connected) / both);
    }
    return out;
}

std::map<std::vector<int>, int> histogram_oracle(const CategoricalGrid& g, int w, int stride) {
    std::map<std::vector<int>, int> out;
    for (int r = 0; r + w <= g.height(); r += stride)
        for (int c = 0; c + w <= g.width(); c += stride) {
            std::vector<int> key;
            for (int i = 0; i < w; ++i)
                for (int j = 0; j < w; ++j)
                    key.push_back(g.at(r + i, c + j));
            ++out[key];
        }
    return out;
}

double js_oracle(const PatternHistogram& p, const PatternHistogram& q) {
    std::map<std::string, std::pair<double, double>> u;
    for (const auto& [k, n] : p.counts)
        u[k].first = static_cast<double>(n) / static_cast<double>(p.total);
    for (const auto& [k, n] : q.counts)
        u[k].second = static_cast<double>(n) / static_cast<double>(q.total);
    double js = 0.0;
    for (const auto& [k, pq] : u) {
        const double m = 0.5 * (pq.first + pq.second);
        if (pq.first > 0.0)
            js += 0.5 * pq.first * std::log2(pq.first / m);
        if (pq.second > 0.0)
            js += 0.5 * pq.second * std::log2(pq.second / m);
    }
    return js;
}

PatternHistogram hist_of(std::initializer_list<std::pair<std::string, std::uint64_t>> entries,
                         int window = 1) {
    PatternHistogram h;
    h.window = window;
    for (const auto& [k, n] : entries) {
        h.counts[k] = n;
        h.total += n;
    }
    return h;
}

}  // namespace

TEST_CASE("indicator_variogram basics") {
    SECTION("constant grid is flat zero") {
        const VariogramSeries v =
            indicator_variogram(CategoricalGrid(6, 6, 2, 1), 1, Direction::east_west, 4);
        for (double g : v.gamma)
            CHECK(g == 0.0);
    }

    SECTION("width-1 vertical stripes: gamma(1)=0.5, gamma(2)=0") {
        std::vector<int> cells;
        for (int r = 0; r < 6; ++r)
            for (int c = 0; c < 6; ++c)
                cells.push_back(c % 2);
        const CategoricalGrid g(6, 6, 2, std::move(cells));
        const VariogramSeries v = indicator_variogram(g, 1, Direction::east_west, 3);
        CHECK(v.gamma[0] == Catch::Approx(0.5).margin(1e-12));
        CHECK(v.gamma[1] == Catch::Approx(0.0).margin(1e-12));
        CHECK(v.gamma[2] == Catch::Approx(0.5).margin(1e-12));
        // stripes are uniform along N-S
        const VariogramSeries ns = indicator_variogram(g, 1, Direction::north_south, 3);
        for (double gamma : ns.gamma)
            CHECK(gamma == 0.0);
    }

    SECTION("absent facies flagged and flat zero") {
        const VariogramSeries v =
            indicator_variogram(CategoricalGrid(4, 4, 3, 0), 2, Direction::east_west, 2);
        CHECK_FALSE(v.facies_present);
        for (double g : v.gamma)
            CHECK(g == 0.0);
    }

    SECTION("max_lag bounds enforced") {
        const CategoricalGrid g(4, 6, 2, 0);
        CHECK_THROWS_AS(indicator_variogram(g, 0, Direction::east_west, 6), DimensionError);
        CHECK_THROWS_AS(indicator_variogram(g, 0, Direction::north_south, 4), DimensionError);
        CHECK_NOTHROW(indicator_variogram(g, 0, Direction::north_south, 3));
    }
}

TEST_CASE("indicator_variogram matches the pair-enumeration oracle") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 25; ++trial) {
        const CategoricalGrid g = testsupport::random_grid(12, 12, 3, rng);
        const int facies = static_cast<int>(bounded(rng, 3));
        for (const Direction dir : {Direction::east_west, Direction::north_south}) {
            const VariogramSeries v = indicator_variogram(g, facies, dir, 8);
            const std::vector<double> oracle = variogram_oracle(g, facies, dir, 8);
            REQUIRE(v.gamma.size() == oracle.size());
            for (std::size_t i = 0; i < oracle.size(); ++i)
                CHECK(v.gamma[i] == Catch::Approx(oracle[i]).epsilon(0).margin(1e-9));
        }
    }
}

TEST_CASE("variogram sill approaches p(1-p) on iid binary grids") {
    std::mt19937_64 rng(42);
    CategoricalGrid g(128, 128, 2, 0);
    int ones = 0;
    for (int r = 0; r < 128; ++r)
        for (int c = 0; c < 128; ++c)
            if (bounded(rng, 100) < 30) {
                g.set(r, c, 1);
                ++ones;
            }
    const double p = ones / (128.0 * 128.0);
    const VariogramSeries v = indicator_variogram(g, 1, Direction::east_west, 40);
    for (int h = 10; h <= 40; ++h)
        CHECK(std::abs(v.gamma[static_cast<std::size_t>(h) - 1] - p * (1 - p)) < 0.02);
}

TEST_CASE("connectivity_function fixtures") {
    SECTION("solid full-width channel is connected at every lag") {
        CategoricalGrid g(6, 6, 2, 0);
        for (int c = 0; c < 6; ++c)
            g.set(3, c, 1);
        const ConnectivitySeries s = connectivity_function(g, 1, Direction::east_west, 5);
        for (const auto& v : s.probability) {
            REQUIRE(v.has_value());
            CHECK(*v == 1.0);
        }
    }

    SECTION("two columns split by a gap disconnect at the spanning lag") {
        // facies-1 columns at c=1 and c=4 on a 6x6 grid
        CategoricalGrid g(6, 6, 2, 0);
        for (int r = 0; r < 6; ++r) {
            g.set(r, 1, 1);
            g.set(r, 4, 1);
        }
        const ConnectivitySeries s = connectivity_function(g, 1, Direction::east_west, 4);
        REQUIRE(s.probability[2].has_value());  // lag 3 pairs: (1)->(4)
        CHECK(*s.probability[2] == 0.0);
        CHECK_FALSE(s.probability[0].has_value());  // lag 1 has no facies-1 pairs
    }

    SECTION("checkerboard isolates every cell") {
        std::vector<int> cells;
        for (int r = 0; r < 6; ++r)
            for (int c = 0; c < 6; ++c)
                cells.push_back((r + c) % 2);
        const CategoricalGrid g(6, 6, 2, std::move(cells));
        const ConnectivitySeries s = connectivity_function(g, 1, Direction::east_west, 5);
        for (std::size_t h = 1; h <= 5; ++h) {
            if (h % 2 == 1) {
                CHECK_FALSE(s.probability[h - 1].has_value());  // opposite colors
            } else {
                REQUIRE(s.probability[h - 1].has_value());
                CHECK(*s.probability[h - 1] == 0.0);
            }
        }
    }

    SECTION("absent facies leaves all lags undefined") {
        const ConnectivitySeries s =
            connectivity_function(CategoricalGrid(5, 5, 3, 0), 2, Direction::east_west, 3);
        for (const auto& v : s.probability)
            CHECK_FALSE(v.has_value());
    }
}

TEST_CASE("connectivity_function matches the BFS oracle") {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 25; ++trial) {
        const CategoricalGrid g = testsupport::random_grid(14, 14, 2, rng);
        for (const Direction dir : {Direction::east_west, Direction::north_south}) {
            const ConnectivitySeries s = connectivity_function(g, 1, dir, 9);
            const auto oracle = connectivity_oracle(g, 1, dir, 9);
            REQUIRE(s.probability.size() == oracle.size());
            for (std::size_t i = 0; i < oracle.size(); ++i) {
                CHECK(s.probability[i].has_value() == oracle[i].has_value());
                if (oracle[i])
                    CHECK(*s.probability[i] == Catch::Approx(*oracle[i]).epsilon(0).margin(1e-9));
            }
        }
    }
}

TEST_CASE("connectivity is 1 when the facies forms one component") {
    std::mt19937_64 rng(44);
    // a random blob grown from the center is a single component by construction
    CategoricalGrid g(10, 10, 2, 0);
    g.set(5, 5, 1);
    for (int step = 0; step < 40; ++step) {
        const int r = static_cast<int>(bounded(rng, 10));
        const int c = static_cast<int>(bounded(rng, 10));
        const bool adjacent = (r > 0 && g.at(r - 1, c) == 1) || (r < 9 && g.at(r + 1, c) == 1) ||
                              (c > 0 && g.at(r, c - 1) == 1) || (c < 9 && g.at(r, c + 1) == 1);
        if (adjacent)
            g.set(r, c, 1);
    }
    const ConnectivitySeries s = connectivity_function(g, 1, Direction::east_west, 6);
    for (const auto& v : s.probability)
        if (v)
            CHECK(*v == 1.0);
}

TEST_CASE("ensemble_average") {
    const CategoricalGrid ones(4, 4, 2, 1);
    const CategoricalGrid zeros(4, 4, 2, 0);

    SECTION("identical grids give an indicator plane") {
        const RealPlane avg = ensemble_average({ones, ones}, 1);
        for (double v : avg.values())
            CHECK(v == 1.0);
    }
    SECTION("complementary grids average to one half") {
        const RealPlane avg = ensemble_average({ones, zeros}, 1);
        for (double v : avg.values())
            CHECK(v == 0.5);
    }
    SECTION("errors") {
        CHECK_THROWS_AS(ensemble_average({}, 1), EmptyInputError);
        CHECK_THROWS_AS(ensemble_average({ones, CategoricalGrid(3, 4, 2, 0)}, 1),
                        StructureError);
    }
}

TEST_CASE("pattern_histogram") {
    SECTION("constant grid has one key counting all windows") {
        const PatternHistogram h = pattern_histogram(CategoricalGrid(5, 5, 2, 1), 2);
        CHECK(h.counts.size() == 1);
        CHECK(h.total == 16);
        CHECK(h.counts.begin()->second == 16);
    }
    SECTION("2x2 grid with w=2 has a single window") {
        const PatternHistogram h = pattern_histogram(CategoricalGrid(2, 2, 2, 0), 2);
        CHECK(h.total == 1);
    }
    SECTION("random 10x10, w=3: 64 windows matching the oracle") {
        std::mt19937_64 rng(45);
        const CategoricalGrid g = testsupport::random_grid(10, 10, 3, rng);
        const PatternHistogram h = pattern_histogram(g, 3);
        CHECK(h.total == 64);
        const auto oracle = histogram_oracle(g, 3, 1);
        CHECK(h.counts.size() == oracle.size());
        std::uint64_t sum = 0;
        for (const auto& [key, n] : h.counts)
            sum += n;
        CHECK(sum == h.total);
        for (const auto& [key, n] : oracle) {
            std::string enc;
            for (int v : key)
                enc.push_back(static_cast<char>(v));
            REQUIRE(h.counts.contains(enc));
            CHECK(h.counts.at(enc) == static_cast<std::uint64_t>(n));
        }
    }
    SECTION("stride respected") {
        std::mt19937_64 rng(46);
        const CategoricalGrid g = testsupport::random_grid(9, 9, 2, rng);
        const PatternHistogram h = pattern_histogram(g, 3, 3);
        CHECK(h.total == 9);
    }
    SECTION("window larger than the grid is rejected") {
        CHECK_THROWS_AS(pattern_histogram(CategoricalGrid(4, 4, 2, 0), 5), DimensionError);
    }
}

TEST_CASE("js_divergence") {
    SECTION("identity and symmetry") {
        const PatternHistogram p = hist_of({{"a", 3}, {"b", 1}});
        const PatternHistogram q = hist_of({{"a", 1}, {"c", 2}});
        CHECK(js_divergence(p, p) == 0.0);
        CHECK(js_divergence(p, q) == Catch::Approx(js_divergence(q, p)).epsilon(0).margin(0.0));
    }
    SECTION("disjoint supports give exactly 1") {
        const PatternHistogram p = hist_of({{"a", 2}, {"b", 2}});
        const PatternHistogram q = hist_of({{"c", 1}, {"d", 3}});
        CHECK(js_divergence(p, q) == Catch::Approx(1.0).epsilon(0).margin(1e-12));
    }
    SECTION("hand example: P=(1,0) vs Q=(1/2,1/2)") {
        const PatternHistogram p = hist_of({{"a", 1}});
        const PatternHistogram q = hist_of({{"a", 1}, {"b", 1}});
        CHECK(js_divergence(p, q) == Catch::Approx(0.31128).margin(1e-4));
        CHECK(js_divergence(p, q) == Catch::Approx(js_oracle(p, q)).epsilon(0).margin(1e-12));
    }
    SECTION("window mismatch rejected, empty rejected") {
        PatternHistogram p = hist_of({{"a", 1}}, 2);
        PatternHistogram q = hist_of({{"a", 1}}, 3);
        CHECK_THROWS_AS(js_divergence(p, q), StructureError);
        PatternHistogram empty;
        empty.window = 2;
        CHECK_THROWS_AS(js_divergence(p, empty), EmptyInputError);
    }
}

TEST_CASE("js_divergence properties on random distribution pairs") {
    std::mt19937_64 rng(47);
    const std::string keys = "abcdefgh";
    auto random_hist = [&]() {
        PatternHistogram h;
        h.window = 1;
        while (h.total == 0)
            for (char k : keys)
                if (bounded(rng, 2)) {
                    const std::uint64_t n = 1 + bounded(rng, 20);
                    h.counts[std::string(1, k)] = n;
                    h.total += n;
                }
        return h;
    };
    for (int trial = 0; trial < 300; ++trial) {
        const PatternHistogram p = random_hist();
        const PatternHistogram q = random_hist();
        const PatternHistogram r = random_hist();
        const double pq = js_divergence(p, q);
        CHECK(pq >= 0.0);
        CHECK(pq <= 1.0);
        CHECK(pq == Catch::Approx(js_divergence(q, p)).epsilon(0).margin(1e-12));
        CHECK(pq == Catch::Approx(js_oracle(p, q)).epsilon(0).margin(1e-9));
        // sqrt(JS) obeys the triangle inequality
        const double pr = js_divergence(p, r);
        const double rq = js_divergence(r, q);
        CHECK(std::sqrt(pq) <= std::sqrt(pr) + std::sqrt(rq) + 1e-12);
    }
}

TEST_CASE("downsample_majority") {
    SECTION("majority per 2x2 block, ties to the lowest code") {
        const CategoricalGrid g(2, 4, 3, {0, 1, 1, 2, 1, 1, 2, 1});
        const CategoricalGrid d = downsample_majority(g, 2);
        REQUIRE(d.height() == 1);
        REQUIRE(d.width() == 2);
        CHECK(d.at(0, 0) == 1);  // counts: 0->1, 1->3
        CHECK(d.at(0, 1) == 1);  // counts: 1->2, 2->2, tie -> lowest code 1
    }
    SECTION("factor 1 is the identity") {
        std::mt19937_64 rng(48);
        const CategoricalGrid g = testsupport::random_grid(6, 6, 3, rng);
        CHECK(downsample_majority(g, 1) == g);
    }
    SECTION("partial blocks are truncated") {
        const CategoricalGrid g(5, 7, 2, 1);
        const CategoricalGrid d = downsample_majority(g, 2);
        CHECK(d.height() == 2);
        CHECK(d.width() == 3);
    }
}

TEST_CASE("anodi") {
    std::mt19937_64 rng(49);
    const CategoricalGrid ti = testsupport::make_channel_ti(32, 32, 51);
    std::vector<CategoricalGrid> ens_a, ens_b;
    for (int i = 0; i < 3; ++i) {
        ens_a.push_back(testsupport::random_grid(32, 32, 2, rng));
        ens_b.push_back(testsupport::random_grid(32, 32, 2, rng));
    }

    SECTION("identical ensembles give r = 1 at every level") {
        const AnodiResult res = anodi(ens_a, ens_a, ti, 3, 4);
        REQUIRE(res.levels.size() == 3);
        for (const AnodiLevel& l : res.levels) {
            CHECK(l.d_between == Catch::Approx(1.0).epsilon(0).margin(1e-12));
            CHECK(l.d_within == Catch::Approx(1.0).epsilon(0).margin(1e-12));
            CHECK(l.ratio == Catch::Approx(1.0).epsilon(0).margin(1e-12));
            CHECK(l.weight == Catch::Approx(1.0 / 3).margin(1e-12));
        }
        CHECK(res.aggregate == Catch::Approx(1.0).epsilon(0).margin(1e-9));
    }

    SECTION("aggregate equals the weighted sum of per-level ratios") {
        const AnodiResult res = anodi(ens_a, ens_b, ti, 2, 4);
        double total = 0.0;
        for (const AnodiLevel& l : res.levels)
            total += l.weight * l.ratio;
        CHECK(res.aggregate == Catch::Approx(total).epsilon(0).margin(1e-12));
    }

    SECTION("custom weights are honored") {
        const AnodiResult res = anodi(ens_a, ens_b, ti, 2, 4, {0.75, 0.25});
        CHECK(res.levels[0].weight == 0.75);
        CHECK(res.levels[1].weight == 0.25);
        CHECK(res.aggregate ==
              Catch::Approx(0.75 * res.levels[0].ratio + 0.25 * res.levels[1].ratio)
                  .epsilon(0)
                  .margin(1e-12));
    }

    SECTION("per-level statistics match a from-scratch evaluation") {
        const int window = 4;
        const AnodiResult res = anodi(ens_a, ens_b, ti, 2, window);
        for (int level = 1; level <= 2; ++level) {
            const int factor = 1 << (level - 1);
            auto hist = [&](const CategoricalGrid& g) {
                return pattern_histogram(downsample_majority(g, factor), window);
            };
            auto mean_pairwise = [&](const std::vector<CategoricalGrid>& ens) {
                double sum = 0.0;
                int n = 0;
                for (std::size_t i = 0; i < ens.size(); ++i)
                    for (std::size_t j = i + 1; j < ens.size(); ++j) {
                        sum += js_divergence(hist(ens[i]), hist(ens[j]));
                        ++n;
                    }
                return sum / n;
            };
            auto mean_vs_ti = [&](const std::vector<CategoricalGrid>& ens) {
                double sum = 0.0;
                const PatternHistogram ti_hist = hist(ti);
                for (const auto& g : ens)
                    sum += js_divergence(hist(g), ti_hist);
                return sum / static_cast<double>(ens.size());
            };
            const AnodiLevel& l = res.levels[static_cast<std::size_t>(level) - 1];
            CHECK(l.between_a == Catch::Approx(mean_pairwise(ens_a)).epsilon(0).margin(1e-9));
            CHECK(l.between_b == Catch::Approx(mean_pairwise(ens_b)).epsilon(0).margin(1e-9));
            CHECK(l.within_a == Catch::Approx(mean_vs_ti(ens_a)).epsilon(0).margin(1e-9));
            CHECK(l.within_b == Catch::Approx(mean_vs_ti(ens_b)).epsilon(0).margin(1e-9));
            CHECK(l.ratio == Catch::Approx((l.between_a / l.between_b) /
                                           (l.within_a / l.within_b))
                                 .epsilon(0)
                                 .margin(1e-9));
        }
    }

    SECTION("degenerate all-identical-to-TI ensembles raise") {
        const std::vector<CategoricalGrid> degen = {ti, ti};
        CHECK_THROWS_AS(anodi(degen, degen, ti, 2, 4), DegeneracyError);
    }

    SECTION("ensembles need at least two members") {
        CHECK_THROWS_AS(anodi({ens_a[0]}, ens_b, ti, 2, 4), EmptyInputError);
    }
}

TEST_CASE("classical_mds") {
    SECTION("all-zero matrix puts every point at the origin") {
        const auto coords = classical_mds({{0, 0, 0}, {0, 0, 0}, {0, 0, 0}});
        for (const auto& c : coords) {
            CHECK(c[0] == Catch::Approx(0.0).margin(1e-12));
            CHECK(c[1] == Catch::Approx(0.0).margin(1e-12));
        }
    }

    SECTION("equilateral triangle reproduces unit distances") {
        const auto coords = classical_mds({{0, 1, 1}, {1, 0, 1}, {1, 1, 0}});
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j) {
                const double dx = coords[i][0] - coords[j][0];
                const double dy = coords[i][1] - coords[j][1];
                CHECK(std::sqrt(dx * dx + dy * dy) == Catch::Approx(1.0).margin(1e-6));
            }
    }

    SECTION("recovers distances of random planar point sets") {
        std::mt19937_64 rng(50);
        for (int trial = 0; trial < 10; ++trial) {
            const int n = 4 + static_cast<int>(bounded(rng, 7));
            std::vector<std::array<double, 2>> pts;
            for (int i = 0; i < n; ++i)
                pts.push_back({static_cast<double>(bounded(rng, 1000)) / 100.0,
                               static_cast<double>(bounded(rng, 1000)) / 100.0});
            std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    d[i][j] = std::hypot(pts[i][0] - pts[j][0], pts[i][1] - pts[j][1]);

            const auto coords = classical_mds(d);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    const double got =
                        std::hypot(coords[i][0] - coords[j][0], coords[i][1] - coords[j][1]);
                    CHECK(got == Catch::Approx(d[i][j]).epsilon(0).margin(1e-6));
                }
        }
    }

    SECTION("validation errors") {
        CHECK_THROWS_AS(classical_mds({}), EmptyInputError);
        CHECK_THROWS_AS(classical_mds({{0, 1}, {2, 0}}), StructureError);       // asymmetric
        CHECK_THROWS_AS(classical_mds({{0, -1}, {-1, 0}}), StructureError);     // negative
        CHECK_THROWS_AS(classical_mds({{1, 1}, {1, 0}}), StructureError);       // diagonal
        CHECK_THROWS_AS(classical_mds({{0, 1, 1}, {1, 0, 1}}), StructureError); // not square
    }
}
