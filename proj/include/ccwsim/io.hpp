#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ccwsim/errors.hpp"
#include "ccwsim/grid.hpp"
#include "ccwsim/metrics.hpp"
#include "ccwsim/simulator.hpp"

namespace ccwsim {

inline constexpr std::string_view kGridMagic = "ccwsim-grid v1";

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

template <typename Int>
inline bool parse_int(std::string_view s, Int& out) {
    s = trim(s);
    if (s.empty())
        return false;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r'))
            ++i;
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r')
            ++j;
        if (j > i)
            out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

inline std::vector<std::string_view> split_char(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.push_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

inline std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open " + path + " for writing");
    return out;
}

inline void finish_out(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out)
        throw IoError("write failed for " + path);
}

}  // namespace detail

// --- grid files ------------------------------------------------------------
//
// Text format, versioned by the magic line:
//   ccwsim-grid v1
//   <ncols> <nrows> <ncats>
//   <nrows lines of ncols codes, top row first>

inline CategoricalGrid read_grid(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path);

    std::string line;
    int lineno = 0;

    if (!std::getline(in, line))
        throw ParseError(path, 1, "empty file, expected magic \"" + std::string(kGridMagic) + "\"");
    ++lineno;
    if (detail::trim(line) != kGridMagic)
        throw ParseError(path, lineno,
                         "bad magic, expected \"" + std::string(kGridMagic) + "\"");

    if (!std::getline(in, line))
        throw ParseError(path, 2, "missing dimension line");
    ++lineno;
    const auto dims = detail::split_ws(line);
    int ncols = 0, nrows = 0, ncats = 0;
    if (dims.size() != 3 || !detail::parse_int(dims[0], ncols) ||
        !detail::parse_int(dims[1], nrows) || !detail::parse_int(dims[2], ncats))
        throw ParseError(path, lineno, "expected \"<ncols> <nrows> <ncats>\"");
    if (ncols < 1 || nrows < 1 || ncats < 1)
        throw ParseError(path, lineno, "dimensions and category count must be positive");

    std::vector<int> cells;
    cells.reserve(static_cast<std::size_t>(nrows) * ncols);
    for (int r = 0; r < nrows; ++r) {
        if (!std::getline(in, line))
            throw ParseError(path, lineno + 1,
                             "unexpected end of file, expected row " + std::to_string(r + 1) +
                                 " of " + std::to_string(nrows));
        ++lineno;
        const auto tokens = detail::split_ws(line);
        if (tokens.size() != static_cast<std::size_t>(ncols))
            throw ParseError(path, lineno,
                             "expected " + std::to_string(ncols) + " values, got " +
                                 std::to_string(tokens.size()));
        for (const std::string_view tok : tokens) {
            int code = 0;
            if (!detail::parse_int(tok, code))
                throw ParseError(path, lineno, "invalid code \"" + std::string(tok) + "\"");
            if (code < 0 || code >= ncats)
                throw ParseError(path, lineno,
                                 "code " + std::to_string(code) + " outside [0, " +
                                     std::to_string(ncats) + ")");
            cells.push_back(code);
        }
    }
    while (std::getline(in, line)) {
        ++lineno;
        if (!detail::trim(line).empty())
            throw ParseError(path, lineno, "trailing content after last row");
    }
    return CategoricalGrid(nrows, ncols, ncats, std::move(cells));
}

inline void write_grid(const CategoricalGrid& grid, const std::string& path) {
    std::ofstream out = detail::open_out(path);
    out << kGridMagic << '\n'
        << grid.width() << ' ' << grid.height() << ' ' << grid.num_facies() << '\n';
    for (int r = 0; r < grid.height(); ++r) {
        for (int c = 0; c < grid.width(); ++c) {
            if (c)
                out << ' ';
            out << grid.at(r, c);
        }
        out << '\n';
    }
    detail::finish_out(out, path);
}

// --- hard data files -------------------------------------------------------
//
// One "row,col,facies" triple per line (0-based), '#' comment lines ignored.

inline HardDataSet read_hard_data(const std::string& path, int sg_height, int sg_width) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path);

    HardDataSet hd;
    std::map<std::pair<int, int>, int> seen_lines;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string_view body = detail::trim(line);
        if (body.empty() || body.front() == '#')
            continue;
        const auto fields = detail::split_char(body, ',');
        HardDatum d;
        if (fields.size() != 3 || !detail::parse_int(fields[0], d.row) ||
            !detail::parse_int(fields[1], d.col) || !detail::parse_int(fields[2], d.facies))
            throw ParseError(path, lineno, "expected \"row,col,facies\"");
        if (d.row < 0 || d.row >= sg_height || d.col < 0 || d.col >= sg_width)
            throw ParseError(path, lineno,
                             "coordinate (" + std::to_string(d.row) + ", " +
                                 std::to_string(d.col) + ") outside " +
                                 std::to_string(sg_height) + "x" + std::to_string(sg_width) +
                                 " grid");
        if (d.facies < 0)
            throw ParseError(path, lineno, "facies code must be non-negative");
        const auto [it, inserted] = seen_lines.emplace(std::make_pair(d.row, d.col), lineno);
        if (!inserted)
            throw ParseError(path, lineno,
                             "duplicate coordinate (" + std::to_string(d.row) + ", " +
                                 std::to_string(d.col) + "), first seen on line " +
                                 std::to_string(it->second));
        hd.points.push_back(d);
    }
    return hd;
}

inline void write_hard_data(const HardDataSet& hd, const std::string& path) {
    std::ofstream out = detail::open_out(path);
    for (const HardDatum& d : hd.points)
        out << d.row << ',' << d.col << ',' << d.facies << '\n';
    detail::finish_out(out, path);
}

// --- PGM -------------------------------------------------------------------

// P2 with facies codes spread evenly over 0..255.
inline void write_pgm(const CategoricalGrid& grid, const std::string& path) {
    std::ofstream out = detail::open_out(path);
    out << "P2\n" << grid.width() << ' ' << grid.height() << "\n255\n";
    const int ncats = grid.num_facies();
    for (int r = 0; r < grid.height(); ++r) {
        for (int c = 0; c < grid.width(); ++c) {
            if (c)
                out << ' ';
            const int gray =
                ncats > 1 ? static_cast<int>(std::lround(grid.at(r, c) * 255.0 / (ncats - 1)))
                          : 0;
            out << gray;
        }
        out << '\n';
    }
    detail::finish_out(out, path);
}

// P2 of a [0,1]-valued plane (ensemble averages).
inline void write_pgm(const RealPlane& plane, const std::string& path) {
    std::ofstream out = detail::open_out(path);
    out << "P2\n" << plane.width() << ' ' << plane.height() << "\n255\n";
    for (int r = 0; r < plane.height(); ++r) {
        for (int c = 0; c < plane.width(); ++c) {
            if (c)
                out << ' ';
            const double v = std::min(1.0, std::max(0.0, plane.at(r, c)));
            out << static_cast<int>(std::lround(v * 255.0));
        }
        out << '\n';
    }
    detail::finish_out(out, path);
}

// --- metric CSVs -----------------------------------------------------------

// lag,ti,ens_mean,ens_min,ens_max
inline void write_variogram_csv(const VariogramSeries& ti,
                                const std::vector<VariogramSeries>& ensemble,
                                const std::string& path) {
    std::ofstream out = detail::open_out(path);
    out << "lag,ti,ens_mean,ens_min,ens_max\n";
    for (std::size_t h = 0; h < ti.gamma.size(); ++h) {
        double mean = 0.0;
        double lo = 0.0;
        double hi = 0.0;
        if (!ensemble.empty()) {
            lo = hi = ensemble.front().gamma[h];
            for (const VariogramSeries& s : ensemble) {
                mean += s.gamma[h];
                lo = std::min(lo, s.gamma[h]);
                hi = std::max(hi, s.gamma[h]);
            }
            mean /= static_cast<double>(ensemble.size());
        }
        out << (h + 1) << ',' << detail::format_double(ti.gamma[h]) << ','
            << detail::format_double(mean) << ',' << detail::format_double(lo) << ','
            << detail::format_double(hi) << '\n';
    }
    detail::finish_out(out, path);
}

// lag,ti,ens_mean,ens_min,ens_max — undefined lags stay empty.
inline void write_connectivity_csv(const ConnectivitySeries& ti,
                                   const std::vector<ConnectivitySeries>& ensemble,
                                   const std::string& path) {
    std::ofstream out = detail::open_out(path);
    out << "lag,ti,ens_mean,ens_min,ens_max\n";
    for (std::size_t h = 0; h < ti.probability.size(); ++h) {
        out << (h + 1) << ',';
        if (ti.probability[h])
            out << detail::format_double(*ti.probability[h]);
        out << ',';
        double mean = 0.0;
        double lo = 0.0;
        double hi = 0.0;
        int defined = 0;
        for (const ConnectivitySeries& s : ensemble) {
            if (!s.probability[h])
                continue;
            const double v = *s.probability[h];
            if (defined == 0) {
                lo = hi = v;
            } else {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            mean += v;
            ++defined;
        }
        if (defined > 0) {
            mean /= defined;
            out << detail::format_double(mean) << ',' << detail::format_double(lo) << ','
                << detail::format_double(hi);
        } else {
            out << ",,";
        }
        out << '\n';
    }
    detail::finish_out(out, path);
}

// facies,ti,ens_mean,ens_min,ens_max
inline void write_proportions_csv(const std::map<int, double>& ti,
                                  const std::vector<std::map<int, double>>& ensemble,
                                  const std::string& path) {
    std::ofstream out = detail::open_out(path);
    out << "facies,ti,ens_mean,ens_min,ens_max\n";
    for (const auto& [facies, ti_frac] : ti) {
        double mean = 0.0;
        double lo = 0.0;
        double hi = 0.0;
        if (!ensemble.empty()) {
            auto lookup = [facies](const std::map<int, double>& props) {
                const auto it = props.find(facies);
                return it != props.end() ? it->second : 0.0;
            };
            lo = hi = lookup(ensemble.front());
            for (const auto& props : ensemble) {
                const double v = lookup(props);
                mean += v;
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            mean /= static_cast<double>(ensemble.size());
        }
        out << facies << ',' << detail::format_double(ti_frac) << ','
            << detail::format_double(mean) << ',' << detail::format_double(lo) << ','
            << detail::format_double(hi) << '\n';
    }
    detail::finish_out(out, path);
}

// level,between_a,between_b,within_a,within_b,d_between,d_within,ratio,weight
// plus one aggregate row carrying r in the ratio column.
inline void write_anodi_csv(const AnodiResult& result, const std::string& path) {
    std::ofstream out = detail::open_out(path);
    out << "level,between_a,between_b,within_a,within_b,d_between,d_within,ratio,weight\n";
    for (std::size_t p = 0; p < result.levels.size(); ++p) {
        const AnodiLevel& l = result.levels[p];
        out << (p + 1) << ',' << detail::format_double(l.between_a) << ','
            << detail::format_double(l.between_b) << ',' << detail::format_double(l.within_a)
            << ',' << detail::format_double(l.within_b) << ','
            << detail::format_double(l.d_between) << ',' << detail::format_double(l.d_within)
            << ',' << detail::format_double(l.ratio) << ',' << detail::format_double(l.weight)
            << '\n';
    }
    out << "aggregate,,,,,,," << detail::format_double(result.aggregate) << ",\n";
    detail::finish_out(out, path);
}

// label,x,y
inline void write_mds_csv(const std::vector<std::string>& labels,
                          const std::vector<std::array<double, 2>>& coords,
                          const std::string& path) {
    if (labels.size() != coords.size())
        throw StructureError("label count does not match coordinate count");
    std::ofstream out = detail::open_out(path);
    out << "label,x,y\n";
    for (std::size_t i = 0; i < labels.size(); ++i)
        out << labels[i] << ',' << detail::format_double(coords[i][0]) << ','
            << detail::format_double(coords[i][1]) << '\n';
    detail::finish_out(out, path);
}

struct BenchRow {
    int level = 0;
    int sg = 0;
    double mean_s = 0.0;
    double std_s = 0.0;
    double speedup_vs_level1 = 0.0;
};

// level,sg,mean_s,std_s,speedup_vs_level1
inline void write_bench_csv(const std::vector<BenchRow>& rows, const std::string& path) {
    std::ofstream out = detail::open_out(path);
    out << "level,sg,mean_s,std_s,speedup_vs_level1\n";
    for (const BenchRow& r : rows)
        out << r.level << ',' << r.sg << ',' << detail::format_double(r.mean_s) << ','
            << detail::format_double(r.std_s) << ','
            << detail::format_double(r.speedup_vs_level1) << '\n';
    detail::finish_out(out, path);
}

// --- config files ----------------------------------------------------------
//
// Line-based "key = value"; '#' starts a comment line.
// Required: ti, sg_size, template, overlap, dwt_level, candidates,
// realizations, seed.  Optional: hard_data, scoring, facies_mode, min_cut,
// out_dir.

struct ConfigFile {
    SimConfig sim;
    std::string ti_path;
    std::optional<std::string> hard_data_path;
    std::optional<std::string> out_dir;
};

namespace detail {

inline std::map<std::string, std::string, std::less<>> read_key_values(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path);
    std::map<std::string, std::string, std::less<>> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string_view body = trim(line);
        if (body.empty() || body.front() == '#')
            continue;
        const std::size_t eq = body.find('=');
        if (eq == std::string_view::npos)
            throw ParseError(path, lineno, "expected \"key = value\"");
        const std::string key(trim(body.substr(0, eq)));
        const std::string value(trim(body.substr(eq + 1)));
        if (key.empty())
            throw ParseError(path, lineno, "empty key");
        if (!kv.emplace(key, value).second)
            throw ParseError(path, lineno, "duplicate key \"" + key + "\"");
    }
    return kv;
}

}  // namespace detail

// Applies one raw key/value onto a ConfigFile; shared between the config
// parser and the CLI flag overrides so both enforce identical rules.
inline void apply_config_entry(ConfigFile& cfg, const std::string& key, const std::string& value) {
    auto parse_positive = [&](const std::string& v, const char* name) {
        int out = 0;
        if (!detail::parse_int(v, out))
            throw ConfigError(std::string(name) + ": expected an integer, got \"" + v + "\"");
        return out;
    };

    if (key == "ti") {
        cfg.ti_path = value;
    } else if (key == "sg_size") {
        const auto parts = detail::split_char(value, 'x');
        if (parts.size() == 1) {
            cfg.sim.sg_height = cfg.sim.sg_width = parse_positive(std::string(parts[0]), "sg_size");
        } else if (parts.size() == 2) {
            cfg.sim.sg_height = parse_positive(std::string(detail::trim(parts[0])), "sg_size");
            cfg.sim.sg_width = parse_positive(std::string(detail::trim(parts[1])), "sg_size");
        } else {
            throw ConfigError("sg_size: expected \"<height>x<width>\" or a single size");
        }
    } else if (key == "template") {
        cfg.sim.template_size = parse_positive(value, "template");
    } else if (key == "overlap") {
        cfg.sim.overlap = parse_positive(value, "overlap");
    } else if (key == "dwt_level") {
        cfg.sim.dwt_level = parse_positive(value, "dwt_level");
    } else if (key == "candidates") {
        cfg.sim.candidates = parse_positive(value, "candidates");
    } else if (key == "realizations") {
        cfg.sim.n_realizations = parse_positive(value, "realizations");
    } else if (key == "seed") {
        std::uint64_t seed = 0;
        if (!detail::parse_int(value, seed))
            throw ConfigError("seed: expected a 64-bit unsigned integer, got \"" + value + "\"");
        cfg.sim.master_seed = seed;
    } else if (key == "scoring") {
        if (value == "raw")
            cfg.sim.scoring = ScoringMode::raw;
        else if (value == "normalized")
            cfg.sim.scoring = ScoringMode::normalized;
        else
            throw ConfigError("scoring: expected \"raw\" or \"normalized\", got \"" + value +
                              "\"");
    } else if (key == "facies_mode") {
        if (value == "indicator")
            cfg.sim.facies_mode = FaciesMode::indicator;
        else if (value == "raw-codes")
            cfg.sim.facies_mode = FaciesMode::raw_codes;
        else
            throw ConfigError("facies_mode: expected \"indicator\" or \"raw-codes\", got \"" +
                              value + "\"");
    } else if (key == "min_cut") {
        if (value == "on" || value == "true" || value == "1")
            cfg.sim.min_cut = true;
        else if (value == "off" || value == "false" || value == "0")
            cfg.sim.min_cut = false;
        else
            throw ConfigError("min_cut: expected on/off, got \"" + value + "\"");
    } else if (key == "hard_data") {
        cfg.hard_data_path = value;
    } else if (key == "out_dir") {
        cfg.out_dir = value;
    } else {
        throw ConfigError("unknown key \"" + key + "\"");
    }
}

// Parses and validates a config file.  The hard data file itself is loaded by
// the caller (it needs the SG size, known only after parsing).
inline ConfigFile parse_config(const std::string& path) {
    const auto kv = detail::read_key_values(path);

    static const char* required[] = {"ti",        "sg_size",      "template",     "overlap",
                                     "dwt_level", "candidates",   "realizations", "seed"};
    for (const char* key : required)
        if (!kv.contains(key))
            throw ConfigError(std::string(path) + ": missing required key \"" + key + "\"");

    ConfigFile cfg;
    for (const auto& [key, value] : kv)
        apply_config_entry(cfg, key, value);
    cfg.sim.validate();
    return cfg;
}

}  // namespace ccwsim
