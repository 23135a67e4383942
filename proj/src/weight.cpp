#include "weightlab/weight.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "weightlab/error.hpp"

namespace weightlab {

namespace {

void validate(const Grid& grid, const std::vector<Samples>& fibers) {
    if (fibers.empty()) throw InvariantError("weight needs at least one fiber");
    for (std::size_t f = 0; f < fibers.size(); ++f) {
        if (fibers[f].size() != grid.size()) {
            throw BoundsError("fiber " + std::to_string(f) + " has " + std::to_string(fibers[f].size()) +
                              " samples, grid has " + std::to_string(grid.size()));
        }
        for (std::size_t i = 0; i < fibers[f].size(); ++i) {
            const double v = fibers[f][i];
            if (!(v > 0.0) || !std::isfinite(v)) {
                throw InvariantError("weight sample " + std::to_string(v) + " at fiber " + std::to_string(f) +
                                     ", cell " + std::to_string(i) + " is not positive and finite");
            }
        }
    }
}

template <typename Op>
Weight combine(const Weight& a, const Weight& b, Op op) {
    if (!(a.grid() == b.grid()) || a.fiber_count() != b.fiber_count()) {
        throw BoundsError("weights live on different grids or fiber counts");
    }
    std::vector<Samples> out(a.fiber_count());
    for (std::size_t f = 0; f < a.fiber_count(); ++f) {
        auto x = a.fiber(f);
        auto y = b.fiber(f);
        out[f].resize(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) out[f][i] = op(x[i], y[i]);
    }
    return Weight(a.grid(), std::move(out));
}

double parse_number(std::string_view text, std::string_view context) {
    double value = 0.0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) {
        throw ParseError("cannot parse number '" + std::string(text) + "' in " + std::string(context));
    }
    return value;
}

double parse_keyed(std::string_view body, std::string_view key, std::string_view spec) {
    if (body.substr(0, key.size()) != key || body.size() <= key.size() || body[key.size()] != '=') {
        throw ParseError("expected '" + std::string(key) + "=<value>' in weight spec '" + std::string(spec) + "'");
    }
    return parse_number(body.substr(key.size() + 1), spec);
}

Weight read_csv(const std::string& path, const Grid& grid) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open csv weight file '" + path + "'");
    std::vector<Samples> columns;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        std::vector<double> row;
        try {
            for (const auto& c : cells) row.push_back(parse_number(c, path));
        } catch (const ParseError&) {
            if (first) {  // header row
                first = false;
                continue;
            }
            throw;
        }
        first = false;
        if (columns.empty()) columns.resize(row.size());
        if (row.size() != columns.size()) throw ParseError("ragged csv row in '" + path + "'");
        for (std::size_t c = 0; c < row.size(); ++c) columns[c].push_back(row[c]);
    }
    if (columns.empty()) throw ParseError("csv weight file '" + path + "' has no data");
    try {
        return Weight(grid, std::move(columns));
    } catch (const Error& e) {
        throw ParseError(std::string("csv weight '") + path + "': " + e.what());
    }
}

}  // namespace

Weight::Weight(Grid grid, std::vector<Samples> fibers) : grid_(grid), fibers_(std::move(fibers)) {
    validate(grid_, fibers_);
}

Weight::Weight(Grid grid, Samples single_fiber) : Weight(grid, std::vector<Samples>{std::move(single_fiber)}) {}

Weight Weight::pow(double exponent) const {
    std::vector<Samples> out = fibers_;
    for (auto& fiber : out)
        for (auto& v : fiber) v = std::pow(v, exponent);
    return Weight(grid_, std::move(out));
}

Weight Weight::scaled(double factor) const {
    std::vector<Samples> out = fibers_;
    for (auto& fiber : out)
        for (auto& v : fiber) v *= factor;
    return Weight(grid_, std::move(out));
}

Weight operator*(const Weight& a, const Weight& b) {
    return combine(a, b, [](double x, double y) { return x * y; });
}

Weight max(const Weight& a, const Weight& b) {
    return combine(a, b, [](double x, double y) { return std::max(x, y); });
}

Weight min(const Weight& a, const Weight& b) {
    return combine(a, b, [](double x, double y) { return std::min(x, y); });
}

Weight geometric_mix(const Weight& u, const Weight& v, double theta) {
    return combine(u, v, [theta](double x, double y) { return std::pow(x, theta) * std::pow(y, 1.0 - theta); });
}

Weight constant_weight(const Grid& grid, double value) { return Weight(grid, Samples(grid.size(), value)); }

Weight power_weight(const Grid& grid, double exponent) {
    Samples s(grid.size());
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = std::pow(std::abs(grid.midpoint(i)), exponent);
    return Weight(grid, std::move(s));
}

Weight step_weight(const Grid& grid, double jump) {
    Samples s(grid.size(), 1.0);
    for (std::size_t i = grid.size() / 2; i < s.size(); ++i) s[i] = jump;
    return Weight(grid, std::move(s));
}

Weight random_piecewise_weight(const Grid& grid, std::uint64_t seed, int pieces, double spread) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-spread, spread);
    Samples s(grid.size());
    const std::size_t block = std::max<std::size_t>(1, grid.size() / static_cast<std::size_t>(pieces));
    double value = 1.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i % block == 0) value = std::exp(dist(rng));
        s[i] = value;
    }
    return Weight(grid, std::move(s));
}

Weight parse_weight(std::string_view spec, const Grid& grid) {
    const auto colon = spec.find(':');
    if (colon == std::string_view::npos) throw ParseError("weight spec '" + std::string(spec) + "' lacks ':'");
    const auto kind = spec.substr(0, colon);
    const auto body = spec.substr(colon + 1);
    try {
        if (kind == "const") {
            return constant_weight(grid, parse_keyed(body, "c", spec));
        }
        if (kind == "power") {
            return power_weight(grid, parse_keyed(body, "a", spec));
        }
        if (kind == "step") {
            return step_weight(grid, parse_keyed(body, "K", spec));
        }
    } catch (const InvariantError& e) {
        throw ParseError("weight spec '" + std::string(spec) + "': " + e.what());
    }
    if (kind == "csv") {
        if (body.empty()) throw ParseError("csv weight spec needs a path");
        return read_csv(std::string(body), grid);
    }
    throw ParseError("unknown weight kind '" + std::string(kind) + "'");
}

double max_relative_difference(const Weight& a, const Weight& b) {
    double worst = 0.0;
    for (std::size_t f = 0; f < a.fiber_count(); ++f) {
        auto x = a.fiber(f);
        auto y = b.fiber(f);
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double scale = std::max(std::abs(x[i]), std::abs(y[i]));
            if (scale > 0.0) worst = std::max(worst, std::abs(x[i] - y[i]) / scale);
        }
    }
    return worst;
}

}  // namespace weightlab
