#include "navier/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "navier/error.hpp"

namespace navier {

namespace {

template <class ValueAt>
std::string nodal_csv(const Grid& g, ValueAt value_at) {
    std::string s = "x,y,value\n";
    s.reserve(s.size() + static_cast<std::size_t>(g.size()) * 64);
    char buf[96];
    for (int k = 0; k < g.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", g.x_of(k), g.y_of(k), value_at(k));
        s += buf;
    }
    return s;
}

}  // namespace

std::string field_to_csv(const Field& u) {
    return nodal_csv(u.grid(), [&](int k) { return u[k]; });
}

std::string weights_to_csv(const MeasureWeights& m) {
    return nodal_csv(m.grid(), [&](int k) { return m[k]; });
}

Field field_from_csv(std::string_view text, MaskPtr mask) {
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line) || line.rfind("x,y,value", 0) != 0) {
        throw InvalidArgument("field csv: missing header x,y,value");
    }
    const int n = mask->grid().size();
    std::vector<double> values;
    values.reserve(n);
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto last = line.rfind(',');
        if (last == std::string::npos) {
            throw InvalidArgument("field csv line " + std::to_string(lineno) + ": expected x,y,value");
        }
        const std::string tok = line.substr(last + 1);
        char* end = nullptr;
        const double v = std::strtod(tok.c_str(), &end);
        if (end == tok.c_str()) {
            throw InvalidArgument("field csv line " + std::to_string(lineno) + ": malformed value");
        }
        values.push_back(v);
    }
    if (static_cast<int>(values.size()) != n) {
        throw InvalidArgument("field csv: " + std::to_string(values.size()) + " rows for a grid of " +
                              std::to_string(n) + " nodes");
    }
    return Field(std::move(mask), std::move(values));
}

std::string field_to_pgm(const Field& u) {
    const Grid& g = u.grid();
    const auto vals = u.values();
    const auto [lo_it, hi_it] = std::minmax_element(vals.begin(), vals.end());
    const double lo = *lo_it;
    const double span = *hi_it - lo;

    std::string s = "P2\n" + std::to_string(g.nx()) + " " + std::to_string(g.ny()) + "\n255\n";
    for (int j = g.ny() - 1; j >= 0; --j) {
        for (int i = 0; i < g.nx(); ++i) {
            const double t = span > 0.0 ? (u[g.index(i, j)] - lo) / span : 0.0;
            const int level = std::clamp(static_cast<int>(std::lround(255.0 * t)), 0, 255);
            if (i) s += ' ';
            s += std::to_string(level);
        }
        s += '\n';
    }
    return s;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open " + tmp.string() + " for writing");
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) throw Error("failed writing " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgument("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace navier
