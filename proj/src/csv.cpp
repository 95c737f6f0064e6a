#include "yspde/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace yspde {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open '" + path + "' for writing");
    return os;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

double to_double(const std::string& s, const std::string& where) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw IoError("bad number '" + s + "' in " + where);
    }
}

}  // namespace

void write_driver_csv(const std::string& path, const DriverPath& p) {
    auto os = open_out(path);
    os << "t";
    for (int d = 1; d <= p.dims; ++d) os << ",v_" << d;
    os << "\n";
    for (int k = 0; k < p.grid.nodes(); ++k) {
        os << fmt17(p.grid.node(k));
        for (int d = 0; d < p.dims; ++d) os << "," << fmt17(p.at(k, d));
        os << "\n";
    }
}

DriverPath read_driver_csv(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(is, line)) throw IoError("empty path CSV '" + path + "'");
    auto header = split(line, ',');
    if (header.empty() || header[0] != "t")
        throw IoError("path CSV '" + path + "' must start with a 't' column");
    int dims = static_cast<int>(header.size()) - 1;
    if (dims < 1) throw IoError("path CSV '" + path + "' has no value columns");
    std::vector<std::vector<double>> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        auto cells = split(line, ',');
        if (static_cast<int>(cells.size()) != dims + 1)
            throw IoError("ragged row in path CSV '" + path + "'");
        std::vector<double> row;
        for (const auto& c : cells) row.push_back(to_double(c, path));
        rows.push_back(std::move(row));
    }
    if (rows.size() < 2) throw IoError("path CSV '" + path + "' needs >= 2 rows");
    int n = static_cast<int>(rows.size()) - 1;
    double horizon = rows.back()[0];
    Grid grid(horizon, n, 0);
    DriverPath p(grid, dims);
    for (int k = 0; k <= n; ++k)
        for (int d = 0; d < dims; ++d) p.at(k, d) = rows[k][d + 1];
    return p;
}

void write_field_csv(const std::string& path, const SpectralField& f) {
    auto os = open_out(path);
    for (int a = 1; a <= f.dim(); ++a) os << "k_" << a << ",";
    os << "component,re,im\n";
    int k[3];
    for (int m = 0; m < f.mode_count(); ++m) {
        f.wavevector(m, k);
        for (int c = 0; c < f.components(); ++c) {
            for (int a = 0; a < f.dim(); ++a) os << k[a] << ",";
            os << c << "," << fmt17(f.at(c, m).real()) << "," << fmt17(f.at(c, m).imag())
               << "\n";
        }
    }
}

SpectralField read_field_csv(const std::string& path, int dim, int components, int cutoff) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open '" + path + "'");
    SpectralField f(dim, components, cutoff);
    std::string line;
    if (!std::getline(is, line)) throw IoError("empty field CSV '" + path + "'");
    int k[3] = {0, 0, 0};
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        auto cells = split(line, ',');
        if (static_cast<int>(cells.size()) != dim + 3)
            throw IoError("ragged row in field CSV '" + path + "'");
        for (int a = 0; a < dim; ++a)
            k[a] = static_cast<int>(to_double(cells[a], path));
        int c = static_cast<int>(to_double(cells[dim], path));
        f.at(c, f.mode_index(k)) =
            Complex(to_double(cells[dim + 1], path), to_double(cells[dim + 2], path));
    }
    return f;
}

void write_defect_csv(const std::string& path, const std::vector<DefectLevel>& levels) {
    auto os = open_out(path);
    os << "level,max_defect,ratio_to_prev\n";
    for (const auto& l : levels)
        os << l.level << "," << fmt17(l.max_defect) << "," << fmt17(l.ratio_to_prev) << "\n";
}

void write_trajectory_csv(const std::string& path, const FieldPath& u,
                          const SemigroupHandle& sg, const std::vector<int>& modes,
                          const std::vector<double>& gamma_list) {
    auto os = open_out(path);
    os << "t";
    for (int k : modes) os << ",re_k" << k << ",im_k" << k;
    for (double g : gamma_list) os << ",norm_gamma_" << fmt17(g);
    os << "\n";
    for (int node = 0; node < u.grid.nodes(); ++node) {
        os << fmt17(u.grid.node(node));
        const SpectralField& f = u.values[node];
        for (int k : modes) {
            int kv[3] = {k, 0, 0};
            Complex c = f.at(0, f.mode_index(kv));
            os << "," << fmt17(c.real()) << "," << fmt17(c.imag());
        }
        for (double g : gamma_list) os << "," << fmt17(sg.sobolev_norm(f, g));
        os << "\n";
    }
}

void write_metadata(const std::string& path,
                    const std::vector<std::pair<std::string, std::string>>& kv) {
    nlohmann::ordered_json j;
    for (const auto& [k, v] : kv) j[k] = v;
    auto os = open_out(path);
    os << j.dump(2) << "\n";
}

void write_text(const std::string& path, const std::string& text) {
    auto os = open_out(path);
    os << text;
}

}  // namespace yspde
