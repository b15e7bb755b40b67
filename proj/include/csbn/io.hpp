#pragma once

#include <charconv>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <Eigen/Dense>

#include "core_model.hpp"

namespace csbn {

// Locale-independent text formats: comma-separated numeric CSV with an
// optional header row, and an intervention file with one token per row
// (`obs` or a 1-based node index).

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::optional<double> parse_double(std::string_view s) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

inline std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open '" + path + "'");
    return in;
}

inline std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error("cannot write '" + path + "'");
    return out;
}

} // namespace detail

/// Shortest round-trip decimal representation.
inline std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

/// Reads a numeric CSV. A first line with any non-numeric field is taken
/// as a header; blank lines are skipped.
inline MatrixXd read_matrix_csv(std::istream& in, const std::string& name = "csv") {
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t lineno = 0;
    bool first = true;
    while (std::getline(in, line)) {
        ++lineno;
        if (detail::trim(line).empty()) continue;
        const auto fields = detail::split_fields(line);
        std::vector<double> vals;
        vals.reserve(fields.size());
        bool numeric = true;
        for (auto f : fields) {
            const auto v = detail::parse_double(f);
            if (!v) {
                numeric = false;
                break;
            }
            vals.push_back(*v);
        }
        if (!numeric) {
            if (first) {
                first = false;
                continue;
            }
            throw data_error(name + ": non-numeric field on line " + std::to_string(lineno));
        }
        first = false;
        if (!rows.empty() && vals.size() != rows.front().size()) {
            throw data_error(name + ": line " + std::to_string(lineno) + " has " + std::to_string(vals.size()) +
                             " fields, expected " + std::to_string(rows.front().size()));
        }
        rows.push_back(std::move(vals));
    }
    if (rows.empty()) throw data_error(name + ": no numeric rows");
    MatrixXd m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
    for (Index r = 0; r < m.rows(); ++r) {
        for (Index c = 0; c < m.cols(); ++c) m(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    }
    return m;
}

inline MatrixXd read_matrix_csv(const std::string& path) {
    auto in = detail::open_input(path);
    return read_matrix_csv(in, path);
}

inline void write_matrix_csv(std::ostream& os, const MatrixXd& m, const std::vector<std::string>& header = {}) {
    if (!header.empty()) {
        for (std::size_t c = 0; c < header.size(); ++c) os << (c ? "," : "") << header[c];
        os << '\n';
    }
    for (Index r = 0; r < m.rows(); ++r) {
        for (Index c = 0; c < m.cols(); ++c) os << (c ? "," : "") << format_double(m(r, c));
        os << '\n';
    }
}

inline void write_matrix_csv(const std::string& path, const MatrixXd& m, const std::vector<std::string>& header = {}) {
    auto out = detail::open_output(path);
    write_matrix_csv(out, m, header);
}

/// One token per non-blank line: `obs` or a 1-based node index in 1..p.
inline std::vector<Intervention> read_interventions(std::istream& in, Index p, const std::string& name = "interventions") {
    std::vector<Intervention> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto tok = detail::trim(line);
        if (tok.empty()) continue;
        if (tok == "obs") {
            out.emplace_back(std::nullopt);
            continue;
        }
        int v = 0;
        const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc() || ptr != tok.data() + tok.size()) {
            throw data_error(name + ": line " + std::to_string(lineno) + ": expected 'obs' or a node index");
        }
        if (v < 1 || v > p) {
            throw data_error(name + ": line " + std::to_string(lineno) + ": node " + std::to_string(v) +
                             " out of range 1.." + std::to_string(p));
        }
        out.emplace_back(v - 1);
    }
    return out;
}

inline std::vector<Intervention> read_interventions(const std::string& path, Index p) {
    auto in = detail::open_input(path);
    return read_interventions(in, p, path);
}

inline void write_interventions(std::ostream& os, const std::vector<Intervention>& v) {
    for (const auto& iv : v) {
        if (iv) {
            os << (*iv + 1) << '\n';
        } else {
            os << "obs\n";
        }
    }
}

inline void write_interventions(const std::string& path, const std::vector<Intervention>& v) {
    auto out = detail::open_output(path);
    write_interventions(out, v);
}

/// Data CSV plus optional intervention file (all rows observational if absent).
inline DataSet load_dataset(const std::string& data_path, const std::optional<std::string>& interventions_path) {
    MatrixXd w = read_matrix_csv(data_path);
    std::vector<Intervention> iv;
    if (interventions_path) {
        iv = read_interventions(*interventions_path, w.cols());
        if (static_cast<Index>(iv.size()) != w.rows()) {
            throw data_error(*interventions_path + ": " + std::to_string(iv.size()) + " entries but data has " +
                             std::to_string(w.rows()) + " rows");
        }
    } else {
        iv.assign(static_cast<std::size_t>(w.rows()), std::nullopt);
    }
    return DataSet(std::move(w), std::move(iv));
}

} // namespace csbn
