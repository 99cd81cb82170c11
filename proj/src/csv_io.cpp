#include "terp/csv_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace terp {

namespace {

std::string trim(std::string s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

double parse_number(const std::string& s, std::size_t line) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw DataError("line " + std::to_string(line) + ": '" + s + "' is not a number");
    }
    return v;
}

std::ifstream open(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot read '" + path + "'");
    return in;
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

LoadedDataset read_dataset_csv(std::istream& in, bool fragmented) {
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++line_no;
        if (!trim(line).empty()) {
            header = split(line);
            break;
        }
    }
    if (header.empty()) throw DataError("dataset file is empty");

    std::vector<Record> records;
    if (header.size() == 3 && header[0] == "curve_id") {
        while (std::getline(in, line)) {
            ++line_no;
            if (trim(line).empty()) continue;
            auto cells = split(line);
            if (cells.size() != 3) throw DataError("line " + std::to_string(line_no) + ": expected 3 fields");
            records.push_back({cells[0], parse_number(cells[1], line_no), parse_number(cells[2], line_no)});
        }
    } else {
        std::vector<double> times;
        for (const auto& h : header) times.push_back(parse_number(h, line_no));
        std::size_t row = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (trim(line).empty()) continue;
            auto cells = split(line);
            if (cells.size() != times.size()) {
                throw DataError("line " + std::to_string(line_no) + ": expected " + std::to_string(times.size()) +
                                " values");
            }
            ++row;
            for (std::size_t k = 0; k < cells.size(); ++k) {
                records.push_back({std::to_string(row), times[k], parse_number(cells[k], line_no)});
            }
        }
    }
    if (records.empty()) throw DataError("dataset file has no observations");

    LoadedDataset out;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& r : records) {
        if (!std::isfinite(r.time)) throw DataError("non-finite time for curve '" + r.curve_id + "'");
        lo = std::min(lo, r.time);
        hi = std::max(hi, r.time);
    }
    if (lo < 0.0 || hi > 1.0) {
        if (!(hi > lo)) throw DataError("all observation times coincide");
        for (auto& r : records) r.time = std::clamp((r.time - lo) / (hi - lo), 0.0, 1.0);
        out.rescaled = true;
        out.time_min = lo;
        out.time_max = hi;
    }
    out.dataset = build_dataset(records, fragmented);
    return out;
}

LoadedDataset read_dataset_csv(const std::string& path, bool fragmented) {
    auto in = open(path);
    return read_dataset_csv(in, fragmented);
}

void write_dataset_csv(std::ostream& out, const FunctionalDataset& data) {
    if (data.regime() == Regime::Regular) {
        const auto& grid = data.common_grid();
        for (std::size_t k = 0; k < grid.size(); ++k) out << (k ? "," : "") << format_double(grid[k]);
        out << '\n';
        for (const auto& c : data.curves()) {
            for (std::size_t k = 0; k < c.size(); ++k) out << (k ? "," : "") << format_double(c.value(k));
            out << '\n';
        }
        return;
    }
    out << "curve_id,time,value\n";
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto& c = data[i];
        for (std::size_t k = 0; k < c.size(); ++k) {
            out << data.ids()[i] << ',' << format_double(c.time(k)) << ',' << format_double(c.value(k)) << '\n';
        }
    }
}

void write_labels_csv(std::ostream& out, const std::vector<std::string>& ids, const Partition& partition) {
    if (ids.size() != partition.size()) throw DataError("label count does not match curve count");
    out << "curve_id,label\n";
    for (std::size_t i = 0; i < ids.size(); ++i) out << ids[i] << ',' << partition[i] << '\n';
}

std::vector<std::string> read_labels_csv(std::istream& in) {
    std::string line;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        if (!trim(line).empty()) {
            header = split(line);
            break;
        }
    }
    const auto col = std::find(header.begin(), header.end(), "label");
    if (col == header.end()) throw DataError("label file needs a 'label' column");
    const auto index = static_cast<std::size_t>(col - header.begin());
    std::vector<std::string> labels;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        auto cells = split(line);
        if (cells.size() <= index) throw DataError("label row '" + line + "' is missing the label field");
        labels.push_back(cells[index]);
    }
    if (labels.empty()) throw DataError("label file has no rows");
    return labels;
}

std::vector<std::string> read_labels_csv(const std::string& path) {
    auto in = open(path);
    return read_labels_csv(in);
}

}  // namespace terp
