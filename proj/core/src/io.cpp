#include "mwk/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "mwk/error.hpp"

namespace mwk {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cell.push_back('"');
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cell.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            cells.push_back(trim(cell));
            cell.clear();
        } else {
            cell.push_back(c);
        }
    }
    cells.push_back(trim(cell));
    return cells;
}

bool parse_number(const std::string& text, double& out) {
    if (text.empty()) {
        return false;
    }
    const char* begin = text.data();
    const char* end = begin + text.size();
    if (*begin == '+') {
        ++begin;
    }
    const auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end && std::isfinite(out);
}

bool blank(const std::string& line) {
    return line.find_first_not_of(" \t\r\n") == std::string::npos;
}

}  // namespace

Dataset read_csv(std::istream& in, const CsvOptions& options) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!blank(line)) {
            break;
        }
    }
    if (blank(line)) {
        fail(ErrorKind::parse, "CSV has no header row");
    }
    if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) {
        line.erase(0, 3);  // UTF-8 byte order mark
    }
    const std::vector<std::string> header = split_csv_line(line);
    const std::size_t width = header.size();
    std::optional<std::size_t> label_col;
    for (std::size_t c = 0; c < width; ++c) {
        if (header[c] == options.label_column) {
            label_col = c;
        }
    }
    if (options.require_labels && !label_col) {
        fail(ErrorKind::parse, "label column '" + options.label_column + "' not found");
    }

    Dataset data;
    for (std::size_t c = 0; c < width; ++c) {
        if (c != label_col) {
            data.feature_names.push_back(header[c]);
        }
    }
    const std::size_t m = data.feature_names.size();
    if (m == 0) {
        fail(ErrorKind::parse, "CSV has no feature columns");
    }

    std::vector<double> values;
    std::vector<std::string> raw_labels;
    std::size_t row = 0;
    bool first_data_line = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (blank(line)) {
            continue;
        }
        std::vector<std::string> cells = split_csv_line(line);
        if (first_data_line && !cells.empty() && cells[0] == kMaskTag) {
            first_data_line = false;
            if (cells.size() != m + 1) {
                fail(ErrorKind::parse, "mask row has " + std::to_string(cells.size() - 1) + " flags, expected " +
                                           std::to_string(m));
            }
            std::vector<bool> mask(m);
            for (std::size_t v = 0; v < m; ++v) {
                if (cells[v + 1] != "0" && cells[v + 1] != "1") {
                    fail(ErrorKind::parse, "mask flag '" + cells[v + 1] + "' at column " + std::to_string(v + 2) +
                                               " is not 0 or 1");
                }
                mask[v] = cells[v + 1] == "1";
            }
            data.informative_mask = std::move(mask);
            continue;
        }
        first_data_line = false;
        ++row;
        if (cells.size() != width) {
            fail(ErrorKind::parse, "row " + std::to_string(row) + " (line " + std::to_string(line_no) + ") has " +
                                       std::to_string(cells.size()) + " cells, header has " + std::to_string(width));
        }
        for (std::size_t c = 0; c < width; ++c) {
            if (c == label_col) {
                raw_labels.push_back(cells[c]);
                continue;
            }
            double x = 0.0;
            if (!parse_number(cells[c], x)) {
                fail(ErrorKind::parse, "non-numeric cell '" + cells[c] + "' at row " + std::to_string(row) +
                                           ", column " + std::to_string(c + 1));
            }
            values.push_back(x);
        }
    }
    if (row == 0) {
        fail(ErrorKind::parse, "CSV has no data rows");
    }
    data.values = Matrix(row, m);
    std::copy(values.begin(), values.end(), data.values.flat().begin());

    if (label_col) {
        std::vector<int> labels(row);
        bool numeric = true;
        for (std::size_t i = 0; i < row && numeric; ++i) {
            const std::string& s = raw_labels[i];
            int v = 0;
            const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            numeric = ec == std::errc() && ptr == s.data() + s.size();
            labels[i] = v;
        }
        if (!numeric) {
            std::map<std::string, int> ids;
            for (std::size_t i = 0; i < row; ++i) {
                labels[i] = ids.try_emplace(raw_labels[i], static_cast<int>(ids.size())).first->second;
            }
        }
        data.labels = std::move(labels);
    }
    data.validate();
    return data;
}

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options) {
    std::ifstream in(path);
    if (!in) {
        fail(ErrorKind::io, "cannot open '" + path.string() + "'");
    }
    return read_csv(in, options);
}

std::string format_double(double value) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
    (void)ec;
    return std::string(buf, ptr);
}

void write_csv(const Dataset& data, std::ostream& out) {
    for (std::size_t v = 0; v < data.m(); ++v) {
        out << (v ? "," : "") << data.feature_names[v];
    }
    if (data.labels) {
        out << ",label";
    }
    out << '\n';
    if (data.informative_mask) {
        out << kMaskTag;
        for (bool b : *data.informative_mask) {
            out << ',' << (b ? 1 : 0);
        }
        out << '\n';
    }
    for (std::size_t i = 0; i < data.n(); ++i) {
        for (std::size_t v = 0; v < data.m(); ++v) {
            out << (v ? "," : "") << format_double(data.values(i, v));
        }
        if (data.labels) {
            out << ',' << (*data.labels)[i];
        }
        out << '\n';
    }
}

void write_csv(const Dataset& data, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        fail(ErrorKind::io, "cannot write '" + path.string() + "'");
    }
    write_csv(data, out);
    if (!out) {
        fail(ErrorKind::io, "write to '" + path.string() + "' failed");
    }
}

NormalizeResult normalize_range(const Dataset& data) {
    NormalizeResult result;
    std::vector<std::size_t> keep;
    std::vector<double> mean(data.m());
    std::vector<double> range(data.m());
    for (std::size_t v = 0; v < data.m(); ++v) {
        double lo = data.values(0, v);
        double hi = lo;
        double sum = 0.0;
        for (std::size_t i = 0; i < data.n(); ++i) {
            const double x = data.values(i, v);
            lo = std::min(lo, x);
            hi = std::max(hi, x);
            sum += x;
        }
        mean[v] = sum / static_cast<double>(data.n());
        range[v] = hi - lo;
        if (range[v] > 0.0) {
            keep.push_back(v);
        } else {
            result.dropped.push_back(data.feature_names[v]);
            result.warnings.push_back("dropped constant feature '" + data.feature_names[v] + "'");
        }
    }
    if (keep.empty()) {
        fail(ErrorKind::input, "every feature is constant; nothing left after normalization");
    }
    result.data = select_columns(data, keep);
    for (std::size_t c = 0; c < keep.size(); ++c) {
        const std::size_t v = keep[c];
        for (std::size_t i = 0; i < data.n(); ++i) {
            result.data.values(i, c) = (data.values(i, v) - mean[v]) / range[v];
        }
    }
    return result;
}

}  // namespace mwk
