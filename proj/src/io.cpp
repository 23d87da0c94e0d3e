#include "nvsd/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "nvsd/common.hpp"

namespace nvsd::io {

namespace {

constexpr double kNa = std::numeric_limits<double>::quiet_NaN();

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string strip_quotes(const std::string& s) {
    if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') ||
                          (s.front() == '\'' && s.back() == '\'')))
        return s.substr(1, s.size() - 2);
    return s;
}

bool is_missing(const std::string& cell) {
    return cell.empty() || cell == "NA" || cell == "na" || cell == "?" ||
           cell == "NaN" || cell == "nan";
}

std::vector<std::string> split_line(const std::string& line, char delim) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == delim) {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

RawTable read_delimited(std::istream& is, char delimiter) {
    std::string line;
    if (!std::getline(is, line))
        throw ParseError("delimited input: empty file");
    RawTable table;
    for (const auto& cell : split_line(line, delimiter))
        table.names.push_back(strip_quotes(trim(cell)));
    const std::size_t p = table.names.size();
    if (p == 0) throw ParseError("delimited input: empty header");

    std::vector<std::vector<double>> cols(p);
    std::vector<bool> numeric_ok(p, true);
    std::size_t row = 1;
    while (std::getline(is, line)) {
        ++row;
        if (trim(line).empty()) continue;
        const auto cells = split_line(line, delimiter);
        if (cells.size() != p)
            throw ParseError("row " + std::to_string(row) + ": expected " +
                             std::to_string(p) + " fields, found " +
                             std::to_string(cells.size()));
        for (std::size_t j = 0; j < p; ++j) {
            const std::string cell = strip_quotes(trim(cells[j]));
            if (is_missing(cell)) {
                cols[j].push_back(kNa);
                continue;
            }
            double v = 0.0;
            const auto [ptr, ec] =
                std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
                numeric_ok[j] = false;
                cols[j].push_back(kNa);
            } else {
                cols[j].push_back(v);
            }
        }
    }
    for (std::size_t j = 0; j < p; ++j) {
        if (numeric_ok[j]) {
            table.columns.push_back(std::move(cols[j]));
        } else {
            table.dropped_non_numeric.push_back(table.names[j]);
            table.names[j].clear();  // mark for removal
        }
    }
    table.names.erase(
        std::remove_if(table.names.begin(), table.names.end(),
                       [](const std::string& s) { return s.empty(); }),
        table.names.end());
    if (table.names.size() != table.columns.size())
        throw ParseError("delimited input: header/column bookkeeping mismatch");
    return table;
}

RawTable read_delimited_file(const std::string& path, char delimiter) {
    std::ifstream f(path);
    if (!f) throw ParseError("cannot open '" + path + "'");
    return read_delimited(f, delimiter);
}

void IngestSpec::validate() const {
    if (column_na_threshold < 0.0 || column_na_threshold >= 1.0)
        throw ConfigError("ingest: NA threshold must be in [0,1)");
    if (knn_k < 1) throw ConfigError("ingest: knn_k must be >= 1");
}

std::size_t knn_impute(std::vector<std::vector<double>>& columns,
                       std::size_t k) {
    if (columns.empty()) return 0;
    const std::size_t p = columns.size();
    const std::size_t n = columns.front().size();
    if (k >= n) throw ConfigError("knn_impute: k must be below the row count");

    // per-column standardization over observed cells
    std::vector<double> mu(p, 0.0), sig(p, 1.0);
    for (std::size_t j = 0; j < p; ++j) {
        double s = 0.0, ss = 0.0;
        std::size_t cnt = 0;
        for (double v : columns[j]) {
            if (std::isnan(v)) continue;
            s += v;
            ss += v * v;
            ++cnt;
        }
        if (cnt == 0) continue;
        mu[j] = s / static_cast<double>(cnt);
        const double var =
            cnt > 1 ? (ss - s * s / static_cast<double>(cnt)) /
                          static_cast<double>(cnt - 1)
                    : 0.0;
        sig[j] = var > 0.0 ? std::sqrt(var) : 1.0;
    }

    // standardized row-major copy of the original matrix; imputations never
    // feed later distance computations
    std::vector<std::vector<double>> z(n, std::vector<double>(p));
    std::vector<bool> row_has_obs(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < p; ++j) {
            const double v = columns[j][i];
            z[i][j] = std::isnan(v) ? kNa : (v - mu[j]) / sig[j];
            if (!std::isnan(v)) row_has_obs[i] = true;
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        if (!row_has_obs[i])
            throw InvalidSampleError("knn_impute: row " + std::to_string(i + 1) +
                                     " is fully missing");

    std::size_t imputed = 0;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::size_t> missing_cols;
        for (std::size_t j = 0; j < p; ++j)
            if (std::isnan(columns[j][i])) missing_cols.push_back(j);
        if (missing_cols.empty()) continue;

        // distance to every other row over mutually observed coordinates,
        // scaled up by p / n_shared (the NaN-Euclidean convention)
        std::vector<std::pair<double, std::size_t>> dist;
        dist.reserve(n - 1);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == i) continue;
            double ss = 0.0;
            std::size_t shared = 0;
            for (std::size_t j = 0; j < p; ++j) {
                if (std::isnan(z[i][j]) || std::isnan(z[r][j])) continue;
                const double d = z[i][j] - z[r][j];
                ss += d * d;
                ++shared;
            }
            if (shared == 0) continue;
            dist.emplace_back(
                ss * static_cast<double>(p) / static_cast<double>(shared), r);
        }
        std::stable_sort(dist.begin(), dist.end(),
                         [](const auto& a, const auto& b) {
                             return a.first < b.first;
                         });

        for (std::size_t j : missing_cols) {
            double sum = 0.0;
            std::size_t used = 0;
            for (const auto& [d2, r] : dist) {
                if (std::isnan(columns[j][r])) continue;  // donor must observe j
                sum += columns[j][r];
                if (++used == k) break;
            }
            if (used == 0) {
                // no donor observes this column for this row; fall back to the
                // column mean over observed cells
                columns[j][i] = mu[j];
            } else {
                columns[j][i] = sum / static_cast<double>(used);
            }
            ++imputed;
        }
    }
    return imputed;
}

Dataset ingest_stream(std::istream& is, const IngestSpec& spec,
                      IngestReport* report) {
    spec.validate();
    RawTable table = read_delimited(is, spec.delimiter);
    IngestReport local;
    local.dropped_non_numeric = table.dropped_non_numeric;

    // resolve the response column: by name, or 1-based position
    std::size_t resp = table.names.size();
    for (std::size_t j = 0; j < table.names.size(); ++j)
        if (table.names[j] == spec.response_column) resp = j;
    if (resp == table.names.size() && !spec.response_column.empty()) {
        try {
            const long idx = std::stol(spec.response_column);
            if (idx >= 1 &&
                static_cast<std::size_t>(idx) <= table.names.size())
                resp = static_cast<std::size_t>(idx - 1);
        } catch (...) {
        }
    }
    if (spec.response_column.empty() && !table.names.empty())
        resp = table.names.size() - 1;  // default: last column
    if (resp >= table.names.size())
        throw SchemaError("ingest: response column '" + spec.response_column +
                          "' not found");

    // drop rows with a missing response
    const std::size_t n_raw = table.n_rows();
    std::vector<std::size_t> keep_rows;
    keep_rows.reserve(n_raw);
    for (std::size_t i = 0; i < n_raw; ++i)
        if (!std::isnan(table.columns[resp][i])) keep_rows.push_back(i);
    local.rows_dropped_missing_response = n_raw - keep_rows.size();

    Dataset d;
    std::vector<std::vector<double>> kept_cols;
    for (std::size_t j = 0; j < table.columns.size(); ++j) {
        std::vector<double> col;
        col.reserve(keep_rows.size());
        for (std::size_t i : keep_rows) col.push_back(table.columns[j][i]);
        if (j == resp) {
            d.response = std::move(col);
            continue;
        }
        std::size_t na = 0;
        for (double v : col)
            if (std::isnan(v)) ++na;
        const double share = keep_rows.empty()
                                 ? 1.0
                                 : static_cast<double>(na) /
                                       static_cast<double>(keep_rows.size());
        if (share > spec.column_na_threshold) {
            local.dropped_na_threshold.push_back(table.names[j]);
        } else {
            d.names.push_back(table.names[j]);
            kept_cols.push_back(std::move(col));
        }
    }
    if (kept_cols.empty())
        throw SchemaError("ingest: every predictor column was dropped");
    d.columns = std::move(kept_cols);

    bool any_missing = false;
    for (const auto& col : d.columns)
        for (double v : col)
            if (std::isnan(v)) any_missing = true;
    if (any_missing)
        local.cells_imputed = knn_impute(d.columns, std::min(spec.knn_k,
                                                             d.n_rows() - 1));
    d.validate();
    if (report) *report = local;
    return d;
}

Dataset ingest(const IngestSpec& spec, IngestReport* report) {
    std::ifstream f(spec.path);
    if (!f) throw ParseError("cannot open '" + spec.path + "'");
    return ingest_stream(f, spec, report);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    // trim to the shortest representation that round-trips
    for (int prec = 1; prec <= 17; ++prec) {
        char probe[40];
        std::snprintf(probe, sizeof(probe), "%.*g", prec, v);
        double back = 0.0;
        std::sscanf(probe, "%lf", &back);
        if (back == v) return probe;
    }
    return buf;
}

void write_delimited(std::ostream& os, const Dataset& d, char delimiter,
                     const std::string& response_name) {
    for (std::size_t j = 0; j < d.names.size(); ++j)
        os << d.names[j] << delimiter;
    os << response_name << '\n';
    for (std::size_t i = 0; i < d.n_rows(); ++i) {
        for (std::size_t j = 0; j < d.n_cols(); ++j)
            os << format_double(d.columns[j][i]) << delimiter;
        os << format_double(d.response[i]) << '\n';
    }
}

}  // namespace nvsd::io
