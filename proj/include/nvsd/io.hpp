#pragma once

#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "nvsd/dataset.hpp"

namespace nvsd::io {

// Raw parse of a delimited file: header row plus numeric cells, NaN for
// missing values (empty field, "NA", or "?"). Columns that fail to parse as
// numbers in every non-missing cell are dropped (names recorded).
struct RawTable {
    std::vector<std::string> names;
    std::vector<std::vector<double>> columns;  // NaN marks a missing cell
    std::vector<std::string> dropped_non_numeric;

    std::size_t n_rows() const {
        return columns.empty() ? 0 : columns.front().size();
    }
};

RawTable read_delimited(std::istream& is, char delimiter);
RawTable read_delimited_file(const std::string& path, char delimiter);

struct IngestSpec {
    std::string path;
    char delimiter = ',';
    std::string response_column;       // name, or 1-based index when numeric
    double column_na_threshold = 0.10; // drop predictors above this NA share
    std::size_t knn_k = 10;

    void validate() const;
};

struct IngestReport {
    std::vector<std::string> dropped_non_numeric;
    std::vector<std::string> dropped_na_threshold;
    std::size_t rows_dropped_missing_response = 0;
    std::size_t cells_imputed = 0;
};

// Full ingestion pipeline: parse, drop rows with a missing response, drop
// predictor columns whose NA share exceeds the threshold, KNN-impute the
// remaining missing cells. The result is fully finite.
Dataset ingest(const IngestSpec& spec, IngestReport* report = nullptr);
Dataset ingest_stream(std::istream& is, const IngestSpec& spec,
                      IngestReport* report = nullptr);

// K-nearest-neighbour imputation. Each NaN is replaced by the mean of its
// column over the k nearest rows (rows with that column observed), where
// distance is Euclidean over mutually observed, per-column-standardized
// coordinates, rescaled by the share of observed coordinates. Observed cells
// are never touched; all imputed values derive from the original matrix.
// Throws InvalidSampleError when a row is fully missing,
// ConfigError when k >= number of rows.
std::size_t knn_impute(std::vector<std::vector<double>>& columns,
                       std::size_t k);

// Writes a dataset (predictors then response) as delimited text with full
// numeric precision.
void write_delimited(std::ostream& os, const Dataset& d, char delimiter,
                     const std::string& response_name);

// Full-precision, locale-independent formatting used by every writer.
std::string format_double(double v);

}  // namespace nvsd::io
