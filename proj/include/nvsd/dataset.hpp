#pragma once

#include <string>
#include <vector>

namespace nvsd {

// Column-oriented predictor matrix plus response. The universal input of the
// selection, prediction and CLI layers. After ingestion no cell is NaN.
struct Dataset {
    std::vector<std::vector<double>> columns;  // p columns of length n
    std::vector<std::string> names;            // p unique names
    std::vector<double> response;

    std::size_t n_rows() const { return response.size(); }
    std::size_t n_cols() const { return columns.size(); }

    // Throws InvalidSampleError / SchemaError on shape violations,
    // non-finite cells, n < 3, or duplicate names.
    void validate() const;

    // Dataset restricted to the given columns (response unchanged).
    Dataset restrict_to(const std::vector<std::size_t>& cols) const;

    // Dataset restricted to the given rows.
    Dataset restrict_rows(const std::vector<std::size_t>& rows) const;

    std::size_t column_index(const std::string& name) const;  // SchemaError if absent
};

}  // namespace nvsd
