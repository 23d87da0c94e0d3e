#include "nvsd/dataset.hpp"

#include <cmath>
#include <unordered_set>

#include "nvsd/common.hpp"

namespace nvsd {

void Dataset::validate() const {
    if (names.size() != columns.size())
        throw SchemaError("dataset: names/columns count mismatch");
    if (response.size() < 3)
        throw InvalidSampleError("dataset: need at least 3 rows");
    std::unordered_set<std::string> seen;
    for (const auto& name : names)
        if (!seen.insert(name).second)
            throw SchemaError("dataset: duplicate column name '" + name + "'");
    for (const auto& col : columns) {
        if (col.size() != response.size())
            throw SchemaError("dataset: ragged column lengths");
        for (double v : col)
            if (!std::isfinite(v))
                throw InvalidSampleError("dataset: non-finite predictor cell");
    }
    for (double v : response)
        if (!std::isfinite(v))
            throw InvalidSampleError("dataset: non-finite response");
}

Dataset Dataset::restrict_to(const std::vector<std::size_t>& cols) const {
    Dataset out;
    out.response = response;
    for (std::size_t c : cols) {
        out.columns.push_back(columns.at(c));
        out.names.push_back(names.at(c));
    }
    return out;
}

Dataset Dataset::restrict_rows(const std::vector<std::size_t>& rows) const {
    Dataset out;
    out.names = names;
    out.columns.resize(columns.size());
    for (std::size_t c = 0; c < columns.size(); ++c) {
        out.columns[c].reserve(rows.size());
        for (std::size_t r : rows) out.columns[c].push_back(columns[c].at(r));
    }
    out.response.reserve(rows.size());
    for (std::size_t r : rows) out.response.push_back(response.at(r));
    return out;
}

std::size_t Dataset::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return i;
    throw SchemaError("dataset: no column named '" + name + "'");
}

}  // namespace nvsd
