#pragma once

#include <istream>
#include <string>
#include <vector>

#include "robcred/nonparametric.hpp"

namespace robcred {

// Reads comma-separated claims data with a header row. `group_col` and
// `loss_col` name the columns to use. Losses must be positive numbers; group
// labels must be non-empty. Groups come back in first-appearance order.
// Throws DataError with a line number on malformed input.
std::vector<GroupSample> read_claims_csv(std::istream& in,
                                         const std::string& group_col,
                                         const std::string& loss_col);
std::vector<GroupSample> read_claims_csv_file(const std::string& path,
                                              const std::string& group_col,
                                              const std::string& loss_col);

}  // namespace robcred
