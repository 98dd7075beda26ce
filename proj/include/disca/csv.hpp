#pragma once

#include <istream>
#include <string>
#include <vector>

#include "disca/sample_matrix.hpp"

namespace disca {

enum class Aggregation { kNone, kWeekly };

struct CsvSamples {
  SampleMatrix x;
  SampleMatrix y;
  std::vector<std::string> x_names;
  std::vector<std::string> y_names;
};

//! Reads a comma-separated file with a header row and selects the named
//! columns for x and y. Weekly aggregation averages consecutive
//! non-overlapping blocks of 7 rows and drops a trailing partial block.
//! Errors are ParseError with the offending line and column.
CsvSamples load_csv(const std::string& path, const std::vector<std::string>& x_cols,
                    const std::vector<std::string>& y_cols, Aggregation aggregate = Aggregation::kNone);

CsvSamples read_csv(std::istream& in, const std::vector<std::string>& x_cols,
                    const std::vector<std::string>& y_cols, Aggregation aggregate = Aggregation::kNone,
                    const std::string& source = "<stream>");

//! Means of consecutive non-overlapping blocks of `block` rows.
MatrixXd block_means(const MatrixXd& rows, Index block);

//! Splits "a,b , c" into {"a", "b", "c"}.
std::vector<std::string> split_list(const std::string& text);

}  // namespace disca
