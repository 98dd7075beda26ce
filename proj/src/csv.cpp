#include "disca/csv.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "disca/errors.hpp"

namespace disca {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  std::string out = s.substr(first, last - first + 1);
  if (out.size() >= 2 && out.front() == '"' && out.back() == '"') out = out.substr(1, out.size() - 2);
  return out;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::string location(const std::string& source, std::size_t line, const std::string& column) {
  return source + ":" + std::to_string(line) + (column.empty() ? "" : " column '" + column + "'");
}

std::vector<std::size_t> resolve(const std::vector<std::string>& header,
                                 const std::vector<std::string>& wanted, const std::string& source) {
  std::vector<std::size_t> idx;
  for (const auto& name : wanted) {
    std::size_t found = header.size();
    for (std::size_t j = 0; j < header.size(); ++j) {
      if (header[j] == name) {
        found = j;
        break;
      }
    }
    if (found == header.size()) {
      throw ParseError(location(source, 1, "") + ": no column named '" + name + "' in header");
    }
    idx.push_back(found);
  }
  return idx;
}

}  // namespace

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  for (auto& f : split_fields(text)) {
    if (!f.empty()) out.push_back(f);
  }
  return out;
}

MatrixXd block_means(const MatrixXd& rows, Index block) {
  if (block < 1) throw InvalidParameter("block size must be >= 1");
  const Index blocks = rows.rows() / block;
  MatrixXd out(blocks, rows.cols());
  for (Index b = 0; b < blocks; ++b) {
    out.row(b) = rows.middleRows(b * block, block).colwise().mean();
  }
  return out;
}

CsvSamples read_csv(std::istream& in, const std::vector<std::string>& x_cols,
                    const std::vector<std::string>& y_cols, Aggregation aggregate,
                    const std::string& source) {
  if (x_cols.empty() || y_cols.empty()) throw InvalidParameter("x and y column lists must be nonempty");
  for (const auto& c : x_cols) {
    for (const auto& d : y_cols) {
      if (c == d) throw InvalidParameter("column '" + c + "' is listed for both x and y");
    }
  }

  std::string line;
  if (!std::getline(in, line) || trim(line).empty()) {
    throw ParseError(source + ": empty file (no header row)");
  }
  const std::vector<std::string> header = split_fields(line);
  const auto xi = resolve(header, x_cols, source);
  const auto yi = resolve(header, y_cols, source);

  std::vector<std::vector<double>> xs;
  std::vector<std::vector<double>> ys;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != header.size()) {
      throw ParseError(location(source, line_no, "") + ": expected " + std::to_string(header.size()) +
                       " fields, found " + std::to_string(fields.size()));
    }
    auto take = [&](const std::vector<std::size_t>& idx) {
      std::vector<double> row;
      for (const std::size_t j : idx) {
        const std::string& cell = fields[j];
        char* end = nullptr;
        errno = 0;
        const double v = cell.empty() ? NAN : std::strtod(cell.c_str(), &end);
        if (cell.empty() || end != cell.c_str() + cell.size() || errno == ERANGE || !std::isfinite(v)) {
          throw ParseError(location(source, line_no, header[j]) + ": '" + cell + "' is not a finite number");
        }
        row.push_back(v);
      }
      return row;
    };
    xs.push_back(take(xi));
    ys.push_back(take(yi));
  }
  if (xs.empty()) throw ParseError(source + ": no data rows after the header");

  auto to_matrix = [](const std::vector<std::vector<double>>& rows) {
    MatrixXd m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t j = 0; j < rows[i].size(); ++j) {
        m(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
      }
    }
    return m;
  };
  MatrixXd x = to_matrix(xs);
  MatrixXd y = to_matrix(ys);
  if (aggregate == Aggregation::kWeekly) {
    x = block_means(x, 7);
    y = block_means(y, 7);
  }
  if (x.rows() < 2) {
    throw ParseError(source + ": fewer than 2 observations after aggregation");
  }
  return {SampleMatrix(std::move(x)), SampleMatrix(std::move(y)), x_cols, y_cols};
}

CsvSamples load_csv(const std::string& path, const std::vector<std::string>& x_cols,
                    const std::vector<std::string>& y_cols, Aggregation aggregate) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  return read_csv(in, x_cols, y_cols, aggregate, path);
}

}  // namespace disca
