#include "fastcv/csv_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "fastcv/errors.hpp"

namespace fastcv {

Dataset load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);

  std::vector<std::vector<double>> rows;
  std::vector<int> raw_labels;
  std::string line;
  int line_no = 0;
  int width = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string field;
    std::vector<double> values;
    while (std::getline(ss, field, ',')) {
      try {
        std::size_t consumed = 0;
        double v = std::stod(field, &consumed);
        while (consumed < field.size() && std::isspace(static_cast<unsigned char>(field[consumed])))
          ++consumed;
        if (consumed != field.size()) throw std::invalid_argument(field);
        values.push_back(v);
      } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(line_no) +
                             ": cannot parse field '" + field + "'",
                         line_no);
      }
    }
    if (values.size() < 2)
      throw ParseError("line " + std::to_string(line_no) +
                           ": expected a label and at least one feature",
                       line_no);
    if (width < 0) width = static_cast<int>(values.size());
    if (static_cast<int>(values.size()) != width)
      throw ParseError("line " + std::to_string(line_no) +
                           ": inconsistent column count",
                       line_no);
    double label = values.front();
    if (label != std::floor(label))
      throw ParseError("line " + std::to_string(line_no) +
                           ": label must be an integer",
                       line_no);
    raw_labels.push_back(static_cast<int>(label));
    rows.push_back(std::vector<double>(values.begin() + 1, values.end()));
  }
  if (rows.size() < 2) throw ParseError("need at least two data rows", line_no);

  // Remap distinct labels to {1..C} in ascending order.
  std::map<int, int> remap;
  for (int l : raw_labels) remap.emplace(l, 0);
  int next = 1;
  for (auto& [raw, mapped] : remap) mapped = next++;

  Dataset ds;
  ds.n_classes = static_cast<int>(remap.size());
  ds.features.resize(rows.size(), width - 1);
  ds.labels.resize(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (int j = 0; j + 1 < width; ++j) ds.features(i, j) = rows[i][j];
    ds.labels[i] = remap[raw_labels[i]];
  }
  if (!ds.features.allFinite())
    throw ParseError("non-finite feature value", line_no);
  return ds;
}

}  // namespace fastcv
