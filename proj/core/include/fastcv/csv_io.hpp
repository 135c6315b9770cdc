#pragma once

#include <string>

#include "fastcv/synthgen.hpp"

namespace fastcv {

/// Loads a dataset from CSV: first column integer class label, remaining
/// columns features. Lines starting with '#' are skipped. Labels are remapped
/// to {1..C} in ascending order of their distinct values.
Dataset load_csv(const std::string& path);

}  // namespace fastcv
