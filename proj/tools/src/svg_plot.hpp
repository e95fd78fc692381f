// Copyright 2026 The nhqubit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <vector>

#include <nhq/csv.hpp>

namespace nhq::cli {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool dashed = false;
};

/// Line plot; NaN values break a series into separate segments.
void write_line_plot(const std::string& path, const std::string& title, const std::string& xlabel,
                     const std::string& ylabel, const std::vector<Series>& series);

/// Plots the named columns of a CSV file against `xcol`. Columns whose name
/// starts with "ref_" are drawn dashed.
void plot_csv_columns(const std::string& csv_path, const std::string& svg_path,
                      const std::string& title, const std::string& xcol,
                      const std::vector<std::string>& ycols, const std::string& ylabel);

}  // namespace nhq::cli
