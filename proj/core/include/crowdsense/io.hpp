// Copyright 2026 The CrowdSense Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// CSV exchange formats: matrices are row-major with a `c0,c1,...` header;
// masks are two-column `row,col` files. Doubles are written with
// shortest-round-trip formatting.

#ifndef CROWDSENSE_IO_HPP_
#define CROWDSENSE_IO_HPP_

#include <Eigen/Dense>
#include <filesystem>
#include <string>
#include <vector>

#include "crowdsense/lowrank.hpp"

namespace crowdsense {

Eigen::MatrixXd read_csv_matrix(const std::filesystem::path& path);
void write_csv_matrix(const std::filesystem::path& path,
                      const Eigen::MatrixXd& matrix);

ObservationMask read_csv_mask(const std::filesystem::path& path,
                              Eigen::Index rows, Eigen::Index cols);
void write_csv_mask(const std::filesystem::path& path,
                    const ObservationMask& mask);

// Column-oriented CSV with arbitrary headers; all columns must have equal
// length.
void write_csv_columns(const std::filesystem::path& path,
                       const std::vector<std::string>& headers,
                       const std::vector<std::vector<double>>& columns);

std::string format_double(double value);

}  // namespace crowdsense

#endif  // CROWDSENSE_IO_HPP_
