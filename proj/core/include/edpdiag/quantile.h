/*
 * Copyright 2026 The edpdiag Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef EDPDIAG_QUANTILE_H_
#define EDPDIAG_QUANTILE_H_

#include <span>

namespace edpdiag {

// Quantile of an ascending-sorted, nonempty sample by linear interpolation
// between order statistics (position (n - 1) * prob, "type 7").
double SortedQuantile(std::span<const double> sorted, double prob);

// Median of an unsorted sample. Throws ComputeError on empty input.
double Median(std::span<const double> values);

}  // namespace edpdiag

#endif  // EDPDIAG_QUANTILE_H_
