// Copyright 2026 The MaxInfo Authors.
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

#include <json.hpp>

#include "maxinfo/compare.hpp"
#include "maxinfo/io.hpp"
#include "maxinfo/metrics.hpp"
#include "maxinfo/pipeline.hpp"

namespace maxinfo {

using Json = nlohmann::json;

// Reports are JSON objects with sorted keys, two-space indentation and a
// trailing newline. A log-volume of zero volume is written as null.

Json to_json(const MaxInfoConfig& cfg);
MaxInfoConfig config_from_json(const Json& j);

Json to_json(const MetricsBlock& metrics);
MetricsBlock metrics_from_json(const Json& j);

Json to_json(const FrameManifest& manifest);
FrameManifest manifest_from_json(const Json& j);

/// `canonical` zeroes the timing block so reruns compare byte for byte.
Json to_json(const SelectionReport& report, bool canonical = false);
SelectionReport report_from_json(const Json& j);

Json to_json(const Comparison& comparison);
Comparison comparison_from_json(const Json& j);

Json to_json(const Histogram& histogram);

/// Deterministic text form: sorted keys, 2-space indent, LF, trailing newline.
std::string dump(const Json& j);

}  // namespace maxinfo
