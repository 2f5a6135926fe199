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

#include "maxinfo/error.hpp"

namespace maxinfo {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::InvalidInput: return "InvalidInput";
    case Errc::InvalidRank: return "InvalidRank";
    case Errc::RankDeficient: return "RankDeficient";
    case Errc::InvalidPivot: return "InvalidPivot";
    case Errc::InvalidChunking: return "InvalidChunking";
    case Errc::InvalidCount: return "InvalidCount";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::FormatError: return "FormatError";
    case Errc::IoError: return "IoError";
    case Errc::NumericalFailure: return "NumericalFailure";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void fail(Errc code, const std::string& message) { throw Error(code, message); }

}  // namespace maxinfo
