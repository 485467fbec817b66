// Copyright 2026 The ogmnav Authors
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

// Plain-text store for filtered sensor-frame scans:
//
//   ogmnav-scans 1
//   scan <n>
//   <x> <y> <z> <label> <reflected>     (n lines; label g/s/d/n)
//   ...

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ogmnav/harness.hpp"
#include "ogmnav/sensor_sim.hpp"
#include "ogmnav/world.hpp"

namespace ogmnav
{

using ScanCorpus = std::vector<std::vector<ScanPoint>>;

std::string dump_scan_corpus(const ScanCorpus & corpus);
ScanCorpus parse_scan_corpus(const std::string & text, const std::string & origin = "<string>");
ScanCorpus load_scan_corpus(const std::filesystem::path & path);
void save_scan_corpus(const std::filesystem::path & path, const ScanCorpus & corpus);

/// Filtered scans from random in-lane poses of the town, deterministic under
/// the seed.
ScanCorpus generate_scan_corpus(const World & town, int n_scans, std::uint64_t seed, const SimConfig & config);

}  // namespace ogmnav
