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

#include "ogmnav/scan_corpus.hpp"

#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

namespace ogmnav
{

namespace
{

char label_char(PointLabel l)
{
  switch (l) {
    case PointLabel::kGround:
      return 'g';
    case PointLabel::kStatic:
      return 's';
    case PointLabel::kDynamic:
      return 'd';
    case PointLabel::kNone:
      return 'n';
  }
  return 'n';
}

PointLabel label_of(char c, const std::string & where)
{
  switch (c) {
    case 'g':
      return PointLabel::kGround;
    case 's':
      return PointLabel::kStatic;
    case 'd':
      return PointLabel::kDynamic;
    case 'n':
      return PointLabel::kNone;
    default:
      throw std::invalid_argument(where + ": unknown point label '" + std::string(1, c) + "'");
  }
}

}  // namespace

std::string dump_scan_corpus(const ScanCorpus & corpus)
{
  std::string out = "ogmnav-scans 1\n";
  for (const auto & scan : corpus) {
    out += fmt::format("scan {}\n", scan.size());
    for (const auto & p : scan) {
      out += fmt::format("{:.5f} {:.5f} {:.5f} {} {}\n", p.x, p.y, p.z, label_char(p.label), p.reflected ? 1 : 0);
    }
  }
  return out;
}

ScanCorpus parse_scan_corpus(const std::string & text, const std::string & origin)
{
  std::istringstream in(text);
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != "ogmnav-scans" || version != 1) {
    throw std::invalid_argument(origin + ": not an ogmnav scan corpus (version 1)");
  }
  ScanCorpus corpus;
  std::string word;
  while (in >> word) {
    const std::string where = origin + ": scan " + std::to_string(corpus.size());
    if (word != "scan") {
      throw std::invalid_argument(where + ": expected 'scan', got '" + word + "'");
    }
    std::size_t n = 0;
    if (!(in >> n)) {
      throw std::invalid_argument(where + ": missing point count");
    }
    std::vector<ScanPoint> scan(n);
    for (std::size_t i = 0; i < n; ++i) {
      char label = 0;
      int reflected = 0;
      if (!(in >> scan[i].x >> scan[i].y >> scan[i].z >> label >> reflected)) {
        throw std::invalid_argument(where + ": truncated at point " + std::to_string(i));
      }
      scan[i].label = label_of(label, where);
      scan[i].reflected = reflected != 0;
    }
    corpus.push_back(std::move(scan));
  }
  return corpus;
}

ScanCorpus load_scan_corpus(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot open scan corpus " + path.string());
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_scan_corpus(buffer.str(), path.string());
}

void save_scan_corpus(const std::filesystem::path & path, const ScanCorpus & corpus)
{
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << dump_scan_corpus(corpus);
}

ScanCorpus generate_scan_corpus(const World & town, int n_scans, std::uint64_t seed, const SimConfig & config)
{
  if (town.roads.empty()) {
    throw std::invalid_argument("generate_scan_corpus: town has no roads");
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick_road(0, town.roads.size() - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  ScanCorpus corpus;
  corpus.reserve(static_cast<std::size_t>(std::max(0, n_scans)));
  for (int i = 0; i < n_scans; ++i) {
    const Road & road = town.roads[pick_road(rng)];
    const bool forward = unit(rng) < 0.5;
    const Vec2 a = forward ? road.start : road.end;
    const Vec2 b = forward ? road.end : road.start;
    const Vec2 u = (b - a) / distance(a, b);
    const Vec2 right{u.y, -u.x};
    const Vec2 p = a + u * (unit(rng) * road.length()) + right * (road.lane_width / 2.0);
    const Pose2D pose{p.x, p.y, std::atan2(u.y, u.x)};
    const auto scan = raycast_scan(town, pose, config.lidar);
    corpus.push_back(filter_scan(scan, config.filter_height, config.lidar.mount_height));
  }
  return corpus;
}

}  // namespace ogmnav
