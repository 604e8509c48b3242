/*
 * Copyright 2026 The premeasure Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "report_json.hpp"

#include <sstream>

namespace premeasure::report {

namespace {

std::string joined(const std::vector<std::uint64_t>& xs) {
  std::string out;
  for (std::size_t q = 0; q < xs.size(); ++q) out += (q ? ";" : "") + std::to_string(xs[q]);
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return out + "\"";
}

}  // namespace

Json mass_json(const DyadicMass& m) { return {{"mantissa", m.mantissa().str()}, {"scale", m.scale()}}; }

Json stage_json(const Stage& stage) {
  Json cells = Json::array();
  for (const auto& c : stage.cells()) {
    cells.push_back({{"signature", c.signature.flags},
                     {"region", c.region.to_string()},
                     {"mass", mass_json(c.mass)},
                     {"origin", std::string(origin_kind_name(c.origin.kind))}});
  }
  return {{"stage", stage.index()}, {"cells", cells}, {"total", mass_json(stage.total_mass())}};
}

std::string stage_csv_header() { return "stage,signature,region,mantissa,scale,total_mantissa,total_scale\n"; }

std::string stage_csv_rows(const Stage& stage) {
  std::ostringstream out;
  const DyadicMass total = stage.total_mass();
  for (const auto& c : stage.cells()) {
    out << stage.index() << ',' << c.signature.flags << ',' << csv_field(c.region.to_string()) << ',' << c.mass.mantissa().str()
        << ',' << c.mass.scale() << ',' << total.mantissa().str() << ',' << total.scale() << '\n';
  }
  return out.str();
}

Json schedule_json(const Schedule& schedule) {
  Json blocks = Json::array();
  for (const auto& b : schedule.blocks) {
    blocks.push_back({{"i", b.i},
                      {"j", b.j},
                      {"F", b.F},
                      {"G", b.G},
                      {"H", b.H},
                      {"g", b.g},
                      {"cells_after", b.cells_after},
                      {"max_mass_after", mass_json(b.max_mass_after)}});
  }
  return blocks;
}

std::string schedule_csv(const Schedule& schedule) {
  std::ostringstream out;
  out << "i,j,F,G,H,g\n";
  for (const auto& b : schedule.blocks) {
    out << b.i << ',' << b.j << ',' << joined(b.F) << ',' << joined(b.G) << ',' << joined(b.H) << ',' << b.g << '\n';
  }
  return out.str();
}

Json boundary_json(const BoundaryBoundCertificate& cert) {
  Json chain = Json::array();
  for (const auto& l : cert.chain) {
    Json link = {{"j", l.j}, {"bound", mass_json(l.bound)}};
    if (l.after_holes) link["after_holes"] = mass_json(*l.after_holes);
    chain.push_back(link);
  }
  return {{"i", cert.i},
          {"j_max", cert.j_max},
          {"evaluated_stage", cert.evaluated_stage},
          {"chain", chain},
          {"final_bound", mass_json(cert.final_bound)}};
}

Json partition_json(const PartitionCertificate& cert, const Trace& trace) {
  const StagePtr s = trace.stage(cert.stage);
  Json cells = Json::array();
  for (const auto& c : cert.cells) cells.push_back({{"region", s->region(c.id).to_string()}, {"mass", mass_json(c.mass)}});
  Json points = Json::array();
  for (const auto& p : cert.boundary_points) points.push_back({{"point", p.point.to_string()}, {"bound", mass_json(p.bound)}});
  Json chains = Json::array();
  for (const auto& c : cert.boundary_chains) chains.push_back(boundary_json(c));
  return {{"epsilon", mass_json(cert.epsilon)},
          {"m", cert.m},
          {"stage", cert.stage},
          {"cells", cells},
          {"tail_bound", mass_json(cert.tail_bound)},
          {"witness_stage", cert.witness_stage},
          {"boundary_points", points},
          {"boundary_chains", chains},
          {"largest_piece", mass_json(cert.largest_piece)},
          {"valid", cert.valid()}};
}

}  // namespace premeasure::report
