#pragma once

// JSON encodings. Every number is an exact rational string "p/q".
//
//   Rat             "2/3"
//   IntervalUnion   [["0/1","1/3"],["2/3","1/1"]]
//   PLHomeo         [["0/1","0/1"],["1/2","1/4"],["1/1","1/1"]]
//   APWitness       {"start":..,"step":..,"length":3}
//   NDGenerator     {"kind":"cantor","ratio":"1/3"} | {"kind":"points","values":[..]}
//                   | {"kind":"union","children":[..]}
//
// Parsing functions throw std::invalid_argument on malformed documents.

#include <string>
#include <vector>

#include <json.hpp>

#include "apfree/ap_search.hpp"
#include "apfree/apfree_points.hpp"
#include "apfree/construct.hpp"
#include "apfree/interval_union.hpp"
#include "apfree/nd_gen.hpp"
#include "apfree/plh.hpp"
#include "apfree/rat.hpp"

namespace apfree::json_io {

using json = nlohmann::json;

json to_json(const Rat& r);
json to_json(const ClosedInterval& c);
json to_json(const IntervalUnion& u);
json to_json(const PLHomeo& phi);
json to_json(const APWitness& w);
json to_json(const DefectReport& d);
json to_json(const PointConfig& p);
json to_json(const NDGenerator& g);
json to_json(const PartitionPlan& plan);
json to_json(const StageCertificate& s);
json to_json(const FapCertificate& c);

Rat parse_rat(const json& j);
ClosedInterval parse_interval(const json& j);
/// Accepts overlapping or unsorted pairs and normalizes them.
IntervalUnion parse_union(const json& j);
PLHomeo parse_homeo(const json& j);
APWitness parse_witness(const json& j);
NDGenerator parse_generator(const json& j);
std::vector<NDGenerator> parse_generators(const json& j);
StageCertificate parse_stage(const json& j);
FapCertificate parse_certificate(const json& j);

/// Canonical text form: two-space indentation, sorted keys, trailing newline.
std::string dump(const json& j);

}  // namespace apfree::json_io
