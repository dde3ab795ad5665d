#include "apfree/json_io.hpp"

#include <stdexcept>

namespace apfree::json_io {

namespace {

[[noreturn]] void malformed(const std::string& what) {
  throw std::invalid_argument("malformed JSON: " + what);
}

const json& field(const json& j, const char* key) {
  if (!j.is_object()) malformed(std::string("expected an object with '") + key + "'");
  auto it = j.find(key);
  if (it == j.end()) malformed(std::string("missing field '") + key + "'");
  return *it;
}

long long integer_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number_integer()) malformed(std::string("'") + key + "' must be an integer");
  return v.get<long long>();
}

bool bool_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_boolean()) malformed(std::string("'") + key + "' must be a boolean");
  return v.get<bool>();
}

const json& array_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_array()) malformed(std::string("'") + key + "' must be an array");
  return v;
}

template <class T, class Fn>
json array_of(const std::vector<T>& items, Fn fn) {
  json out = json::array();
  for (const auto& it : items) out.push_back(fn(it));
  return out;
}

}  // namespace

json to_json(const Rat& r) { return r.str(); }

json to_json(const ClosedInterval& c) { return json::array({c.lo().str(), c.hi().str()}); }

json to_json(const IntervalUnion& u) {
  json out = json::array();
  for (const auto& c : u.components()) out.push_back(to_json(c));
  return out;
}

json to_json(const PLHomeo& phi) {
  json out = json::array();
  for (const auto& b : phi.breakpoints()) out.push_back(json::array({b.x.str(), b.y.str()}));
  return out;
}

json to_json(const APWitness& w) {
  json terms = json::array();
  for (const auto& t : w.terms()) terms.push_back(t.str());
  return json{{"start", w.start.str()}, {"step", w.step.str()}, {"length", w.length}, {"terms", terms}};
}

json to_json(const DefectReport& d) {
  return json{{"gamma", d.gamma.str()},
              {"achiever", json::array({d.achiever[0].str(), d.achiever[1].str(), d.achiever[2].str()})}};
}

json to_json(const PointConfig& p) {
  return json{{"points", array_of(p.points, [](const Rat& r) { return to_json(r); })},
              {"defect", p.defect.str()}};
}

json to_json(const NDGenerator& g) {
  switch (g.kind()) {
    case NDGenerator::Kind::Cantor:
      return json{{"kind", "cantor"}, {"ratio", g.ratio().str()}};
    case NDGenerator::Kind::Points:
      return json{{"kind", "points"}, {"values", array_of(g.values(), [](const Rat& r) { return to_json(r); })}};
    case NDGenerator::Kind::Union:
      return json{{"kind", "union"},
                  {"children", array_of(g.children(), [](const NDGenerator& c) { return to_json(c); })}};
  }
  return {};
}

json to_json(const PartitionPlan& plan) {
  auto intervals = [](const std::vector<ClosedInterval>& v) {
    return array_of(v, [](const ClosedInterval& c) { return to_json(c); });
  };
  json pieces = json::array();
  for (std::size_t i = 0; i < plan.cells.size(); ++i) {
    pieces.push_back({{"k", plan.cell_pieces[i].get_str()},
                      {"left_cut", to_json(plan.piece_cuts[i].first)},
                      {"right_cut", to_json(plan.piece_cuts[i].second)}});
  }
  return json{{"r", plan.r.get_str()},
              {"pieces", std::move(pieces)},
              {"cells", intervals(plan.cells)},
              {"anchors", to_json(plan.anchors)},
              {"targets", intervals(plan.targets)},
              {"contraction", to_json(plan.contraction)}};
}

json to_json(const StageCertificate& s) {
  return json{{"stage", s.stage},
              {"eps_requested", s.eps_requested.str()},
              {"eps_effective", s.eps_effective.str()},
              {"cover_generation", s.cover_generation},
              {"gamma", s.gamma ? json(s.gamma->str()) : json(nullptr)},
              {"delta_stability", s.delta_stability.str()},
              {"perturbation_used", s.perturbation_used.str()},
              {"verified", s.verified}};
}

json to_json(const FapCertificate& c) {
  json guarantees = json::array();
  for (const auto& g : c.guarantees) {
    guarantees.push_back(json{{"stage", g.stage},
                              {"generator_count", g.generator_count},
                              {"step_bound", g.step_bound.str()},
                              {"strict", g.strict}});
  }
  return json{{"schema", c.schema},
              {"generators", c.generators},
              {"max_gen", c.max_gen},
              {"seed", c.seed},
              {"stages", array_of(c.stages, [](const StageCertificate& s) { return to_json(s); })},
              {"stage_homeos", array_of(c.stage_homeos, [](const PLHomeo& h) { return to_json(h); })},
              {"final_homeo", to_json(c.final_homeo)},
              {"guarantees", guarantees},
              {"budget_ledger", array_of(c.budget_ledger, [](const Rat& r) { return to_json(r); })}};
}

Rat parse_rat(const json& j) {
  if (!j.is_string()) malformed("rational must be a string like \"2/3\", got " + j.dump());
  return Rat::parse(j.get<std::string>());
}

ClosedInterval parse_interval(const json& j) {
  if (!j.is_array() || j.size() != 2) malformed("interval must be a [lo, hi] pair, got " + j.dump());
  return ClosedInterval(parse_rat(j[0]), parse_rat(j[1]));
}

IntervalUnion parse_union(const json& j) {
  if (!j.is_array()) malformed("interval union must be an array of pairs");
  std::vector<ClosedInterval> raw;
  for (const auto& e : j) raw.push_back(parse_interval(e));
  return IntervalUnion::normalize(std::move(raw));
}

PLHomeo parse_homeo(const json& j) {
  if (!j.is_array()) malformed("homeomorphism must be an array of [x, y] pairs");
  std::vector<Breakpoint> bps;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2) malformed("breakpoint must be an [x, y] pair");
    bps.push_back({parse_rat(e[0]), parse_rat(e[1])});
  }
  return PLHomeo(std::move(bps));
}

APWitness parse_witness(const json& j) {
  return APWitness{parse_rat(field(j, "start")), parse_rat(field(j, "step")),
                   static_cast<int>(integer_field(j, "length"))};
}

NDGenerator parse_generator(const json& j) {
  const json& kind = field(j, "kind");
  if (!kind.is_string()) malformed("generator kind must be a string");
  const std::string k = kind.get<std::string>();
  if (k == "cantor") return NDGenerator::cantor(parse_rat(field(j, "ratio")));
  if (k == "points") {
    std::vector<Rat> values;
    for (const auto& v : array_field(j, "values")) values.push_back(parse_rat(v));
    return NDGenerator::points(std::move(values));
  }
  if (k == "union") return NDGenerator::union_of(parse_generators(array_field(j, "children")));
  malformed("unknown generator kind '" + k + "'");
}

std::vector<NDGenerator> parse_generators(const json& j) {
  if (!j.is_array()) malformed("generator list must be an array");
  std::vector<NDGenerator> out;
  for (const auto& e : j) out.push_back(parse_generator(e));
  return out;
}

StageCertificate parse_stage(const json& j) {
  StageCertificate s;
  s.stage = static_cast<int>(integer_field(j, "stage"));
  s.eps_requested = parse_rat(field(j, "eps_requested"));
  s.eps_effective = parse_rat(field(j, "eps_effective"));
  s.cover_generation = static_cast<int>(integer_field(j, "cover_generation"));
  const json& gamma = field(j, "gamma");
  if (!gamma.is_null()) s.gamma = parse_rat(gamma);
  s.delta_stability = parse_rat(field(j, "delta_stability"));
  s.perturbation_used = parse_rat(field(j, "perturbation_used"));
  s.verified = bool_field(j, "verified");
  return s;
}

FapCertificate parse_certificate(const json& j) {
  FapCertificate c;
  const json& schema = field(j, "schema");
  if (!schema.is_string()) malformed("schema must be a string");
  c.schema = schema.get<std::string>();
  for (const auto& g : array_field(j, "generators")) {
    if (!g.is_string()) malformed("generator descriptions must be strings");
    c.generators.push_back(g.get<std::string>());
  }
  c.max_gen = static_cast<int>(integer_field(j, "max_gen"));
  const json& seed = field(j, "seed");
  if (!seed.is_number_unsigned() && !seed.is_number_integer()) malformed("seed must be an integer");
  c.seed = seed.get<std::uint64_t>();
  for (const auto& s : array_field(j, "stages")) c.stages.push_back(parse_stage(s));
  for (const auto& h : array_field(j, "stage_homeos")) c.stage_homeos.push_back(parse_homeo(h));
  c.final_homeo = parse_homeo(field(j, "final_homeo"));
  for (const auto& g : array_field(j, "guarantees")) {
    c.guarantees.push_back(Guarantee{static_cast<int>(integer_field(g, "stage")),
                                     static_cast<int>(integer_field(g, "generator_count")),
                                     parse_rat(field(g, "step_bound")), bool_field(g, "strict")});
  }
  for (const auto& r : array_field(j, "budget_ledger")) c.budget_ledger.push_back(parse_rat(r));
  return c;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace apfree::json_io
