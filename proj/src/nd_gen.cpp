#include "apfree/nd_gen.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>

#include "apfree/errors.hpp"

namespace apfree {

struct NDGenerator::Node {
  Kind kind;
  Rat ratio;                 // removed middle fraction
  std::vector<Rat> values;   // sorted, unique
  std::vector<NDGenerator> children;
  Rat min_spacing;           // points: min spacing of values ∪ {0, 1}

  mutable std::mutex memo_mutex;
  mutable std::map<int, IntervalUnion> memo;
};

NDGenerator NDGenerator::cantor(Rat removed) {
  if (removed <= Rat(0) || removed >= Rat(1)) {
    throw std::invalid_argument("cantor: removed fraction " + removed.str() + " not in (0, 1)");
  }
  auto node = std::make_shared<Node>();
  node->kind = Kind::Cantor;
  node->ratio = std::move(removed);
  return NDGenerator(std::move(node));
}

NDGenerator NDGenerator::points(std::vector<Rat> values) {
  if (values.empty()) throw std::invalid_argument("points: empty point list");
  for (const auto& v : values) {
    if (v < Rat(0) || v > Rat(1)) throw std::invalid_argument("points: value " + v.str() + " outside [0, 1]");
  }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  std::vector<Rat> with_ends = values;
  with_ends.push_back(Rat(0));
  with_ends.push_back(Rat(1));
  std::sort(with_ends.begin(), with_ends.end());
  with_ends.erase(std::unique(with_ends.begin(), with_ends.end()), with_ends.end());
  Rat spacing(1);
  for (std::size_t i = 1; i < with_ends.size(); ++i) spacing = std::min(spacing, with_ends[i] - with_ends[i - 1]);

  auto node = std::make_shared<Node>();
  node->kind = Kind::Points;
  node->values = std::move(values);
  node->min_spacing = std::move(spacing);
  return NDGenerator(std::move(node));
}

NDGenerator NDGenerator::union_of(std::vector<NDGenerator> children) {
  if (children.empty()) throw std::invalid_argument("union: no children");
  auto node = std::make_shared<Node>();
  node->kind = Kind::Union;
  node->children = std::move(children);
  return NDGenerator(std::move(node));
}

NDGenerator::Kind NDGenerator::kind() const { return node_->kind; }
const Rat& NDGenerator::ratio() const { return node_->ratio; }
const std::vector<Rat>& NDGenerator::values() const { return node_->values; }
const std::vector<NDGenerator>& NDGenerator::children() const { return node_->children; }

const IntervalUnion& NDGenerator::cover(int g) const {
  if (g < 0) throw std::invalid_argument("cover: negative generation");
  {
    std::lock_guard lock(node_->memo_mutex);
    auto it = node_->memo.find(g);
    if (it != node_->memo.end()) return it->second;
  }

  IntervalUnion built;
  switch (node_->kind) {
    case Kind::Cantor: {
      if (g >= 63 || (std::size_t{1} << g) > kMaxCoverComponents) {
        throw RefinementExhausted("cantor cover at generation " + std::to_string(g) +
                                  " exceeds the component limit");
      }
      if (g == 0) {
        built = IntervalUnion::normalize({ClosedInterval(Rat(0), Rat(1))});
      } else {
        const IntervalUnion& prev = cover(g - 1);
        const Rat keep = (Rat(1) - node_->ratio) / Rat(2);
        std::vector<ClosedInterval> out;
        out.reserve(prev.size() * 2);
        for (const auto& c : prev.components()) {
          Rat piece = c.length() * keep;
          out.emplace_back(c.lo(), c.lo() + piece);
          out.emplace_back(c.hi() - piece, c.hi());
        }
        built = IntervalUnion::normalize(std::move(out));
      }
      break;
    }
    case Kind::Points: {
      std::vector<ClosedInterval> out;
      for (const auto& v : node_->values) out.emplace_back(v, v);
      built = IntervalUnion::normalize(std::move(out));
      break;
    }
    case Kind::Union: {
      std::vector<ClosedInterval> out;
      for (const auto& child : node_->children) {
        const auto& cc = child.cover(g);
        out.insert(out.end(), cc.components().begin(), cc.components().end());
      }
      if (out.size() > kMaxCoverComponents) {
        throw RefinementExhausted("union cover at generation " + std::to_string(g) +
                                  " exceeds the component limit");
      }
      built = IntervalUnion::normalize(std::move(out));
      break;
    }
  }

  std::lock_guard lock(node_->memo_mutex);
  // std::map never moves its nodes, so the reference stays valid.
  auto [it, inserted] = node_->memo.emplace(g, std::move(built));
  return it->second;
}

Rat NDGenerator::gap_scale(int g) const {
  if (g < 0) throw std::invalid_argument("gap_scale: negative generation");
  switch (node_->kind) {
    case Kind::Cantor: {
      // Twice the component length ((1 - removed) / 2)^g.
      const Rat keep = (Rat(1) - node_->ratio) / Rat(2);
      Rat len(1);
      for (int i = 0; i < g; ++i) len *= keep;
      return Rat(2) * len;
    }
    case Kind::Points:
      // Any window of positive length avoids a finite set; halving per
      // generation keeps the scale strictly decreasing.
      return Rat(2) * node_->min_spacing * Rat::inv_pow2(static_cast<unsigned>(g));
    case Kind::Union: {
      Rat total;
      for (const auto& child : node_->children) total += child.gap_scale(g);
      return total;
    }
  }
  return Rat(1);
}

std::string NDGenerator::describe() const {
  switch (node_->kind) {
    case Kind::Cantor:
      return "cantor(" + node_->ratio.str() + ")";
    case Kind::Points: {
      std::string s = "points(";
      for (std::size_t i = 0; i < node_->values.size(); ++i) {
        if (i) s += ",";
        s += node_->values[i].str();
      }
      return s + ")";
    }
    case Kind::Union: {
      std::string s = "union(";
      for (std::size_t i = 0; i < node_->children.size(); ++i) {
        if (i) s += ",";
        s += node_->children[i].describe();
      }
      return s + ")";
    }
  }
  return {};
}

int refine_until(const NDGenerator& gen, const Rat& window_len, int max_gen) {
  if (window_len.sign() <= 0) throw std::invalid_argument("refine_until: window length must be positive");
  for (int g = 0; g <= max_gen; ++g) {
    if (gen.gap_scale(g) <= window_len) return g;
  }
  throw RefinementExhausted("refinement exhausted: " + gen.describe() + " needs more than " +
                            std::to_string(max_gen) + " generations for windows of length " +
                            window_len.str());
}

NDGenerator nested_union(const std::vector<NDGenerator>& gens, std::size_t k) {
  if (gens.empty() || k == 0) throw std::invalid_argument("nested_union: no generators");
  k = std::min(k, gens.size());
  if (k == 1) return gens.front();
  return NDGenerator::union_of(std::vector<NDGenerator>(gens.begin(), gens.begin() + static_cast<long>(k)));
}

}  // namespace apfree
