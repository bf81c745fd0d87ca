#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <string>

#include "mtlab/discrete.hpp"
#include "mtlab/errors.hpp"

namespace mtlab {

double MeasuredFunction::total_measure() const {
  return std::accumulate(measures.begin(), measures.end(), 0.0);
}

void validate(const MeasuredFunction& u) {
  if (u.values.size() != u.measures.size()) fail_input("measured function: values/measures length mismatch");
  if (u.values.empty()) fail_input("measured function: empty");
  for (std::size_t i = 0; i < u.values.size(); ++i) {
    if (!std::isfinite(u.values[i])) fail_input("measured function: values must be finite");
    if (std::isinf(u.measures[i])) fail_domain("measured function: infinite measure");
    if (!(u.measures[i] > 0.0)) fail_input("measured function: measures must be positive");
  }
}

DiscreteMMS::DiscreteMMS(std::vector<double> measures, std::vector<Edge> edges, std::string label)
    : measures_(std::move(measures)), edges_(std::move(edges)), label_(std::move(label)) {
  const std::size_t n = measures_.size();
  if (n == 0) fail_input("graph: no vertices");
  for (double m : measures_) {
    if (!(m > 0.0) || !std::isfinite(m)) fail_input("graph: vertex measures must be positive and finite");
    total_ += m;
  }
  std::set<std::pair<std::size_t, std::size_t>> seen;
  std::vector<std::size_t> degree(n, 0);
  for (const Edge& e : edges_) {
    if (e.a >= n || e.b >= n) fail_input("graph: edge endpoint out of range");
    if (e.a == e.b) fail_input("graph: self loops are not allowed");
    if (!(e.length > 0.0) || !std::isfinite(e.length)) fail_input("graph: edge lengths must be positive");
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) fail_input("graph: edge weights must be positive");
    if (!seen.insert({std::min(e.a, e.b), std::max(e.a, e.b)}).second) fail_input("graph: duplicate edge");
    ++degree[e.a];
    ++degree[e.b];
  }
  offsets_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] = offsets_[i] + degree[i];
  adjacency_.resize(offsets_[n]);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (const Edge& e : edges_) {
    adjacency_[fill[e.a]++] = Neighbor{e.b, e.length, e.weight};
    adjacency_[fill[e.b]++] = Neighbor{e.a, e.length, e.weight};
  }
  // Connectivity by depth-first search from vertex 0.
  std::vector<bool> reached(n, false);
  std::vector<std::size_t> stack{0};
  reached[0] = true;
  std::size_t count = 1;
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    for (const Neighbor& nb : neighbors(v)) {
      if (!reached[nb.vertex]) {
        reached[nb.vertex] = true;
        ++count;
        stack.push_back(nb.vertex);
      }
    }
  }
  if (count != n) fail_input("graph: not connected");
}

std::span<const DiscreteMMS::Neighbor> DiscreteMMS::neighbors(std::size_t i) const {
  return std::span<const Neighbor>(adjacency_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]);
}

MeasuredFunction DiscreteFunction::measured() const {
  validate(*this);
  return MeasuredFunction{values, std::vector<double>(space->measures().begin(), space->measures().end())};
}

void validate(const DiscreteFunction& f) {
  if (!f.space) fail_input("discrete function: missing space");
  if (f.values.size() != f.space->size()) fail_input("discrete function: one value per vertex required");
  for (double v : f.values) {
    if (!std::isfinite(v)) fail_input("discrete function: values must be finite");
  }
}

double perimeter(const DiscreteMMS& s, std::span<const std::size_t> A) {
  std::vector<bool> in(s.size(), false);
  for (std::size_t v : A) {
    if (v >= s.size()) fail_input("perimeter: vertex out of range");
    in[v] = true;
  }
  double cut = 0.0;
  for (const Edge& e : s.edges()) {
    if (in[e.a] != in[e.b]) cut += e.weight;
  }
  return cut;
}

double perimeter(const DiscreteMMS& s, std::uint64_t mask) {
  double cut = 0.0;
  for (const Edge& e : s.edges()) {
    if (((mask >> e.a) & 1U) != ((mask >> e.b) & 1U)) cut += e.weight;
  }
  return cut;
}

namespace {

double mask_measure(const DiscreteMMS& s, std::uint64_t mask) {
  double m = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if ((mask >> i) & 1U) m += s.measure(i);
  }
  return m;
}

void check_budget(const DiscreteMMS& s, std::size_t budget) {
  if (budget > 62) budget = 62;
  if (s.size() > budget) {
    throw BudgetError("subset enumeration: " + std::to_string(s.size()) + " vertices exceed the budget of " +
                      std::to_string(budget));
  }
}

// Visits every nonempty subset in Gray-code order with incrementally updated
// measure and cut weight; visit(mask, measure, cut).
template <class Visit>
void enumerate_subsets(const DiscreteMMS& s, Visit&& visit) {
  const std::size_t n = s.size();
  const std::uint64_t count = std::uint64_t{1} << n;
  std::uint64_t mask = 0;
  double measure = 0.0, cut = 0.0;
  for (std::uint64_t k = 1; k < count; ++k) {
    const std::uint64_t gray = k ^ (k >> 1);
    const std::uint64_t flip = gray ^ mask;
    const std::size_t v = static_cast<std::size_t>(__builtin_ctzll(flip));
    const bool entering = (gray >> v) & 1U;
    double delta = 0.0;
    for (const auto& nb : s.neighbors(v)) {
      const bool other = (gray >> nb.vertex) & 1U;
      delta += other ? -nb.weight : nb.weight;
    }
    if (entering) {
      measure += s.measure(v);
      cut += delta;
    } else {
      measure -= s.measure(v);
      cut -= delta;
    }
    mask = gray;
    visit(mask, measure, cut);
  }
}

}  // namespace

ProfileTable iso_profile_bruteforce(const DiscreteMMS& s, std::size_t budget) {
  check_budget(s, budget);
  const double total = s.total_measure();
  const std::uint64_t full = (std::uint64_t{1} << s.size()) - 1;
  // Measures are grouped on a relative grid of 1e-12 * total; each group keeps
  // the mask of its smallest cut, re-evaluated exactly at the end.
  const double quantum = 1e-12 * total;
  std::map<long long, std::pair<double, std::uint64_t>> best;
  enumerate_subsets(s, [&](std::uint64_t mask, double measure, double cut) {
    if (mask == full) return;
    const long long key = std::llround(measure / quantum);
    auto [it, inserted] = best.try_emplace(key, cut, mask);
    if (!inserted && cut < it->second.first) it->second = {cut, mask};
  });
  ProfileTable f;
  f.totalVolume = total;
  for (const auto& [key, entry] : best) {
    const double t = mask_measure(s, entry.second);
    if (!f.volumes.empty() && !(t > f.volumes.back())) continue;
    f.volumes.push_back(t);
    f.perimeters.push_back(perimeter(s, entry.second));
  }
  validate(f);
  return f;
}

CheegerReport cheeger_constant(const DiscreteMMS& s, std::size_t budget) {
  check_budget(s, budget);
  const double total = s.total_measure();
  double bestRatio = kInfinity;
  std::uint64_t bestMask = 0;
  enumerate_subsets(s, [&](std::uint64_t mask, double measure, double cut) {
    if (2.0 * measure > total * (1.0 + 1e-12)) return;
    const double ratio = cut / measure;
    if (ratio < bestRatio * (1.0 + 1e-9)) {
      // Re-evaluate candidates exactly so drift in the running sums never
      // decides the minimum.
      const double m = mask_measure(s, mask);
      if (2.0 * m > total) return;
      const double exact = perimeter(s, mask) / m;
      if (exact < bestRatio || (exact == bestRatio && mask < bestMask)) {
        bestRatio = exact;
        bestMask = mask;
      }
    }
  });
  CheegerReport rep;
  if (bestMask == 0) {
    // Single vertex heavier than half the total: no admissible set.
    rep.h = kInfinity;
    return rep;
  }
  rep.h = bestRatio;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if ((bestMask >> i) & 1U) rep.witnessSet.push_back(i);
  }
  return rep;
}

std::vector<double> discrete_slope(const DiscreteFunction& f) {
  validate(f);
  const DiscreteMMS& s = *f.space;
  std::vector<double> lip(s.size(), 0.0);
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (const auto& nb : s.neighbors(i)) {
      lip[i] = std::max(lip[i], std::abs(f.values[i] - f.values[nb.vertex]) / nb.length);
    }
  }
  return lip;
}

}  // namespace mtlab
