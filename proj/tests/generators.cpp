#include "generators.hpp"

#include <algorithm>

namespace gen {

std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

thimac::BehavioralModel random_model(Rng& rng, const ModelShape& shape) {
  thimac::BehavioralModel m;
  m.name = "random";
  const auto n = uniform(rng, shape.min_events, shape.max_events);
  for (std::size_t i = 1; i <= n; ++i) m.events.push_back("E" + std::to_string(i));

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);

  const auto target = uniform(rng, 1, std::min(shape.max_edges, n * (n - 1)));
  for (std::size_t tries = 0; m.edges.size() < target && tries < 200; ++tries) {
    auto a = uniform(rng, 0, n - 1);
    auto b = uniform(rng, 0, n - 1);
    if (a == b) continue;
    if (shape.acyclic) {
      if (a > b) std::swap(a, b);
      m.edges.insert({m.events[order[a]], m.events[order[b]]});
    } else {
      m.edges.insert({m.events[a], m.events[b]});
    }
  }
  const auto starts = uniform(rng, 1, 2);
  const auto ends = uniform(rng, 1, 2);
  for (std::size_t i = 0; i < starts; ++i) {
    m.starts.insert(m.events[shape.acyclic ? order[uniform(rng, 0, n / 2)] : uniform(rng, 0, n - 1)]);
  }
  for (std::size_t i = 0; i < ends; ++i) {
    m.ends.insert(m.events[shape.acyclic ? order[uniform(rng, n / 2, n - 1)] : uniform(rng, 0, n - 1)]);
  }
  return m;
}

thimac::ActivityMapping random_mapping(Rng& rng, const thimac::BehavioralModel& model) {
  thimac::ActivityMapping map;
  const auto n = model.events.size();
  const auto silent = uniform(rng, 0, std::min<std::size_t>(3, n - 1));
  for (std::size_t i = 0; i < silent; ++i) map.silent.insert(model.events[uniform(rng, 0, n - 1)]);
  const auto activities = uniform(rng, 0, 3);
  for (std::size_t i = 0; i < activities; ++i) {
    auto& targets = map.candidates[std::string(1, static_cast<char>('A' + i))];
    const auto k = uniform(rng, 1, 2);
    for (std::size_t j = 0; j < k; ++j) targets.insert(model.events[uniform(rng, 0, n - 1)]);
  }
  return map;
}

namespace {

std::string symbol_for(Rng& rng, const std::string& event, const thimac::ActivityMapping& mapping) {
  std::vector<std::string> labels;
  for (const auto& [label, targets] : mapping.candidates) {
    if (targets.contains(event)) labels.push_back(label);
  }
  if (labels.empty() || uniform(rng, 0, 3) == 0) return event;
  return labels[uniform(rng, 0, labels.size() - 1)];
}

}  // namespace

std::vector<std::string> symbols_of_walk(Rng& rng, const thimac::BehavioralModel& model,
                                         const thimac::ActivityMapping& mapping,
                                         std::size_t max_len) {
  std::vector<std::string> out;
  std::vector<std::string> starts(model.starts.begin(), model.starts.end());
  auto cur = starts[uniform(rng, 0, starts.size() - 1)];
  for (std::size_t guard = 0; out.size() < max_len && guard < 4 * max_len + 4; ++guard) {
    if (!mapping.silent.contains(cur)) out.push_back(symbol_for(rng, cur, mapping));
    if (model.ends.contains(cur) && uniform(rng, 0, 2) == 0) break;
    const auto next = model.successors(cur);
    if (next.empty()) break;
    cur = next[uniform(rng, 0, next.size() - 1)];
  }
  return out;
}

std::vector<std::string> random_trace(Rng& rng, const thimac::BehavioralModel& model,
                                      const thimac::ActivityMapping& mapping,
                                      std::size_t max_len) {
  std::vector<std::string> alphabet = model.events;
  for (const auto& [label, _] : mapping.candidates) alphabet.push_back(label);
  alphabet.push_back("Q");

  auto trace = symbols_of_walk(rng, model, mapping, max_len);
  switch (uniform(rng, 0, 4)) {
    case 0:
    case 1:
      break;
    case 2:
      if (!trace.empty()) trace.erase(trace.begin() + uniform(rng, 0, trace.size() - 1));
      break;
    case 3:
      if (trace.size() >= 2) {
        const auto i = uniform(rng, 0, trace.size() - 2);
        std::swap(trace[i], trace[i + 1]);
      } else {
        trace.push_back(alphabet[uniform(rng, 0, alphabet.size() - 1)]);
      }
      break;
    default: {
      trace.clear();
      const auto len = uniform(rng, 0, max_len);
      for (std::size_t i = 0; i < len; ++i) trace.push_back(alphabet[uniform(rng, 0, alphabet.size() - 1)]);
    }
  }
  if (trace.size() > max_len) trace.resize(max_len);
  return trace;
}

}  // namespace gen
