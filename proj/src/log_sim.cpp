#include "thimac/log_sim.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "thimac/diagnostics.hpp"

namespace thimac {

namespace {

// Independent generator per (seed, case index, purpose).
std::mt19937_64 case_rng(std::uint64_t seed, std::size_t index, std::uint32_t salt) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(static_cast<std::uint64_t>(index) >> 32), salt};
  return std::mt19937_64(seq);
}

double uniform(std::mt19937_64& rng) { return std::generate_canonical<double, 53>(rng); }

std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
  return std::min(n - 1, static_cast<std::size_t>(uniform(rng) * static_cast<double>(n)));
}

// Index drawn proportionally to `weights`.
std::size_t pick(std::mt19937_64& rng, const std::vector<double>& weights) {
  double total = 0;
  for (const double w : weights) total += w;
  double x = uniform(rng) * total;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (x < weights[i]) return i;
    x -= weights[i];
  }
  return weights.size() - 1;
}

constexpr std::uint32_t kWalkSalt = 0x5157;
constexpr std::uint32_t kFaultSalt = 0xFA17;

}  // namespace

std::string_view to_string(FaultKind kind) {
  switch (kind) {
    case FaultKind::Drop:
      return "Drop";
    case FaultKind::SwapAdjacent:
      return "SwapAdjacent";
    case FaultKind::IllegalStart:
      return "IllegalStart";
  }
  return "?";
}

std::optional<FaultKind> parse_fault_kind(std::string_view text) {
  for (auto k : {FaultKind::Drop, FaultKind::SwapAdjacent, FaultKind::IllegalStart}) {
    if (to_string(k) == text) return k;
  }
  return std::nullopt;
}

void validate_config(const SimConfig& config) {
  for (const auto& [edge, w] : config.edge_weights) {
    if (!(w > 0) || !std::isfinite(w)) {
      throw ModelError("edge weight for " + edge.first + "->" + edge.second + " must be positive");
    }
  }
  for (const auto& [start, w] : config.start_weights) {
    if (!(w > 0) || !std::isfinite(w)) throw ModelError("start weight for " + start + " must be positive");
  }
  if (config.fault && !(config.fault->rate >= 0.0 && config.fault->rate <= 1.0)) {
    throw ModelError("fault rate must lie in [0, 1]");
  }
  if (config.max_steps == 0) throw ModelError("max_steps must be positive");
  if (config.increment.count() <= 0) throw ModelError("timestamp increment must be positive");
}

std::string case_name(std::size_t index, std::size_t total) {
  const auto width = std::max<std::size_t>(4, std::to_string(total > 0 ? total - 1 : 0).size());
  auto digits = std::to_string(index);
  return "case-" + std::string(width - std::min(width, digits.size()), '0') + digits;
}

SimResult simulate_log(const BehavioralModel& model, const SimConfig& config) {
  validate_config(config);
  SimResult result;
  result.log.header = {"model " + model.name, "seed " + std::to_string(config.seed),
                       "cases " + std::to_string(config.cases)};
  if (model.starts.empty()) throw ModelError("behavior has no start event");

  const std::vector<EventId> starts(model.starts.begin(), model.starts.end());
  std::vector<double> start_weights;
  for (const auto& s : starts) {
    auto it = config.start_weights.find(s);
    start_weights.push_back(it == config.start_weights.end() ? 1.0 : it->second);
  }

  for (std::size_t c = 0; c < config.cases; ++c) {
    auto rng = case_rng(config.seed, c, kWalkSalt);
    const auto case_id = case_name(c, config.cases);
    std::vector<EventId> walk{starts[pick(rng, start_weights)]};
    std::string error;
    while (true) {
      const auto& here = walk.back();
      const auto next = model.successors(here);
      const bool is_end = model.ends.contains(here);
      if (next.empty()) {
        if (!is_end) error = "dead end at " + here;
        break;
      }
      std::vector<double> weights;
      for (const auto& n : next) {
        auto it = config.edge_weights.find({here, n});
        weights.push_back(it == config.edge_weights.end() ? 1.0 : it->second);
      }
      if (is_end) weights.push_back(1.0);
      const auto choice = pick(rng, weights);
      if (choice == next.size()) break;
      if (walk.size() == config.max_steps) {
        error = "max_steps " + std::to_string(config.max_steps) + " exceeded";
        break;
      }
      walk.push_back(next[choice]);
    }
    if (!error.empty()) {
      result.case_errors.push_back(case_id + ": " + error);
      continue;
    }
    for (std::size_t i = 0; i < walk.size(); ++i) {
      result.log.events.push_back({case_id, walk[i], i,
                                   config.start_time + config.increment * static_cast<long>(i),
                                   EventSource::Simulated});
    }
  }
  result.log.sort();
  return result;
}

EventLog inject_faults(const EventLog& log, const SimConfig& config) {
  validate_config(config);
  auto sorted = log;
  sorted.sort();
  if (!config.fault) return sorted;
  const auto fault = *config.fault;

  EventLog out;
  out.header = sorted.header;
  std::vector<std::string> notes;
  std::size_t case_index = 0;
  for (std::size_t begin = 0; begin < sorted.events.size(); ++case_index) {
    auto end = begin;
    while (end < sorted.events.size() && sorted.events[end].case_id == sorted.events[begin].case_id) ++end;
    std::vector<MetaEvent> rows(sorted.events.begin() + static_cast<long>(begin),
                                sorted.events.begin() + static_cast<long>(end));
    begin = end;

    auto rng = case_rng(config.seed, case_index, kFaultSalt);
    const bool mutate = uniform(rng) < fault.rate && rows.size() >= 2;
    if (mutate) {
      std::vector<Timestamp> times;
      for (const auto& r : rows) times.push_back(r.timestamp);
      std::string what;
      switch (fault.kind) {
        case FaultKind::Drop: {
          const auto at = 1 + uniform_index(rng, rows.size() - 1);
          what = "dropped " + rows[at].event_id + " at seq " + std::to_string(at);
          rows.erase(rows.begin() + static_cast<long>(at));
          break;
        }
        case FaultKind::SwapAdjacent: {
          const auto at = uniform_index(rng, rows.size() - 1);
          what = "swapped seq " + std::to_string(at) + " and " + std::to_string(at + 1);
          std::swap(rows[at].event_id, rows[at + 1].event_id);
          break;
        }
        case FaultKind::IllegalStart:
          what = "dropped first event " + rows.front().event_id;
          rows.erase(rows.begin());
          break;
      }
      for (std::size_t i = 0; i < rows.size(); ++i) {
        rows[i].seq = i;
        rows[i].timestamp = times[i];
      }
      notes.push_back("mutated " + rows.front().case_id + " " + std::string(to_string(fault.kind)) +
                      ": " + what);
    }
    out.events.insert(out.events.end(), rows.begin(), rows.end());
  }
  if (!notes.empty()) {
    std::ostringstream rate;
    rate << fault.rate;
    out.header.push_back("fault " + std::string(to_string(fault.kind)) + " rate " + rate.str() +
                         " mutated " + std::to_string(notes.size()));
    out.header.insert(out.header.end(), notes.begin(), notes.end());
  }
  return out;
}

}  // namespace thimac
