#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "thimac/behavior.hpp"
#include "thimac/conformance.hpp"

namespace gen {

using Rng = std::mt19937_64;

struct ModelShape {
  std::size_t min_events = 2;
  std::size_t max_events = 8;
  std::size_t max_edges = 14;
  bool acyclic = false;
};

/// Events are named E1..En. Acyclic models only get edges from lower to
/// higher positions in a shuffled order.
thimac::BehavioralModel random_model(Rng& rng, const ModelShape& shape = {});

/// Up to three silent events and a few letter activities mapped to one or two
/// events each. Events without an activity stay reachable by id.
thimac::ActivityMapping random_mapping(Rng& rng, const thimac::BehavioralModel& model);

/// A walk through the model written in log symbols: silent events dropped,
/// other events replaced by one of their activities when they have one.
std::vector<std::string> symbols_of_walk(Rng& rng, const thimac::BehavioralModel& model,
                                         const thimac::ActivityMapping& mapping,
                                         std::size_t max_len);

/// Mix of model walks, perturbed walks and noise, at most `max_len` symbols.
std::vector<std::string> random_trace(Rng& rng, const thimac::BehavioralModel& model,
                                      const thimac::ActivityMapping& mapping,
                                      std::size_t max_len);

std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi);

}  // namespace gen
