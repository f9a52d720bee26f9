#pragma once

#include <functional>
#include <ostream>

#include "thimac/model.hpp"

namespace thimac::detail {

/// Writes nested machine clusters holding the stages accepted by `keep`.
/// With `prune_empty`, machines without kept stages (at any depth) are omitted.
void write_machine_clusters(std::ostream& os, const StaticModel& model,
                            const std::function<bool(const Stage&)>& keep, bool prune_empty,
                            int indent);

void write_stage_node(std::ostream& os, const Stage& stage, int indent);

/// Flow edges solid, trigger edges dashed, both sorted.
void write_arcs(std::ostream& os, const StaticModel& model);

}  // namespace thimac::detail
