#pragma once

#include <span>

#include "sfl/cms.hpp"
#include "sfl/types.hpp"

namespace sfl {

/// Records one pass through a state. Sketch m receives the m-th symbol of
/// `future` (1-based), or a termination when the future is shorter than m.
void record_futures(SketchSet& sketches, std::span<const Symbol> future);

}  // namespace sfl
