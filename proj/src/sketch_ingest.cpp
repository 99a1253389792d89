#include "sfl/sketch_ingest.hpp"

namespace sfl {

void record_futures(SketchSet& sketches, std::span<const Symbol> future) {
  for (std::uint32_t m = 1; m <= sketches.n_futures(); ++m) {
    if (future.size() >= m) {
      sketches.at(m).store(future[m - 1]);
    } else {
      sketches.at(m).store_termination();
    }
  }
}

}  // namespace sfl
