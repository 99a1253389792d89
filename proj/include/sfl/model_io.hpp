#pragma once

#include <filesystem>
#include <iosfwd>

#include "sfl/pdfa.hpp"

namespace sfl {

/// Versioned little-endian container for a frozen model:
///
///   "SFLM" u32 version(=1) u32 alphabet_size
///   u8 has_sketches [u32 n_futures u32 width u32 depth u64 seed]
///   u32 state_count, then per state (root first, live states in id order):
///     u8 color u32 parent u32 parent_symbol u64 size u64 termination_count
///     u32 edge_count { u32 symbol u32 target u64 count }
///     [n_futures sketch snapshots]
///
/// State ids are renumbered densely; 0xFFFFFFFF encodes "no state".
/// Retired states are not written.
void save_model(std::ostream& out, const Pdfa& model, bool with_sketches = false);
void save_model_file(const std::filesystem::path& path, const Pdfa& model, bool with_sketches = false);

/// Reads a model written by save_model. The result is frozen.
Pdfa load_model(std::istream& in);
Pdfa load_model_file(const std::filesystem::path& path);

}  // namespace sfl
