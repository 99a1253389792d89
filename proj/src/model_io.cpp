#include "sfl/model_io.hpp"

#include <fstream>
#include <unordered_map>

#include "binary_io.hpp"
#include "sfl/error.hpp"

namespace sfl {
namespace {

constexpr std::uint32_t kVersion = 1;
constexpr std::uint32_t kNone = 0xFFFFFFFFu;

}  // namespace

void save_model(std::ostream& out, const Pdfa& model, bool with_sketches) {
  using detail::write_le;
  const auto live = model.live_states();
  std::unordered_map<StateId, std::uint32_t> index;
  for (std::uint32_t i = 0; i < live.size(); ++i) index.emplace(live[i], i);
  auto remap = [&](StateId id) -> std::uint32_t {
    if (!id.valid()) return kNone;
    auto it = index.find(id);
    return it == index.end() ? kNone : it->second;
  };

  const auto& shape = model.sketch_shape();
  const bool sketches = with_sketches && shape.has_value();

  detail::write_magic(out, "SFLM");
  write_le<std::uint32_t>(out, kVersion);
  write_le<std::uint32_t>(out, model.alphabet_size());
  write_le<std::uint8_t>(out, sketches ? 1 : 0);
  if (sketches) {
    write_le<std::uint32_t>(out, shape->n_futures);
    write_le<std::uint32_t>(out, shape->cms.width);
    write_le<std::uint32_t>(out, shape->cms.depth);
    write_le<std::uint64_t>(out, shape->cms.seed);
  }
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(live.size()));
  for (StateId id : live) {
    const State& s = model.state(id);
    write_le<std::uint8_t>(out, static_cast<std::uint8_t>(s.color));
    write_le<std::uint32_t>(out, remap(s.parent));
    write_le<std::uint32_t>(out, s.parent_symbol);
    write_le<std::uint64_t>(out, s.size);
    write_le<std::uint64_t>(out, s.termination_count);
    write_le<std::uint32_t>(out, static_cast<std::uint32_t>(s.outgoing.size()));
    for (const auto& [a, e] : s.outgoing) {
      const auto target = remap(e.target);
      if (e.target.valid() && target == kNone) throw CorruptionError("edge points at a retired state");
      write_le<std::uint32_t>(out, a);
      write_le<std::uint32_t>(out, target);
      write_le<std::uint64_t>(out, e.count);
    }
    if (sketches) {
      for (std::uint32_t m = 1; m <= shape->n_futures; ++m) s.sketches->at(m).write_snapshot(out);
    }
  }
  if (!out) throw InputError("failed writing model");
}

void save_model_file(const std::filesystem::path& path, const Pdfa& model, bool with_sketches) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open " + path.string() + " for writing");
  save_model(out, model, with_sketches);
}

Pdfa load_model(std::istream& in) {
  using detail::read_le;
  detail::expect_magic(in, "SFLM");
  const auto version = read_le<std::uint32_t>(in);
  if (version != kVersion) throw InputError("unsupported model version " + std::to_string(version));
  const auto alphabet = read_le<std::uint32_t>(in);
  const bool sketches = read_le<std::uint8_t>(in) != 0;
  std::optional<SketchShape> shape;
  if (sketches) {
    SketchShape sh;
    sh.n_futures = read_le<std::uint32_t>(in);
    sh.cms.width = read_le<std::uint32_t>(in);
    sh.cms.depth = read_le<std::uint32_t>(in);
    sh.cms.seed = read_le<std::uint64_t>(in);
    if (sh.n_futures < 1 || sh.cms.width < 2 || sh.cms.depth < 1) throw InputError("invalid sketch shape in model");
    shape = sh;
  }
  const auto n = read_le<std::uint32_t>(in);
  if (n == 0) throw InputError("model has no states");

  Pdfa model(alphabet, shape);
  for (std::uint32_t i = 1; i < n; ++i) model.add_state(StateId::none(), 0);

  auto state_ref = [&](std::uint32_t raw) {
    if (raw == kNone) return StateId::none();
    if (raw >= n) throw InputError("state reference out of range");
    return StateId(raw);
  };

  for (std::uint32_t i = 0; i < n; ++i) {
    State& s = model.mutate(StateId(i));
    const auto color = read_le<std::uint8_t>(in);
    if (color > 2) throw InputError("invalid state color");
    s.color = static_cast<Color>(color);
    s.parent = state_ref(read_le<std::uint32_t>(in));
    s.parent_symbol = read_le<std::uint32_t>(in);
    s.size = read_le<std::uint64_t>(in);
    s.termination_count = read_le<std::uint64_t>(in);
    const auto edges = read_le<std::uint32_t>(in);
    if (edges > alphabet) throw InputError("more edges than symbols");
    std::uint64_t mass = s.termination_count;
    for (std::uint32_t k = 0; k < edges; ++k) {
      const auto a = read_le<std::uint32_t>(in);
      if (a >= alphabet) throw InputError("edge symbol outside alphabet");
      Edge e;
      e.target = state_ref(read_le<std::uint32_t>(in));
      e.count = read_le<std::uint64_t>(in);
      mass += e.count;
      s.outgoing.emplace(a, e);
    }
    if (mass != s.size) throw InputError("state " + std::to_string(i) + " counts do not add up to its size");
    if (shape) {
      SketchSet set(shape->cms, shape->n_futures);
      for (std::uint32_t m = 1; m <= shape->n_futures; ++m) {
        auto sketch = CountMinSketch::read_snapshot(in);
        if (sketch.config() != shape->cms) throw InputError("sketch snapshot does not match model shape");
        set.at(m) = std::move(sketch);
      }
      s.sketches = std::move(set);
    }
  }
  model.freeze();
  return model;
}

Pdfa load_model_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  return load_model(in);
}

}  // namespace sfl
