#include "sfl/pdfa.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "sfl/error.hpp"

namespace sfl {

const char* to_string(Color c) {
  switch (c) {
    case Color::Red: return "red";
    case Color::Blue: return "blue";
    case Color::White: return "white";
  }
  return "?";
}

const Edge* State::edge(Symbol a) const {
  auto it = outgoing.find(a);
  return it == outgoing.end() ? nullptr : &it->second;
}

StateId State::child(Symbol a) const {
  const Edge* e = edge(a);
  return e ? e->target : StateId::none();
}

std::uint64_t State::count(Symbol a) const {
  const Edge* e = edge(a);
  return e ? e->count : 0;
}

bool operator==(const State& a, const State& b) {
  return a.id == b.id && a.color == b.color && a.parent == b.parent && a.parent_symbol == b.parent_symbol &&
         a.size == b.size && a.termination_count == b.termination_count && a.outgoing == b.outgoing &&
         a.sketches == b.sketches && a.retired == b.retired;
}

Pdfa::Pdfa(std::uint32_t alphabet_size, std::optional<SketchShape> sketches)
    : alphabet_size_(alphabet_size), sketch_shape_(std::move(sketches)) {
  if (sketch_shape_) {
    sketch_shape_->cms.validate();
    if (sketch_shape_->n_futures < 1) throw UsageError("n_futures must be >= 1");
  }
  State root;
  root.id = StateId(0);
  root.color = Color::Red;
  if (sketch_shape_) root.sketches.emplace(sketch_shape_->cms, sketch_shape_->n_futures);
  states_.push_back(std::move(root));
  live_ = 1;
}

const State& Pdfa::state(StateId id) const {
  if (!id.valid() || id.index() >= states_.size()) throw UsageError("unknown state id");
  return states_[id.index()];
}

State& Pdfa::mutate(StateId id) {
  if (!id.valid() || id.index() >= states_.size()) throw UsageError("unknown state id");
  auto& s = states_[id.index()];
  s.revision = ++clock_;
  return s;
}

StateId Pdfa::add_state(StateId parent, Symbol via) {
  if (states_.size() >= std::numeric_limits<std::uint32_t>::max() - 1) throw CorruptionError("state id space exhausted");
  State s;
  s.id = StateId(static_cast<std::uint32_t>(states_.size()));
  s.parent = parent;
  s.parent_symbol = via;
  s.revision = ++clock_;
  if (sketch_shape_) s.sketches.emplace(sketch_shape_->cms, sketch_shape_->n_futures);
  states_.push_back(std::move(s));
  ++live_;
  return states_.back().id;
}

void Pdfa::retire(StateId id) {
  auto& s = mutate(id);
  if (s.retired) throw CorruptionError("state retired twice");
  s.retired = true;
  --live_;
}

void Pdfa::unretire(StateId id) {
  auto& s = mutate(id);
  if (!s.retired) throw CorruptionError("restoring a live state");
  s.retired = false;
  ++live_;
}

void Pdfa::reclaim(StateId id) {
  auto& s = mutate(id);
  if (!s.retired) throw CorruptionError("reclaiming a live state");
  s.outgoing.clear();
  s.sketches.reset();
}

std::vector<StateId> Pdfa::live_states() const {
  std::vector<StateId> out;
  out.reserve(live_);
  for (const auto& s : states_) {
    if (!s.retired) out.push_back(s.id);
  }
  return out;
}

std::vector<StateId> Pdfa::states_with_color(Color c) const {
  std::vector<StateId> out;
  for (const auto& s : states_) {
    if (!s.retired && s.color == c) out.push_back(s.id);
  }
  return out;
}

void Pdfa::check_symbol(Symbol a) const {
  if (a >= alphabet_size_) {
    throw InputError("symbol " + std::to_string(a) + " outside alphabet of size " + std::to_string(alphabet_size_));
  }
}

bool operator==(const Pdfa& a, const Pdfa& b) {
  return a.alphabet_size_ == b.alphabet_size_ && a.sketch_shape_ == b.sketch_shape_ && a.states_ == b.states_ &&
         a.live_ == b.live_ && a.epoch_ == b.epoch_ && a.frozen_ == b.frozen_;
}

double symbol_prob(const State& state, Symbol a) {
  if (state.size == 0) throw DistributionError("state " + std::to_string(state.id.index()) + " has no evidence");
  return static_cast<double>(state.count(a)) / static_cast<double>(state.size);
}

double final_prob(const State& state) {
  if (state.size == 0) throw DistributionError("state " + std::to_string(state.id.index()) + " has no evidence");
  return static_cast<double>(state.termination_count) / static_cast<double>(state.size);
}

double probability(const Pdfa& model, std::span<const Symbol> s, const SmoothingPolicy& policy) {
  if (!model.frozen()) throw UsageError("probability requires a frozen model");
  for (Symbol a : s) model.check_symbol(a);

  double p = 1.0;
  StateId q = model.root();
  for (Symbol a : s) {
    const State& st = model.state(q);
    const Edge* e = st.edge(a);
    if (st.size == 0 || e == nullptr || !e->target.valid() || e->count == 0) return policy.floor;
    p *= static_cast<double>(e->count) / static_cast<double>(st.size);
    q = e->target;
  }
  const State& last = model.state(q);
  if (last.size == 0 || last.termination_count == 0) return policy.floor;
  p *= final_prob(last);
  return p;
}

double normalization_error(const Pdfa& model) {
  double worst = 0.0;
  for (StateId id : model.live_states()) {
    const State& st = model.state(id);
    if (st.size == 0) continue;
    double total = final_prob(st);
    for (const auto& [a, e] : st.outgoing) total += symbol_prob(st, a);
    worst = std::max(worst, std::abs(total - 1.0));
  }
  return worst;
}

namespace {

std::string format_prob(double p) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", p);
  std::string out(buf);
  while (out.size() > 1 && out.back() == '0') out.pop_back();
  if (out.back() == '.') out.pop_back();
  return out;
}

const char* fill_color(Color c) {
  switch (c) {
    case Color::Red: return "tomato";
    case Color::Blue: return "lightblue";
    case Color::White: return "white";
  }
  return "white";
}

}  // namespace

std::string export_dot(const Pdfa& model) {
  std::ostringstream out;
  out << "digraph pdfa {\n";
  out << "  rankdir=LR;\n";
  out << "  node [shape=circle, style=filled];\n";
  const auto live = model.live_states();
  for (StateId id : live) {
    const State& st = model.state(id);
    out << "  s" << id.index() << " [label=\"" << id.index() << "\\nsize " << st.size;
    if (st.size > 0) out << "\\nF " << format_prob(final_prob(st));
    out << "\", fillcolor=\"" << fill_color(st.color) << "\"];\n";
  }
  for (StateId id : live) {
    const State& st = model.state(id);
    for (const auto& [a, e] : st.outgoing) {
      if (!e.target.valid()) continue;
      out << "  s" << id.index() << " -> s" << e.target.index() << " [label=\"" << a << ' '
          << format_prob(st.size > 0 ? symbol_prob(st, a) : 0.0) << "\"];\n";
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace sfl
