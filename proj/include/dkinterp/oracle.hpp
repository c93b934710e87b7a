// Exhaustive validity oracle over all pseudo-models with a fixed number of
// states, evaluated 64 models at a time.
//
// Models are numbered family * V + valuation, where a family assigns each
// ordered state pair one down-closed set of groups (its edge label, digit 0
// being the full label) and V is
// the number of valuations. For every formula of a batch the oracle reports,
// per frame class, the first model and state at which it is false.
//
// Checking exactly n states suffices for "at most n states": the disjoint
// union of a smaller model with one fully reflexive state lies in the same
// frame classes and preserves truth at the original states.

#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "dkinterp/semantics.hpp"

namespace dkinterp {

class SmallModelOracle {
 public:
  struct Falsifier {
    std::uint64_t model;
    std::size_t state;
  };
  struct Result {
    // Indexed by FrameClass.
    std::array<std::optional<Falsifier>, 3> falsifier;
    bool valid(FrameClass c) const { return !falsifier[static_cast<int>(c)].has_value(); }
  };

  SmallModelOracle(std::size_t agents, std::vector<std::string> vars, std::size_t states)
      : agents_(agents), vars_(std::move(vars)), n_(states) {
    if (agents < 1 || agents > 2) throw std::invalid_argument("oracle supports 1 or 2 agents");
    if (states < 1 || states > 3) throw std::invalid_argument("oracle supports 1 to 3 states");
    if (vars_.size() * n_ > 12) throw std::invalid_argument("too many valuations");
    // Densest label first, so serial and reflexive models come early and
    // most formulas settle in the first blocks.
    labels_ = detail::downset_labels(agents);
    std::reverse(labels_.begin(), labels_.end());
    groups_ = (1u << agents) - 1;
    families_ = 1;
    for (std::size_t k = 0; k < n_ * n_; ++k) families_ *= labels_.size();
    valuations_ = std::uint64_t{1} << (vars_.size() * n_);
  }

  std::uint64_t num_models() const { return families_ * valuations_; }

  PseudoModel model(std::uint64_t index) const {
    if (index >= num_models()) throw std::out_of_range("model index out of range");
    std::uint64_t fam = index / valuations_, val = index % valuations_;
    PseudoModel m(n_, agents_);
    for (std::size_t k = 0; k < n_ * n_; ++k) {
      std::uint32_t lab = labels_[fam % labels_.size()];
      fam /= labels_.size();
      for (std::uint32_t g = 1; g <= groups_; ++g) {
        if ((lab >> (g - 1)) & 1) m.add_edge(Group::from_bits(g), k / n_, k % n_);
      }
    }
    for (std::size_t x = 0; x < vars_.size(); ++x) {
      m.declare(vars_[x]);
      for (std::size_t w = 0; w < n_; ++w) {
        if ((val >> (x * n_ + w)) & 1) m.set_true(vars_[x], w);
      }
    }
    return m;
  }

  // Validity of ⇒ f for every f, across all models.
  std::vector<Result> check(const std::vector<Formula>& formulas) const {
    Dag dag = build(formulas);
    std::vector<Result> out(formulas.size());
    const std::uint64_t total = num_models();
    const std::uint64_t words = (total + 63) / 64;
    const std::size_t nodes = dag.ops.size();
    const std::size_t pairs = n_ * n_;

    std::vector<Block> truth(nodes * n_);
    std::vector<Block> edge(groups_ * pairs);
    std::vector<Block> var(vars_.size() * n_);
    // Formulas still lacking a falsifier in some class, and the nodes they need.
    std::vector<std::size_t> open(formulas.size());
    for (std::size_t f = 0; f < open.size(); ++f) open[f] = f;
    std::vector<std::size_t> live;
    bool live_dirty = true;
    for (std::uint64_t w0 = 0; w0 < words; w0 += kLanes) {
      Block valid{}, serial{}, reflexive{};
      for (std::size_t lane = 0; lane < kLanes; ++lane) {
        std::uint64_t word = w0 + lane;
        for (auto& b : edge) b[lane] = 0;
        for (auto& b : var) b[lane] = 0;
        if (word >= words) continue;
        for (int bit = 0; bit < 64; ++bit) {
          std::uint64_t m = word * 64 + static_cast<std::uint64_t>(bit);
          if (m >= total) break;
          std::uint64_t mask = std::uint64_t{1} << bit;
          valid[lane] |= mask;
          std::uint64_t fam = m / valuations_, val = m % valuations_;
          for (std::size_t k = 0; k < pairs; ++k) {
            std::uint32_t lab = labels_[fam % labels_.size()];
            fam /= labels_.size();
            for (std::uint32_t g = 0; g < groups_; ++g) {
              if ((lab >> g) & 1) edge[g * pairs + k][lane] |= mask;
            }
          }
          for (std::size_t x = 0; x < vars_.size(); ++x) {
            for (std::size_t s = 0; s < n_; ++s) {
              if ((val >> (x * n_ + s)) & 1) var[x * n_ + s][lane] |= mask;
            }
          }
        }
        std::uint64_t ser = valid[lane], ref = valid[lane];
        for (std::size_t s = 0; s < n_; ++s) {
          for (std::size_t a = 0; a < agents_; ++a) {
            std::uint32_t g = (1u << a) - 1;  // index of group {a}
            std::uint64_t any = 0;
            for (std::size_t t = 0; t < n_; ++t) any |= edge[g * pairs + s * n_ + t][lane];
            ser &= any;
          }
          for (std::uint32_t g = 0; g < groups_; ++g) ref &= edge[g * pairs + s * n_ + s][lane];
        }
        serial[lane] = ser;
        reflexive[lane] = ref;
      }

      if (live_dirty) {
        live = live_nodes(dag, out, open);
        live_dirty = false;
      }
      for (std::size_t i : live) {
        const Op& op = dag.ops[i];
        for (std::size_t s = 0; s < n_; ++s) {
          Block& r = truth[i * n_ + s];
          switch (op.kind) {
            case Connective::Var:
              r = var[op.a * n_ + s];
              break;
            case Connective::Bottom:
              r = Block{};
              break;
            case Connective::Not: {
              const Block& x = truth[op.a * n_ + s];
              for (std::size_t l = 0; l < kLanes; ++l) r[l] = ~x[l];
              break;
            }
            case Connective::And: {
              const Block& x = truth[op.a * n_ + s];
              const Block& y = truth[op.b * n_ + s];
              for (std::size_t l = 0; l < kLanes; ++l) r[l] = x[l] & y[l];
              break;
            }
            case Connective::Or: {
              const Block& x = truth[op.a * n_ + s];
              const Block& y = truth[op.b * n_ + s];
              for (std::size_t l = 0; l < kLanes; ++l) r[l] = x[l] | y[l];
              break;
            }
            case Connective::Implies: {
              const Block& x = truth[op.a * n_ + s];
              const Block& y = truth[op.b * n_ + s];
              for (std::size_t l = 0; l < kLanes; ++l) r[l] = ~x[l] | y[l];
              break;
            }
            case Connective::Dist: {
              Block acc;
              acc.fill(~std::uint64_t{0});
              for (std::size_t t = 0; t < n_; ++t) {
                const Block& e = edge[op.b * pairs + s * n_ + t];
                const Block& x = truth[op.a * n_ + t];
                for (std::size_t l = 0; l < kLanes; ++l) acc[l] &= ~e[l] | x[l];
              }
              r = acc;
              break;
            }
          }
        }
      }

      std::size_t kept = 0;
      for (std::size_t f : open) {
        std::size_t node = dag.roots[f];
        Result& r = out[f];
        const bool want_all = !r.falsifier[0], want_ser = !r.falsifier[1], want_ref = !r.falsifier[2];
        for (std::size_t lane = 0; lane < kLanes; ++lane) {
          if (valid[lane] == 0) continue;
          for (std::size_t s = 0; s < n_; ++s) {
            std::uint64_t bad = ~truth[node * n_ + s][lane] & valid[lane];
            if (bad == 0) continue;
            if (want_all) record(r, FrameClass::All, bad, w0 + lane, s);
            if (want_ser) record(r, FrameClass::SerialSingletons, bad & serial[lane], w0 + lane, s);
            if (want_ref) record(r, FrameClass::Reflexive, bad & reflexive[lane], w0 + lane, s);
          }
        }
        if (!settled(out[f])) open[kept++] = f;
      }
      if (kept != open.size()) {
        open.resize(kept);
        live_dirty = true;
      }
    }
    return out;
  }

 private:
  static constexpr std::size_t kLanes = 8;
  using Block = std::array<std::uint64_t, kLanes>;

  struct Op {
    Connective kind;
    std::size_t a = 0;  // child node, or variable index
    std::size_t b = 0;  // right child, or group index for Dist
  };
  struct Dag {
    std::vector<Op> ops;
    std::vector<std::size_t> roots;
  };

  static bool settled(const Result& r) {
    return r.falsifier[0] && r.falsifier[1] && r.falsifier[2];
  }

  // Ascending node ids reachable from the open roots; children precede
  // parents because ids are assigned in post-order.
  static std::vector<std::size_t> live_nodes(const Dag& dag, const std::vector<Result>&,
                                             const std::vector<std::size_t>& open) {
    std::vector<bool> need(dag.ops.size(), false);
    std::vector<std::size_t> stack;
    for (std::size_t f : open) stack.push_back(dag.roots[f]);
    while (!stack.empty()) {
      std::size_t i = stack.back();
      stack.pop_back();
      if (need[i]) continue;
      need[i] = true;
      const Op& op = dag.ops[i];
      switch (op.kind) {
        case Connective::Var:
        case Connective::Bottom:
          break;
        case Connective::Not:
        case Connective::Dist:
          stack.push_back(op.a);
          break;
        default:
          stack.push_back(op.a);
          stack.push_back(op.b);
      }
    }
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < need.size(); ++i) {
      if (need[i]) out.push_back(i);
    }
    return out;
  }

  static void record(Result& r, FrameClass c, std::uint64_t bits, std::uint64_t word,
                     std::size_t state) {
    auto& slot = r.falsifier[static_cast<int>(c)];
    if (bits == 0) return;
    std::uint64_t m = word * 64 + static_cast<std::uint64_t>(std::countr_zero(bits));
    if (!slot || m < slot->model || (m == slot->model && state < slot->state)) {
      slot = Falsifier{m, state};
    }
  }

  Dag build(const std::vector<Formula>& formulas) const {
    Dag dag;
    std::unordered_map<Formula, std::size_t, FormulaHash> id;
    std::function<std::size_t(const Formula&)> visit = [&](const Formula& f) -> std::size_t {
      auto it = id.find(f);
      if (it != id.end()) return it->second;
      Op op{f.op()};
      switch (f.op()) {
        case Connective::Var: {
          auto pos = std::find(vars_.begin(), vars_.end(), f.name());
          if (pos == vars_.end()) throw std::invalid_argument("variable outside the oracle");
          op.a = static_cast<std::size_t>(pos - vars_.begin());
          break;
        }
        case Connective::Bottom:
          break;
        case Connective::Not:
          op.a = visit(f.child());
          break;
        case Connective::Dist:
          if (f.group().bits() > groups_) throw std::invalid_argument("agent outside the oracle");
          op.a = visit(f.child());
          op.b = f.group().bits() - 1;
          break;
        default:
          op.a = visit(f.left());
          op.b = visit(f.right());
      }
      dag.ops.push_back(op);
      id.emplace(f, dag.ops.size() - 1);
      return dag.ops.size() - 1;
    };
    for (const Formula& f : formulas) dag.roots.push_back(visit(f));
    return dag;
  }

  std::size_t agents_;
  std::vector<std::string> vars_;
  std::size_t n_;
  std::vector<std::uint32_t> labels_;
  std::uint32_t groups_;
  std::uint64_t families_;
  std::uint64_t valuations_;
};

}  // namespace dkinterp
