#pragma once

// Evaluation game over the prefix of a QCNF. Blocks are used as given;
// empty blocks are skipped. Within a block, local move masks follow the
// AssignmentSpace convention (bit width-1-j holds block.vars[j]).

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "qbfscc/core.hpp"

namespace qbfscc {

class Game {
 public:
  using State = std::vector<std::uint64_t>;  // bitset of satisfied clauses

  explicit Game(const Qcnf& phi, std::size_t cap = kDefaultVarCap) : phi_(phi) {
    std::size_t total = 0;
    for (const auto& b : phi.blocks()) {
      if (b.vars.empty()) continue;
      if (b.vars.size() > 30) throw CapError("block of " + std::to_string(b.vars.size()) + " variables");
      blocks_.push_back(b);
      total += b.vars.size();
    }
    if (total > cap) throw CapError("game over " + std::to_string(total) + " variables exceeds cap " + std::to_string(cap));
    nclauses_ = phi.matrix().size();
    words_ = (nclauses_ + 63) / 64;
    touch_.resize(blocks_.size());
    ends_.resize(blocks_.size());
    std::vector<int> local_block(phi.num_vars() + 1, -1), local_pos(phi.num_vars() + 1, -1);
    for (std::size_t b = 0; b < blocks_.size(); ++b)
      for (std::size_t j = 0; j < blocks_[b].vars.size(); ++j) {
        local_block[blocks_[b].vars[j]] = static_cast<int>(b);
        local_pos[blocks_[b].vars[j]] = static_cast<int>(j);
      }
    for (std::size_t c = 0; c < nclauses_; ++c) {
      const Clause& cl = phi.matrix()[c];
      if (cl.empty()) {
        has_empty_clause_ = true;
        continue;
      }
      std::vector<Touch> per(blocks_.size());
      int last = -1;
      for (Literal l : cl) {
        int b = local_block[l.var()];
        std::size_t w = blocks_[b].vars.size();
        std::uint64_t bit = std::uint64_t{1} << (w - 1 - local_pos[l.var()]);
        if (l.positive()) per[b].pos |= bit;
        else per[b].neg |= bit;
        last = std::max(last, b);
      }
      for (std::size_t b = 0; b < blocks_.size(); ++b)
        if (per[b].pos | per[b].neg) {
          per[b].clause = c;
          touch_[b].push_back(per[b]);
        }
      ends_[last].push_back(c);
    }
    memo_.resize(blocks_.size() + 1);
  }

  const Qcnf& formula() const { return phi_; }
  std::size_t num_blocks() const { return blocks_.size(); }
  const Block& block(std::size_t b) const { return blocks_[b]; }
  bool has_empty_clause() const { return has_empty_clause_; }

  /// Per-block restriction of universal moves; nullopt means unrestricted.
  /// Indexed by game block. Changing it clears the memo.
  void restrict_moves(std::vector<std::optional<std::vector<std::uint64_t>>> allowed) {
    allowed_ = std::move(allowed);
    allowed_.resize(blocks_.size());
    clear_memo();
  }
  void clear_memo() {
    for (auto& m : memo_) m.clear();
  }

  /// Candidate moves at block b in canonical order, honouring restrictions.
  std::vector<std::uint64_t> moves(std::size_t b) const {
    if (blocks_[b].quantifier == Quantifier::forall && b < allowed_.size() && allowed_[b]) return *allowed_[b];
    std::vector<std::uint64_t> out(std::size_t{1} << blocks_[b].vars.size());
    for (std::size_t m = 0; m < out.size(); ++m) out[m] = m;
    return out;
  }

  State initial() const { return State(words_, 0); }

  /// Applies move `mask` at block b; returns false if some clause becomes falsified.
  bool apply(std::size_t b, const State& st, std::uint64_t mask, State& out) const {
    out = st;
    const std::uint64_t full = block_full(b);
    for (const Touch& t : touch_[b]) {
      if (test(out, t.clause)) continue;
      if ((mask & t.pos) | (~mask & full & t.neg)) set(out, t.clause);
    }
    for (std::size_t c : ends_[b])
      if (!test(out, c)) return false;
    return true;
  }

  /// Value of the game from block b in state st: true iff the existential player wins.
  bool value_from(std::size_t b, const State& st) {
    if (b == blocks_.size()) return true;
    auto& memo = memo_[b];
    if (auto it = memo.find(st); it != memo.end()) return it->second;
    const bool exists = blocks_[b].quantifier == Quantifier::exists;
    bool result = !exists;
    State next;
    auto try_move = [&](std::uint64_t mask) {
      bool v = apply(b, st, mask, next) && value_from(b + 1, next);
      if (exists && v) {
        result = true;
        return true;
      }
      if (!exists && !v) {
        result = false;
        return true;
      }
      return false;
    };
    if (!exists && b < allowed_.size() && allowed_[b]) {
      for (std::uint64_t mask : *allowed_[b])
        if (try_move(mask)) break;
    } else {
      const std::uint64_t n = std::uint64_t{1} << blocks_[b].vars.size();
      for (std::uint64_t mask = 0; mask < n; ++mask)
        if (try_move(mask)) break;
    }
    memo.emplace(st, result);
    return result;
  }

  /// Truth value of the whole formula (under the current move restriction).
  bool value() {
    if (has_empty_clause_) return false;
    return value_from(0, initial());
  }

  /// Whether the universal player wins from (b, st) by playing `mask` at block b.
  bool forall_wins_with(std::size_t b, const State& st, std::uint64_t mask) {
    State next;
    return !apply(b, st, mask, next) || !value_from(b + 1, next);
  }

 private:
  struct Touch {
    std::size_t clause = 0;
    std::uint64_t pos = 0;
    std::uint64_t neg = 0;
  };
  struct StateHash {
    std::size_t operator()(const State& s) const {
      std::uint64_t h = 0x9E3779B97F4A7C15ULL;
      for (std::uint64_t w : s) h = (h ^ w) * 0x100000001B3ULL + (h >> 29);
      return static_cast<std::size_t>(h);
    }
  };

  std::uint64_t block_full(std::size_t b) const {
    std::size_t w = blocks_[b].vars.size();
    return w == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << w) - 1;
  }
  static bool test(const State& s, std::size_t c) { return (s[c >> 6] >> (c & 63)) & 1u; }
  static void set(State& s, std::size_t c) { s[c >> 6] |= std::uint64_t{1} << (c & 63); }

  Qcnf phi_;
  std::vector<Block> blocks_;
  std::size_t nclauses_ = 0;
  std::size_t words_ = 0;
  bool has_empty_clause_ = false;
  std::vector<std::vector<Touch>> touch_;
  std::vector<std::vector<std::size_t>> ends_;
  std::vector<std::optional<std::vector<std::uint64_t>>> allowed_;
  std::vector<std::unordered_map<State, bool, StateHash>> memo_;
};

}  // namespace qbfscc
