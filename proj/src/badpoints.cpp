#include "brw/badpoints.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "brw/errors.hpp"
#include "brw/lattice.hpp"

namespace brw {

std::span<const std::int32_t> toward_root_position(const SnakeTrajectory& traj, Index idx) {
  if (!traj.path.contains(idx)) throw RangeError("index outside window");
  const auto& t = traj.tree;
  const VertexId v = t.vertex_at(idx);
  const std::int32_t level = t.spine_level[static_cast<std::size_t>(v)];
  if (level == 0) return traj.phantom.view();
  if (level > 0) return traj.position(t.spine[static_cast<std::size_t>(level - 1)]);
  return traj.position(t.parent[static_cast<std::size_t>(v)]);
}

bool is_bad(const SnakeTrajectory& traj, Index idx) {
  if (idx % 2 == 0) throw ContractError("is_bad needs an odd index");
  if (idx < 1 || idx + 1 > traj.path.fwd_len()) throw RangeError("is_bad index outside forward window");
  const auto& path = traj.path;
  if (path.value_unchecked(idx) - path.value_unchecked(idx - 1) != 1) return false;
  if (path.value_unchecked(idx + 1) - path.value_unchecked(idx) != -1) return false;
  const auto here = traj.position_at(idx);
  const auto target = toward_root_position(traj, idx - 1);
  return std::equal(here.begin(), here.end(), target.begin());
}

std::int64_t PrunedSnake::N(Index n) const {
  if (n < 0) throw RangeError("N_n needs n >= 0");
  const auto j = static_cast<std::size_t>(n / 2);
  if (j >= prefix.size()) throw RangeError("N_n beyond pruned horizon");
  return prefix[j];
}

std::vector<std::int32_t> PrunedSnake::contour() const {
  std::vector<std::int32_t> c;
  c.reserve(kept.size());
  for (Index i : kept) c.push_back(base->path.value_unchecked(i));
  return c;
}

PrunedSnake prune(std::shared_ptr<const SnakeTrajectory> traj, Index horizon) {
  if (!traj) throw ContractError("prune needs a trajectory");
  if (horizon < 0) throw ContractError("negative horizon");
  const Index fwd = traj->path.fwd_len();
  PrunedSnake p;
  p.base = traj;
  p.kept.push_back(0);
  const auto gaps_needed = static_cast<std::size_t>(horizon / 2 + 1);
  std::int64_t pending = 0;
  Index t = 1;
  // Stop once the pair that closes gap X_{floor(horizon/2)} has been kept.
  while (p.gaps.size() < gaps_needed) {
    if (t + 1 > fwd) {
      const auto missing = static_cast<Index>(gaps_needed - p.gaps.size());
      throw CertificationError("forward window too short for the pruning horizon", 0, 2 * missing);
    }
    if (is_bad(*traj, t)) {
      ++pending;
    } else {
      p.gaps.push_back(pending);
      pending = 0;
      p.kept.push_back(t);
      p.kept.push_back(t + 1);
    }
    t += 2;
  }
  p.kept.resize(static_cast<std::size_t>(horizon) + 1);
  p.prefix.resize(p.gaps.size());
  std::int64_t s = 0;
  for (std::size_t j = 0; j < p.gaps.size(); ++j) p.prefix[j] = (s += p.gaps[j]);
  return p;
}

Index overgenerated_length(Index horizon, std::size_t dim) {
  const double factor = 1.0 + 4.0 / (8.0 * static_cast<double>(dim) - 1.0);
  const auto len = static_cast<Index>(std::ceil(static_cast<double>(horizon + 2) * factor)) + 64;
  return len + (len % 2);
}

namespace {

RangeLedger excluded_set(const SnakeTrajectory& traj, Index past) {
  if (past < 0 || past > traj.path.back_len()) throw RangeError("past outside backward window");
  RangeLedger ledger(traj.dim);
  ledger.insert(traj.phantom.view());
  for (Index i = -past; i <= 0; ++i) ledger.insert(traj.position_at(i));
  return ledger;
}

}  // namespace

std::size_t y_tilde(const SnakeTrajectory& traj, Index n, Index past) {
  if (n < 0 || n > traj.path.fwd_len()) throw RangeError("y_tilde: n outside forward window");
  auto ledger = excluded_set(traj, past);
  std::size_t fresh = 0;
  for (Index i = 1; i <= n; ++i) fresh += ledger.insert(traj.position_at(i)) ? 1 : 0;
  return fresh;
}

std::size_t y_hat(const PrunedSnake& pruned, Index n, Index past) {
  if (n < 0 || n > pruned.horizon()) throw RangeError("y_hat: n beyond pruned horizon");
  auto ledger = excluded_set(*pruned.base, past);
  std::size_t fresh = 0;
  for (Index m = 1; m <= n; ++m)
    fresh += ledger.insert(pruned.base->position_at(pruned.kept[static_cast<std::size_t>(m)])) ? 1 : 0;
  return fresh;
}

}  // namespace brw
