#include "asg/engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace asg {

namespace {

// Decode a uniform pair index r in [0, M(M-1)/2) into (i, j), 1 <= i < j <= M,
// ordering pairs by j then i.
Mark decode_pair(std::uint64_t r) {
  // pairs with second index j occupy [ (j-1)(j-2)/2, j(j-1)/2 )
  auto below = [](std::int64_t j) { return (j - 1) * (j - 2) / 2; };
  std::int64_t j = static_cast<std::int64_t>((3.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(r))) / 2.0);
  while (below(j) > static_cast<std::int64_t>(r)) --j;
  while (below(j + 1) <= static_cast<std::int64_t>(r)) ++j;
  const std::int64_t i = static_cast<std::int64_t>(r) - below(j) + 1;
  return Mark{Mark::Kind::pair_coalescence, i, j};
}

}  // namespace

ArrivalRates arrival_rates(const Counts& counts, const ModelParams& params) {
  const std::int64_t m = std::max(counts.kingman, counts.asg);
  const std::int64_t c = counts.asg;
  ArrivalRates r;
  r.pair = 0.5 * static_cast<double>(m) * static_cast<double>(m - 1);
  r.mutation = 0.5 * params.theta * static_cast<double>(c);
  r.selection = 0.5 * params.sigma * static_cast<double>(c);
  return r;
}

std::optional<Arrival> sample_arrival(const Counts& counts, const ModelParams& params,
                                      RandomStream& rng) {
  if (!counts.ordered()) throw std::invalid_argument("sample_arrival: counts violate coupling order");
  const ArrivalRates rates = arrival_rates(counts, params);
  const double total = rates.total();
  if (total <= 0.0) return std::nullopt;

  Arrival arrival;
  arrival.holding_time = rng.exponential(total);

  const double u = rng.uniform01() * total;
  if (u < rates.pair) {
    const std::int64_t m = std::max(counts.kingman, counts.asg);
    const std::uint64_t n_pairs = static_cast<std::uint64_t>(m) * static_cast<std::uint64_t>(m - 1) / 2;
    arrival.mark = decode_pair(rng.uniform_below(n_pairs));
  } else {
    const bool mutation = u < rates.pair + rates.mutation;
    const std::int64_t idx =
        1 + static_cast<std::int64_t>(rng.uniform_below(static_cast<std::uint64_t>(counts.asg)));
    arrival.mark =
        Mark{mutation ? Mark::Kind::mutation_kill : Mark::Kind::selection_branch, idx, 0};
  }
  return arrival;
}

ApplyResult apply_mark(const Counts& counts, const Mark& mark) {
  ApplyResult out;
  out.counts = counts;
  switch (mark.kind) {
    case Mark::Kind::pair_coalescence:
      if (mark.j <= counts.kingman) {
        --out.counts.kingman;
        out.applied[0] = true;
      }
      if (mark.j <= counts.kingman_mutation) {
        --out.counts.kingman_mutation;
        out.applied[1] = true;
      }
      if (mark.j <= counts.asg) {
        --out.counts.asg;
        out.applied[2] = true;
      }
      break;
    case Mark::Kind::mutation_kill:
      if (mark.i <= counts.kingman_mutation) {
        --out.counts.kingman_mutation;
        out.applied[1] = true;
      }
      if (mark.i <= counts.asg) {
        --out.counts.asg;
        out.applied[2] = true;
      }
      break;
    case Mark::Kind::selection_branch:
      if (mark.i <= counts.asg) {
        ++out.counts.asg;
        out.applied[2] = true;
      }
      break;
  }
  return out;
}

CoupledTrajectory simulate_coupled(const ModelParams& params, std::int64_t n0,
                                   const StopCondition& stop, RandomStream& rng) {
  if (n0 < 1) throw std::invalid_argument("simulate_coupled: n0 must be >= 1");
  if (stop.level && *stop.level < 1)
    throw std::invalid_argument("simulate_coupled: stop level must be >= 1");
  if (!stop.level && !stop.horizon)
    throw std::invalid_argument("simulate_coupled: no stop condition given");

  CoupledTrajectory traj;
  traj.params = params;
  traj.n0 = n0;

  Counts counts{n0, n0, n0};
  double t = 0.0;
  std::array<bool, 3> hit = {false, false, false};
  auto update_hits = [&](const Counts& c) {
    if (!stop.level) return false;
    for (Coord coord : kAllCoords)
      if (c.of(coord) <= *stop.level) hit[static_cast<int>(coord)] = true;
    return hit[0] && hit[1] && hit[2];
  };
  update_hits(counts);

  bool done = stop.level && hit[0] && hit[1] && hit[2];
  while (!done) {
    auto arrival = sample_arrival(counts, params, rng);
    if (!arrival) {
      traj.absorbed = true;
      if (stop.horizon) t = *stop.horizon;  // constant path covers the full window
      break;
    }
    const double next_t = t + arrival->holding_time;
    if (stop.horizon && next_t > *stop.horizon) {
      t = *stop.horizon;
      break;
    }
    t = next_t;
    auto applied = apply_mark(counts, arrival->mark);
    counts = applied.counts;
    traj.events.push_back(EventRecord{t, arrival->mark, applied.applied, counts});
    if (static_cast<std::int64_t>(traj.events.size()) > stop.max_events)
      throw std::runtime_error("simulate_coupled: event cap exceeded; check parameters");
    done = update_hits(counts);
  }

  traj.stop_time = t;
  traj.final_counts = counts;
  return traj;
}

Counts CoupledTrajectory::counts_at(double local_time) const {
  if (local_time < 0.0) throw std::invalid_argument("counts_at: negative time");
  Counts c{n0, n0, n0};
  // first event strictly after local_time
  auto it = std::upper_bound(events.begin(), events.end(), local_time,
                             [](double t, const EventRecord& e) { return t < e.time; });
  if (it != events.begin()) c = std::prev(it)->counts;
  return c;
}

std::optional<double> hitting_time(const CoupledTrajectory& trajectory, Coord coord,
                                   std::int64_t level) {
  if (level < 1) throw std::invalid_argument("hitting_time: level must be >= 1");
  if (trajectory.n0 <= level) return 0.0;
  for (const EventRecord& e : trajectory.events)
    if (e.counts.of(coord) <= level) return e.time;
  return std::nullopt;
}

MarginalPath coordinate_path(const CoupledTrajectory& trajectory, Coord coord) {
  MarginalPath path;
  path.params = trajectory.params;
  path.n0 = trajectory.n0;
  path.time_origin = trajectory.time_origin;
  path.stop_time = trajectory.stop_time;
  path.absorbed = trajectory.absorbed;
  std::int64_t cur = trajectory.n0;
  for (const EventRecord& e : trajectory.events) {
    const std::int64_t lvl = e.counts.of(coord);
    if (lvl != cur) {
      path.times.push_back(e.time);
      path.levels.push_back(lvl);
      cur = lvl;
    }
  }
  return path;
}

MarginalPath simulate_marginal(const ModelParams& params, std::int64_t n0,
                               const MarginalStop& stop, RandomStream& rng) {
  MarginalPath path;
  path.params = params;
  path.n0 = n0;
  double last_t = 0.0;
  simulate_marginal_visit(params, n0, stop, rng,
                          [&](double t, std::int64_t, std::int64_t new_n) {
                            path.times.push_back(t);
                            path.levels.push_back(new_n);
                            last_t = t;
                          });
  if (stop.horizon)
    path.stop_time = *stop.horizon;
  else
    path.stop_time = last_t;
  const std::int64_t n_final = path.final_level();
  path.absorbed = params.holding_rate(n_final) <= 0.0 && !(stop.level && n_final <= *stop.level);
  return path;
}

std::int64_t MarginalPath::level_at(double local_time) const {
  if (local_time < 0.0) throw std::invalid_argument("level_at: negative time");
  auto it = std::upper_bound(times.begin(), times.end(), local_time);
  if (it == times.begin()) return n0;
  return levels[static_cast<std::size_t>(std::distance(times.begin(), it)) - 1];
}

std::optional<double> marginal_hitting_time(const MarginalPath& path, std::int64_t level) {
  if (level < 1) throw std::invalid_argument("marginal_hitting_time: level must be >= 1");
  if (path.n0 <= level) return 0.0;
  for (std::size_t k = 0; k < path.times.size(); ++k)
    if (path.levels[k] <= level) return path.times[k];
  return std::nullopt;
}

}  // namespace asg
