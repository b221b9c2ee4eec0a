#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "asg/model.hpp"
#include "asg/rng.hpp"

namespace asg {

// The three coupled coordinates: plain Kingman, Kingman with mutation, and
// the selection graph count. All are driven by one arrival stream.
enum class Coord : int { kingman = 0, kingman_mutation = 1, asg = 2 };

inline constexpr std::array<Coord, 3> kAllCoords = {Coord::kingman, Coord::kingman_mutation,
                                                    Coord::asg};

struct Counts {
  std::int64_t kingman = 0;
  std::int64_t kingman_mutation = 0;
  std::int64_t asg = 0;

  std::int64_t of(Coord c) const {
    switch (c) {
      case Coord::kingman: return kingman;
      case Coord::kingman_mutation: return kingman_mutation;
      default: return asg;
    }
  }

  // Coupling order: the mutation coordinate never exceeds the other two.
  bool ordered() const {
    return kingman >= 0 && asg >= 0 && kingman_mutation >= 0 &&
           kingman_mutation <= kingman && kingman_mutation <= asg;
  }

  bool operator==(const Counts&) const = default;
};

// A potential event. Pair marks (i, j) with i < j coalesce lineages i and j
// in every process that currently has at least j lineages. Mutation marks
// kill lineage i where present; selection marks split lineage i of the
// selection count only.
struct Mark {
  enum class Kind : std::uint8_t { pair_coalescence, mutation_kill, selection_branch };
  Kind kind = Kind::pair_coalescence;
  std::int64_t i = 0;
  std::int64_t j = 0;  // pair marks only
};

struct EventRecord {
  double time = 0.0;  // local trajectory time, strictly increasing
  Mark mark;
  std::array<bool, 3> applied = {false, false, false};
  Counts counts;  // counts just after the mark was applied
};

// Rates of the three mark categories that can change at least one process.
// Pairs live on {(i,j) : 1 <= i < j <= M} with M = max(kingman, asg);
// mutation and selection indices live on {1..asg}.
struct ArrivalRates {
  double pair = 0.0;
  double mutation = 0.0;
  double selection = 0.0;
  double total() const { return pair + mutation + selection; }
};

ArrivalRates arrival_rates(const Counts& counts, const ModelParams& params);

struct Arrival {
  double holding_time = 0.0;
  Mark mark;
};

// Draws the next potential event. Returns nullopt from a fully absorbed
// state (zero total rate). Throws on counts violating the coupling order.
std::optional<Arrival> sample_arrival(const Counts& counts, const ModelParams& params,
                                      RandomStream& rng);

struct ApplyResult {
  Counts counts;
  std::array<bool, 3> applied = {false, false, false};
};

// Thinning rule; total on valid inputs, preserves the coupling order.
ApplyResult apply_mark(const Counts& counts, const Mark& mark);

struct StopCondition {
  // Stop once every coordinate has visited a level <= this (must be >= 1).
  std::optional<std::int64_t> level;
  // ... and/or stop at this local time.
  std::optional<double> horizon;
  std::int64_t max_events = 100'000'000;
};

struct CoupledTrajectory {
  ModelParams params;
  std::int64_t n0 = 0;
  // Absolute time assigned to local time 0. Campaigns that treat the start
  // level as a stand-in for "infinity" set this to the expected hitting time
  // of n0; path functionals evaluate on the absolute axis. Hitting times
  // below stay in local time.
  double time_origin = 0.0;
  std::vector<EventRecord> events;
  double stop_time = 0.0;
  Counts final_counts;
  bool absorbed = false;

  // Right-continuous evaluation of the three step functions at a local time.
  Counts counts_at(double local_time) const;
};

CoupledTrajectory simulate_coupled(const ModelParams& params, std::int64_t n0,
                                   const StopCondition& stop, RandomStream& rng);

// First local time at which the coordinate count is <= level; nullopt if the
// trajectory stopped before that happened.
std::optional<double> hitting_time(const CoupledTrajectory& trajectory, Coord coord,
                                   std::int64_t level);

// Piecewise-constant path of one birth/death coordinate. Produced either by
// the marginal sampler below or by projecting a coupled trajectory.
struct MarginalPath {
  ModelParams params;
  std::int64_t n0 = 0;
  double time_origin = 0.0;
  std::vector<double> times;          // jump times, strictly increasing
  std::vector<std::int64_t> levels;   // level just after each jump
  double stop_time = 0.0;
  bool absorbed = false;

  std::int64_t level_at(double local_time) const;  // right-continuous
  std::int64_t final_level() const { return levels.empty() ? n0 : levels.back(); }
};

MarginalPath coordinate_path(const CoupledTrajectory& trajectory, Coord coord);

struct MarginalStop {
  std::optional<std::int64_t> level;  // stop at first visit <= level
  std::optional<double> horizon;
  std::int64_t max_events = 100'000'000;
};

// Samples the asg coordinate's marginal law directly (one exponential clock
// per jump). Used by large campaigns where the coupling is not needed.
MarginalPath simulate_marginal(const ModelParams& params, std::int64_t n0,
                               const MarginalStop& stop, RandomStream& rng);

std::optional<double> marginal_hitting_time(const MarginalPath& path, std::int64_t level);

// Streaming form: visit(time, old_level, new_level) after every jump, no
// materialized path. Stops at the horizon or when the level target is hit.
template <class Visitor>
void simulate_marginal_visit(const ModelParams& params, std::int64_t n0,
                             const MarginalStop& stop, RandomStream& rng, Visitor&& visit) {
  if (n0 < 1) throw std::invalid_argument("simulate_marginal_visit: n0 must be >= 1");
  if (stop.level && *stop.level < 1)
    throw std::invalid_argument("simulate_marginal_visit: stop level must be >= 1");
  if (!stop.level && !stop.horizon)
    throw std::invalid_argument("simulate_marginal_visit: no stop condition");

  std::int64_t n = n0;
  double t = 0.0;
  std::int64_t event_count = 0;
  while (true) {
    if (stop.level && n <= *stop.level) return;
    const double down = params.death_rate(n);
    const double up = params.birth_rate(n);
    const double total = down + up;
    if (total <= 0.0) return;  // absorbed
    t += rng.exponential(total);
    if (stop.horizon && t > *stop.horizon) return;
    if (++event_count > stop.max_events)
      throw std::runtime_error("simulate_marginal_visit: event cap exceeded");
    const std::int64_t old_n = n;
    n += (rng.uniform01() * total < up) ? 1 : -1;
    visit(t, old_n, n);
  }
}

}  // namespace asg
