#include "firstocc/exploration_env.hpp"
#include "firstocc/gridworld.hpp"

#include <doctest.h>

#include <deque>
#include <fstream>

using namespace firstocc;

namespace {

// Reachability over the union of single moves.
int reachable_count(const Gridworld& grid, int from) {
  std::vector<bool> seen(grid.mdp.num_states, false);
  std::deque<int> queue{from};
  seen[from] = true;
  int count = 1;
  while (!queue.empty()) {
    const int s = queue.front();
    queue.pop_front();
    for (int a = 0; a < grid.mdp.num_actions; ++a) {
      for (int t = 0; t < grid.mdp.num_states; ++t) {
        if (grid.mdp.transition[a](s, t) > 0.0 && !seen[t]) {
          seen[t] = true;
          ++count;
          queue.push_back(t);
        }
      }
    }
  }
  return count;
}

}  // namespace

TEST_CASE("four_rooms: canonical layout, parameters, reachability") {
  const Gridworld grid = four_rooms();
  CHECK(grid.mdp.num_states == 104);  // 121 cells minus 17 walls
  CHECK(grid.mdp.num_actions == 4);
  CHECK(grid.mdp.gamma == doctest::Approx(0.95));
  CHECK(grid.spec.goal_reward == doctest::Approx(50.0));
  CHECK(grid.spec.wall_penalty == doctest::Approx(-1.0));
  CHECK(grid.cell_of(*grid.start_state) == Cell{10, 0});
  CHECK(reachable_count(grid, *grid.start_state) == grid.mdp.num_states);

  // Deterministic grid: every probability is 0 or 1.
  for (const Matrix& p : grid.mdp.transition) {
    CHECK(((p.array() == 0.0) || (p.array() == 1.0)).all());
  }
}

TEST_CASE("escape arena: eight actions, barrier, reachability") {
  const Gridworld arena = escape_arena(true);
  CHECK(arena.mdp.num_actions == 8);
  CHECK(arena.mdp.num_states == 25 * 25 - 13);
  CHECK(arena.cell_of(*arena.start_state) == Cell{0, 12});
  CHECK(arena.cell_of(arena.goal_states[0]) == Cell{24, 12});
  CHECK(reachable_count(arena, *arena.start_state) == arena.mdp.num_states);

  const Gridworld open = escape_arena(false);
  CHECK(open.mdp.num_states == 625);
}

TEST_CASE("build_gridworld: goal in a wall is an invalid spec") {
  GridSpec spec;
  spec.width = 3;
  spec.height = 3;
  spec.walls = {Cell{1, 1}};
  CHECK_THROWS_AS(build_gridworld(spec, {Cell{1, 1}}, 0.9), std::invalid_argument);
  CHECK_THROWS_AS(build_gridworld(spec, {Cell{5, 5}}, 0.9), std::invalid_argument);
}

TEST_CASE("build_gridworld: degenerate single cell is absorbing") {
  GridSpec spec;
  spec.width = 1;
  spec.height = 1;
  const Gridworld grid = build_gridworld(spec, {Cell{0, 0}}, 0.9);
  CHECK(grid.mdp.num_states == 1);
  for (const Matrix& p : grid.mdp.transition) CHECK(p(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("build_gridworld: blocked moves stay and pay the wall penalty") {
  GridSpec spec;
  spec.width = 2;
  spec.height = 1;
  spec.wall_penalty = -1.0;
  spec.goal_reward = 50.0;
  const Gridworld grid = build_gridworld(spec, {Cell{0, 1}}, 0.9);
  Rng rng(5);
  const auto bump = grid.sample_step(grid.state_of({0, 0}), /*up*/ 0, rng);
  CHECK(bump.bumped);
  CHECK(bump.reward == doctest::Approx(-1.0));
  const auto move = grid.sample_step(grid.state_of({0, 0}), /*right*/ 1, rng);
  CHECK_FALSE(move.bumped);
  CHECK(move.reward == doctest::Approx(50.0));  // goal arrival replaces the step reward
}

TEST_CASE("slip spreads probability over reachable neighbors") {
  GridSpec spec;
  spec.width = 3;
  spec.height = 3;
  spec.slip = 0.2;
  const Gridworld grid = build_gridworld(spec, {}, 0.9);
  const int center = grid.state_of({1, 1});
  const Matrix& up = grid.mdp.transition[0];
  CHECK(up(center, grid.state_of({0, 1})) == doctest::Approx(0.8 + 0.05));
  CHECK(up(center, grid.state_of({1, 0})) == doctest::Approx(0.05));
  CHECK(up(center, grid.state_of({1, 2})) == doctest::Approx(0.05));
  CHECK(up(center, grid.state_of({2, 1})) == doctest::Approx(0.05));
  CHECK(up.row(center).sum() == doctest::Approx(1.0));
}

TEST_CASE("grid map text round-trips the builders") {
  const Gridworld grid = four_rooms(0.95, 0.1);
  const Gridworld parsed = parse_grid_map(grid_map_text(grid));
  CHECK(parsed.mdp.num_states == grid.mdp.num_states);
  CHECK(parsed.spec.slip == doctest::Approx(grid.spec.slip));
  CHECK(parsed.cell_of(*parsed.start_state) == grid.cell_of(*grid.start_state));
  for (int a = 0; a < grid.mdp.num_actions; ++a) {
    CHECK(parsed.mdp.transition[a].isApprox(grid.mdp.transition[a], 1e-12));
  }
}

TEST_CASE("checked-in fixture files match the embedded builders") {
  const std::string dir = FIRSTOCC_DATA_DIR;
  const Gridworld rooms = load_grid_map(dir + "/four_rooms.map");
  const Gridworld builtin = four_rooms();
  CHECK(rooms.mdp.num_states == builtin.mdp.num_states);
  for (int a = 0; a < builtin.mdp.num_actions; ++a) {
    CHECK(rooms.mdp.transition[a].isApprox(builtin.mdp.transition[a], 1e-12));
  }

  const Gridworld arena = load_grid_map(dir + "/escape_arena.map");
  CHECK(arena.mdp.num_states == escape_arena(true).mdp.num_states);

  for (const std::string name : {"riverswim", "sixarms"}) {
    const TabularMdp from_file = load_exploration_env(dir + "/" + name + ".env");
    const TabularMdp builder = build_exploration_env(name);
    CHECK(from_file.num_states == builder.num_states);
    for (int a = 0; a < builder.num_actions; ++a) {
      CHECK(from_file.transition[a].isApprox(builder.transition[a], 1e-12));
    }
    CHECK(from_file.reward.isApprox(builder.reward));
  }
}
