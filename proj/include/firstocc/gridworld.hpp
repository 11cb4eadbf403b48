#pragma once

#include "firstocc/tabular_mdp.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace firstocc {

struct Cell {
  int row = 0;
  int col = 0;
  friend bool operator==(const Cell&, const Cell&) = default;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

enum class ActionSet { FourConnected, EightConnected };

// Action order is fixed so policy indices are stable across the code base:
// up, right, down, left [, up-right, down-right, down-left, up-left].
const std::vector<Cell>& action_offsets(ActionSet set);
std::string action_name(ActionSet set, int a);
std::optional<int> action_index(ActionSet set, const std::string& name);

struct GridSpec {
  int width = 0;
  int height = 0;
  std::set<Cell> walls;
  ActionSet action_set = ActionSet::FourConnected;
  double slip = 0.0;          // probability of a uniformly random adjacent move
  double wall_penalty = 0.0;  // reward for a blocked step
  double goal_reward = 0.0;   // reward on arrival at a goal cell (replaces step reward)
  double step_reward = 0.0;
};

// A grid MDP together with its cell <-> state index maps. States are indexed
// row-major over non-wall cells; walls are not states.
struct Gridworld {
  GridSpec spec;
  TabularMdp mdp;
  std::vector<Cell> state_to_cell;
  std::vector<int> cell_to_state;  // width*height entries, -1 for walls
  std::vector<int> goal_states;
  std::optional<int> start_state;

  int state_of(Cell c) const;
  Cell cell_of(int s) const { return state_to_cell[s]; }
  bool in_bounds(Cell c) const;
  bool is_wall(Cell c) const { return spec.walls.count(c) > 0; }
  bool is_goal(int s) const;

  // Realized step reward: goal arrivals pay goal_reward, blocked moves pay
  // wall_penalty, everything else step_reward. The MDP's reward vector only
  // carries the goal component (state-based rewards).
  struct GridStep {
    int next_state;
    double reward;
    bool bumped;
  };
  GridStep sample_step(int s, int a, Rng& rng) const;
};

// Builds the grid MDP. Throws std::invalid_argument for goals inside walls
// or outside the grid.
Gridworld build_gridworld(const GridSpec& spec, const std::vector<Cell>& goals, double gamma,
                          std::optional<Cell> start = std::nullopt);

// The classic 11x11 four-room layout: four-connected, goal +50, wall bump -1.
Gridworld four_rooms(double gamma = 0.95, double slip = 0.0,
                     const std::vector<Cell>& goals = {});

// 25x25 eight-connected arena with an optional central barrier spanning half
// the grid width. Start at top center, shelter (goal) at bottom center.
Gridworld escape_arena(bool barrier, double gamma = 0.99);

// ASCII map format: optional "key: value" header lines (actions, slip,
// wall_penalty, goal_reward, step_reward, gamma) followed by the map rows
// ('#' wall, '.' free, 'S' start, 'G' goal).
Gridworld parse_grid_map(const std::string& text);
Gridworld load_grid_map(const std::string& path);
std::string grid_map_text(const Gridworld& grid);

}  // namespace firstocc
