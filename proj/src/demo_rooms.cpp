#include "firstocc/demo_rooms.hpp"

#include <functional>

namespace firstocc {

namespace {

Policy cell_policy(const Gridworld& grid, const std::function<int(Cell)>& act) {
  std::vector<int> actions(grid.mdp.num_states);
  for (int s = 0; s < grid.mdp.num_states; ++s) actions[s] = act(grid.cell_of(s));
  return Policy::deterministic(std::move(actions), grid.mdp.num_actions);
}

constexpr int kUp = 0, kRight = 1, kDown = 2, kLeft = 3;

}  // namespace

DemoRoom two_policy_room(double gamma) {
  GridSpec spec;
  spec.width = 3;
  spec.height = 3;
  spec.goal_reward = 1.0;
  DemoRoom room;
  room.grid = build_gridworld(spec, {Cell{1, 2}}, gamma, Cell{1, 0});
  room.start = *room.grid.start_state;
  room.goal = room.grid.goal_states[0];

  // Reaches the goal in four steps via the top row, then bounces between
  // (0,2) and the goal forever.
  Policy slow = cell_policy(room.grid, [](Cell c) {
    if (c.col == 0 && c.row > 0) return kUp;
    if (c.row == 0 && c.col < 2) return kRight;
    if (c == Cell{0, 2}) return kDown;
    if (c == Cell{1, 2}) return kUp;
    if (c == Cell{1, 1}) return kUp;
    return kUp;  // bottom row heads back toward the loop
  });

  // Reaches the goal in two steps, exits downward and parks in the corner.
  Policy fast = cell_policy(room.grid, [](Cell c) {
    if (c.row == 0) return kDown;
    if (c.row == 1 && c.col < 2) return kRight;
    if (c == Cell{1, 2}) return kDown;
    if (c == Cell{2, 2}) return kDown;  // blocked: stays put
    return kUp;
  });

  room.policies = {std::move(slow), std::move(fast)};
  room.policy_names = {"pi-slow-revisit", "pi-fast-once"};
  return room;
}

DemoRoom three_policy_room(double gamma) {
  GridSpec spec;
  spec.width = 6;
  spec.height = 6;
  spec.goal_reward = 1.0;
  // Shelf jutting out of the left wall: climbing the left column stalls
  // below it, so the only one-switch route is right along the bottom wall,
  // then up the right wall.
  spec.walls = {Cell{2, 0}, Cell{2, 1}, Cell{2, 2}, Cell{2, 3}};
  DemoRoom room;
  room.grid = build_gridworld(spec, {Cell{0, 5}}, gamma, Cell{5, 0});
  room.start = *room.grid.start_state;
  room.goal = room.grid.goal_states[0];

  // Threads the shelf gap with a dip near the right wall: twelve steps from
  // the start, but it reaches the goal alone.
  Policy solo = cell_policy(room.grid, [](Cell c) {
    if (c == Cell{5, 0} || c == Cell{4, 0}) return kUp;
    if (c.row == 3 && c.col <= 3) return kRight;
    if (c == Cell{3, 4}) return kDown;
    if (c == Cell{4, 4}) return kRight;
    if (c.col == 5 && c.row >= 1 && c.row <= 4) return kUp;
    return kLeft;
  });

  Policy right = cell_policy(room.grid, [](Cell) { return kRight; });
  Policy up = cell_policy(room.grid, [](Cell) { return kUp; });

  room.policies = {std::move(solo), std::move(right), std::move(up)};
  room.policy_names = {"pi-wall-hugger", "pi-right", "pi-up"};
  return room;
}

}  // namespace firstocc
