#pragma once

#include "firstocc/gridworld.hpp"

#include <vector>

namespace firstocc {

// Small hand-built rooms with fixed policy sets, used by the demo
// experiments and as test fixtures.
struct DemoRoom {
  Gridworld grid;
  std::vector<Policy> policies;
  std::vector<std::string> policy_names;
  int start = 0;
  int goal = 0;
};

// 3x3 open room, two policies: a slow one that keeps cycling through the
// goal after first reaching it, and a fast one that passes through the goal
// once and parks in a corner. Orders the slow policy first.
DemoRoom two_policy_room(double gamma = 0.95);

// 6x6 open room, three policies: a lone wall-hugging policy that reaches the
// goal by itself, plus "right" and "up" policies that only reach it when
// stitched together.
DemoRoom three_policy_room(double gamma = 0.95);

}  // namespace firstocc
