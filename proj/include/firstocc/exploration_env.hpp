#pragma once

#include "firstocc/tabular_mdp.hpp"

#include <string>

namespace firstocc {

// Hard-exploration tabular tasks, built from parameter tables in the
// structured-text schema below. The canonical tables are embedded verbatim
// (and shipped under data/ for auditing):
//
//   name: riverswim
//   states: 6
//   actions: 2
//   gamma: 0.95
//   start: 1:0.5 2:0.5
//   t <state> <action> -> <next>:<prob> [<next>:<prob> ...]
//   r <state> <reward>
//
// Rewards are state-based and paid on arrival.
TabularMdp parse_exploration_env(const std::string& text);
TabularMdp load_exploration_env(const std::string& path);

// name is "riverswim" or "sixarms"; anything else throws std::invalid_argument.
TabularMdp build_exploration_env(const std::string& name);

// The embedded canonical parameter table for a task name.
const std::string& exploration_env_table(const std::string& name);

}  // namespace firstocc
