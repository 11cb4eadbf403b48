#include "firstocc/exploration_env.hpp"

#include <fstream>
#include <sstream>

namespace firstocc {

namespace {

// Swim-upstream chain: the left action always succeeds, the right action
// mostly stays put. A small reward sits at the easy end, a large one at the
// hard end.
const std::string kRiverswimTable = R"(name: riverswim
states: 6
actions: 2
gamma: 0.95
start: 1:0.5 2:0.5
t 0 0 -> 0:1
t 1 0 -> 0:1
t 2 0 -> 1:1
t 3 0 -> 2:1
t 4 0 -> 3:1
t 5 0 -> 4:1
t 0 1 -> 0:0.7 1:0.3
t 1 1 -> 0:0.1 1:0.6 2:0.3
t 2 1 -> 1:0.1 2:0.6 3:0.3
t 3 1 -> 2:0.1 3:0.6 4:0.3
t 4 1 -> 3:0.1 4:0.6 5:0.3
t 5 1 -> 4:0.4 5:0.6
r 0 5
r 5 10000
)";

// Hub with six arms: arm k is entered from the hub with probability p_k
// under action k, and action k keeps the agent inside arm k. Any other
// action returns to the hub. Entry probabilities fall as arm rewards rise.
const std::string kSixarmsTable = R"(name: sixarms
states: 7
actions: 6
gamma: 0.95
start: 0:1
t 0 0 -> 1:1
t 0 1 -> 0:0.85 2:0.15
t 0 2 -> 0:0.9 3:0.1
t 0 3 -> 0:0.95 4:0.05
t 0 4 -> 0:0.97 5:0.03
t 0 5 -> 0:0.99 6:0.01
t 1 0 -> 1:1
t 1 1 -> 0:1
t 1 2 -> 0:1
t 1 3 -> 0:1
t 1 4 -> 0:1
t 1 5 -> 0:1
t 2 0 -> 0:1
t 2 1 -> 2:1
t 2 2 -> 0:1
t 2 3 -> 0:1
t 2 4 -> 0:1
t 2 5 -> 0:1
t 3 0 -> 0:1
t 3 1 -> 0:1
t 3 2 -> 3:1
t 3 3 -> 0:1
t 3 4 -> 0:1
t 3 5 -> 0:1
t 4 0 -> 0:1
t 4 1 -> 0:1
t 4 2 -> 0:1
t 4 3 -> 4:1
t 4 4 -> 0:1
t 4 5 -> 0:1
t 5 0 -> 0:1
t 5 1 -> 0:1
t 5 2 -> 0:1
t 5 3 -> 0:1
t 5 4 -> 5:1
t 5 5 -> 0:1
t 6 0 -> 0:1
t 6 1 -> 0:1
t 6 2 -> 0:1
t 6 3 -> 0:1
t 6 4 -> 0:1
t 6 5 -> 6:1
r 1 50
r 2 133
r 3 300
r 4 800
r 5 1660
r 6 6000
)";

}  // namespace

TabularMdp parse_exploration_env(const std::string& text) {
  TabularMdp mdp;
  int states = -1, actions = -1;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == ';' || line[0] == '%') continue;
    std::istringstream ls(line);
    std::string tok;
    ls >> tok;
    if (tok == "name:") {
      continue;
    } else if (tok == "states:") {
      ls >> states;
      require(states >= 1, "exploration env: states must be positive");
    } else if (tok == "actions:") {
      ls >> actions;
      require(actions >= 1, "exploration env: actions must be positive");
      require(states >= 1, "exploration env: states must precede actions");
      mdp.num_states = states;
      mdp.num_actions = actions;
      mdp.transition.assign(actions, Matrix::Zero(states, states));
      mdp.reward = Vector::Zero(states);
      mdp.initial_dist = Vector::Zero(states);
    } else if (tok == "gamma:") {
      ls >> mdp.gamma;
    } else if (tok == "start:") {
      std::string entry;
      while (ls >> entry) {
        const auto colon = entry.find(':');
        require(colon != std::string::npos, "exploration env: malformed start entry");
        mdp.initial_dist[std::stoi(entry.substr(0, colon))] = std::stod(entry.substr(colon + 1));
      }
    } else if (tok == "t") {
      int s, a;
      std::string arrow;
      ls >> s >> a >> arrow;
      require(arrow == "->", "exploration env: malformed transition line");
      std::string entry;
      while (ls >> entry) {
        const auto colon = entry.find(':');
        require(colon != std::string::npos, "exploration env: malformed transition entry");
        mdp.transition[a](s, std::stoi(entry.substr(0, colon))) = std::stod(entry.substr(colon + 1));
      }
    } else if (tok == "r") {
      int s;
      double r;
      ls >> s >> r;
      mdp.reward[s] = r;
    } else if (!tok.empty()) {
      throw std::invalid_argument("exploration env: unknown directive '" + tok + "'");
    }
  }
  mdp.validate();
  return mdp;
}

TabularMdp load_exploration_env(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("exploration env: cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_exploration_env(buf.str());
}

const std::string& exploration_env_table(const std::string& name) {
  if (name == "riverswim") return kRiverswimTable;
  if (name == "sixarms") return kSixarmsTable;
  throw std::invalid_argument("exploration env: unknown name '" + name + "'");
}

TabularMdp build_exploration_env(const std::string& name) {
  return parse_exploration_env(exploration_env_table(name));
}

}  // namespace firstocc
