#include "firstocc/gridworld.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace firstocc {

namespace {

const std::vector<Cell> kFourOffsets = {{-1, 0}, {0, 1}, {1, 0}, {0, -1}};
const std::vector<Cell> kEightOffsets = {{-1, 0}, {0, 1}, {1, 0}, {0, -1},
                                         {-1, 1}, {1, 1}, {1, -1}, {-1, -1}};
const std::vector<std::string> kFourNames = {"up", "right", "down", "left"};
const std::vector<std::string> kEightNames = {"up",       "right",      "down",      "left",
                                              "up-right", "down-right", "down-left", "up-left"};

}  // namespace

const std::vector<Cell>& action_offsets(ActionSet set) {
  return set == ActionSet::FourConnected ? kFourOffsets : kEightOffsets;
}

std::string action_name(ActionSet set, int a) {
  const auto& names = set == ActionSet::FourConnected ? kFourNames : kEightNames;
  require(a >= 0 && a < static_cast<int>(names.size()), "action_name: index out of range");
  return names[a];
}

std::optional<int> action_index(ActionSet set, const std::string& name) {
  const auto& names = set == ActionSet::FourConnected ? kFourNames : kEightNames;
  for (int i = 0; i < static_cast<int>(names.size()); ++i) {
    if (names[i] == name) return i;
  }
  return std::nullopt;
}

int Gridworld::state_of(Cell c) const {
  require(in_bounds(c), "gridworld: cell out of bounds");
  const int s = cell_to_state[c.row * spec.width + c.col];
  require(s >= 0, "gridworld: cell is a wall");
  return s;
}

bool Gridworld::in_bounds(Cell c) const {
  return c.row >= 0 && c.row < spec.height && c.col >= 0 && c.col < spec.width;
}

bool Gridworld::is_goal(int s) const {
  return std::find(goal_states.begin(), goal_states.end(), s) != goal_states.end();
}

Gridworld::GridStep Gridworld::sample_step(int s, int a, Rng& rng) const {
  const int next = rng.categorical(mdp.transition[a].row(s));
  const bool bumped = next == s;
  double reward;
  if (is_goal(next)) {
    reward = spec.goal_reward;
  } else if (bumped) {
    reward = spec.wall_penalty;
  } else {
    reward = spec.step_reward;
  }
  return {next, reward, bumped};
}

Gridworld build_gridworld(const GridSpec& spec, const std::vector<Cell>& goals, double gamma,
                          std::optional<Cell> start) {
  require(spec.width >= 1 && spec.height >= 1, "gridworld: dimensions must be positive");
  require(spec.slip >= 0.0 && spec.slip <= 1.0, "gridworld: slip must lie in [0, 1]");
  for (const Cell& w : spec.walls) {
    require(w.row >= 0 && w.row < spec.height && w.col >= 0 && w.col < spec.width,
            "gridworld: wall out of bounds");
  }

  Gridworld grid;
  grid.spec = spec;
  grid.cell_to_state.assign(spec.width * spec.height, -1);
  for (int r = 0; r < spec.height; ++r) {
    for (int c = 0; c < spec.width; ++c) {
      const Cell cell{r, c};
      if (spec.walls.count(cell)) continue;
      grid.cell_to_state[r * spec.width + c] = static_cast<int>(grid.state_to_cell.size());
      grid.state_to_cell.push_back(cell);
    }
  }
  const int n = static_cast<int>(grid.state_to_cell.size());
  require(n >= 1, "gridworld: no free cells");

  for (const Cell& g : goals) {
    require(g.row >= 0 && g.row < spec.height && g.col >= 0 && g.col < spec.width,
            "gridworld: goal out of bounds");
    require(!spec.walls.count(g), "gridworld: goal inside wall");
    grid.goal_states.push_back(grid.cell_to_state[g.row * spec.width + g.col]);
  }
  if (start) grid.start_state = grid.state_of(*start);

  const auto& offsets = action_offsets(spec.action_set);
  const int num_actions = static_cast<int>(offsets.size());

  auto resolve = [&](Cell from, Cell offset) -> int {
    const Cell to{from.row + offset.row, from.col + offset.col};
    if (to.row < 0 || to.row >= spec.height || to.col < 0 || to.col >= spec.width ||
        spec.walls.count(to)) {
      return grid.cell_to_state[from.row * spec.width + from.col];  // blocked: stay
    }
    return grid.cell_to_state[to.row * spec.width + to.col];
  };

  TabularMdp mdp;
  mdp.num_states = n;
  mdp.num_actions = num_actions;
  mdp.gamma = gamma;
  mdp.transition.assign(num_actions, Matrix::Zero(n, n));

  for (int s = 0; s < n; ++s) {
    const Cell cell = grid.state_to_cell[s];
    std::vector<int> neighbors;
    for (const Cell& off : offsets) {
      const int t = resolve(cell, off);
      if (t != s) neighbors.push_back(t);
    }
    for (int a = 0; a < num_actions; ++a) {
      const int intended = resolve(cell, offsets[a]);
      Matrix& p = mdp.transition[a];
      p(s, intended) += 1.0 - spec.slip;
      if (neighbors.empty()) {
        p(s, s) += spec.slip;
      } else {
        const double w = spec.slip / neighbors.size();
        for (int t : neighbors) p(s, t) += w;
      }
    }
  }

  mdp.reward = Vector::Zero(n);
  for (int g : grid.goal_states) mdp.reward[g] = spec.goal_reward;
  mdp.initial_dist = Vector::Zero(n);
  if (grid.start_state) {
    mdp.initial_dist[*grid.start_state] = 1.0;
  } else {
    mdp.initial_dist.setConstant(1.0 / n);
  }
  mdp.validate();
  grid.mdp = std::move(mdp);
  return grid;
}

Gridworld four_rooms(double gamma, double slip, const std::vector<Cell>& goals) {
  GridSpec spec;
  spec.width = 11;
  spec.height = 11;
  spec.action_set = ActionSet::FourConnected;
  spec.slip = slip;
  spec.wall_penalty = -1.0;
  spec.goal_reward = 50.0;
  spec.step_reward = 0.0;
  // Vertical divider at column 5 with doorways at rows 2 and 9; horizontal
  // dividers at row 5 (left half, doorway col 1) and row 6 (right half,
  // doorway col 8).
  for (int r = 0; r < 11; ++r) {
    if (r == 2 || r == 9) continue;
    spec.walls.insert({r, 5});
  }
  for (int c = 0; c < 5; ++c) {
    if (c == 1) continue;
    spec.walls.insert({5, c});
  }
  for (int c = 6; c < 11; ++c) {
    if (c == 8) continue;
    spec.walls.insert({6, c});
  }
  return build_gridworld(spec, goals, gamma, Cell{10, 0});
}

Gridworld escape_arena(bool barrier, double gamma) {
  GridSpec spec;
  spec.width = 25;
  spec.height = 25;
  spec.action_set = ActionSet::EightConnected;
  spec.slip = 0.0;
  spec.wall_penalty = 0.0;
  spec.goal_reward = 1.0;
  spec.step_reward = 0.0;
  if (barrier) {
    // Half the grid width, centered: columns 6..18 of row 12.
    for (int c = 6; c <= 18; ++c) spec.walls.insert({12, c});
  }
  return build_gridworld(spec, {Cell{24, 12}}, gamma, Cell{0, 12});
}

Gridworld parse_grid_map(const std::string& text) {
  GridSpec spec;
  std::vector<std::string> rows;
  std::optional<Cell> start;
  std::vector<Cell> goals;
  double gamma = 0.95;

  std::istringstream in(text);
  std::string line;
  bool in_map = false;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty() || line[0] == ';') continue;
    const auto colon = line.find(':');
    if (!in_map && colon != std::string::npos && line.find_first_of("#.SG") > colon) {
      const std::string key = line.substr(0, colon);
      std::string value = line.substr(colon + 1);
      value.erase(0, value.find_first_not_of(' '));
      if (key == "actions") {
        require(value == "4" || value == "8", "grid map: actions must be 4 or 8");
        spec.action_set = value == "4" ? ActionSet::FourConnected : ActionSet::EightConnected;
      } else if (key == "slip") {
        spec.slip = std::stod(value);
      } else if (key == "wall_penalty") {
        spec.wall_penalty = std::stod(value);
      } else if (key == "goal_reward") {
        spec.goal_reward = std::stod(value);
      } else if (key == "step_reward") {
        spec.step_reward = std::stod(value);
      } else if (key == "gamma") {
        gamma = std::stod(value);
      } else {
        throw std::invalid_argument("grid map: unknown header key '" + key + "'");
      }
      continue;
    }
    in_map = true;
    rows.push_back(line);
  }
  require(!rows.empty(), "grid map: no map rows");
  spec.height = static_cast<int>(rows.size());
  spec.width = static_cast<int>(rows[0].size());
  for (int r = 0; r < spec.height; ++r) {
    require(static_cast<int>(rows[r].size()) == spec.width, "grid map: ragged rows");
    for (int c = 0; c < spec.width; ++c) {
      switch (rows[r][c]) {
        case '#': spec.walls.insert({r, c}); break;
        case '.': break;
        case 'S': start = Cell{r, c}; break;
        case 'G': goals.push_back({r, c}); break;
        default: throw std::invalid_argument("grid map: unknown cell character");
      }
    }
  }
  return build_gridworld(spec, goals, gamma, start);
}

Gridworld load_grid_map(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("grid map: cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_grid_map(buf.str());
}

std::string grid_map_text(const Gridworld& grid) {
  std::ostringstream out;
  const GridSpec& spec = grid.spec;
  out << "actions: " << (spec.action_set == ActionSet::FourConnected ? 4 : 8) << "\n";
  out << "slip: " << spec.slip << "\n";
  out << "wall_penalty: " << spec.wall_penalty << "\n";
  out << "goal_reward: " << spec.goal_reward << "\n";
  out << "step_reward: " << spec.step_reward << "\n";
  out << "gamma: " << grid.mdp.gamma << "\n";
  for (int r = 0; r < spec.height; ++r) {
    for (int c = 0; c < spec.width; ++c) {
      const Cell cell{r, c};
      char ch = '.';
      if (grid.is_wall(cell)) {
        ch = '#';
      } else {
        const int s = grid.cell_to_state[r * spec.width + c];
        if (grid.start_state && s == *grid.start_state) ch = 'S';
        if (grid.is_goal(s)) ch = 'G';
      }
      out << ch;
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace firstocc
