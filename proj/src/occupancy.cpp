#include "firstocc/occupancy.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace firstocc {

OccupancyMatrix OccupancyMatrix::fr_initial(int num_states, double gamma) {
  return {OccupancyKind::FR, gamma, false, {Matrix::Identity(num_states, num_states)}};
}

OccupancyMatrix OccupancyMatrix::sr_initial(int num_states, double gamma, bool identity) {
  Matrix m = Matrix::Zero(num_states, num_states);
  if (identity) m.diagonal().setOnes();
  return {OccupancyKind::SR, gamma, false, {std::move(m)}};
}

OccupancyMatrix fr_dp(const TabularMdp& mdp, const Policy& pi, double tol) {
  require(tol > 0.0, "fr_dp: tol must be positive");
  const Matrix p = policy_matrix(mdp, pi);
  const int n = mdp.num_states;
  Matrix f = Matrix::Identity(n, n);
  // Contraction guarantees convergence within ceil(log(tol)/log(gamma)) sweeps.
  const int max_sweeps =
      mdp.gamma == 0.0 ? 1
                       : static_cast<int>(std::ceil(std::log(tol) / std::log(mdp.gamma))) + 2;
  for (int k = 0; k < std::max(max_sweeps, 1); ++k) {
    Matrix next = fr_bellman_apply(f, p, mdp.gamma);
    const double change = (next - f).cwiseAbs().maxCoeff();
    f = std::move(next);
    if (change < tol) break;
  }
  return {OccupancyKind::FR, mdp.gamma, false, {std::move(f)}};
}

OccupancyMatrix sr_dp(const TabularMdp& mdp, const Policy& pi, double tol) {
  require(tol > 0.0, "sr_dp: tol must be positive");
  const Matrix p = policy_matrix(mdp, pi);
  const int n = mdp.num_states;
  Matrix m;
  if (n <= 2000) {
    m = (Matrix::Identity(n, n) - mdp.gamma * p).partialPivLu().solve(Matrix::Identity(n, n));
  } else {
    m = Matrix::Identity(n, n);
    while (true) {
      Matrix next = Matrix::Identity(n, n) + mdp.gamma * (p * m);
      const double change = (next - m).cwiseAbs().maxCoeff();
      m = std::move(next);
      if (change < tol) break;
    }
  }
  return {OccupancyKind::SR, mdp.gamma, false, {std::move(m)}};
}

namespace {

Matrix mix_over_actions(const std::vector<Matrix>& slabs, const Policy& pi) {
  const int n = static_cast<int>(slabs[0].rows());
  Matrix mixed = Matrix::Zero(n, n);
  for (int a = 0; a < static_cast<int>(slabs.size()); ++a) {
    for (int s = 0; s < n; ++s) {
      const double w = pi.prob(s, a);
      if (w != 0.0) mixed.row(s) += w * slabs[a].row(s);
    }
  }
  return mixed;
}

}  // namespace

OccupancyMatrix fr_dp_actions(const TabularMdp& mdp, const Policy& pi, double tol) {
  require(tol > 0.0, "fr_dp_actions: tol must be positive");
  const int n = mdp.num_states;
  std::vector<Matrix> slabs(mdp.num_actions, Matrix::Identity(n, n));
  const int max_sweeps =
      mdp.gamma == 0.0 ? 1
                       : static_cast<int>(std::ceil(std::log(tol) / std::log(mdp.gamma))) + 2;
  for (int k = 0; k < std::max(max_sweeps, 1); ++k) {
    const Matrix mixed = mix_over_actions(slabs, pi);
    double change = 0.0;
    for (int a = 0; a < mdp.num_actions; ++a) {
      Matrix next = mdp.gamma * (mdp.transition[a] * mixed);
      next.diagonal().setOnes();
      change = std::max(change, (next - slabs[a]).cwiseAbs().maxCoeff());
      slabs[a] = std::move(next);
    }
    if (change < tol) break;
  }
  return {OccupancyKind::FR, mdp.gamma, true, std::move(slabs)};
}

OccupancyMatrix sr_dp_actions(const TabularMdp& mdp, const Policy& pi) {
  const Matrix m_pi = sr_dp(mdp, pi).matrix();
  const int n = mdp.num_states;
  std::vector<Matrix> slabs(mdp.num_actions);
  for (int a = 0; a < mdp.num_actions; ++a) {
    slabs[a] = Matrix::Identity(n, n) + mdp.gamma * (mdp.transition[a] * m_pi);
  }
  return {OccupancyKind::SR, mdp.gamma, true, std::move(slabs)};
}

Vector fr_td_update(Matrix& F, int s, int s_next, double gamma, double alpha) {
  require(alpha > 0.0 && alpha <= 1.0, "fr_td_update: alpha must lie in (0, 1]");
  Vector target = gamma * F.row(s_next).transpose();
  target[s] = 1.0;
  Vector delta = target - F.row(s).transpose();
  F.row(s) += alpha * delta.transpose();
  return delta;
}

Vector fr_td_update(OccupancyMatrix& rep, int s, int s_next, double alpha) {
  require(rep.kind == OccupancyKind::FR && !rep.action_conditioned,
          "fr_td_update: expected a state-indexed FR");
  return fr_td_update(rep.matrix(), s, s_next, rep.gamma, alpha);
}

Vector sr_td_update(Matrix& M, int s, int s_next, double gamma, double alpha) {
  require(alpha > 0.0 && alpha <= 1.0, "sr_td_update: alpha must lie in (0, 1]");
  Vector delta = gamma * M.row(s_next).transpose();
  delta[s] += 1.0;
  delta -= M.row(s).transpose();
  M.row(s) += alpha * delta.transpose();
  return delta;
}

Vector sr_td_update(OccupancyMatrix& rep, int s, int s_next, double alpha) {
  require(rep.kind == OccupancyKind::SR && !rep.action_conditioned,
          "sr_td_update: expected a state-indexed SR");
  return sr_td_update(rep.matrix(), s, s_next, rep.gamma, alpha);
}

Vector sr_td_update(OccupancyMatrix& rep, int s, int a, int s_next, int a_next, double alpha) {
  require(rep.action_conditioned, "sr_td_update: representation must be action-conditioned");
  Vector delta = rep.values[a_next].row(s_next).transpose() * rep.gamma;
  delta[s] += 1.0;
  delta -= rep.values[a].row(s).transpose();
  rep.values[a].row(s) += alpha * delta.transpose();
  return delta;
}

Vector evaluate_with_rep(const OccupancyMatrix& rep, const Eigen::Ref<const Vector>& r) {
  require(!rep.action_conditioned, "evaluate_with_rep: expected a state-indexed representation");
  require(r.size() == rep.num_states(), "evaluate_with_rep: reward size mismatch");
  return rep.matrix() * r;
}

Matrix evaluate_with_rep_actions(const OccupancyMatrix& rep, const Eigen::Ref<const Vector>& r) {
  require(rep.action_conditioned, "evaluate_with_rep_actions: expected action-conditioned");
  require(r.size() == rep.num_states(), "evaluate_with_rep_actions: reward size mismatch");
  Matrix q(rep.num_states(), rep.num_actions());
  for (int a = 0; a < rep.num_actions(); ++a) q.col(a) = rep.matrix(a) * r;
  return q;
}

GpiChoice gpi_select(const std::vector<OccupancyMatrix>& reps, const Eigen::Ref<const Vector>& r,
                     int s) {
  require(!reps.empty(), "gpi_select: empty policy set");
  GpiChoice best;
  bool first = true;
  for (int p = 0; p < static_cast<int>(reps.size()); ++p) {
    const OccupancyMatrix& rep = reps[p];
    require(rep.action_conditioned, "gpi_select: representations must be action-conditioned");
    for (int a = 0; a < rep.num_actions(); ++a) {
      const double value = rep.matrix(a).row(s).dot(r);
      if (first || value > best.value) {
        best = {a, p, value};
        first = false;
      }
    }
  }
  return best;
}

double fr_norm(const OccupancyMatrix& rep, int s) {
  require(rep.kind == OccupancyKind::FR, "fr_norm: representation must be an FR");
  require(!rep.action_conditioned, "fr_norm: expected a state-indexed representation");
  return rep.matrix().row(s).lpNorm<1>();
}

double fr_norm_bound(int num_states, double gamma) {
  if (gamma == 0.0) return 1.0;
  return (1.0 - std::pow(gamma, num_states + 1)) / (1.0 - gamma);
}

Vector first_passage_oracle_all(const TabularMdp& mdp, const Policy& pi, int target) {
  const Matrix p = policy_matrix(mdp, pi);
  const int n = mdp.num_states;
  // h = gamma * P h away from the target, h(target) = 1. Never singular for
  // gamma < 1: the off-target block has spectral radius <= gamma.
  Matrix a = Matrix::Identity(n, n) - mdp.gamma * p;
  a.row(target).setZero();
  a(target, target) = 1.0;
  Vector b = Vector::Zero(n);
  b[target] = 1.0;
  return a.partialPivLu().solve(b);
}

double first_passage_oracle(const TabularMdp& mdp, const Policy& pi, int s, int target) {
  return first_passage_oracle_all(mdp, pi, target)[s];
}

void save_occupancy(const OccupancyMatrix& rep, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_occupancy: cannot open " + path);
  char header[160];
  std::snprintf(header, sizeof(header),
                "# occupancy kind=%s gamma=%.17g states=%d actions=%d action_conditioned=%d\n",
                rep.kind == OccupancyKind::FR ? "FR" : "SR", rep.gamma, rep.num_states(),
                static_cast<int>(rep.values.size()), rep.action_conditioned ? 1 : 0);
  out << header;
  char buf[32];
  for (const Matrix& slab : rep.values) {
    for (int i = 0; i < slab.rows(); ++i) {
      for (int j = 0; j < slab.cols(); ++j) {
        std::snprintf(buf, sizeof(buf), "%.17g", slab(i, j));
        out << buf << (j + 1 == slab.cols() ? '\n' : ',');
      }
    }
  }
  if (!out) throw std::runtime_error("save_occupancy: write failed for " + path);
}

OccupancyMatrix load_occupancy(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_occupancy: cannot open " + path);
  std::string header;
  std::getline(in, header);
  char kind_buf[8] = {0};
  double gamma = 0.0;
  int states = 0, slabs = 0, conditioned = 0;
  if (std::sscanf(header.c_str(),
                  "# occupancy kind=%7s gamma=%lg states=%d actions=%d action_conditioned=%d",
                  kind_buf, &gamma, &states, &slabs, &conditioned) != 5) {
    throw std::runtime_error("load_occupancy: malformed header in " + path);
  }
  OccupancyMatrix rep;
  rep.kind = std::string(kind_buf) == "FR" ? OccupancyKind::FR : OccupancyKind::SR;
  rep.gamma = gamma;
  rep.action_conditioned = conditioned != 0;
  rep.values.assign(slabs, Matrix::Zero(states, states));
  std::string line;
  for (Matrix& slab : rep.values) {
    for (int i = 0; i < states; ++i) {
      if (!std::getline(in, line)) throw std::runtime_error("load_occupancy: truncated " + path);
      std::istringstream ls(line);
      std::string cellv;
      for (int j = 0; j < states; ++j) {
        if (!std::getline(ls, cellv, ',')) {
          throw std::runtime_error("load_occupancy: short row in " + path);
        }
        slab(i, j) = std::stod(cellv);
      }
    }
  }
  return rep;
}

}  // namespace firstocc
