#pragma once

#include "firstocc/tabular_mdp.hpp"

#include <string>
#include <vector>

namespace firstocc {

enum class OccupancyKind { FR, SR };

// Per-policy occupancy values over state pairs (or state-action pairs when
// action-conditioned). FR entries are expected discounts at first visit;
// SR entries are expected cumulative discounted visit counts.
struct OccupancyMatrix {
  OccupancyKind kind = OccupancyKind::FR;
  double gamma = 0.0;
  bool action_conditioned = false;
  std::vector<Matrix> values;  // size 1 when state-indexed, one slab per action otherwise

  int num_states() const { return static_cast<int>(values.at(0).rows()); }
  int num_actions() const { return action_conditioned ? static_cast<int>(values.size()) : 1; }
  Matrix& matrix() { return values.at(0); }
  const Matrix& matrix() const { return values.at(0); }
  const Matrix& matrix(int a) const { return values.at(a); }

  static OccupancyMatrix fr_initial(int num_states, double gamma);  // identity
  static OccupancyMatrix sr_initial(int num_states, double gamma, bool identity = true);
};

// One step of the FR Bellman operator: diagonal forced to 1, off-diagonal
// (s, s') = gamma * (P_pi * F)(s, s'). Accepts any dense expressions.
template <typename DerivedF, typename DerivedP>
Matrix fr_bellman_apply(const Eigen::MatrixBase<DerivedF>& F,
                        const Eigen::MatrixBase<DerivedP>& P_pi, double gamma) {
  require(F.rows() == F.cols() && P_pi.rows() == F.rows() && P_pi.cols() == F.rows(),
          "fr_bellman_apply: shape mismatch");
  Matrix out = gamma * (P_pi * F);
  out.diagonal().setOnes();
  return out;
}

// Iterates the FR operator from the identity until the largest entry change
// drops below tol. Always converges for gamma < 1.
OccupancyMatrix fr_dp(const TabularMdp& mdp, const Policy& pi, double tol = 1e-9);

// SR fixed point M = (I - gamma * P_pi)^-1, solved directly for small state
// spaces (<= 2000) and iteratively above that.
OccupancyMatrix sr_dp(const TabularMdp& mdp, const Policy& pi, double tol = 1e-9);

// Action-conditioned fixed points: slab a holds F(s, a, s') / M(s, a, s').
OccupancyMatrix fr_dp_actions(const TabularMdp& mdp, const Policy& pi, double tol = 1e-9);
OccupancyMatrix sr_dp_actions(const TabularMdp& mdp, const Policy& pi);

// Full-row TD update for the FR from one transition: for every target t,
// delta(t) = 1(s==t) + gamma * (1 - 1(s==t)) * F(s_next, t) - F(s, t).
// Returns the update's TD error row (before the alpha step).
Vector fr_td_update(Matrix& F, int s, int s_next, double gamma, double alpha);
Vector fr_td_update(OccupancyMatrix& rep, int s, int s_next, double alpha);

// Full-row TD update for a state-indexed SR:
// delta = onehot(s) + gamma * M(s_next, .) - M(s, .).
Vector sr_td_update(Matrix& M, int s, int s_next, double gamma, double alpha);
Vector sr_td_update(OccupancyMatrix& rep, int s, int s_next, double alpha);

// Action-conditioned SR TD update bootstrapping at the policy's next action:
// delta = onehot(s) + gamma * M(s_next, a_next, .) - M(s, a, .).
Vector sr_td_update(OccupancyMatrix& rep, int s, int a, int s_next, int a_next, double alpha);

// r' * rep(s): per-state values for a state-indexed representation.
Vector evaluate_with_rep(const OccupancyMatrix& rep, const Eigen::Ref<const Vector>& r);

// r' * rep(s, a): per-(state, action) values for an action-conditioned one.
Matrix evaluate_with_rep_actions(const OccupancyMatrix& rep, const Eigen::Ref<const Vector>& r);

struct GpiChoice {
  int action = 0;
  int policy = 0;
  double value = 0.0;
};

// argmax over (action, policy) of r' * rep_pi(s, a); ties break toward the
// lowest policy index, then the lowest action index.
GpiChoice gpi_select(const std::vector<OccupancyMatrix>& reps, const Eigen::Ref<const Vector>& r,
                     int s);

// l1 norm of row s of an FR.
double fr_norm(const OccupancyMatrix& rep, int s);

// (1 - gamma^(S+1)) / (1 - gamma): upper bound on any FR row norm.
double fr_norm_bound(int num_states, double gamma);

// Exact E[gamma^(first hitting time of target from s under pi)], computed by
// clamping the target row to a unit basis row and solving the linear system.
// Verification oracle for fr_dp; the two must agree.
double first_passage_oracle(const TabularMdp& mdp, const Policy& pi, int s, int target);

// Whole column of first-passage discounts toward one target state.
Vector first_passage_oracle_all(const TabularMdp& mdp, const Policy& pi, int target);

// Text artifact with a header carrying kind, gamma and shape; values are
// written with full precision so a round trip is bit-exact.
void save_occupancy(const OccupancyMatrix& rep, const std::string& path);
OccupancyMatrix load_occupancy(const std::string& path);

}  // namespace firstocc
