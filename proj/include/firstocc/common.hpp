#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace firstocc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using VectorI = Eigen::VectorXi;

// Raised when a plan table cannot produce a subgoal sequence (unreachable
// goal or an inconsistent table that cycles).
struct NoPlanError : std::runtime_error {
  explicit NoPlanError(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw std::invalid_argument(what);
}

}  // namespace firstocc
