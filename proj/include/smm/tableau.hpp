#pragma once

#include <string>
#include <vector>

#include "smm/types.hpp"

namespace smm {

/// Explicit Runge-Kutta scheme: k_i = f(y + h sum_j a_ij k_j), y' = y + h sum_i b_i k_i.
struct ButcherTableau {
  std::string name;
  int order = 0;
  MatrixXd a;  // strictly lower triangular
  VectorXd b;
  VectorXd c;

  int stages() const { return static_cast<int>(b.size()); }

  /// Throws ValidationError unless the tableau is explicit and consistent.
  void validate() const;

  /// Fifth-order solution of the Dormand-Prince 5(4) pair, six stages.
  static ButcherTableau dormand_prince5();
  /// Fifth-order solution of the Cash-Karp 5(4) pair, six stages.
  static ButcherTableau cash_karp5();
  static ButcherTableau classic_rk4();
  static ButcherTableau euler();

  /// "dopri5", "cashkarp5", "rk4", "euler".
  static ButcherTableau by_name(const std::string& name);
  static std::vector<std::string> names();
};

}  // namespace smm
