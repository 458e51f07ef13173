#pragma once

#include <Eigen/Dense>

namespace synccert {

/// One classical fourth-order Runge-Kutta step of x' = f(t, x).
/// `f` is called as f(t, x, dxdt) and must fill dxdt.
class Rk4Stepper {
 public:
  explicit Rk4Stepper(Eigen::Index dim) : tmp_(dim), k1_(dim), k2_(dim), k3_(dim), k4_(dim) {}

  template <class System>
  void step(System&& f, Eigen::VectorXd& x, double t, double dt) {
    const double half = 0.5 * dt;
    f(t, x, k1_);
    tmp_ = x + half * k1_;
    f(t + half, tmp_, k2_);
    tmp_ = x + half * k2_;
    f(t + half, tmp_, k3_);
    tmp_ = x + dt * k3_;
    f(t + dt, tmp_, k4_);
    x += (dt / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
  }

 private:
  Eigen::VectorXd tmp_, k1_, k2_, k3_, k4_;
};

}  // namespace synccert
