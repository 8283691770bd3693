#pragma once

#include "shiftlab/errors.hpp"
#include "shiftlab/types.hpp"

namespace shiftlab {

// RMSProp with the canonical defaults; v is the running mean of squared
// gradients, one slot per parameter.
struct RmsPropState {
  Vector v;
  Scalar rho = 0.9;
  Scalar learning_rate = 1e-3;
  Scalar epsilon = 1e-8;

  static RmsPropState zeros(Index n, Scalar lr = 1e-3, Scalar rho = 0.9,
                            Scalar eps = 1e-8) {
    RmsPropState s;
    s.v = Vector::Zero(n);
    s.rho = rho;
    s.learning_rate = lr;
    s.epsilon = eps;
    return s;
  }
};

// v' = rho v + (1-rho) g^2 ;  p' = p - lr g / (sqrt(v') + eps).
// Deterministic in (state, params, grads); no hidden state.
inline void rmsprop_step(RmsPropState& state, Vector& params, const Vector& grads) {
  if (params.size() != grads.size() || params.size() != state.v.size())
    throw ContractError("rmsprop_step: params/grads/state length mismatch");
  state.v = state.rho * state.v + (1.0 - state.rho) * grads.cwiseProduct(grads);
  params -= state.learning_rate *
            grads.cwiseQuotient((state.v.cwiseSqrt().array() + state.epsilon).matrix());
}

}  // namespace shiftlab
