#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "foggrid/matrix.hpp"
#include "foggrid/params.hpp"
#include "foggrid/rng.hpp"

namespace foggrid::nn {

/// Row i of the result is W * x_i + b, for W[out x in], b[1 x out], X[N x in].
Matrix dense_forward(const Matrix& w, const Matrix& b, const Matrix& x);

/// Entrywise max(0, x).
Matrix relu(const Matrix& x);

/// Entrywise x for x >= 0, slope * x otherwise. slope must lie in (0, 1).
Matrix leaky_relu(const Matrix& x, double slope);

/// Rowwise softmax restricted to positions where mask != 0. Masked-out
/// entries are exactly 0; each row is stabilized by subtracting its masked
/// maximum. A row with no unmasked entry is a UsageError.
Matrix masked_softmax(const Matrix& logits, const Matrix& mask);

/// p <- p - lr * g for every parameter. Pure: returns the updated set.
ParamSet sgd_step(const ParamSet& params, const GradientSet& grads, double lr);

/// One entry of a parameter-initialization plan.
struct ParamPlanEntry {
    std::string name;
    int rows = 0;
    int cols = 0;
    bool is_bias = false;  // biases start at zero
};

/// Weights uniform in +-sqrt(6 / (rows + cols)), biases zero. Deterministic
/// under the seed.
ParamSet init_params(const std::vector<ParamPlanEntry>& plan, std::uint64_t seed);

}  // namespace foggrid::nn
