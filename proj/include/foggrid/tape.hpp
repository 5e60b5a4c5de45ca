#pragma once

#include <functional>
#include <string>
#include <vector>

#include "foggrid/matrix.hpp"
#include "foggrid/nn.hpp"
#include "foggrid/params.hpp"

namespace foggrid::nn {

using VarId = int;

/// Reverse-mode autodiff tape over Matrix values. Forward values are computed
/// eagerly with the same kernels as the pure inference path, so tape and pure
/// forward results are bit-identical. backward() runs the recorded graph in
/// reverse and accumulates gradients into differentiable leaves.
class Tape {
public:
    /// Leaf that gradients do not flow into (inputs, masks, targets).
    VarId constant(Matrix value);

    /// Differentiable leaf (parameters).
    VarId leaf(Matrix value);

    // --- recorded operations ------------------------------------------------
    VarId dense(VarId x, VarId w, VarId b);          // x * w^T + 1 b
    VarId matmul(VarId a, VarId b);
    VarId add_row_vector(VarId m, VarId v);          // m + (row vector v broadcast)
    VarId relu(VarId x);
    VarId leaky_relu(VarId x, double slope);
    VarId slice_rows(VarId x, int r0, int r1);       // rows [r0, r1)
    VarId concat_rows(const std::vector<VarId>& parts);
    VarId pairwise_row_col_sum(VarId s, VarId t);    // (n x 1, n x 1) -> n x n: s_i + t_j
    VarId masked_softmax(VarId logits, Matrix mask);
    VarId gather_per_row(VarId m, std::vector<int> cols);  // n x 1 of m(i, cols[i])
    VarId mean_squared_error(VarId pred, Matrix target);   // 1 x 1 scalar

    /// Backpropagates from a 1x1 loss node seeded with 1.0 (or `seed`).
    void backward(VarId loss);
    void backward(VarId var, const Matrix& seed);

    const Matrix& value(VarId v) const;

    /// Gradient of the last backward() target w.r.t. a differentiable leaf or
    /// intermediate (zeros when the loss does not depend on it). UsageError if
    /// backward has not run on this tape.
    Matrix grad(VarId v) const;

    size_t node_count() const { return nodes_.size(); }

private:
    struct Node {
        Matrix value;
        Matrix grad;                // same shape as value once touched
        bool needs_grad = false;    // reachable from a differentiable leaf
        bool grad_live = false;     // grad matrix has been written this pass
        std::function<void(Tape&, const Matrix&)> back;  // upstream grad -> inputs
    };

    VarId push(Matrix value, bool needs_grad, std::function<void(Tape&, const Matrix&)> back);
    void accumulate(VarId v, const Matrix& g);
    Node& node(VarId v);
    const Node& node(VarId v) const;

    std::vector<Node> nodes_;
    bool ran_backward_ = false;
};

/// Parameter names bound onto a tape as differentiable leaves, in ParamSet
/// order.
struct BoundParams {
    std::vector<std::pair<std::string, VarId>> vars;
    VarId at(const std::string& name) const;
};

BoundParams bind_params(Tape& tape, const ParamSet& params);

/// Collects leaf gradients into a GradientSet shaped like `params`; parameters
/// the loss never touched get zero gradients.
GradientSet collect_gradients(const Tape& tape, const BoundParams& bound, const ParamSet& params);

/// Max over parameters of |analytic - central difference| /
/// max(|analytic|, |cd|, 1e-8). `build` must deterministically construct the
/// scalar loss for the given bound parameters.
double gradient_check(
    const std::function<VarId(Tape&, const BoundParams&)>& build,
    const ParamSet& params, double epsilon);

}  // namespace foggrid::nn
