#include "foggrid/nn.hpp"

#include <cmath>

#include "foggrid/errors.hpp"

namespace foggrid::nn {

Matrix dense_forward(const Matrix& w, const Matrix& b, const Matrix& x) {
    if (x.cols() != w.cols())
        throw ShapeError("dense_forward: weights " + w.shape_str() +
                         " incompatible with input " + x.shape_str());
    if (b.rows() != 1 || b.cols() != w.rows())
        throw ShapeError("dense_forward: bias " + b.shape_str() +
                         " incompatible with weights " + w.shape_str());
    Matrix out = matmul_nt(x, w);
    for (int i = 0; i < out.rows(); ++i) {
        double* orow = out.row(i);
        const double* brow = b.row(0);
        for (int j = 0; j < out.cols(); ++j) orow[j] += brow[j];
    }
    return out;
}

Matrix relu(const Matrix& x) {
    Matrix out = x;
    for (double& v : out.data())
        if (v < 0.0) v = 0.0;
    return out;
}

Matrix leaky_relu(const Matrix& x, double slope) {
    if (!(slope > 0.0 && slope < 1.0))
        throw UsageError("leaky_relu: slope must lie in (0, 1)");
    Matrix out = x;
    for (double& v : out.data())
        if (v < 0.0) v *= slope;
    return out;
}

Matrix masked_softmax(const Matrix& logits, const Matrix& mask) {
    if (!logits.same_shape(mask))
        throw ShapeError("masked_softmax: logits " + logits.shape_str() +
                         " vs mask " + mask.shape_str());
    Matrix out(logits.rows(), logits.cols());
    for (int i = 0; i < logits.rows(); ++i) {
        const double* lrow = logits.row(i);
        const double* mrow = mask.row(i);
        double* orow = out.row(i);

        double rowmax = -std::numeric_limits<double>::infinity();
        for (int j = 0; j < logits.cols(); ++j)
            if (mrow[j] != 0.0 && lrow[j] > rowmax) rowmax = lrow[j];
        if (rowmax == -std::numeric_limits<double>::infinity())
            throw UsageError("masked_softmax: row " + std::to_string(i) +
                             " has no unmasked entries");

        double denom = 0.0;
        for (int j = 0; j < logits.cols(); ++j) {
            if (mrow[j] != 0.0) {
                orow[j] = std::exp(lrow[j] - rowmax);
                denom += orow[j];
            }
        }
        for (int j = 0; j < logits.cols(); ++j)
            if (mrow[j] != 0.0) orow[j] /= denom;
    }
    return out;
}

ParamSet sgd_step(const ParamSet& params, const GradientSet& grads, double lr) {
    params.require_same_layout(grads, "sgd_step");
    ParamSet out = params;
    for (size_t i = 0; i < out.size(); ++i) {
        auto& value = out.entry(i).second;
        const auto& g = grads.entry(i).second;
        for (long k = 0; k < value.size(); ++k)
            value.data()[k] -= lr * g.data()[k];
    }
    return out;
}

ParamSet init_params(const std::vector<ParamPlanEntry>& plan, std::uint64_t seed) {
    Rng rng(seed);
    ParamSet out;
    for (const auto& e : plan) {
        Matrix m(e.rows, e.cols);
        if (!e.is_bias) {
            const double bound = std::sqrt(6.0 / (e.rows + e.cols));
            for (double& v : m.data()) v = (2.0 * rng.uniform01() - 1.0) * bound;
        }
        out.add(e.name, std::move(m));
    }
    return out;
}

}  // namespace foggrid::nn
