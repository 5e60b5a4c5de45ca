#include "foggrid/tape.hpp"

#include <cmath>
#include <utility>

#include "foggrid/errors.hpp"

namespace foggrid::nn {

VarId Tape::push(Matrix value, bool needs_grad, std::function<void(Tape&, const Matrix&)> back) {
    nodes_.push_back(Node{std::move(value), Matrix(), needs_grad, false, std::move(back)});
    return static_cast<VarId>(nodes_.size() - 1);
}

Tape::Node& Tape::node(VarId v) { return nodes_.at(static_cast<size_t>(v)); }
const Tape::Node& Tape::node(VarId v) const { return nodes_.at(static_cast<size_t>(v)); }

const Matrix& Tape::value(VarId v) const { return node(v).value; }

Matrix Tape::grad(VarId v) const {
    if (!ran_backward_)
        throw UsageError("Tape::grad: backward has not been run on this tape");
    const Node& n = node(v);
    if (!n.grad_live) return Matrix::zeros(n.value.rows(), n.value.cols());
    return n.grad;
}

void Tape::accumulate(VarId v, const Matrix& g) {
    Node& n = node(v);
    if (!n.needs_grad) return;
    if (!n.grad_live) {
        n.grad = g;
        n.grad_live = true;
    } else {
        for (long i = 0; i < n.grad.size(); ++i) n.grad.data()[i] += g.data()[i];
    }
}

VarId Tape::constant(Matrix value) { return push(std::move(value), false, nullptr); }

VarId Tape::leaf(Matrix value) { return push(std::move(value), true, nullptr); }

VarId Tape::dense(VarId x, VarId w, VarId b) {
    Matrix out = dense_forward(value(w), value(b), value(x));
    const bool ng = node(x).needs_grad || node(w).needs_grad || node(b).needs_grad;
    return push(std::move(out), ng, [x, w, b](Tape& t, const Matrix& up) {
        if (t.node(x).needs_grad) t.accumulate(x, matmul(up, t.value(w)));
        if (t.node(w).needs_grad) t.accumulate(w, matmul_tn(up, t.value(x)));
        if (t.node(b).needs_grad) t.accumulate(b, col_sums(up));
    });
}

VarId Tape::matmul(VarId a, VarId b) {
    Matrix out = nn::matmul(value(a), value(b));
    const bool ng = node(a).needs_grad || node(b).needs_grad;
    return push(std::move(out), ng, [a, b](Tape& t, const Matrix& up) {
        if (t.node(a).needs_grad) t.accumulate(a, matmul_nt(up, t.value(b)));
        if (t.node(b).needs_grad) t.accumulate(b, matmul_tn(t.value(a), up));
    });
}

VarId Tape::add_row_vector(VarId m, VarId v) {
    const Matrix& mm = value(m);
    const Matrix& vv = value(v);
    if (vv.rows() != 1 || vv.cols() != mm.cols())
        throw ShapeError("add_row_vector: vector " + vv.shape_str() + " vs matrix " +
                         mm.shape_str());
    Matrix out = mm;
    for (int i = 0; i < out.rows(); ++i) {
        double* orow = out.row(i);
        const double* vrow = vv.row(0);
        for (int j = 0; j < out.cols(); ++j) orow[j] += vrow[j];
    }
    const bool ng = node(m).needs_grad || node(v).needs_grad;
    return push(std::move(out), ng, [m, v](Tape& t, const Matrix& up) {
        if (t.node(m).needs_grad) t.accumulate(m, up);
        if (t.node(v).needs_grad) t.accumulate(v, col_sums(up));
    });
}

VarId Tape::relu(VarId x) {
    Matrix out = nn::relu(value(x));
    return push(std::move(out), node(x).needs_grad, [x](Tape& t, const Matrix& up) {
        if (!t.node(x).needs_grad) return;
        const Matrix& in = t.value(x);
        Matrix g = up;
        for (long i = 0; i < g.size(); ++i)
            if (in.data()[i] < 0.0) g.data()[i] = 0.0;
        t.accumulate(x, g);
    });
}

VarId Tape::leaky_relu(VarId x, double slope) {
    Matrix out = nn::leaky_relu(value(x), slope);
    return push(std::move(out), node(x).needs_grad, [x, slope](Tape& t, const Matrix& up) {
        if (!t.node(x).needs_grad) return;
        const Matrix& in = t.value(x);
        Matrix g = up;
        for (long i = 0; i < g.size(); ++i)
            if (in.data()[i] < 0.0) g.data()[i] *= slope;
        t.accumulate(x, g);
    });
}

VarId Tape::slice_rows(VarId x, int r0, int r1) {
    const Matrix& in = value(x);
    if (r0 < 0 || r1 > in.rows() || r0 >= r1)
        throw UsageError("slice_rows: bad range [" + std::to_string(r0) + ", " +
                         std::to_string(r1) + ") for " + in.shape_str());
    Matrix out(r1 - r0, in.cols());
    for (int i = r0; i < r1; ++i)
        for (int j = 0; j < in.cols(); ++j) out(i - r0, j) = in(i, j);
    return push(std::move(out), node(x).needs_grad, [x, r0, r1](Tape& t, const Matrix& up) {
        if (!t.node(x).needs_grad) return;
        const Matrix& in = t.value(x);
        Matrix g(in.rows(), in.cols());
        for (int i = r0; i < r1; ++i)
            for (int j = 0; j < in.cols(); ++j) g(i, j) = up(i - r0, j);
        t.accumulate(x, g);
    });
}

VarId Tape::concat_rows(const std::vector<VarId>& parts) {
    if (parts.empty()) throw UsageError("concat_rows: no parts");
    const int cols = value(parts[0]).cols();
    int rows = 0;
    bool ng = false;
    for (VarId p : parts) {
        if (value(p).cols() != cols)
            throw ShapeError("concat_rows: column mismatch (" + value(p).shape_str() + ")");
        rows += value(p).rows();
        ng = ng || node(p).needs_grad;
    }
    Matrix out(rows, cols);
    int at = 0;
    for (VarId p : parts) {
        const Matrix& m = value(p);
        for (int i = 0; i < m.rows(); ++i)
            for (int j = 0; j < cols; ++j) out(at + i, j) = m(i, j);
        at += m.rows();
    }
    std::vector<VarId> captured = parts;
    return push(std::move(out), ng, [captured](Tape& t, const Matrix& up) {
        int at = 0;
        for (VarId p : captured) {
            const Matrix& m = t.value(p);
            if (t.node(p).needs_grad) {
                Matrix g(m.rows(), m.cols());
                for (int i = 0; i < m.rows(); ++i)
                    for (int j = 0; j < m.cols(); ++j) g(i, j) = up(at + i, j);
                t.accumulate(p, g);
            }
            at += m.rows();
        }
    });
}

VarId Tape::pairwise_row_col_sum(VarId s, VarId t_) {
    const Matrix& sv = value(s);
    const Matrix& tv = value(t_);
    if (sv.cols() != 1 || tv.cols() != 1 || sv.rows() != tv.rows())
        throw ShapeError("pairwise_row_col_sum: need equal-length column vectors, got " +
                         sv.shape_str() + " and " + tv.shape_str());
    const int n = sv.rows();
    Matrix out(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out(i, j) = sv(i, 0) + tv(j, 0);
    const bool ng = node(s).needs_grad || node(t_).needs_grad;
    return push(std::move(out), ng, [s, t_, n](Tape& t, const Matrix& up) {
        if (t.node(s).needs_grad) {
            Matrix gs(n, 1);
            for (int i = 0; i < n; ++i) {
                double acc = 0.0;
                for (int j = 0; j < n; ++j) acc += up(i, j);
                gs(i, 0) = acc;
            }
            t.accumulate(s, gs);
        }
        if (t.node(t_).needs_grad) {
            Matrix gt(n, 1);
            for (int j = 0; j < n; ++j) {
                double acc = 0.0;
                for (int i = 0; i < n; ++i) acc += up(i, j);
                gt(j, 0) = acc;
            }
            t.accumulate(t_, gt);
        }
    });
}

VarId Tape::masked_softmax(VarId logits, Matrix mask) {
    Matrix out = nn::masked_softmax(value(logits), mask);
    const VarId self_val = push(std::move(out), node(logits).needs_grad, nullptr);
    // Softmax backward needs its own output; rebind the closure now that the
    // node exists.
    Matrix mask_copy = std::move(mask);
    node(self_val).back = [logits, self_val, mask_copy](Tape& t, const Matrix& up) {
        if (!t.node(logits).needs_grad) return;
        const Matrix& alpha = t.value(self_val);
        const int rows = alpha.rows(), cols = alpha.cols();
        Matrix g(rows, cols);
        for (int i = 0; i < rows; ++i) {
            double dot = 0.0;
            for (int k = 0; k < cols; ++k)
                if (mask_copy(i, k) != 0.0) dot += up(i, k) * alpha(i, k);
            for (int j = 0; j < cols; ++j)
                if (mask_copy(i, j) != 0.0) g(i, j) = alpha(i, j) * (up(i, j) - dot);
        }
        t.accumulate(logits, g);
    };
    return self_val;
}

VarId Tape::gather_per_row(VarId m, std::vector<int> cols) {
    const Matrix& mm = value(m);
    if (static_cast<int>(cols.size()) != mm.rows())
        throw ShapeError("gather_per_row: " + std::to_string(cols.size()) +
                         " indices for " + mm.shape_str());
    Matrix out(mm.rows(), 1);
    for (int i = 0; i < mm.rows(); ++i) {
        if (cols[i] < 0 || cols[i] >= mm.cols())
            throw UsageError("gather_per_row: index " + std::to_string(cols[i]) +
                             " out of range for " + mm.shape_str());
        out(i, 0) = mm(i, cols[i]);
    }
    return push(std::move(out), node(m).needs_grad,
                [m, cols = std::move(cols)](Tape& t, const Matrix& up) {
                    if (!t.node(m).needs_grad) return;
                    const Matrix& mm = t.value(m);
                    Matrix g(mm.rows(), mm.cols());
                    for (int i = 0; i < mm.rows(); ++i) g(i, cols[i]) = up(i, 0);
                    t.accumulate(m, g);
                });
}

VarId Tape::mean_squared_error(VarId pred, Matrix target) {
    const Matrix& p = value(pred);
    if (!p.same_shape(target))
        throw ShapeError("mean_squared_error: prediction " + p.shape_str() +
                         " vs target " + target.shape_str());
    const double n = static_cast<double>(p.size());
    double acc = 0.0;
    for (long i = 0; i < p.size(); ++i) {
        const double d = p.data()[i] - target.data()[i];
        acc += d * d;
    }
    Matrix out(1, 1);
    out(0, 0) = acc / n;
    return push(std::move(out), node(pred).needs_grad,
                [pred, target = std::move(target), n](Tape& t, const Matrix& up) {
                    if (!t.node(pred).needs_grad) return;
                    const Matrix& p = t.value(pred);
                    Matrix g(p.rows(), p.cols());
                    const double s = 2.0 / n * up(0, 0);
                    for (long i = 0; i < p.size(); ++i)
                        g.data()[i] = s * (p.data()[i] - target.data()[i]);
                    t.accumulate(pred, g);
                });
}

void Tape::backward(VarId loss) {
    const Matrix& v = value(loss);
    if (v.rows() != 1 || v.cols() != 1)
        throw UsageError("Tape::backward: loss must be 1x1, got " + v.shape_str());
    Matrix seed(1, 1);
    seed(0, 0) = 1.0;
    backward(loss, seed);
}

void Tape::backward(VarId var, const Matrix& seed) {
    if (!value(var).same_shape(seed))
        throw ShapeError("Tape::backward: seed " + seed.shape_str() + " vs value " +
                         value(var).shape_str());
    for (Node& n : nodes_) {
        n.grad_live = false;
        n.grad = Matrix();
    }
    ran_backward_ = true;
    accumulate(var, seed);
    for (long i = static_cast<long>(nodes_.size()) - 1; i >= 0; --i) {
        Node& n = nodes_[static_cast<size_t>(i)];
        if (n.grad_live && n.back) n.back(*this, n.grad);
    }
}

VarId BoundParams::at(const std::string& name) const {
    for (const auto& [n, v] : vars)
        if (n == name) return v;
    throw UsageError("BoundParams: no parameter '" + name + "'");
}

BoundParams bind_params(Tape& tape, const ParamSet& params) {
    BoundParams out;
    out.vars.reserve(params.size());
    for (const auto& [name, value] : params) out.vars.emplace_back(name, tape.leaf(value));
    return out;
}

GradientSet collect_gradients(const Tape& tape, const BoundParams& bound, const ParamSet& params) {
    GradientSet out;
    for (size_t i = 0; i < params.size(); ++i) {
        const auto& [name, value] = params.entry(i);
        if (bound.vars[i].first != name)
            throw ShapeError("collect_gradients: bound order differs from ParamSet order");
        out.add(name, tape.grad(bound.vars[i].second));
    }
    return out;
}

double gradient_check(const std::function<VarId(Tape&, const BoundParams&)>& build,
                      const ParamSet& params, double epsilon) {
    Tape tape;
    BoundParams bound = bind_params(tape, params);
    const VarId loss = build(tape, bound);
    tape.backward(loss);
    GradientSet analytic = collect_gradients(tape, bound, params);

    auto loss_at = [&](const ParamSet& p) {
        Tape t;
        BoundParams b = bind_params(t, p);
        return t.value(build(t, b))(0, 0);
    };

    ParamSet work = params;
    double worst = 0.0;
    for (size_t e = 0; e < work.size(); ++e) {
        Matrix& m = work.entry(e).second;
        const Matrix& g = analytic.entry(e).second;
        for (long i = 0; i < m.size(); ++i) {
            const double saved = m.data()[i];
            m.data()[i] = saved + epsilon;
            const double up = loss_at(work);
            m.data()[i] = saved - epsilon;
            const double down = loss_at(work);
            m.data()[i] = saved;
            const double cd = (up - down) / (2.0 * epsilon);
            const double a = g.data()[i];
            const double err = std::abs(a - cd) / std::max({std::abs(a), std::abs(cd), 1e-8});
            if (err > worst) worst = err;
        }
    }
    return worst;
}

}  // namespace foggrid::nn
