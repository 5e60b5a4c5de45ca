#pragma once

#include <cstdint>
#include <vector>

#include "foggrid/matrix.hpp"
#include "foggrid/nn.hpp"
#include "foggrid/params.hpp"
#include "foggrid/rng.hpp"
#include "foggrid/tape.hpp"

namespace foggrid::agent {

/// Pipeline widths. The stack is: encoder Dense(F->32)+Dense(32->32), one
/// graph-attention layer at width 32, Q network Dense(32)+Dense(32)+
/// Dense(64)+Dense(32), and a linear per-node 5-way head.
constexpr int kEmbedDim = 32;
constexpr int kAttentionDim = 2 * kEmbedDim;
constexpr int kActionCount = 5;

struct AgentConfig {
    int feature_dim = 12;
    double leaky_slope = 0.2;
    bool gat_relu = false;  // the aggregation equation itself has no activation
};

/// Parameter plan (names, shapes, weight-vs-bias) in the stable order used by
/// checkpoints and SGD.
std::vector<nn::ParamPlanEntry> param_plan(const AgentConfig& cfg);

/// Glorot-uniform weights, zero biases, deterministic under seed.
nn::ParamSet make_agent_params(const AgentConfig& cfg, std::uint64_t seed);

// --- pure inference path --------------------------------------------------

/// Node embeddings H = relu(Dense2(relu(Dense1(X)))).
nn::Matrix encode(const nn::ParamSet& params, const nn::Matrix& x, const AgentConfig& cfg);

/// Attention coefficients alpha[i][j] over the adjacency: softmax over
/// neighbors j of LeakyReLU(a^T [W h_i || W h_j]); exactly 0 off-adjacency.
nn::Matrix attention_coefficients(const nn::Matrix& h, const nn::Matrix& adjacency,
                                  const nn::Matrix& w, const nn::Matrix& attention_vec,
                                  double slope);

/// H' = alpha * (H W) + b.
nn::Matrix gat_layer(const nn::ParamSet& params, const nn::Matrix& h,
                     const nn::Matrix& adjacency, const AgentConfig& cfg);

/// Full pipeline: per-node Q values, shape N x 5.
nn::Matrix forward(const nn::ParamSet& params, const nn::Matrix& x,
                   const nn::Matrix& adjacency, const AgentConfig& cfg);

// --- tape (training) path ---------------------------------------------------

/// Records the same pipeline on a tape; returns the N x 5 Q node.
nn::VarId build_q_network(nn::Tape& tape, const nn::BoundParams& bound, nn::VarId x,
                          const nn::Matrix& adjacency, const AgentConfig& cfg);

/// Batched variant: `x_stack` holds B graphs of `nodes_per_graph` rows each,
/// `adjacencies` one mask per graph. Rowwise identical to per-graph forwards.
nn::VarId build_q_network_stacked(nn::Tape& tape, const nn::BoundParams& bound, nn::VarId x_stack,
                                  const std::vector<const nn::Matrix*>& adjacencies,
                                  int nodes_per_graph, const AgentConfig& cfg);

// --- acting -----------------------------------------------------------------

/// Per node: with probability epsilon a uniform phase, otherwise the argmax
/// Q row (ties to the lowest index). epsilon == 0 consumes no randomness.
std::vector<int> select_actions(const nn::Matrix& q, double epsilon, Rng& rng);

// --- replay -----------------------------------------------------------------

struct Transition {
    nn::Matrix x;        // N x F
    nn::Matrix a;        // N x N
    std::vector<int> actions;
    std::vector<double> rewards;
    nn::Matrix x_next;
    nn::Matrix a_next;
    bool done = false;
};

/// Fixed-capacity ring buffer with uniform without-replacement sampling.
class ReplayBuffer {
public:
    explicit ReplayBuffer(long capacity);

    void push(Transition t);
    long size() const { return static_cast<long>(storage_.size()); }
    long capacity() const { return capacity_; }

    /// `batch` distinct uniformly chosen entries; UsageError when size < batch.
    std::vector<const Transition*> sample(int batch, Rng& rng) const;

    const Transition& at(long i) const { return storage_[static_cast<size_t>(i)]; }

private:
    long capacity_;
    long write_pos_ = 0;
    std::vector<Transition> storage_;
};

// --- learning ----------------------------------------------------------------

struct Hyperparams {
    double gamma = 0.99;
    double lr = 1e-5;
    double tau = 1e-3;
    double epsilon_start = 1.0;
    double epsilon_end = 0.05;
    long epsilon_anneal_steps = 50000;
    int batch_size = 64;
    long buffer_capacity = 20000;
    int train_every = 1;

    void validate() const;  // throws ConfigError
};

/// epsilon_start through warmup, then linear to epsilon_end over
/// epsilon_anneal_steps, constant afterwards.
double epsilon_for_step(const Hyperparams& hp, long step, long warmup_steps);

/// Double-Q bootstrap targets, one row per transition: y_i = r_i + gamma *
/// Q_target(x', a')[i][argmax_p Q_online(x', a')[i][p]], or r_i when done.
nn::Matrix double_q_targets(const nn::ParamSet& online, const nn::ParamSet& target,
                            const std::vector<const Transition*>& batch, double gamma,
                            const AgentConfig& cfg);

struct TrainStepResult {
    nn::ParamSet params;  // updated online parameters
    double loss = 0.0;
};

/// Samples a batch, forms double-Q targets, takes one SGD step on the mean
/// squared TD error. The target set is left untouched.
TrainStepResult train_step(const nn::ParamSet& online, const nn::ParamSet& target,
                           const ReplayBuffer& buffer, const Hyperparams& hp,
                           const AgentConfig& cfg, Rng& rng);

/// theta_target <- (1 - tau) * theta_target + tau * theta_online.
nn::ParamSet soft_update(const nn::ParamSet& target, const nn::ParamSet& online, double tau);

}  // namespace foggrid::agent
