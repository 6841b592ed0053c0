#include "rankopt/comparator/network.hpp"

#include <cmath>

namespace rankopt {

namespace {

constexpr double kProbabilityClamp = 1e-7;

struct TowerTrace {
  const FeatureTree* tree = nullptr;
  // activations[0] are the raw features; activations[l + 1] the outputs of
  // conv layer l. One vector per tree node.
  std::vector<std::vector<Eigen::VectorXd>> activations;
  Eigen::VectorXd pooled;
  std::vector<int> argmax;  // pooling argmax node per channel, first index on ties
  std::vector<Eigen::VectorXd> dense_inputs;
  std::vector<Eigen::VectorXd> dense_outputs;
  Eigen::VectorXd embedding;
};

TowerTrace forward_tower(const FeatureTree& tree, const ComparatorModel& model) {
  check(!tree.nodes.empty(), "cannot embed an empty feature tree");
  check(tree.vector_width() == model.input_width(),
        "feature width does not match the model input width");

  TowerTrace trace;
  trace.tree = &tree;
  const size_t n = tree.nodes.size();

  trace.activations.resize(model.conv_layers.size() + 1);
  trace.activations[0].reserve(n);
  for (const auto& node : tree.nodes) {
    trace.activations[0].push_back(node.x);
  }

  for (size_t l = 0; l < model.conv_layers.size(); ++l) {
    const auto& layer = model.conv_layers[l];
    const auto& in = trace.activations[l];
    auto& out = trace.activations[l + 1];
    out.resize(n);
    for (size_t i = 0; i < n; ++i) {
      Eigen::VectorXd pre = layer.w_parent * in[i] + layer.bias;
      if (tree.nodes[i].left >= 0) pre += layer.w_left * in[tree.nodes[i].left];
      if (tree.nodes[i].right >= 0) pre += layer.w_right * in[tree.nodes[i].right];
      out[i] = pre.array().tanh();
    }
  }

  const auto& last = trace.activations.back();
  const auto channels = static_cast<int>(last[0].size());
  trace.pooled = Eigen::VectorXd::Zero(channels);
  trace.argmax.assign(channels, 0);
  for (int c = 0; c < channels; ++c) {
    double best = last[0][c];
    int best_node = 0;
    for (size_t i = 1; i < n; ++i) {
      if (last[i][c] > best) {
        best = last[i][c];
        best_node = static_cast<int>(i);
      }
    }
    trace.pooled[c] = best;
    trace.argmax[c] = best_node;
  }

  Eigen::VectorXd x = trace.pooled;
  for (size_t l = 0; l < model.dense_layers.size(); ++l) {
    trace.dense_inputs.push_back(x);
    Eigen::VectorXd pre = model.dense_layers[l].w * x + model.dense_layers[l].bias;
    // Hidden layers are tanh; the output layer is linear so the embedding
    // scale is unrestricted.
    x = l + 1 < model.dense_layers.size() ? Eigen::VectorXd(pre.array().tanh()) : pre;
    trace.dense_outputs.push_back(x);
  }
  trace.embedding = x;
  return trace;
}

void backward_tower(const TowerTrace& trace, const Eigen::VectorXd& d_embedding,
                    const ComparatorModel& model, ModelGradients& grads) {
  const FeatureTree& tree = *trace.tree;
  const size_t n = tree.nodes.size();

  Eigen::VectorXd d_out = d_embedding;
  for (size_t l = model.dense_layers.size(); l-- > 0;) {
    Eigen::VectorXd d_pre = d_out;
    if (l + 1 < model.dense_layers.size()) {
      const auto& act = trace.dense_outputs[l];
      d_pre = (d_out.array() * (1.0 - act.array().square())).matrix();
    }
    grads.dense_layers[l].w += d_pre * trace.dense_inputs[l].transpose();
    grads.dense_layers[l].bias += d_pre;
    d_out = model.dense_layers[l].w.transpose() * d_pre;
  }

  // Un-pool: the gradient of each channel flows to its argmax node only.
  std::vector<Eigen::VectorXd> d_act(n);
  const auto channels = static_cast<int>(trace.pooled.size());
  for (size_t i = 0; i < n; ++i) {
    d_act[i] = Eigen::VectorXd::Zero(channels);
  }
  for (int c = 0; c < channels; ++c) {
    d_act[trace.argmax[c]][c] += d_out[c];
  }

  for (size_t l = model.conv_layers.size(); l-- > 0;) {
    const auto& layer = model.conv_layers[l];
    const auto& in = trace.activations[l];
    const auto& out = trace.activations[l + 1];
    std::vector<Eigen::VectorXd> d_in(n);
    for (size_t i = 0; i < n; ++i) {
      d_in[i] = Eigen::VectorXd::Zero(in[0].size());
    }
    for (size_t i = 0; i < n; ++i) {
      const Eigen::VectorXd d_pre =
          (d_act[i].array() * (1.0 - out[i].array().square())).matrix();
      grads.conv_layers[l].w_parent += d_pre * in[i].transpose();
      grads.conv_layers[l].bias += d_pre;
      d_in[i] += layer.w_parent.transpose() * d_pre;
      if (tree.nodes[i].left >= 0) {
        grads.conv_layers[l].w_left += d_pre * in[tree.nodes[i].left].transpose();
        d_in[tree.nodes[i].left] += layer.w_left.transpose() * d_pre;
      }
      if (tree.nodes[i].right >= 0) {
        grads.conv_layers[l].w_right += d_pre * in[tree.nodes[i].right].transpose();
        d_in[tree.nodes[i].right] += layer.w_right.transpose() * d_pre;
      }
    }
    d_act = std::move(d_in);
  }
}

// Comparison-layer logit for a pair of embeddings.
double pair_logit(const Eigen::VectorXd& e1, const Eigen::VectorXd& e2,
                  const ComparatorModel& model) {
  if (model.embedding_dim == 1) {
    return e1[0] - e2[0];
  }
  check(model.comparison_w.size() == 2 * model.embedding_dim,
        "comparison layer width does not match the embedding dimension");
  return model.comparison_w.head(model.embedding_dim).dot(e1) +
         model.comparison_w.tail(model.embedding_dim).dot(e2);
}

double clamped_cross_entropy(double p, int label) {
  const double clamped = std::clamp(p, kProbabilityClamp, 1.0 - kProbabilityClamp);
  return label == 1 ? -std::log(clamped) : -std::log(1.0 - clamped);
}

}  // namespace

double sigmoid(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

Eigen::VectorXd embed(const FeatureTree& tree, const ComparatorModel& model) {
  return forward_tower(tree, model).embedding;
}

double compare_plans(const FeatureTree& a, const FeatureTree& b, const ComparatorModel& model) {
  const Eigen::VectorXd e1 = embed(a, model);
  const Eigen::VectorXd e2 = embed(b, model);
  return sigmoid(pair_logit(e1, e2, model));
}

double pairwise_loss(std::span<const PlanPairExample> batch, const ComparatorModel& model) {
  check(!batch.empty(), "pairwise loss needs a non-empty batch");
  double total = 0.0;
  for (const auto& example : batch) {
    const double p = compare_plans(*example.plan_a, *example.plan_b, model);
    total += clamped_cross_entropy(p, example.label);
  }
  return total / static_cast<double>(batch.size());
}

ModelGradients pairwise_gradients(std::span<const PlanPairExample> batch,
                                  const ComparatorModel& model) {
  check(!batch.empty(), "pairwise gradients need a non-empty batch");
  ModelGradients grads = ModelGradients::zeros_like(model);
  const double inv_batch = 1.0 / static_cast<double>(batch.size());
  const int d = model.embedding_dim;

  for (const auto& example : batch) {
    const TowerTrace trace_a = forward_tower(*example.plan_a, model);
    const TowerTrace trace_b = forward_tower(*example.plan_b, model);
    const double z = pair_logit(trace_a.embedding, trace_b.embedding, model);
    const double p = sigmoid(z);
    // d(cross-entropy)/dz for a sigmoid output.
    const double d_z = (p - static_cast<double>(example.label)) * inv_batch;

    Eigen::VectorXd d_e1(d), d_e2(d);
    if (d == 1) {
      d_e1[0] = d_z;
      d_e2[0] = -d_z;
    } else {
      grads.comparison_w.head(d) += d_z * trace_a.embedding;
      grads.comparison_w.tail(d) += d_z * trace_b.embedding;
      d_e1 = d_z * model.comparison_w.head(d);
      d_e2 = d_z * model.comparison_w.tail(d);
    }
    // The towers share parameters: both contributions land in `grads`.
    backward_tower(trace_a, d_e1, model, grads);
    backward_tower(trace_b, d_e2, model, grads);
  }
  return grads;
}

double regression_gradients(const FeatureTree& tree, double target, const ComparatorModel& model,
                            ModelGradients& out) {
  check(model.embedding_dim == 1, "regression head is defined for 1-dim embeddings only");
  const TowerTrace trace = forward_tower(tree, model);
  const double error = trace.embedding[0] - target;
  Eigen::VectorXd d_embedding(1);
  d_embedding[0] = 2.0 * error;
  backward_tower(trace, d_embedding, model, out);
  return error * error;
}

size_t select_best_index(std::span<const FeatureTree> candidates, const ComparatorModel& model) {
  check(!candidates.empty(), "cannot select from an empty candidate list");
  std::vector<Eigen::VectorXd> embeddings;
  embeddings.reserve(candidates.size());
  for (const auto& tree : candidates) {
    embeddings.push_back(embed(tree, model));
  }

  if (model.embedding_dim == 1) {
    size_t best = 0;
    for (size_t i = 1; i < candidates.size(); ++i) {
      if (embeddings[i][0] < embeddings[best][0]) {
        best = i;
      }
    }
    return best;
  }

  // Expected pairwise wins of candidate i: sum over j != i of CmpPlan(Pj, Pi).
  size_t best = 0;
  double best_score = -1.0;
  for (size_t i = 0; i < candidates.size(); ++i) {
    double score = 0.0;
    for (size_t j = 0; j < candidates.size(); ++j) {
      if (j == i) continue;
      score += sigmoid(pair_logit(embeddings[j], embeddings[i], model));
    }
    if (score > best_score) {
      best_score = score;
      best = i;
    }
  }
  return best;
}

}  // namespace rankopt
