#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "rankopt/comparator/features.hpp"

namespace rankopt {

/// One tree-convolution layer: a triangle filter over (node, left, right).
struct TreeConvLayer {
  Eigen::MatrixXd w_parent, w_left, w_right;
  Eigen::VectorXd bias;
};

struct DenseLayer {
  Eigen::MatrixXd w;
  Eigen::VectorXd bias;
};

struct ModelConfig {
  std::vector<int> conv_channels = {64, 32, 16};
  std::vector<int> dense_widths = {8};  // hidden widths; the output layer is d
  int embedding_dim = 1;
};

/// The twin-tower plan comparator. Both towers are this single parameter
/// set; there is no second copy that could drift. For embedding_dim == 1 the
/// comparison layer is fixed (sigmoid of the embedding difference); for
/// d > 1 `comparison_w` is a learnable layer over the concatenated pair of
/// embeddings, zero-initialized and without bias.
class ComparatorModel {
 public:
  std::vector<TreeConvLayer> conv_layers;
  std::vector<DenseLayer> dense_layers;
  Eigen::VectorXd comparison_w;  // size 2*d, only used when d > 1

  int embedding_dim = 1;
  FeatureBounds bounds;
  std::vector<std::string> operator_vocab;
  std::vector<std::string> table_order;  // catalog ordering baked into bitmaps

  static ComparatorModel zero_initialized(const Catalog& catalog, const ModelConfig& config = {});
  static ComparatorModel random_initialized(const Catalog& catalog, uint64_t seed,
                                            const ModelConfig& config = {});

  int input_width() const;

  /// Flat parameter view covering every learnable scalar, used by SGD and by
  /// the finite-difference oracle in the tests.
  size_t parameter_count() const;
  double get_parameter(size_t index) const;
  void set_parameter(size_t index, double value);

  /// Versioned text checkpoint; doubles are stored as hex-floats so a
  /// round-trip is bit-exact.
  void save(const std::string& path) const;
  static ComparatorModel load(const std::string& path);
};

/// Parameter-shaped gradient container.
struct ModelGradients {
  std::vector<TreeConvLayer> conv_layers;
  std::vector<DenseLayer> dense_layers;
  Eigen::VectorXd comparison_w;

  static ModelGradients zeros_like(const ComparatorModel& model);
  void scale(double factor);

  /// All entries in the same canonical order as ComparatorModel's parameter
  /// indexing.
  std::vector<double> flatten() const;
};

/// In-place SGD step: params -= learning_rate * gradients.
void apply_gradients(ComparatorModel& model, const ModelGradients& gradients,
                     double learning_rate);

}  // namespace rankopt
