#include "rankopt/comparator/model.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rankopt/util/rng.hpp"

namespace rankopt {

namespace {

ComparatorModel build_shape(const Catalog& catalog, const ModelConfig& config) {
  check(config.embedding_dim >= 1, "embedding dimension must be >= 1");
  check(!config.conv_channels.empty(), "model needs at least one convolution layer");

  ComparatorModel model;
  model.embedding_dim = config.embedding_dim;
  for (int op = 0; op < kOperatorCount; ++op) {
    model.operator_vocab.push_back(op_name(static_cast<PlanOp>(op)));
  }
  for (const auto& table : catalog.tables) {
    model.table_order.push_back(table.name);
  }

  int in = feature_vector_width(catalog);
  for (const int out : config.conv_channels) {
    TreeConvLayer layer;
    layer.w_parent = Eigen::MatrixXd::Zero(out, in);
    layer.w_left = Eigen::MatrixXd::Zero(out, in);
    layer.w_right = Eigen::MatrixXd::Zero(out, in);
    layer.bias = Eigen::VectorXd::Zero(out);
    model.conv_layers.push_back(std::move(layer));
    in = out;
  }
  std::vector<int> widths = config.dense_widths;
  widths.push_back(config.embedding_dim);
  for (const int out : widths) {
    DenseLayer layer;
    layer.w = Eigen::MatrixXd::Zero(out, in);
    layer.bias = Eigen::VectorXd::Zero(out);
    model.dense_layers.push_back(std::move(layer));
    in = out;
  }
  if (config.embedding_dim > 1) {
    model.comparison_w = Eigen::VectorXd::Zero(2 * config.embedding_dim);
  }
  return model;
}

void fill_uniform(Eigen::MatrixXd& m, double scale, Rng& rng) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    m.data()[i] = rng.next_double(-scale, scale);
  }
}

void fill_uniform(Eigen::VectorXd& v, double scale, Rng& rng) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    v[i] = rng.next_double(-scale, scale);
  }
}

std::string hex_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%a", value);
  return buffer;
}

class TokenReader {
 public:
  explicit TokenReader(std::istream& in) : in_(in) {}

  std::string word() {
    std::string token;
    check(static_cast<bool>(in_ >> token), "truncated model checkpoint");
    return token;
  }
  double number() {
    const auto token = word();
    char* end = nullptr;
    const double value = std::strtod(token.c_str(), &end);
    check(end != nullptr && *end == '\0', "bad numeric token '" + token + "' in checkpoint");
    return value;
  }
  long integer() { return static_cast<long>(number()); }

  void expect(const std::string& keyword) {
    const auto token = word();
    check(token == keyword, "expected '" + keyword + "' in checkpoint, found '" + token + "'");
  }

 private:
  std::istream& in_;
};

void write_matrix(std::ostream& out, const std::string& tag, const Eigen::MatrixXd& m) {
  out << tag << ' ' << m.rows() << ' ' << m.cols();
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    out << ' ' << hex_double(m.data()[i]);
  }
  out << '\n';
}

Eigen::MatrixXd read_matrix(TokenReader& reader, const std::string& tag) {
  reader.expect(tag);
  const long rows = reader.integer();
  const long cols = reader.integer();
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    m.data()[i] = reader.number();
  }
  return m;
}

}  // namespace

ComparatorModel ComparatorModel::zero_initialized(const Catalog& catalog,
                                                  const ModelConfig& config) {
  return build_shape(catalog, config);
}

ComparatorModel ComparatorModel::random_initialized(const Catalog& catalog, uint64_t seed,
                                                    const ModelConfig& config) {
  ComparatorModel model = build_shape(catalog, config);
  Rng rng(seed);
  for (auto& layer : model.conv_layers) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(layer.w_parent.cols()));
    fill_uniform(layer.w_parent, scale, rng);
    fill_uniform(layer.w_left, scale, rng);
    fill_uniform(layer.w_right, scale, rng);
    fill_uniform(layer.bias, scale, rng);
  }
  for (auto& layer : model.dense_layers) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(layer.w.cols()));
    fill_uniform(layer.w, scale, rng);
    fill_uniform(layer.bias, scale, rng);
  }
  // comparison_w stays zero-initialized by design.
  return model;
}

int ComparatorModel::input_width() const {
  check(!conv_layers.empty(), "model has no layers");
  return static_cast<int>(conv_layers.front().w_parent.cols());
}

namespace {

// Shared walk so that counting, reading, and writing parameters agree on one
// canonical order.
template <typename ConvT, typename DenseT, typename Fn>
void for_each_parameter_block(std::vector<ConvT>& conv, std::vector<DenseT>& dense,
                              Eigen::VectorXd& comparison, Fn&& fn) {
  for (auto& layer : conv) {
    fn(layer.w_parent.data(), layer.w_parent.size());
    fn(layer.w_left.data(), layer.w_left.size());
    fn(layer.w_right.data(), layer.w_right.size());
    fn(layer.bias.data(), layer.bias.size());
  }
  for (auto& layer : dense) {
    fn(layer.w.data(), layer.w.size());
    fn(layer.bias.data(), layer.bias.size());
  }
  if (comparison.size() > 0) {
    fn(comparison.data(), comparison.size());
  }
}

}  // namespace

size_t ComparatorModel::parameter_count() const {
  size_t count = 0;
  auto& self = const_cast<ComparatorModel&>(*this);
  for_each_parameter_block(self.conv_layers, self.dense_layers, self.comparison_w,
                           [&](double*, Eigen::Index n) { count += static_cast<size_t>(n); });
  return count;
}

double ComparatorModel::get_parameter(size_t index) const {
  double value = 0.0;
  size_t offset = 0;
  bool found = false;
  auto& self = const_cast<ComparatorModel&>(*this);
  for_each_parameter_block(self.conv_layers, self.dense_layers, self.comparison_w,
                           [&](double* data, Eigen::Index n) {
                             if (!found && index < offset + static_cast<size_t>(n)) {
                               value = data[index - offset];
                               found = true;
                             }
                             offset += static_cast<size_t>(n);
                           });
  check(found, "parameter index out of range");
  return value;
}

void ComparatorModel::set_parameter(size_t index, double value) {
  size_t offset = 0;
  bool found = false;
  for_each_parameter_block(conv_layers, dense_layers, comparison_w,
                           [&](double* data, Eigen::Index n) {
                             if (!found && index < offset + static_cast<size_t>(n)) {
                               data[index - offset] = value;
                               found = true;
                             }
                             offset += static_cast<size_t>(n);
                           });
  check(found, "parameter index out of range");
}

void ComparatorModel::save(const std::string& path) const {
  std::ofstream out(path);
  check(out.good(), "cannot write '" + path + "'");
  out << "rankopt-comparator 1\n";
  out << "dim " << embedding_dim << '\n';
  out << "bounds " << hex_double(bounds.log_card_min) << ' ' << hex_double(bounds.log_card_max)
      << ' ' << hex_double(bounds.width_min) << ' ' << hex_double(bounds.width_max) << '\n';
  out << "operators " << operator_vocab.size();
  for (const auto& name : operator_vocab) out << ' ' << name;
  out << '\n';
  out << "tables " << table_order.size();
  for (const auto& name : table_order) out << ' ' << name;
  out << '\n';
  out << "conv_layers " << conv_layers.size() << '\n';
  for (const auto& layer : conv_layers) {
    write_matrix(out, "wp", layer.w_parent);
    write_matrix(out, "wl", layer.w_left);
    write_matrix(out, "wr", layer.w_right);
    write_matrix(out, "bias", layer.bias);
  }
  out << "dense_layers " << dense_layers.size() << '\n';
  for (const auto& layer : dense_layers) {
    write_matrix(out, "w", layer.w);
    write_matrix(out, "bias", layer.bias);
  }
  write_matrix(out, "comparison", comparison_w);
  check(out.good(), "write failed for '" + path + "'");
}

ComparatorModel ComparatorModel::load(const std::string& path) {
  std::ifstream in(path);
  check(in.good(), "cannot read '" + path + "'");
  TokenReader reader(in);
  reader.expect("rankopt-comparator");
  check(reader.integer() == 1, "unsupported checkpoint version");

  ComparatorModel model;
  reader.expect("dim");
  model.embedding_dim = static_cast<int>(reader.integer());
  reader.expect("bounds");
  model.bounds.log_card_min = reader.number();
  model.bounds.log_card_max = reader.number();
  model.bounds.width_min = reader.number();
  model.bounds.width_max = reader.number();
  reader.expect("operators");
  const long op_count = reader.integer();
  for (long i = 0; i < op_count; ++i) model.operator_vocab.push_back(reader.word());
  reader.expect("tables");
  const long table_count = reader.integer();
  for (long i = 0; i < table_count; ++i) model.table_order.push_back(reader.word());
  reader.expect("conv_layers");
  const long conv_count = reader.integer();
  for (long i = 0; i < conv_count; ++i) {
    TreeConvLayer layer;
    layer.w_parent = read_matrix(reader, "wp");
    layer.w_left = read_matrix(reader, "wl");
    layer.w_right = read_matrix(reader, "wr");
    layer.bias = read_matrix(reader, "bias").col(0);
    model.conv_layers.push_back(std::move(layer));
  }
  reader.expect("dense_layers");
  const long dense_count = reader.integer();
  for (long i = 0; i < dense_count; ++i) {
    DenseLayer layer;
    layer.w = read_matrix(reader, "w");
    layer.bias = read_matrix(reader, "bias").col(0);
    model.dense_layers.push_back(std::move(layer));
  }
  const Eigen::MatrixXd comparison = read_matrix(reader, "comparison");
  model.comparison_w = comparison.size() > 0 ? Eigen::VectorXd(comparison.col(0))
                                             : Eigen::VectorXd();
  return model;
}

ModelGradients ModelGradients::zeros_like(const ComparatorModel& model) {
  ModelGradients grads;
  for (const auto& layer : model.conv_layers) {
    TreeConvLayer zero;
    zero.w_parent = Eigen::MatrixXd::Zero(layer.w_parent.rows(), layer.w_parent.cols());
    zero.w_left = Eigen::MatrixXd::Zero(layer.w_left.rows(), layer.w_left.cols());
    zero.w_right = Eigen::MatrixXd::Zero(layer.w_right.rows(), layer.w_right.cols());
    zero.bias = Eigen::VectorXd::Zero(layer.bias.size());
    grads.conv_layers.push_back(std::move(zero));
  }
  for (const auto& layer : model.dense_layers) {
    DenseLayer zero;
    zero.w = Eigen::MatrixXd::Zero(layer.w.rows(), layer.w.cols());
    zero.bias = Eigen::VectorXd::Zero(layer.bias.size());
    grads.dense_layers.push_back(std::move(zero));
  }
  grads.comparison_w = Eigen::VectorXd::Zero(model.comparison_w.size());
  return grads;
}

std::vector<double> ModelGradients::flatten() const {
  std::vector<double> values;
  auto& self = const_cast<ModelGradients&>(*this);
  for_each_parameter_block(self.conv_layers, self.dense_layers, self.comparison_w,
                           [&](double* data, Eigen::Index n) {
                             values.insert(values.end(), data, data + n);
                           });
  return values;
}

void ModelGradients::scale(double factor) {
  for (auto& layer : conv_layers) {
    layer.w_parent *= factor;
    layer.w_left *= factor;
    layer.w_right *= factor;
    layer.bias *= factor;
  }
  for (auto& layer : dense_layers) {
    layer.w *= factor;
    layer.bias *= factor;
  }
  comparison_w *= factor;
}

void apply_gradients(ComparatorModel& model, const ModelGradients& gradients,
                     double learning_rate) {
  for (size_t i = 0; i < model.conv_layers.size(); ++i) {
    model.conv_layers[i].w_parent -= learning_rate * gradients.conv_layers[i].w_parent;
    model.conv_layers[i].w_left -= learning_rate * gradients.conv_layers[i].w_left;
    model.conv_layers[i].w_right -= learning_rate * gradients.conv_layers[i].w_right;
    model.conv_layers[i].bias -= learning_rate * gradients.conv_layers[i].bias;
  }
  for (size_t i = 0; i < model.dense_layers.size(); ++i) {
    model.dense_layers[i].w -= learning_rate * gradients.dense_layers[i].w;
    model.dense_layers[i].bias -= learning_rate * gradients.dense_layers[i].bias;
  }
  if (model.comparison_w.size() > 0) {
    model.comparison_w -= learning_rate * gradients.comparison_w;
  }
}

}  // namespace rankopt
