#include "evcore/net.h"

#include <cmath>
#include <vector>

#include "evcore/errors.h"

namespace evcore {

namespace {

Eigen::MatrixXd relu(const Eigen::MatrixXd& z) { return z.cwiseMax(0.0); }

Eigen::MatrixXd relu_mask(const Eigen::MatrixXd& z) { return (z.array() > 0.0).cast<double>().matrix(); }

Eigen::MatrixXd affine(const Eigen::MatrixXd& x, const Eigen::MatrixXd& w, const Eigen::RowVectorXd& b) {
  Eigen::MatrixXd z = x * w;
  z.rowwise() += b;
  return z;
}

Eigen::MatrixXd uniform_matrix(Eigen::Index rows, Eigen::Index cols, double limit, Rng& rng) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = rng.uniform(-limit, limit);
  }
  return m;
}

Eigen::MatrixXd sample_mask(std::size_t rows, std::size_t cols, double rate, Rng& rng) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) m(r, c) = rng.bernoulli(rate) ? 0.0 : 1.0;
  }
  return m;
}

void check_mask(const Eigen::MatrixXd& mask, const Eigen::MatrixXd& like, const char* layer) {
  if (mask.rows() != like.rows() || mask.cols() != like.cols()) {
    throw ShapeError(std::string("dropout mask for ") + layer + " has wrong shape");
  }
}

}  // namespace

NetParams NetParams::zeros(const NetShape& s) {
  auto e = [](std::size_t v) { return static_cast<Eigen::Index>(v); };
  NetParams p;
  p.w1 = Eigen::MatrixXd::Zero(e(s.input), e(s.hidden1));
  p.w2 = Eigen::MatrixXd::Zero(e(s.hidden1), e(s.embedding));
  p.w3 = Eigen::MatrixXd::Zero(e(s.embedding), e(s.hidden3));
  p.w4 = Eigen::MatrixXd::Zero(e(s.hidden3), e(s.output));
  p.b1 = Eigen::RowVectorXd::Zero(e(s.hidden1));
  p.b2 = Eigen::RowVectorXd::Zero(e(s.embedding));
  p.b3 = Eigen::RowVectorXd::Zero(e(s.hidden3));
  p.b4 = Eigen::RowVectorXd::Zero(e(s.output));
  return p;
}

NetShape NetParams::shape() const {
  auto u = [](Eigen::Index v) { return static_cast<std::size_t>(v); };
  return NetShape{u(w1.rows()), u(w1.cols()), u(w2.cols()), u(w3.cols()), u(w4.cols())};
}

std::size_t NetParams::parameter_count() const {
  std::size_t n = 0;
  for_each([&](const Eigen::Ref<const Eigen::MatrixXd>& t) { n += static_cast<std::size_t>(t.size()); });
  return n;
}

bool NetParams::all_finite() const {
  bool ok = true;
  for_each([&](const Eigen::Ref<const Eigen::MatrixXd>& t) { ok = ok && t.allFinite(); });
  return ok;
}

void NetParams::for_each(const std::function<void(Eigen::Ref<Eigen::MatrixXd>)>& fn) {
  fn(w1);
  fn(b1);
  fn(w2);
  fn(b2);
  fn(w3);
  fn(b3);
  fn(w4);
  fn(b4);
}

void NetParams::for_each(const std::function<void(const Eigen::Ref<const Eigen::MatrixXd>&)>& fn) const {
  fn(w1);
  fn(b1);
  fn(w2);
  fn(b2);
  fn(w3);
  fn(b3);
  fn(w4);
  fn(b4);
}

NetParams init_params(const NetShape& s, Rng& rng) {
  NetParams p = NetParams::zeros(s);
  auto glorot = [&](Eigen::MatrixXd& w) {
    const double limit = std::sqrt(6.0 / static_cast<double>(w.rows() + w.cols()));
    w = uniform_matrix(w.rows(), w.cols(), limit, rng);
  };
  glorot(p.w1);
  glorot(p.w2);
  glorot(p.w3);
  glorot(p.w4);
  return p;
}

DropoutMasks sample_dropout_masks(std::size_t rows, const NetShape& shape, double rate, Rng& rng) {
  return DropoutMasks{sample_mask(rows, shape.hidden1, rate, rng), sample_mask(rows, shape.embedding, rate, rng),
                      sample_mask(rows, shape.hidden3, rate, rng)};
}

Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& logits) {
  Eigen::MatrixXd out = logits.colwise() - logits.rowwise().maxCoeff();
  out = out.array().exp().matrix();
  const Eigen::VectorXd sums = out.rowwise().sum();
  return sums.cwiseInverse().asDiagonal() * out;
}

ForwardPass forward(const NetParams& params, const Eigen::MatrixXd& inputs, Mode mode, const DropoutMasks* masks,
                    double dropout_rate) {
  if (inputs.cols() != params.w1.rows()) {
    throw ShapeError("input width " + std::to_string(inputs.cols()) + " does not match network input " +
                     std::to_string(params.w1.rows()));
  }
  const bool drop = mode == Mode::kTrain && masks != nullptr && dropout_rate > 0.0;
  const double scale = drop ? 1.0 / (1.0 - dropout_rate) : 1.0;
  auto apply = [&](const Eigen::MatrixXd& a, const Eigen::MatrixXd* mask, const char* layer) -> Eigen::MatrixXd {
    if (!drop) return a;
    check_mask(*mask, a, layer);
    return a.cwiseProduct(*mask) * scale;
  };

  ForwardPass f;
  f.z1 = affine(inputs, params.w1, params.b1);
  f.a1 = relu(f.z1);
  f.a1_out = apply(f.a1, drop ? &masks->hidden1 : nullptr, "hidden1");
  f.z2 = affine(f.a1_out, params.w2, params.b2);
  f.embeddings = relu(f.z2);
  f.e_out = apply(f.embeddings, drop ? &masks->embedding : nullptr, "embedding");
  f.z3 = affine(f.e_out, params.w3, params.b3);
  f.a3 = relu(f.z3);
  f.a3_out = apply(f.a3, drop ? &masks->hidden3 : nullptr, "hidden3");
  f.logits = affine(f.a3_out, params.w4, params.b4);
  f.probs = softmax_rows(f.logits);
  return f;
}

Eigen::MatrixXd embed(const NetParams& params, const Eigen::MatrixXd& inputs) {
  if (inputs.cols() != params.w1.rows()) throw ShapeError("input width does not match network input");
  const Eigen::MatrixXd a1 = relu(affine(inputs, params.w1, params.b1));
  return relu(affine(a1, params.w2, params.b2));
}

NetParams backward(const NetParams& params, const Eigen::MatrixXd& inputs, const ForwardPass& f,
                   const Eigen::MatrixXd& d_logits, const Eigen::MatrixXd& d_embeddings, const DropoutMasks* masks,
                   double dropout_rate) {
  const bool drop = masks != nullptr && dropout_rate > 0.0;
  const double scale = drop ? 1.0 / (1.0 - dropout_rate) : 1.0;
  auto through_dropout = [&](const Eigen::MatrixXd& d_out, const Eigen::MatrixXd* mask) -> Eigen::MatrixXd {
    if (!drop) return d_out;
    return d_out.cwiseProduct(*mask) * scale;
  };

  NetParams g;
  g.w4 = f.a3_out.transpose() * d_logits;
  g.b4 = d_logits.colwise().sum();
  const Eigen::MatrixXd d_a3 = through_dropout(d_logits * params.w4.transpose(), drop ? &masks->hidden3 : nullptr);
  const Eigen::MatrixXd d_z3 = d_a3.cwiseProduct(relu_mask(f.z3));

  g.w3 = f.e_out.transpose() * d_z3;
  g.b3 = d_z3.colwise().sum();
  Eigen::MatrixXd d_e = through_dropout(d_z3 * params.w3.transpose(), drop ? &masks->embedding : nullptr);
  if (d_embeddings.size() > 0) d_e += d_embeddings;
  const Eigen::MatrixXd d_z2 = d_e.cwiseProduct(relu_mask(f.z2));

  g.w2 = f.a1_out.transpose() * d_z2;
  g.b2 = d_z2.colwise().sum();
  const Eigen::MatrixXd d_a1 = through_dropout(d_z2 * params.w2.transpose(), drop ? &masks->hidden1 : nullptr);
  const Eigen::MatrixXd d_z1 = d_a1.cwiseProduct(relu_mask(f.z1));

  g.w1 = inputs.transpose() * d_z1;
  g.b1 = d_z1.colwise().sum();
  return g;
}

namespace {

const DropoutMasks* batch_masks(const Batch& batch, double dropout_rate) {
  return dropout_rate > 0.0 ? &batch.masks : nullptr;
}

}  // namespace

GradientResult compute_gradients(const NetParams& params, const Batch& batch, const LossWeights& weights,
                                 double dropout_rate) {
  const DropoutMasks* masks = batch_masks(batch, dropout_rate);
  const ForwardPass f = forward(params, batch.inputs, Mode::kTrain, masks, dropout_rate);
  LossGradients lg = loss_gradients(f.probs, f.embeddings, batch.labels, batch.chains, weights);
  GradientResult out;
  out.loss = lg.loss;
  out.grads = backward(params, batch.inputs, f, lg.d_logits, lg.d_embeddings, masks, dropout_rate);
  return out;
}

LossBreakdown evaluate_loss(const NetParams& params, const Batch& batch, const LossWeights& weights,
                            double dropout_rate) {
  const DropoutMasks* masks = batch_masks(batch, dropout_rate);
  const ForwardPass f = forward(params, batch.inputs, Mode::kTrain, masks, dropout_rate);
  return loss_total(f.probs, f.embeddings, batch.labels, batch.chains, weights);
}

void adam_step(NetParams& params, AdamState& state, const NetParams& grads, double lr, const AdamConfig& config) {
  if (!(params.shape() == grads.shape()) || !(params.shape() == state.m.shape())) {
    throw ShapeError("adam_step: parameter, gradient, and state shapes differ");
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(config.beta1, t);
  const double correction2 = 1.0 - std::pow(config.beta2, t);

  std::vector<Eigen::Ref<Eigen::MatrixXd>> p, m, v;
  std::vector<Eigen::Ref<const Eigen::MatrixXd>> g;
  params.for_each([&](Eigen::Ref<Eigen::MatrixXd> x) { p.push_back(x); });
  state.m.for_each([&](Eigen::Ref<Eigen::MatrixXd> x) { m.push_back(x); });
  state.v.for_each([&](Eigen::Ref<Eigen::MatrixXd> x) { v.push_back(x); });
  grads.for_each([&](const Eigen::Ref<const Eigen::MatrixXd>& x) { g.push_back(x); });
  for (std::size_t k = 0; k < p.size(); ++k) {
    m[k] = config.beta1 * m[k] + (1.0 - config.beta1) * g[k];
    v[k] = config.beta2 * v[k] + (1.0 - config.beta2) * g[k].cwiseAbs2();
    const auto m_hat = m[k].array() / correction1;
    const auto v_hat = v[k].array() / correction2;
    p[k].array() -= lr * m_hat / (v_hat.sqrt() + config.epsilon);
  }
}

}  // namespace evcore
