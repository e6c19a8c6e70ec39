#include "gatsac/sac/networks.hpp"

#include <cmath>

namespace gatsac::sac {

using nn::Tensor;
using nn::Vec;

namespace {
constexpr double kLogSqrt2Pi = 0.91893853320467274178;  // log(sqrt(2*pi))
}

GaussianActor::GaussianActor(int in_dim, int hidden1, int hidden2, int action_dim, Rng& rng)
    : action_dim_(action_dim), trunk_(params_, "trunk", {in_dim, hidden1, hidden2}, rng) {
  Tensor& Wm = params_.add("mu.W", action_dim, hidden2);
  nn::fill_normal(Wm, rng, 0.01);
  params_.add("mu.b", action_dim, 1);
  Tensor& Ws = params_.add("log_std.W", action_dim, hidden2);
  nn::fill_normal(Ws, rng, 0.01);
  Tensor& bs = params_.add("log_std.b", action_dim, 1);
  for (double& v : bs.data) v = -0.5;
}

void GaussianActor::forward(const Tensor& Z, Cache& c) const {
  const Tensor& h = trunk_.forward(Z, c.trunk);
  nn::dense_forward_batch(params_.value("mu.W"), params_.value("mu.b").data, h, c.mu);
  nn::dense_forward_batch(params_.value("log_std.W"), params_.value("log_std.b").data, h,
                          c.log_std_pre);
  c.log_std = c.log_std_pre;
  for (double& v : c.log_std.data) v = std::clamp(v, kLogStdMin, kLogStdMax);
}

void GaussianActor::sample(Cache& c, Rng* rng, bool deterministic) const {
  c.xi = Tensor(c.mu.rows, c.mu.cols);
  if (!deterministic) {
    if (!rng) throw ShapeError("stochastic sample needs an rng");
    for (double& v : c.xi.data) v = rng->normal();
  }
  sample_with(c, c.xi);
}

void GaussianActor::sample_with(Cache& c, const Tensor& xi) const {
  if (!xi.same_shape(c.mu)) throw ShapeError("sample_with: noise shape mismatch");
  c.xi = xi;
  c.a = Tensor(c.mu.rows, c.mu.cols);
  for (std::size_t i = 0; i < c.a.data.size(); ++i) {
    const double u = c.mu.data[i] + std::exp(c.log_std.data[i]) * c.xi.data[i];
    c.a.data[i] = std::tanh(u);
  }
}

Vec GaussianActor::log_prob(const Cache& c) const {
  Vec lp(static_cast<std::size_t>(c.a.rows), 0.0);
  for (int n = 0; n < c.a.rows; ++n) {
    double s = 0.0;
    for (int d = 0; d < c.a.cols; ++d) {
      const double xi = c.xi(n, d);
      const double ls = c.log_std(n, d);
      const double a = std::clamp(c.a(n, d), -(1.0 - kSquashEps), 1.0 - kSquashEps);
      s += -0.5 * xi * xi - kLogSqrt2Pi - ls - std::log(1.0 - a * a + kSquashEps);
    }
    lp[static_cast<std::size_t>(n)] = s;
  }
  return lp;
}

void GaussianActor::backward(const Cache& c, const Tensor* gA, const Vec* gLogp) {
  Tensor gMu(c.mu.rows, c.mu.cols);
  Tensor gLs(c.mu.rows, c.mu.cols);
  for (int n = 0; n < c.mu.rows; ++n) {
    const double gl = gLogp ? (*gLogp)[static_cast<std::size_t>(n)] : 0.0;
    for (int d = 0; d < c.mu.cols; ++d) {
      const double a = c.a(n, d);
      const double ac = std::clamp(a, -(1.0 - kSquashEps), 1.0 - kSquashEps);
      const double one_m_a2 = 1.0 - a * a;  // tanh'(u)
      const double T = 2.0 * ac * one_m_a2 / (1.0 - ac * ac + kSquashEps);
      const double sxi = std::exp(c.log_std(n, d)) * c.xi(n, d);  // du/dlog_std
      const double ga = gA ? (*gA)(n, d) : 0.0;
      gMu(n, d) = gl * T + ga * one_m_a2;
      double gls = gl * (-1.0 + T * sxi) + ga * one_m_a2 * sxi;
      // clamp pass-through only inside the active range
      const double pre = c.log_std_pre(n, d);
      if (pre < kLogStdMin || pre > kLogStdMax) gls = 0.0;
      gLs(n, d) = gls;
    }
  }
  Tensor gH;
  nn::dense_backward_batch(params_.value("mu.W"), c.trunk.act.back(), gMu,
                           &params_.grad("mu.W"), &params_.grad("mu.b").data, &gH);
  Tensor gH2;
  nn::dense_backward_batch(params_.value("log_std.W"), c.trunk.act.back(), gLs,
                           &params_.grad("log_std.W"), &params_.grad("log_std.b").data, &gH2);
  for (std::size_t i = 0; i < gH.data.size(); ++i) gH.data[i] += gH2.data[i];
  trunk_.backward(c.trunk, gH, nullptr, /*accumulate_params=*/true);
}

QCritic::QCritic(nn::ParamStore& store, std::string prefix, int z_dim, int action_dim,
                 int hidden1, int hidden2, Rng& rng)
    : prefix_(std::move(prefix)),
      store_(&store),
      z_dim_(z_dim),
      action_dim_(action_dim),
      trunk_(store, prefix_ + ".trunk", {z_dim + action_dim, hidden1, hidden2}, rng) {
  Tensor& W = store.add(prefix_ + ".head.W", 1, hidden2);
  nn::fill_normal(W, rng, 0.01);
  store.add(prefix_ + ".head.b", 1, 1);
}

Vec QCritic::forward(const Tensor& Z, const Tensor& A, Cache& c) const {
  if (Z.rows != A.rows || Z.cols != z_dim_ || A.cols != action_dim_)
    throw ShapeError("QCritic::forward: bad input shapes");
  c.input = Tensor(Z.rows, z_dim_ + action_dim_);
  for (int n = 0; n < Z.rows; ++n) {
    double* row = c.input.row(n);
    const double* z = Z.row(n);
    const double* a = A.row(n);
    for (int i = 0; i < z_dim_; ++i) row[i] = z[i];
    for (int i = 0; i < action_dim_; ++i) row[z_dim_ + i] = a[i];
  }
  const Tensor& h = trunk_.forward(c.input, c.trunk);
  Tensor q;
  nn::dense_forward_batch(store_->value(prefix_ + ".head.W"),
                          store_->value(prefix_ + ".head.b").data, h, q);
  Vec out(static_cast<std::size_t>(q.rows));
  for (int n = 0; n < q.rows; ++n) out[static_cast<std::size_t>(n)] = q(n, 0);
  return out;
}

void QCritic::backward(const Cache& c, const Vec& gQ, Tensor* gA, bool accumulate_params) {
  Tensor gq(static_cast<int>(gQ.size()), 1);
  for (std::size_t n = 0; n < gQ.size(); ++n) gq.data[n] = gQ[n];
  Tensor gH;
  if (accumulate_params) {
    nn::dense_backward_batch(store_->value(prefix_ + ".head.W"), c.trunk.act.back(), gq,
                             &store_->grad(prefix_ + ".head.W"),
                             &store_->grad(prefix_ + ".head.b").data, &gH);
  } else {
    nn::dense_backward_batch(store_->value(prefix_ + ".head.W"), c.trunk.act.back(), gq,
                             nullptr, nullptr, &gH);
  }
  Tensor gIn;
  trunk_.backward(c.trunk, gH, gA ? &gIn : nullptr, accumulate_params);
  if (gA) {
    *gA = Tensor(gIn.rows, action_dim_);
    for (int n = 0; n < gIn.rows; ++n)
      for (int d = 0; d < action_dim_; ++d) (*gA)(n, d) = gIn(n, z_dim_ + d);
  }
}

}  // namespace gatsac::sac
