#include "gatsac/nn/ops.hpp"

#include <algorithm>
#include <cmath>

namespace gatsac::nn {

void dense_forward(const Tensor& W, const Vec& b, std::span<const double> x, Vec& y) {
  if (static_cast<int>(x.size()) != W.cols)
    throw ShapeError("dense_forward: input size " + std::to_string(x.size()) +
                     " vs W cols " + std::to_string(W.cols));
  if (static_cast<int>(b.size()) != W.rows)
    throw ShapeError("dense_forward: bias size " + std::to_string(b.size()) +
                     " vs W rows " + std::to_string(W.rows));
  y.assign(static_cast<std::size_t>(W.rows), 0.0);
  for (int r = 0; r < W.rows; ++r) {
    const double* w = W.row(r);
    double s = b[static_cast<std::size_t>(r)];
    for (int c = 0; c < W.cols; ++c) s += w[c] * x[static_cast<std::size_t>(c)];
    y[static_cast<std::size_t>(r)] = s;
  }
}

void dense_backward(const Tensor& W, std::span<const double> x, std::span<const double> gy,
                    Tensor& gW, Vec& gb, Vec* gx) {
  if (static_cast<int>(gy.size()) != W.rows || static_cast<int>(x.size()) != W.cols)
    throw ShapeError("dense_backward: shape mismatch");
  for (int r = 0; r < W.rows; ++r) {
    const double g = gy[static_cast<std::size_t>(r)];
    double* gw = gW.row(r);
    for (int c = 0; c < W.cols; ++c) gw[c] += g * x[static_cast<std::size_t>(c)];
    gb[static_cast<std::size_t>(r)] += g;
  }
  if (gx) {
    gx->assign(static_cast<std::size_t>(W.cols), 0.0);
    for (int r = 0; r < W.rows; ++r) {
      const double g = gy[static_cast<std::size_t>(r)];
      const double* w = W.row(r);
      for (int c = 0; c < W.cols; ++c) (*gx)[static_cast<std::size_t>(c)] += w[c] * g;
    }
  }
}

void dense_forward_batch(const Tensor& W, const Vec& b, const Tensor& X, Tensor& Y) {
  if (X.cols != W.cols) throw ShapeError("dense_forward_batch: X cols vs W cols");
  Y = Tensor(X.rows, W.rows);
  for (int n = 0; n < X.rows; ++n) {
    const double* x = X.row(n);
    double* y = Y.row(n);
    for (int r = 0; r < W.rows; ++r) {
      const double* w = W.row(r);
      double s = b[static_cast<std::size_t>(r)];
      for (int c = 0; c < W.cols; ++c) s += w[c] * x[c];
      y[r] = s;
    }
  }
}

void dense_backward_batch(const Tensor& W, const Tensor& X, const Tensor& gY,
                          Tensor* gW, Vec* gb, Tensor* gX) {
  if (gY.rows != X.rows || gY.cols != W.rows || X.cols != W.cols)
    throw ShapeError("dense_backward_batch: shape mismatch");
  if (gW && gb) {
    for (int n = 0; n < X.rows; ++n) {
      const double* x = X.row(n);
      const double* gy = gY.row(n);
      for (int r = 0; r < W.rows; ++r) {
        const double g = gy[r];
        double* gw = gW->row(r);
        for (int c = 0; c < W.cols; ++c) gw[c] += g * x[c];
        (*gb)[static_cast<std::size_t>(r)] += g;
      }
    }
  }
  if (gX) {
    *gX = Tensor(X.rows, X.cols);
    for (int n = 0; n < X.rows; ++n) {
      const double* gy = gY.row(n);
      double* gx = gX->row(n);
      for (int r = 0; r < W.rows; ++r) {
        const double g = gy[r];
        const double* w = W.row(r);
        for (int c = 0; c < W.cols; ++c) gx[c] += w[c] * g;
      }
    }
  }
}

double leaky_relu(double x, double slope) { return x > 0.0 ? x : slope * x; }
double leaky_relu_grad(double x, double slope) { return x > 0.0 ? 1.0 : slope; }

double elu(double x) { return x > 0.0 ? x : std::expm1(x); }
double elu_grad(double x) { return x > 0.0 ? 1.0 : std::exp(x); }

double tanh_act(double x) { return std::tanh(x); }
double tanh_grad(double x) {
  const double t = std::tanh(x);
  return 1.0 - t * t;
}

void softmax(std::span<const double> in, std::span<double> out) {
  if (in.empty() || in.size() != out.size()) throw ShapeError("softmax: bad spans");
  double mx = in[0];
  for (double v : in) mx = std::max(mx, v);
  double sum = 0.0;
  for (std::size_t i = 0; i < in.size(); ++i) {
    out[i] = std::exp(in[i] - mx);
    sum += out[i];
  }
  for (std::size_t i = 0; i < in.size(); ++i) out[i] /= sum;
}

void softmax_backward(std::span<const double> y, std::span<const double> gy,
                      std::span<double> gx) {
  double dot = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) dot += y[i] * gy[i];
  for (std::size_t i = 0; i < y.size(); ++i) gx[i] = y[i] * (gy[i] - dot);
}

}  // namespace gatsac::nn
