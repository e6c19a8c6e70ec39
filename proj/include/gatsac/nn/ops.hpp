#pragma once

#include <span>

#include "gatsac/nn/tensor.hpp"

namespace gatsac::nn {

// y = W x + b (W: out x in, b: out, x: in)
void dense_forward(const Tensor& W, const Vec& b, std::span<const double> x, Vec& y);

// Accumulates gW += gy x^T, gb += gy and returns gx = W^T gy (if gx non-null).
void dense_backward(const Tensor& W, std::span<const double> x, std::span<const double> gy,
                    Tensor& gW, Vec& gb, Vec* gx);

// Batched variants: X is batch x in, Y is batch x out. Null gW/gb skips the
// parameter gradients (input-gradient-only backprop through frozen weights).
void dense_forward_batch(const Tensor& W, const Vec& b, const Tensor& X, Tensor& Y);
void dense_backward_batch(const Tensor& W, const Tensor& X, const Tensor& gY,
                          Tensor* gW, Vec* gb, Tensor* gX);

// Activations and exact derivatives (as functions of the input value).
double leaky_relu(double x, double slope);
double leaky_relu_grad(double x, double slope);
double elu(double x);
double elu_grad(double x);
double tanh_act(double x);
double tanh_grad(double x);

// Numerically stable softmax (max subtraction); out sums to 1.
void softmax(std::span<const double> in, std::span<double> out);
// gx from the softmax output y and upstream gy.
void softmax_backward(std::span<const double> y, std::span<const double> gy,
                      std::span<double> gx);

}  // namespace gatsac::nn
