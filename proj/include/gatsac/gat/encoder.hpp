#pragma once

#include <array>
#include <vector>

#include "gatsac/graph/traffic_graph.hpp"
#include "gatsac/nn/adam.hpp"
#include "gatsac/nn/param_store.hpp"

namespace gatsac::gat {

struct GatConfig {
  int in_dim = graph::kFeatureDim;
  int hidden = 128;
  int heads1 = 4;  // layer 2 always uses a single head
  double leaky_slope = 0.2;
  double dropout = 0.3;  // on attention coefficients, train mode only
};

inline constexpr int kLaneTypeClasses = 3;  // CAV-only, HDV-only, mixed

// Two-layer multi-head graph attention encoder over the 12-lane graph, with a
// mean-pooled intersection embedding and a per-node lane-type head. Forward
// caches everything needed for the exact analytic backward.
class GatEncoder {
 public:
  GatEncoder(const GatConfig& cfg, Rng init_rng);

  struct Output {
    nn::Tensor node_embed;   // N x hidden
    nn::Vec pooled;          // hidden
    nn::Tensor lane_logits;  // N x 3
  };

  struct LayerCache {
    nn::Tensor input;                       // N x in
    std::vector<nn::Tensor> proj;           // per head: N x hidden (W x)
    std::vector<std::vector<double>> score; // per head: pre-LeakyReLU per edge
    std::vector<std::vector<double>> attn;  // per head: softmax coefficient per edge
    std::vector<std::vector<double>> mask;  // per head: dropout scale per edge
    std::vector<nn::Tensor> agg;            // per head: N x hidden pre-ELU
  };
  struct Cache {
    LayerCache l1, l2;
    nn::Tensor node_embed;  // layer-2 post-ELU
  };

  Output forward(const graph::TrafficGraph& g, Cache* cache, bool train_mode,
                 Rng* dropout_rng) const;

  // Accumulates parameter gradients; any of the upstream grads may be null.
  void backward(const graph::TrafficGraph& g, const Cache& cache, const nn::Vec* g_pooled,
                const nn::Tensor* g_nodes, const nn::Tensor* g_logits);

  // Per-head dense attention matrices at evaluation: heads1 for layer 1, then
  // one for layer 2.
  std::vector<nn::Tensor> attention_matrices(const graph::TrafficGraph& g) const;

  nn::ParamStore& params() { return params_; }
  const nn::ParamStore& params() const { return params_; }
  const GatConfig& config() const { return cfg_; }

 private:
  GatConfig cfg_;
  nn::ParamStore params_;

  void layer_forward(const graph::TrafficGraph& g, const nn::Tensor& X, int layer, int heads,
                     LayerCache& cache, nn::Tensor& out, bool train_mode, Rng* dropout_rng) const;
  void layer_backward(const graph::TrafficGraph& g, int layer, int heads, const LayerCache& cache,
                      const nn::Tensor& gOut_post_elu, nn::Tensor* gX);
};

// Eq-9-style assignment: argmax over softened logits, ties resolve to mixed;
// a_lane shifts the CAV-only/HDV-only logits (+/-) when provided. The
// constraint pass reverts an approach to all-mixed if either class would lose
// every admitting lane there.
std::array<sim::LaneType, sim::kNumLanes> assign_lane_types(const nn::Tensor& lane_logits,
                                                            const double* a_lane);

}  // namespace gatsac::gat
