#include "gatsac/gat/encoder.hpp"

#include <cmath>

#include "gatsac/nn/ops.hpp"

namespace gatsac::gat {

using graph::TrafficGraph;
using nn::Tensor;
using nn::Vec;
using sim::kNumLanes;

namespace {

std::string wname(int layer, int head) {
  return "l" + std::to_string(layer) + ".h" + std::to_string(head) + ".W";
}
std::string aname(int layer, int head) {
  return "l" + std::to_string(layer) + ".h" + std::to_string(head) + ".a";
}

Tensor features_tensor(const TrafficGraph& g) {
  Tensor X(kNumLanes, graph::kFeatureDim);
  for (int i = 0; i < kNumLanes; ++i) {
    const auto row = g.feature_row(i);
    for (int c = 0; c < graph::kFeatureDim; ++c) X(i, c) = row[static_cast<std::size_t>(c)];
  }
  return X;
}

}  // namespace

GatEncoder::GatEncoder(const GatConfig& cfg, Rng init_rng) : cfg_(cfg) {
  const int H = cfg_.hidden;
  for (int k = 0; k < cfg_.heads1; ++k) {
    nn::init_xavier(params_.add(wname(1, k), H, cfg_.in_dim), init_rng);
    nn::init_xavier(params_.add(aname(1, k), 2 * H, 1), init_rng);
  }
  nn::init_xavier(params_.add(wname(2, 0), H, cfg_.heads1 * H), init_rng);
  nn::init_xavier(params_.add(aname(2, 0), 2 * H, 1), init_rng);
  nn::init_xavier(params_.add("lane.W", kLaneTypeClasses, H), init_rng);
  params_.add("lane.b", kLaneTypeClasses, 1);
}

void GatEncoder::layer_forward(const TrafficGraph& g, const Tensor& X, int layer, int heads,
                               LayerCache& cache, Tensor& out, bool train_mode,
                               Rng* dropout_rng) const {
  const int H = cfg_.hidden;
  cache.input = X;
  cache.proj.assign(static_cast<std::size_t>(heads), Tensor());
  cache.score.assign(static_cast<std::size_t>(heads), {});
  cache.attn.assign(static_cast<std::size_t>(heads), {});
  cache.mask.assign(static_cast<std::size_t>(heads), {});
  cache.agg.assign(static_cast<std::size_t>(heads), Tensor());
  out = Tensor(kNumLanes, heads * H);

  const bool drop = train_mode && cfg_.dropout > 0.0 && dropout_rng;
  const double keep = 1.0 - cfg_.dropout;

  for (int k = 0; k < heads; ++k) {
    const Tensor& W = params_.value(wname(layer, k));
    const Tensor& a = params_.value(aname(layer, k));
    Tensor& P = cache.proj[static_cast<std::size_t>(k)];
    P = Tensor(kNumLanes, H);
    for (int i = 0; i < kNumLanes; ++i) {
      const double* x = X.row(i);
      double* p = P.row(i);
      for (int r = 0; r < H; ++r) {
        const double* w = W.row(r);
        double s = 0.0;
        for (int c = 0; c < X.cols; ++c) s += w[c] * x[c];
        p[r] = s;
      }
    }

    // attention logits a^T [p_i || p_j] per edge, then LeakyReLU
    auto& score = cache.score[static_cast<std::size_t>(k)];
    auto& attn = cache.attn[static_cast<std::size_t>(k)];
    auto& mask = cache.mask[static_cast<std::size_t>(k)];
    std::array<double, kNumLanes> self_term;
    for (int i = 0; i < kNumLanes; ++i) {
      double s = 0.0;
      const double* p = P.row(i);
      for (int r = 0; r < H; ++r) s += a.data[static_cast<std::size_t>(r)] * p[r];
      self_term[static_cast<std::size_t>(i)] = s;
    }
    std::array<double, kNumLanes> nbr_term;
    for (int j = 0; j < kNumLanes; ++j) {
      double s = 0.0;
      const double* p = P.row(j);
      for (int r = 0; r < H; ++r) s += a.data[static_cast<std::size_t>(H + r)] * p[r];
      nbr_term[static_cast<std::size_t>(j)] = s;
    }
    for (int i = 0; i < kNumLanes; ++i)
      for (int j : g.nbrs[static_cast<std::size_t>(i)])
        score.push_back(nn::leaky_relu(
            self_term[static_cast<std::size_t>(i)] + nbr_term[static_cast<std::size_t>(j)],
            cfg_.leaky_slope));

    // softmax within each neighborhood
    attn.resize(score.size());
    std::size_t e = 0;
    for (int i = 0; i < kNumLanes; ++i) {
      const std::size_t deg = g.nbrs[static_cast<std::size_t>(i)].size();
      nn::softmax(std::span<const double>(score.data() + e, deg),
                  std::span<double>(attn.data() + e, deg));
      e += deg;
    }

    if (drop) {
      mask.resize(attn.size());
      for (std::size_t m = 0; m < mask.size(); ++m)
        mask[m] = dropout_rng->uniform() < cfg_.dropout ? 0.0 : 1.0 / keep;
    }

    // aggregate s_i = sum_j b_ij p_j, then ELU into the head's output block
    Tensor& S = cache.agg[static_cast<std::size_t>(k)];
    S = Tensor(kNumLanes, H);
    e = 0;
    for (int i = 0; i < kNumLanes; ++i) {
      double* si = S.row(i);
      for (int j : g.nbrs[static_cast<std::size_t>(i)]) {
        const double b = drop ? attn[e] * mask[e] : attn[e];
        ++e;
        const double* pj = P.row(j);
        for (int r = 0; r < H; ++r) si[r] += b * pj[r];
      }
    }
    for (int i = 0; i < kNumLanes; ++i) {
      const double* si = S.row(i);
      double* oi = out.row(i) + static_cast<std::ptrdiff_t>(k) * H;
      for (int r = 0; r < H; ++r) oi[r] = nn::elu(si[r]);
    }
  }
}

GatEncoder::Output GatEncoder::forward(const TrafficGraph& g, Cache* cache, bool train_mode,
                                       Rng* dropout_rng) const {
  Cache local;
  Cache& c = cache ? *cache : local;
  const Tensor X = features_tensor(g);
  Tensor h1;
  layer_forward(g, X, 1, cfg_.heads1, c.l1, h1, train_mode, dropout_rng);
  Tensor h2;
  layer_forward(g, h1, 2, 1, c.l2, h2, train_mode, dropout_rng);
  c.node_embed = h2;

  Output out;
  out.node_embed = h2;
  out.pooled.assign(static_cast<std::size_t>(cfg_.hidden), 0.0);
  for (int i = 0; i < kNumLanes; ++i)
    for (int r = 0; r < cfg_.hidden; ++r)
      out.pooled[static_cast<std::size_t>(r)] += h2(i, r) / kNumLanes;

  const Tensor& Wl = params_.value("lane.W");
  const Tensor& bl = params_.value("lane.b");
  out.lane_logits = Tensor(kNumLanes, kLaneTypeClasses);
  for (int i = 0; i < kNumLanes; ++i) {
    Vec y;
    nn::dense_forward(Wl, bl.data, std::span<const double>(h2.row(i), static_cast<std::size_t>(cfg_.hidden)), y);
    for (int t = 0; t < kLaneTypeClasses; ++t) out.lane_logits(i, t) = y[static_cast<std::size_t>(t)];
  }
  return out;
}

void GatEncoder::layer_backward(const TrafficGraph& g, int layer, int heads,
                                const LayerCache& cache, const Tensor& gOut, Tensor* gX) {
  const int H = cfg_.hidden;
  const Tensor& X = cache.input;
  if (gX) *gX = Tensor(X.rows, X.cols);

  for (int k = 0; k < heads; ++k) {
    const Tensor& W = params_.value(wname(layer, k));
    const Tensor& a = params_.value(aname(layer, k));
    Tensor& gW = params_.grad(wname(layer, k));
    Tensor& ga = params_.grad(aname(layer, k));
    const Tensor& P = cache.proj[static_cast<std::size_t>(k)];
    const auto& score = cache.score[static_cast<std::size_t>(k)];
    const auto& attn = cache.attn[static_cast<std::size_t>(k)];
    const auto& mask = cache.mask[static_cast<std::size_t>(k)];
    const Tensor& S = cache.agg[static_cast<std::size_t>(k)];
    const bool drop = !mask.empty();

    Tensor gP(kNumLanes, H);

    // through ELU: gs_i
    Tensor gS(kNumLanes, H);
    for (int i = 0; i < kNumLanes; ++i) {
      const double* go = gOut.row(i) + static_cast<std::ptrdiff_t>(k) * H;
      const double* si = S.row(i);
      double* gs = gS.row(i);
      for (int r = 0; r < H; ++r) gs[r] = go[r] * nn::elu_grad(si[r]);
    }

    // attention coefficient grads and gP from the aggregation
    std::vector<double> g_attn(attn.size());
    std::size_t e = 0;
    for (int i = 0; i < kNumLanes; ++i) {
      const double* gs = gS.row(i);
      for (int j : g.nbrs[static_cast<std::size_t>(i)]) {
        const double* pj = P.row(j);
        double dot = 0.0;
        for (int r = 0; r < H; ++r) dot += gs[r] * pj[r];
        const double scale = drop ? mask[e] : 1.0;
        g_attn[e] = dot * scale;  // grad wrt pre-dropout coefficient
        const double b_used = drop ? attn[e] * mask[e] : attn[e];
        double* gpj = gP.row(j);
        for (int r = 0; r < H; ++r) gpj[r] += b_used * gs[r];
        ++e;
      }
    }

    // softmax rows then LeakyReLU, producing grads on the raw scores
    std::vector<double> g_score(score.size());
    e = 0;
    for (int i = 0; i < kNumLanes; ++i) {
      const std::size_t deg = g.nbrs[static_cast<std::size_t>(i)].size();
      nn::softmax_backward(std::span<const double>(attn.data() + e, deg),
                           std::span<const double>(g_attn.data() + e, deg),
                           std::span<double>(g_score.data() + e, deg));
      e += deg;
    }
    // score was stored post-LeakyReLU; recover slope from its sign
    for (std::size_t m = 0; m < g_score.size(); ++m)
      g_score[m] *= (score[m] > 0.0 ? 1.0 : cfg_.leaky_slope);

    // z_ij = a[0:H].p_i + a[H:2H].p_j
    e = 0;
    for (int i = 0; i < kNumLanes; ++i) {
      for (int j : g.nbrs[static_cast<std::size_t>(i)]) {
        const double gz = g_score[e];
        ++e;
        if (gz == 0.0) continue;
        const double* pi = P.row(i);
        const double* pj = P.row(j);
        double* gpi = gP.row(i);
        double* gpj = gP.row(j);
        for (int r = 0; r < H; ++r) {
          ga.data[static_cast<std::size_t>(r)] += gz * pi[r];
          ga.data[static_cast<std::size_t>(H + r)] += gz * pj[r];
          gpi[r] += gz * a.data[static_cast<std::size_t>(r)];
          gpj[r] += gz * a.data[static_cast<std::size_t>(H + r)];
        }
      }
    }

    // P = X W^T: gW += gP^T X, gX += gP W
    for (int i = 0; i < kNumLanes; ++i) {
      const double* x = X.row(i);
      const double* gp = gP.row(i);
      for (int r = 0; r < H; ++r) {
        double* gw = gW.row(r);
        const double grp = gp[r];
        if (grp == 0.0) continue;
        for (int c = 0; c < X.cols; ++c) gw[c] += grp * x[c];
      }
      if (gX) {
        double* gx = gX->row(i);
        for (int r = 0; r < H; ++r) {
          const double grp = gp[r];
          if (grp == 0.0) continue;
          const double* w = W.row(r);
          for (int c = 0; c < X.cols; ++c) gx[c] += grp * w[c];
        }
      }
    }
  }
}

void GatEncoder::backward(const TrafficGraph& g, const Cache& cache, const Vec* g_pooled,
                          const Tensor* g_nodes, const Tensor* g_logits) {
  const int H = cfg_.hidden;
  Tensor gH2(kNumLanes, H);
  if (g_pooled)
    for (int i = 0; i < kNumLanes; ++i)
      for (int r = 0; r < H; ++r)
        gH2(i, r) += (*g_pooled)[static_cast<std::size_t>(r)] / kNumLanes;
  if (g_nodes)
    for (int i = 0; i < kNumLanes; ++i)
      for (int r = 0; r < H; ++r) gH2(i, r) += (*g_nodes)(i, r);
  if (g_logits) {
    const Tensor& Wl = params_.value("lane.W");
    Tensor& gWl = params_.grad("lane.W");
    Tensor& gbl = params_.grad("lane.b");
    for (int i = 0; i < kNumLanes; ++i) {
      for (int t = 0; t < kLaneTypeClasses; ++t) {
        const double gl = (*g_logits)(i, t);
        if (gl == 0.0) continue;
        gbl.data[static_cast<std::size_t>(t)] += gl;
        const double* zi = cache.node_embed.row(i);
        double* gw = gWl.row(t);
        const double* w = Wl.row(t);
        double* gh = gH2.row(i);
        for (int r = 0; r < H; ++r) {
          gw[r] += gl * zi[r];
          gh[r] += gl * w[r];
        }
      }
    }
  }

  Tensor gH1;
  layer_backward(g, 2, 1, cache.l2, gH2, &gH1);
  layer_backward(g, 1, cfg_.heads1, cache.l1, gH1, nullptr);
}

std::vector<Tensor> GatEncoder::attention_matrices(const TrafficGraph& g) const {
  Cache cache;
  forward(g, &cache, /*train_mode=*/false, nullptr);
  std::vector<Tensor> out;
  auto emit = [&](const LayerCache& lc, int heads) {
    for (int k = 0; k < heads; ++k) {
      Tensor B(kNumLanes, kNumLanes);
      std::size_t e = 0;
      const auto& attn = lc.attn[static_cast<std::size_t>(k)];
      for (int i = 0; i < kNumLanes; ++i)
        for (int j : g.nbrs[static_cast<std::size_t>(i)]) B(i, j) = attn[e++];
      out.push_back(std::move(B));
    }
  };
  emit(cache.l1, cfg_.heads1);
  emit(cache.l2, 1);
  return out;
}

std::array<sim::LaneType, kNumLanes> assign_lane_types(const Tensor& lane_logits,
                                                       const double* a_lane) {
  std::array<sim::LaneType, kNumLanes> types;
  for (int i = 0; i < kNumLanes; ++i) {
    double logits[kLaneTypeClasses];
    for (int t = 0; t < kLaneTypeClasses; ++t) logits[t] = lane_logits(i, t);
    if (a_lane) {
      logits[static_cast<int>(sim::LaneType::CavOnly)] += a_lane[i];
      logits[static_cast<int>(sim::LaneType::HdvOnly)] -= a_lane[i];
    }
    double soft[kLaneTypeClasses];
    nn::softmax(std::span<const double>(logits, kLaneTypeClasses),
                std::span<double>(soft, kLaneTypeClasses));
    int best = 0;
    for (int t = 1; t < kLaneTypeClasses; ++t)
      if (soft[t] > soft[best]) best = t;
    int ties = 0;
    for (int t = 0; t < kLaneTypeClasses; ++t)
      if (soft[t] == soft[best]) ++ties;
    types[static_cast<std::size_t>(i)] =
        ties > 1 ? sim::LaneType::Mixed : static_cast<sim::LaneType>(best);
  }

  // every approach must keep at least one admitting lane per class
  for (int a = 0; a < 4; ++a) {
    bool cav_ok = false, hdv_ok = false;
    for (int m = 0; m < 3; ++m) {
      const sim::LaneType t = types[static_cast<std::size_t>(a * 3 + m)];
      cav_ok = cav_ok || sim::lane_admits(t, sim::VehClass::CAV);
      hdv_ok = hdv_ok || sim::lane_admits(t, sim::VehClass::HDV);
    }
    if (!cav_ok || !hdv_ok)
      for (int m = 0; m < 3; ++m)
        types[static_cast<std::size_t>(a * 3 + m)] = sim::LaneType::Mixed;
  }
  return types;
}

}  // namespace gatsac::gat
