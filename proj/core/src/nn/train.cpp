#include <algorithm>
#include <cmath>
#include <numeric>

#include "evoprune/data/dataset.hpp"
#include "evoprune/nn/network.hpp"
#include "evoprune/rng.hpp"

namespace evoprune::nn {

namespace {

struct AdamState {
  std::vector<double> m, v;
  explicit AdamState(std::size_t n) : m(n, 0.0), v(n, 0.0) {}
};

void adam_step(std::vector<double>& params, const std::vector<double>& grad, AdamState& s, const TrainConfig& cfg,
               double bc1, double bc2) {
  for (std::size_t i = 0; i < params.size(); ++i) {
    s.m[i] = cfg.beta1 * s.m[i] + (1.0 - cfg.beta1) * grad[i];
    s.v[i] = cfg.beta2 * s.v[i] + (1.0 - cfg.beta2) * grad[i] * grad[i];
    const double mhat = s.m[i] / bc1;
    const double vhat = s.v[i] / bc2;
    params[i] -= cfg.learning_rate * mhat / (std::sqrt(vhat) + cfg.epsilon);
  }
}

}  // namespace

Network train(const Network& net, const data::LabeledSet& data, const TrainConfig& cfg) {
  cfg.validate();
  net.validate();
  if (data.empty()) throw EmptyDataError("training set is empty");
  data.validate();
  if (data.features.cols != net.input_width()) throw ShapeError("dataset width does not match network input");
  if (static_cast<std::size_t>(data.classes) > net.output_width()) {
    throw ShapeError("network has fewer outputs than dataset classes");
  }

  Network model = net;
  const std::size_t depth = model.layers.size();
  std::vector<AdamState> wstate, bstate;
  for (const auto& l : model.layers) {
    wstate.emplace_back(l.weights.size());
    bstate.emplace_back(l.bias.size());
  }

  Rng rng = make_rng(cfg.seed);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);

  std::vector<Tensor2> acts(depth + 1);
  std::vector<std::vector<double>> wgrad(depth), bgrad(depth);
  long step = 0;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t stop = std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
      const std::size_t n = stop - start;

      Tensor2& x = acts[0];
      x = Tensor2(n, data.features.cols);
      for (std::size_t r = 0; r < n; ++r) {
        auto src = data.features.row(order[start + r]);
        std::copy(src.begin(), src.end(), x.row(r).begin());
      }
      for (std::size_t k = 0; k < depth; ++k) {
        const Layer& l = model.layers[k];
        Tensor2 out(n, l.output_width());
        for (std::size_t r = 0; r < n; ++r) {
          double* o = out.values.data() + r * l.output_width();
          std::copy(l.bias.begin(), l.bias.end(), o);
          const double* in = acts[k].values.data() + r * l.input_width();
          for (std::size_t i = 0; i < l.input_width(); ++i) {
            const double xi = in[i];
            if (xi == 0.0) continue;
            const double* w = l.weights.values.data() + i * l.output_width();
            for (std::size_t j = 0; j < l.output_width(); ++j) o[j] += xi * w[j];
          }
          if (k + 1 < depth) {
            for (std::size_t j = 0; j < l.output_width(); ++j) o[j] = std::max(o[j], 0.0);
          }
        }
        acts[k + 1] = std::move(out);
      }

      // Softmax cross-entropy gradient w.r.t. logits, averaged over the batch.
      Tensor2 delta = acts[depth];
      const std::size_t classes = delta.cols;
      for (std::size_t r = 0; r < n; ++r) {
        auto row = delta.row(r);
        const double mx = *std::max_element(row.begin(), row.end());
        double sum = 0.0;
        for (auto& z : row) {
          z = std::exp(z - mx);
          sum += z;
        }
        for (std::size_t c = 0; c < classes; ++c) row[c] /= sum;
        row[static_cast<std::size_t>(data.labels[order[start + r]])] -= 1.0;
        for (auto& z : row) z /= static_cast<double>(n);
      }

      for (std::size_t k = depth; k-- > 0;) {
        const Layer& l = model.layers[k];
        const std::size_t iw = l.input_width();
        const std::size_t ow = l.output_width();
        auto& gw = wgrad[k];
        auto& gb = bgrad[k];
        gw.assign(l.weights.size(), 0.0);
        gb.assign(ow, 0.0);
        const Tensor2& in = acts[k];
        for (std::size_t r = 0; r < n; ++r) {
          const double* d = delta.values.data() + r * ow;
          const double* a = in.values.data() + r * iw;
          for (std::size_t j = 0; j < ow; ++j) gb[j] += d[j];
          for (std::size_t i = 0; i < iw; ++i) {
            const double ai = a[i];
            if (ai == 0.0) continue;
            double* g = gw.data() + i * ow;
            for (std::size_t j = 0; j < ow; ++j) g[j] += ai * d[j];
          }
        }
        if (k > 0) {
          Tensor2 prev(n, iw);
          for (std::size_t r = 0; r < n; ++r) {
            const double* d = delta.values.data() + r * ow;
            const double* a = in.values.data() + r * iw;
            double* p = prev.values.data() + r * iw;
            for (std::size_t i = 0; i < iw; ++i) {
              if (a[i] <= 0.0) continue;  // ReLU derivative
              const double* w = l.weights.values.data() + i * ow;
              double s = 0.0;
              for (std::size_t j = 0; j < ow; ++j) s += w[j] * d[j];
              p[i] = s;
            }
          }
          delta = std::move(prev);
        }
      }

      ++step;
      const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step));
      const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step));
      for (std::size_t k = 0; k < depth; ++k) {
        adam_step(model.layers[k].weights.values, wgrad[k], wstate[k], cfg, bc1, bc2);
        adam_step(model.layers[k].bias, bgrad[k], bstate[k], cfg, bc1, bc2);
      }
    }
  }
  return model;
}

}  // namespace evoprune::nn
