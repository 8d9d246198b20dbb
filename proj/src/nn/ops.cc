// Copyright 2026 The AdaCS-Norm Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "adacs/nn/ops.h"

#include <Eigen/Dense>
#include <cmath>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>

namespace adacs::nn {
namespace {

template <typename T>
using RowMat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using MatMap = Eigen::Map<RowMat<T>>;
template <typename T>
using ConstMatMap = Eigen::Map<const RowMat<T>>;
template <typename T>
using BlockMap = Eigen::Map<RowMat<T>, 0, Eigen::OuterStride<>>;
template <typename T>
using ConstBlockMap = Eigen::Map<const RowMat<T>, 0, Eigen::OuterStride<>>;

template <typename T>
MatMap<T> mat(Tensor<T>& t) {
  return MatMap<T>(t.data(), t.rows(), t.cols());
}

template <typename T>
ConstMatMap<T> mat(const Tensor<T>& t) {
  return ConstMatMap<T>(t.data(), t.rows(), t.cols());
}

// Rows [r0, r0 + nr) and columns [c0, c0 + nc) of a row-major tensor.
template <typename T>
BlockMap<T> block(Tensor<T>& t, int r0, int nr, int c0, int nc) {
  return BlockMap<T>(t.data() + static_cast<size_t>(r0) * t.cols() + c0, nr, nc,
                     Eigen::OuterStride<>(t.cols()));
}

template <typename T>
ConstBlockMap<T> block(const Tensor<T>& t, int r0, int nr, int c0, int nc) {
  return ConstBlockMap<T>(t.data() + static_cast<size_t>(r0) * t.cols() + c0, nr, nc,
                          Eigen::OuterStride<>(t.cols()));
}

[[noreturn]] void shape_error(const std::string& op, const std::string& detail) {
  throw std::invalid_argument(op + ": shape mismatch " + detail);
}

template <typename T>
void same_graph(Var<T> a, Var<T> b, const char* op) {
  if (!a.valid() || !b.valid() || &a.graph() != &b.graph()) {
    throw std::invalid_argument(std::string(op) + ": operands from different graphs");
  }
}

}  // namespace

template <typename T>
Var<T> matmul(Var<T> a, Var<T> b) {
  same_graph(a, b, "matmul");
  const auto& av = a.value();
  const auto& bv = b.value();
  if (av.cols() != bv.rows()) {
    shape_error("matmul", shape_string(av.rows(), av.cols()) + " * " +
                              shape_string(bv.rows(), bv.cols()));
  }
  Tensor<T> out(av.rows(), bv.cols());
  mat(out).noalias() = mat(av) * mat(bv);
  int ia = a.id(), ib = b.id();
  return a.graph().make(std::move(out), {ia, ib}, [ia, ib](Graph<T>& g, int self) {
    const auto& gy = g.grad(self);
    if (g.needs_grad(ia)) mat(g.grad(ia)).noalias() += mat(gy) * mat(g.value(ib)).transpose();
    if (g.needs_grad(ib)) mat(g.grad(ib)).noalias() += mat(g.value(ia)).transpose() * mat(gy);
  });
}

template <typename T>
Var<T> matmul_nt(Var<T> a, Var<T> b) {
  same_graph(a, b, "matmul_nt");
  const auto& av = a.value();
  const auto& bv = b.value();
  if (av.cols() != bv.cols()) {
    shape_error("matmul_nt", shape_string(av.rows(), av.cols()) + " * " +
                                 shape_string(bv.rows(), bv.cols()) + "^T");
  }
  Tensor<T> out(av.rows(), bv.rows());
  mat(out).noalias() = mat(av) * mat(bv).transpose();
  int ia = a.id(), ib = b.id();
  return a.graph().make(std::move(out), {ia, ib}, [ia, ib](Graph<T>& g, int self) {
    const auto& gy = g.grad(self);
    if (g.needs_grad(ia)) mat(g.grad(ia)).noalias() += mat(gy) * mat(g.value(ib));
    if (g.needs_grad(ib)) mat(g.grad(ib)).noalias() += mat(gy).transpose() * mat(g.value(ia));
  });
}

template <typename T>
Var<T> linear(Var<T> x, Var<T> w, Var<T> b) {
  same_graph(x, w, "linear");
  const auto& xv = x.value();
  const auto& wv = w.value();
  if (xv.cols() != wv.cols()) {
    shape_error("linear", "x" + shape_string(xv.rows(), xv.cols()) + " W" +
                              shape_string(wv.rows(), wv.cols()));
  }
  Tensor<T> out(xv.rows(), wv.rows());
  mat(out).noalias() = mat(xv) * mat(wv).transpose();
  int ix = x.id(), iw = w.id(), ib = -1;
  if (b.valid()) {
    same_graph(x, b, "linear");
    const auto& bv = b.value();
    if (bv.rows() != 1 || bv.cols() != wv.rows()) {
      shape_error("linear", "bias" + shape_string(bv.rows(), bv.cols()) + " for " +
                                std::to_string(wv.rows()) + " outputs");
    }
    mat(out).rowwise() += mat(bv).row(0);
    ib = b.id();
  }
  std::vector<int> inputs = {ix, iw};
  if (ib >= 0) inputs.push_back(ib);
  return x.graph().make(std::move(out), inputs, [ix, iw, ib](Graph<T>& g, int self) {
    const auto& gy = g.grad(self);
    if (g.needs_grad(ix)) mat(g.grad(ix)).noalias() += mat(gy) * mat(g.value(iw));
    if (g.needs_grad(iw)) mat(g.grad(iw)).noalias() += mat(gy).transpose() * mat(g.value(ix));
    if (ib >= 0 && g.needs_grad(ib)) mat(g.grad(ib)).row(0) += mat(gy).colwise().sum();
  });
}

template <typename T>
Var<T> add(Var<T> a, Var<T> b) {
  same_graph(a, b, "add");
  const auto& av = a.value();
  const auto& bv = b.value();
  if (av.rows() != bv.rows() || av.cols() != bv.cols()) {
    shape_error("add", shape_string(av.rows(), av.cols()) + " + " +
                           shape_string(bv.rows(), bv.cols()));
  }
  Tensor<T> out = av;
  mat(out) += mat(bv);
  int ia = a.id(), ib = b.id();
  return a.graph().make(std::move(out), {ia, ib}, [ia, ib](Graph<T>& g, int self) {
    const auto& gy = g.grad(self);
    if (g.needs_grad(ia)) mat(g.grad(ia)) += mat(gy);
    if (g.needs_grad(ib)) mat(g.grad(ib)) += mat(gy);
  });
}

template <typename T>
Var<T> scale(Var<T> x, T factor) {
  Tensor<T> out = x.value();
  mat(out) *= factor;
  int ix = x.id();
  return x.graph().make(std::move(out), {ix}, [ix, factor](Graph<T>& g, int self) {
    mat(g.grad(ix)) += factor * mat(g.grad(self));
  });
}

template <typename T>
Var<T> gelu(Var<T> x) {
  const auto& xv = x.value();
  Tensor<T> out(xv.rows(), xv.cols());
  const T inv_sqrt2 = T(0.70710678118654752440);
  for (size_t i = 0; i < xv.size(); ++i) {
    T v = xv[i];
    out[i] = T(0.5) * v * (T(1) + std::erf(v * inv_sqrt2));
  }
  int ix = x.id();
  return x.graph().make(std::move(out), {ix}, [ix, inv_sqrt2](Graph<T>& g, int self) {
    const auto& xv = g.value(ix);
    const auto& gy = g.grad(self);
    auto& gx = g.grad(ix);
    const T inv_sqrt2pi = T(0.39894228040143267794);
    for (size_t i = 0; i < xv.size(); ++i) {
      T v = xv[i];
      T cdf = T(0.5) * (T(1) + std::erf(v * inv_sqrt2));
      T pdf = inv_sqrt2pi * std::exp(T(-0.5) * v * v);
      gx[i] += gy[i] * (cdf + v * pdf);
    }
  });
}

template <typename T>
Var<T> layer_norm(Var<T> x, Var<T> gamma, Var<T> beta, T eps) {
  same_graph(x, gamma, "layer_norm");
  same_graph(x, beta, "layer_norm");
  const auto& xv = x.value();
  const int n = xv.rows(), d = xv.cols();
  if (gamma.rows() != 1 || gamma.cols() != d || beta.rows() != 1 || beta.cols() != d) {
    shape_error("layer_norm", "gain/bias must be 1x" + std::to_string(d));
  }
  auto xhat = std::make_shared<Tensor<T>>(n, d);
  auto inv_std = std::make_shared<std::vector<T>>(n);
  Tensor<T> out(n, d);
  const auto& gv = gamma.value();
  const auto& bv = beta.value();
  for (int r = 0; r < n; ++r) {
    auto row = xv.row(r);
    T mean = std::accumulate(row.begin(), row.end(), T(0)) / T(d);
    T var = 0;
    for (T v : row) var += (v - mean) * (v - mean);
    var /= T(d);
    T is = T(1) / std::sqrt(var + eps);
    (*inv_std)[r] = is;
    for (int c = 0; c < d; ++c) {
      T h = (row[c] - mean) * is;
      (*xhat)(r, c) = h;
      out(r, c) = h * gv[c] + bv[c];
    }
  }
  int ix = x.id(), ig = gamma.id(), ib = beta.id();
  return x.graph().make(
      std::move(out), {ix, ig, ib}, [ix, ig, ib, xhat, inv_std](Graph<T>& g, int self) {
        const auto& gy = g.grad(self);
        const int n = gy.rows(), d = gy.cols();
        const auto& gv = g.value(ig);
        if (g.needs_grad(ig)) {
          auto& gg = g.grad(ig);
          for (int r = 0; r < n; ++r)
            for (int c = 0; c < d; ++c) gg[c] += gy(r, c) * (*xhat)(r, c);
        }
        if (g.needs_grad(ib)) {
          auto& gb = g.grad(ib);
          for (int r = 0; r < n; ++r)
            for (int c = 0; c < d; ++c) gb[c] += gy(r, c);
        }
        if (g.needs_grad(ix)) {
          auto& gx = g.grad(ix);
          std::vector<T> dxhat(d);
          for (int r = 0; r < n; ++r) {
            T mean_d = 0, mean_dx = 0;
            for (int c = 0; c < d; ++c) {
              dxhat[c] = gy(r, c) * gv[c];
              mean_d += dxhat[c];
              mean_dx += dxhat[c] * (*xhat)(r, c);
            }
            mean_d /= T(d);
            mean_dx /= T(d);
            for (int c = 0; c < d; ++c) {
              gx(r, c) += (*inv_std)[r] * (dxhat[c] - mean_d - (*xhat)(r, c) * mean_dx);
            }
          }
        }
      });
}

template <typename T>
Var<T> softmax_rows(Var<T> x) {
  const auto& xv = x.value();
  Tensor<T> out(xv.rows(), xv.cols());
  for (int r = 0; r < xv.rows(); ++r) {
    auto in = xv.row(r);
    auto o = out.row(r);
    T mx = in.empty() ? T(0) : *std::max_element(in.begin(), in.end());
    T z = 0;
    for (size_t c = 0; c < in.size(); ++c) z += (o[c] = std::exp(in[c] - mx));
    for (T& v : o) v /= z;
  }
  int ix = x.id();
  return x.graph().make(std::move(out), {ix}, [ix](Graph<T>& g, int self) {
    const auto& y = g.value(self);
    const auto& gy = g.grad(self);
    auto& gx = g.grad(ix);
    for (int r = 0; r < y.rows(); ++r) {
      T dot = 0;
      for (int c = 0; c < y.cols(); ++c) dot += gy(r, c) * y(r, c);
      for (int c = 0; c < y.cols(); ++c) gx(r, c) += y(r, c) * (gy(r, c) - dot);
    }
  });
}

template <typename T>
Var<T> gather_rows(Var<T> table, std::span<const int> rows) {
  const auto& tv = table.value();
  const int d = tv.cols();
  Tensor<T> out(static_cast<int>(rows.size()), d);
  for (size_t i = 0; i < rows.size(); ++i) {
    int r = rows[i];
    if (r < 0 || r >= tv.rows()) {
      throw std::out_of_range("gather_rows: row " + std::to_string(r) + " outside table of " +
                              std::to_string(tv.rows()) + " rows");
    }
    std::copy(tv.row(r).begin(), tv.row(r).end(), out.row(static_cast<int>(i)).begin());
  }
  int it = table.id();
  std::vector<int> idx(rows.begin(), rows.end());
  return table.graph().make(std::move(out), {it}, [it, idx = std::move(idx)](Graph<T>& g, int self) {
    const auto& gy = g.grad(self);
    auto& gt = g.grad(it);
    for (size_t i = 0; i < idx.size(); ++i) {
      auto src = gy.row(static_cast<int>(i));
      auto dst = gt.row(idx[i]);
      for (size_t c = 0; c < src.size(); ++c) dst[c] += src[c];
    }
  });
}

template <typename T>
Var<T> concat_rows(std::span<const Var<T>> parts) {
  if (parts.empty()) throw std::invalid_argument("concat_rows: no inputs");
  const int d = parts[0].cols();
  int n = 0;
  std::vector<int> ids;
  for (const auto& p : parts) {
    same_graph(parts[0], p, "concat_rows");
    if (p.cols() != d) shape_error("concat_rows", "column counts differ");
    n += p.rows();
    ids.push_back(p.id());
  }
  Tensor<T> out(n, d);
  size_t off = 0;
  for (const auto& p : parts) {
    std::copy(p.value().values().begin(), p.value().values().end(), out.data() + off);
    off += p.value().size();
  }
  return parts[0].graph().make(std::move(out), ids, [ids](Graph<T>& g, int self) {
    const auto& gy = g.grad(self);
    size_t off = 0;
    for (int id : ids) {
      size_t len = g.value(id).size();
      if (g.needs_grad(id)) {
        auto& gx = g.grad(id);
        for (size_t i = 0; i < len; ++i) gx[i] += gy[off + i];
      }
      off += len;
    }
  });
}

template <typename T>
Var<T> segment_mean(Var<T> x, std::span<const Range> segments) {
  const auto& xv = x.value();
  const int d = xv.cols();
  Tensor<T> out(static_cast<int>(segments.size()), d);
  for (size_t s = 0; s < segments.size(); ++s) {
    const Range& r = segments[s];
    if (r.length <= 0 || r.start < 0 || r.end() > xv.rows()) {
      throw std::invalid_argument("segment_mean: invalid segment");
    }
    auto o = out.row(static_cast<int>(s));
    for (int i = r.start; i < r.end(); ++i) {
      auto row = xv.row(i);
      for (int c = 0; c < d; ++c) o[c] += row[c];
    }
    for (T& v : o) v /= T(r.length);
  }
  int ix = x.id();
  std::vector<Range> segs(segments.begin(), segments.end());
  return x.graph().make(std::move(out), {ix}, [ix, segs = std::move(segs)](Graph<T>& g, int self) {
    const auto& gy = g.grad(self);
    auto& gx = g.grad(ix);
    for (size_t s = 0; s < segs.size(); ++s) {
      auto src = gy.row(static_cast<int>(s));
      T inv = T(1) / T(segs[s].length);
      for (int i = segs[s].start; i < segs[s].end(); ++i) {
        auto dst = gx.row(i);
        for (size_t c = 0; c < src.size(); ++c) dst[c] += src[c] * inv;
      }
    }
  });
}

namespace {

struct AttentionRun {
  int q0 = 0;
  int nq = 0;
  Range keys;
  size_t prob_offset = 0;  // into the probability buffer, per head
};

std::vector<AttentionRun> group_runs(std::span<const Range> key_ranges, int heads) {
  std::vector<AttentionRun> runs;
  size_t off = 0;
  for (int i = 0; i < static_cast<int>(key_ranges.size()); ++i) {
    if (!runs.empty() && runs.back().keys == key_ranges[i] && runs.back().q0 + runs.back().nq == i) {
      ++runs.back().nq;
      continue;
    }
    if (!runs.empty()) off += static_cast<size_t>(runs.back().nq) * runs.back().keys.length * heads;
    runs.push_back({i, 1, key_ranges[i], off});
  }
  return runs;
}

void check_attention(int nq, int nk, int d, int kd, int vd, int vrows,
                     std::span<const Range> ranges, int heads) {
  if (heads <= 0 || d % heads != 0) {
    throw std::invalid_argument("attention: model width " + std::to_string(d) +
                                " not divisible by " + std::to_string(heads) + " heads");
  }
  if (kd != d || vd != d || vrows != nk) shape_error("attention", "q/k/v widths differ");
  if (static_cast<int>(ranges.size()) != nq) shape_error("attention", "one key range per query required");
  for (const Range& r : ranges) {
    if (r.length <= 0 || r.start < 0 || r.end() > nk) {
      throw std::invalid_argument("attention: key range outside key matrix");
    }
  }
}

}  // namespace

template <typename T>
Var<T> range_attention(Var<T> q, Var<T> k, Var<T> v, std::span<const Range> key_ranges,
                       int heads) {
  same_graph(q, k, "attention");
  same_graph(q, v, "attention");
  const auto& qv = q.value();
  const auto& kv = k.value();
  const auto& vv = v.value();
  const int nq = qv.rows(), d = qv.cols();
  check_attention(nq, kv.rows(), d, kv.cols(), vv.cols(), vv.rows(), key_ranges, heads);
  const int dh = d / heads;
  const T scale_factor = T(1) / std::sqrt(T(dh));

  auto runs = std::make_shared<std::vector<AttentionRun>>(group_runs(key_ranges, heads));
  size_t total = 0;
  if (!runs->empty()) {
    total = runs->back().prob_offset +
            static_cast<size_t>(runs->back().nq) * runs->back().keys.length * heads;
  }
  auto probs = std::make_shared<AlignedVector<T>>(total);
  Tensor<T> out(nq, d);
  for (const auto& run : *runs) {
    const int kl = run.keys.length;
    for (int h = 0; h < heads; ++h) {
      T* p = probs->data() + run.prob_offset + static_cast<size_t>(h) * run.nq * kl;
      MatMap<T> pm(p, run.nq, kl);
      pm.noalias() = block(qv, run.q0, run.nq, h * dh, dh) *
                     block(kv, run.keys.start, kl, h * dh, dh).transpose();
      pm *= scale_factor;
      for (int r = 0; r < run.nq; ++r) {
        auto row = pm.row(r);
        T mx = row.maxCoeff();
        row = (row.array() - mx).exp();
        row /= row.sum();
      }
      block(out, run.q0, run.nq, h * dh, dh).noalias() =
          pm * block(vv, run.keys.start, kl, h * dh, dh);
    }
  }

  int iq = q.id(), ik = k.id(), iv = v.id();
  return q.graph().make(
      std::move(out), {iq, ik, iv},
      [iq, ik, iv, heads, dh, scale_factor, runs, probs](Graph<T>& g, int self) {
        const auto& gy = g.grad(self);
        const auto& qv = g.value(iq);
        const auto& kv = g.value(ik);
        const auto& vv = g.value(iv);
        bool need_q = g.needs_grad(iq), need_k = g.needs_grad(ik), need_v = g.needs_grad(iv);
        Tensor<T>* gq = need_q ? &g.grad(iq) : nullptr;
        Tensor<T>* gk = need_k ? &g.grad(ik) : nullptr;
        Tensor<T>* gv = need_v ? &g.grad(iv) : nullptr;
        RowMat<T> dp, ds;
        for (const auto& run : *runs) {
          const int kl = run.keys.length;
          for (int h = 0; h < heads; ++h) {
            const T* p = probs->data() + run.prob_offset + static_cast<size_t>(h) * run.nq * kl;
            ConstMatMap<T> pm(p, run.nq, kl);
            auto go = block(gy, run.q0, run.nq, h * dh, dh);
            if (need_v) {
              block(*gv, run.keys.start, kl, h * dh, dh).noalias() += pm.transpose() * go;
            }
            if (!need_q && !need_k) continue;
            dp.noalias() = go * block(vv, run.keys.start, kl, h * dh, dh).transpose();
            ds = pm.array() * dp.array();
            Eigen::Matrix<T, Eigen::Dynamic, 1> rs = ds.rowwise().sum();
            ds = pm.array() * (dp.colwise() - rs).array();
            ds *= scale_factor;
            if (need_q) {
              block(*gq, run.q0, run.nq, h * dh, dh).noalias() +=
                  ds * block(kv, run.keys.start, kl, h * dh, dh);
            }
            if (need_k) {
              block(*gk, run.keys.start, kl, h * dh, dh).noalias() +=
                  ds.transpose() * block(qv, run.q0, run.nq, h * dh, dh);
            }
          }
        }
      });
}

template <typename T>
std::vector<Tensor<T>> range_attention_weights(const Tensor<T>& q, const Tensor<T>& k,
                                               std::span<const Range> key_ranges,
                                               int heads) {
  const int nq = q.rows(), nk = k.rows(), d = q.cols();
  check_attention(nq, nk, d, k.cols(), k.cols(), nk, key_ranges, heads);
  const int dh = d / heads;
  const T scale_factor = T(1) / std::sqrt(T(dh));
  std::vector<Tensor<T>> out(heads, Tensor<T>(nq, nk));
  for (int h = 0; h < heads; ++h) {
    for (int i = 0; i < nq; ++i) {
      const Range& r = key_ranges[i];
      std::vector<T> s(r.length);
      for (int j = 0; j < r.length; ++j) {
        T acc = 0;
        for (int c = 0; c < dh; ++c) acc += q(i, h * dh + c) * k(r.start + j, h * dh + c);
        s[j] = acc * scale_factor;
      }
      T mx = *std::max_element(s.begin(), s.end());
      T z = 0;
      for (T& v : s) z += (v = std::exp(v - mx));
      for (int j = 0; j < r.length; ++j) out[h](i, r.start + j) = s[j] / z;
    }
  }
  return out;
}

template <typename T>
Var<T> cross_entropy(Var<T> logits, std::span<const int> targets) {
  const auto& lv = logits.value();
  const int n = lv.rows(), kcls = lv.cols();
  if (static_cast<int>(targets.size()) != n) {
    shape_error("cross_entropy", std::to_string(n) + " rows vs " +
                                     std::to_string(targets.size()) + " targets");
  }
  auto probs = std::make_shared<Tensor<T>>(n, kcls);
  double total = 0.0;
  for (int r = 0; r < n; ++r) {
    int t = targets[r];
    if (t < 0 || t >= kcls) {
      throw std::out_of_range("cross_entropy: target " + std::to_string(t) +
                              " outside [0, " + std::to_string(kcls) + ")");
    }
    auto row = lv.row(r);
    T mx = *std::max_element(row.begin(), row.end());
    T z = 0;
    for (int c = 0; c < kcls; ++c) z += ((*probs)(r, c) = std::exp(row[c] - mx));
    for (int c = 0; c < kcls; ++c) (*probs)(r, c) /= z;
    total += static_cast<double>(mx + std::log(z) - row[t]);
  }
  Tensor<T> out(1, 1);
  out[0] = n == 0 ? T(0) : static_cast<T>(total / n);
  int il = logits.id();
  std::vector<int> tgt(targets.begin(), targets.end());
  return logits.graph().make(std::move(out), {il},
                             [il, probs, tgt = std::move(tgt)](Graph<T>& g, int self) {
                               const int n = static_cast<int>(tgt.size());
                               if (n == 0) return;
                               T coef = g.grad(self)[0] / T(n);
                               auto& gl = g.grad(il);
                               for (int r = 0; r < n; ++r) {
                                 auto dst = gl.row(r);
                                 auto p = probs->row(r);
                                 for (size_t c = 0; c < dst.size(); ++c) dst[c] += coef * p[c];
                                 dst[tgt[r]] -= coef;
                               }
                             });
}

template <typename T>
Var<T> sum(Var<T> x) {
  double acc = 0.0;
  for (T v : x.value().values()) acc += static_cast<double>(v);
  Tensor<T> out(1, 1);
  out[0] = static_cast<T>(acc);
  int ix = x.id();
  return x.graph().make(std::move(out), {ix}, [ix](Graph<T>& g, int self) {
    T gy = g.grad(self)[0];
    for (T& v : g.grad(ix).values()) v += gy;
  });
}

template <typename T>
Var<T> weighted_sum(std::span<const Var<T>> scalars, std::span<const double> weights) {
  if (scalars.empty() || scalars.size() != weights.size()) {
    throw std::invalid_argument("weighted_sum: need one weight per scalar");
  }
  double acc = 0.0;
  std::vector<int> ids;
  for (size_t i = 0; i < scalars.size(); ++i) {
    if (scalars[i].rows() != 1 || scalars[i].cols() != 1) {
      shape_error("weighted_sum", "operands must be 1x1");
    }
    acc += weights[i] * static_cast<double>(scalars[i].value()[0]);
    ids.push_back(scalars[i].id());
  }
  Tensor<T> out(1, 1);
  out[0] = static_cast<T>(acc);
  std::vector<double> w(weights.begin(), weights.end());
  return scalars[0].graph().make(std::move(out), ids, [ids, w](Graph<T>& g, int self) {
    T gy = g.grad(self)[0];
    for (size_t i = 0; i < ids.size(); ++i) {
      if (g.needs_grad(ids[i])) g.grad(ids[i])[0] += static_cast<T>(w[i]) * gy;
    }
  });
}

#define ADACS_INSTANTIATE_OPS(T)                                                        \
  template Var<T> matmul(Var<T>, Var<T>);                                               \
  template Var<T> matmul_nt(Var<T>, Var<T>);                                            \
  template Var<T> linear(Var<T>, Var<T>, Var<T>);                                       \
  template Var<T> add(Var<T>, Var<T>);                                                  \
  template Var<T> scale(Var<T>, T);                                                     \
  template Var<T> gelu(Var<T>);                                                         \
  template Var<T> layer_norm(Var<T>, Var<T>, Var<T>, T);                                \
  template Var<T> softmax_rows(Var<T>);                                                 \
  template Var<T> gather_rows(Var<T>, std::span<const int>);                            \
  template Var<T> concat_rows(std::span<const Var<T>>);                                 \
  template Var<T> segment_mean(Var<T>, std::span<const Range>);                         \
  template Var<T> range_attention(Var<T>, Var<T>, Var<T>, std::span<const Range>, int); \
  template std::vector<Tensor<T>> range_attention_weights(                              \
      const Tensor<T>&, const Tensor<T>&, std::span<const Range>, int);                 \
  template Var<T> cross_entropy(Var<T>, std::span<const int>);                          \
  template Var<T> sum(Var<T>);                                                          \
  template Var<T> weighted_sum(std::span<const Var<T>>, std::span<const double>);

ADACS_INSTANTIATE_OPS(float)
ADACS_INSTANTIATE_OPS(double)

}  // namespace adacs::nn
