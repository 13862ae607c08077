// Copyright 2026 The EmoTTS Authors
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

#include "emotts/nn/ops.h"

#include <cmath>
#include <numbers>

#include "emotts/errors.h"
#include "emotts/nn/conv.h"

namespace emotts::nn {

namespace {

void require_same_shape(const Var& a, const Var& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError(std::string(op) + ": shape mismatch " +
                     std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                     " vs " + std::to_string(b.rows()) + "x" +
                     std::to_string(b.cols()));
  }
}

}  // namespace

Var matmul(const Var& a, const Var& b) {
  if (a.cols() != b.rows()) throw ShapeError("matmul: inner dimension mismatch");
  return make_op(a.value() * b.value(), {a, b}, [a, b](const Matrix& g) {
    if (a.requires_grad()) a.accumulate_grad(g * b.value().transpose());
    if (b.requires_grad()) b.accumulate_grad(a.value().transpose() * g);
  });
}

Var matmul_nt(const Var& a, const Var& b) {
  if (a.cols() != b.cols()) throw ShapeError("matmul_nt: inner dimension mismatch");
  return make_op(a.value() * b.value().transpose(), {a, b},
                 [a, b](const Matrix& g) {
                   if (a.requires_grad()) a.accumulate_grad(g * b.value());
                   if (b.requires_grad())
                     b.accumulate_grad(g.transpose() * a.value());
                 });
}

Var add(const Var& a, const Var& b) {
  require_same_shape(a, b, "add");
  return make_op(a.value() + b.value(), {a, b}, [a, b](const Matrix& g) {
    if (a.requires_grad()) a.accumulate_grad(g);
    if (b.requires_grad()) b.accumulate_grad(g);
  });
}

Var sub(const Var& a, const Var& b) {
  require_same_shape(a, b, "sub");
  return make_op(a.value() - b.value(), {a, b}, [a, b](const Matrix& g) {
    if (a.requires_grad()) a.accumulate_grad(g);
    if (b.requires_grad()) b.accumulate_grad(-g);
  });
}

Var hadamard(const Var& a, const Var& b) {
  require_same_shape(a, b, "hadamard");
  return make_op(a.value().cwiseProduct(b.value()), {a, b},
                 [a, b](const Matrix& g) {
                   if (a.requires_grad())
                     a.accumulate_grad(g.cwiseProduct(b.value()));
                   if (b.requires_grad())
                     b.accumulate_grad(g.cwiseProduct(a.value()));
                 });
}

Var scale(const Var& a, double s) {
  return make_op(a.value() * s, {a},
                 [a, s](const Matrix& g) { a.accumulate_grad(g * s); });
}

Var add_row(const Var& a, const Var& row) {
  if (row.rows() != 1 || row.cols() != a.cols()) {
    throw ShapeError("add_row: expected 1x" + std::to_string(a.cols()) +
                     " row");
  }
  Matrix out = a.value();
  out.rowwise() += row.value().row(0);
  return make_op(std::move(out), {a, row}, [a, row](const Matrix& g) {
    if (a.requires_grad()) a.accumulate_grad(g);
    if (row.requires_grad()) row.accumulate_grad(g.colwise().sum());
  });
}

Var relu(const Var& x) {
  return make_op(x.value().cwiseMax(0.0), {x}, [x](const Matrix& g) {
    x.accumulate_grad(
        g.cwiseProduct((x.value().array() > 0.0).cast<double>().matrix()));
  });
}

Var tanh(const Var& x) {
  Matrix y = x.value().array().tanh().matrix();
  return make_op(y, {x}, [x, y](const Matrix& g) {
    x.accumulate_grad(
        (g.array() * (1.0 - y.array().square())).matrix());
  });
}

Var sigmoid(const Var& x) {
  Matrix y = (1.0 / (1.0 + (-x.value().array()).exp())).matrix();
  return make_op(y, {x}, [x, y](const Matrix& g) {
    x.accumulate_grad((g.array() * y.array() * (1.0 - y.array())).matrix());
  });
}

Var gelu(const Var& x) {
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  Matrix cdf = x.value().unaryExpr([inv_sqrt2](double v) {
    return 0.5 * (1.0 + std::erf(v * inv_sqrt2));
  });
  Matrix y = x.value().cwiseProduct(cdf);
  return make_op(std::move(y), {x}, [x, cdf, inv_sqrt_2pi](const Matrix& g) {
    const auto& v = x.value().array();
    Eigen::ArrayXXd pdf = (-0.5 * v.square()).exp() * inv_sqrt_2pi;
    x.accumulate_grad((g.array() * (cdf.array() + v * pdf)).matrix());
  });
}

Var abs(const Var& x) {
  return make_op(x.value().cwiseAbs(), {x}, [x](const Matrix& g) {
    x.accumulate_grad(
        (g.array() * x.value().array().sign()).matrix());
  });
}

Var square(const Var& x) {
  return make_op(x.value().cwiseAbs2(), {x}, [x](const Matrix& g) {
    x.accumulate_grad((2.0 * g.array() * x.value().array()).matrix());
  });
}

Var glu(const Var& x) {
  if (x.cols() % 2 != 0) throw ShapeError("glu: odd channel count");
  const Index half = x.cols() / 2;
  Matrix gate =
      (1.0 / (1.0 + (-x.value().rightCols(half).array()).exp())).matrix();
  Matrix y = x.value().leftCols(half).cwiseProduct(gate);
  return make_op(std::move(y), {x}, [x, gate, half](const Matrix& g) {
    Matrix dx(x.rows(), x.cols());
    const auto a = x.value().leftCols(half).array();
    dx.leftCols(half) = (g.array() * gate.array()).matrix();
    dx.rightCols(half) =
        (g.array() * a * gate.array() * (1.0 - gate.array())).matrix();
    x.accumulate_grad(dx);
  });
}

Var softmax_rows(const Var& x, Index valid_cols) {
  valid_cols = std::min(valid_cols, x.cols());
  if (valid_cols <= 0) throw ShapeError("softmax_rows: no valid columns");
  Matrix y = Matrix::Zero(x.rows(), x.cols());
  for (Index r = 0; r < x.rows(); ++r) {
    const auto row = x.value().row(r).head(valid_cols);
    const double m = row.maxCoeff();
    auto e = (row.array() - m).exp();
    y.row(r).head(valid_cols) = (e / e.sum()).matrix();
  }
  return make_op(y, {x}, [x, y](const Matrix& g) {
    Eigen::VectorXd dot = g.cwiseProduct(y).rowwise().sum();
    Matrix dx = y.cwiseProduct(g - dot.replicate(1, g.cols()));
    x.accumulate_grad(dx);
  });
}

Var log_softmax_rows(const Var& x) {
  Matrix y(x.rows(), x.cols());
  for (Index r = 0; r < x.rows(); ++r) {
    const auto row = x.value().row(r);
    const double m = row.maxCoeff();
    const double lse = m + std::log((row.array() - m).exp().sum());
    y.row(r) = row.array() - lse;
  }
  return make_op(y, {x}, [x, y](const Matrix& g) {
    Eigen::VectorXd total = g.rowwise().sum();
    Matrix p = y.array().exp().matrix();
    x.accumulate_grad(g - p.cwiseProduct(total.replicate(1, g.cols())));
  });
}

Var layer_norm(const Var& x, const Var& gamma, const Var& beta, double eps) {
  const Index n = x.cols();
  if (gamma.rows() != 1 || gamma.cols() != n || beta.rows() != 1 ||
      beta.cols() != n) {
    throw ShapeError("layer_norm: gain/bias must be 1x" + std::to_string(n));
  }
  Eigen::VectorXd mu = x.value().rowwise().mean();
  Matrix centered = x.value() - mu.replicate(1, n);
  Eigen::VectorXd inv_std =
      (centered.cwiseAbs2().rowwise().mean().array() + eps).rsqrt().matrix();
  Matrix xhat = centered.cwiseProduct(inv_std.replicate(1, n));
  Matrix y = xhat;
  y.array().rowwise() *= gamma.value().row(0).array();
  y.rowwise() += beta.value().row(0);
  return make_op(std::move(y), {x, gamma, beta},
                 [x, gamma, beta, xhat, inv_std, n](const Matrix& g) {
                   if (gamma.requires_grad())
                     gamma.accumulate_grad(g.cwiseProduct(xhat).colwise().sum());
                   if (beta.requires_grad())
                     beta.accumulate_grad(g.colwise().sum());
                   if (!x.requires_grad()) return;
                   Matrix dxhat = g;
                   dxhat.array().rowwise() *= gamma.value().row(0).array();
                   Eigen::VectorXd s1 = dxhat.rowwise().sum();
                   Eigen::VectorXd s2 = dxhat.cwiseProduct(xhat).rowwise().sum();
                   Matrix dx = (static_cast<double>(n) * dxhat -
                                s1.replicate(1, n) -
                                xhat.cwiseProduct(s2.replicate(1, n)));
                   dx = dx.cwiseProduct(inv_std.replicate(1, n)) /
                        static_cast<double>(n);
                   x.accumulate_grad(dx);
                 });
}

Var gather_rows(const Var& table, std::span<const Index> index) {
  Matrix out(static_cast<Index>(index.size()), table.cols());
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (index[i] < 0 || index[i] >= table.rows()) {
      throw IndexError("gather_rows: index " + std::to_string(index[i]) +
                       " outside table of " + std::to_string(table.rows()) +
                       " rows");
    }
    out.row(static_cast<Index>(i)) = table.value().row(index[i]);
  }
  std::vector<Index> idx(index.begin(), index.end());
  return make_op(std::move(out), {table}, [table, idx](const Matrix& g) {
    Matrix dt = Matrix::Zero(table.rows(), table.cols());
    for (std::size_t i = 0; i < idx.size(); ++i) {
      dt.row(idx[i]) += g.row(static_cast<Index>(i));
    }
    table.accumulate_grad(dt);
  });
}

Var conv1d(const Var& x, const Var& weight, const Var& bias, Index kernel,
           Index dilation) {
  if (weight.rows() != kernel * x.cols()) {
    throw ShapeError("conv1d: weight rows " + std::to_string(weight.rows()) +
                     " != kernel*Cin " + std::to_string(kernel * x.cols()));
  }
  const Index pad = same_padding(kernel, dilation);
  Matrix col = im2col(x.value(), kernel, dilation, pad);
  Matrix y = col * weight.value();
  y.rowwise() += bias.value().row(0);
  const Index channels = x.cols();
  return make_op(std::move(y), {x, weight, bias},
                 [x, weight, bias, col, kernel, dilation, pad,
                  channels](const Matrix& g) {
                   if (weight.requires_grad())
                     weight.accumulate_grad(col.transpose() * g);
                   if (bias.requires_grad())
                     bias.accumulate_grad(g.colwise().sum());
                   if (x.requires_grad()) {
                     Matrix dcol = g * weight.value().transpose();
                     x.accumulate_grad(
                         col2im(dcol, channels, kernel, dilation, pad));
                   }
                 });
}

Var slice_cols(const Var& x, Index start, Index count) {
  if (start < 0 || start + count > x.cols()) {
    throw ShapeError("slice_cols: range out of bounds");
  }
  return make_op(x.value().middleCols(start, count), {x},
                 [x, start, count](const Matrix& g) {
                   Matrix dx = Matrix::Zero(x.rows(), x.cols());
                   dx.middleCols(start, count) = g;
                   x.accumulate_grad(dx);
                 });
}

Var hcat(const std::vector<Var>& parts) {
  if (parts.empty()) throw ShapeError("hcat: no parts");
  Index total = 0;
  for (const auto& p : parts) {
    if (p.rows() != parts.front().rows()) throw ShapeError("hcat: row mismatch");
    total += p.cols();
  }
  Matrix out(parts.front().rows(), total);
  Index offset = 0;
  for (const auto& p : parts) {
    out.middleCols(offset, p.cols()) = p.value();
    offset += p.cols();
  }
  return make_op(std::move(out), parts, [parts](const Matrix& g) {
    Index off = 0;
    for (const auto& p : parts) {
      if (p.requires_grad()) p.accumulate_grad(g.middleCols(off, p.cols()));
      off += p.cols();
    }
  });
}

Var mask_rows(const Var& x, Index valid) {
  if (valid >= x.rows()) return x;
  valid = std::max<Index>(valid, 0);
  Matrix y = x.value();
  y.bottomRows(x.rows() - valid).setZero();
  return make_op(std::move(y), {x}, [x, valid](const Matrix& g) {
    Matrix dx = g;
    dx.bottomRows(x.rows() - valid).setZero();
    x.accumulate_grad(dx);
  });
}

Var dropout(const Var& x, double p, bool training, std::mt19937_64* rng) {
  if (!training || p <= 0.0) return x;
  if (rng == nullptr) throw DataError("dropout: training mode requires an rng");
  std::bernoulli_distribution keep(1.0 - p);
  Matrix mask(x.rows(), x.cols());
  const double s = 1.0 / (1.0 - p);
  for (Index i = 0; i < mask.size(); ++i) mask(i) = keep(*rng) ? s : 0.0;
  return make_op(x.value().cwiseProduct(mask), {x}, [x, mask](const Matrix& g) {
    x.accumulate_grad(g.cwiseProduct(mask));
  });
}

Var sum(const Var& x) {
  Matrix out(1, 1);
  out(0, 0) = x.value().sum();
  return make_op(std::move(out), {x}, [x](const Matrix& g) {
    x.accumulate_grad(Matrix::Constant(x.rows(), x.cols(), g(0, 0)));
  });
}

Var sum_rows_upto(const Var& x, Index valid) {
  valid = std::clamp<Index>(valid, 0, x.rows());
  Matrix out(1, 1);
  out(0, 0) = x.value().topRows(valid).sum();
  return make_op(std::move(out), {x}, [x, valid](const Matrix& g) {
    Matrix dx = Matrix::Zero(x.rows(), x.cols());
    dx.topRows(valid).setConstant(g(0, 0));
    x.accumulate_grad(dx);
  });
}

Var mean(const Var& x) {
  if (x.value().size() == 0) throw ShapeError("mean: empty input");
  return scale(sum(x), 1.0 / static_cast<double>(x.value().size()));
}

Var pick(const Var& x, Index row, Index col) {
  Matrix out(1, 1);
  out(0, 0) = x.value()(row, col);
  return make_op(std::move(out), {x}, [x, row, col](const Matrix& g) {
    Matrix dx = Matrix::Zero(x.rows(), x.cols());
    dx(row, col) = g(0, 0);
    x.accumulate_grad(dx);
  });
}

Var add_scalars(const std::vector<Var>& terms) {
  Matrix out = Matrix::Zero(1, 1);
  for (const auto& t : terms) out(0, 0) += t.scalar();
  return make_op(std::move(out), terms, [terms](const Matrix& g) {
    for (const auto& t : terms) {
      if (t.requires_grad()) t.accumulate_grad(g);
    }
  });
}

}  // namespace emotts::nn
