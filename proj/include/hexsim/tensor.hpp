// Copyright 2026 The hexsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Dense labelled tensors (complex double, row-major over the label order),
// pairwise contraction with a greedy path, truncated SVD and PSD eigensolves.

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hexsim/errors.hpp"
#include "hexsim/pauli.hpp"

namespace hexsim {

using Labels = std::vector<std::string>;
using Dims = std::vector<std::size_t>;
using MatrixC = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic>;
using RowMatrixC = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline std::size_t product(const Dims &d) {
    return std::accumulate(d.begin(), d.end(), std::size_t{1}, std::multiplies<>());
}

inline std::string join_labels(const Labels &labels) {
    std::string s;
    for (const auto &l : labels) {
        s += (s.empty() ? "" : ",") + l;
    }
    return "[" + s + "]";
}

class Tensor {
  public:
    Tensor() : data_(1, 0.0) {
    }

    Tensor(Labels labels, Dims dims) : labels_(std::move(labels)), dims_(std::move(dims)) {
        check_shape();
        data_.assign(product(dims_), 0.0);
    }

    Tensor(Labels labels, Dims dims, std::vector<cplx> data)
        : labels_(std::move(labels)), dims_(std::move(dims)), data_(std::move(data)) {
        check_shape();
        if (data_.size() != product(dims_)) {
            throw ArgumentError("tensor data length " + std::to_string(data_.size()) + " does not match shape");
        }
    }

    static Tensor scalar(cplx v) {
        return Tensor({}, {}, {v});
    }

    std::size_t rank() const {
        return labels_.size();
    }
    const Labels &labels() const {
        return labels_;
    }
    const Dims &dims() const {
        return dims_;
    }
    std::size_t size() const {
        return data_.size();
    }
    const std::vector<cplx> &data() const {
        return data_;
    }
    std::vector<cplx> &data() {
        return data_;
    }

    bool has(const std::string &label) const {
        return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
    }

    std::size_t axis(const std::string &label) const {
        auto it = std::find(labels_.begin(), labels_.end(), label);
        if (it == labels_.end()) {
            throw ArgumentError("tensor has no label '" + label + "' (labels " + join_labels(labels_) + ")");
        }
        return static_cast<std::size_t>(it - labels_.begin());
    }

    std::size_t dim(const std::string &label) const {
        return dims_[axis(label)];
    }

    cplx value() const {
        if (rank() != 0) {
            throw ArgumentError("tensor is not a scalar: " + join_labels(labels_));
        }
        return data_[0];
    }

    /// Element access by a full multi-index in label order.
    cplx &at(const std::vector<std::size_t> &idx) {
        return data_[flat(idx)];
    }
    cplx at(const std::vector<std::size_t> &idx) const {
        return data_[flat(idx)];
    }

    Tensor permuted(const Labels &order) const {
        if (order.size() != rank()) {
            throw ArgumentError("permutation " + join_labels(order) + " does not match " + join_labels(labels_));
        }
        std::vector<std::size_t> src_axis(order.size());
        Dims new_dims(order.size());
        for (std::size_t k = 0; k < order.size(); ++k) {
            src_axis[k] = axis(order[k]);
            new_dims[k] = dims_[src_axis[k]];
        }
        bool identity = true;
        for (std::size_t k = 0; k < order.size(); ++k) {
            identity = identity && src_axis[k] == k;
        }
        if (identity) {
            return *this;
        }
        std::vector<std::size_t> src_stride(rank(), 1);
        for (std::size_t k = rank(); k-- > 1;) {
            src_stride[k - 1] = src_stride[k] * dims_[k];
        }
        std::vector<std::size_t> stride(order.size());
        for (std::size_t k = 0; k < order.size(); ++k) {
            stride[k] = src_stride[src_axis[k]];
        }
        Tensor out(order, new_dims);
        const std::size_t r = order.size();
        std::vector<std::size_t> idx(r, 0);
        std::size_t src = 0;
        // Inner loop over the last destination axis, odometer over the rest.
        const std::size_t inner = r ? new_dims[r - 1] : 1;
        const std::size_t inner_stride = r ? stride[r - 1] : 0;
        for (std::size_t dst = 0; dst < out.data_.size(); dst += inner) {
            std::size_t s = src;
            for (std::size_t k = 0; k < inner; ++k, s += inner_stride) {
                out.data_[dst + k] = data_[s];
            }
            for (std::size_t k = r - 1; k-- > 0;) {
                if (++idx[k] < new_dims[k]) {
                    src += stride[k];
                    break;
                }
                src -= stride[k] * (new_dims[k] - 1);
                idx[k] = 0;
            }
        }
        return out;
    }

    Tensor conj() const {
        Tensor out = *this;
        for (auto &v : out.data_) {
            v = std::conj(v);
        }
        return out;
    }

    Tensor relabeled(const std::map<std::string, std::string> &rename) const {
        Tensor out = *this;
        for (auto &l : out.labels_) {
            if (auto it = rename.find(l); it != rename.end()) {
                l = it->second;
            }
        }
        out.check_shape();
        return out;
    }

    Tensor &scale(cplx c) {
        for (auto &v : data_) {
            v *= c;
        }
        return *this;
    }

    /// Sums over one axis.
    Tensor summed_over(const std::string &label) const {
        std::size_t a = axis(label);
        Labels rest = labels_;
        rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(a));
        rest.push_back(label);
        Tensor p = permuted(rest);
        rest.pop_back();
        Dims rd = p.dims_;
        std::size_t d = rd.back();
        rd.pop_back();
        Tensor out(rest, rd);
        for (std::size_t i = 0; i < out.data_.size(); ++i) {
            cplx s = 0.0;
            for (std::size_t k = 0; k < d; ++k) {
                s += p.data_[i * d + k];
            }
            out.data_[i] = s;
        }
        return out;
    }

    double norm1() const {
        double s = 0.0;
        for (cplx v : data_) {
            s += std::abs(v);
        }
        return s;
    }

    double norm2() const {
        double s = 0.0;
        for (cplx v : data_) {
            s += std::norm(v);
        }
        return std::sqrt(s);
    }

  private:
    void check_shape() const {
        if (labels_.size() != dims_.size()) {
            throw ArgumentError("label and dimension counts differ");
        }
        std::set<std::string> seen(labels_.begin(), labels_.end());
        if (seen.size() != labels_.size()) {
            throw ArgumentError("duplicate tensor label in " + join_labels(labels_));
        }
    }

    std::size_t flat(const std::vector<std::size_t> &idx) const {
        if (idx.size() != rank()) {
            throw ArgumentError("index rank mismatch");
        }
        std::size_t f = 0;
        for (std::size_t k = 0; k < idx.size(); ++k) {
            if (idx[k] >= dims_[k]) {
                throw ArgumentError("index out of range");
            }
            f = f * dims_[k] + idx[k];
        }
        return f;
    }

    Labels labels_;
    Dims dims_;
    std::vector<cplx> data_;
};

/// Sum over the diagonal of two equally sized axes.
inline Tensor trace(const Tensor &t, const std::string &a, const std::string &b) {
    if (t.dim(a) != t.dim(b)) {
        throw ArgumentError("trace over axes of different size");
    }
    Labels rest;
    for (const auto &l : t.labels()) {
        if (l != a && l != b) {
            rest.push_back(l);
        }
    }
    Labels order = rest;
    order.push_back(a);
    order.push_back(b);
    Tensor p = t.permuted(order);
    const std::size_t d = t.dim(a);
    Dims rd(p.dims().begin(), p.dims().end() - 2);
    Tensor out(rest, rd);
    for (std::size_t i = 0; i < out.size(); ++i) {
        cplx s = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
            s += p.data()[(i * d + k) * d + k];
        }
        out.data()[i] = s;
    }
    return out;
}

/// Contracts two tensors. Shared labels are summed unless listed in `keep`
/// (then they become batch axes); labels private to one operand and absent
/// from `keep` are summed out first.
inline Tensor contract_pair(Tensor a, Tensor b, const std::set<std::string> &keep) {
    auto drop_private = [&](Tensor &t, const Tensor &other) {
        for (const auto &l : Labels(t.labels())) {
            if (!other.has(l) && !keep.count(l)) {
                t = t.summed_over(l);
            }
        }
    };
    drop_private(a, b);
    drop_private(b, a);
    Labels batch;
    Labels summed;
    Labels fa;
    Labels fb;
    for (const auto &l : a.labels()) {
        if (b.has(l)) {
            if (a.dim(l) != b.dim(l)) {
                throw ArgumentError("dimension mismatch on label '" + l + "': " + std::to_string(a.dim(l)) + " vs " +
                                    std::to_string(b.dim(l)));
            }
            (keep.count(l) ? batch : summed).push_back(l);
        } else {
            fa.push_back(l);
        }
    }
    for (const auto &l : b.labels()) {
        if (!a.has(l)) {
            fb.push_back(l);
        }
    }
    auto dims_of = [](const Tensor &t, const Labels &ls) {
        std::size_t p = 1;
        for (const auto &l : ls) {
            p *= t.dim(l);
        }
        return p;
    };
    const std::size_t nb = dims_of(a, batch);
    const std::size_t na = dims_of(a, fa);
    const std::size_t ns = dims_of(a, summed);
    const std::size_t nf = dims_of(b, fb);

    Labels ao = batch;
    ao.insert(ao.end(), fa.begin(), fa.end());
    ao.insert(ao.end(), summed.begin(), summed.end());
    Labels bo = batch;
    bo.insert(bo.end(), summed.begin(), summed.end());
    bo.insert(bo.end(), fb.begin(), fb.end());
    Tensor ap = a.permuted(ao);
    Tensor bp = b.permuted(bo);

    Labels out_labels = batch;
    out_labels.insert(out_labels.end(), fa.begin(), fa.end());
    out_labels.insert(out_labels.end(), fb.begin(), fb.end());
    Dims out_dims;
    for (const auto &l : batch) {
        out_dims.push_back(a.dim(l));
    }
    for (const auto &l : fa) {
        out_dims.push_back(a.dim(l));
    }
    for (const auto &l : fb) {
        out_dims.push_back(b.dim(l));
    }
    Tensor out(out_labels, out_dims);
    for (std::size_t k = 0; k < nb; ++k) {
        Eigen::Map<const RowMatrixC> ma(ap.data().data() + k * na * ns, static_cast<Eigen::Index>(na),
                                        static_cast<Eigen::Index>(ns));
        Eigen::Map<const RowMatrixC> mb(bp.data().data() + k * ns * nf, static_cast<Eigen::Index>(ns),
                                        static_cast<Eigen::Index>(nf));
        Eigen::Map<RowMatrixC> mc(out.data().data() + k * na * nf, static_cast<Eigen::Index>(na),
                                  static_cast<Eigen::Index>(nf));
        mc.noalias() = ma * mb;
    }
    return out;
}

/// Pairwise steps over a live list: each step removes positions (first, second)
/// and appends their contraction at the end.
struct ContractionPath {
    std::vector<std::pair<std::size_t, std::size_t>> steps;
    /// Largest intermediate, in elements, and total multiply-adds.
    double max_intermediate = 0.0;
    double flops = 0.0;
    Labels bottleneck;
};

/// Greedy path: at each step contract the pair with the smallest result,
/// breaking ties by multiply-add count and then by position.
inline ContractionPath greedy_path(const std::vector<Labels> &tensor_labels,
                                   const std::map<std::string, std::size_t> &dims, const Labels &output) {
    ContractionPath path;
    std::vector<std::set<std::string>> live;
    for (const auto &ls : tensor_labels) {
        live.emplace_back(ls.begin(), ls.end());
    }
    const std::set<std::string> out(output.begin(), output.end());
    std::map<std::string, int> count;
    for (const auto &s : live) {
        for (const auto &l : s) {
            ++count[l];
        }
    }
    auto size_of = [&](const std::set<std::string> &s) {
        double p = 1.0;
        for (const auto &l : s) {
            p *= static_cast<double>(dims.at(l));
        }
        return p;
    };
    while (live.size() > 1) {
        double best_size = 0;
        double best_flops = 0;
        std::size_t bi = 0;
        std::size_t bj = 1;
        bool found = false;
        bool any_shared = false;
        for (std::size_t i = 0; i < live.size() && !any_shared; ++i) {
            for (std::size_t j = i + 1; j < live.size(); ++j) {
                for (const auto &l : live[i]) {
                    if (live[j].count(l)) {
                        any_shared = true;
                        break;
                    }
                }
                if (any_shared) {
                    break;
                }
            }
        }
        for (std::size_t i = 0; i < live.size(); ++i) {
            for (std::size_t j = i + 1; j < live.size(); ++j) {
                bool shares = false;
                for (const auto &l : live[i]) {
                    if (live[j].count(l)) {
                        shares = true;
                        break;
                    }
                }
                if (any_shared && !shares) {
                    continue;
                }
                std::set<std::string> all = live[i];
                all.insert(live[j].begin(), live[j].end());
                std::set<std::string> result;
                for (const auto &l : all) {
                    int others = count[l] - static_cast<int>(live[i].count(l)) - static_cast<int>(live[j].count(l));
                    if (out.count(l) || others > 0) {
                        result.insert(l);
                    }
                }
                double rs = size_of(result);
                double fl = size_of(all);
                if (!found || rs < best_size || (rs == best_size && fl < best_flops)) {
                    found = true;
                    best_size = rs;
                    best_flops = fl;
                    bi = i;
                    bj = j;
                }
            }
        }
        std::set<std::string> all = live[bi];
        all.insert(live[bj].begin(), live[bj].end());
        std::set<std::string> result;
        for (const auto &l : all) {
            int others = count[l] - static_cast<int>(live[bi].count(l)) - static_cast<int>(live[bj].count(l));
            if (out.count(l) || others > 0) {
                result.insert(l);
            }
        }
        for (const auto &l : live[bi]) {
            --count[l];
        }
        for (const auto &l : live[bj]) {
            --count[l];
        }
        for (const auto &l : result) {
            ++count[l];
        }
        path.flops += best_flops;
        if (best_size > path.max_intermediate) {
            path.max_intermediate = best_size;
            path.bottleneck.assign(result.begin(), result.end());
        }
        path.steps.emplace_back(bi, bj);
        live.erase(live.begin() + static_cast<std::ptrdiff_t>(bj));
        live.erase(live.begin() + static_cast<std::ptrdiff_t>(bi));
        live.push_back(std::move(result));
    }
    return path;
}

inline std::map<std::string, std::size_t> label_dims(const std::vector<Tensor> &tensors) {
    std::map<std::string, std::size_t> d;
    for (const auto &t : tensors) {
        for (std::size_t k = 0; k < t.rank(); ++k) {
            auto [it, fresh] = d.emplace(t.labels()[k], t.dims()[k]);
            if (!fresh && it->second != t.dims()[k]) {
                throw ArgumentError("dimension mismatch on label '" + t.labels()[k] + "': " +
                                    std::to_string(it->second) + " vs " + std::to_string(t.dims()[k]));
            }
        }
    }
    return d;
}

inline ContractionPath greedy_path(const std::vector<Tensor> &tensors, const Labels &output) {
    std::vector<Labels> ls;
    for (const auto &t : tensors) {
        ls.push_back(t.labels());
    }
    return greedy_path(ls, label_dims(tensors), output);
}

/// Reduces a single tensor to the requested output labels.
inline Tensor finish_output(Tensor t, const Labels &output) {
    std::set<std::string> out(output.begin(), output.end());
    for (const auto &l : Labels(t.labels())) {
        if (!out.count(l)) {
            t = t.summed_over(l);
        }
    }
    return t.permuted(output);
}

inline Tensor contract_with_path(std::vector<Tensor> tensors, const Labels &output, const ContractionPath &path) {
    if (tensors.empty()) {
        throw ArgumentError("nothing to contract");
    }
    auto dims = label_dims(tensors);
    for (const auto &l : output) {
        if (!dims.count(l)) {
            throw ArgumentError("unknown output label '" + l + "'");
        }
    }
    const std::set<std::string> out(output.begin(), output.end());
    for (auto [i, j] : path.steps) {
        if (i >= tensors.size() || j >= tensors.size() || i == j) {
            throw ArgumentError("invalid contraction path step");
        }
        std::set<std::string> keep = out;
        for (std::size_t k = 0; k < tensors.size(); ++k) {
            if (k != i && k != j) {
                keep.insert(tensors[k].labels().begin(), tensors[k].labels().end());
            }
        }
        Tensor r = contract_pair(std::move(tensors[i]), std::move(tensors[j]), keep);
        std::size_t hi = std::max(i, j);
        std::size_t lo = std::min(i, j);
        tensors.erase(tensors.begin() + static_cast<std::ptrdiff_t>(hi));
        tensors.erase(tensors.begin() + static_cast<std::ptrdiff_t>(lo));
        tensors.push_back(std::move(r));
    }
    if (tensors.size() != 1) {
        throw ArgumentError("contraction path leaves " + std::to_string(tensors.size()) + " tensors");
    }
    return finish_output(std::move(tensors[0]), output);
}

/// Contracts a tensor multiset down to `output` (in that order). Labels that
/// appear in several tensors and in `output` act as hyperedges.
inline Tensor contract(const std::vector<Tensor> &tensors, const Labels &output = {}) {
    return contract_with_path(tensors, output, greedy_path(tensors, output));
}

/// Reference contraction by explicit summation over every label assignment.
inline cplx naive_scalar(const std::vector<Tensor> &tensors) {
    auto dims = label_dims(tensors);
    Labels all;
    Dims ad;
    for (const auto &[l, d] : dims) {
        all.push_back(l);
        ad.push_back(d);
    }
    std::vector<std::vector<std::size_t>> pos(tensors.size());
    for (std::size_t t = 0; t < tensors.size(); ++t) {
        for (const auto &l : tensors[t].labels()) {
            pos[t].push_back(static_cast<std::size_t>(std::find(all.begin(), all.end(), l) - all.begin()));
        }
    }
    std::vector<std::size_t> idx(all.size(), 0);
    cplx total = 0.0;
    const std::size_t count = product(ad);
    for (std::size_t flat = 0; flat < count; ++flat) {
        std::size_t rem = flat;
        for (std::size_t k = all.size(); k-- > 0;) {
            idx[k] = rem % ad[k];
            rem /= ad[k];
        }
        cplx term = 1.0;
        for (std::size_t t = 0; t < tensors.size(); ++t) {
            std::size_t f = 0;
            for (std::size_t k = 0; k < pos[t].size(); ++k) {
                f = f * tensors[t].dims()[k] + idx[pos[t][k]];
            }
            term *= tensors[t].data()[f];
        }
        total += term;
    }
    return total;
}

/// Fuses row labels and column labels into a matrix.
inline MatrixC to_matrix(const Tensor &t, const Labels &rows, const Labels &cols) {
    Labels order = rows;
    order.insert(order.end(), cols.begin(), cols.end());
    Tensor p = t.permuted(order);
    std::size_t nr = 1;
    for (const auto &l : rows) {
        nr *= t.dim(l);
    }
    std::size_t nc = p.size() / std::max<std::size_t>(nr, 1);
    Eigen::Map<const RowMatrixC> m(p.data().data(), static_cast<Eigen::Index>(nr), static_cast<Eigen::Index>(nc));
    return MatrixC(m);
}

inline Tensor from_matrix(const MatrixC &m, const Labels &rows, const Dims &row_dims, const Labels &cols,
                          const Dims &col_dims) {
    Labels ls = rows;
    ls.insert(ls.end(), cols.begin(), cols.end());
    Dims ds = row_dims;
    ds.insert(ds.end(), col_dims.begin(), col_dims.end());
    if (static_cast<std::size_t>(m.rows()) != product(row_dims) ||
        static_cast<std::size_t>(m.cols()) != product(col_dims)) {
        throw ArgumentError("matrix shape does not match labels");
    }
    RowMatrixC r = m;
    return Tensor(ls, ds, std::vector<cplx>(r.data(), r.data() + r.size()));
}

inline constexpr double kRelativeZero = 1e-12;

/// Number of singular values kept: zeros (below 1e-12 of the largest) are
/// dropped, then the smallest rank whose discarded 2-norm is at most
/// kappa * ||s|| is chosen, then at most chi.
inline std::size_t truncation_rank(const Eigen::VectorXd &s, std::size_t chi, double kappa) {
    const auto n = static_cast<std::size_t>(s.size());
    if (n == 0 || s(0) <= 0.0) {
        return 0;
    }
    std::size_t r = 0;
    while (r < n && s(static_cast<Eigen::Index>(r)) > kRelativeZero * s(0)) {
        ++r;
    }
    if (kappa > 0) {
        const double total = s.norm();
        double tail = 0.0;
        // Grow the discarded tail from the end while it stays within budget.
        while (r > 1) {
            double next = tail + s(static_cast<Eigen::Index>(r - 1)) * s(static_cast<Eigen::Index>(r - 1));
            if (std::sqrt(next) > kappa * total) {
                break;
            }
            tail = next;
            --r;
        }
    }
    return std::min(r, chi);
}

struct SvdResult {
    Tensor u;
    std::vector<double> s;
    Tensor v;
    /// 2-norm of the discarded singular values (Frobenius reconstruction error).
    double discarded_weight = 0.0;
};

/// t ~ U diag(s) V with U over (left_labels, bond) and V over (bond, rest).
inline SvdResult truncated_svd(const Tensor &t, const Labels &left_labels, std::size_t chi, double kappa,
                               const std::string &bond = "svd") {
    Labels right;
    for (const auto &l : t.labels()) {
        if (std::find(left_labels.begin(), left_labels.end(), l) == left_labels.end()) {
            right.push_back(l);
        }
    }
    if (left_labels.empty() || right.empty()) {
        throw ArgumentError("truncated_svd needs a non-trivial label partition");
    }
    if (chi == 0) {
        throw ArgumentError("chi must be at least 1");
    }
    Dims ld;
    Dims rd;
    for (const auto &l : left_labels) {
        ld.push_back(t.dim(l));
    }
    for (const auto &l : right) {
        rd.push_back(t.dim(l));
    }
    MatrixC m = to_matrix(t, left_labels, right);
    Eigen::BDCSVD<MatrixC> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd &sv = svd.singularValues();
    std::size_t r = std::max<std::size_t>(1, truncation_rank(sv, chi, kappa));
    r = std::min<std::size_t>(r, static_cast<std::size_t>(sv.size()));
    SvdResult out;
    double tail = 0.0;
    for (Eigen::Index k = static_cast<Eigen::Index>(r); k < sv.size(); ++k) {
        if (sv(k) > kRelativeZero * sv(0)) {
            tail += sv(k) * sv(k);
        }
    }
    out.discarded_weight = std::sqrt(tail);
    const auto ri = static_cast<Eigen::Index>(r);
    MatrixC u = svd.matrixU().leftCols(ri);
    MatrixC v = svd.matrixV().leftCols(ri).adjoint();
    out.s.assign(sv.data(), sv.data() + ri);
    out.u = from_matrix(u, left_labels, ld, {bond}, {r});
    out.v = from_matrix(v, {bond}, {r}, right, rd);
    return out;
}

struct EighResult {
    /// Columns are eigenvectors, matching `values`.
    MatrixC vectors;
    /// Descending, clamped at zero.
    std::vector<double> values;
    /// Most negative raw eigenvalue relative to the largest magnitude.
    double most_negative = 0.0;
    bool negative_flag = false;
};

/// Eigendecomposition of a Hermitian positive semidefinite matrix.
inline EighResult eigh_psd(const MatrixC &m) {
    if (m.rows() != m.cols()) {
        throw ArgumentError("eigh_psd needs a square matrix");
    }
    MatrixC h = (m + m.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<MatrixC> es(h);
    const Eigen::VectorXd &ev = es.eigenvalues();
    const Eigen::Index n = ev.size();
    EighResult r;
    r.vectors.resize(n, n);
    r.values.resize(static_cast<std::size_t>(n));
    double scale = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
        scale = std::max(scale, std::abs(ev(k)));
    }
    for (Eigen::Index k = 0; k < n; ++k) {
        double lam = ev(n - 1 - k);
        if (scale > 0 && lam / scale < r.most_negative) {
            r.most_negative = lam / scale;
        }
        r.values[static_cast<std::size_t>(k)] = std::max(lam, 0.0);
        r.vectors.col(k) = es.eigenvectors().col(n - 1 - k);
    }
    r.negative_flag = r.most_negative < -1e-10;
    return r;
}

/// Tensor form: rows and columns given by label lists of equal total size.
inline EighResult eigh_psd(const Tensor &t, const Labels &rows, const Labels &cols) {
    return eigh_psd(to_matrix(t, rows, cols));
}

}  // namespace hexsim
