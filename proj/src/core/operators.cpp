// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The enfix authors

#include "operators.hpp"

#include <cmath>
#include <sstream>

namespace enfix {

Matrix::Matrix(std::size_t n, std::vector<double> row_major) : n_(n), a_(std::move(row_major)) {
    if (n_ == 0) throw Error(ErrorCode::invalid_argument, "matrix dimension must be at least 1");
    if (a_.size() != n_ * n_)
        throw Error(ErrorCode::dimension_mismatch, "matrix must be square");
    for (double v : a_)
        if (!std::isfinite(v)) throw Error(ErrorCode::non_finite, "matrix has a non-finite entry");
}

Matrix Matrix::zeros(std::size_t n) { return Matrix(n, std::vector<double>(n * n, 0.0)); }

Matrix Matrix::identity(std::size_t n) {
    Matrix m = zeros(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
    const std::size_t n = rows.size();
    std::vector<double> flat;
    flat.reserve(n * n);
    for (const auto& r : rows) {
        if (r.size() != n) throw Error(ErrorCode::dimension_mismatch, "matrix must be square");
        flat.insert(flat.end(), r.begin(), r.end());
    }
    return Matrix(n, std::move(flat));
}

std::vector<std::vector<double>> Matrix::rows() const {
    std::vector<std::vector<double>> out(n_);
    for (std::size_t i = 0; i < n_; ++i)
        out[i].assign(a_.begin() + static_cast<std::ptrdiff_t>(i * n_),
                      a_.begin() + static_cast<std::ptrdiff_t>((i + 1) * n_));
    return out;
}

std::vector<double> Matrix::apply(std::span<const double> x) const {
    std::vector<double> y(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n_; ++j) s += a_[i * n_ + j] * x[j];
        y[i] = s;
    }
    return y;
}

Matrix Matrix::operator*(const Matrix& rhs) const {
    if (rhs.n_ != n_) throw Error(ErrorCode::dimension_mismatch, "matrix product: size mismatch");
    Matrix out = zeros(n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t k = 0; k < n_; ++k)
            for (std::size_t j = 0; j < n_; ++j) out(i, j) += (*this)(i, k) * rhs(k, j);
    return out;
}

Matrix Matrix::transposed() const {
    Matrix out = zeros(n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) out(j, i) = (*this)(i, j);
    return out;
}

Matrix Matrix::shifted(double alpha, double beta) const {
    Matrix out = *this;
    for (auto& v : out.a_) v *= alpha;
    for (std::size_t i = 0; i < n_; ++i) out(i, i) += beta;
    return out;
}

Operator Operator::affine(Matrix a, RealVector offset) {
    if (a.size() != offset.dim())
        throw Error(ErrorCode::dimension_mismatch, "affine operator: matrix and offset sizes differ");
    const std::size_t n = a.size();
    return Operator(std::make_shared<const Node>(form::Affine{std::move(a), std::move(offset)}), n);
}

Operator Operator::affine(Matrix a) {
    const std::size_t n = a.size();
    return affine(std::move(a), RealVector::zeros(n));
}

Operator Operator::reflection() {
    return Operator(std::make_shared<const Node>(form::Reflection1D{}), 1);
}

Operator Operator::threshold(double cut, double low, double high) {
    if (!std::isfinite(cut) || !std::isfinite(low) || !std::isfinite(high))
        throw Error(ErrorCode::non_finite, "threshold operator: parameters must be finite");
    return Operator(std::make_shared<const Node>(form::Threshold1D{cut, low, high}), 1);
}

Operator Operator::composed(const Operator& outer, const Operator& inner) {
    if (outer.dim() != inner.dim())
        throw Error(ErrorCode::dimension_mismatch, "composed operator: dimensions differ");
    return Operator(std::make_shared<const Node>(form::Composed{
                        std::make_shared<const Operator>(outer), std::make_shared<const Operator>(inner)}),
                    outer.dim());
}

Operator power(const Operator& op, unsigned n) {
    if (n == 0) throw Error(ErrorCode::invalid_argument, "power: exponent must be >= 1");
    if (n == 1) return op;
    return Operator(std::make_shared<const Operator::Node>(
                        form::Power{std::make_shared<const Operator>(op), n}),
                    op.dim());
}

Operator make_averaged(const Operator& op, double lambda) {
    return Operator(std::make_shared<const Operator::Node>(
                        form::Averaged{std::make_shared<const Operator>(op), lambda}),
                    op.dim());
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

void Operator::apply_into(std::vector<double>& x) const {
    std::visit(overloaded{
                   [&](const form::Affine& a) {
                       auto y = a.matrix.apply(x);
                       for (std::size_t i = 0; i < y.size(); ++i) y[i] += a.offset[i];
                       x = std::move(y);
                   },
                   [&](const form::Reflection1D&) { x[0] = 1.0 - x[0]; },
                   [&](const form::Threshold1D& t) { x[0] = x[0] <= t.cut ? t.low : t.high; },
                   [&](const form::Power& p) {
                       for (unsigned k = 0; k < p.exponent; ++k) p.base->apply_into(x);
                   },
                   [&](const form::Composed& c) {
                       c.inner->apply_into(x);
                       c.outer->apply_into(x);
                   },
                   [&](const form::Averaged& a) {
                       if (a.lambda == 1.0) {
                           a.base->apply_into(x);
                           return;
                       }
                       std::vector<double> tx = x;
                       a.base->apply_into(tx);
                       for (std::size_t i = 0; i < x.size(); ++i)
                           x[i] = std::fma(1.0 - a.lambda, x[i], a.lambda * tx[i]);
                   },
               },
               *node_);
}

RealVector Operator::evaluate(const RealVector& x) const {
    if (x.dim() != dim_) {
        std::ostringstream os;
        os << "evaluate: operator acts on dimension " << dim_ << ", got " << x.dim();
        throw Error(ErrorCode::dimension_mismatch, os.str());
    }
    std::vector<double> buf = x.values();
    apply_into(buf);
    for (double v : buf)
        if (!std::isfinite(v))
            throw Error(ErrorCode::non_finite, "evaluate: operator produced a non-finite value");
    return RealVector(std::move(buf));
}

double residual(const Operator& op, const RealVector& x, const NormSpec& spec) {
    return norm(difference(op(x), x), spec);
}

std::optional<form::Affine> as_affine(const Operator& op) {
    return std::visit(
        overloaded{
            [](const form::Affine& a) -> std::optional<form::Affine> { return a; },
            [](const form::Reflection1D&) -> std::optional<form::Affine> {
                return form::Affine{Matrix(1, {-1.0}), RealVector{1.0}};
            },
            [](const form::Threshold1D&) -> std::optional<form::Affine> { return std::nullopt; },
            [](const form::Power& p) -> std::optional<form::Affine> {
                auto base = as_affine(*p.base);
                if (!base) return std::nullopt;
                form::Affine acc = *base;
                for (unsigned k = 1; k < p.exponent; ++k) {
                    // base o acc
                    auto off = base->matrix.apply(acc.offset.coords());
                    for (std::size_t i = 0; i < off.size(); ++i) off[i] += base->offset[i];
                    acc = form::Affine{base->matrix * acc.matrix, RealVector(std::move(off))};
                }
                return acc;
            },
            [](const form::Composed& c) -> std::optional<form::Affine> {
                auto outer = as_affine(*c.outer);
                auto inner = as_affine(*c.inner);
                if (!outer || !inner) return std::nullopt;
                auto off = outer->matrix.apply(inner->offset.coords());
                for (std::size_t i = 0; i < off.size(); ++i) off[i] += outer->offset[i];
                return form::Affine{outer->matrix * inner->matrix, RealVector(std::move(off))};
            },
            [](const form::Averaged& a) -> std::optional<form::Affine> {
                auto base = as_affine(*a.base);
                if (!base) return std::nullopt;
                std::vector<double> off(base->offset.dim());
                for (std::size_t i = 0; i < off.size(); ++i) off[i] = a.lambda * base->offset[i];
                return form::Affine{base->matrix.shifted(a.lambda, 1.0 - a.lambda),
                                    RealVector(std::move(off))};
            },
        },
        op.node());
}

}  // namespace enfix
