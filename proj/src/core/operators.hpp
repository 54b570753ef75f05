// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The enfix authors

#ifndef ENFIX_CORE_OPERATORS_HPP_
#define ENFIX_CORE_OPERATORS_HPP_

#include <cstddef>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "spaces.hpp"

namespace enfix {

/// Dense square matrix, row-major.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t n, std::vector<double> row_major);
    static Matrix zeros(std::size_t n);
    static Matrix identity(std::size_t n);
    static Matrix from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t size() const noexcept { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    std::vector<std::vector<double>> rows() const;

    std::vector<double> apply(std::span<const double> x) const;
    Matrix operator*(const Matrix& rhs) const;
    Matrix transposed() const;

    /// alpha*this + beta*I
    Matrix shifted(double alpha, double beta) const;

private:
    std::size_t n_ = 0;
    std::vector<double> a_;
};

class Operator;

namespace form {

struct Affine {
    Matrix matrix;
    RealVector offset;
};
struct Reflection1D {};
struct Threshold1D {
    double cut;
    double low;   // value for x <= cut
    double high;  // value for x > cut
};
struct Power {
    std::shared_ptr<const Operator> base;
    unsigned exponent;
};
struct Composed {
    std::shared_ptr<const Operator> outer;
    std::shared_ptr<const Operator> inner;
};
/// x -> (1 - lambda) x + lambda T(x)
struct Averaged {
    std::shared_ptr<const Operator> base;
    double lambda;
};

}  // namespace form

/// An immutable self-map of R^n. Copies share structure.
class Operator {
public:
    using Node = std::variant<form::Affine, form::Reflection1D, form::Threshold1D,
                              form::Power, form::Composed, form::Averaged>;

    static Operator affine(Matrix a, RealVector offset);
    static Operator affine(Matrix a);
    static Operator reflection();
    static Operator threshold(double cut, double low, double high);
    static Operator composed(const Operator& outer, const Operator& inner);

    std::size_t dim() const noexcept { return dim_; }
    const Node& node() const noexcept { return *node_; }

    RealVector operator()(const RealVector& x) const { return evaluate(x); }
    RealVector evaluate(const RealVector& x) const;

private:
    friend Operator power(const Operator& op, unsigned n);
    friend Operator make_averaged(const Operator& op, double lambda);

    Operator(std::shared_ptr<const Node> node, std::size_t dim)
        : node_(std::move(node)), dim_(dim) {}

    void apply_into(std::vector<double>& x) const;

    std::shared_ptr<const Node> node_;
    std::size_t dim_ = 0;
};

/// The n-fold iterate op^n; n >= 1.
Operator power(const Operator& op, unsigned n);

/// Raw constructor behind enrichment's averaged(); no range check on lambda.
Operator make_averaged(const Operator& op, double lambda);

/// ||T(x) - x|| in the given norm.
double residual(const Operator& op, const RealVector& x, const NormSpec& spec);

/// Collapses compositions, powers and averages of affine pieces into one
/// affine map. Returns nullopt when any piece is not affine.
std::optional<form::Affine> as_affine(const Operator& op);

}  // namespace enfix

#endif  // ENFIX_CORE_OPERATORS_HPP_
