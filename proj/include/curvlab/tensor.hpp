#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

#include "curvlab/jet.hpp"

namespace curvlab {

enum class Variance : std::uint8_t { up, down };

/// Dense component array of a tensor at one point, dim^rank entries in row-major
/// order, with a variance per slot. Scalar is double for evaluated tensors and Jet
/// for tensor fields carried together with their derivatives.
template <class Scalar>
class Tensor {
public:
    Tensor() = default;
    Tensor(int dim, std::vector<Variance> variance, const Scalar& fill = Scalar{})
        : dim_(dim), variance_(std::move(variance))
    {
        std::size_t n = 1;
        for (std::size_t i = 0; i < variance_.size(); ++i) n *= static_cast<std::size_t>(dim_);
        data_.assign(n, fill);
        strides_.assign(variance_.size(), 1);
        for (int s = rank() - 2; s >= 0; --s) strides_[s] = strides_[s + 1] * static_cast<std::size_t>(dim_);
    }

    int dim() const noexcept { return dim_; }
    int rank() const noexcept { return static_cast<int>(variance_.size()); }
    const std::vector<Variance>& variance() const noexcept { return variance_; }
    Variance variance(int slot) const { return variance_.at(slot); }
    std::size_t size() const noexcept { return data_.size(); }
    std::size_t stride(int slot) const noexcept { return strides_[slot]; }

    std::size_t flat_index(std::span<const int> idx) const
    {
        assert(static_cast<int>(idx.size()) == rank());
        std::size_t f = 0;
        for (std::size_t s = 0; s < idx.size(); ++s) f += strides_[s] * static_cast<std::size_t>(idx[s]);
        return f;
    }

    /// Inverse of flat_index.
    void unflatten(std::size_t flat, std::span<int> idx) const
    {
        for (int s = rank() - 1; s >= 0; --s) {
            idx[s] = static_cast<int>(flat % static_cast<std::size_t>(dim_));
            flat /= static_cast<std::size_t>(dim_);
        }
    }

    Scalar& operator()(std::initializer_list<int> idx)
    {
        return data_[flat_index(std::span<const int>(idx.begin(), idx.size()))];
    }
    const Scalar& operator()(std::initializer_list<int> idx) const
    {
        return data_[flat_index(std::span<const int>(idx.begin(), idx.size()))];
    }
    Scalar& at(std::span<const int> idx) { return data_[flat_index(idx)]; }
    const Scalar& at(std::span<const int> idx) const { return data_[flat_index(idx)]; }
    Scalar& operator[](std::size_t flat) { return data_[flat]; }
    const Scalar& operator[](std::size_t flat) const { return data_[flat]; }

    std::span<const Scalar> components() const noexcept { return data_; }
    std::span<Scalar> components() noexcept { return data_; }

    Tensor& operator+=(const Tensor& rhs)
    {
        check_same_shape(rhs);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
        return *this;
    }
    Tensor& operator-=(const Tensor& rhs)
    {
        check_same_shape(rhs);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
        return *this;
    }
    Tensor& operator*=(double s)
    {
        for (auto& x : data_) x *= s;
        return *this;
    }

    friend Tensor operator+(Tensor a, const Tensor& b) { return a += b; }
    friend Tensor operator-(Tensor a, const Tensor& b) { return a -= b; }
    friend Tensor operator*(Tensor a, double s) { return a *= s; }
    friend Tensor operator*(double s, Tensor a) { return a *= s; }

private:
    void check_same_shape(const Tensor& rhs) const
    {
        if (rhs.dim_ != dim_ || rhs.variance_ != variance_) throw std::invalid_argument("tensor shape mismatch");
    }

    int dim_ = 0;
    std::vector<Variance> variance_;
    std::vector<std::size_t> strides_;
    std::vector<Scalar> data_;
};

using TensorValue = Tensor<double>;
using JetTensor = Tensor<Jet>;

inline std::vector<Variance> lower_slots(int rank) { return std::vector<Variance>(rank, Variance::down); }

/// Order-0 values of a jet-valued tensor.
inline TensorValue values(const JetTensor& t)
{
    TensorValue v(t.dim(), t.variance());
    for (std::size_t i = 0; i < t.size(); ++i) v[i] = t[i].value();
    return v;
}

/// Contract slot `slot` of `t` with the first index of the symmetric rank-2 `metric`
/// and give the slot the variance `result_variance`. raise_index and lower_index are
/// this with g^{-1} and g respectively.
template <class Scalar>
Tensor<Scalar> contract_with_metric(const Tensor<Scalar>& t, int slot, const Tensor<Scalar>& metric,
                                    Variance result_variance)
{
    if (slot < 0 || slot >= t.rank()) throw std::out_of_range("tensor slot out of range");
    const int n = t.dim();
    auto variance = t.variance();
    variance[slot] = result_variance;
    Tensor<Scalar> out(n, variance, product_zero(metric[0], t[0]));
    std::vector<int> idx(t.rank());
    const std::size_t stride = t.stride(slot);
    for (std::size_t f = 0; f < out.size(); ++f) {
        out.unflatten(f, idx);
        const int i = idx[slot];
        const std::size_t base = f - static_cast<std::size_t>(i) * stride;
        Scalar& acc = out[f];
        for (int k = 0; k < n; ++k) add_product(acc, metric({i, k}), t[base + static_cast<std::size_t>(k) * stride]);
    }
    return out;
}

template <class Scalar>
Tensor<Scalar> raise_index(const Tensor<Scalar>& t, int slot, const Tensor<Scalar>& inverse_metric)
{
    if (slot < 0 || slot >= t.rank()) throw std::out_of_range("tensor slot out of range");
    if (t.variance(slot) != Variance::down) throw std::invalid_argument("slot is already raised");
    return contract_with_metric(t, slot, inverse_metric, Variance::up);
}

template <class Scalar>
Tensor<Scalar> lower_index(const Tensor<Scalar>& t, int slot, const Tensor<Scalar>& metric)
{
    if (slot < 0 || slot >= t.rank()) throw std::out_of_range("tensor slot out of range");
    if (t.variance(slot) != Variance::up) throw std::invalid_argument("slot is already lowered");
    return contract_with_metric(t, slot, metric, Variance::down);
}

/// Trace over two slots of opposite variance.
template <class Scalar>
Tensor<Scalar> trace(const Tensor<Scalar>& t, int s1, int s2)
{
    if (s1 == s2 || s1 < 0 || s2 < 0 || s1 >= t.rank() || s2 >= t.rank())
        throw std::out_of_range("invalid trace slots");
    if (t.variance(s1) == t.variance(s2)) throw std::invalid_argument("trace needs one upper and one lower slot");
    std::vector<Variance> variance;
    for (int s = 0; s < t.rank(); ++s)
        if (s != s1 && s != s2) variance.push_back(t.variance(s));
    Tensor<Scalar> out(t.dim(), variance, zero_like(t[0]));
    std::vector<int> idx(out.rank()), full(t.rank());
    for (std::size_t f = 0; f < out.size(); ++f) {
        out.unflatten(f, idx);
        for (int s = 0, k = 0; s < t.rank(); ++s)
            if (s != s1 && s != s2) full[s] = idx[k++];
        for (int i = 0; i < t.dim(); ++i) {
            full[s1] = full[s2] = i;
            out[f] += t.at(full);
        }
    }
    return out;
}

/// Frobenius norm of the coordinate components.
inline double norm(const TensorValue& t)
{
    double s = 0.0;
    for (double x : t.components()) s += x * x;
    return std::sqrt(s);
}

inline double max_abs(const TensorValue& t)
{
    double m = 0.0;
    for (double x : t.components()) m = std::fmax(m, std::abs(x));
    return m;
}

}  // namespace curvlab
