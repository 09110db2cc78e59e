#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace curvlab {

inline constexpr int kMaxJetOrder = 4;
inline constexpr int kMaxJetDim = 8;

/// Graded-lexicographic enumeration of the monomials x^alpha with |alpha| <= kMaxJetOrder
/// in `dim` variables. Because the ordering is graded, the monomials of degree <= k
/// form a prefix, so a jet of order k is a prefix of a jet of order kMaxJetOrder.
class MonomialBasis {
public:
    using Exponents = std::array<std::uint8_t, kMaxJetDim>;

    struct Product {
        int lhs;
        int rhs;
        int out;
    };

    static const MonomialBasis& of(int dim);

    int dim() const noexcept { return dim_; }
    int count(int order) const noexcept { return counts_[order]; }
    int degree(int idx) const noexcept { return degrees_[idx]; }
    const Exponents& exponents(int idx) const noexcept { return exps_[idx]; }

    /// Index of a monomial, or -1 when its degree exceeds kMaxJetOrder.
    int index(const Exponents& e) const;
    /// Index of x^alpha * x_var, or -1 when that leaves the basis.
    int shifted(int idx, int var) const noexcept { return shift_[idx * dim_ + var]; }
    /// alpha! for the monomial at `idx`.
    double factorial(int idx) const noexcept { return factorials_[idx]; }
    /// Coefficient products whose result has degree <= order.
    std::span<const Product> products(int order) const noexcept
    {
        return {products_.data(), static_cast<std::size_t>(product_counts_[order])};
    }

    MonomialBasis() = default;
    explicit MonomialBasis(int dim);

private:
    int dim_ = 0;
    std::array<int, kMaxJetOrder + 1> counts_{};
    std::array<int, kMaxJetOrder + 1> product_counts_{};
    std::vector<Exponents> exps_;
    std::vector<int> degrees_;
    std::vector<int> shift_;
    std::vector<double> factorials_;
    std::vector<Product> products_;
};

/// Truncated multivariate Taylor polynomial: the value of a scalar function together
/// with all of its partial derivatives of total order <= order() at one point.
/// Coefficients are stored as Taylor coefficients f^(alpha) / alpha!, one slot per
/// multi-index, so mixed partials are symmetric by construction.
class Jet {
public:
    Jet() = default;
    Jet(const MonomialBasis& basis, int order, double value = 0.0);

    static Jet variable(const MonomialBasis& basis, int order, int var, double value);

    bool empty() const noexcept { return basis_ == nullptr; }
    int order() const noexcept { return order_; }
    int dim() const noexcept { return basis_->dim(); }
    const MonomialBasis& basis() const noexcept { return *basis_; }

    double value() const noexcept { return coeffs_[0]; }
    std::span<const double> coefficients() const noexcept { return coeffs_; }
    std::span<double> coefficients() noexcept { return coeffs_; }

    /// Partial derivative d^k f / dx_{v1} ... dx_{vk}; repeated variables allowed.
    double partial(std::initializer_list<int> vars) const;
    double partial(std::span<const int> vars) const;
    /// First derivative along `var` as a jet one order lower.
    Jet derivative(int var) const;
    Jet truncated(int order) const;

    /// this += scale * a * b, truncated at this->order().
    void add_product(const Jet& a, const Jet& b, double scale = 1.0);

    Jet& operator+=(const Jet& rhs);
    Jet& operator-=(const Jet& rhs);
    Jet& operator+=(double rhs) { coeffs_[0] += rhs; return *this; }
    Jet& operator-=(double rhs) { coeffs_[0] -= rhs; return *this; }
    Jet& operator*=(double rhs);
    Jet& operator*=(const Jet& rhs);

    friend Jet operator-(Jet a);
    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator*(const Jet& a, const Jet& b);
    friend Jet operator/(const Jet& a, const Jet& b);
    friend Jet operator+(Jet a, double b) { return a += b; }
    friend Jet operator+(double a, Jet b) { return b += a; }
    friend Jet operator-(Jet a, double b) { return a -= b; }
    friend Jet operator-(double a, const Jet& b) { return -b + a; }
    friend Jet operator*(Jet a, double b) { return a *= b; }
    friend Jet operator*(double a, Jet b) { return b *= a; }
    friend Jet operator/(Jet a, double b) { return a *= 1.0 / b; }

private:
    const MonomialBasis* basis_ = nullptr;
    int order_ = -1;
    std::vector<double> coeffs_;
};

/// sum_k derivs[k] / k! * (a - a(0))^k, i.e. phi(a) given phi's derivatives at a's value.
Jet compose(const Jet& a, std::span<const double> derivs);

Jet reciprocal(const Jet& a);
Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet tan(const Jet& a);
Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet sqrt(const Jet& a);
Jet pow(const Jet& a, double exponent);

inline double value_of(double x) noexcept { return x; }
inline double value_of(const Jet& x) noexcept { return x.value(); }

/// A zero of the same kind as `like` (same basis and order for jets).
inline double zero_like(double) noexcept { return 0.0; }
inline Jet zero_like(const Jet& like) { return Jet(like.basis(), like.order()); }

/// Zero able to hold a * b (the lower of the two orders for jets).
inline double product_zero(double, double) noexcept { return 0.0; }
inline Jet product_zero(const Jet& a, const Jet& b)
{
    return Jet(a.basis(), a.order() < b.order() ? a.order() : b.order());
}

/// acc += scale * a * b without temporaries.
inline void add_product(double& acc, double a, double b, double scale = 1.0) noexcept { acc += scale * a * b; }
inline void add_product(Jet& acc, const Jet& a, const Jet& b, double scale = 1.0) { acc.add_product(a, b, scale); }

}  // namespace curvlab
