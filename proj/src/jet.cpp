#include "curvlab/jet.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <map>
#include <string>

#include "curvlab/error.hpp"

namespace curvlab {

namespace {

void enumerate(int dim, int var, int remaining, MonomialBasis::Exponents& cur,
               std::vector<MonomialBasis::Exponents>& out)
{
    if (var == dim) {
        if (remaining == 0) out.push_back(cur);
        return;
    }
    for (int e = remaining; e >= 0; --e) {
        cur[var] = static_cast<std::uint8_t>(e);
        enumerate(dim, var + 1, remaining - e, cur, out);
    }
    cur[var] = 0;
}

double int_factorial(int k)
{
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

std::uint32_t key_of(const MonomialBasis::Exponents& e)
{
    std::uint32_t key = 0;
    for (auto x : e) key = key * (kMaxJetOrder + 1) + x;
    return key;
}

}  // namespace

MonomialBasis::MonomialBasis(int dim) : dim_(dim)
{
    for (int deg = 0; deg <= kMaxJetOrder; ++deg) {
        Exponents cur{};
        enumerate(dim, 0, deg, cur, exps_);
        counts_[deg] = static_cast<int>(exps_.size());
        if (dim == 0) {
            // only the constant monomial exists
            exps_.resize(1);
            for (int d = deg; d <= kMaxJetOrder; ++d) counts_[d] = 1;
            break;
        }
    }
    const int n = static_cast<int>(exps_.size());
    degrees_.resize(n);
    factorials_.resize(n);
    std::map<std::uint32_t, int> lookup;
    for (int i = 0; i < n; ++i) {
        int d = 0;
        double f = 1.0;
        for (auto x : exps_[i]) {
            d += x;
            f *= int_factorial(x);
        }
        degrees_[i] = d;
        factorials_[i] = f;
        lookup[key_of(exps_[i])] = i;
    }
    shift_.assign(static_cast<std::size_t>(n) * dim, -1);
    for (int i = 0; i < n; ++i) {
        for (int v = 0; v < dim; ++v) {
            if (degrees_[i] == kMaxJetOrder) continue;
            Exponents e = exps_[i];
            ++e[v];
            shift_[i * dim + v] = lookup.at(key_of(e));
        }
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (degrees_[i] + degrees_[j] > kMaxJetOrder) continue;
            Exponents e{};
            for (int v = 0; v < kMaxJetDim; ++v) e[v] = static_cast<std::uint8_t>(exps_[i][v] + exps_[j][v]);
            products_.push_back({i, j, lookup.at(key_of(e))});
        }
    }
    std::stable_sort(products_.begin(), products_.end(),
                     [](const Product& a, const Product& b) { return a.out < b.out; });
    for (int order = 0; order <= kMaxJetOrder; ++order) {
        const int limit = counts_[order];
        product_counts_[order] = static_cast<int>(
            std::partition_point(products_.begin(), products_.end(),
                                 [limit](const Product& p) { return p.out < limit; }) -
            products_.begin());
    }
}

const MonomialBasis& MonomialBasis::of(int dim)
{
    static const std::vector<MonomialBasis> all = [] {
        std::vector<MonomialBasis> v;
        for (int d = 0; d <= kMaxJetDim; ++d) v.emplace_back(d);
        return v;
    }();
    if (dim < 0 || dim > kMaxJetDim) throw DimensionError("jet dimension out of range: " + std::to_string(dim));
    return all[dim];
}

int MonomialBasis::index(const Exponents& e) const
{
    int deg = 0;
    for (auto x : e) deg += x;
    if (deg > kMaxJetOrder) return -1;
    for (int i = (deg == 0 ? 0 : counts_[deg - 1]); i < counts_[deg]; ++i)
        if (exps_[i] == e) return i;
    return -1;
}

Jet::Jet(const MonomialBasis& basis, int order, double value)
    : basis_(&basis), order_(order), coeffs_(basis.count(order), 0.0)
{
    assert(order >= 0 && order <= kMaxJetOrder);
    coeffs_[0] = value;
}

Jet Jet::variable(const MonomialBasis& basis, int order, int var, double value)
{
    Jet j(basis, order, value);
    if (order >= 1) j.coeffs_[basis.shifted(0, var)] = 1.0;
    return j;
}

double Jet::partial(std::initializer_list<int> vars) const
{
    return partial(std::span<const int>(vars.begin(), vars.size()));
}

double Jet::partial(std::span<const int> vars) const
{
    if (static_cast<int>(vars.size()) > order_) throw Error("jet order too low for requested partial");
    MonomialBasis::Exponents e{};
    for (int v : vars) ++e[v];
    const int idx = basis_->index(e);
    return coeffs_[idx] * basis_->factorial(idx);
}

Jet Jet::derivative(int var) const
{
    assert(order_ >= 1);
    Jet d(*basis_, order_ - 1);
    for (int i = 0; i < basis_->count(order_ - 1); ++i) {
        const int s = basis_->shifted(i, var);
        d.coeffs_[i] = coeffs_[s] * (basis_->exponents(i)[var] + 1);
    }
    return d;
}

Jet Jet::truncated(int order) const
{
    Jet t = *this;
    if (order < order_) {
        t.order_ = order;
        t.coeffs_.resize(basis_->count(order));
    }
    return t;
}

void Jet::add_product(const Jet& a, const Jet& b, double scale)
{
    assert(order_ <= a.order_ && order_ <= b.order_);
    const double* pa = a.coeffs_.data();
    const double* pb = b.coeffs_.data();
    double* out = coeffs_.data();
    for (const auto& p : basis_->products(order_)) out[p.out] += scale * pa[p.lhs] * pb[p.rhs];
}

Jet& Jet::operator+=(const Jet& rhs)
{
    if (rhs.order_ < order_) *this = truncated(rhs.order_);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
    return *this;
}

Jet& Jet::operator-=(const Jet& rhs)
{
    if (rhs.order_ < order_) *this = truncated(rhs.order_);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= rhs.coeffs_[i];
    return *this;
}

Jet& Jet::operator*=(double rhs)
{
    for (auto& c : coeffs_) c *= rhs;
    return *this;
}

Jet& Jet::operator*=(const Jet& rhs)
{
    *this = *this * rhs;
    return *this;
}

Jet operator-(Jet a)
{
    for (auto& c : a.coeffs_) c = -c;
    return a;
}

Jet operator*(const Jet& a, const Jet& b)
{
    Jet r(a.basis(), std::min(a.order_, b.order_));
    r.add_product(a, b);
    return r;
}

Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }

Jet compose(const Jet& a, std::span<const double> derivs)
{
    const int order = a.order();
    Jet delta = a;
    delta.coefficients()[0] = 0.0;
    Jet result(a.basis(), order, derivs[order] / int_factorial(order));
    for (int k = order - 1; k >= 0; --k) {
        result = result * delta;
        result += derivs[k] / int_factorial(k);
    }
    return result;
}

namespace {

constexpr double kTiny = 1e-14;

Jet integer_power(const Jet& a, long n)
{
    Jet result(a.basis(), a.order(), 1.0);
    Jet base = a;
    while (n > 0) {
        if (n & 1) result = result * base;
        n >>= 1;
        if (n) base = base * base;
    }
    return result;
}

}  // namespace

Jet reciprocal(const Jet& a)
{
    const double x = a.value();
    if (std::abs(x) < kTiny) throw DomainError("division by a value near zero", -1);
    std::array<double, kMaxJetOrder + 1> d{};
    double p = 1.0 / x;
    for (int k = 0; k <= a.order(); ++k) {
        d[k] = p;
        p *= -(k + 1) / x;
    }
    return compose(a, d);
}

Jet sin(const Jet& a)
{
    const double s = std::sin(a.value()), c = std::cos(a.value());
    const std::array<double, 5> d{s, c, -s, -c, s};
    return compose(a, d);
}

Jet cos(const Jet& a)
{
    const double s = std::sin(a.value()), c = std::cos(a.value());
    const std::array<double, 5> d{c, -s, -c, s, c};
    return compose(a, d);
}

Jet tan(const Jet& a)
{
    if (std::abs(std::cos(a.value())) < kTiny) throw DomainError("tan evaluated at a pole", -1);
    const double t = std::tan(a.value());
    const double t2 = t * t;
    const std::array<double, 5> d{t, 1 + t2, 2 * t * (1 + t2), 2 + 8 * t2 + 6 * t2 * t2,
                                  16 * t + 40 * t * t2 + 24 * t * t2 * t2};
    return compose(a, d);
}

Jet exp(const Jet& a)
{
    const double e = std::exp(a.value());
    const std::array<double, 5> d{e, e, e, e, e};
    return compose(a, d);
}

Jet log(const Jet& a)
{
    const double x = a.value();
    if (x <= 0.0) throw DomainError("log of a nonpositive value", -1);
    std::array<double, 5> d{std::log(x)};
    double p = 1.0 / x;
    for (int k = 1; k <= kMaxJetOrder; ++k) {
        d[k] = p;
        p *= -k / x;
    }
    return compose(a, d);
}

Jet sqrt(const Jet& a)
{
    if (a.value() < 0.0 || (a.value() == 0.0 && a.order() > 0))
        throw DomainError("sqrt of a nonpositive value", -1);
    return pow(a, 0.5);
}

Jet pow(const Jet& a, double exponent)
{
    const double rounded = std::round(exponent);
    if (rounded == exponent && std::abs(exponent) <= 64) {
        const long n = static_cast<long>(rounded);
        if (n >= 0) return integer_power(a, n);
        return reciprocal(integer_power(a, -n));
    }
    const double x = a.value();
    if (x <= 0.0) throw DomainError("non-integer power of a nonpositive value", -1);
    std::array<double, 5> d{};
    double coeff = 1.0;
    for (int k = 0; k <= a.order(); ++k) {
        d[k] = coeff * std::pow(x, exponent - k);
        coeff *= exponent - k;
    }
    return compose(a, d);
}

}  // namespace curvlab
