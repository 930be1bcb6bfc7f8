#include "nmm/laurent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nmm {

namespace {

constexpr int kMinusInf = std::numeric_limits<int>::min() / 4;

int valid_or_minus_inf(const LaurentSeries& s)
{
    return s.truncation().value_or(kMinusInf);
}

} // namespace

LaurentSeries::LaurentSeries() : lo_(0), c_{cplx{}} {}

LaurentSeries::LaurentSeries(int lo, std::vector<cplx> coeffs, std::optional<int> valid_from)
    : lo_(lo), c_(std::move(coeffs)), valid_from_(valid_from)
{
    if (c_.empty())
        c_.push_back(cplx{});
    normalize();
}

LaurentSeries LaurentSeries::exact(int lo, std::vector<cplx> coeffs)
{
    return LaurentSeries(lo, std::move(coeffs), std::nullopt);
}

LaurentSeries LaurentSeries::truncated(int lo, std::vector<cplx> coeffs)
{
    return LaurentSeries(lo, std::move(coeffs), lo);
}

LaurentSeries LaurentSeries::monomial(cplx c, int exponent)
{
    return exact(exponent, {c});
}

void LaurentSeries::normalize()
{
    // Drop high zeros (always exact); drop low zeros only for exact series,
    // since the low end of a truncated series marks the window.
    while (c_.size() > 1 && c_.back() == cplx{})
        c_.pop_back();
    if (!valid_from_) {
        std::size_t k = 0;
        while (k + 1 < c_.size() && c_[k] == cplx{})
            ++k;
        if (k > 0) {
            c_.erase(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(k));
            lo_ += static_cast<int>(k);
        }
        if (c_.size() == 1 && c_[0] == cplx{})
            lo_ = 0;
    }
}

cplx LaurentSeries::operator[](int e) const
{
    if (valid_from_ && e < *valid_from_)
        throw std::out_of_range("LaurentSeries: exponent below truncation window");
    if (e < lo_ || e > hi())
        return {};
    return c_[static_cast<std::size_t>(e - lo_)];
}

std::optional<int> LaurentSeries::leading_exponent() const
{
    for (int e = hi(); e >= lo_; --e)
        if (c_[static_cast<std::size_t>(e - lo_)] != cplx{})
            return e;
    return std::nullopt;
}

LaurentSeries LaurentSeries::truncate_below(int e) const
{
    int v = std::max(e, valid_or_minus_inf(*this));
    if (v <= lo_ && valid_from_ && *valid_from_ == v)
        return *this;
    std::vector<cplx> out;
    int top = std::max(hi(), v);
    out.reserve(static_cast<std::size_t>(top - v + 1));
    for (int k = v; k <= top; ++k)
        out.push_back(k >= lo_ && k <= hi() ? c_[static_cast<std::size_t>(k - lo_)] : cplx{});
    return LaurentSeries(v, std::move(out), v);
}

cplx LaurentSeries::evaluate(cplx w) const
{
    // Horner in w from the top, then scale by w^lo.
    cplx acc{};
    for (auto it = c_.rbegin(); it != c_.rend(); ++it)
        acc = acc * w + *it;
    return acc * std::pow(w, lo_);
}

LaurentSeries& LaurentSeries::operator+=(const LaurentSeries& o)
{
    int valid = std::max(valid_or_minus_inf(*this), valid_or_minus_inf(o));
    bool exact_result = is_exact() && o.is_exact();
    int lo = exact_result ? std::min(lo_, o.lo_) : valid;
    int hi = std::max(this->hi(), o.hi());
    hi = std::max(hi, lo);
    std::vector<cplx> out(static_cast<std::size_t>(hi - lo + 1));
    for (int e = lo; e <= hi; ++e) {
        cplx v{};
        if (e >= lo_ && e <= this->hi())
            v += c_[static_cast<std::size_t>(e - lo_)];
        if (e >= o.lo_ && e <= o.hi())
            v += o.c_[static_cast<std::size_t>(e - o.lo_)];
        out[static_cast<std::size_t>(e - lo)] = v;
    }
    *this = LaurentSeries(lo, std::move(out), exact_result ? std::nullopt : std::optional<int>(valid));
    return *this;
}

LaurentSeries& LaurentSeries::operator-=(const LaurentSeries& o)
{
    return *this += -o;
}

LaurentSeries& LaurentSeries::operator*=(cplx s)
{
    for (auto& c : c_)
        c *= s;
    normalize();
    return *this;
}

LaurentSeries& LaurentSeries::operator*=(const LaurentSeries& o)
{
    *this = *this * o;
    return *this;
}

LaurentSeries operator+(LaurentSeries a, const LaurentSeries& b)
{
    a += b;
    return a;
}

LaurentSeries operator-(LaurentSeries a, const LaurentSeries& b)
{
    a -= b;
    return a;
}

LaurentSeries operator-(const LaurentSeries& a)
{
    return cplx{-1.0, 0.0} * a;
}

LaurentSeries operator*(cplx s, LaurentSeries a)
{
    a *= s;
    return a;
}

LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b)
{
    auto top_a = a.leading_exponent();
    auto top_b = b.leading_exponent();

    // Unknown low terms of one factor pollute the product up to
    // (its truncation - 1) + (top of the other factor).
    int valid = kMinusInf;
    if (a.truncation() && top_b)
        valid = std::max(valid, *a.truncation() + *top_b);
    if (b.truncation() && top_a)
        valid = std::max(valid, *b.truncation() + *top_a);
    if (a.truncation() && b.truncation())
        valid = std::max(valid, *a.truncation() + *b.truncation());
    bool exact_result = a.is_exact() && b.is_exact();

    if (!top_a || !top_b) {
        if (exact_result)
            return LaurentSeries();
        return LaurentSeries::truncated(valid, {cplx{}});
    }

    int lo = exact_result ? a.lo() + b.lo() : valid;
    int hi = *top_a + *top_b;
    if (hi < lo)
        return LaurentSeries::truncated(lo, {cplx{}});

    std::vector<cplx> out(static_cast<std::size_t>(hi - lo + 1));
    const auto& ca = a.coefficients();
    const auto& cb = b.coefficients();
    for (int i = a.lo(); i <= *top_a; ++i) {
        const cplx ai = ca[static_cast<std::size_t>(i - a.lo())];
        if (ai == cplx{})
            continue;
        int jlo = std::max(b.lo(), lo - i);
        int jhi = std::min(*top_b, hi - i);
        for (int j = jlo; j <= jhi; ++j)
            out[static_cast<std::size_t>(i + j - lo)] += ai * cb[static_cast<std::size_t>(j - b.lo())];
    }
    if (exact_result)
        return LaurentSeries::exact(lo, std::move(out));
    return LaurentSeries::truncated(lo, std::move(out));
}

LaurentSeries inv_power(const LaurentSeries& a, int j, int order)
{
    if (j < 1)
        throw std::invalid_argument("inv_power: j must be positive");
    auto lead = a.leading_exponent();
    if (!lead)
        throw std::domain_error("inv_power: series has no nonzero leading term");
    const int p = *lead;
    const cplx c = a[p];

    // f(x) = a(w) / (c w^p) as a power series in x = 1/w, f_0 = 1.
    int known = p - a.lo(); // f_k known for k <= known
    bool unit = true;
    for (int k = 1; k <= known; ++k)
        if (a[p - k] != cplx{})
            unit = false;
    const cplx scale = std::pow(c, -j);
    if (unit && a.is_exact())
        return LaurentSeries::monomial(scale, -p * j);

    int m = order - p * j;
    if (a.truncation())
        m = std::min(m, known);
    m = std::max(m, 0);

    std::vector<cplx> f(static_cast<std::size_t>(m + 1));
    for (int k = 0; k <= m; ++k)
        f[static_cast<std::size_t>(k)] = (k <= known) ? a[p - k] / c : cplx{};

    // Power of a unit series: g = f^alpha, k g_k = sum_i ((alpha+1) i - k) f_i g_{k-i}.
    const double alpha = -static_cast<double>(j);
    std::vector<cplx> g(static_cast<std::size_t>(m + 1));
    g[0] = 1.0;
    for (int k = 1; k <= m; ++k) {
        cplx acc{};
        for (int i = 1; i <= k; ++i)
            acc += ((alpha + 1.0) * i - k) * f[static_cast<std::size_t>(i)] * g[static_cast<std::size_t>(k - i)];
        g[static_cast<std::size_t>(k)] = acc / static_cast<double>(k);
    }

    // g_k multiplies w^(-p j - k); store ascending from the lowest exponent.
    std::vector<cplx> out(static_cast<std::size_t>(m + 1));
    for (int k = 0; k <= m; ++k)
        out[static_cast<std::size_t>(m - k)] = scale * g[static_cast<std::size_t>(k)];
    return LaurentSeries::truncated(-p * j - m, std::move(out));
}

cplx residue(const LaurentSeries& a)
{
    if (a.truncation() && *a.truncation() > -1)
        throw std::domain_error("residue: exponent -1 lies below the truncation window");
    return a[-1];
}

LaurentSeries reflect_conjugate(const LaurentSeries& a)
{
    if (!a.is_exact())
        throw std::domain_error("reflect_conjugate: requires an exact series");
    const auto& c = a.coefficients();
    std::vector<cplx> out(c.size());
    for (std::size_t k = 0; k < c.size(); ++k)
        out[c.size() - 1 - k] = std::conj(c[k]);
    return LaurentSeries::exact(-a.hi(), std::move(out));
}

LaurentSeries derivative(const LaurentSeries& a)
{
    const auto& c = a.coefficients();
    std::vector<cplx> out(c.size());
    for (std::size_t k = 0; k < c.size(); ++k)
        out[k] = static_cast<double>(a.lo() + static_cast<int>(k)) * c[k];
    if (a.is_exact())
        return LaurentSeries::exact(a.lo() - 1, std::move(out));
    return LaurentSeries::truncated(a.lo() - 1, std::move(out));
}

double max_abs_difference(const LaurentSeries& a, const LaurentSeries& b)
{
    int lo = std::max(valid_or_minus_inf(a), valid_or_minus_inf(b));
    lo = std::max(lo, std::min(a.lo(), b.lo()));
    int hi = std::max(a.hi(), b.hi());
    double d = 0.0;
    for (int e = lo; e <= hi; ++e)
        d = std::max(d, std::abs(a[e] - b[e]));
    return d;
}

} // namespace nmm
