#pragma once

// Truncated two-sided Laurent series in w with complex double coefficients.
//
// A series is either exact (a Laurent polynomial, every coefficient outside the
// stored range is zero) or truncated: exponents below truncation() have been
// discarded and are unknown. Arithmetic propagates the lowest exponent that is
// still provably correct, so residue() can refuse to read a coefficient that
// truncation has polluted.

#include <complex>
#include <optional>
#include <vector>

namespace nmm {

using cplx = std::complex<double>;

class LaurentSeries {
public:
    /// The exact zero series.
    LaurentSeries();

    /// Exact Laurent polynomial sum_k coeffs[k] w^(lo+k).
    static LaurentSeries exact(int lo, std::vector<cplx> coeffs);
    /// Series known for exponents >= lo; everything below lo is discarded.
    static LaurentSeries truncated(int lo, std::vector<cplx> coeffs);
    static LaurentSeries monomial(cplx c, int exponent);
    static LaurentSeries constant(cplx c) { return monomial(c, 0); }

    int lo() const { return lo_; }
    int hi() const { return lo_ + static_cast<int>(c_.size()) - 1; }
    bool is_exact() const { return !valid_from_.has_value(); }
    /// Lowest reliable exponent, or nullopt for an exact series.
    std::optional<int> truncation() const { return valid_from_; }

    /// Coefficient of w^e. Throws std::out_of_range when e lies below the
    /// truncation window.
    cplx operator[](int e) const;
    const std::vector<cplx>& coefficients() const { return c_; }

    /// Highest exponent carrying a nonzero coefficient, if any.
    std::optional<int> leading_exponent() const;
    bool is_zero() const { return !leading_exponent().has_value(); }

    /// Discard every exponent below e (no-op if already truncated higher).
    LaurentSeries truncate_below(int e) const;

    /// Evaluate at w; only meaningful for exact series.
    cplx evaluate(cplx w) const;

    LaurentSeries& operator+=(const LaurentSeries& o);
    LaurentSeries& operator-=(const LaurentSeries& o);
    LaurentSeries& operator*=(const LaurentSeries& o);
    LaurentSeries& operator*=(cplx s);

private:
    LaurentSeries(int lo, std::vector<cplx> coeffs, std::optional<int> valid_from);
    void normalize();

    int lo_ = 0;
    std::vector<cplx> c_;
    std::optional<int> valid_from_;
};

LaurentSeries operator+(LaurentSeries a, const LaurentSeries& b);
LaurentSeries operator-(LaurentSeries a, const LaurentSeries& b);
LaurentSeries operator-(const LaurentSeries& a);
LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b);
LaurentSeries operator*(cplx s, LaurentSeries a);

/// a^(-j) for a = c w^p (1 + u), u in negative powers only, correct down to
/// exponent -order (or less if a itself is truncated). Throws std::domain_error
/// for the zero series.
LaurentSeries inv_power(const LaurentSeries& a, int j, int order);

/// Coefficient of w^-1. Throws std::domain_error if -1 lies below the window.
cplx residue(const LaurentSeries& a);

/// conj(a)(1/w): the coefficient c_e w^e becomes conj(c_e) w^-e. Exact series only.
LaurentSeries reflect_conjugate(const LaurentSeries& a);

LaurentSeries derivative(const LaurentSeries& a);

/// Largest coefficient difference over the exponents both series know.
double max_abs_difference(const LaurentSeries& a, const LaurentSeries& b);

} // namespace nmm
