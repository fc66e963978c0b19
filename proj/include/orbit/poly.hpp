#pragma once

#include <utility>
#include <vector>

#include "orbit/rational.hpp"

namespace orbit {

// Univariate polynomial over Q, coefficients lowest degree first.
// The zero polynomial has an empty coefficient vector.
class RatPoly {
  public:
    RatPoly() = default;
    explicit RatPoly(std::vector<Rat> coeffs) : c_(std::move(coeffs)) {
        for (auto& c : c_) c.canonicalize();
        trim();
    }
    static RatPoly constant(const Rat& a);
    static RatPoly variable();  // t
    static RatPoly monomial(const Rat& a, int deg);

    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero poly
    const std::vector<Rat>& coeffs() const { return c_; }
    const Rat& leading() const;
    Rat coeff(int i) const { return (i >= 0 && i < (int)c_.size()) ? c_[i] : Rat(0); }

    bool operator==(const RatPoly& o) const { return c_ == o.c_; }
    bool operator!=(const RatPoly& o) const { return !(*this == o); }

    RatPoly operator+(const RatPoly& o) const;
    RatPoly operator-(const RatPoly& o) const;
    RatPoly operator-() const;
    RatPoly operator*(const RatPoly& o) const;
    RatPoly operator*(const Rat& a) const;

    Rat eval(const Rat& x) const;
    RatPoly derivative() const;
    RatPoly monic() const;

    // p(q(t))
    RatPoly compose(const RatPoly& q) const;
    // t^deg * p(1/t)
    RatPoly reversed() const;
    // p(a*t)
    RatPoly scale_arg(const Rat& a) const;
    // p(t + a)
    RatPoly shift_arg(const Rat& a) const;

    std::string to_string(const std::string& var = "t") const;

  private:
    void trim();
    std::vector<Rat> c_;
};

// Quotient and remainder of exact division over Q; divisor nonzero.
std::pair<RatPoly, RatPoly> poly_divmod(const RatPoly& a, const RatPoly& b);

// True iff b divides a exactly.
bool poly_divides(const RatPoly& b, const RatPoly& a);

// Monic gcd over Q.
RatPoly poly_gcd(RatPoly a, RatPoly b);

// Yun's squarefree decomposition: returns list of (factor, multiplicity) with
// distinct squarefree factors, product of factor^mult = p up to a rational unit.
std::vector<std::pair<RatPoly, int>> squarefree_decomposition(const RatPoly& p);

// Res_t(a, b) over Q.
Rat resultant(const RatPoly& a, const RatPoly& b);

// Sturm chain of p (signed remainder sequence of p, p').
std::vector<RatPoly> sturm_chain(const RatPoly& p);
// Signed remainder sequence of (p, q), for Cauchy index computations.
std::vector<RatPoly> signed_remainder_chain(const RatPoly& p, const RatPoly& q);
// Sign variations of the chain evaluated at x.
int sign_variations_at(const std::vector<RatPoly>& chain, const Rat& x);
// Number of distinct real roots of squarefree p in (a, b].
int sturm_count(const std::vector<RatPoly>& chain, const Rat& a, const Rat& b);

// Cauchy bound: all complex roots of p have modulus < bound.
Rat root_bound(const RatPoly& p);

// Rational lower bound for the square of the minimal distance between
// distinct complex roots of a squarefree polynomial (Mahler).
Rat root_separation_sq_lower_bound(const RatPoly& p);

}  // namespace orbit
