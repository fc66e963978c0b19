#pragma once

#include <optional>

#include "orbit/numberfield.hpp"

namespace orbit {

// A complex algebraic number, represented inside an explicit number field.
// Serializes as (minimal polynomial over Q, isolating box); internally the
// value is a polynomial in the field generator so that arithmetic stays in
// one field and equality is structural.
class AlgNum {
   public:
    AlgNum() : field_(NumberField::rationals()), rep_() {}
    explicit AlgNum(Rat r) : field_(NumberField::rationals()) {
        r.canonicalize();
        rep_ = RatPoly::constant(r);
    }

    // From the serialized form: monic irreducible minpoly and an isolating box.
    static AlgNum from_minpoly(const RatPoly& minpoly, const Box& box);
    static AlgNum in_field(NumberField::Ptr field, RatPoly rep);

    const NumberField::Ptr& field() const { return field_; }
    const RatPoly& rep() const { return rep_; }

    bool is_zero() const { return rep_.is_zero(); }
    bool is_rational() const { return rep_.degree() <= 0; }
    Rat as_rational() const;  // pre: is_rational()

    // Monic irreducible minimal polynomial over Q.
    RatPoly minpoly() const;
    // A box of width <= max_width containing the value and isolating it among
    // the roots of its minimal polynomial.
    Box isolating_box(const Rat& max_width = Rat(1, 1024)) const;
    // A box of width <= max_width containing the value (no isolation claim).
    Box enclosure(const Rat& max_width) const;

    AlgNum operator-() const { return AlgNum(field_, -rep_); }
    AlgNum operator+(const AlgNum& o) const;
    AlgNum operator-(const AlgNum& o) const;
    AlgNum operator*(const AlgNum& o) const;
    AlgNum operator/(const AlgNum& o) const;
    AlgNum inv() const;
    AlgNum conj() const;

    bool operator==(const AlgNum& o) const;
    bool operator!=(const AlgNum& o) const { return !(*this == o); }

    // Sign of a real value (-1, 0, +1). Diverges guardedly if not real.
    int sign_real() const;
    bool is_real() const;
    AlgNum real_part() const;  // (a + conj a)/2
    AlgNum imag_part_times_i() const { return *this - real_part(); }  // i*Im(a)
    // |a|^2 = a * conj(a), a real algebraic number.
    AlgNum norm_sq() const { return *this * conj(); }

   private:
    AlgNum(NumberField::Ptr f, RatPoly r) : field_(std::move(f)), rep_(std::move(r)) {}
    NumberField::Ptr field_;
    RatPoly rep_;  // reduced mod field_->modulus()

    friend std::pair<AlgNum, AlgNum> to_common_field(const AlgNum& a, const AlgNum& b);
};

// Rewrites both values inside a single field (building a compositum when
// necessary).
std::pair<AlgNum, AlgNum> to_common_field(const AlgNum& a, const AlgNum& b);

// The imaginary unit i (shared instance).
const AlgNum& alg_i();

// a^e, negative exponents via the inverse.
AlgNum alg_pow(const AlgNum& a, long e);

// (Re a, Im a) as real algebraic numbers.
std::pair<AlgNum, AlgNum> re_im(const AlgNum& a);

enum class CmpOne { Less, Equal, Greater };

// Exact comparison of |a| with 1 via the real algebraic number a*conj(a).
CmpOne modulus_cmp_one(const AlgNum& a);

// Least n with a^n = 1, if a is a root of unity; empty otherwise.
// pre: |a| = 1.
std::optional<long> root_of_unity_order(const AlgNum& a);

}  // namespace orbit
