#pragma once

#include "orbit/poly.hpp"
#include "orbit/rational.hpp"

namespace orbit {

// Axis-aligned rational rectangle in the complex plane.
struct Box {
    Rat re_lo, re_hi, im_lo, im_hi;

    Box() : re_lo(0), re_hi(0), im_lo(0), im_hi(0) {}
    Box(Rat rl, Rat rh, Rat il, Rat ih);
    static Box point(const Rat& re, const Rat& im = Rat(0));

    bool is_point() const { return re_lo == re_hi && im_lo == im_hi; }
    bool is_real_line() const { return im_lo == 0 && im_hi == 0; }
    Rat width() const { return rat_max(re_hi - re_lo, im_hi - im_lo); }
    Rat mid_re() const { return (re_lo + re_hi) / 2; }
    Rat mid_im() const { return (im_lo + im_hi) / 2; }

    bool contains(const Rat& re, const Rat& im) const {
        return re_lo <= re && re <= re_hi && im_lo <= im && im <= im_hi;
    }
    bool contains_zero() const { return contains(Rat(0), Rat(0)); }
    bool intersects(const Box& o) const;
    Box conjugate() const { return Box(re_lo, re_hi, -im_hi, -im_lo); }

    bool operator==(const Box& o) const {
        return re_lo == o.re_lo && re_hi == o.re_hi && im_lo == o.im_lo && im_hi == o.im_hi;
    }
};

// Interval arithmetic on boxes (rectangular complex intervals).
Box box_add(const Box& a, const Box& b);
Box box_sub(const Box& a, const Box& b);
Box box_mul(const Box& a, const Box& b);
Box box_neg(const Box& a);
Box box_scale(const Box& a, const Rat& s);

// Encloses p(z) for z in b; p has rational coefficients.
Box box_eval(const RatPoly& p, const Box& b);

// Encloses re^2 + im^2 over the box, as a real interval [lo, hi] box.
Box box_norm_sq(const Box& a);

}  // namespace orbit
