#include "orbit/interval.hpp"

#include <algorithm>

namespace orbit {

Box::Box(Rat rl, Rat rh, Rat il, Rat ih)
    : re_lo(std::move(rl)), re_hi(std::move(rh)), im_lo(std::move(il)), im_hi(std::move(ih)) {
    if (re_lo > re_hi || im_lo > im_hi) throw std::invalid_argument("inverted box bounds");
}

Box Box::point(const Rat& re, const Rat& im) { return Box(re, re, im, im); }

bool Box::intersects(const Box& o) const {
    return re_lo <= o.re_hi && o.re_lo <= re_hi && im_lo <= o.im_hi && o.im_lo <= im_hi;
}

Box box_add(const Box& a, const Box& b) {
    return Box(a.re_lo + b.re_lo, a.re_hi + b.re_hi, a.im_lo + b.im_lo, a.im_hi + b.im_hi);
}

Box box_sub(const Box& a, const Box& b) {
    return Box(a.re_lo - b.re_hi, a.re_hi - b.re_lo, a.im_lo - b.im_hi, a.im_hi - b.im_lo);
}

Box box_neg(const Box& a) { return Box(-a.re_hi, -a.re_lo, -a.im_hi, -a.im_lo); }

namespace {
// Real interval product [al,ah] * [bl,bh].
void interval_mul(const Rat& al, const Rat& ah, const Rat& bl, const Rat& bh, Rat& lo, Rat& hi) {
    Rat p1 = al * bl, p2 = al * bh, p3 = ah * bl, p4 = ah * bh;
    lo = rat_min(rat_min(p1, p2), rat_min(p3, p4));
    hi = rat_max(rat_max(p1, p2), rat_max(p3, p4));
}
}  // namespace

Box box_mul(const Box& a, const Box& b) {
    // (ar + i ai)(br + i bi) = (ar*br - ai*bi) + i(ar*bi + ai*br)
    Rat l1, h1, l2, h2, l3, h3, l4, h4;
    interval_mul(a.re_lo, a.re_hi, b.re_lo, b.re_hi, l1, h1);
    interval_mul(a.im_lo, a.im_hi, b.im_lo, b.im_hi, l2, h2);
    interval_mul(a.re_lo, a.re_hi, b.im_lo, b.im_hi, l3, h3);
    interval_mul(a.im_lo, a.im_hi, b.re_lo, b.re_hi, l4, h4);
    return Box(l1 - h2, h1 - l2, l3 + l4, h3 + h4);
}

Box box_scale(const Box& a, const Rat& s) {
    if (s >= 0) return Box(a.re_lo * s, a.re_hi * s, a.im_lo * s, a.im_hi * s);
    return Box(a.re_hi * s, a.re_lo * s, a.im_hi * s, a.im_lo * s);
}

Box box_eval(const RatPoly& p, const Box& b) {
    Box acc = Box::point(Rat(0));
    for (auto it = p.coeffs().rbegin(); it != p.coeffs().rend(); ++it)
        acc = box_add(box_mul(acc, b), Box::point(*it));
    return acc;
}

Box box_norm_sq(const Box& a) {
    auto sq = [](const Rat& lo, const Rat& hi, Rat& l, Rat& h) {
        if (lo >= 0) {
            l = lo * lo;
            h = hi * hi;
        } else if (hi <= 0) {
            l = hi * hi;
            h = lo * lo;
        } else {
            l = 0;
            h = rat_max(lo * lo, hi * hi);
        }
    };
    Rat rl, rh, il, ih;
    sq(a.re_lo, a.re_hi, rl, rh);
    sq(a.im_lo, a.im_hi, il, ih);
    return Box(rl + il, rh + ih, Rat(0), Rat(0));
}

}  // namespace orbit
