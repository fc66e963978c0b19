#include "orbit/roots.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <deque>

namespace orbit {
namespace {

// p(u + t*w) split into real and imaginary parts, as polynomials in t.
void edge_polys(const RatPoly& p, const Rat& ur, const Rat& ui, const Rat& wr, const Rat& wi,
                RatPoly& A, RatPoly& B) {
    RatPoly lr({ur, wr}), li({ui, wi});
    RatPoly ar, ai;  // accumulator, initially 0
    for (auto it = p.coeffs().rbegin(); it != p.coeffs().rend(); ++it) {
        RatPoly nr = ar * lr - ai * li + RatPoly::constant(*it);
        RatPoly ni = ar * li + ai * lr;
        ar = std::move(nr);
        ai = std::move(ni);
    }
    A = std::move(ar);
    B = std::move(ai);
}

// True if g (nonzero) has a root in the closed interval [0, 1].
bool has_root_in_unit_interval(const RatPoly& g) {
    if (g.degree() < 1) return false;
    if (g.eval(Rat(0)) == 0 || g.eval(Rat(1)) == 0) return true;
    auto sf = squarefree_decomposition(g);
    for (const auto& [f, m] : sf) {
        auto chain = sturm_chain(f);
        if (sturm_count(chain, Rat(0), Rat(1)) > 0) return true;
    }
    return false;
}

}  // namespace

namespace {
struct RectStats {
    std::atomic<long> calls{0};
    std::atomic<long> ms{0};
    std::atomic<int> maxdeg{0};
    ~RectStats() {
        if (getenv("ORBIT_DEBUG_EXT"))
            fprintf(stderr, "[rect] calls=%ld total_ms=%ld maxdeg=%d\n", calls.load(), ms.load(),
                    maxdeg.load());
    }
} rect_stats;
}  // namespace

int count_roots_rect(const RatPoly& p, const Box& box) {
    auto t0 = std::chrono::steady_clock::now();
    rect_stats.calls++;
    int dd = p.degree();
    int prev = rect_stats.maxdeg.load();
    while (dd > prev && !rect_stats.maxdeg.compare_exchange_weak(prev, dd)) {
    }
    struct T {
        std::chrono::steady_clock::time_point t0;
        ~T() {
            rect_stats.ms += std::chrono::duration_cast<std::chrono::milliseconds>(
                                 std::chrono::steady_clock::now() - t0)
                                 .count();
        }
    } timer{t0};
    if (box.re_lo >= box.re_hi || box.im_lo >= box.im_hi) return -1;
    // Counterclockwise corners.
    const Rat corners[4][2] = {{box.re_lo, box.im_lo},
                               {box.re_hi, box.im_lo},
                               {box.re_hi, box.im_hi},
                               {box.re_lo, box.im_hi}};
    int index_sum = 0;
    for (int e = 0; e < 4; ++e) {
        const Rat& ur = corners[e][0];
        const Rat& ui = corners[e][1];
        Rat wr = corners[(e + 1) % 4][0] - ur;
        Rat wi = corners[(e + 1) % 4][1] - ui;
        RatPoly A, B;
        edge_polys(p, ur, ui, wr, wi, A, B);
        if (B.is_zero()) return -1;  // p real along a whole edge
        // Root of p on the edge: common zero of A and B in [0,1].
        RatPoly g = poly_gcd(A, B);
        if (g.degree() >= 1 && has_root_in_unit_interval(g)) return -1;
        // Endpoint safety for the Cauchy index: p not real at corners.
        if (B.eval(Rat(0)) == 0 || B.eval(Rat(1)) == 0) return -1;
        auto chain = signed_remainder_chain(B, A);
        index_sum += sign_variations_at(chain, Rat(0)) - sign_variations_at(chain, Rat(1));
    }
    if (index_sum < 0 || index_sum % 2 != 0) return -1;
    return index_sum / 2;
}

namespace {

// Split fractions tried when a midpoint split lands on (or too close to) a root.
const long kSplitNum[] = {1, 31, 33, 15, 17, 7, 9, 29, 35, 13, 19};
const long kSplitDen[] = {2, 64, 64, 32, 32, 16, 16, 64, 64, 32, 32};
constexpr int kSplitTries = 11;

struct RealIsolator {
    RatPoly g;  // deflated as exact rational roots are found
    std::vector<RatPoly> chain;
    std::vector<Box> out;

    explicit RealIsolator(const RatPoly& poly) : g(poly), chain(sturm_chain(poly)) {}

    // Roots of the current g in (lo, hi); endpoints are never roots.
    void isolate(const Rat& lo, const Rat& hi, int count) {
        if (count == 0) return;
        if (count == 1) {
            out.push_back(Box(lo, hi, Rat(0), Rat(0)));
            return;
        }
        Rat mid = lo + (hi - lo) / 2;
        if (g.eval(mid) == 0) {
            out.push_back(Box::point(mid));
            g = poly_divmod(g, RatPoly({-mid, Rat(1)})).first;
            chain = sturm_chain(g);
            --count;
        }
        int left = sturm_count(chain, lo, mid);
        isolate(lo, mid, left);
        isolate(mid, hi, count - left);
    }
};

// Isolates complex (non-real) roots of squarefree g in the open upper half
// plane; returns one box per root, all strictly above the real axis.
std::vector<Box> isolate_upper_roots(const RatPoly& g, int expected) {
    std::vector<Box> out;
    if (expected == 0) return out;
    Rat R = root_bound(g);
    // Strip height chosen adaptively: halve it while the counter reports that
    // some upper-half roots sit below the strip, nudge the frame when the
    // boundary test is dirty. A priori separation bounds would force tiny
    // rationals into every subsequent Sturm chain.
    int count = -1;
    Box outer;
    Rat grow(0);
    Rat delta(1, 2);
    for (int attempt = 0; attempt < 256 && count != expected; ++attempt) {
        Rat Ra = R + 1 + grow;
        outer = Box(-Ra, Ra, delta, Ra);
        count = count_roots_rect(g, outer);
        if (count >= 0 && count < expected) {
            delta /= 2;  // roots hide between the strip and the real axis
        } else if (count != expected) {
            grow += make_rat(1, 17);
            delta = delta * make_rat(251, 256);
        }
    }
    if (count != expected)
        throw std::logic_error("complex root isolation: outer box count mismatch");

    std::deque<std::pair<Box, int>> queue;
    queue.emplace_back(outer, expected);
    while (!queue.empty()) {
        auto [b, n] = queue.front();
        queue.pop_front();
        if (n == 1) {
            out.push_back(b);
            continue;
        }
        bool split_done = false;
        bool vertical = (b.re_hi - b.re_lo) >= (b.im_hi - b.im_lo);
        for (int t = 0; t < kSplitTries && !split_done; ++t) {
            Rat f = make_rat(kSplitNum[t], kSplitDen[t]);
            Box b1, b2;
            if (vertical) {
                Rat m = b.re_lo + (b.re_hi - b.re_lo) * f;
                b1 = Box(b.re_lo, m, b.im_lo, b.im_hi);
                b2 = Box(m, b.re_hi, b.im_lo, b.im_hi);
            } else {
                Rat m = b.im_lo + (b.im_hi - b.im_lo) * f;
                b1 = Box(b.re_lo, b.re_hi, b.im_lo, m);
                b2 = Box(b.re_lo, b.re_hi, m, b.im_hi);
            }
            int c1 = count_roots_rect(g, b1);
            if (c1 < 0) continue;
            int c2 = count_roots_rect(g, b2);
            if (c2 < 0) continue;
            if (c1 + c2 != n) throw std::logic_error("root counting inconsistency during split");
            if (c1 > 0) queue.emplace_back(b1, c1);
            if (c2 > 0) queue.emplace_back(b2, c2);
            split_done = true;
        }
        if (!split_done) throw std::logic_error("could not find a clean split line");
    }
    return out;
}

}  // namespace

namespace {
Box refine_once(const RatPoly& p, const Box& box) {
    if (box.is_point()) return box;
    if (box.is_real_line()) {
        auto chain = sturm_chain(p);
        const Rat& lo = box.re_lo;
        const Rat& hi = box.re_hi;
        for (int t = 0; t < kSplitTries; ++t) {
            Rat mid = lo + (hi - lo) * make_rat(kSplitNum[t], kSplitDen[t]);
            if (p.eval(mid) == 0) return Box::point(mid);
            if (sturm_count(chain, lo, mid) == 1) return Box(lo, mid, Rat(0), Rat(0));
            return Box(mid, hi, Rat(0), Rat(0));
        }
    }
    bool vertical = (box.re_hi - box.re_lo) >= (box.im_hi - box.im_lo);
    for (int t = 0; t < kSplitTries; ++t) {
        Rat f = make_rat(kSplitNum[t], kSplitDen[t]);
        Box b1, b2;
        if (vertical) {
            Rat m = box.re_lo + (box.re_hi - box.re_lo) * f;
            b1 = Box(box.re_lo, m, box.im_lo, box.im_hi);
            b2 = Box(m, box.re_hi, box.im_lo, box.im_hi);
        } else {
            Rat m = box.im_lo + (box.im_hi - box.im_lo) * f;
            b1 = Box(box.re_lo, box.re_hi, box.im_lo, m);
            b2 = Box(box.re_lo, box.re_hi, m, box.im_hi);
        }
        int c1 = count_roots_rect(p, b1);
        if (c1 < 0) continue;
        if (c1 == 1) return b1;
        int c2 = count_roots_rect(p, b2);
        if (c2 == 1) return b2;
        if (c1 == 0 && c2 < 0) continue;
        throw std::logic_error("refine_root_box: lost the root");
    }
    throw std::logic_error("refine_root_box: no clean split found");
}
}  // namespace

Box refine_root_box(const RatPoly& p, const Box& box) {
    Rat target = box.width() / 2;
    Box b = refine_once(p, box);
    while (!b.is_point() && b.width() > target) b = refine_once(p, b);
    return b;
}

std::vector<IsolatedRoot> isolate_roots(const RatPoly& p) {
    if (p.is_zero()) throw std::invalid_argument("cannot isolate roots of the zero polynomial");
    std::vector<IsolatedRoot> roots;
    if (p.degree() == 0) return roots;
    auto sf = squarefree_decomposition(p);
    std::vector<const RatPoly*> owner;  // squarefree factor each box belongs to
    for (const auto& [g, mult] : sf) {
        // Real roots.
        RealIsolator ri(g);
        Rat R = root_bound(g);
        int nreal = sturm_count(ri.chain, -R, R);
        ri.isolate(-R, R, nreal);
        for (auto& b : ri.out) {
            roots.push_back({b, mult});
            owner.push_back(&g);
        }
        // Non-real roots, in conjugate pairs.
        int ncomplex = g.degree() - nreal;
        auto upper = isolate_upper_roots(g, ncomplex / 2);
        for (auto& b : upper) {
            roots.push_back({b, mult});
            owner.push_back(&g);
            roots.push_back({b.conjugate(), mult});
            owner.push_back(&g);
        }
    }
    // Boxes isolate distinct roots within each squarefree factor; refine until
    // they are pairwise disjoint across factors too.
    bool changed = true;
    int guard = 0;
    while (changed && ++guard < 256) {
        changed = false;
        for (size_t i = 0; i < roots.size(); ++i)
            for (size_t j = i + 1; j < roots.size(); ++j) {
                if (owner[i] == owner[j]) {
                    // same squarefree factor: boxes already isolate distinct roots,
                    // but conjugate-pair mirrors may touch if close to the axis
                    if (!roots[i].box.intersects(roots[j].box)) continue;
                } else if (!roots[i].box.intersects(roots[j].box)) {
                    continue;
                }
                roots[i].box = refine_root_box(*owner[i], roots[i].box);
                roots[j].box = refine_root_box(*owner[j], roots[j].box);
                changed = true;
            }
    }
    if (guard >= 256) throw std::logic_error("failed to separate root boxes");
    return roots;
}

}  // namespace orbit
