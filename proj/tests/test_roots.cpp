#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>
#include <random>

#include "orbit/roots.hpp"

using namespace orbit;

namespace {
RatPoly poly(std::initializer_list<long> coeffs) {
    std::vector<Rat> c;
    for (long x : coeffs) c.emplace_back(x);
    return RatPoly(std::move(c));
}

double lo_d(const Rat& q) { return q.get_d(); }

bool box_contains_approx(const Box& b, std::complex<double> z, double tol = 1e-9) {
    return lo_d(b.re_lo) - tol <= z.real() && z.real() <= lo_d(b.re_hi) + tol &&
           lo_d(b.im_lo) - tol <= z.imag() && z.imag() <= lo_d(b.im_hi) + tol;
}
}  // namespace

TEST_CASE("rectangle root counting") {
    RatPoly z = poly({0, 1});
    CHECK(count_roots_rect(z, Box(Rat(-1), Rat(1), Rat(-1), Rat(1))) == 1);
    CHECK(count_roots_rect(z, Box(Rat(2), Rat(3), Rat(2), Rat(3))) == 0);
    RatPoly p = poly({1, 0, 1});  // roots +-i
    CHECK(count_roots_rect(p, Box(make_rat(-1, 2), make_rat(1, 2), make_rat(1, 2), Rat(2))) == 1);
    CHECK(count_roots_rect(p, Box(Rat(-2), Rat(2), Rat(-2), Rat(2))) == 2);
    // (t^2+1)(t-1): three roots in a big box
    CHECK(count_roots_rect(poly({1, 0, 1}) * poly({-1, 1}),
                           Box(Rat(-2), Rat(2), Rat(-2), Rat(2))) == 3);
    // root on boundary -> unsafe
    CHECK(count_roots_rect(poly({-1, 1}), Box(Rat(-1), Rat(1), Rat(-1), Rat(1))) == -1);
}

TEST_CASE("isolate roots of t^2 + 1") {
    auto roots = isolate_roots(poly({1, 0, 1}));
    REQUIRE(roots.size() == 2);
    CHECK(roots[0].multiplicity == 1);
    CHECK(roots[1].multiplicity == 1);
    bool has_i = false, has_minus_i = false;
    for (auto& r : roots) {
        if (box_contains_approx(r.box, {0, 1})) has_i = true;
        if (box_contains_approx(r.box, {0, -1})) has_minus_i = true;
    }
    CHECK(has_i);
    CHECK(has_minus_i);
    CHECK_FALSE(roots[0].box.intersects(roots[1].box));
}

TEST_CASE("isolate double root") {
    RatPoly p = poly({-1, 1});
    auto roots = isolate_roots(p * p);
    REQUIRE(roots.size() == 1);
    CHECK(roots[0].multiplicity == 2);
    CHECK(roots[0].box.contains(Rat(1), Rat(0)));
}

TEST_CASE("isolate quadratic with roots (4 +- 3i)/5") {
    RatPoly p({Rat(1), make_rat(-8, 5), Rat(1)});
    auto roots = isolate_roots(p);
    REQUIRE(roots.size() == 2);
    bool up = false, down = false;
    for (auto& r : roots) {
        if (box_contains_approx(r.box, {0.8, 0.6})) up = true;
        if (box_contains_approx(r.box, {0.8, -0.6})) down = true;
    }
    CHECK(up);
    CHECK(down);
}

TEST_CASE("multiplicities sum to degree on random polynomials") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 100; ++trial) {
        int deg = 1 + (int)(rng() % 8);
        std::vector<Rat> c(deg + 1);
        for (auto& x : c) x = Rat((long)(rng() % 11) - 5);
        if (c[deg] == 0) c[deg] = Rat(1);
        // occasionally square a factor to get multiplicities
        RatPoly p(c);
        if (trial % 5 == 0) p = p * p;
        auto roots = isolate_roots(p);
        int total = 0;
        for (auto& r : roots) total += r.multiplicity;
        CHECK(total == p.degree());
        for (size_t i = 0; i < roots.size(); ++i)
            for (size_t j = i + 1; j < roots.size(); ++j)
                CHECK_FALSE(roots[i].box.intersects(roots[j].box));
    }
}

TEST_CASE("refinement keeps the root") {
    RatPoly p = poly({-2, 0, 1});  // sqrt(2)
    auto roots = isolate_roots(p);
    Box b;
    for (auto& r : roots)
        if (r.box.re_lo > 0) b = r.box;
    for (int i = 0; i < 30; ++i) b = refine_root_box(p, b);
    CHECK(b.width() < make_rat(1, 1000000));
    CHECK(box_contains_approx(b, {std::sqrt(2.0), 0}));
}

TEST_CASE("refinement of complex boxes") {
    RatPoly p({Rat(1), make_rat(-8, 5), Rat(1)});
    auto roots = isolate_roots(p);
    for (auto& r : roots) {
        Box b = r.box;
        for (int i = 0; i < 25; ++i) b = refine_root_box(p, b);
        CHECK(b.width() < make_rat(1, 100000));
        bool ok = box_contains_approx(b, {0.8, 0.6}) || box_contains_approx(b, {0.8, -0.6});
        CHECK(ok);
    }
}
