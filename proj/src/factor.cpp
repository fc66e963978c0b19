#include "orbit/factor.hpp"

#include <algorithm>
#include <cstdint>
#include <map>

namespace orbit {
namespace {

// ---------- arithmetic mod a machine prime ----------

using u64 = std::uint64_t;
using u128 = unsigned __int128;

struct ModP {
    u64 p;
    u64 add(u64 a, u64 b) const { u64 s = a + b; return s >= p ? s - p : s; }
    u64 sub(u64 a, u64 b) const { return a >= b ? a - b : a + p - b; }
    u64 mul(u64 a, u64 b) const { return (u64)((u128)a * b % p); }
    u64 pow(u64 a, Int e) const {
        u64 r = 1;
        Int ee = e;
        while (ee > 0) {
            if (mpz_odd_p(ee.get_mpz_t())) r = mul(r, a);
            a = mul(a, a);
            ee >>= 1;
        }
        return r;
    }
    u64 inv(u64 a) const { return pow(a, Int((long)p - 2)); }
};

// Dense poly mod p, lowest degree first.
using PolyP = std::vector<u64>;

void trim(PolyP& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

int deg(const PolyP& a) { return (int)a.size() - 1; }

PolyP mul(const ModP& m, const PolyP& a, const PolyP& b) {
    if (a.empty() || b.empty()) return {};
    PolyP r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (size_t j = 0; j < b.size(); ++j) r[i + j] = m.add(r[i + j], m.mul(a[i], b[j]));
    }
    trim(r);
    return r;
}

PolyP sub(const ModP& m, const PolyP& a, const PolyP& b) {
    PolyP r(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] = m.sub(r[i], b[i]);
    trim(r);
    return r;
}

PolyP rem(const ModP& m, PolyP a, const PolyP& b) {
    int db = deg(b);
    u64 linv = m.inv(b.back());
    while (deg(a) >= db) {
        u64 f = m.mul(a.back(), linv);
        int shift = deg(a) - db;
        for (int j = 0; j <= db; ++j) a[shift + j] = m.sub(a[shift + j], m.mul(f, b[j]));
        trim(a);
    }
    return a;
}

PolyP monic(const ModP& m, PolyP a) {
    if (a.empty()) return a;
    u64 linv = m.inv(a.back());
    for (auto& c : a) c = m.mul(c, linv);
    return a;
}

PolyP gcd(const ModP& m, PolyP a, PolyP b) {
    while (!b.empty()) {
        PolyP r = rem(m, a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return monic(m, std::move(a));
}

PolyP powmod(const ModP& m, PolyP base, Int e, const PolyP& mod) {
    PolyP r = {1};
    base = rem(m, std::move(base), mod);
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) r = rem(m, mul(m, r, base), mod);
        base = rem(m, mul(m, base, base), mod);
        e >>= 1;
    }
    return r;
}

PolyP derivative(const ModP& m, const PolyP& a) {
    PolyP r;
    for (size_t i = 1; i < a.size(); ++i) r.push_back(m.mul(a[i], i % m.p));
    trim(r);
    return r;
}

// Deterministic PRNG for equal-degree splitting.
struct Rng {
    u64 s;
    u64 next() {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        return s;
    }
};

// Full factorization of a squarefree monic polynomial mod p.
std::vector<PolyP> factor_mod_p(const ModP& m, PolyP f, Rng& rng) {
    std::vector<PolyP> out;
    f = monic(m, std::move(f));
    // Distinct-degree decomposition.
    PolyP h = {0, 1};  // x
    PolyP rest = f;
    int d = 0;
    while (deg(rest) > 0) {
        ++d;
        if (2 * d > deg(rest)) {
            out.push_back(rest);
            break;
        }
        h = powmod(m, h, Int((unsigned long)m.p), rest);
        PolyP hx = h;
        if (hx.size() < 2) hx.resize(2, 0);
        hx[1] = m.sub(hx[1], 1);
        trim(hx);
        PolyP g = gcd(m, hx, rest);
        if (deg(g) > 0) {
            // g = product of irreducible factors of degree exactly d.
            std::vector<PolyP> eq;
            std::vector<PolyP> stack = {g};
            while (!stack.empty()) {
                PolyP cur = stack.back();
                stack.pop_back();
                if (deg(cur) == d) {
                    eq.push_back(cur);
                    continue;
                }
                Int pd(1);
                for (int i = 0; i < d; ++i) pd *= Int((unsigned long)m.p);
                Int exp = (pd - 1) / 2;
                while (true) {
                    PolyP r(deg(cur), 0);
                    for (auto& c : r) c = rng.next() % m.p;
                    trim(r);
                    if (r.empty()) continue;
                    PolyP s = powmod(m, r, exp, cur);
                    if (s.empty()) s = {0};
                    s.resize(std::max<size_t>(s.size(), 1));
                    s[0] = m.sub(s[0], 1);
                    trim(s);
                    PolyP gg = gcd(m, s, cur);
                    if (!gg.empty() && deg(gg) > 0 && deg(gg) < deg(cur)) {
                        stack.push_back(gg);
                        // quotient
                        PolyP q;
                        {
                            // exact division cur / gg
                            PolyP a = cur;
                            int dg = deg(gg);
                            u64 linv = m.inv(gg.back());
                            q.assign(deg(a) - dg + 1, 0);
                            while (deg(a) >= dg) {
                                u64 fcoef = m.mul(a.back(), linv);
                                int shift = deg(a) - dg;
                                q[shift] = fcoef;
                                for (int j = 0; j <= dg; ++j)
                                    a[shift + j] = m.sub(a[shift + j], m.mul(fcoef, gg[j]));
                                trim(a);
                            }
                        }
                        stack.push_back(q);
                        break;
                    }
                }
            }
            for (auto& e : eq) out.push_back(monic(m, std::move(e)));
            // rest /= g
            PolyP a = rest;
            int dgg = deg(g);
            u64 linv = m.inv(g.back());
            PolyP q(deg(a) - dgg + 1, 0);
            while (deg(a) >= dgg) {
                u64 fcoef = m.mul(a.back(), linv);
                int shift = deg(a) - dgg;
                q[shift] = fcoef;
                for (int j = 0; j <= dgg; ++j) a[shift + j] = m.sub(a[shift + j], m.mul(fcoef, g[j]));
                trim(a);
            }
            rest = q;
            h = rem(m, h, rest.empty() ? PolyP{1} : rest);
            if (deg(rest) <= 0) break;
        }
    }
    return out;
}

// ---------- integer polynomial helpers ----------

using IPoly = std::vector<Int>;  // lowest degree first

void trimz(IPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

IPoly mulz(const IPoly& a, const IPoly& b) {
    if (a.empty() || b.empty()) return {};
    IPoly r(a.size() + b.size() - 1, Int(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

Int content(const IPoly& a) {
    Int c(0);
    for (const auto& x : a) c = gcd(c, x);
    return c;
}

// Symmetric representative of a mod m in (-m/2, m/2].
Int symmetric(const Int& a, const Int& m) {
    Int r = a % m;
    if (r < 0) r += m;
    if (2 * r > m) r -= m;
    return r;
}

// ---------- Hensel lifting ----------

// Given f = g*h mod p with gcd(g,h) = 1 mod p (g, h monic except h carries lc),
// lift to f = g*h mod p^2 (quadratic step). All polys as IPoly mod "q".
// We use the standard linear lift iterated, tracking Bezout cofactors mod p.

struct ModQ {
    Int q;
    IPoly reduce(IPoly a) const {
        for (auto& c : a) {
            c %= q;
            if (c < 0) c += q;
        }
        trimz(a);
        return a;
    }
    IPoly mul(const IPoly& a, const IPoly& b) const { return reduce(mulz(a, b)); }
    IPoly add(IPoly a, const IPoly& b) const {
        if (a.size() < b.size()) a.resize(b.size(), Int(0));
        for (size_t i = 0; i < b.size(); ++i) a[i] += b[i];
        return reduce(std::move(a));
    }
    IPoly sub(IPoly a, const IPoly& b) const {
        if (a.size() < b.size()) a.resize(b.size(), Int(0));
        for (size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
        return reduce(std::move(a));
    }
    // remainder of a by monic b
    IPoly rem_monic(IPoly a, const IPoly& b) const {
        int db = (int)b.size() - 1;
        while ((int)a.size() - 1 >= db) {
            Int f = a.back();
            int shift = (int)a.size() - 1 - db;
            for (int j = 0; j <= db; ++j) a[shift + j] -= f * b[j];
            a = reduce(std::move(a));
            while ((int)a.size() - 1 >= db && a.back() == 0) a.pop_back();
            if ((int)a.size() - 1 < db) break;
        }
        return reduce(std::move(a));
    }
    // quotient of a by monic b
    IPoly div_monic(IPoly a, const IPoly& b) const {
        int db = (int)b.size() - 1;
        int da = (int)a.size() - 1;
        if (da < db) return {};
        IPoly qout(da - db + 1, Int(0));
        while ((int)a.size() - 1 >= db) {
            Int f = a.back() % q;
            if (f < 0) f += q;
            int shift = (int)a.size() - 1 - db;
            qout[shift] = f;
            for (int j = 0; j <= db; ++j) a[shift + j] -= f * b[j];
            a = reduce(std::move(a));
            while (!a.empty() && a.back() == 0) a.pop_back();
            if (a.empty()) break;
        }
        return reduce(std::move(qout));
    }
};

// Lift factorization f ≡ lc * prod(w_i) from mod p to mod p^K >= bound, where
// w_i monic mod p. Returns monic lifts mod p^K. Uses a divide-and-conquer tree
// with linear Hensel steps doubling the modulus.
struct HenselTree {
    ModP mp;
    Int p;

    // Extended Euclid mod p for polys: s*a + t*b = 1 (a, b coprime mod p).
    void bezout(const PolyP& a, const PolyP& b, PolyP& s, PolyP& t) {
        PolyP r0 = a, r1 = b;
        PolyP s0 = {1}, s1 = {};
        PolyP t0 = {}, t1 = {1};
        while (!r1.empty()) {
            // quotient r0 / r1
            PolyP q;
            {
                PolyP aa = r0;
                int d1 = deg(r1);
                u64 linv = mp.inv(r1.back());
                if (deg(aa) >= d1) q.assign(deg(aa) - d1 + 1, 0);
                while (deg(aa) >= d1) {
                    u64 f = mp.mul(aa.back(), linv);
                    int shift = deg(aa) - d1;
                    q[shift] = f;
                    for (int j = 0; j <= d1; ++j) aa[shift + j] = mp.sub(aa[shift + j], mp.mul(f, r1[j]));
                    trim(aa);
                }
                r0 = r1;
                r1 = aa;
            }
            PolyP ns = sub(mp, s0, mul(mp, q, s1));
            PolyP nt = sub(mp, t0, mul(mp, q, t1));
            s0 = s1; s1 = ns;
            t0 = t1; t1 = nt;
        }
        // r0 = gcd (constant); normalize to 1
        u64 cinv = mp.inv(r0[0]);
        for (auto& c : s0) c = mp.mul(c, cinv);
        for (auto& c : t0) c = mp.mul(c, cinv);
        s = s0;
        t = t0;
    }

    static IPoly to_ipoly(const PolyP& a) {
        IPoly r;
        for (auto c : a) r.emplace_back((unsigned long)c);
        trimz(r);
        return r;
    }
    PolyP to_polyp(const IPoly& a) const {
        PolyP r;
        for (const auto& c : a) {
            Int m = c % Int((unsigned long)mp.p);
            if (m < 0) m += Int((unsigned long)mp.p);
            r.push_back(m.get_ui());
        }
        trim(r);
        return r;
    }

    // Lift f ≡ g*h (mod p) with g,h monic and coprime mod p, to mod target
    // (target a power of p); f monic mod target. Returns (G, H) mod target.
    std::pair<IPoly, IPoly> lift_pair(const IPoly& f, PolyP g0, PolyP h0, const Int& target) {
        PolyP s0, t0;
        bezout(g0, h0, s0, t0);
        IPoly G = to_ipoly(g0), H = to_ipoly(h0);
        IPoly S = to_ipoly(s0), T = to_ipoly(t0);
        Int q = p;
        while (q < target) {
            Int q2 = q * q;
            ModQ mq{q2};
            // e = f - G*H mod q^2
            IPoly e = mq.sub(f, mq.mul(G, H));
            // (all coefficients of e divisible by q)
            // delta combination: G' = G + T*e mod H adjustments (standard formulas)
            // q-scaled: write e = q * c
            IPoly c;
            for (const auto& x : e) c.push_back(x / q);
            ModQ mqq{q};
            c = mqq.reduce(std::move(c));
            // dH = (S*c mod H), dG = (T*c mod G) computed mod q
            IPoly dH = mqq.rem_monic(mqq.mul(S, c), mqq.reduce(H));
            IPoly dG = mqq.rem_monic(mqq.mul(T, c), mqq.reduce(G));
            // G += q*dG, H += q*dH
            {
                IPoly addg;
                for (const auto& x : dG) addg.push_back(x * q);
                G = mq.add(mq.reduce(G), addg);
                IPoly addh;
                for (const auto& x : dH) addh.push_back(x * q);
                H = mq.add(mq.reduce(H), addh);
            }
            // Lift Bezout: S*G + T*H = 1 mod q^2
            {
                IPoly err = mq.sub(mq.sub(IPoly{Int(1)}, mq.mul(S, G)), mq.mul(T, H));
                IPoly cc;
                for (const auto& x : err) cc.push_back(x / q);
                cc = mqq.reduce(std::move(cc));
                IPoly dS = mqq.rem_monic(mqq.mul(S, cc), mqq.reduce(H));
                IPoly dT = mqq.rem_monic(mqq.mul(T, cc), mqq.reduce(G));
                IPoly adds;
                for (const auto& x : dS) adds.push_back(x * q);
                S = mq.add(mq.reduce(S), adds);
                IPoly addt;
                for (const auto& x : dT) addt.push_back(x * q);
                T = mq.add(mq.reduce(T), addt);
            }
            q = q2;
        }
        ModQ mt{q};
        return {mt.reduce(G), mt.reduce(H)};
    }

    // Lift f ≡ prod(ws) mod p (f monic) to factors mod target (power of p reached
    // by repeated squaring from p). Recursive binary split.
    void lift_tree(const IPoly& f, const std::vector<PolyP>& ws, const Int& target,
                   std::vector<IPoly>& out) {
        if (ws.size() == 1) {
            ModQ mt{target};
            out.push_back(mt.reduce(f));
            return;
        }
        size_t half = ws.size() / 2;
        PolyP g0 = {1}, h0 = {1};
        for (size_t i = 0; i < half; ++i) g0 = mul(mp, g0, ws[i]);
        for (size_t i = half; i < ws.size(); ++i) h0 = mul(mp, h0, ws[i]);
        auto [G, H] = lift_pair(f, g0, h0, target);
        std::vector<PolyP> left(ws.begin(), ws.begin() + half);
        std::vector<PolyP> right(ws.begin() + half, ws.end());
        lift_tree(G, left, target, out);
        lift_tree(H, right, target, out);
    }
};

// ---------- Zassenhaus driver ----------

// Factor a primitive squarefree integer polynomial with positive leading coeff.
std::vector<IPoly> factor_squarefree_primitive(IPoly f) {
    std::vector<IPoly> result;
    trimz(f);
    int n = (int)f.size() - 1;
    if (n <= 0) return result;
    if (n == 1) {
        result.push_back(f);
        return result;
    }
    const Int& lc = f.back();

    // Choose a prime where f stays squarefree, preferring few modular factors.
    static const unsigned long primes[] = {1000003, 1000033, 1000037, 1000039, 1000081,
                                           1000099, 1000117, 1000121, 1000133, 1000151,
                                           1000159, 1000171, 1000183, 1000187, 1000193};
    ModP best_m{0};
    std::vector<PolyP> best_factors;
    Rng rng{0x9e3779b97f4a7c15ULL};
    int tried = 0;
    for (unsigned long pr : primes) {
        ModP m{pr};
        if (mpz_divisible_ui_p(lc.get_mpz_t(), pr)) continue;
        PolyP fp;
        for (const auto& c : f) {
            Int r = c % Int(pr);
            if (r < 0) r += Int(pr);
            fp.push_back(r.get_ui());
        }
        trim(fp);
        if (deg(fp) != n) continue;
        PolyP g = gcd(m, fp, derivative(m, fp));
        if (deg(g) != 0) continue;  // not squarefree mod p
        auto fac = factor_mod_p(m, fp, rng);
        if (best_factors.empty() || fac.size() < best_factors.size()) {
            best_factors = std::move(fac);
            best_m = m;
        }
        if (++tried >= 3 || best_factors.size() == 1) break;
    }
    if (best_factors.empty()) throw std::logic_error("no suitable prime found for factorization");
    if (best_factors.size() == 1) {
        result.push_back(f);
        return result;
    }

    // Landau-Mignotte bound on coefficients of factors of f (times lc).
    Int norm2(0);
    for (const auto& c : f) norm2 += c * c;
    Int norm = int_sqrt_floor(norm2) + 1;
    Int bound = (Int(1) << (n + 1)) * norm * abs(lc);
    Int target = Int((unsigned long)best_m.p);
    while (target <= 2 * bound) target *= target;

    // Make f monic mod target for lifting: lift lc^-1 * f? Standard trick:
    // lift factorization of f with factors monic; f itself need not be monic,
    // handle by lifting monic version of f scaled: work with f* = lc^{n-1} f(x/lc)
    // is heavy; instead use the classic approach of lifting with f replaced by
    // monic (lc^{-1} mod target) * f.
    ModQ mt{target};
    Int lcinv;
    {
        Int g, s, t;
        mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), lc.get_mpz_t(), target.get_mpz_t());
        lcinv = s % target;
        if (lcinv < 0) lcinv += target;
    }
    IPoly fmonic;
    for (const auto& c : f) fmonic.push_back(c * lcinv);
    fmonic = mt.reduce(std::move(fmonic));

    HenselTree ht{best_m, Int((unsigned long)best_m.p)};
    std::vector<IPoly> lifted;
    ht.lift_tree(fmonic, best_factors, target, lifted);

    // Recombination.
    std::vector<bool> used(lifted.size(), false);
    IPoly remaining = f;
    size_t remaining_factors = lifted.size();
    for (size_t take = 1; take <= lifted.size() && remaining_factors > 0; ++take) {
        if (2 * take > remaining_factors) break;
        // enumerate subsets of size `take` of unused indices
        std::vector<size_t> avail;
        for (size_t i = 0; i < lifted.size(); ++i)
            if (!used[i]) avail.push_back(i);
        if (avail.size() < take) continue;
        std::vector<size_t> idx(take);
        for (size_t i = 0; i < take; ++i) idx[i] = i;
        bool restart = true;
        while (restart) {
            restart = false;
            // iterate combinations
            while (true) {
                // test current subset
                IPoly cand = {remaining.back() % target};
                if (cand[0] < 0) cand[0] += target;
                for (size_t i = 0; i < take; ++i) cand = mt.mul(cand, lifted[avail[idx[i]]]);
                // symmetric representation, primitive part
                for (auto& c : cand) c = symmetric(c, target);
                trimz(cand);
                // True factors (times lc) obey the Landau-Mignotte bound; spurious
                // recombinations carry target-sized coefficients, so drop them
                // before attempting an exact division.
                bool oversized = false;
                for (const auto& c : cand)
                    if (abs(c) > bound) {
                        oversized = true;
                        break;
                    }
                if (oversized) goto next_combination;
                {
                    Int cont = content(cand);
                    if (cont != 0)
                        for (auto& c : cand) c /= cont;
                }
                // The constant term of a factor divides lc times the constant term.
                if (!cand.empty() && cand[0] != 0 && !remaining.empty() && remaining[0] != 0 &&
                    !mpz_divisible_p(Int(remaining[0] * lc).get_mpz_t(), cand[0].get_mpz_t()))
                    goto next_combination;
                if (!cand.empty()) {
                    // does cand divide remaining over Z?
                    RatPoly cr, rr;
                    {
                        std::vector<Rat> cv, rv;
                        for (const auto& c : cand) cv.emplace_back(c);
                        for (const auto& c : remaining) rv.emplace_back(c);
                        cr = RatPoly(std::move(cv));
                        rr = RatPoly(std::move(rv));
                    }
                    if (cr.degree() > 0 && poly_divides(cr, rr)) {
                        if (cand.back() < 0)
                            for (auto& c : cand) c = -c;
                        result.push_back(cand);
                        for (size_t i = 0; i < take; ++i) used[avail[idx[i]]] = true;
                        remaining_factors -= take;
                        // divide remaining
                        RatPoly q = poly_divmod(rr, cr).first;
                        IPoly nr;
                        for (const auto& c : q.coeffs()) nr.push_back(c.get_num());
                        // q has integer coefficients by Gauss's lemma (cand primitive)
                        remaining = nr;
                        // restart the same subset size with updated avail
                        avail.clear();
                        for (size_t i = 0; i < lifted.size(); ++i)
                            if (!used[i]) avail.push_back(i);
                        if (avail.size() < take || 2 * take > remaining_factors) {
                            restart = false;
                        } else {
                            for (size_t i = 0; i < take; ++i) idx[i] = i;
                            restart = true;
                        }
                        break;
                    }
                }
            next_combination:
                // next combination
                int pos = (int)take - 1;
                while (pos >= 0 && idx[pos] == avail.size() - take + pos) --pos;
                if (pos < 0) break;
                ++idx[pos];
                for (size_t i = pos + 1; i < take; ++i) idx[i] = idx[i - 1] + 1;
            }
        }
    }
    trimz(remaining);
    if ((int)remaining.size() - 1 > 0) {
        if (remaining.back() < 0)
            for (auto& c : remaining) c = -c;
        Int cont = content(remaining);
        for (auto& c : remaining) c /= cont;
        result.push_back(remaining);
    }
    return result;
}

}  // namespace

std::vector<std::pair<RatPoly, int>> factor_poly(const RatPoly& p) {
    if (p.is_zero()) throw std::invalid_argument("cannot factor the zero polynomial");
    std::vector<std::pair<RatPoly, int>> out;
    auto sf = squarefree_decomposition(p);
    for (const auto& [g, mult] : sf) {
        // Clear denominators -> primitive integer polynomial.
        Int den(1);
        for (const auto& c : g.coeffs()) {
            Int d = c.get_den();
            den = den / gcd(den, d) * d;
        }
        IPoly ig;
        for (const auto& c : g.coeffs()) ig.push_back(Rat(c * Rat(den)).get_num());
        Int cont = content(ig);
        if (cont != 0)
            for (auto& c : ig) c /= cont;
        if (!ig.empty() && ig.back() < 0)
            for (auto& c : ig) c = -c;
        auto fac = factor_squarefree_primitive(ig);
        for (const auto& fz : fac) {
            std::vector<Rat> cv;
            for (const auto& c : fz) cv.emplace_back(c);
            out.emplace_back(RatPoly(std::move(cv)).monic(), mult);
        }
    }
    // Canonical order: by degree, then coefficients lexicographically.
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.first.degree() != b.first.degree()) return a.first.degree() < b.first.degree();
        for (int i = a.first.degree(); i >= 0; --i) {
            if (a.first.coeff(i) != b.first.coeff(i)) return a.first.coeff(i) < b.first.coeff(i);
        }
        return a.second < b.second;
    });
    return out;
}

bool is_irreducible(const RatPoly& p) {
    if (p.is_zero() || p.degree() < 1) return false;
    auto f = factor_poly(p);
    return f.size() == 1 && f[0].second == 1 && f[0].first.degree() == p.degree();
}

}  // namespace orbit
