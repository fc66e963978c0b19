#include "orbit/numberfield.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <mutex>

#include "orbit/factor.hpp"
#include "orbit/roots.hpp"

namespace orbit {
namespace {

constexpr int kRefineGuard = 20000;

// Incremental Gaussian elimination used to find the first linear dependence
// among successive Krylov vectors; combinations are tracked to recover the
// minimal polynomial coefficients.
struct DependenceFinder {
    struct Row {
        std::vector<Rat> v;
        std::vector<Rat> comb;  // over the vector indices fed so far
        int pivot;
    };
    std::vector<Row> rows;
    int fed = 0;

    // Feeds the next vector; returns the dependence coefficients (monic in the
    // last index) once the vector is linearly dependent on the previous ones.
    std::optional<std::vector<Rat>> feed(std::vector<Rat> v) {
        std::vector<Rat> comb(fed + 1, Rat(0));
        comb[fed] = Rat(1);
        ++fed;
        for (const auto& row : rows) {
            const Rat& c = v[row.pivot];
            if (c == 0) continue;
            Rat f = c;  // rows are normalized to pivot 1
            for (size_t i = 0; i < v.size(); ++i) v[i] -= f * row.v[i];
            for (size_t i = 0; i < row.comb.size(); ++i) comb[i] -= f * row.comb[i];
        }
        int piv = -1;
        for (size_t i = 0; i < v.size(); ++i)
            if (v[i] != 0) {
                piv = (int)i;
                break;
            }
        if (piv < 0) return comb;
        Rat inv = 1 / v[piv];
        for (auto& x : v) x *= inv;
        for (auto& x : comb) x *= inv;
        rows.push_back({std::move(v), std::move(comb), piv});
        return std::nullopt;
    }
};

// Solves M c = rhs over the rationals; returns nullopt when M is singular.
std::optional<std::vector<Rat>> solve_rational(std::vector<std::vector<Rat>> M,
                                               std::vector<Rat> rhs) {
    const int n = (int)rhs.size();
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int r = col; r < n; ++r)
            if (M[r][col] != 0) {
                piv = r;
                break;
            }
        if (piv < 0) return std::nullopt;
        std::swap(M[col], M[piv]);
        std::swap(rhs[col], rhs[piv]);
        Rat inv = 1 / M[col][col];
        for (int j = col; j < n; ++j) M[col][j] *= inv;
        rhs[col] *= inv;
        for (int r = 0; r < n; ++r) {
            if (r == col || M[r][col] == 0) continue;
            Rat f = M[r][col];
            for (int j = col; j < n; ++j) M[r][j] -= f * M[col][j];
            rhs[r] -= f * rhs[col];
        }
    }
    return rhs;
}

}  // namespace

NumberField::Ptr NumberField::rationals() {
    static Ptr q = Ptr(new NumberField(RatPoly::variable(), Box::point(Rat(0))));
    return q;
}

NumberField::Ptr NumberField::make(RatPoly modulus, Box generator_box) {
    if (modulus.degree() < 1) throw std::invalid_argument("field modulus must be non-constant");
    RatPoly m = modulus.monic();
    // Intern by (modulus, box) so repeated identical constructions share one
    // object; pointer-keyed caches downstream then hit across pipeline stages.
    using Key = std::pair<std::vector<Rat>, std::array<Rat, 4>>;
    static std::mutex mu;
    static std::map<Key, Ptr> registry;
    Key key{m.coeffs(),
            {generator_box.re_lo, generator_box.re_hi, generator_box.im_lo, generator_box.im_hi}};
    std::lock_guard<std::mutex> lk(mu);
    auto it = registry.find(key);
    if (it != registry.end()) return it->second;
    Ptr f(new NumberField(std::move(m), std::move(generator_box)));
    registry.emplace(std::move(key), f);
    return f;
}

Box NumberField::generator_box() const {
    std::lock_guard<std::mutex> lk(mu_);
    return box_;
}

void NumberField::refine_generator_box() const {
    std::lock_guard<std::mutex> lk(mu_);
    box_ = refine_root_box(mod_, box_);
}

RatPoly NumberField::reduce(const RatPoly& r) const {
    if (r.degree() < mod_.degree()) return r;
    return poly_divmod(r, mod_).second;
}

RatPoly NumberField::mul(const RatPoly& a, const RatPoly& b) const { return reduce(a * b); }

RatPoly NumberField::inverse(const RatPoly& a) const {
    if (a.is_zero()) throw std::domain_error("inverse of zero field element");
    // Extended Euclid: s*a + t*mod = gcd = const.
    RatPoly r0 = mod_, r1 = reduce(a);
    RatPoly s0, s1 = RatPoly::constant(Rat(1));
    while (true) {
        auto [q, r] = poly_divmod(r0, r1);
        if (r.is_zero()) break;
        RatPoly s2 = s0 - q * s1;
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
    }
    if (r1.degree() != 0) throw std::logic_error("field modulus not irreducible: gcd nontrivial");
    return reduce(s1 * Rat(1 / r1.coeff(0)));
}

RatPoly NumberField::pow(RatPoly base, const Int& e) const {
    Int ee = e;
    if (ee < 0) {
        base = inverse(base);
        ee = -ee;
    }
    RatPoly acc = RatPoly::constant(Rat(1));
    base = reduce(base);
    while (ee > 0) {
        if (mpz_odd_p(ee.get_mpz_t())) acc = mul(acc, base);
        base = mul(base, base);
        ee >>= 1;
    }
    return acc;
}

Box NumberField::enclose(const RatPoly& r, const Rat& max_width) const {
    for (int i = 0; i < kRefineGuard; ++i) {
        Box e = box_eval(reduce(r), generator_box());
        if (e.width() <= max_width) return e;
        refine_generator_box();
    }
    throw std::logic_error("enclose: refinement did not converge");
}

int NumberField::sign_of_real(const RatPoly& r) const {
    RatPoly rr = reduce(r);
    if (rr.is_zero()) return 0;
    for (int i = 0; i < kRefineGuard; ++i) {
        Box e = box_eval(rr, generator_box());
        if (e.re_lo > 0) return 1;
        if (e.re_hi < 0) return -1;
        refine_generator_box();
    }
    throw std::logic_error("sign_of_real: value appears non-real or refinement stalled");
}

RatPoly NumberField::element_minpoly(const RatPoly& r) const {
    int D = degree();
    RatPoly rr = reduce(r);
    DependenceFinder df;
    RatPoly p = RatPoly::constant(Rat(1));
    for (int m = 0; m <= D; ++m) {
        std::vector<Rat> v(D, Rat(0));
        for (int i = 0; i <= p.degree(); ++i) v[i] = p.coeff(i);
        if (auto dep = df.feed(std::move(v))) return RatPoly(std::move(*dep));
        p = mul(p, rr);
    }
    throw std::logic_error("element_minpoly: no dependence found");
}

void NumberField::note_subfield(const Ptr& other, RatPoly rep) const {
    std::lock_guard<std::mutex> lk(mu_);
    subfields_.emplace(other, std::move(rep));
}

std::optional<RatPoly> NumberField::find_subfield(const NumberField* other) const {
    std::lock_guard<std::mutex> lk(mu_);
    for (const auto& [f, rep] : subfields_)
        if (f.get() == other) return rep;
    return std::nullopt;
}

std::map<NumberField::Ptr, RatPoly> NumberField::known_subfields() const {
    std::lock_guard<std::mutex> lk(mu_);
    return subfields_;
}

void NumberField::set_definition(Definition def) const {
    std::lock_guard<std::mutex> lk(mu_);
    if (!def_) def_ = std::move(def);
}

std::optional<NumberField::Definition> NumberField::definition() const {
    std::lock_guard<std::mutex> lk(mu_);
    return def_;
}

std::optional<RatPoly> express_generator(const NumberField::Ptr& F, const NumberField::Ptr& X) {
    if (F.get() == X.get()) return RatPoly::variable();
    if (auto r = F->find_subfield(X.get())) return r;
    if (auto def = X->definition()) {
        auto rb = express_generator(F, def->base);
        if (!rb) return std::nullopt;
        auto rr = express_generator(F, def->root_field);
        if (!rr) return std::nullopt;
        RatPoly rep = F->reduce(*rb + *rr * Rat(def->k));
        if (!F->reduce(X->modulus().compose(rep)).is_zero()) return std::nullopt;
        F->note_subfield(X, rep);
        return rep;
    }
    return std::nullopt;
}

void NumberField::install_conjugation(RatPoly conj_of_generator) const {
    std::lock_guard<std::mutex> lk(mu_);
    conj_gen_ = reduce(conj_of_generator);
}

RatPoly NumberField::conjugate(const RatPoly& r) const {
    RatPoly cg;
    {
        std::lock_guard<std::mutex> lk(mu_);
        if (!conj_gen_) throw std::logic_error("conjugation not installed on this field");
        cg = *conj_gen_;
    }
    return reduce(reduce(r).compose(cg));
}

bool same_field(const NumberField::Ptr& a, const NumberField::Ptr& b) {
    if (a.get() == b.get()) return true;
    if (a->modulus() != b->modulus()) return false;
    if (a->degree() == 1) return a->generator_box().re_lo == b->generator_box().re_lo;
    Rat sep_sq = root_separation_sq_lower_bound(a->modulus());
    for (int i = 0; i < kRefineGuard; ++i) {
        Box ba = a->generator_box();
        Box bb = b->generator_box();
        Rat wa = ba.width(), wb = bb.width();
        if (wa * wa * 9 <= sep_sq && wb * wb * 9 <= sep_sq) return ba.intersects(bb);
        a->refine_generator_box();
        b->refine_generator_box();
    }
    throw std::logic_error("same_field: refinement stalled");
}

// ---------- polynomials over a number field ----------

namespace {
void fpoly_trim(FieldPoly& a) {
    while (!a.empty() && a.back().is_zero()) a.pop_back();
}
}  // namespace

std::pair<FieldPoly, FieldPoly> fpoly_divmod(const NumberField& F, FieldPoly a,
                                             const FieldPoly& b) {
    fpoly_trim(a);
    if (b.empty()) throw std::invalid_argument("field polynomial division by zero");
    RatPoly lead_inv = F.inverse(b.back());
    int db = (int)b.size() - 1;
    FieldPoly q;
    if ((int)a.size() - 1 >= db) q.assign(a.size() - db, RatPoly());
    while ((int)a.size() - 1 >= db) {
        RatPoly f = F.mul(a.back(), lead_inv);
        int shift = (int)a.size() - 1 - db;
        q[shift] = f;
        for (int j = 0; j <= db; ++j)
            a[shift + j] = F.sub(a[shift + j], F.mul(f, b[j]));
        fpoly_trim(a);
        if ((int)a.size() - 1 < db) break;
    }
    fpoly_trim(q);
    return {std::move(q), std::move(a)};
}

FieldPoly fpoly_divmod_rem(const NumberField& F, FieldPoly a, const FieldPoly& b) {
    return fpoly_divmod(F, std::move(a), b).second;
}

FieldPoly fpoly_mul(const NumberField& F, const FieldPoly& a, const FieldPoly& b) {
    if (a.empty() || b.empty()) return {};
    FieldPoly out(a.size() + b.size() - 1, RatPoly());
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j)
            out[i + j] = F.add(out[i + j], F.mul(a[i], b[j]));
    fpoly_trim(out);
    return out;
}

FieldPoly fpoly_sub(const NumberField& F, FieldPoly a, const FieldPoly& b) {
    if (a.size() < b.size()) a.resize(b.size(), RatPoly());
    for (size_t i = 0; i < b.size(); ++i) a[i] = F.sub(a[i], b[i]);
    fpoly_trim(a);
    return a;
}

FieldPoly fpoly_gcd(const NumberField& F, FieldPoly a, FieldPoly b) {
    fpoly_trim(a);
    fpoly_trim(b);
    while (!b.empty()) {
        FieldPoly r = fpoly_divmod_rem(F, a, b);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        RatPoly inv = F.inverse(a.back());
        for (auto& c : a) c = F.mul(c, inv);
    }
    return a;
}

// ---------- field extension ----------

FieldExtension extend_with_root(const NumberField::Ptr& base, const RatPoly& f,
                                const Box& root_box) {
    RatPoly fm = f.monic();
    if (fm.degree() == 1) {
        // Rational root; no extension needed.
        return {base, RatPoly::variable(), RatPoly::constant(-fm.coeff(0)), 0};
    }
    if (base->is_rationals()) {
        return {NumberField::make(fm, root_box), RatPoly(), RatPoly::variable(), 0};
    }
    const int D = base->degree();
    const int n = fm.degree();
    const int N = D * n;
    const RatPoly& MK = base->modulus();

    for (long k = 1; k <= 64; ++k) {
        // Algebra A = K[x]/(f); elements are x-coefficient vectors over K.
        using Elem = std::vector<RatPoly>;
        auto mul_theta = [&](const Elem& e) {
            // theta = gamma + k*x
            Elem out(n);
            // gamma * e
            for (int j = 0; j < n; ++j) out[j] = base->mul(e[j], RatPoly::variable());
            // k * x * e, with x^n reduced by f (monic, rational coefficients)
            const RatPoly& top = e[n - 1];
            for (int j = n - 1; j >= 1; --j)
                out[j] = base->add(out[j], base->reduce(e[j - 1] * Rat(k)));
            for (int j = 0; j < n; ++j)
                out[j] = base->sub(out[j], base->reduce(top * (fm.coeff(j) * Rat(k))));
            return out;
        };
        auto flatten = [&](const Elem& e) {
            std::vector<Rat> v(N, Rat(0));
            for (int j = 0; j < n; ++j)
                for (int i = 0; i <= e[j].degree(); ++i) v[j * D + i] = e[j].coeff(i);
            return v;
        };

        Elem p(n);
        p[0] = RatPoly::constant(Rat(1));
        DependenceFinder df;
        RatPoly algebra_minpoly;
        for (int m = 0; m <= N; ++m) {
            if (auto dep = df.feed(flatten(p))) {
                algebra_minpoly = RatPoly(std::move(*dep));
                break;
            }
            p = mul_theta(p);
        }
        if (algebra_minpoly.is_zero())
            throw std::logic_error("extend_with_root: no algebra dependence found");

        const bool dbg = getenv("ORBIT_DEBUG_EXT") != nullptr;
        auto bits = [](const RatPoly& g) {
            size_t b = 0;
            for (int i = 0; i <= g.degree(); ++i)
                b = std::max(b, mpz_sizeinbase(g.coeff(i).get_num().get_mpz_t(), 2) +
                                    mpz_sizeinbase(g.coeff(i).get_den().get_mpz_t(), 2));
            return b;
        };
        if (dbg)
            fprintf(stderr, "[ext] k=%ld D=%d n=%d minpoly deg=%d bits=%zu\n", k, D, n,
                    algebra_minpoly.degree(), bits(algebra_minpoly));

        // Select the irreducible factor vanishing at theta = gamma + k*beta.
        auto factors = factor_poly(algebra_minpoly);
        if (dbg) {
            fprintf(stderr, "[ext] factored into");
            for (const auto& [g, mult] : factors)
                fprintf(stderr, " deg=%d(bits=%zu)", g.degree(), bits(g));
            fprintf(stderr, "\n");
        }
        RatPoly G;
        Box gen_box;
        {
            struct Cand {
                const RatPoly* g;
                Box box;
            };
            std::vector<Cand> cands;
            for (const auto& [g, mult] : factors) {
                auto rts = isolate_roots(g);
                if (dbg) fprintf(stderr, "[ext] isolated %zu roots of deg=%d\n", rts.size(), g.degree());
                for (const auto& rt : rts) cands.push_back({&g, rt.box});
            }
            Box gb = base->generator_box();
            Box bb = root_box;
            int guard = 0;
            while (true) {
                if (++guard > kRefineGuard)
                    throw std::logic_error("extend_with_root: factor selection stalled");
                Box e = box_add(gb, box_scale(bb, Rat(k)));
                std::vector<Cand*> live;
                for (auto& c : cands)
                    if (c.box.intersects(e)) live.push_back(&c);
                if (live.size() == 1) {
                    G = *live[0]->g;
                    gen_box = live[0]->box;
                    break;
                }
                if (live.empty()) throw std::logic_error("extend_with_root: lost theta");
                gb = refine_root_box(MK, gb);
                bb = refine_root_box(fm, bb);
                for (auto* c : live) c->box = refine_root_box(*c->g, c->box);
            }
        }

        auto F = NumberField::make(G, gen_box);
        // beta from gcd(f(x), M_K(theta - k x)) over F.
        FieldPoly pf;
        for (int i = 0; i <= fm.degree(); ++i) pf.push_back(RatPoly::constant(fm.coeff(i)));
        // M_K(theta - k x) via Horner; theta is the generator of F.
        FieldPoly lin = {RatPoly::variable(), RatPoly::constant(Rat(-k))};
        FieldPoly comp = {RatPoly()};
        for (int i = MK.degree(); i >= 0; --i) {
            // comp = comp*lin + MK[i]
            FieldPoly next(comp.size() + 1, RatPoly());
            for (size_t a = 0; a < comp.size(); ++a)
                for (size_t b = 0; b < 2; ++b)
                    next[a + b] = F->add(next[a + b], F->mul(comp[a], lin[b]));
            fpoly_trim(next);
            if (next.empty()) next.push_back(RatPoly());
            next[0] = F->add(next[0], RatPoly::constant(MK.coeff(i)));
            comp = std::move(next);
            fpoly_trim(comp);
            if (comp.empty()) comp.push_back(RatPoly());
        }
        FieldPoly g = fpoly_gcd(*F, pf, comp);
        if ((int)g.size() - 1 != 1) continue;  // theta not primitive for this k
        RatPoly beta = F->reduce(-g[0]);
        RatPoly old_gen = F->reduce(RatPoly::variable() - beta * Rat(k));
        if (G.degree() == D) {
            // The root already lies in the base field: express theta in terms
            // of the base generator and hand back the base itself instead of
            // an isomorphic copy, so repeated coercions stay in one field.
            std::vector<std::vector<Rat>> M(D, std::vector<Rat>(D, Rat(0)));
            RatPoly pw = RatPoly::constant(Rat(1));
            for (int j = 0; j < D; ++j) {
                for (int i = 0; i <= pw.degree(); ++i) M[i][j] = pw.coeff(i);
                pw = F->mul(pw, old_gen);
            }
            std::vector<Rat> rhs(D, Rat(0));
            rhs[1] = Rat(1);  // theta, the generator of F
            if (auto h = solve_rational(std::move(M), std::move(rhs))) {
                RatPoly beta_base = base->reduce(beta.compose(RatPoly(std::move(*h))));
                return {base, RatPoly::variable(), beta_base, k};
            }
        }
        return {F, old_gen, beta, k};
    }
    throw std::logic_error("extend_with_root: no primitive element found");
}

}  // namespace orbit
