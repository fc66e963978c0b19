#include "orbit/algnum.hpp"

#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

#include "orbit/roots.hpp"

namespace orbit {
namespace {

constexpr int kRefineGuard = 20000;

// Where cheaply possible, record complex conjugation on a freshly built field:
// real generators are self-conjugate, and for an irreducible quadratic with a
// non-real root the two roots are a conjugate pair.
void try_install_conjugation(const NumberField::Ptr& f) {
    Box b = f->generator_box();
    if (b.is_real_line()) {
        f->install_conjugation(RatPoly::variable());
        return;
    }
    if (f->degree() == 2) {
        // sum of roots = -c1
        f->install_conjugation(RatPoly::constant(-f->modulus().coeff(1)) - RatPoly::variable());
    }
}

}  // namespace

AlgNum AlgNum::from_minpoly(const RatPoly& minpoly, const Box& box) {
    if (minpoly.degree() < 1) throw std::invalid_argument("minimal polynomial must be non-constant");
    RatPoly m = minpoly.monic();
    if (m.degree() == 1) {
        Rat v = -m.coeff(0);
        if (!box.contains(v, Rat(0)))
            throw std::invalid_argument("box does not contain the designated root");
        return AlgNum(std::move(v));
    }
    // Match the box against the actual roots so that the stored generator box
    // is a genuine isolating rectangle.
    auto roots = isolate_roots(m);
    Box query = box;
    for (int i = 0; i < kRefineGuard; ++i) {
        std::vector<int> live;
        for (int j = 0; j < (int)roots.size(); ++j)
            if (roots[j].box.intersects(query)) live.push_back(j);
        if (live.empty()) throw std::invalid_argument("box does not contain a root of the minimal polynomial");
        if (live.size() == 1) {
            auto f = NumberField::make(m, roots[live[0]].box);
            try_install_conjugation(f);
            return AlgNum(std::move(f), RatPoly::variable());
        }
        for (int j : live) roots[j].box = refine_root_box(m, roots[j].box);
        if (!query.is_point()) {
            // A box designating a unique root must keep exactly one candidate
            // under refinement; shrink it toward its midpoint.
            query = Box(query.mid_re(), query.mid_re(), query.mid_im(), query.mid_im());
        }
    }
    throw std::invalid_argument("box does not isolate a single root of the minimal polynomial");
}

AlgNum AlgNum::in_field(NumberField::Ptr field, RatPoly rep) {
    RatPoly r = field->reduce(rep);
    return AlgNum(std::move(field), std::move(r));
}

Rat AlgNum::as_rational() const {
    if (!is_rational()) throw std::logic_error("value is not rational");
    return rep_.coeff(0);
}

RatPoly AlgNum::minpoly() const {
    if (is_rational()) return RatPoly::variable() - RatPoly::constant(rep_.coeff(0));
    return field_->element_minpoly(rep_);
}

Box AlgNum::enclosure(const Rat& max_width) const {
    if (is_rational()) return Box::point(rep_.coeff(0));
    return field_->enclose(rep_, max_width);
}

Box AlgNum::isolating_box(const Rat& max_width) const {
    if (is_rational()) return Box::point(rep_.coeff(0));
    RatPoly m = minpoly();
    if (m.degree() == 1) return Box::point(-m.coeff(0));
    Rat sep_sq = root_separation_sq_lower_bound(m);
    Rat w = max_width;
    while (w * w * 9 > sep_sq) w /= 2;
    return enclosure(w);
}

AlgNum AlgNum::operator+(const AlgNum& o) const {
    auto [a, b] = to_common_field(*this, o);
    return AlgNum(a.field_, a.field_->add(a.rep_, b.rep_));
}

AlgNum AlgNum::operator-(const AlgNum& o) const {
    auto [a, b] = to_common_field(*this, o);
    return AlgNum(a.field_, a.field_->sub(a.rep_, b.rep_));
}

AlgNum AlgNum::operator*(const AlgNum& o) const {
    auto [a, b] = to_common_field(*this, o);
    return AlgNum(a.field_, a.field_->mul(a.rep_, b.rep_));
}

AlgNum AlgNum::operator/(const AlgNum& o) const { return *this * o.inv(); }

AlgNum AlgNum::inv() const {
    if (is_zero()) throw std::domain_error("division by zero");
    return AlgNum(field_, field_->inverse(rep_));
}

AlgNum AlgNum::conj() const {
    if (is_rational()) return *this;
    if (!field_->has_conjugation()) try_install_conjugation(field_);
    if (field_->has_conjugation()) return AlgNum(field_, field_->conjugate(rep_));
    // Fall back to the mirror field Q(conj(gamma)); the representation has
    // rational coefficients, so it carries over unchanged.
    auto mirror = NumberField::make(field_->modulus(), field_->generator_box().conjugate());
    return AlgNum(std::move(mirror), rep_);
}

bool AlgNum::operator==(const AlgNum& o) const {
    if (is_rational() || o.is_rational()) {
        if (!is_rational() || !o.is_rational()) return false;
        return rep_ == o.rep_;
    }
    if (field_.get() == o.field_.get()) return rep_ == o.rep_;
    if (!enclosure(Rat(1, 1024)).intersects(o.enclosure(Rat(1, 1024)))) return false;
    auto [a, b] = to_common_field(*this, o);
    return a.rep_ == b.rep_;
}

int AlgNum::sign_real() const { return field_->sign_of_real(rep_); }

bool AlgNum::is_real() const {
    if (is_rational()) return true;
    return conj() == *this;
}

AlgNum AlgNum::real_part() const {
    if (is_rational()) return *this;
    return (*this + conj()) * AlgNum(Rat(1, 2));
}

std::pair<AlgNum, AlgNum> to_common_field(const AlgNum& a, const AlgNum& b) {
    if (a.field_.get() == b.field_.get()) return {a, b};
    if (a.is_rational()) return {AlgNum::in_field(b.field_, a.rep_), b};
    if (b.is_rational()) return {a, AlgNum::in_field(a.field_, b.rep_)};
    if (same_field(a.field_, b.field_)) return {a, AlgNum::in_field(a.field_, b.rep_)};

    // One field may already contain the other's generator; coerce directly
    // instead of constructing a compositum.
    if (auto r = express_generator(a.field_, b.field_))
        return {a, AlgNum::in_field(a.field_, a.field_->reduce(b.rep_.compose(*r)))};
    if (auto r = express_generator(b.field_, a.field_))
        return {AlgNum::in_field(b.field_, b.field_->reduce(a.rep_.compose(*r))), b};

    // Keyed by owning pointers so a recycled allocation can't alias a dead field.
    static std::mutex cache_mu;
    static std::map<std::pair<NumberField::Ptr, NumberField::Ptr>, FieldExtension> cache;
    std::pair<NumberField::Ptr, NumberField::Ptr> key(a.field_, b.field_);
    FieldExtension ext;
    {
        std::lock_guard<std::mutex> lk(cache_mu);
        auto it = cache.find(key);
        if (it != cache.end()) ext = it->second;
    }
    if (!ext.field) {
        ext = extend_with_root(a.field_, b.field_->modulus(), b.field_->generator_box());
        // Record what the new field contains so later coercions are lookups.
        const auto& F = ext.field;
        F->note_subfield(b.field_, ext.adjoined_root);
        for (const auto& [X, rep] : b.field_->known_subfields())
            F->note_subfield(X, F->reduce(rep.compose(ext.adjoined_root)));
        if (F.get() != a.field_.get()) {
            F->note_subfield(a.field_, ext.old_generator);
            for (const auto& [X, rep] : a.field_->known_subfields())
                F->note_subfield(X, F->reduce(rep.compose(ext.old_generator)));
            F->set_definition({a.field_, b.field_, ext.k});
        }
        std::lock_guard<std::mutex> lk(cache_mu);
        cache.emplace(key, ext);
    }
    RatPoly ar = ext.field->reduce(a.rep_.compose(ext.old_generator));
    RatPoly br = ext.field->reduce(b.rep_.compose(ext.adjoined_root));
    return {AlgNum::in_field(ext.field, std::move(ar)), AlgNum::in_field(ext.field, std::move(br))};
}

const AlgNum& alg_i() {
    static const AlgNum i = AlgNum::from_minpoly(
        RatPoly({Rat(1), Rat(0), Rat(1)}), Box(Rat(-1, 2), Rat(1, 2), Rat(1, 2), Rat(3, 2)));
    return i;
}

std::pair<AlgNum, AlgNum> re_im(const AlgNum& a) {
    if (a.is_rational()) return {a, AlgNum(Rat(0))};
    AlgNum re = a.real_part();
    AlgNum im = (a - re) * (-alg_i());
    return {std::move(re), std::move(im)};
}

CmpOne modulus_cmp_one(const AlgNum& a) {
    if (a.is_zero()) throw std::invalid_argument("modulus comparison requires a nonzero value");
    AlgNum d = a.norm_sq() - AlgNum(Rat(1));
    int s = d.is_zero() ? 0 : d.sign_real();
    return s < 0 ? CmpOne::Less : (s > 0 ? CmpOne::Greater : CmpOne::Equal);
}

namespace {
long euler_phi(long n) {
    long result = n;
    for (long p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        while (n % p == 0) n /= p;
        result -= result / p;
    }
    if (n > 1) result -= result / n;
    return result;
}
}  // namespace

std::optional<long> root_of_unity_order(const AlgNum& a) {
    if (modulus_cmp_one(a) != CmpOne::Equal)
        throw std::invalid_argument("root-of-unity test requires modulus 1");
    if (a.is_rational()) return a.as_rational() == 1 ? std::optional<long>(1) : std::optional<long>(2);
    long deg = a.minpoly().degree();
    // order n forces deg = phi(n), and phi(n) >= sqrt(n/2), so n <= 2*deg^2
    for (long n = 2; n <= 2 * deg * deg; ++n) {
        if (euler_phi(n) != deg) continue;
        if (a.field()->pow(a.rep(), Int(n)) == RatPoly::constant(Rat(1))) return n;
    }
    return std::nullopt;
}

}  // namespace orbit

namespace orbit {

AlgNum alg_pow(const AlgNum& a, long e) {
    if (e < 0) return alg_pow(a.inv(), -e);
    AlgNum r{Rat(1)};
    AlgNum base = a;
    for (long k = e; k > 0; k >>= 1) {
        if (k & 1) r = r * base;
        base = base * base;
    }
    return r;
}

}  // namespace orbit
