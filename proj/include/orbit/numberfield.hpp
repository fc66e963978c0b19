#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>

#include "orbit/interval.hpp"
#include "orbit/poly.hpp"

namespace orbit {

// A number field Q(gamma), gamma the root of an irreducible monic polynomial
// designated by an isolating box. Elements are polynomials in gamma of degree
// below [Q(gamma):Q], reduced mod the defining polynomial.
//
// The generator box is a refinable cache: refinement only ever shrinks it,
// so concurrent readers see a valid (possibly stale) isolating box.
class NumberField : public std::enable_shared_from_this<NumberField> {
  public:
    using Ptr = std::shared_ptr<const NumberField>;

    static Ptr rationals();
    static Ptr make(RatPoly modulus, Box generator_box);

    const RatPoly& modulus() const { return mod_; }
    int degree() const { return mod_.degree(); }
    bool is_rationals() const { return mod_.degree() == 1; }

    Box generator_box() const;
    void refine_generator_box() const;

    RatPoly reduce(const RatPoly& r) const;
    RatPoly add(const RatPoly& a, const RatPoly& b) const { return a + b; }
    RatPoly sub(const RatPoly& a, const RatPoly& b) const { return a - b; }
    RatPoly mul(const RatPoly& a, const RatPoly& b) const;
    RatPoly inverse(const RatPoly& a) const;  // a nonzero
    RatPoly pow(RatPoly base, const Int& e) const;  // e may be negative

    // Enclosure of r(gamma), refining the generator box until width <= max_width.
    Box enclose(const RatPoly& r, const Rat& max_width) const;

    // Exact sign of the real number r(gamma); the value must be real.
    int sign_of_real(const RatPoly& r) const;

    // Minimal polynomial over Q of the element r(gamma) (monic, irreducible).
    RatPoly element_minpoly(const RatPoly& r) const;

    // Complex conjugation, available when conj(gamma) lies in the field and
    // has been registered (always true for splitting fields built by
    // extend_with_root towers followed by install_conjugation).
    bool has_conjugation() const { return conj_gen_.has_value(); }
    void install_conjugation(RatPoly conj_of_generator) const;
    RatPoly conjugate(const RatPoly& r) const;

    // Subfield bookkeeping: records that `other`'s generator equals rep(gamma)
    // in this field, so coercions can bypass a fresh compositum construction.
    void note_subfield(const Ptr& other, RatPoly rep) const;
    std::optional<RatPoly> find_subfield(const NumberField* other) const;
    std::map<Ptr, RatPoly> known_subfields() const;

    // How a compositum was built: generator = base generator + k * (root with
    // root_field's modulus and box). Empty for fields made directly.
    struct Definition {
        Ptr base;
        Ptr root_field;
        long k = 0;
    };
    void set_definition(Definition def) const;
    std::optional<Definition> definition() const;

  private:
    NumberField(RatPoly mod, Box box) : mod_(std::move(mod)), box_(std::move(box)) {}
    RatPoly mod_;
    mutable std::mutex mu_;
    mutable Box box_;
    mutable std::optional<RatPoly> conj_gen_;
    mutable std::map<Ptr, RatPoly> subfields_;
    mutable std::optional<Definition> def_;
};

// Representation of X's generator as an element of F, when F is known to
// contain it (directly or through recorded compositum definitions).
std::optional<RatPoly> express_generator(const NumberField::Ptr& F, const NumberField::Ptr& X);

// Result of adjoining the designated root beta of f (irreducible over Q) to K:
// the new field Q(theta) with theta = gamma_old + k*beta, plus the images of
// the old generator and of beta inside it.
struct FieldExtension {
    NumberField::Ptr field;
    RatPoly old_generator;  // gamma_old as an element of `field`
    RatPoly adjoined_root;  // beta as an element of `field`
    long k = 0;
};

FieldExtension extend_with_root(const NumberField::Ptr& base, const RatPoly& f,
                                const Box& root_box);

// True iff the two fields have the same modulus and designate the same root.
bool same_field(const NumberField::Ptr& a, const NumberField::Ptr& b);

// Polynomials with coefficients in a number field (used for gcd computations
// during field construction; coefficients are reduced reps).
using FieldPoly = std::vector<RatPoly>;
FieldPoly fpoly_divmod_rem(const NumberField& F, FieldPoly a, const FieldPoly& b);
std::pair<FieldPoly, FieldPoly> fpoly_divmod(const NumberField& F, FieldPoly a, const FieldPoly& b);
FieldPoly fpoly_gcd(const NumberField& F, FieldPoly a, FieldPoly b);
FieldPoly fpoly_mul(const NumberField& F, const FieldPoly& a, const FieldPoly& b);
FieldPoly fpoly_sub(const NumberField& F, FieldPoly a, const FieldPoly& b);

}  // namespace orbit
