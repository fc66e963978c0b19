#pragma once

#include <memory>
#include <string>

#include "orbit/matrix.hpp"

namespace orbit {

// Sparse multivariate polynomial over u_1..u_n with algebraic coefficients,
// terms kept in graded-lex descending order.
class MPoly {
   public:
    using Monomial = std::vector<int>;
    using Term = std::pair<Monomial, AlgNum>;

    MPoly() = default;
    explicit MPoly(int nvars) : nvars_(nvars) {}
    static MPoly constant(int nvars, AlgNum c);
    static MPoly var(int nvars, int index);  // u_{index+1}

    int nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    const std::vector<Term>& terms() const { return terms_; }
    int total_degree() const;

    MPoly operator+(const MPoly& o) const;
    MPoly operator-(const MPoly& o) const;
    MPoly operator-() const;
    MPoly operator*(const MPoly& o) const;
    MPoly operator*(const AlgNum& c) const;
    bool operator==(const MPoly& o) const;
    bool operator!=(const MPoly& o) const { return !(*this == o); }

    AlgNum eval(const AlgVec& u) const;
    // Substitute u_i := repl[i] simultaneously.
    MPoly substitute(const std::vector<MPoly>& repl) const;

    void add_term(Monomial m, AlgNum c);  // accumulate, keeping canonical form

   private:
    int nvars_ = 0;
    std::vector<Term> terms_;
};

enum class Rel { Ge, Gt, Eq, Ne };  // polynomial REL 0

struct FormulaNode;
using FormulaPtr = std::shared_ptr<const FormulaNode>;

struct FormulaNode {
    enum class Kind { Atom, And, Or, Not, Points };
    Kind kind;
    MPoly poly;              // Atom
    Rel rel = Rel::Ge;       // Atom
    std::vector<FormulaPtr> kids;   // And / Or / Not
    std::vector<AlgVec> points;     // Points: exact complex d-vectors
};

// Quantifier-free formula over the real coordinates u_1..u_{2d} of C^d
// (u_{2i-1} = Re z_i, u_{2i} = Im z_i). An empty conjunction is "true", an
// empty disjunction is "false".
class SemialgFormula {
   public:
    SemialgFormula() = default;

    static SemialgFormula atom(int d, MPoly poly, Rel rel);
    static SemialgFormula conj(int d, std::vector<SemialgFormula> fs);
    static SemialgFormula disj(int d, std::vector<SemialgFormula> fs);
    static SemialgFormula negation(SemialgFormula f);
    static SemialgFormula point_set(int d, std::vector<AlgVec> points);
    static SemialgFormula verum(int d) { return conj(d, {}); }
    static SemialgFormula falsum(int d) { return disj(d, {}); }

    int dim() const { return d_; }
    const FormulaPtr& root() const { return root_; }

    // Exact membership of a complex d-vector.
    bool eval_at(const AlgVec& z) const;
    // Exact evaluation at real coordinates (length 2d).
    bool eval_at_real(const AlgVec& u) const;

    bool operator==(const SemialgFormula& o) const;  // structural
    bool operator!=(const SemialgFormula& o) const { return !(*this == o); }

   private:
    SemialgFormula(int d, FormulaPtr r) : d_(d), root_(std::move(r)) {}
    int d_ = 0;
    FormulaPtr root_;
};

// Formula g with eval_at(g, z) = eval_at(f, Mz); point sets are carried to
// their exact preimages, so M must be invertible when any are present.
SemialgFormula substitute_linear(const SemialgFormula& f, const AlgMat& M);

// Conservative syntactic closedness: only >=, = atoms under And/Or/Points.
bool is_closed(const SemialgFormula& f);

// Canonical s-expression text; parse(serialize(f)) is structurally equal to f.
// Grammar:
//   formula := (and formula*) | (or formula*) | (not formula)
//            | (points point*) | (REL poly)       REL in {>=, >, =, !=}
//   poly    := (+ term*) ;  term := (* num (^ uK e)*)
//   num     := rational "p/q" | (alg (c0 .. ck) rlo rhi ilo ihi)
//   point   := (num{2d})                          interleaved re, im
std::string serialize(const SemialgFormula& f);
SemialgFormula parse_formula(const std::string& text, int d);

// SMT-LIB2 / QF_NRA script asserting the formula; irrational (real) algebraic
// coefficients become fresh constants pinned by their minimal polynomial and
// isolating interval.
std::string to_smt2(const SemialgFormula& f);

}  // namespace orbit
