#include "orbit/formula.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace orbit {
namespace {

// graded-lex, "larger" monomial first in storage
bool mono_less(const MPoly::Monomial& a, const MPoly::Monomial& b) {
    int da = 0, db = 0;
    for (int e : a) da += e;
    for (int e : b) db += e;
    if (da != db) return da < db;
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

int sign_of(const AlgNum& v) { return v.is_zero() ? 0 : v.sign_real(); }

bool rel_holds(Rel rel, int sign) {
    switch (rel) {
        case Rel::Ge: return sign >= 0;
        case Rel::Gt: return sign > 0;
        case Rel::Eq: return sign == 0;
        case Rel::Ne: return sign != 0;
    }
    return false;
}

}  // namespace

// ----- MPoly -----

MPoly MPoly::constant(int nvars, AlgNum c) {
    MPoly p(nvars);
    p.add_term(Monomial(nvars, 0), std::move(c));
    return p;
}

MPoly MPoly::var(int nvars, int index) {
    if (index < 0 || index >= nvars) throw std::invalid_argument("variable index out of range");
    MPoly p(nvars);
    Monomial m(nvars, 0);
    m[index] = 1;
    p.add_term(std::move(m), AlgNum(Rat(1)));
    return p;
}

int MPoly::total_degree() const {
    int d = 0;
    for (const auto& [m, c] : terms_) {
        int t = 0;
        for (int e : m) t += e;
        d = std::max(d, t);
    }
    return d;
}

void MPoly::add_term(Monomial m, AlgNum c) {
    if ((int)m.size() != nvars_) throw std::invalid_argument("monomial arity mismatch");
    if (c.is_zero()) return;
    auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                               [](const Term& t, const Monomial& mm) { return mono_less(mm, t.first); });
    if (it != terms_.end() && it->first == m) {
        it->second = it->second + c;
        if (it->second.is_zero()) terms_.erase(it);
    } else {
        terms_.insert(it, {std::move(m), std::move(c)});
    }
}

MPoly MPoly::operator+(const MPoly& o) const {
    MPoly out = *this;
    for (const auto& [m, c] : o.terms_) out.add_term(m, c);
    return out;
}

MPoly MPoly::operator-() const {
    MPoly out(nvars_);
    for (const auto& [m, c] : terms_) out.terms_.push_back({m, -c});
    return out;
}

MPoly MPoly::operator-(const MPoly& o) const { return *this + (-o); }

MPoly MPoly::operator*(const MPoly& o) const {
    MPoly out(nvars_);
    for (const auto& [m1, c1] : terms_)
        for (const auto& [m2, c2] : o.terms_) {
            Monomial m = m1;
            for (int i = 0; i < nvars_; ++i) m[i] += m2[i];
            out.add_term(std::move(m), c1 * c2);
        }
    return out;
}

MPoly MPoly::operator*(const AlgNum& c) const {
    MPoly out(nvars_);
    if (c.is_zero()) return out;
    for (const auto& [m, cc] : terms_) out.terms_.push_back({m, cc * c});
    return out;
}

bool MPoly::operator==(const MPoly& o) const {
    if (nvars_ != o.nvars_ || terms_.size() != o.terms_.size()) return false;
    for (size_t i = 0; i < terms_.size(); ++i)
        if (terms_[i].first != o.terms_[i].first || terms_[i].second != o.terms_[i].second)
            return false;
    return true;
}

AlgNum MPoly::eval(const AlgVec& u) const {
    if ((int)u.size() != nvars_) throw std::invalid_argument("evaluation arity mismatch");
    AlgNum acc{Rat(0)};
    for (const auto& [m, c] : terms_) {
        AlgNum t = c;
        for (int i = 0; i < nvars_; ++i)
            for (int e = 0; e < m[i]; ++e) t = t * u[i];
        acc = acc + t;
    }
    return acc;
}

MPoly MPoly::substitute(const std::vector<MPoly>& repl) const {
    if ((int)repl.size() != nvars_) throw std::invalid_argument("substitution arity mismatch");
    int n = repl.empty() ? nvars_ : repl[0].nvars();
    MPoly acc(n);
    for (const auto& [m, c] : terms_) {
        MPoly t = MPoly::constant(n, c);
        for (int i = 0; i < nvars_; ++i)
            for (int e = 0; e < m[i]; ++e) t = t * repl[i];
        acc = acc + t;
    }
    return acc;
}

// ----- SemialgFormula -----

SemialgFormula SemialgFormula::atom(int d, MPoly poly, Rel rel) {
    if (poly.nvars() != 2 * d) throw std::invalid_argument("atom arity must be 2d");
    auto n = std::make_shared<FormulaNode>();
    n->kind = FormulaNode::Kind::Atom;
    n->poly = std::move(poly);
    n->rel = rel;
    return SemialgFormula(d, std::move(n));
}

SemialgFormula SemialgFormula::conj(int d, std::vector<SemialgFormula> fs) {
    auto n = std::make_shared<FormulaNode>();
    n->kind = FormulaNode::Kind::And;
    for (auto& f : fs) {
        if (f.dim() != d) throw std::invalid_argument("dimension mismatch");
        n->kids.push_back(f.root());
    }
    return SemialgFormula(d, std::move(n));
}

SemialgFormula SemialgFormula::disj(int d, std::vector<SemialgFormula> fs) {
    auto n = std::make_shared<FormulaNode>();
    n->kind = FormulaNode::Kind::Or;
    for (auto& f : fs) {
        if (f.dim() != d) throw std::invalid_argument("dimension mismatch");
        n->kids.push_back(f.root());
    }
    return SemialgFormula(d, std::move(n));
}

SemialgFormula SemialgFormula::negation(SemialgFormula f) {
    auto n = std::make_shared<FormulaNode>();
    n->kind = FormulaNode::Kind::Not;
    n->kids.push_back(f.root());
    return SemialgFormula(f.dim(), std::move(n));
}

SemialgFormula SemialgFormula::point_set(int d, std::vector<AlgVec> points) {
    for (const auto& p : points)
        if ((int)p.size() != d) throw std::invalid_argument("point dimension mismatch");
    auto n = std::make_shared<FormulaNode>();
    n->kind = FormulaNode::Kind::Points;
    n->points = std::move(points);
    return SemialgFormula(d, std::move(n));
}

namespace {

bool eval_node(const FormulaNode& n, const AlgVec& u) {
    switch (n.kind) {
        case FormulaNode::Kind::Atom:
            return rel_holds(n.rel, sign_of(n.poly.eval(u)));
        case FormulaNode::Kind::And:
            for (const auto& k : n.kids)
                if (!eval_node(*k, u)) return false;
            return true;
        case FormulaNode::Kind::Or:
            for (const auto& k : n.kids)
                if (eval_node(*k, u)) return true;
            return false;
        case FormulaNode::Kind::Not:
            return !eval_node(*n.kids[0], u);
        case FormulaNode::Kind::Points:
            for (const auto& p : n.points) {
                bool all = true;
                for (size_t i = 0; i < p.size() && all; ++i) {
                    auto [re, im] = re_im(p[i]);
                    all = (re == u[2 * i]) && (im == u[2 * i + 1]);
                }
                if (all) return true;
            }
            return false;
    }
    return false;
}

}  // namespace

bool SemialgFormula::eval_at(const AlgVec& z) const {
    if ((int)z.size() != d_) throw std::invalid_argument("dimension mismatch");
    AlgVec u;
    for (const auto& c : z) {
        auto [re, im] = re_im(c);
        u.push_back(std::move(re));
        u.push_back(std::move(im));
    }
    return eval_node(*root_, u);
}

bool SemialgFormula::eval_at_real(const AlgVec& u) const {
    if ((int)u.size() != 2 * d_) throw std::invalid_argument("dimension mismatch");
    return eval_node(*root_, u);
}

namespace {
bool node_equal(const FormulaNode& a, const FormulaNode& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case FormulaNode::Kind::Atom:
            return a.rel == b.rel && a.poly == b.poly;
        case FormulaNode::Kind::Points: {
            if (a.points.size() != b.points.size()) return false;
            for (size_t i = 0; i < a.points.size(); ++i) {
                if (a.points[i].size() != b.points[i].size()) return false;
                for (size_t j = 0; j < a.points[i].size(); ++j)
                    if (a.points[i][j] != b.points[i][j]) return false;
            }
            return true;
        }
        default: {
            if (a.kids.size() != b.kids.size()) return false;
            for (size_t i = 0; i < a.kids.size(); ++i)
                if (!node_equal(*a.kids[i], *b.kids[i])) return false;
            return true;
        }
    }
}
}  // namespace

bool SemialgFormula::operator==(const SemialgFormula& o) const {
    if (d_ != o.d_) return false;
    if (!root_ || !o.root_) return root_ == o.root_;
    return node_equal(*root_, *o.root_);
}

// ----- linear substitution -----

namespace {

SemialgFormula substitute_node(int d, const FormulaNode& n, const std::vector<MPoly>& repl,
                               const AlgMat& M, AlgMat& Minv, bool& have_inv) {
    switch (n.kind) {
        case FormulaNode::Kind::Atom:
            return SemialgFormula::atom(d, n.poly.substitute(repl), n.rel);
        case FormulaNode::Kind::Points: {
            if (!n.points.empty() && !have_inv) {
                Minv = mat_inverse(M);  // throws on singular M
                have_inv = true;
            }
            std::vector<AlgVec> pts;
            for (const auto& p : n.points) pts.push_back(mat_vec_mul(Minv, p));
            return SemialgFormula::point_set(d, std::move(pts));
        }
        case FormulaNode::Kind::Not:
            return SemialgFormula::negation(
                substitute_node(d, *n.kids[0], repl, M, Minv, have_inv));
        default: {
            std::vector<SemialgFormula> kids;
            for (const auto& k : n.kids)
                kids.push_back(substitute_node(d, *k, repl, M, Minv, have_inv));
            return n.kind == FormulaNode::Kind::And ? SemialgFormula::conj(d, std::move(kids))
                                                     : SemialgFormula::disj(d, std::move(kids));
        }
    }
    throw std::logic_error("unreachable");
}

}  // namespace

SemialgFormula substitute_linear(const SemialgFormula& f, const AlgMat& M) {
    int d = f.dim();
    if ((int)M.size() != d) throw std::invalid_argument("matrix dimension mismatch");
    // real/imaginary coordinates of (Mz)_i as linear forms in u
    std::vector<MPoly> repl(2 * d, MPoly(2 * d));
    for (int i = 0; i < d; ++i) {
        MPoly re(2 * d), im(2 * d);
        for (int j = 0; j < d; ++j) {
            auto [mr, mi] = re_im(M[i][j]);
            re = re + MPoly::var(2 * d, 2 * j) * mr - MPoly::var(2 * d, 2 * j + 1) * mi;
            im = im + MPoly::var(2 * d, 2 * j) * mi + MPoly::var(2 * d, 2 * j + 1) * mr;
        }
        repl[2 * i] = std::move(re);
        repl[2 * i + 1] = std::move(im);
    }
    AlgMat Minv;
    bool have_inv = false;
    return substitute_node(d, *f.root(), repl, M, Minv, have_inv);
}

// ----- closedness -----

namespace {
bool closed_node(const FormulaNode& n) {
    switch (n.kind) {
        case FormulaNode::Kind::Atom:
            return n.rel == Rel::Ge || n.rel == Rel::Eq;
        case FormulaNode::Kind::And:
        case FormulaNode::Kind::Or:
            for (const auto& k : n.kids)
                if (!closed_node(*k)) return false;
            return true;
        case FormulaNode::Kind::Not:
            return false;
        case FormulaNode::Kind::Points:
            return true;
    }
    return false;
}
}  // namespace

bool is_closed(const SemialgFormula& f) { return closed_node(*f.root()); }

// ----- canonical text -----

namespace {

std::string ser_rat(const Rat& r) { return r.get_str(); }

std::string ser_num(const AlgNum& a) {
    if (a.is_rational()) return ser_rat(a.as_rational());
    std::ostringstream os;
    os << "(alg (";
    RatPoly m = a.minpoly();
    for (int i = 0; i <= m.degree(); ++i) {
        if (i) os << ' ';
        os << ser_rat(m.coeff(i));
    }
    Box b = a.isolating_box();
    os << ") " << ser_rat(b.re_lo) << ' ' << ser_rat(b.re_hi) << ' ' << ser_rat(b.im_lo) << ' '
       << ser_rat(b.im_hi) << ')';
    return os.str();
}

std::string ser_poly(const MPoly& p) {
    std::ostringstream os;
    os << "(+";
    for (const auto& [m, c] : p.terms()) {
        os << " (* " << ser_num(c);
        for (int i = 0; i < p.nvars(); ++i)
            if (m[i] > 0) os << " (^ u" << i + 1 << ' ' << m[i] << ')';
        os << ')';
    }
    os << ')';
    return os.str();
}

void ser_node(const FormulaNode& n, std::ostringstream& os) {
    switch (n.kind) {
        case FormulaNode::Kind::Atom: {
            const char* rel = n.rel == Rel::Ge   ? ">="
                              : n.rel == Rel::Gt ? ">"
                              : n.rel == Rel::Eq ? "="
                                                 : "!=";
            os << '(' << rel << ' ' << ser_poly(n.poly) << ')';
            break;
        }
        case FormulaNode::Kind::And:
        case FormulaNode::Kind::Or: {
            os << (n.kind == FormulaNode::Kind::And ? "(and" : "(or");
            for (const auto& k : n.kids) {
                os << ' ';
                ser_node(*k, os);
            }
            os << ')';
            break;
        }
        case FormulaNode::Kind::Not:
            os << "(not ";
            ser_node(*n.kids[0], os);
            os << ')';
            break;
        case FormulaNode::Kind::Points: {
            os << "(points";
            for (const auto& p : n.points) {
                os << " (";
                bool first = true;
                for (const auto& c : p) {
                    auto [re, im] = re_im(c);
                    os << (first ? "" : " ") << ser_num(re) << ' ' << ser_num(im);
                    first = false;
                }
                os << ')';
            }
            os << ')';
            break;
        }
    }
}

}  // namespace

std::string serialize(const SemialgFormula& f) {
    std::ostringstream os;
    ser_node(*f.root(), os);
    return os.str();
}

// ----- parsing -----

namespace {

struct Tokenizer {
    const std::string& s;
    size_t pos = 0;

    explicit Tokenizer(const std::string& text) : s(text) {}

    void skip_ws() {
        while (pos < s.size() && std::isspace((unsigned char)s[pos])) ++pos;
    }
    [[noreturn]] void fail(const std::string& msg) const {
        throw std::invalid_argument("parse error at offset " + std::to_string(pos) + ": " + msg);
    }
    std::string next() {
        skip_ws();
        if (pos >= s.size()) fail("unexpected end of input");
        if (s[pos] == '(' || s[pos] == ')') return std::string(1, s[pos++]);
        size_t start = pos;
        while (pos < s.size() && !std::isspace((unsigned char)s[pos]) && s[pos] != '(' &&
               s[pos] != ')')
            ++pos;
        return s.substr(start, pos - start);
    }
    std::string peek() {
        size_t save = pos;
        std::string t = next();
        pos = save;
        return t;
    }
    void expect(const std::string& tok) {
        if (next() != tok) {
            pos -= 1;
            fail("expected '" + tok + "'");
        }
    }
    bool done() {
        skip_ws();
        return pos >= s.size();
    }
};

Rat parse_rat(Tokenizer& tz) {
    std::string t = tz.next();
    try {
        return rat_from_string(t);
    } catch (const std::exception& e) {
        tz.fail(std::string("bad rational '") + t + "'");
    }
}

AlgNum parse_num(Tokenizer& tz) {
    if (tz.peek() != "(") return AlgNum(parse_rat(tz));
    tz.expect("(");
    std::string head = tz.next();
    if (head != "alg") tz.fail("expected 'alg'");
    tz.expect("(");
    std::vector<Rat> coeffs;
    while (tz.peek() != ")") coeffs.push_back(parse_rat(tz));
    tz.expect(")");
    Rat rl = parse_rat(tz), rh = parse_rat(tz), il = parse_rat(tz), ih = parse_rat(tz);
    tz.expect(")");
    return AlgNum::from_minpoly(RatPoly(std::move(coeffs)), Box(rl, rh, il, ih));
}

MPoly parse_poly(Tokenizer& tz, int nvars) {
    tz.expect("(");
    tz.expect("+");
    MPoly p(nvars);
    while (tz.peek() != ")") {
        tz.expect("(");
        tz.expect("*");
        AlgNum c = parse_num(tz);
        MPoly::Monomial m(nvars, 0);
        while (tz.peek() != ")") {
            tz.expect("(");
            tz.expect("^");
            std::string v = tz.next();
            if (v.size() < 2 || v[0] != 'u') tz.fail("expected variable uK");
            int idx = std::stoi(v.substr(1)) - 1;
            if (idx < 0 || idx >= nvars) tz.fail("variable index out of range");
            int e = std::stoi(tz.next());
            if (e < 0) tz.fail("negative exponent");
            m[idx] += e;
            tz.expect(")");
        }
        p.add_term(std::move(m), std::move(c));
        tz.expect(")");
    }
    tz.expect(")");
    return p;
}

SemialgFormula parse_node(Tokenizer& tz, int d) {
    tz.expect("(");
    std::string head = tz.next();
    if (head == "and" || head == "or") {
        std::vector<SemialgFormula> kids;
        while (tz.peek() != ")") kids.push_back(parse_node(tz, d));
        tz.expect(")");
        return head == "and" ? SemialgFormula::conj(d, std::move(kids))
                             : SemialgFormula::disj(d, std::move(kids));
    }
    if (head == "not") {
        SemialgFormula f = parse_node(tz, d);
        tz.expect(")");
        return SemialgFormula::negation(std::move(f));
    }
    if (head == "points") {
        std::vector<AlgVec> pts;
        while (tz.peek() != ")") {
            tz.expect("(");
            AlgVec p;
            for (int i = 0; i < d; ++i) {
                AlgNum re = parse_num(tz);
                AlgNum im = parse_num(tz);
                p.push_back(re + alg_i() * im);
            }
            tz.expect(")");
            pts.push_back(std::move(p));
        }
        tz.expect(")");
        return SemialgFormula::point_set(d, std::move(pts));
    }
    Rel rel;
    if (head == ">=")
        rel = Rel::Ge;
    else if (head == ">")
        rel = Rel::Gt;
    else if (head == "=")
        rel = Rel::Eq;
    else if (head == "!=")
        rel = Rel::Ne;
    else
        tz.fail("unknown operator '" + head + "'");
    MPoly p = parse_poly(tz, 2 * d);
    tz.expect(")");
    return SemialgFormula::atom(d, std::move(p), rel);
}

}  // namespace

SemialgFormula parse_formula(const std::string& text, int d) {
    Tokenizer tz(text);
    SemialgFormula f = parse_node(tz, d);
    if (!tz.done()) tz.fail("trailing input");
    return f;
}

// ----- SMT-LIB2 -----

namespace {

std::string smt_rat(const Rat& r) {
    std::string num = Int(abs(r.get_num())).get_str();
    std::string body =
        r.get_den() == 1 ? num : "(/ " + num + " " + r.get_den().get_str() + ")";
    return r < 0 ? "(- " + body + ")" : body;
}

struct SmtConsts {
    std::vector<std::pair<AlgNum, std::string>> entries;

    std::string ref(const AlgNum& a) {
        if (a.is_rational()) return smt_rat(a.as_rational());
        if (!a.is_real())
            throw std::invalid_argument("SMT output requires real algebraic coefficients");
        for (const auto& [v, name] : entries)
            if (v == a) return name;
        std::string name = "c" + std::to_string(entries.size());
        entries.push_back({a, name});
        return name;
    }

    std::string declarations() const {
        std::ostringstream os;
        for (const auto& [v, name] : entries) {
            os << "(declare-const " << name << " Real)\n";
            RatPoly m = v.minpoly();
            os << "(assert (= 0 (+";
            for (int i = 0; i <= m.degree(); ++i) {
                os << " (* " << smt_rat(m.coeff(i));
                for (int e = 0; e < i; ++e) os << ' ' << name;
                os << ')';
            }
            os << ")))\n";
            Box b = v.isolating_box();
            os << "(assert (<= " << smt_rat(b.re_lo) << ' ' << name << "))\n";
            os << "(assert (<= " << name << ' ' << smt_rat(b.re_hi) << "))\n";
        }
        return os.str();
    }
};

std::string smt_poly(const MPoly& p, SmtConsts& consts) {
    if (p.is_zero()) return "0";
    std::ostringstream os;
    os << "(+";
    for (const auto& [m, c] : p.terms()) {
        os << " (* " << consts.ref(c);
        for (int i = 0; i < p.nvars(); ++i)
            for (int e = 0; e < m[i]; ++e) os << " u" << i + 1;
        os << ')';
    }
    os << ')';
    return os.str();
}

std::string smt_node(const FormulaNode& n, int d, SmtConsts& consts) {
    switch (n.kind) {
        case FormulaNode::Kind::Atom: {
            std::string p = smt_poly(n.poly, consts);
            switch (n.rel) {
                case Rel::Ge: return "(>= " + p + " 0)";
                case Rel::Gt: return "(> " + p + " 0)";
                case Rel::Eq: return "(= " + p + " 0)";
                case Rel::Ne: return "(not (= " + p + " 0))";
            }
            return "";
        }
        case FormulaNode::Kind::And:
        case FormulaNode::Kind::Or: {
            if (n.kids.empty()) return n.kind == FormulaNode::Kind::And ? "true" : "false";
            std::string out = n.kind == FormulaNode::Kind::And ? "(and" : "(or";
            for (const auto& k : n.kids) out += " " + smt_node(*k, d, consts);
            return out + ")";
        }
        case FormulaNode::Kind::Not:
            return "(not " + smt_node(*n.kids[0], d, consts) + ")";
        case FormulaNode::Kind::Points: {
            // expand into coordinate equations
            if (n.points.empty()) return "false";
            std::string out = "(or";
            for (const auto& p : n.points) {
                out += " (and";
                for (size_t i = 0; i < p.size(); ++i) {
                    auto [re, im] = re_im(p[i]);
                    out += " (= u" + std::to_string(2 * i + 1) + " " + consts.ref(re) + ")";
                    out += " (= u" + std::to_string(2 * i + 2) + " " + consts.ref(im) + ")";
                }
                out += ")";
            }
            return out + ")";
        }
    }
    return "";
}

}  // namespace

std::string to_smt2(const SemialgFormula& f) {
    SmtConsts consts;
    std::string body = smt_node(*f.root(), f.dim(), consts);
    std::ostringstream os;
    os << "(set-logic QF_NRA)\n";
    for (int i = 1; i <= 2 * f.dim(); ++i) os << "(declare-const u" << i << " Real)\n";
    os << consts.declarations();
    os << "(assert " << body << ")\n(check-sat)\n";
    return os.str();
}

}  // namespace orbit
