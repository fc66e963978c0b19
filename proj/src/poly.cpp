#include "orbit/poly.hpp"

#include <algorithm>
#include <sstream>

namespace orbit {

void RatPoly::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

RatPoly RatPoly::constant(const Rat& a) {
    RatPoly p;
    if (a != 0) p.c_ = {a};
    return p;
}

RatPoly RatPoly::variable() { return RatPoly({Rat(0), Rat(1)}); }

RatPoly RatPoly::monomial(const Rat& a, int deg) {
    RatPoly p;
    if (a != 0) {
        p.c_.assign(deg + 1, Rat(0));
        p.c_[deg] = a;
    }
    return p;
}

const Rat& RatPoly::leading() const {
    if (c_.empty()) throw std::logic_error("leading coefficient of zero polynomial");
    return c_.back();
}

RatPoly RatPoly::operator+(const RatPoly& o) const {
    std::vector<Rat> r(std::max(c_.size(), o.c_.size()), Rat(0));
    for (size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
    for (size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
    return RatPoly(std::move(r));
}

RatPoly RatPoly::operator-(const RatPoly& o) const {
    std::vector<Rat> r(std::max(c_.size(), o.c_.size()), Rat(0));
    for (size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
    for (size_t i = 0; i < o.c_.size(); ++i) r[i] -= o.c_[i];
    return RatPoly(std::move(r));
}

RatPoly RatPoly::operator-() const {
    std::vector<Rat> r(c_);
    for (auto& x : r) x = -x;
    return RatPoly(std::move(r));
}

RatPoly RatPoly::operator*(const RatPoly& o) const {
    if (is_zero() || o.is_zero()) return RatPoly();
    std::vector<Rat> r(c_.size() + o.c_.size() - 1, Rat(0));
    for (size_t i = 0; i < c_.size(); ++i)
        for (size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
    return RatPoly(std::move(r));
}

RatPoly RatPoly::operator*(const Rat& a) const {
    if (a == 0) return RatPoly();
    std::vector<Rat> r(c_);
    for (auto& x : r) x *= a;
    return RatPoly(std::move(r));
}

Rat RatPoly::eval(const Rat& x) const {
    Rat acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

RatPoly RatPoly::derivative() const {
    if (c_.size() <= 1) return RatPoly();
    std::vector<Rat> r(c_.size() - 1);
    for (size_t i = 1; i < c_.size(); ++i) r[i - 1] = c_[i] * Rat((long)i);
    return RatPoly(std::move(r));
}

RatPoly RatPoly::monic() const {
    if (is_zero()) return *this;
    return *this * Rat(1 / leading());
}

RatPoly RatPoly::compose(const RatPoly& q) const {
    RatPoly acc;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * q + RatPoly::constant(*it);
    return acc;
}

RatPoly RatPoly::reversed() const {
    std::vector<Rat> r(c_.rbegin(), c_.rend());
    return RatPoly(std::move(r));
}

RatPoly RatPoly::scale_arg(const Rat& a) const {
    std::vector<Rat> r(c_);
    Rat pw(1);
    for (size_t i = 0; i < r.size(); ++i) {
        r[i] *= pw;
        pw *= a;
    }
    return RatPoly(std::move(r));
}

RatPoly RatPoly::shift_arg(const Rat& a) const {
    // Horner-style Taylor shift.
    RatPoly acc;
    RatPoly lin({a, Rat(1)});
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * lin + RatPoly::constant(*it);
    return acc;
}

std::string RatPoly::to_string(const std::string& var) const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
        const Rat& a = c_[i];
        if (a == 0) continue;
        if (!first) os << (a > 0 ? " + " : " - ");
        else if (a < 0) os << "-";
        Rat mag = rat_abs(a);
        if (i == 0 || mag != 1) os << mag.get_str();
        if (i > 0) {
            if (mag != 1) os << "*";
            os << var;
            if (i > 1) os << "^" << i;
        }
        first = false;
    }
    return os.str();
}

namespace {

// Scale by a positive rational to a primitive integer polynomial. Positive
// scaling preserves signs, so remainder chains built from scaled elements
// keep their sign-variation counts while coefficients stay small.
RatPoly positive_primitive(const RatPoly& p) {
    if (p.is_zero()) return p;
    Int g(0), l(1);
    for (const Rat& c : p.coeffs()) {
        if (c == 0) continue;
        g = gcd(g, Int(c.get_num()));
        l = lcm(l, Int(c.get_den()));
    }
    Rat scale(l, g);
    scale.canonicalize();
    if (scale == 1) return p;
    std::vector<Rat> out;
    out.reserve(p.coeffs().size());
    for (const Rat& c : p.coeffs()) {
        Rat t = c * scale;
        t.canonicalize();
        out.push_back(std::move(t));
    }
    return RatPoly(std::move(out));
}

}  // namespace

std::pair<RatPoly, RatPoly> poly_divmod(const RatPoly& a, const RatPoly& b) {
    if (b.is_zero()) throw std::invalid_argument("polynomial division by zero");
    std::vector<Rat> rem(a.coeffs());
    int db = b.degree();
    if (a.degree() < db) return {RatPoly(), a};
    std::vector<Rat> quot(a.degree() - db + 1, Rat(0));
    const Rat& lb = b.leading();
    for (int i = a.degree(); i >= db; --i) {
        if (rem[i] == 0) continue;
        Rat f = rem[i] / lb;
        quot[i - db] = f;
        for (int j = 0; j <= db; ++j) rem[i - db + j] -= f * b.coeffs()[j];
    }
    return {RatPoly(std::move(quot)), RatPoly(std::move(rem))};
}

bool poly_divides(const RatPoly& b, const RatPoly& a) {
    if (a.is_zero()) return true;
    if (b.is_zero()) return false;
    return poly_divmod(a, b).second.is_zero();
}

RatPoly poly_gcd(RatPoly a, RatPoly b) {
    a = positive_primitive(a);
    b = positive_primitive(b);
    while (!b.is_zero()) {
        RatPoly r = positive_primitive(poly_divmod(a, b).second);
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

std::vector<std::pair<RatPoly, int>> squarefree_decomposition(const RatPoly& p) {
    if (p.is_zero()) throw std::invalid_argument("squarefree decomposition of zero polynomial");
    std::vector<std::pair<RatPoly, int>> out;
    RatPoly f = p.monic();
    if (f.degree() == 0) return out;
    // Yun's algorithm.
    RatPoly fp = f.derivative();
    RatPoly a = poly_gcd(f, fp);
    RatPoly b = poly_divmod(f, a).first;
    RatPoly c = poly_divmod(fp, a).first;
    RatPoly d = c - b.derivative();
    int k = 1;
    while (b.degree() > 0) {
        RatPoly g = poly_gcd(b, d);
        if (g.degree() > 0) out.emplace_back(g, k);
        b = poly_divmod(b, g).first;
        c = poly_divmod(d, g).first;
        d = c - b.derivative();
        ++k;
    }
    return out;
}

Rat resultant(const RatPoly& a, const RatPoly& b) {
    if (a.is_zero() || b.is_zero()) return Rat(0);
    int m = a.degree(), n = b.degree();
    if (m == 0) {
        Rat r(1);
        for (int i = 0; i < n; ++i) r *= a.coeffs()[0];
        return r;
    }
    if (n == 0) {
        Rat r(1);
        for (int i = 0; i < m; ++i) r *= b.coeffs()[0];
        return r;
    }
    // Sylvester matrix determinant via Gaussian elimination over Q.
    int N = m + n;
    std::vector<std::vector<Rat>> M(N, std::vector<Rat>(N, Rat(0)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= m; ++j) M[i][i + j] = a.coeffs()[m - j];
    for (int i = 0; i < m; ++i)
        for (int j = 0; j <= n; ++j) M[n + i][i + j] = b.coeffs()[n - j];
    Rat det(1);
    for (int col = 0; col < N; ++col) {
        int piv = -1;
        for (int r = col; r < N; ++r)
            if (M[r][col] != 0) {
                piv = r;
                break;
            }
        if (piv < 0) return Rat(0);
        if (piv != col) {
            std::swap(M[piv], M[col]);
            det = -det;
        }
        det *= M[col][col];
        Rat inv = 1 / M[col][col];
        for (int r = col + 1; r < N; ++r) {
            if (M[r][col] == 0) continue;
            Rat f = M[r][col] * inv;
            for (int cc = col; cc < N; ++cc) M[r][cc] -= f * M[col][cc];
        }
    }
    return det;
}

std::vector<RatPoly> signed_remainder_chain(const RatPoly& p, const RatPoly& q) {
    std::vector<RatPoly> chain;
    chain.push_back(positive_primitive(p));
    if (q.is_zero()) return chain;
    chain.push_back(positive_primitive(q));
    while (true) {
        const RatPoly& s1 = chain[chain.size() - 2];
        const RatPoly& s2 = chain[chain.size() - 1];
        RatPoly r = poly_divmod(s1, s2).second;
        if (r.is_zero()) break;
        chain.push_back(positive_primitive(-r));
    }
    return chain;
}

std::vector<RatPoly> sturm_chain(const RatPoly& p) {
    return signed_remainder_chain(p, p.derivative());
}

int sign_variations_at(const std::vector<RatPoly>& chain, const Rat& x) {
    int vars = 0, last = 0;
    for (const auto& f : chain) {
        int s = sign(f.eval(x));
        if (s == 0) continue;
        if (last != 0 && s != last) ++vars;
        last = s;
    }
    return vars;
}

int sturm_count(const std::vector<RatPoly>& chain, const Rat& a, const Rat& b) {
    return sign_variations_at(chain, a) - sign_variations_at(chain, b);
}

Rat root_bound(const RatPoly& p) {
    if (p.is_zero() || p.degree() == 0) return Rat(1);
    Rat m(0);
    const Rat& lead = p.leading();
    for (int i = 0; i < p.degree(); ++i) m = rat_max(m, rat_abs(p.coeffs()[i] / lead));
    return m + 1;
}

Rat root_separation_sq_lower_bound(const RatPoly& p) {
    // Mahler: sep(p) > sqrt(3) * n^{-(n+2)/2} * ||P||_2^{-(n-1)} for a squarefree
    // primitive integer polynomial P proportional to p.
    int n = p.degree();
    if (n < 2) return Rat(1);
    // Clear denominators, divide by integer content.
    Int den(1);
    for (const auto& c : p.coeffs()) {
        Int d = c.get_den();
        den = den / gcd(den, d) * d;
    }
    Int content(0);
    std::vector<Int> ic;
    for (const auto& c : p.coeffs()) {
        Rat scaled = c * Rat(den);
        ic.push_back(scaled.get_num());
        content = gcd(content, ic.back());
    }
    Int norm_sq(0);
    for (auto& a : ic) {
        a /= content;
        norm_sq += a * a;
    }
    Int denom(1);
    for (int i = 0; i < n + 2; ++i) denom *= n;
    Int nrm_pow(1);
    for (int i = 0; i < n - 1; ++i) nrm_pow *= norm_sq;
    return make_rat(Int(3), denom * nrm_pow);
}

}  // namespace orbit
