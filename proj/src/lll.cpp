#include "orbit/lattice.hpp"

#include <algorithm>

#include <stdexcept>

namespace orbit {
namespace {

Rat dot(const IntVec& a, const IntVec& b) {
    Int s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return Rat(s);
}

Int round_rat(const Rat& r) {
    // nearest integer, ties toward zero
    Int n = r.get_num(), d = r.get_den();
    Int q, rem;
    mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
    if (2 * rem > d) q += 1;
    return q;
}

}  // namespace

IntMat lll_reduce(IntMat b) {
    const int n = (int)b.size();
    if (n == 0) return b;
    const size_t m = b[0].size();
    for (const auto& row : b)
        if (row.size() != m) throw std::invalid_argument("lll: ragged matrix");

    // rational Gram-Schmidt data: mu[i][j] and B[i] = |b*_i|^2
    std::vector<std::vector<Rat>> mu(n, std::vector<Rat>(n, Rat(0)));
    std::vector<Rat> B(n, Rat(0));
    auto recompute = [&]() {
        std::vector<std::vector<Rat>> star(n, std::vector<Rat>(m, Rat(0)));
        for (int i = 0; i < n; ++i) {
            for (size_t t = 0; t < m; ++t) star[i][t] = Rat(b[i][t]);
            for (int j = 0; j < i; ++j) {
                Rat num(0);
                for (size_t t = 0; t < m; ++t) num += Rat(b[i][t]) * star[j][t];
                mu[i][j] = B[j] == 0 ? Rat(0) : num / B[j];
                for (size_t t = 0; t < m; ++t) star[i][t] -= mu[i][j] * star[j][t];
            }
            B[i] = Rat(0);
            for (size_t t = 0; t < m; ++t) B[i] += star[i][t] * star[i][t];
            if (B[i] == 0) throw std::invalid_argument("lll: dependent basis");
        }
    };
    recompute();

    auto size_reduce = [&](int i, int j) {
        Int q = round_rat(mu[i][j]);
        if (q == 0) return;
        for (size_t t = 0; t < m; ++t) b[i][t] -= q * b[j][t];
        for (int l = 0; l < j; ++l) mu[i][l] -= Rat(q) * mu[j][l];
        mu[i][j] -= Rat(q);
    };

    const Rat delta(3, 4);
    int k = 1;
    while (k < n) {
        for (int j = k - 1; j >= 0; --j) {
            Rat half(1, 2);
            if (rat_abs(mu[k][j]) > half) size_reduce(k, j);
        }
        if (B[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * B[k - 1]) {
            ++k;
        } else {
            std::swap(b[k], b[k - 1]);
            recompute();  // small n in practice; clarity over the O(1) update
            k = std::max(k - 1, 1);
        }
    }
    return b;
}

IntMat hnf_basis(IntMat rows) {
    rows.erase(std::remove_if(rows.begin(), rows.end(),
                              [](const IntVec& r) {
                                  for (const auto& x : r)
                                      if (x != 0) return false;
                                  return true;
                              }),
               rows.end());
    if (rows.empty()) return rows;
    const size_t m = rows[0].size();
    size_t r = 0;
    for (size_t col = 0; col < m && r < rows.size(); ++col) {
        // eliminate below row r in this column via Euclid
        while (true) {
            int pivot = -1;
            for (size_t i = r; i < rows.size(); ++i) {
                if (rows[i][col] == 0) continue;
                if (pivot < 0 || cmp(abs(rows[i][col]), abs(rows[pivot][col])) < 0)
                    pivot = (int)i;
            }
            if (pivot < 0) break;
            std::swap(rows[r], rows[pivot]);
            bool done = true;
            for (size_t i = r + 1; i < rows.size(); ++i) {
                if (rows[i][col] == 0) continue;
                Int q;
                mpz_fdiv_q(q.get_mpz_t(), rows[i][col].get_mpz_t(), rows[r][col].get_mpz_t());
                for (size_t t = 0; t < m; ++t) rows[i][t] -= q * rows[r][t];
                if (rows[i][col] != 0) done = false;
            }
            if (done) break;
        }
        if (rows[r][col] == 0) continue;
        if (rows[r][col] < 0)
            for (size_t t = 0; t < m; ++t) rows[r][t] = -rows[r][t];
        for (size_t i = 0; i < r; ++i) {
            Int q;
            mpz_fdiv_q(q.get_mpz_t(), rows[i][col].get_mpz_t(), rows[r][col].get_mpz_t());
            if (q != 0)
                for (size_t t = 0; t < m; ++t) rows[i][t] -= q * rows[r][t];
        }
        ++r;
    }
    rows.resize(r);
    return rows;
}

bool hnf_contains(const IntMat& hnf, const IntVec& v) {
    IntVec w = v;
    const size_t m = w.size();
    for (const auto& row : hnf) {
        size_t col = 0;
        while (col < m && row[col] == 0) ++col;
        if (col == m) continue;
        if (w[col] == 0) continue;
        if (w[col] % row[col] != 0) return false;
        Int q = w[col] / row[col];
        for (size_t t = 0; t < m; ++t) w[t] -= q * row[t];
    }
    for (const auto& x : w)
        if (x != 0) return false;
    return true;
}

}  // namespace orbit
