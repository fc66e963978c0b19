#include "orbit/matrix.hpp"

#include <stdexcept>

namespace orbit {

AlgMat alg_mat(const RatMat& m) {
    AlgMat out(m.size());
    for (size_t i = 0; i < m.size(); ++i)
        for (const Rat& e : m[i]) out[i].emplace_back(e);
    return out;
}

AlgVec alg_vec(const std::vector<Rat>& v) {
    AlgVec out;
    for (const Rat& e : v) out.emplace_back(e);
    return out;
}

AlgMat mat_identity(int d) {
    AlgMat out(d, AlgVec(d, AlgNum(Rat(0))));
    for (int i = 0; i < d; ++i) out[i][i] = AlgNum(Rat(1));
    return out;
}

AlgMat mat_mul(const AlgMat& a, const AlgMat& b) {
    int n = (int)a.size(), k = (int)b.size(), m = (int)b[0].size();
    AlgMat out(n, AlgVec(m, AlgNum(Rat(0))));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) {
            AlgNum s{Rat(0)};
            for (int t = 0; t < k; ++t) s = s + a[i][t] * b[t][j];
            out[i][j] = s;
        }
    return out;
}

AlgVec mat_vec_mul(const AlgMat& a, const AlgVec& v) {
    AlgVec out;
    for (const auto& row : a) {
        AlgNum s{Rat(0)};
        for (size_t t = 0; t < v.size(); ++t) s = s + row[t] * v[t];
        out.push_back(s);
    }
    return out;
}

AlgMat mat_inverse(const AlgMat& a) {
    int d = (int)a.size();
    AlgMat m = a;
    AlgMat inv = mat_identity(d);
    for (int col = 0; col < d; ++col) {
        int piv = -1;
        for (int r = col; r < d; ++r)
            if (!m[r][col].is_zero()) {
                piv = r;
                break;
            }
        if (piv < 0) throw std::invalid_argument("matrix is singular");
        std::swap(m[piv], m[col]);
        std::swap(inv[piv], inv[col]);
        AlgNum pinv = m[col][col].inv();
        for (int j = 0; j < d; ++j) {
            m[col][j] = m[col][j] * pinv;
            inv[col][j] = inv[col][j] * pinv;
        }
        for (int r = 0; r < d; ++r) {
            if (r == col || m[r][col].is_zero()) continue;
            AlgNum f = m[r][col];
            for (int j = 0; j < d; ++j) {
                m[r][j] = m[r][j] - f * m[col][j];
                inv[r][j] = inv[r][j] - f * inv[col][j];
            }
        }
    }
    return inv;
}

bool mat_equal(const AlgMat& a, const AlgMat& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].size() != b[i].size()) return false;
        for (size_t j = 0; j < a[i].size(); ++j)
            if (a[i][j] != b[i][j]) return false;
    }
    return true;
}

bool is_rational_mat(const AlgMat& a) {
    for (const auto& row : a)
        for (const auto& e : row)
            if (!e.is_rational()) return false;
    return true;
}

RatMat to_rational_mat(const AlgMat& a) {
    RatMat out(a.size());
    for (size_t i = 0; i < a.size(); ++i)
        for (const auto& e : a[i]) out[i].push_back(e.as_rational());
    return out;
}

}  // namespace orbit
