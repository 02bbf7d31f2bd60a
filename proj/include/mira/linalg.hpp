#pragma once

// Dense linear algebra over a finite field or the rationals. Matrices are
// row-major vectors of rows; a list of vectors is a matrix whose rows span.

#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "mira/exactring.hpp"

namespace mira {

// GF(q) for a prime power q <= 256. Elements are 0..q-1, read as base-p
// digit vectors of polynomials modulo a fixed irreducible; the integers
// 0..p-1 are the prime subfield. Arithmetic goes through shared tables.
struct FiniteField {
    using elem = int;
    int q = 0, p = 0;

    explicit FiniteField(int size) {
        int k = 0;
        if (size > 256 || !is_prime_power(size, &p, &k)) fail("NotPrimePower", std::to_string(size));
        q = size;
        t_ = tables(size, p, k);
    }
    elem zero() const { return 0; }
    elem one() const { return 1; }
    elem from_int(long long x) const { long long r = x % p; return int(r < 0 ? r + p : r); }
    elem add(elem a, elem b) const { return t_->add[a * q + b]; }
    elem sub(elem a, elem b) const { return t_->add[a * q + t_->neg[b]]; }
    elem neg(elem a) const { return t_->neg[a]; }
    elem mul(elem a, elem b) const { return t_->mul[a * q + b]; }
    elem inv(elem a) const {
        if (a == 0) fail("DivisionByZero", "inverse of 0 in GF(" + std::to_string(q) + ")");
        return t_->inv[a];
    }
    bool is_zero(elem a) const { return a == 0; }

private:
    struct Tables {
        std::vector<int> add, mul, neg, inv;
    };
    std::shared_ptr<const Tables> t_;

    static std::vector<int> digits(int a, int p, int k) {
        std::vector<int> d(k);
        for (int i = 0; i < k; ++i) { d[i] = a % p; a /= p; }
        return d;
    }
    static int encode(const std::vector<int>& d, int p) {
        int a = 0;
        for (int i = int(d.size()) - 1; i >= 0; --i) a = a * p + d[i];
        return a;
    }
    // product of digit vectors modulo the monic polynomial x^k - red(x)
    static int polymul(int a, int b, int p, int k, const std::vector<int>& red) {
        auto da = digits(a, p, k), db = digits(b, p, k);
        std::vector<int> pr(2 * k, 0);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) pr[i + j] = (pr[i + j] + da[i] * db[j]) % p;
        for (int e = 2 * k - 1; e >= k; --e) {
            int c = pr[e];
            if (!c) continue;
            pr[e] = 0;
            for (int i = 0; i < k; ++i) pr[e - k + i] = (pr[e - k + i] + c * red[i]) % p;
        }
        pr.resize(k);
        return encode(pr, p);
    }
    static std::shared_ptr<const Tables> build(int q, int p, int k) {
        auto t = std::make_shared<Tables>();
        t->add.resize(q * q);
        t->neg.resize(q);
        for (int a = 0; a < q; ++a) {
            auto da = digits(a, p, k);
            std::vector<int> dn(k);
            for (int i = 0; i < k; ++i) dn[i] = (p - da[i]) % p;
            t->neg[a] = encode(dn, p);
            for (int b = 0; b < q; ++b) {
                auto db = digits(b, p, k);
                std::vector<int> ds(k);
                for (int i = 0; i < k; ++i) ds[i] = (da[i] + db[i]) % p;
                t->add[a * q + b] = encode(ds, p);
            }
        }
        // x^k = red(x): take the first red making every nonzero element invertible
        std::vector<int> red(k, 0);
        for (int code = 0; code < q; ++code) {
            red = digits(code, p, k);
            t->mul.assign(q * q, 0);
            for (int a = 0; a < q; ++a)
                for (int b = 0; b < q; ++b) t->mul[a * q + b] = k == 1 ? a * b % p : polymul(a, b, p, k, red);
            t->inv.assign(q, 0);
            bool field = true;
            for (int a = 1; a < q && field; ++a) {
                for (int b = 1; b < q; ++b)
                    if (t->mul[a * q + b] == 1) { t->inv[a] = b; break; }
                field = t->inv[a] != 0;
            }
            if (field) return t;
        }
        fail("NoIrreducible", std::to_string(q));
    }
    static std::shared_ptr<const Tables> tables(int q, int p, int k) {
        static std::mutex m;
        static std::map<int, std::shared_ptr<const Tables>> cache;
        std::lock_guard<std::mutex> g(m);
        auto it = cache.find(q);
        if (it != cache.end()) return it->second;
        return cache[q] = build(q, p, k);
    }
};

struct RationalField {
    using elem = Rat;
    elem zero() const { return 0; }
    elem one() const { return 1; }
    elem from_int(long long x) const { return Rat(x); }
    elem add(const elem& a, const elem& b) const { return a + b; }
    elem sub(const elem& a, const elem& b) const { return a - b; }
    elem neg(const elem& a) const { return -a; }
    elem mul(const elem& a, const elem& b) const { return a * b; }
    elem inv(const elem& a) const { return 1 / a; }
    bool is_zero(const elem& a) const { return a == 0; }
};

template <class F> using Vec = std::vector<typename F::elem>;
template <class F> using Mat = std::vector<Vec<F>>;
using FpMat = Mat<FiniteField>;
using FpVec = Vec<FiniteField>;

// Reduced row echelon form in place; returns pivot columns.
template <class F>
std::vector<int> rref(const F& f, Mat<F>& m) {
    std::vector<int> piv;
    if (m.empty()) return piv;
    int rows = int(m.size()), cols = int(m[0].size()), r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int sel = -1;
        for (int i = r; i < rows; ++i)
            if (!f.is_zero(m[i][c])) { sel = i; break; }
        if (sel < 0) continue;
        std::swap(m[r], m[sel]);
        auto inv = f.inv(m[r][c]);
        for (int k = c; k < cols; ++k) m[r][k] = f.mul(m[r][k], inv);
        for (int i = 0; i < rows; ++i) {
            if (i == r || f.is_zero(m[i][c])) continue;
            auto fac = m[i][c];
            for (int k = c; k < cols; ++k) m[i][k] = f.sub(m[i][k], f.mul(fac, m[r][k]));
        }
        piv.push_back(c);
        ++r;
    }
    m.resize(r);
    return piv;
}

template <class F>
int rank(const F& f, Mat<F> m) {
    return int(rref(f, m).size());
}

template <class F>
Mat<F> row_basis(const F& f, Mat<F> m) {
    rref(f, m);
    return m;
}

template <class F>
Mat<F> concat(Mat<F> a, const Mat<F>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

template <class F>
Vec<F> apply(const F& f, const Mat<F>& a, const Vec<F>& x) {
    Vec<F> y(a.size(), f.zero());
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < x.size(); ++j)
            if (!f.is_zero(a[i][j]) && !f.is_zero(x[j])) y[i] = f.add(y[i], f.mul(a[i][j], x[j]));
    return y;
}

template <class F>
Mat<F> matmul(const F& f, const Mat<F>& a, const Mat<F>& b) {
    size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
    Mat<F> c(n, Vec<F>(m, f.zero()));
    for (size_t i = 0; i < n; ++i)
        for (size_t l = 0; l < k; ++l) {
            if (f.is_zero(a[i][l])) continue;
            for (size_t j = 0; j < m; ++j) c[i][j] = f.add(c[i][j], f.mul(a[i][l], b[l][j]));
        }
    return c;
}

template <class F>
Mat<F> identity(const F& f, int n) {
    Mat<F> m(n, Vec<F>(n, f.zero()));
    for (int i = 0; i < n; ++i) m[i][i] = f.one();
    return m;
}

// Images of a list of vectors under a.
template <class F>
Mat<F> image_of(const F& f, const Mat<F>& a, const Mat<F>& vs) {
    Mat<F> out;
    out.reserve(vs.size());
    for (auto& v : vs) out.push_back(apply(f, a, v));
    return out;
}

// Basis of {x : a x = 0}; a has cols = n.
template <class F>
Mat<F> kernel(const F& f, Mat<F> a, int n) {
    auto piv = rref(f, a);
    std::vector<bool> is_piv(n, false);
    for (int c : piv) is_piv[c] = true;
    Mat<F> out;
    for (int fc = 0; fc < n; ++fc) {
        if (is_piv[fc]) continue;
        Vec<F> x(n, f.zero());
        x[fc] = f.one();
        for (size_t i = 0; i < piv.size(); ++i) x[piv[i]] = f.neg(a[i][fc]);
        out.push_back(std::move(x));
    }
    return out;
}

// Coordinate vectors extending a basis of a subspace to a basis of F^n.
template <class F>
Mat<F> complement(const F& f, const Mat<F>& basis, int n) {
    Mat<F> m = basis;
    auto piv = rref(f, m);
    std::vector<bool> used(n, false);
    for (int c : piv) used[c] = true;
    Mat<F> out;
    for (int c = 0; c < n; ++c) {
        if (used[c]) continue;
        Vec<F> e(n, f.zero());
        e[c] = f.one();
        out.push_back(std::move(e));
    }
    return out;
}

// Square matrix inverse; returns false if singular.
template <class F>
bool invert(const F& f, const Mat<F>& a, Mat<F>& out) {
    int n = int(a.size());
    Mat<F> aug(n, Vec<F>(2 * n, f.zero()));
    for (int i = 0; i < n; ++i) {
        if ((int)a[i].size() != n) return false;
        for (int j = 0; j < n; ++j) aug[i][j] = a[i][j];
        aug[i][n + i] = f.one();
    }
    auto piv = rref(f, aug);
    if ((int)piv.size() < n || piv[n - 1] != n - 1) return false;
    out.assign(n, Vec<F>(n, f.zero()));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out[i][j] = aug[i][n + j];
    return true;
}

}  // namespace mira
