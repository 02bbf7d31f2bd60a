#pragma once

// Integer Laurent polynomials in v, polynomials in q = v^2, and exact
// reconstruction of polynomials in q from values at small primes.

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "mira/error.hpp"

namespace mira {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int ipow(const Int& b, unsigned e) {
    Int r = 1;
    for (unsigned i = 0; i < e; ++i) r *= b;
    return r;
}

// Sparse polynomial with integer exponents; the exponent set is restricted
// by the derived classes only through their constructors.
class LaurentPoly {
public:
    using Terms = std::map<int, Int>;

    LaurentPoly() = default;
    LaurentPoly(long long c) { if (c) t_[0] = c; }
    LaurentPoly(const Int& c) { if (c != 0) t_[0] = c; }

    static LaurentPoly mono(int e, const Int& c = 1) {
        LaurentPoly p;
        if (c != 0) p.t_[e] = c;
        return p;
    }
    // v^e
    static LaurentPoly v(int e = 1) { return mono(e, 1); }
    // (-v)^e
    static LaurentPoly negv(int e) { return mono(e, (e % 2 == 0) ? Int(1) : Int(-1)); }

    const Terms& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    Int coeff(int e) const {
        auto it = t_.find(e);
        return it == t_.end() ? Int(0) : it->second;
    }
    int min_exp() const { return t_.empty() ? 0 : t_.begin()->first; }
    int max_exp() const { return t_.empty() ? 0 : t_.rbegin()->first; }

    void add_term(int e, const Int& c) {
        if (c == 0) return;
        auto& slot = t_[e];
        slot += c;
        if (slot == 0) t_.erase(e);
    }

    LaurentPoly& operator+=(const LaurentPoly& o) {
        for (auto& [e, c] : o.t_) add_term(e, c);
        return *this;
    }
    LaurentPoly& operator-=(const LaurentPoly& o) {
        for (auto& [e, c] : o.t_) add_term(e, -c);
        return *this;
    }
    friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
    friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
    LaurentPoly operator-() const {
        LaurentPoly r;
        for (auto& [e, c] : t_) r.t_[e] = -c;
        return r;
    }
    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
        LaurentPoly r;
        for (auto& [ea, ca] : a.t_)
            for (auto& [eb, cb] : b.t_) r.add_term(ea + eb, ca * cb);
        return r;
    }
    LaurentPoly& operator*=(const LaurentPoly& o) { return *this = *this * o; }
    friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) { return a.t_ == b.t_; }
    friend bool operator!=(const LaurentPoly& a, const LaurentPoly& b) { return !(a == b); }
    friend bool operator<(const LaurentPoly& a, const LaurentPoly& b) { return a.t_ < b.t_; }

    LaurentPoly bar() const {
        LaurentPoly r;
        for (auto& [e, c] : t_) r.t_[-e] = c;
        return r;
    }
    // v -> v^k
    LaurentPoly substitute_power(int k) const {
        LaurentPoly r;
        for (auto& [e, c] : t_) r.add_term(e * k, c);
        return r;
    }

    // Recognizes +-v^k.
    bool is_unit(int* e = nullptr, int* sign = nullptr) const {
        if (t_.size() != 1) return false;
        auto& [ex, c] = *t_.begin();
        if (c != 1 && c != -1) return false;
        if (e) *e = ex;
        if (sign) *sign = c == 1 ? 1 : -1;
        return true;
    }
    LaurentPoly div_unit(const LaurentPoly& u) const {
        int e, s;
        if (!u.is_unit(&e, &s)) fail("NotUnit", "division by non-monomial " + u.str());
        LaurentPoly r;
        for (auto& [ex, c] : t_) r.t_[ex - e] = s > 0 ? c : Int(-c);
        return r;
    }
    bool nonneg_coeffs() const {
        return std::all_of(t_.begin(), t_.end(), [](auto& kv) { return kv.second > 0; });
    }

    std::string str(const std::string& var = "v") const {
        if (t_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto it = t_.rbegin(); it != t_.rend(); ++it) {
            Int c = it->second;
            int e = it->first;
            if (c < 0) { os << "-"; c = -c; }
            else if (!first) os << "+";
            first = false;
            if (e == 0) { os << c; continue; }
            if (c != 1) os << c;
            os << var;
            if (e != 1) os << "^" << e;
        }
        return os.str();
    }

protected:
    Terms t_;
};

// Polynomial in q with nonnegative exponents.
class QPoly {
public:
    QPoly() = default;
    QPoly(long long c) { if (c) t_[0] = c; }
    QPoly(const Int& c) { if (c != 0) t_[0] = c; }
    static QPoly mono(int e, const Int& c = 1) {
        if (e < 0) fail("NegativeExponent", "QPoly exponent " + std::to_string(e));
        QPoly p;
        if (c != 0) p.t_[e] = c;
        return p;
    }
    static QPoly q(int e = 1) { return mono(e); }

    const std::map<int, Int>& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    int degree() const { return t_.empty() ? -1 : t_.rbegin()->first; }
    Int coeff(int e) const {
        auto it = t_.find(e);
        return it == t_.end() ? Int(0) : it->second;
    }
    void add_term(int e, const Int& c) {
        if (c == 0) return;
        if (e < 0) fail("NegativeExponent", "QPoly exponent " + std::to_string(e));
        auto& slot = t_[e];
        slot += c;
        if (slot == 0) t_.erase(e);
    }
    QPoly& operator+=(const QPoly& o) { for (auto& [e, c] : o.t_) add_term(e, c); return *this; }
    QPoly& operator-=(const QPoly& o) { for (auto& [e, c] : o.t_) add_term(e, -c); return *this; }
    friend QPoly operator+(QPoly a, const QPoly& b) { return a += b; }
    friend QPoly operator-(QPoly a, const QPoly& b) { return a -= b; }
    QPoly operator-() const { QPoly r; for (auto& [e, c] : t_) r.t_[e] = -c; return r; }
    friend QPoly operator*(const QPoly& a, const QPoly& b) {
        QPoly r;
        for (auto& [ea, ca] : a.t_)
            for (auto& [eb, cb] : b.t_) r.add_term(ea + eb, ca * cb);
        return r;
    }
    QPoly& operator*=(const QPoly& o) { return *this = *this * o; }
    friend bool operator==(const QPoly& a, const QPoly& b) { return a.t_ == b.t_; }
    friend bool operator!=(const QPoly& a, const QPoly& b) { return !(a == b); }

    Int eval(const Int& q) const {
        Int r = 0;
        for (auto it = t_.rbegin(); it != t_.rend(); ++it) {
            int next = std::next(it) == t_.rend() ? 0 : std::next(it)->first;
            r += it->second;
            r *= ipow(q, unsigned(it->first - next));
        }
        return r;
    }
    // q = v^2
    LaurentPoly to_laurent() const {
        LaurentPoly r;
        for (auto& [e, c] : t_) r.add_term(2 * e, c);
        return r;
    }

    // Exact division; fails if b does not divide.
    QPoly divexact(const QPoly& b) const {
        if (b.is_zero()) fail("DivisionByZero", "QPoly divexact");
        QPoly rem = *this, quo;
        int db = b.degree();
        Int lb = b.coeff(db);
        while (!rem.is_zero() && rem.degree() >= db) {
            int d = rem.degree();
            Int lc = rem.coeff(d);
            if (lc % lb != 0) fail("NotDivisible", str() + " / " + b.str());
            QPoly t = mono(d - db, lc / lb);
            quo += t;
            rem -= t * b;
        }
        if (!rem.is_zero()) fail("NotDivisible", str() + " / " + b.str());
        return quo;
    }

    std::string str() const {
        if (t_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto it = t_.rbegin(); it != t_.rend(); ++it) {
            Int c = it->second;
            int e = it->first;
            if (c < 0) { os << "-"; c = -c; }
            else if (!first) os << "+";
            first = false;
            if (e == 0) { os << c; continue; }
            if (c != 1) os << c;
            os << "q";
            if (e != 1) os << "^" << e;
        }
        return os.str();
    }

private:
    std::map<int, Int> t_;
};

inline QPoly gauss_binom(int n, int k) {
    if (k < 0 || k > n) return QPoly();
    QPoly num = 1, den = 1;
    for (int i = 0; i < k; ++i) {
        num *= QPoly::q(n - i) - QPoly(1);
        den *= QPoly::q(i + 1) - QPoly(1);
    }
    return num.divexact(den);
}

inline const std::vector<int>& default_primes() {
    static const std::vector<int> p{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47};
    return p;
}

inline bool is_prime(long long n) {
    if (n < 2) return false;
    for (long long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// q = p^k with p prime, or false.
inline bool is_prime_power(long long q, int* p = nullptr, int* k = nullptr) {
    if (q < 2) return false;
    long long d = 2;
    while (q % d) ++d;
    int e = 0;
    long long r = q;
    while (r % d == 0) { r /= d; ++e; }
    if (r != 1) return false;
    if (p) *p = int(d);
    if (k) *k = e;
    return true;
}

// Field sizes used as interpolation nodes for point counts, smallest first.
inline const std::vector<int>& sample_field_sizes() {
    static const std::vector<int> s{2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29, 31, 32, 37, 41, 43, 47};
    return s;
}

// Newton interpolation over the rationals through the first bound+1 samples;
// any further samples must lie on the same polynomial.
inline QPoly interpolate(const std::vector<std::pair<Int, Int>>& samples, int degree_bound) {
    if (degree_bound < 0) fail("InsufficientSamples", "negative degree bound");
    if ((int)samples.size() < degree_bound + 1)
        fail("InsufficientSamples", std::to_string(samples.size()) + " samples for degree " +
                                        std::to_string(degree_bound));
    std::set<Int> seen;
    for (auto& s : samples)
        if (!seen.insert(s.first).second) fail("InsufficientSamples", "repeated sample point");
    int m = degree_bound + 1;
    std::vector<Rat> xs(m), dd(m);
    for (int i = 0; i < m; ++i) {
        xs[i] = Rat(samples[i].first);
        dd[i] = Rat(samples[i].second);
    }
    for (int j = 1; j < m; ++j)
        for (int i = m - 1; i >= j; --i) dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - j]);
    // expand Newton form into monomial coefficients
    std::vector<Rat> coef(m, Rat(0));
    for (int i = m - 1; i >= 0; --i) {
        // coef = coef*(x - xs[i]) + dd[i]
        std::vector<Rat> next(m, Rat(0));
        for (int k = 0; k < m; ++k) {
            if (coef[k] == 0) continue;
            if (k + 1 < m) next[k + 1] += coef[k];
            next[k] -= coef[k] * xs[i];
        }
        next[0] += dd[i];
        coef = std::move(next);
    }
    QPoly r;
    for (int k = 0; k < m; ++k) {
        if (denominator(coef[k]) != 1)
            fail("NonIntegral", "coefficient of q^" + std::to_string(k) + " is " + coef[k].str());
        r.add_term(k, numerator(coef[k]));
    }
    for (size_t i = m; i < samples.size(); ++i)
        if (r.eval(samples[i].first) != samples[i].second)
            fail("Inconsistent", "sample at q=" + samples[i].first.str() + " off the degree-" +
                                    std::to_string(degree_bound) + " interpolant " + r.str());
    return r;
}

// Exact value of a Laurent polynomial at v = sqrt(q), returned as (a, b)
// meaning a + b*sqrt(q).
inline std::pair<Rat, Rat> eval_sqrt(const LaurentPoly& p, const Int& q) {
    Rat a = 0, b = 0;
    for (auto& [e, c] : p.terms()) {
        int h = e >= 0 ? e / 2 : -((-e + 1) / 2);  // floor(e/2)
        bool odd = (e - 2 * h) == 1;
        Rat qp = h >= 0 ? Rat(ipow(q, unsigned(h))) : Rat(Int(1), ipow(q, unsigned(-h)));
        (odd ? b : a) += Rat(c) * qp;
    }
    return {a, b};
}

}  // namespace mira
