#pragma once

#include <array>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "dmod/error.hpp"
#include "dmod/rat.hpp"

namespace dmod {

// ---------------------------------------------------------------------------
// Dense univariate polynomials over Q. Used where Euclidean structure
// matters (gcds, Smith normal form, indicial/edge polynomials).
// ---------------------------------------------------------------------------

struct QPoly {
    std::vector<Rat> a;  // a[i] * x^i, no trailing zeros

    QPoly() = default;
    explicit QPoly(Rat c) {
        if (c != 0) a.push_back(std::move(c));
    }
    QPoly(std::initializer_list<Rat> cs) : a(cs) { strip(); }

    void strip() {
        while (!a.empty() && a.back() == 0) a.pop_back();
    }
    bool zero() const { return a.empty(); }
    long deg() const { return static_cast<long>(a.size()) - 1; }
    Rat coeff(long i) const { return (i >= 0 && i < (long)a.size()) ? a[i] : Rat(0); }
    Rat lc() const { return a.empty() ? Rat(0) : a.back(); }

    static QPoly x() { return QPoly{Rat(0), Rat(1)}; }

    Rat eval(const Rat& v) const {
        Rat r(0);
        for (auto it = a.rbegin(); it != a.rend(); ++it) r = r * v + *it;
        return r;
    }

    bool operator==(const QPoly& o) const { return a == o.a; }

    std::string str(const char* var = "x") const {
        if (a.empty()) return "0";
        std::ostringstream os;
        for (long i = deg(); i >= 0; --i) {
            if (a[i] == 0) continue;
            if (os.tellp() > 0) os << " + ";
            os << "(" << rat_str(a[i]) << ")";
            if (i > 0) os << var << "^" << i;
        }
        return os.str();
    }
};

inline QPoly operator+(const QPoly& p, const QPoly& q) {
    QPoly r = p;
    if (r.a.size() < q.a.size()) r.a.resize(q.a.size());
    for (size_t i = 0; i < q.a.size(); ++i) r.a[i] += q.a[i];
    r.strip();
    return r;
}

inline QPoly operator-(const QPoly& p) {
    QPoly r = p;
    for (auto& c : r.a) c = -c;
    return r;
}

inline QPoly operator-(const QPoly& p, const QPoly& q) { return p + (-q); }

inline QPoly operator*(const QPoly& p, const QPoly& q) {
    if (p.zero() || q.zero()) return QPoly();
    QPoly r;
    r.a.assign(p.a.size() + q.a.size() - 1, Rat(0));
    for (size_t i = 0; i < p.a.size(); ++i)
        for (size_t j = 0; j < q.a.size(); ++j) r.a[i + j] += p.a[i] * q.a[j];
    r.strip();
    return r;
}

inline QPoly operator*(const QPoly& p, const Rat& k) {
    QPoly r = p;
    for (auto& c : r.a) c *= k;
    r.strip();
    return r;
}

inline QPoly monic(const QPoly& p) {
    if (p.zero()) return p;
    return p * (Rat(1) / p.lc());
}

inline std::pair<QPoly, QPoly> divmod(const QPoly& p, const QPoly& d) {
    if (d.zero()) fail(errc::bad_input, "polynomial division by zero");
    QPoly q, r = p;
    while (!r.zero() && r.deg() >= d.deg()) {
        long k = r.deg() - d.deg();
        Rat c = r.lc() / d.lc();
        QPoly t;
        t.a.assign(k + 1, Rat(0));
        t.a[k] = c;
        q = q + t;
        r = r - t * d;
    }
    return {q, r};
}

inline QPoly poly_gcd(QPoly p, QPoly q) {
    while (!q.zero()) {
        QPoly r = divmod(p, q).second;
        p = q;
        q = r;
    }
    return monic(p);
}

// ---------------------------------------------------------------------------
// Sparse multivariate polynomials with a fixed small arity. BiPoly carries
// the bivariate power tables; the three-variable instance backs identity
// checks that quantify over two exponents at once.
// ---------------------------------------------------------------------------

template <int N>
struct SparsePoly {
    using Key = std::array<int, N>;
    std::map<Key, Rat> t;

    static SparsePoly con(Rat c) {
        SparsePoly p;
        if (c != 0) p.t[Key{}] = std::move(c);
        return p;
    }
    static SparsePoly var(int i, Rat c = Rat(1)) {
        SparsePoly p;
        if (c != 0) {
            Key k{};
            k[i] = 1;
            p.t[k] = std::move(c);
        }
        return p;
    }

    bool zero() const { return t.empty(); }

    void add_term(const Key& k, const Rat& v) {
        if (v == 0) return;
        auto [it, fresh] = t.emplace(k, v);
        if (!fresh) {
            it->second += v;
            if (it->second == 0) t.erase(it);
        }
    }

    long deg_in(int i) const {
        long d = 0;
        for (const auto& [k, v] : t) d = std::max(d, (long)k[i]);
        return d;
    }

    Rat eval(const std::array<Rat, N>& x) const {
        Rat r(0);
        for (const auto& [k, v] : t) {
            Rat term = v;
            for (int i = 0; i < N; ++i) term *= pow_rat(x[i], k[i]);
            r += term;
        }
        return r;
    }

    bool operator==(const SparsePoly& o) const { return t == o.t; }

    std::string str(const std::array<const char*, N>& names) const {
        if (t.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [k, v] : t) {
            if (!first) os << " + ";
            os << "(" << rat_str(v) << ")";
            for (int i = 0; i < N; ++i)
                if (k[i] > 0) os << names[i] << "^" << k[i];
            first = false;
        }
        return os.str();
    }
};

template <int N>
SparsePoly<N> operator+(const SparsePoly<N>& p, const SparsePoly<N>& q) {
    SparsePoly<N> r = p;
    for (const auto& [k, v] : q.t) r.add_term(k, v);
    return r;
}

template <int N>
SparsePoly<N> operator-(const SparsePoly<N>& p) {
    SparsePoly<N> r = p;
    for (auto& [k, v] : r.t) v = -v;
    return r;
}

template <int N>
SparsePoly<N> operator-(const SparsePoly<N>& p, const SparsePoly<N>& q) {
    return p + (-q);
}

template <int N>
SparsePoly<N> operator*(const SparsePoly<N>& p, const SparsePoly<N>& q) {
    SparsePoly<N> r;
    for (const auto& [kp, vp] : p.t)
        for (const auto& [kq, vq] : q.t) {
            typename SparsePoly<N>::Key k;
            for (int i = 0; i < N; ++i) k[i] = kp[i] + kq[i];
            r.add_term(k, vp * vq);
        }
    return r;
}

template <int N>
SparsePoly<N> operator*(const SparsePoly<N>& p, const Rat& c) {
    SparsePoly<N> r;
    for (const auto& [k, v] : p.t) r.add_term(k, v * c);
    return r;
}

using BiPoly = SparsePoly<2>;
using TriPoly = SparsePoly<3>;

// Substitute each source variable by an affine form in M target variables.
template <int N, int M>
SparsePoly<M> compose_affine(const SparsePoly<N>& p,
                             const std::array<SparsePoly<M>, N>& forms) {
    // Cache powers of each substituted form.
    std::array<std::vector<SparsePoly<M>>, N> pw;
    for (int i = 0; i < N; ++i) pw[i].push_back(SparsePoly<M>::con(Rat(1)));
    SparsePoly<M> r;
    for (const auto& [k, v] : p.t) {
        SparsePoly<M> term = SparsePoly<M>::con(v);
        for (int i = 0; i < N; ++i) {
            while ((long)pw[i].size() <= k[i]) pw[i].push_back(pw[i].back() * forms[i]);
            term = term * pw[i][k[i]];
        }
        r = r + term;
    }
    return r;
}

// Univariate -> multivariate composition u(L) by Horner.
template <int M>
SparsePoly<M> compose_qpoly(const QPoly& u, const SparsePoly<M>& L) {
    SparsePoly<M> r;
    for (long i = u.deg(); i >= 0; --i) r = r * L + SparsePoly<M>::con(u.coeff(i));
    return r;
}

namespace detail {
// binomial(a+1, n+1) as a polynomial in variable `var` of a BiPoly.
inline BiPoly binom_a_plus_1(int n, int var) {
    BiPoly r = BiPoly::con(Rat(1));
    Rat fact(1);
    for (int i = 0; i <= n; ++i) {
        // factors (a+1), a, (a-1), ..., (a+1-n)
        r = r * (BiPoly::var(var) + BiPoly::con(Rat(1 - i)));
        fact *= (i + 1);
    }
    for (auto& [k, v] : r.t) v /= fact;
    return r;
}
}  // namespace detail

// Discrete antiderivative in the given variable: returns q with
// q(0,b) = 0 and q(a,b) - q(a-1,b) = p(a,b) identically. Computed through
// the falling-factorial (binomial) basis: write p(j) = sum c_n C(j,n) with
// c_n the forward differences of p at 0; then sum_{j=1..a} p(j) =
// sum c_n C(a+1, n+1) - c_0.
inline BiPoly discrete_antiderivative(const BiPoly& p, int var = 0) {
    int other = 1 - var;
    long d = p.deg_in(var);

    std::array<BiPoly, 2> shift_up;
    shift_up[var] = BiPoly::var(var) + BiPoly::con(Rat(1));
    shift_up[other] = BiPoly::var(other);

    BiPoly q;
    BiPoly diff = p;  // Delta^n p, evaluated progressively
    for (long n = 0; n <= d; ++n) {
        // c_n(b) = (Delta^n p)(0, b)
        BiPoly cn;
        for (const auto& [k, v] : diff.t)
            if (k[var] == 0) cn.add_term(k, v);
        if (!cn.zero()) {
            q = q + cn * detail::binom_a_plus_1(static_cast<int>(n), var);
            if (n == 0) q = q - cn;
        }
        diff = compose_affine<2, 2>(diff, shift_up) - diff;
    }
    return q;
}

}  // namespace dmod
