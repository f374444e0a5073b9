#include "btstrata/gf.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace btstrata::gf {

namespace {

using Poly = std::vector<int64_t>;  // coefficients, c[0] = constant term

int64_t mod(int64_t a, int64_t p) {
    int64_t r = a % p;
    return r < 0 ? r + p : r;
}

void trim(Poly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& f, int64_t p) {
    if (a.empty() || b.empty()) return {};
    Poly c(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j)
            c[i + j] = mod(c[i + j] + a[i] * b[j], p);
    // reduce mod monic f
    int d = int(f.size()) - 1;
    for (int i = int(c.size()) - 1; i >= d; --i) {
        int64_t t = c[i];
        if (t == 0) continue;
        c[i] = 0;
        for (int j = 0; j < d; ++j) c[i - d + j] = mod(c[i - d + j] - t * f[j], p);
    }
    c.resize(d);
    trim(c);
    return c;
}

Poly poly_powmod(Poly base, uint64_t e, const Poly& f, int64_t p) {
    Poly r = {1};
    while (e) {
        if (e & 1) r = poly_mulmod(r, base, f, p);
        base = poly_mulmod(base, base, f, p);
        e >>= 1;
    }
    return r;
}

Poly poly_gcd(Poly a, Poly b, int64_t p) {
    auto inv_mod = [&](int64_t x) {
        int64_t r = 1, e = p - 2, base = mod(x, p);
        while (e) {
            if (e & 1) r = mod(r * base, p);
            base = mod(base * base, p);
            e >>= 1;
        }
        return r;
    };
    trim(a);
    trim(b);
    while (!b.empty()) {
        // a mod b
        int64_t lead_inv = inv_mod(b.back());
        while (a.size() >= b.size() && !a.empty()) {
            int64_t t = mod(a.back() * lead_inv, p);
            size_t off = a.size() - b.size();
            for (size_t j = 0; j < b.size(); ++j)
                a[off + j] = mod(a[off + j] - t * b[j], p);
            trim(a);
            if (a.size() < b.size()) break;
        }
        std::swap(a, b);
    }
    return a;
}

uint64_t ipow(int64_t b, int e) {
    uint64_t r = 1;
    for (int i = 0; i < e; ++i) r *= uint64_t(b);
    return r;
}

bool poly_irreducible(const Poly& f, int64_t p) {
    int d = int(f.size()) - 1;
    if (d == 1) return true;
    Poly x = {0, 1};
    // x^(p^d) == x mod f
    Poly t = x;
    for (int i = 0; i < d; ++i) t = poly_powmod(t, uint64_t(p), f, p);
    Poly diff = t;
    diff.resize(std::max<size_t>(diff.size(), 2), 0);
    diff[1] = mod(diff[1] - 1, p);
    trim(diff);
    if (!diff.empty()) return false;
    // gcd(x^(p^(d/l)) - x, f) = 1 for prime divisors l of d
    for (int l = 2; l <= d; ++l) {
        if (d % l != 0) continue;
        bool is_prime = true;
        for (int k = 2; k * k <= l; ++k)
            if (l % k == 0) is_prime = false;
        if (!is_prime) continue;
        Poly s = x;
        for (int i = 0; i < d / l; ++i) s = poly_powmod(s, uint64_t(p), f, p);
        Poly g = s;
        g.resize(std::max<size_t>(g.size(), 2), 0);
        g[1] = mod(g[1] - 1, p);
        trim(g);
        Poly gc = poly_gcd(g, f, p);
        if (gc.size() != 1) return false;
    }
    return true;
}

std::vector<uint64_t> prime_factors(uint64_t n) {
    std::vector<uint64_t> fs;
    for (uint64_t k = 2; k * k <= n; ++k) {
        if (n % k == 0) {
            fs.push_back(k);
            while (n % k == 0) n /= k;
        }
    }
    if (n > 1) fs.push_back(n);
    return fs;
}

}  // namespace

std::vector<int64_t> find_irreducible(int64_t p, int degree) {
    if (degree == 1) return {0, 1};  // x
    uint64_t limit = ipow(p, degree);
    for (uint64_t v = 0; v < limit; ++v) {
        Poly f(degree + 1, 0);
        uint64_t t = v;
        for (int i = 0; i < degree; ++i) {
            f[i] = int64_t(t % uint64_t(p));
            t /= uint64_t(p);
        }
        f[degree] = 1;
        if (poly_irreducible(f, p)) return f;
    }
    throw Error("no irreducible polynomial found");  // unreachable
}

Field::Field(int64_t p, int r, int m, uint64_t enumeration_bound)
    : p_(p), r_(r), m_(m), deg_(r * m), enum_bound_(enumeration_bound) {
    if (p < 3 || p % 2 == 0) throw BadParameters("p must be an odd prime");
    for (int64_t k = 3; k * k <= p; k += 2)
        if (p % k == 0) throw BadParameters("p must be an odd prime");
    if (r < 1 || m < 1) throw BadParameters("r, m must be >= 1");
    q_ = ipow(p, r);
    size_ = ipow(p, deg_);
    if (size_ > enum_bound_) throw BoundExceeded("field size over enumeration bound");
    modulus_ = find_irreducible(p, deg_);
    one_ = 1;
    // reductions of x^deg .. x^(2deg-2)
    xred_.assign(size_t(deg_ - 1) * deg_, 0);
    Poly cur(modulus_.begin(), modulus_.end() - 1);
    for (auto& c : cur) c = mod(-c, p);
    for (int k = 0; k < deg_ - 1; ++k) {
        for (int i = 0; i < int(cur.size()) && i < deg_; ++i) xred_[size_t(k) * deg_ + i] = cur[i];
        // multiply cur by x, reduce
        Poly nxt(deg_, 0);
        int64_t top = (int(cur.size()) == deg_) ? cur[deg_ - 1] : 0;
        for (int i = deg_ - 1; i >= 1; --i) nxt[i] = (i - 1 < int(cur.size())) ? cur[i - 1] : 0;
        nxt[0] = 0;
        if (top != 0)
            for (int i = 0; i < deg_; ++i) nxt[i] = mod(nxt[i] - top * modulus_[i], p);
        cur = nxt;
    }
    if (size_ <= 2048) {
        tables_ = true;
        add_t_.resize(size_ * size_);
        mul_t_.resize(size_ * size_);
        neg_t_.resize(size_);
        for (uint32_t a = 0; a < size_; ++a) {
            // digitwise add/neg
            for (uint32_t b = 0; b <= a; ++b) {
                uint32_t s = 0, pw = 1, x = a, y = b;
                for (int i = 0; i < deg_; ++i) {
                    s += uint32_t((x % p_ + y % p_) % p_) * pw;
                    x /= uint32_t(p_);
                    y /= uint32_t(p_);
                    pw *= uint32_t(p_);
                }
                add_t_[size_t(a) * size_ + b] = s;
                add_t_[size_t(b) * size_ + a] = s;
                uint32_t pr = mul_slow(a, b);
                mul_t_[size_t(a) * size_ + b] = pr;
                mul_t_[size_t(b) * size_ + a] = pr;
            }
            uint32_t s = 0, pw = 1, x = a;
            for (int i = 0; i < deg_; ++i) {
                s += uint32_t((p_ - x % p_) % p_) * pw;
                x /= uint32_t(p_);
                pw *= uint32_t(p_);
            }
            neg_t_[a] = s;
        }
        inv_t_.assign(size_, 0);
        for (uint32_t a = 1; a < size_; ++a) {
            if (inv_t_[a]) continue;
            uint32_t b = pow(a, size_ - 2);
            inv_t_[a] = b;
            inv_t_[b] = a;
        }
        frob_t_.resize(size_);
        for (uint32_t a = 0; a < size_; ++a) frob_t_[a] = pow(a, q_);
    }
}

FieldPtr Field::make(int64_t p, int r, int m, uint64_t enumeration_bound) {
    static std::map<std::tuple<int64_t, int, int>, std::weak_ptr<const Field>> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lk(mu);
    auto key = std::make_tuple(p, r, m);
    if (auto it = cache.find(key); it != cache.end())
        if (auto sp = it->second.lock()) return sp;
    FieldPtr f(new Field(p, r, m, enumeration_bound));
    cache[key] = f;
    return f;
}

uint32_t Field::add(uint32_t a, uint32_t b) const {
    if (tables_) return add_t_[size_t(a) * size_ + b];
    uint32_t s = 0, pw = 1;
    for (int i = 0; i < deg_; ++i) {
        s += uint32_t((a % p_ + b % p_) % p_) * pw;
        a /= uint32_t(p_);
        b /= uint32_t(p_);
        pw *= uint32_t(p_);
    }
    return s;
}

uint32_t Field::neg(uint32_t a) const {
    if (tables_) return neg_t_[a];
    uint32_t s = 0, pw = 1;
    for (int i = 0; i < deg_; ++i) {
        s += uint32_t((p_ - a % p_) % p_) * pw;
        a /= uint32_t(p_);
        pw *= uint32_t(p_);
    }
    return s;
}

uint32_t Field::sub(uint32_t a, uint32_t b) const { return add(a, neg(b)); }

uint32_t Field::mul_slow(uint32_t a, uint32_t b) const {
    // schoolbook product of digit vectors, reduced via xred_
    int64_t acc[64] = {0};
    uint32_t x = a;
    std::vector<int64_t> ac(deg_), bc(deg_);
    for (int i = 0; i < deg_; ++i) {
        ac[i] = x % p_;
        x /= uint32_t(p_);
    }
    x = b;
    for (int i = 0; i < deg_; ++i) {
        bc[i] = x % p_;
        x /= uint32_t(p_);
    }
    for (int i = 0; i < deg_; ++i) {
        if (!ac[i]) continue;
        for (int j = 0; j < deg_; ++j) acc[i + j] += ac[i] * bc[j];
    }
    std::vector<int64_t> res(deg_, 0);
    for (int i = 0; i < deg_; ++i) res[i] = mod(acc[i], p_);
    for (int k = deg_; k <= 2 * deg_ - 2; ++k) {
        int64_t t = mod(acc[k], p_);
        if (!t) continue;
        const int64_t* row = &xred_[size_t(k - deg_) * deg_];
        for (int i = 0; i < deg_; ++i) res[i] = mod(res[i] + t * row[i], p_);
    }
    uint32_t code = 0, pw = 1;
    for (int i = 0; i < deg_; ++i) {
        code += uint32_t(res[i]) * pw;
        pw *= uint32_t(p_);
    }
    return code;
}

uint32_t Field::mul(uint32_t a, uint32_t b) const {
    if (tables_) return mul_t_[size_t(a) * size_ + b];
    return mul_slow(a, b);
}

uint32_t Field::pow(uint32_t a, uint64_t e) const {
    uint32_t r = one_;
    while (e) {
        if (e & 1) r = mul(r, a);
        a = mul(a, a);
        e >>= 1;
    }
    return r;
}

uint32_t Field::inv(uint32_t a) const {
    if (a == 0) throw DivisionByZero();
    if (tables_) return inv_t_[a];
    return pow(a, size_ - 2);
}

uint32_t Field::frobenius(uint32_t a) const {
    if (tables_) return frob_t_[a];
    return pow(a, q_);
}

uint32_t Field::frobenius_iter(uint32_t a, int k) const {
    for (int i = 0; i < k; ++i) a = frobenius(a);
    return a;
}

uint32_t Field::from_int(int64_t c) const { return uint32_t(mod(c, p_)); }

uint32_t Field::from_coeffs(const std::vector<int64_t>& c) const {
    uint32_t code = 0, pw = 1;
    for (int i = 0; i < deg_; ++i) {
        int64_t v = (i < int(c.size())) ? mod(c[i], p_) : 0;
        code += uint32_t(v) * pw;
        pw *= uint32_t(p_);
    }
    return code;
}

std::vector<int64_t> Field::coeffs(uint32_t a) const {
    std::vector<int64_t> c(deg_);
    for (int i = 0; i < deg_; ++i) {
        c[i] = int64_t(a % uint32_t(p_));
        a /= uint32_t(p_);
    }
    return c;
}

uint64_t Field::mult_order(uint32_t a) const {
    if (a == 0) throw DivisionByZero("order of zero");
    uint64_t n = size_ - 1;
    uint64_t ord = n;
    for (uint64_t f : prime_factors(n)) {
        while (ord % f == 0 && pow(a, ord / f) == one_) ord /= f;
    }
    return ord;
}

uint32_t Field::generator() const {
    uint64_t n = size_ - 1;
    auto fs = prime_factors(n);
    for (uint32_t a = 1; a < size_; ++a) {
        bool ok = true;
        for (uint64_t f : fs)
            if (pow(a, n / f) == one_) {
                ok = false;
                break;
            }
        if (ok) return a;
    }
    throw Error("no generator");  // unreachable
}

std::vector<uint32_t> Field::enumerate() const {
    if (size_ > enum_bound_) throw BoundExceeded();
    std::vector<uint32_t> v(size_);
    for (uint32_t i = 0; i < size_; ++i) v[i] = i;
    return v;
}

std::vector<uint32_t> Field::base_field_elements() const {
    if (size_ > enum_bound_) throw BoundExceeded();
    std::vector<uint32_t> v;
    v.reserve(q_);
    for (uint32_t a = 0; a < size_; ++a)
        if (frobenius(a) == a) v.push_back(a);
    return v;
}

}  // namespace btstrata::gf
