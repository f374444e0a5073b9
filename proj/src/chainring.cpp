#include "btstrata/chainring.hpp"

#include <map>
#include <mutex>

namespace btstrata::ring {

namespace {
uint64_t ipow(int64_t b, int e) {
    uint64_t r = 1;
    for (int i = 0; i < e; ++i) r *= uint64_t(b);
    return r;
}
}  // namespace

GaloisRing::GaloisRing(int64_t p, int d, int m) : p_(p), d_(d), m_(m) {
    if (d < 1 || m < 1 || m > kMaxM) throw BadParameters("GaloisRing(p,d,m)");
    pd_ = ipow(p, d);
    kappa_ = gf::Field::make(p, 1, m);
    modulus_ = kappa_->modulus();  // integer lift, coefficients in [0,p)

    // reductions of y^m .. y^(2m-2) modulo (g, p^d)
    yred_.assign(std::max(0, m - 1), std::vector<int64_t>(m, 0));
    std::vector<int64_t> cur(m);
    for (int i = 0; i < m; ++i) cur[i] = (pd_ - uint64_t(modulus_[i]) % pd_) % pd_;
    for (int k = 0; k < m - 1; ++k) {
        yred_[k] = cur;
        std::vector<int64_t> nxt(m, 0);
        int64_t top = cur[m - 1];
        for (int i = m - 1; i >= 1; --i) nxt[i] = cur[i - 1];
        nxt[0] = 0;
        if (top) {
            for (int i = 0; i < m; ++i) {
                int64_t t = nxt[i] - top * modulus_[i] % int64_t(pd_);
                nxt[i] = ((t % int64_t(pd_)) + int64_t(pd_)) % int64_t(pd_);
            }
        }
        cur = nxt;
    }

    if (m == 1 && pd_ <= 1024) {
        tables_ = true;
        mul_t_.resize(pd_ * pd_);
        for (uint64_t a = 0; a < pd_; ++a)
            for (uint64_t b = 0; b <= a; ++b) {
                uint32_t v = uint32_t(a * b % pd_);
                mul_t_[a * pd_ + b] = v;
                mul_t_[b * pd_ + a] = v;
            }
        vp_t_.assign(pd_, uint8_t(d_));
        for (uint64_t a = 1; a < pd_; ++a) {
            int v = 0;
            uint64_t x = a;
            while (x % uint64_t(p_) == 0) {
                x /= uint64_t(p_);
                ++v;
            }
            vp_t_[a] = uint8_t(v);
        }
        divp_t_.assign(pd_, 0);
        for (uint64_t a = 0; a < pd_; a += uint64_t(p_))
            divp_t_[a] = uint32_t(a / uint64_t(p_));
    }

    // sigma(y): the root of g congruent to y^p mod p, by Hensel lifting.
    if (m == 1) {
        sigma_y_pow_ = {one()};
    } else {
        GRElem y{};
        y.c[1] = 1;
        // starting point y^p, then Hensel toward the root of g above it
        GRElem r = one();
        GRElem base = y;
        int64_t e = p;
        while (e) {
            if (e & 1) r = mul(r, base);
            base = mul(base, base);
            e >>= 1;
        }
        auto eval_g = [&](const GRElem& x) {
            GRElem v = from_int(modulus_[m]);  // leading coeff 1
            for (int i = m - 1; i >= 0; --i) v = add(mul(v, x), from_int(modulus_[i]));
            return v;
        };
        auto eval_gprime = [&](const GRElem& x) {
            GRElem v = mul_int(from_int(modulus_[m]), m);
            for (int i = m - 1; i >= 1; --i) v = add(mul(v, x), mul_int(from_int(modulus_[i]), i));
            return v;
        };
        for (int it = 0; it < d + 2; ++it) {
            GRElem gv = eval_g(r);
            if (is_zero(gv)) break;
            r = sub(r, mul(gv, inv(eval_gprime(r))));
        }
        if (!is_zero(eval_g(r))) throw Error("Hensel lift for sigma failed");
        sigma_y_pow_.resize(m);
        sigma_y_pow_[0] = one();
        for (int j = 1; j < m; ++j) sigma_y_pow_[j] = mul(sigma_y_pow_[j - 1], r);
    }
}

GRElem GaloisRing::one() const {
    GRElem e{};
    e.c[0] = 1;
    return e;
}

GRElem GaloisRing::from_int(int64_t v) const {
    GRElem e{};
    int64_t t = ((v % int64_t(pd_)) + int64_t(pd_)) % int64_t(pd_);
    e.c[0] = uint32_t(t);
    return e;
}




GRElem GaloisRing::mul_general(const GRElem& a, const GRElem& b) const {
    uint64_t acc[2 * kMaxM - 1] = {0};
    for (int i = 0; i < m_; ++i) {
        if (!a.c[i]) continue;
        for (int j = 0; j < m_; ++j)
            acc[i + j] = (acc[i + j] + uint64_t(a.c[i]) * b.c[j]) % pd_;
    }
    GRElem r{};
    for (int i = 0; i < m_; ++i) r.c[i] = uint32_t(acc[i]);
    for (int k = m_; k <= 2 * m_ - 2; ++k) {
        uint64_t t = acc[k];
        if (!t) continue;
        const auto& row = yred_[k - m_];
        for (int i = 0; i < m_; ++i)
            r.c[i] = uint32_t((r.c[i] + t * uint64_t(row[i])) % pd_);
    }
    return r;
}

GRElem GaloisRing::mul_int(const GRElem& a, int64_t k) const {
    GRElem r{};
    uint64_t kk = uint64_t(((k % int64_t(pd_)) + int64_t(pd_)) % int64_t(pd_));
    for (int i = 0; i < m_; ++i) r.c[i] = uint32_t(uint64_t(a.c[i]) * kk % pd_);
    return r;
}


int GaloisRing::vp_general(const GRElem& a) const {
    int best = d_;
    for (int i = 0; i < m_; ++i) {
        if (!a.c[i]) continue;
        int v = 0;
        uint64_t x = a.c[i];
        while (x % uint64_t(p_) == 0) {
            x /= uint64_t(p_);
            ++v;
        }
        best = std::min(best, v);
    }
    return best;
}

GRElem GaloisRing::inv(const GRElem& a) const {
    if (!is_unit(a)) throw DivisionByZero("GaloisRing::inv of non-unit");
    // Newton iteration from the residue-field inverse
    uint32_t rc = resid_code(a);
    GRElem x = lift_code(kappa_->inv(rc));
    for (int it = 0; it < d_ + 1; ++it) {
        GRElem t = sub(from_int(2), mul(a, x));
        x = mul(x, t);
    }
    return x;
}

GRElem GaloisRing::sigma(const GRElem& a) const {
    if (m_ == 1) return a;
    GRElem r{};
    for (int j = 0; j < m_; ++j) {
        if (!a.c[j]) continue;
        r = add(r, mul_int(sigma_y_pow_[j], int64_t(a.c[j])));
    }
    return r;
}

GRElem GaloisRing::sigma_iter(const GRElem& a, int k) const {
    GRElem r = a;
    for (int i = 0; i < k; ++i) r = sigma(r);
    return r;
}

GRElem GaloisRing::divide_p_general(const GRElem& a) const {
    GRElem r{};
    for (int i = 0; i < m_; ++i) {
        if (a.c[i] % uint32_t(p_) != 0) throw Error("divide_p: not divisible");
        r.c[i] = a.c[i] / uint32_t(p_);
    }
    return r;
}

GRElem GaloisRing::reduce_mod_p(const GRElem& a, int k) const {
    if (k >= d_) return a;
    if (k <= 0) return {};
    uint32_t pk = uint32_t(ipow(p_, k));
    GRElem r{};
    for (int i = 0; i < m_; ++i) r.c[i] = a.c[i] % pk;
    return r;
}

uint32_t GaloisRing::resid_code(const GRElem& a) const {
    std::vector<int64_t> c(m_);
    for (int i = 0; i < m_; ++i) c[i] = int64_t(a.c[i] % uint32_t(p_));
    return kappa_->from_coeffs(c);
}

GRElem GaloisRing::lift_code(uint32_t code) const {
    auto c = kappa_->coeffs(code);
    GRElem r{};
    for (int i = 0; i < m_; ++i) r.c[i] = uint32_t(c[i]);
    return r;
}

GRElem GaloisRing::teichmueller(uint32_t code) const {
    GRElem t = lift_code(code);
    uint64_t e = ipow(p_, m_);
    for (int it = 0; it < d_ + 1; ++it) {
        // t <- t^(p^m)
        GRElem acc = one(), base = t;
        uint64_t k = e;
        while (k) {
            if (k & 1) acc = mul(acc, base);
            base = mul(base, base);
            k >>= 1;
        }
        if (acc == t) break;
        t = acc;
    }
    return t;
}

uint64_t GaloisRing::encode(const GRElem& a) const {
    uint64_t v = 0;
    for (int i = m_ - 1; i >= 0; --i) v = v * pd_ + a.c[i];
    return v;
}

GRElem GaloisRing::decode(uint64_t v) const {
    GRElem r{};
    for (int i = 0; i < m_; ++i) {
        r.c[i] = uint32_t(v % pd_);
        v /= pd_;
    }
    return r;
}

ChainRing::ChainRing(int64_t p, int N, int m)
    : p_(p), N_(N), m_(m), gr_(p, N / 2, m) {
    if (N < 2 || N % 2 != 0) throw BadParameters("N must be even and >= 2");
}

ChainRingPtr ChainRing::make(int64_t p, int N, int m) {
    static std::map<std::tuple<int64_t, int, int>, std::weak_ptr<const ChainRing>> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lk(mu);
    auto key = std::make_tuple(p, N, m);
    if (auto it = cache.find(key); it != cache.end())
        if (auto sp = it->second.lock()) return sp;
    ChainRingPtr r(new ChainRing(p, N, m));
    cache[key] = r;
    return r;
}

uint64_t ChainRing::size() const { return ipow(p_, N_ * m_); }




CRElem ChainRing::conjugate(const CRElem& a) const { return {a.a0, gr_.neg(a.a1)}; }

CRElem ChainRing::sigma(const CRElem& a) const {
    return {gr_.sigma(a.a0), gr_.sigma(a.a1)};
}

CRElem ChainRing::sigma_iter(const CRElem& a, int k) const {
    int steps = ((k % m_) + m_) % m_;
    CRElem r = a;
    for (int i = 0; i < steps; ++i) r = sigma(r);
    return r;
}


std::optional<int> ChainRing::pi_valuation(const CRElem& a) const {
    if (is_zero(a)) return std::nullopt;  // infinity
    return val(a);
}

CRElem ChainRing::inv_unit(const CRElem& a) const {
    if (val(a) != 0) throw DivisionByZero("inv of non-unit");
    // (a0 + a1 pi)^{-1} = (a0 - a1 pi) / (a0^2 - p a1^2)
    GRElem norm = gr_.sub(gr_.mul(a.a0, a.a0), gr_.mul_int(gr_.mul(a.a1, a.a1), p_));
    GRElem s = gr_.inv(norm);
    return {gr_.mul(a.a0, s), gr_.neg(gr_.mul(a.a1, s))};
}

CRElem ChainRing::mul_pi_pow(const CRElem& a, int k) const {
    CRElem r = a;
    for (int i = 0; i < k; ++i) r = {gr_.mul_int(r.a1, p_), r.a0};
    return r;
}

CRElem ChainRing::shift_down(const CRElem& a, int v) const {
    CRElem r = a;
    for (int i = 0; i < v; ++i) r = {r.a1, gr_.divide_p(r.a0)};
    return r;
}

CRElem ChainRing::canonical_mod_pi_pow(const CRElem& a, int v) const {
    if (v <= 0) return zero();
    if (v >= N_) return a;
    int w0 = (v + 1) / 2;  // a0 kept mod p^ceil(v/2)
    int w1 = v / 2;        // a1 kept mod p^floor(v/2)
    return {gr_.reduce_mod_p(a.a0, w0), gr_.reduce_mod_p(a.a1, w1)};
}

CRElem ChainRing::excess_over_pi_pow(const CRElem& a, int v) const {
    CRElem diff = sub(a, canonical_mod_pi_pow(a, v));
    return shift_down(diff, v);
}

uint64_t ChainRing::encode(const CRElem& a) const {
    uint64_t g = gr_.pd();
    uint64_t gm = 1;
    for (int i = 0; i < m_; ++i) gm *= g;
    return gr_.encode(a.a0) + gm * gr_.encode(a.a1);
}

CRElem ChainRing::decode(uint64_t v) const {
    uint64_t g = gr_.pd();
    uint64_t gm = 1;
    for (int i = 0; i < m_; ++i) gm *= g;
    return {gr_.decode(v % gm), gr_.decode(v / gm)};
}

std::vector<CRElem> ChainRing::enumerate() const {
    if (size() > 1000000) throw BoundExceeded("chain ring too large to enumerate");
    std::vector<CRElem> v;
    v.reserve(size());
    for (uint64_t i = 0; i < size(); ++i) v.push_back(decode(i));
    return v;
}

}  // namespace btstrata::ring
