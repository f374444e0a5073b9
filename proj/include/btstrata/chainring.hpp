#ifndef BTSTRATA_CHAINRING_HPP
#define BTSTRATA_CHAINRING_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "btstrata/errors.hpp"
#include "btstrata/gf.hpp"

namespace btstrata::ring {

// Truncated ramified ring R_{N,m} = W(F_{p^m})[pi] / (pi^2 - p, pi^N), N even.
// Witt coefficients live in the Galois ring GR(p^{N/2}, m), realized as
// Z/p^{N/2}[y]/(g) where g is the integer lift of the modulus used by
// gf::Field(p, 1, m); residue and lift maps are then coefficientwise.
// Elements are a0 + a1*pi with a0, a1 in the Galois ring.  The Galois
// conjugation sends pi to -pi; sigma lifts the residue Frobenius and
// fixes pi.

constexpr int kMaxM = 4;

// Galois-ring element: m coefficients mod p^d, fixed small storage.
struct GRElem {
    std::array<uint32_t, kMaxM> c{};
    bool operator==(const GRElem&) const = default;
};

class GaloisRing {
  public:
    GaloisRing(int64_t p, int d, int m);

    int64_t p() const { return p_; }
    int d() const { return d_; }
    int m() const { return m_; }
    uint64_t pd() const { return pd_; }  // p^d
    const gf::FieldPtr& residue_field() const { return kappa_; }

    GRElem zero() const { return {}; }
    GRElem one() const;
    GRElem from_int(int64_t v) const;
    GRElem add(const GRElem& a, const GRElem& b) const {
        GRElem r{};
        for (int i = 0; i < m_; ++i) {
            uint64_t s = uint64_t(a.c[i]) + b.c[i];
            r.c[i] = uint32_t(s >= pd_ ? s - pd_ : s);
        }
        return r;
    }
    GRElem neg(const GRElem& a) const {
        GRElem r{};
        for (int i = 0; i < m_; ++i) r.c[i] = a.c[i] ? uint32_t(pd_ - a.c[i]) : 0;
        return r;
    }
    GRElem sub(const GRElem& a, const GRElem& b) const { return add(a, neg(b)); }
    GRElem mul(const GRElem& a, const GRElem& b) const {
        if (tables_) {
            GRElem r{};
            r.c[0] = mul_t_[size_t(a.c[0]) * pd_ + b.c[0]];
            return r;
        }
        return mul_general(a, b);
    }
    GRElem mul_general(const GRElem& a, const GRElem& b) const;
    GRElem mul_int(const GRElem& a, int64_t k) const;
    bool is_zero(const GRElem& a) const {
        for (int i = 0; i < m_; ++i)
            if (a.c[i]) return false;
        return true;
    }
    bool is_unit(const GRElem& a) const { return resid_code(a) != 0; }
    GRElem inv(const GRElem& a) const;  // unit only
    int vp(const GRElem& a) const {     // p-adic valuation, d if zero
        if (tables_) return vp_t_[a.c[0]];
        return vp_general(a);
    }
    int vp_general(const GRElem& a) const;

    GRElem sigma(const GRElem& a) const;      // Frobenius lift
    GRElem sigma_iter(const GRElem& a, int k) const;
    GRElem divide_p(const GRElem& a) const {  // one choice of a/p for a in (p)
        if (tables_) {
            if (a.c[0] % uint32_t(p_) != 0) throw Error("divide_p: not divisible");
            GRElem r{};
            r.c[0] = divp_t_[a.c[0]];
            return r;
        }
        return divide_p_general(a);
    }
    GRElem divide_p_general(const GRElem& a) const;
    GRElem reduce_mod_p(const GRElem& a, int k) const;  // canonical rep mod p^k

    uint32_t resid_code(const GRElem& a) const;   // image in F_{p^m}
    GRElem lift_code(uint32_t residue_code) const;
    GRElem teichmueller(uint32_t residue_code) const;

    uint64_t encode(const GRElem& a) const;  // mixed-radix, for hashing/order
    GRElem decode(uint64_t v) const;

  private:
    int64_t p_;
    int d_, m_;
    uint64_t pd_;
    gf::FieldPtr kappa_;
    std::vector<int64_t> modulus_;             // integer lift, degree m
    std::vector<std::vector<int64_t>> yred_;   // y^m .. y^(2m-2) reduced mod (g, p^d)
    std::vector<GRElem> sigma_y_pow_;          // sigma(y)^j for j < m
    // table-driven fast path for the rank-one case (coefficients in Z/p^d)
    bool tables_ = false;
    std::vector<uint32_t> mul_t_;
    std::vector<uint8_t> vp_t_;
    std::vector<uint32_t> divp_t_;

    friend class ChainRing;

  public:
    bool has_tables() const { return tables_; }
    uint32_t mul1(uint32_t a, uint32_t b) const { return mul_t_[size_t(a) * pd_ + b]; }
};

struct CRElem {
    GRElem a0, a1;  // value a0 + a1*pi
    bool operator==(const CRElem&) const = default;
};

class ChainRing;
using ChainRingPtr = std::shared_ptr<const ChainRing>;

class ChainRing : public std::enable_shared_from_this<ChainRing> {
  public:
    // N = pi-adic length (pi^N = 0), even and >= 2.
    static ChainRingPtr make(int64_t p, int N, int m);

    int64_t p() const { return p_; }
    int N() const { return N_; }
    int m() const { return m_; }
    const GaloisRing& gr() const { return gr_; }
    const gf::FieldPtr& residue_field() const { return gr_.residue_field(); }
    uint64_t size() const;  // p^(N*m)

    CRElem zero() const { return {}; }
    CRElem one() const { return {gr_.one(), gr_.zero()}; }
    CRElem pi() const { return {gr_.zero(), gr_.one()}; }
    CRElem from_int(int64_t v) const { return {gr_.from_int(v), gr_.zero()}; }
    CRElem from_gr(const GRElem& a) const { return {a, gr_.zero()}; }

    CRElem add(const CRElem& a, const CRElem& b) const {
        return {gr_.add(a.a0, b.a0), gr_.add(a.a1, b.a1)};
    }
    CRElem sub(const CRElem& a, const CRElem& b) const {
        return {gr_.sub(a.a0, b.a0), gr_.sub(a.a1, b.a1)};
    }
    CRElem neg(const CRElem& a) const { return {gr_.neg(a.a0), gr_.neg(a.a1)}; }
    CRElem mul(const CRElem& a, const CRElem& b) const {
        // (a0 + a1 pi)(b0 + b1 pi) = a0 b0 + p a1 b1 + (a0 b1 + a1 b0) pi
        GRElem c0 = gr_.add(gr_.mul(a.a0, b.a0), gr_.mul_int(gr_.mul(a.a1, b.a1), p_));
        GRElem c1 = gr_.add(gr_.mul(a.a0, b.a1), gr_.mul(a.a1, b.a0));
        return {c0, c1};
    }
    bool is_zero(const CRElem& a) const {
        return gr_.is_zero(a.a0) && gr_.is_zero(a.a1);
    }

    CRElem conjugate(const CRElem& a) const;  // pi -> -pi
    CRElem sigma(const CRElem& a) const;      // Witt Frobenius, fixes pi
    CRElem sigma_iter(const CRElem& a, int k) const;
    CRElem sigma_inv(const CRElem& a) const { return sigma_iter(a, m_ == 1 ? 0 : m_ - 1); }

    // pi-adic valuation in [0, N]; N means zero.  Spec-level "infinity" is
    // reported by pi_valuation() as nullopt.
    int val(const CRElem& a) const {
        int v0 = 2 * gr_.vp(a.a0);
        int v1 = 2 * gr_.vp(a.a1) + 1;
        return std::min(N_, std::min(v0, v1));
    }
    std::optional<int> pi_valuation(const CRElem& a) const;

    bool is_unit(const CRElem& a) const { return val(a) == 0; }
    CRElem inv_unit(const CRElem& a) const;
    CRElem mul_pi_pow(const CRElem& a, int k) const;   // a * pi^k, k >= 0
    CRElem shift_down(const CRElem& a, int v) const;   // one choice of a/pi^v
    CRElem canonical_mod_pi_pow(const CRElem& a, int v) const;  // rep of a + (pi^v)
    // c with a - c*pi^v canonical mod (pi^v); pairs with canonical_mod_pi_pow.
    CRElem excess_over_pi_pow(const CRElem& a, int v) const;

    // residue map R -> F_{p^m} and a coefficient lift
    uint32_t resid_code(const CRElem& a) const { return gr_.resid_code(a.a0); }
    CRElem lift_code(uint32_t residue_code) const { return {gr_.lift_code(residue_code), gr_.zero()}; }

    uint64_t encode(const CRElem& a) const;
    CRElem decode(uint64_t v) const;
    std::vector<CRElem> enumerate() const;  // all p^(N*m) elements, BoundExceeded if large

  private:
    ChainRing(int64_t p, int N, int m);
    int64_t p_;
    int N_, m_;
    GaloisRing gr_;
};

// Spec-facing value type with descriptor checks.
class ChainRingElement {
  public:
    ChainRingElement() = default;
    ChainRingElement(ChainRingPtr r, CRElem v) : r_(std::move(r)), v_(v) {}
    const ChainRingPtr& ring() const { return r_; }
    const CRElem& value() const { return v_; }

    ChainRingElement operator+(const ChainRingElement& o) const {
        check(o);
        return {r_, r_->add(v_, o.v_)};
    }
    ChainRingElement operator-(const ChainRingElement& o) const {
        check(o);
        return {r_, r_->sub(v_, o.v_)};
    }
    ChainRingElement operator*(const ChainRingElement& o) const {
        check(o);
        return {r_, r_->mul(v_, o.v_)};
    }
    ChainRingElement operator-() const { return {r_, r_->neg(v_)}; }
    ChainRingElement conjugate() const { return {r_, r_->conjugate(v_)}; }
    ChainRingElement sigma() const { return {r_, r_->sigma(v_)}; }
    std::optional<int> pi_valuation() const { return r_->pi_valuation(v_); }
    bool operator==(const ChainRingElement& o) const {
        return r_.get() == o.r_.get() && v_ == o.v_;
    }

  private:
    void check(const ChainRingElement& o) const {
        if (r_.get() != o.r_.get()) throw DescriptorMismatch();
    }
    ChainRingPtr r_;
    CRElem v_;
};

}  // namespace btstrata::ring

#endif
