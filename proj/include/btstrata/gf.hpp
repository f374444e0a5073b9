#ifndef BTSTRATA_GF_HPP
#define BTSTRATA_GF_HPP

#include <cstdint>
#include <memory>
#include <vector>

#include "btstrata/errors.hpp"

namespace btstrata::gf {

// Arithmetic in F_{q^m}, q = p^r, realized as F_p[x]/(f) with f the first
// irreducible monic polynomial of degree r*m in a fixed enumeration order.
// Elements are codes in [0, p^(r*m)): base-p digits give the coefficients
// of 1, x, x^2, ...  The q-power Frobenius generates Gal(F_{q^m}/F_q).

class Field;
using FieldPtr = std::shared_ptr<const Field>;

// First irreducible monic polynomial of degree d over F_p, as coefficient
// vector c[0..d] with c[d] = 1.  Enumeration: constant coefficient varies
// fastest.  Deterministic for a given (p, d).
std::vector<int64_t> find_irreducible(int64_t p, int degree);

class Field : public std::enable_shared_from_this<Field> {
  public:
    static FieldPtr make(int64_t p, int r, int m,
                         uint64_t enumeration_bound = kDefaultEnumBound);

    static constexpr uint64_t kDefaultEnumBound = 1u << 20;

    int64_t p() const { return p_; }
    int r() const { return r_; }
    int m() const { return m_; }
    int degree() const { return deg_; }          // r*m
    uint64_t q() const { return q_; }            // p^r
    uint64_t size() const { return size_; }      // q^m
    const std::vector<int64_t>& modulus() const { return modulus_; }

    // Raw element ops on codes in [0, size()).
    uint32_t zero() const { return 0; }
    uint32_t one() const { return one_; }
    uint32_t add(uint32_t a, uint32_t b) const;
    uint32_t sub(uint32_t a, uint32_t b) const;
    uint32_t neg(uint32_t a) const;
    uint32_t mul(uint32_t a, uint32_t b) const;
    uint32_t inv(uint32_t a) const;               // throws DivisionByZero on 0
    uint32_t pow(uint32_t a, uint64_t e) const;
    uint32_t frobenius(uint32_t a) const;         // a^q
    uint32_t frobenius_iter(uint32_t a, int k) const;  // a^(q^k), k may be 0..m
    uint32_t from_int(int64_t c) const;           // image of integer (prime field)
    uint32_t from_coeffs(const std::vector<int64_t>& c) const;
    std::vector<int64_t> coeffs(uint32_t a) const;  // length degree(), reduced mod p

    bool in_base_field(uint32_t a) const { return frobenius(a) == a; }  // in F_q

    // Deterministic generator of the multiplicative group.
    uint32_t generator() const;
    uint64_t mult_order(uint32_t a) const;

    // The q^m elements in code order 0,1,2,...; BoundExceeded if size() is
    // over the configured enumeration bound.
    std::vector<uint32_t> enumerate() const;
    // The embedded subfield F_q, in code order.
    std::vector<uint32_t> base_field_elements() const;

  private:
    Field(int64_t p, int r, int m, uint64_t enumeration_bound);

    uint32_t mul_slow(uint32_t a, uint32_t b) const;

    int64_t p_;
    int r_, m_, deg_;
    uint64_t q_, size_, enum_bound_;
    uint32_t one_;
    std::vector<int64_t> modulus_;
    std::vector<int64_t> xred_;  // x^deg .. x^(2deg-2) reduced, flattened

    bool tables_ = false;
    std::vector<uint32_t> add_t_, mul_t_, neg_t_, inv_t_, frob_t_;
};

// Value type carrying its descriptor; canonical by construction.
class FieldElement {
  public:
    FieldElement() = default;
    FieldElement(FieldPtr f, uint32_t code) : f_(std::move(f)), code_(code) {}

    const FieldPtr& field() const { return f_; }
    uint32_t code() const { return code_; }

    FieldElement operator+(const FieldElement& o) const { return bin(o, &Field::add); }
    FieldElement operator-(const FieldElement& o) const { return bin(o, &Field::sub); }
    FieldElement operator*(const FieldElement& o) const { return bin(o, &Field::mul); }
    FieldElement operator-() const { return {f_, f_->neg(code_)}; }
    FieldElement inv() const { return {f_, f_->inv(code_)}; }
    FieldElement frobenius() const { return {f_, f_->frobenius(code_)}; }
    bool operator==(const FieldElement& o) const {
        return f_.get() == o.f_.get() && code_ == o.code_;
    }

  private:
    FieldElement bin(const FieldElement& o,
                     uint32_t (Field::*op)(uint32_t, uint32_t) const) const {
        if (f_.get() != o.f_.get()) throw DescriptorMismatch();
        return {f_, (f_.get()->*op)(code_, o.code_)};
    }
    FieldPtr f_;
    uint32_t code_ = 0;
};

}  // namespace btstrata::gf

#endif
