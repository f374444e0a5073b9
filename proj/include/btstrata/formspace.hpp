#ifndef BTSTRATA_FORMSPACE_HPP
#define BTSTRATA_FORMSPACE_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "btstrata/gf.hpp"
#include "btstrata/lattices.hpp"

namespace btstrata::fsp {

enum class FormKind { symplectic, orthogonal };

// small dense matrix over a finite field, entries are field codes;
// capacity covers stacked pairs of bases (16 rows) in dimension <= 8
struct SmallMat {
    int rows = 0, cols = 0;
    std::array<uint16_t, 128> e{};
    uint16_t& at(int i, int j) { return e[size_t(i) * cols + j]; }
    uint16_t at(int i, int j) const { return e[size_t(i) * cols + j]; }
    bool operator==(const SmallMat&) const = default;
};

// reduced row echelon form in place; returns rank
int rref(const gf::Field& F, SmallMat& M);

class FormSpace;
using FormSpacePtr = std::shared_ptr<const FormSpace>;

// provenance of a quotient form space: the anchoring vertex lattice, the
// lifted basis of the quotient, and the frames of the sandwich
struct QuotientOrigin {
    lat::Lattice anchor;            // the vertex lattice Lambda (rational)
    lat::Lattice lo, hi;            // quotient = hi-classes mod lo
    std::vector<lat::Row> basis;    // lifts of the quotient basis, level 1
    int digit;                      // which pi-digit of h realizes the form
};

class FormSpace : public std::enable_shared_from_this<FormSpace> {
  public:
    static FormSpacePtr make(FormKind kind, gf::FieldPtr base, SmallMat gram,
                             std::optional<QuotientOrigin> origin = {});
    static FormSpacePtr standard_symplectic(gf::FieldPtr base, int t);
    static FormSpacePtr standard_orthogonal_split(gf::FieldPtr base, int dim);

    FormKind kind() const { return kind_; }
    int dim() const { return dim_; }
    const gf::FieldPtr& base() const { return base_; }
    const SmallMat& gram() const { return gram_; }
    const std::optional<QuotientOrigin>& origin() const { return origin_; }

    const gf::FieldPtr& field(int m) const;         // F_{q^m}
    uint32_t embed_base(int m, uint32_t code) const;  // F_q -> F_{q^m}
    const SmallMat& gram_at(int m) const;

    // bilinear form value over F_{q^m}
    uint32_t form(int m, const uint16_t* x, const uint16_t* y) const;

    int witt_index() const;  // maximal isotropic dimension

  private:
    FormSpace(FormKind kind, gf::FieldPtr base, SmallMat gram,
              std::optional<QuotientOrigin> origin);
    FormKind kind_;
    int dim_;
    gf::FieldPtr base_;
    SmallMat gram_;
    std::optional<QuotientOrigin> origin_;
    mutable std::map<int, gf::FieldPtr> fields_;
    mutable std::map<int, SmallMat> grams_;
    mutable std::map<int, std::vector<uint32_t>> embeds_;
    mutable std::mutex mu_;
    mutable std::optional<int> witt_;
};

// defined over F_{q^m}; basis is a reduced echelon matrix, so equality is
// structural
class Subspace {
  public:
    Subspace() = default;
    Subspace(FormSpacePtr sp, int m, SmallMat basis);  // echelonizes

    const FormSpacePtr& space() const { return sp_; }
    int level() const { return m_; }
    int dim() const { return basis_.rows; }
    const SmallMat& basis() const { return basis_; }

    bool operator==(const Subspace& o) const;
    bool operator<(const Subspace& o) const { return encode() < o.encode(); }
    std::string encode() const;

    Subspace sum(const Subspace& o) const;
    Subspace intersect(const Subspace& o) const;
    Subspace dual() const;  // with respect to the space's form
    Subspace frobenius() const;
    bool contains(const Subspace& o) const;
    bool contains_vector(const uint16_t* x) const;
    bool is_isotropic() const;
    bool is_rational() const { return frobenius() == *this; }
    Subspace at_level(int m) const;  // embed a rational subspace at a level

    static Subspace zero(FormSpacePtr sp, int m);
    static Subspace full(FormSpacePtr sp, int m);

  private:
    void check(const Subspace& o) const {
        if (sp_.get() != o.sp_.get() || m_ != o.m_) throw SpaceMismatch();
    }
    FormSpacePtr sp_;
    int m_ = 1;
    SmallMat basis_;
};

enum class SubspaceConstraint { any, isotropic };

// Stream all d-dimensional (isotropic) subspaces over F_{q^m} in canonical
// echelon order; stops early if fn returns false.  Work scales with the
// number of results; throws BoundExceeded past max_count.
void for_each_subspace(const FormSpacePtr& sp, int m, int d,
                       SubspaceConstraint constraint,
                       const std::function<bool(const Subspace&)>& fn,
                       uint64_t max_count = 10000000);
std::vector<Subspace> enumerate_subspaces(const FormSpacePtr& sp, int m, int d,
                                          SubspaceConstraint constraint,
                                          uint64_t max_count = 10000000);
// subspaces of an ambient subspace (dimension d inside `inside`)
void for_each_subspace_of(const Subspace& inside, int d,
                          const std::function<bool(const Subspace&)>& fn);

uint64_t gaussian_binomial(uint64_t q, int n, int k);  // capped, throws on overflow

// all reduced echelon d x D matrices over F (coordinate subspaces, no form)
void for_each_echelon(const gf::FieldPtr& F, int D, int d,
                      const std::function<bool(const SmallMat&)>& fn);

// greedy kappa-basis of hi/lo lifted to rows of the ambient window (level 1)
std::vector<lat::Row> quotient_basis(const lat::Lattice& lo, const lat::Lattice& hi,
                                     int dim);
// lo + the span of coordinate rows against a lifted basis, at level m
lat::Lattice lattice_from_coords(const lat::Lattice& lo_level1,
                                 const std::vector<lat::Row>& basis, int m,
                                 const SmallMat& coords);

// quotient form spaces of a rational vertex lattice
FormSpacePtr symplectic_quotient(const lat::Lattice& vertex);   // V_Lambda
FormSpacePtr orthogonal_quotient(const lat::Lattice& vertex);   // V_{Lambda^sharp}

// dictionary between sandwiched lattices and subspaces (both quotient kinds):
// lo <= M <= hi corresponds to M/lo inside hi/lo
lat::Lattice lattice_of_subspace(const FormSpacePtr& sp, const Subspace& U);
Subspace subspace_of_lattice(const FormSpacePtr& sp, const lat::Lattice& M);

std::string formspace_to_json(const FormSpace& sp);
std::string subspace_to_json(const Subspace& U);
Subspace subspace_from_json(const FormSpacePtr& sp, const std::string& text);
FormSpacePtr formspace_from_json(const std::string& text);

}  // namespace btstrata::fsp

#endif
