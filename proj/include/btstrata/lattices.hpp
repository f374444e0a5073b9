#ifndef BTSTRATA_LATTICES_HPP
#define BTSTRATA_LATTICES_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "btstrata/chainring.hpp"
#include "btstrata/errors.hpp"

namespace btstrata::lat {

using ring::ChainRing;
using ring::ChainRingPtr;
using ring::CRElem;

using Row = std::vector<CRElem>;
using Matrix = std::vector<Row>;

// --- Howell machinery over a chain ring -------------------------------------
//
// Rows span a submodule of R^ncols.  The Howell normal form is the unique
// echelon presentation with pivot entries pi^v, zeros below pivots, entries
// above a pivot canonical mod (pi^v), and the Howell span property (every
// element of the span is greedily reducible).  Uniqueness makes equality,
// membership and coset representatives structural.

Matrix howell(const ChainRing& R, Matrix rows);
// Canonical representative of x + span(rows); rows must be a Howell form.
Row coset_reduce(const ChainRing& R, const Matrix& rows, Row x);
bool member(const ChainRing& R, const Matrix& howell_rows, const Row& x);
// Generators (Howell form) of {u in R^k : u * M = 0}.
Matrix kernel(const ChainRing& R, const Matrix& M, int ncols);
// Some u with u * M = x, if any.
std::optional<Row> solve(const ChainRing& R, const Matrix& M, const Row& x);

// --- hermitian ambient and window lattices ----------------------------------

class Ambient;
using AmbientPtr = std::shared_ptr<const Ambient>;

// Split hermitian space C = F^n with h(e_i, e_{n+1-j}) = conj(a) b delta_ij,
// computed inside the window pi^a L0 <= L <= pi^{-a} L0.  Coordinates are
// taken against f_i = pi^{-a} e_i, so window classes live in (R_{2a,m})^n.
class Ambient : public std::enable_shared_from_this<Ambient> {
  public:
    static AmbientPtr make(int n, int64_t p, int a);

    int n() const { return n_; }
    int a() const { return a_; }
    int64_t p() const { return p_; }
    int ell() const { return 2 * a_; }  // pi-length of the window ring

    const ChainRingPtr& ring(int m) const;       // R_{2a, m}
    const ChainRingPtr& full_ring(int m) const;  // R_{2a+2, m}

    // Scaled hermitian pairing s(x,y) = sum_i conj(x_i) y_{n-1-i} over the
    // window ring; s represents pi^{2a} (-1)^a h(x,y) of the ambient form.
    CRElem pairing(int m, const Row& x, const Row& y) const;
    // Residue of h-related digits: value of pi^k h(x,y) mod pi as a code in
    // F_{p^m}; requires pi^k h(x,y) integral (throws NotIntegral otherwise).
    uint32_t form_digit(int m, const Row& x, const Row& y, int k) const;

  private:
    Ambient(int n, int64_t p, int a);
    int n_, a_;
    int64_t p_;
    mutable std::map<int, ChainRingPtr> rings_, full_rings_;
    mutable std::mutex mu_;
};

class Lattice {
  public:
    Lattice() = default;
    Lattice(AmbientPtr amb, int m, Matrix generators);  // canonicalizes

    const AmbientPtr& ambient() const { return amb_; }
    int level() const { return m_; }
    const Matrix& rows() const { return rows_; }
    const ChainRing& R() const { return *amb_->ring(m_); }

    bool operator==(const Lattice& o) const;
    bool contains(const Row& x) const;
    bool contains(const Lattice& o) const;
    Row reduce(const Row& x) const;  // canonical coset representative

    int length() const;  // kappa-length of L / pi^a L0

    Lattice dual() const;
    Lattice sum(const Lattice& o) const;
    Lattice intersect(const Lattice& o) const;
    Lattice tau() const;           // entrywise sigma
    Lattice tau_inv() const;
    Lattice embed(int m) const;    // tensor to a higher coefficient level
    Lattice pi_inverse() const;    // pi^{-1} L, throws WindowOverflow
    Lattice pi_scale(int k) const; // pi^k L, k >= 0, throws WindowOverflow

    Matrix pi_scaled_rows(int k) const;  // rows * pi^k, for containment tests

    // dim_kappa(o / *this) for *this <= o (not checked)
    int quotient_length(const Lattice& o) const { return o.length() - length(); }

    const std::string& encode() const;  // canonical bytes, fixed layout
    bool operator<(const Lattice& o) const { return encode() < o.encode(); }

  private:
    AmbientPtr amb_;
    int m_ = 1;
    Matrix rows_;
    mutable std::string encode_cache_;
};

// standard lattice Lambda_i (i = kn + j); throws WindowOverflow out of range
Lattice standard_lattice(const AmbientPtr& amb, int i, int m = 1);
Lattice zero_lattice(const AmbientPtr& amb, int m = 1);      // pi^a L0
Lattice full_lattice(const AmbientPtr& amb, int m = 1);      // pi^{-a} L0
Lattice unit_lattice(const AmbientPtr& amb, int m = 1);      // L0

int lattice_type(const Lattice& L);  // dim(L^sharp / L); NotIntegral if L !<= L^sharp
bool is_vertex(const Lattice& L);

// tau-fixed rational sublattice of a tau-stable lattice (level m -> level 1);
// throws NotStable if L is not the base change of its fixed module.
Lattice rational_descent(const Lattice& L);

struct VertexEnumOptions {
    std::optional<int> type_filter;      // even type 2t
    std::optional<Lattice> above;        // only lattices containing this one
    int anchor_window = -1;              // confine to [pi^b L0, pi^{-b} L0]; -1 = a
    uint64_t max_results = 4000000;
};
// All vertex lattices in the window (rational, m = 1), canonical order.
std::vector<Lattice> enumerate_vertex_lattices(const AmbientPtr& amb,
                                               const VertexEnumOptions& opt = {});
// Independent slow path: scan every submodule of the window module.
std::vector<Lattice> enumerate_vertex_lattices_brute(const AmbientPtr& amb,
                                                     std::optional<int> type_filter = {},
                                                     std::optional<Lattice> above = {});

// intermediate lattices Lambda <= X <= Lambda^sharp (rational quotient walk);
// helper for the vertex-lattice closure
std::vector<Lattice> lattices_between(const Lattice& lo, const Lattice& hi);

std::string lattice_to_json(const Lattice& L);
Lattice lattice_from_json(const std::string& json_text);

}  // namespace btstrata::lat

#endif
