#include "btstrata/lattices.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

namespace btstrata::lat {

namespace {

void row_submul(const ChainRing& R, Row& w, const CRElem& c, const Row& r) {
    for (size_t i = 0; i < w.size(); ++i) w[i] = R.sub(w[i], R.mul(c, r[i]));
}

bool row_zero(const ChainRing& R, const Row& r) {
    for (const auto& e : r)
        if (!R.is_zero(e)) return false;
    return true;
}

}  // namespace

Matrix howell(const ChainRing& R, Matrix rows) {
    const int ncols = rows.empty() ? 0 : int(rows[0].size());
    std::vector<Row> work;
    for (auto& r : rows)
        if (!row_zero(R, r)) work.push_back(std::move(r));
    Matrix result;
    std::vector<int> pivot_col, pivot_val;
    for (int col = 0; col < ncols; ++col) {
        int best = -1, bestv = R.N();
        for (int i = 0; i < int(work.size()); ++i) {
            int v = R.val(work[i][col]);
            if (v < bestv) {
                bestv = v;
                best = i;
            }
        }
        if (best < 0 || bestv >= R.N()) continue;
        Row piv = std::move(work[best]);
        work.erase(work.begin() + best);
        // normalize pivot entry to pi^v
        CRElem u = R.shift_down(piv[col], bestv);
        CRElem uinv = R.inv_unit(u);
        for (auto& e : piv) e = R.mul(e, uinv);
        // eliminate the column from the remaining rows
        std::vector<Row> next;
        next.reserve(work.size() + 1);
        for (auto& w : work) {
            CRElem c = R.shift_down(w[col], bestv);
            row_submul(R, w, c, piv);
            if (!row_zero(R, w)) next.push_back(std::move(w));
        }
        work = std::move(next);
        // Howell shadow: pi^(N-v) * pivot row spans the annihilator tail
        if (bestv > 0) {
            Row shadow(ncols);
            bool nz = false;
            for (int i = 0; i < ncols; ++i) {
                shadow[i] = R.mul_pi_pow(piv[i], R.N() - bestv);
                nz = nz || !R.is_zero(shadow[i]);
            }
            if (nz) work.push_back(std::move(shadow));
        }
        result.push_back(std::move(piv));
        pivot_col.push_back(col);
        pivot_val.push_back(bestv);
    }
    // canonicalize entries above each pivot, left to right
    for (size_t i = 0; i < result.size(); ++i) {
        for (size_t k = 0; k < i; ++k) {
            CRElem e = R.excess_over_pi_pow(result[k][pivot_col[i]], pivot_val[i]);
            if (!R.is_zero(e)) row_submul(R, result[k], e, result[i]);
        }
    }
    return result;
}

Row coset_reduce(const ChainRing& R, const Matrix& rows, Row x) {
    for (const auto& r : rows) {
        int col = 0;
        while (col < int(r.size()) && R.is_zero(r[col])) ++col;
        if (col >= int(r.size())) continue;
        int v = R.val(r[col]);
        CRElem e = R.excess_over_pi_pow(x[col], v);
        if (!R.is_zero(e)) row_submul(R, x, e, r);
    }
    return x;
}

bool member(const ChainRing& R, const Matrix& howell_rows, const Row& x) {
    Row w = x;
    for (const auto& r : howell_rows) {
        int col = 0;
        while (col < int(r.size()) && R.is_zero(r[col])) ++col;
        if (col >= int(r.size())) continue;
        int v = R.val(r[col]);
        if (R.is_zero(w[col])) continue;
        if (R.val(w[col]) < v) return false;
        CRElem c = R.shift_down(w[col], v);
        row_submul(R, w, c, r);
    }
    return row_zero(R, w);
}

Matrix kernel(const ChainRing& R, const Matrix& M, int ncols) {
    const int k = int(M.size());
    Matrix aug(k, Row(ncols + k, R.zero()));
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < ncols; ++j) aug[i][j] = M[i][j];
        aug[i][ncols + i] = R.one();
    }
    Matrix H = howell(R, std::move(aug));
    Matrix gens;
    for (const auto& r : H) {
        bool front_zero = true;
        for (int j = 0; j < ncols; ++j)
            if (!R.is_zero(r[j])) {
                front_zero = false;
                break;
            }
        if (!front_zero) continue;
        gens.emplace_back(r.begin() + ncols, r.end());
    }
    return howell(R, std::move(gens));
}

std::optional<Row> solve(const ChainRing& R, const Matrix& M, const Row& x) {
    const int k = int(M.size());
    const int ncols = int(x.size());
    Matrix aug(k, Row(ncols + k, R.zero()));
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < ncols; ++j) aug[i][j] = M[i][j];
        aug[i][ncols + i] = R.one();
    }
    Matrix H = howell(R, std::move(aug));
    Row w = x;
    Row u(k, R.zero());
    for (const auto& r : H) {
        int col = 0;
        while (col < ncols && R.is_zero(r[col])) ++col;
        if (col >= ncols) continue;  // pure kernel row
        int v = R.val(r[col]);
        if (R.is_zero(w[col])) continue;
        if (R.val(w[col]) < v) return std::nullopt;
        CRElem c = R.shift_down(w[col], v);
        for (int j = 0; j < ncols; ++j) w[j] = R.sub(w[j], R.mul(c, r[j]));
        for (int j = 0; j < k; ++j) u[j] = R.add(u[j], R.mul(c, r[ncols + j]));
    }
    if (!row_zero(R, w)) return std::nullopt;
    return u;
}

// --- Ambient -----------------------------------------------------------------

Ambient::Ambient(int n, int64_t p, int a) : n_(n), a_(a), p_(p) {
    if (n < 1 || a < 1) throw BadParameters("Ambient(n, p, a)");
}

AmbientPtr Ambient::make(int n, int64_t p, int a) {
    static std::map<std::tuple<int, int64_t, int>, std::weak_ptr<const Ambient>> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lk(mu);
    auto key = std::make_tuple(n, p, a);
    if (auto it = cache.find(key); it != cache.end())
        if (auto sp = it->second.lock()) return sp;
    AmbientPtr amb(new Ambient(n, p, a));
    cache[key] = amb;
    return amb;
}

const ChainRingPtr& Ambient::ring(int m) const {
    std::lock_guard<std::mutex> lk(mu_);
    auto it = rings_.find(m);
    if (it == rings_.end()) it = rings_.emplace(m, ChainRing::make(p_, 2 * a_, m)).first;
    return it->second;
}

const ChainRingPtr& Ambient::full_ring(int m) const {
    std::lock_guard<std::mutex> lk(mu_);
    auto it = full_rings_.find(m);
    if (it == full_rings_.end())
        it = full_rings_.emplace(m, ChainRing::make(p_, 2 * a_ + 2, m)).first;
    return it->second;
}

CRElem Ambient::pairing(int m, const Row& x, const Row& y) const {
    const ChainRing& R = *ring(m);
    CRElem s = R.zero();
    for (int i = 0; i < n_; ++i)
        s = R.add(s, R.mul(R.conjugate(x[i]), y[n_ - 1 - i]));
    return s;
}

uint32_t Ambient::form_digit(int m, const Row& x, const Row& y, int k) const {
    const ChainRing& R = *ring(m);
    CRElem s = pairing(m, x, y);
    int need = 2 * a_ - k;
    if (!R.is_zero(s) && R.val(s) < need) throw NotIntegral("form value not integral");
    CRElem d = R.shift_down(s, need);
    uint32_t code = R.resid_code(d);
    if (a_ % 2 == 1) code = R.residue_field()->neg(code);
    return code;
}

// --- Lattice -----------------------------------------------------------------

Lattice::Lattice(AmbientPtr amb, int m, Matrix generators)
    : amb_(std::move(amb)), m_(m) {
    for (const auto& r : generators)
        if (int(r.size()) != amb_->n()) throw BadParameters("row width != n");
    rows_ = howell(*amb_->ring(m_), std::move(generators));
}

bool Lattice::operator==(const Lattice& o) const {
    return amb_.get() == o.amb_.get() && m_ == o.m_ && rows_ == o.rows_;
}

bool Lattice::contains(const Row& x) const { return member(R(), rows_, x); }

bool Lattice::contains(const Lattice& o) const {
    if (amb_.get() != o.amb_.get() || m_ != o.m_) throw DescriptorMismatch();
    for (const auto& r : o.rows_)
        if (!contains(r)) return false;
    return true;
}

Row Lattice::reduce(const Row& x) const { return coset_reduce(R(), rows_, x); }

int Lattice::length() const {
    const ChainRing& Rr = R();
    int len = 0;
    for (const auto& r : rows_) {
        int col = 0;
        while (col < int(r.size()) && Rr.is_zero(r[col])) ++col;
        if (col < int(r.size())) len += Rr.N() - Rr.val(r[col]);
    }
    return len;
}

Lattice Lattice::dual() const {
    const ChainRing& Rr = R();
    const int n = amb_->n();
    // {xi : xi . (G conj(rows)^t) = 0 over the window ring}
    Matrix map_rows(n, Row(rows_.size(), Rr.zero()));
    for (int i = 0; i < n; ++i)
        for (size_t kcol = 0; kcol < rows_.size(); ++kcol)
            map_rows[i][kcol] = Rr.conjugate(rows_[kcol][n - 1 - i]);
    Matrix gens = kernel(Rr, map_rows, int(rows_.size()));
    return Lattice(amb_, m_, std::move(gens));
}

Lattice Lattice::sum(const Lattice& o) const {
    if (amb_.get() != o.amb_.get() || m_ != o.m_) throw DescriptorMismatch();
    Matrix g = rows_;
    g.insert(g.end(), o.rows_.begin(), o.rows_.end());
    return Lattice(amb_, m_, std::move(g));
}

Lattice Lattice::intersect(const Lattice& o) const {
    if (amb_.get() != o.amb_.get() || m_ != o.m_) throw DescriptorMismatch();
    const ChainRing& Rr = R();
    Matrix stacked = rows_;
    stacked.insert(stacked.end(), o.rows_.begin(), o.rows_.end());
    Matrix ker = kernel(Rr, stacked, amb_->n());
    Matrix gens;
    for (const auto& u : ker) {
        Row x(amb_->n(), Rr.zero());
        for (size_t i = 0; i < rows_.size(); ++i)
            for (int j = 0; j < amb_->n(); ++j)
                x[j] = Rr.add(x[j], Rr.mul(u[i], rows_[i][j]));
        gens.push_back(std::move(x));
    }
    return Lattice(amb_, m_, std::move(gens));
}

Lattice Lattice::tau() const {
    const ChainRing& Rr = R();
    Matrix g = rows_;
    for (auto& r : g)
        for (auto& e : r) e = Rr.sigma(e);
    return Lattice(amb_, m_, std::move(g));
}

Lattice Lattice::tau_inv() const {
    const ChainRing& Rr = R();
    Matrix g = rows_;
    for (auto& r : g)
        for (auto& e : r) e = Rr.sigma_iter(e, m_ == 1 ? 0 : m_ - 1);
    return Lattice(amb_, m_, std::move(g));
}

Lattice Lattice::embed(int m) const {
    if (m == m_) return *this;
    if (m_ != 1) throw BadParameters("embed: only level-1 base change supported");
    const ChainRing& Rt = *amb_->ring(m);
    (void)Rt;
    Matrix g(rows_.size(), Row(amb_->n()));
    for (size_t i = 0; i < rows_.size(); ++i)
        for (int j = 0; j < amb_->n(); ++j) {
            ring::CRElem e{};
            e.a0.c[0] = rows_[i][j].a0.c[0];
            e.a1.c[0] = rows_[i][j].a1.c[0];
            g[i][j] = e;
        }
    return Lattice(amb_, m, std::move(g));
}

Matrix Lattice::pi_scaled_rows(int k) const {
    const ChainRing& Rr = R();
    Matrix g = rows_;
    for (auto& r : g)
        for (auto& e : r) e = Rr.mul_pi_pow(e, k);
    return g;
}

Lattice Lattice::pi_inverse() const {
    const ChainRing& Rr = R();
    const int n = amb_->n(), ell = Rr.N();
    Matrix g;
    for (const auto& r : rows_) {
        Row nr(n);
        for (int j = 0; j < n; ++j) {
            if (!Rr.is_zero(r[j]) && Rr.val(r[j]) < 1)
                throw WindowOverflow("pi^{-1} L leaves the window");
            nr[j] = Rr.shift_down(r[j], 1);
        }
        g.push_back(std::move(nr));
    }
    for (int t = 0; t < n; ++t) {
        Row nr(n, Rr.zero());
        nr[t] = Rr.mul_pi_pow(Rr.one(), ell - 1);
        g.push_back(std::move(nr));
    }
    return Lattice(amb_, m_, std::move(g));
}

Lattice Lattice::pi_scale(int k) const {
    if (k < 0) {
        Lattice L = *this;
        for (int i = 0; i < -k; ++i) L = L.pi_inverse();
        return L;
    }
    const ChainRing& Rr = R();
    const int n = amb_->n(), ell = Rr.N();
    // representability: pi^k L must still contain pi^a L0
    if (k > 0) {
        if (ell - k < 0) throw WindowOverflow("pi^k L below the window");
        for (int t = 0; t < n; ++t) {
            Row probe(n, Rr.zero());
            probe[t] = Rr.mul_pi_pow(Rr.one(), ell - k);
            if (!contains(probe)) throw WindowOverflow("pi^k L below the window");
        }
    }
    return Lattice(amb_, m_, pi_scaled_rows(k));
}

const std::string& Lattice::encode() const {
    if (!encode_cache_.empty()) return encode_cache_;
    std::string s;
    s.push_back(char(amb_->n()));
    s.push_back(char(m_));
    s.push_back(char(rows_.size()));
    for (const auto& r : rows_)
        for (const auto& e : r)
            for (int part = 0; part < 2; ++part) {
                const auto& g = part == 0 ? e.a0 : e.a1;
                for (int j = 0; j < m_; ++j) {
                    s.push_back(char(g.c[j] & 0xff));
                    s.push_back(char((g.c[j] >> 8) & 0xff));
                }
            }
    encode_cache_ = std::move(s);
    return encode_cache_;
}

// --- constructions -----------------------------------------------------------

Lattice standard_lattice(const AmbientPtr& amb, int i, int m) {
    const int n = amb->n(), a = amb->a();
    const ChainRing& R = *amb->ring(m);
    int k = i >= 0 ? i / n : -((-i + n - 1) / n);
    int j = i - k * n;
    Matrix g;
    for (int t = 0; t < n; ++t) {
        int e = (t < j) ? a - k - 1 : a - k;
        if (e < 0 || e > 2 * a) throw WindowOverflow("standard lattice outside window");
        Row r(n, R.zero());
        r[t] = R.mul_pi_pow(R.one(), e);
        g.push_back(std::move(r));
    }
    return Lattice(amb, m, std::move(g));
}

Lattice zero_lattice(const AmbientPtr& amb, int m) { return Lattice(amb, m, {}); }

Lattice full_lattice(const AmbientPtr& amb, int m) {
    const ChainRing& R = *amb->ring(m);
    Matrix g(amb->n(), Row(amb->n(), R.zero()));
    for (int t = 0; t < amb->n(); ++t) g[t][t] = R.one();
    return Lattice(amb, m, std::move(g));
}

Lattice unit_lattice(const AmbientPtr& amb, int m) { return standard_lattice(amb, 0, m); }

int lattice_type(const Lattice& L) {
    Lattice D = L.dual();
    if (!D.contains(L)) throw NotIntegral("L not contained in its dual");
    return D.length() - L.length();
}

bool is_vertex(const Lattice& L) {
    Lattice D = L.dual();
    if (!D.contains(L)) return false;
    for (const auto& r : D.pi_scaled_rows(1))
        if (!L.contains(r)) return false;
    return true;
}

Lattice rational_descent(const Lattice& L) {
    if (L.level() == 1) return L;
    const int m = L.level(), n = L.ambient()->n();
    const ChainRing& Rm = *L.ambient()->ring(m);
    const ChainRing& R1 = *L.ambient()->ring(1);

    auto expand = [&](const Row& r) {
        Row out(size_t(n) * m, R1.zero());
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < m; ++j) {
                ring::CRElem e{};
                e.a0.c[0] = r[i].a0.c[j];
                e.a1.c[0] = r[i].a1.c[j];
                out[size_t(i) * m + j] = e;
            }
        return out;
    };
    auto unexpand = [&](const Row& r) {
        Row out(n, Rm.zero());
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < m; ++j) {
                out[i].a0.c[j] = r[size_t(i) * m + j].a0.c[0];
                out[i].a1.c[j] = r[size_t(i) * m + j].a1.c[0];
            }
        return out;
    };

    // generators of L as a module over the rational subring
    ring::CRElem ycr{};
    ycr.a0.c[1] = 1;
    Matrix gens1;
    for (const auto& r : L.rows()) {
        Row cur = r;
        for (int j = 0; j < m; ++j) {
            gens1.push_back(expand(cur));
            if (j + 1 < m) {
                Row nxt(n);
                for (int i = 0; i < n; ++i) nxt[i] = Rm.mul(cur[i], ycr);
                cur = std::move(nxt);
            }
        }
    }
    Matrix B = howell(R1, std::move(gens1));

    // kernel of (sigma - 1) on the restricted module
    Matrix delta;
    for (const auto& b : B) {
        Row x = unexpand(b);
        for (auto& e : x) e = Rm.sigma(e);
        Row d = expand(x);
        for (size_t j = 0; j < d.size(); ++j) d[j] = R1.sub(d[j], b[j]);
        delta.push_back(std::move(d));
    }
    Matrix ker = kernel(R1, delta, n * m);
    Matrix fixed_rows;
    for (const auto& u : ker) {
        Row x(size_t(n) * m, R1.zero());
        for (size_t i = 0; i < B.size(); ++i)
            for (size_t j = 0; j < x.size(); ++j)
                x[j] = R1.add(x[j], R1.mul(u[i], B[i][j]));
        // a sigma-fixed vector has coordinates in the rational subring
        Row proj(n, R1.zero());
        for (int i = 0; i < n; ++i) {
            for (int j = 1; j < m; ++j)
                if (!R1.is_zero(x[size_t(i) * m + j]))
                    throw NotStable("fixed vector with non-rational coordinate");
            proj[i] = x[size_t(i) * m];
        }
        fixed_rows.push_back(std::move(proj));
    }
    Lattice F(L.ambient(), 1, std::move(fixed_rows));
    if (!(F.embed(m) == L))
        throw NotStable("lattice is not the base change of its fixed module");
    return F;
}

std::vector<Lattice> lattices_between(const Lattice& lo, const Lattice& hi) {
    const ChainRing& R = lo.R();
    const auto& kappa = R.residue_field();
    const int n = lo.ambient()->n();
    // residue-coefficient combinations of hi's rows; complete when pi*hi <= lo
    uint64_t combos = 1;
    for (size_t i = 0; i < hi.rows().size(); ++i) {
        combos *= kappa->size();
        if (combos > (1u << 22)) throw BoundExceeded("lattices_between");
    }
    std::vector<Row> candidates;
    for (uint64_t code = 1; code < combos; ++code) {
        Row x(n, R.zero());
        uint64_t t = code;
        for (const auto& r : hi.rows()) {
            uint32_t c = uint32_t(t % kappa->size());
            t /= kappa->size();
            if (c) {
                CRElem lc = R.lift_code(c);
                for (int j = 0; j < n; ++j) x[j] = R.add(x[j], R.mul(lc, r[j]));
            }
        }
        candidates.push_back(std::move(x));
    }
    std::set<std::string> seen;
    std::deque<Lattice> queue;
    std::vector<Lattice> out;
    queue.push_back(lo);
    seen.insert(lo.encode());
    while (!queue.empty()) {
        Lattice cur = std::move(queue.front());
        queue.pop_front();
        for (const auto& w : candidates) {
            if (cur.contains(w)) continue;
            Matrix g = cur.rows();
            g.push_back(w);
            Lattice nxt(lo.ambient(), lo.level(), std::move(g));
            auto key = nxt.encode();
            if (seen.insert(key).second) queue.push_back(nxt);
        }
        out.push_back(std::move(cur));
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

// single-generator extensions of lo by residue combinations of hi's rows;
// complete for walks with pi*hi <= lo.  Combinations are normalized
// projectively (first nonzero coefficient = 1): scalar multiples extend
// identically.
std::vector<Lattice> one_step_extensions(const Lattice& lo, const Lattice& hi) {
    const ChainRing& R = lo.R();
    const auto& kappa = R.residue_field();
    const int n = lo.ambient()->n();
    const uint64_t qk = kappa->size();
    uint64_t combos = 1;
    for (size_t i = 0; i < hi.rows().size(); ++i) {
        combos *= qk;
        if (combos > (1u << 22)) throw BoundExceeded("one_step_extensions");
    }
    std::unordered_set<std::string> seen;
    std::vector<Lattice> out;
    for (uint64_t code = 1; code < combos; ++code) {
        // projective normalization: leading coefficient must be 1
        uint64_t lead = code;
        while (lead % qk == 0) lead /= qk;
        if (lead % qk != 1) continue;
        Row x(n, R.zero());
        uint64_t t = code;
        for (const auto& r : hi.rows()) {
            uint32_t c = uint32_t(t % qk);
            t /= qk;
            if (c) {
                CRElem lc = R.lift_code(c);
                for (int j = 0; j < n; ++j) x[j] = R.add(x[j], R.mul(lc, r[j]));
            }
        }
        if (lo.contains(x)) continue;
        Matrix g = lo.rows();
        g.push_back(std::move(x));
        Lattice nxt(lo.ambient(), lo.level(), std::move(g));
        if (seen.insert(nxt.encode()).second) out.push_back(std::move(nxt));
    }
    return out;
}

bool within_anchor_window(const Lattice& L, int b) {
    const ChainRing& R = L.R();
    const int a = L.ambient()->a(), n = L.ambient()->n();
    // L <= pi^{-b} L0: all coordinates have valuation >= a - b
    for (const auto& r : L.rows())
        for (const auto& e : r)
            if (!R.is_zero(e) && R.val(e) < a - b) return false;
    // pi^b L0 <= L
    for (int t = 0; t < n; ++t) {
        Row probe(n, R.zero());
        probe[t] = R.mul_pi_pow(R.one(), a + b);
        if (!L.contains(probe)) return false;
    }
    return true;
}

}  // namespace

std::vector<Lattice> enumerate_vertex_lattices(const AmbientPtr& amb,
                                               const VertexEnumOptions& opt) {
    const int b = opt.anchor_window < 0 ? amb->a() - 1 : opt.anchor_window;
    if (b >= amb->a())
        throw BadParameters("anchor window needs one spare digit in the ambient window");
    if (opt.type_filter && *opt.type_filter % 2 != 0) return {};
    auto keep = [&](const Lattice& L) {
        if (opt.type_filter && lattice_type(L) != *opt.type_filter) return false;
        if (opt.above && !L.contains(*opt.above)) return false;
        return true;
    };

    // BFS steps.  Any containment of vertex lattices refines to a chain of
    // corank-one vertex steps (flags of isotropic subspaces lift), so single
    // generator extensions upward and colength-one sublattices downward
    // suffice for completeness.  Candidates repeat across neighbouring nodes,
    // so vertex tests are memoized by encoding.
    const ChainRing& R = *amb->ring(1);
    const auto& kappa = R.residue_field();
    std::unordered_map<std::string, bool> vertex_memo;
    auto vertex_cached = [&](const Lattice& X) {
        auto [it, inserted] = vertex_memo.try_emplace(X.encode(), false);
        if (inserted) it->second = is_vertex(X);
        return it->second;
    };
    auto ups = [&](const Lattice& X) {
        std::vector<Lattice> out;
        for (auto& Y : one_step_extensions(X, X.dual()))
            if (vertex_cached(Y)) out.push_back(std::move(Y));
        return out;
    };
    std::unordered_map<std::string, std::optional<Lattice>> down_memo;
    auto downs = [&](const Lattice& X) {
        std::vector<Lattice> out;
        Lattice D = X.dual();
        for (auto& Y : one_step_extensions(D, X.pi_inverse())) {
            auto [it, inserted] = down_memo.try_emplace(Y.encode(), std::nullopt);
            if (inserted) {
                Lattice Z = Y.dual();
                // Z^sharp = Y is already known; vertex means Z <= Y, pi Y <= Z
                bool ok = Y.contains(Z);
                if (ok)
                    for (const auto& r : Y.pi_scaled_rows(1))
                        if (!Z.contains(r)) {
                            ok = false;
                            break;
                        }
                if (ok) it->second = std::move(Z);
            }
            if (it->second) out.push_back(*it->second);
        }
        return out;
    };
    (void)R;
    (void)kappa;

    if (opt.above) {
        // vertex lattices containing a vertex lattice: upward walk only
        if (!is_vertex(*opt.above)) throw NotVertex("'above' must be a vertex lattice");
        std::set<std::string> seen;
        std::deque<Lattice> queue;
        std::vector<Lattice> all;
        seen.insert(opt.above->encode());
        queue.push_back(*opt.above);
        while (!queue.empty()) {
            Lattice cur = std::move(queue.front());
            queue.pop_front();
            for (auto& X : ups(cur))
                if (seen.insert(X.encode()).second) queue.push_back(std::move(X));
            all.push_back(std::move(cur));
        }
        std::vector<Lattice> out;
        for (const auto& L : all)
            if (keep(L) && within_anchor_window(L, b)) out.push_back(L);
        std::sort(out.begin(), out.end());
        return out;
    }

    // closure from the self-dual standard lattice under comparable neighbours
    Lattice seed = unit_lattice(amb, 1);
    std::set<std::string> seen;
    std::deque<Lattice> queue;
    std::vector<Lattice> all;
    seen.insert(seed.encode());
    queue.push_back(seed);
    while (!queue.empty()) {
        Lattice cur = std::move(queue.front());
        queue.pop_front();
        if (all.size() > opt.max_results) throw BoundExceeded("vertex enumeration");
        for (auto& X : ups(cur)) {
            if (!within_anchor_window(X, b)) continue;
            if (seen.insert(X.encode()).second) queue.push_back(std::move(X));
        }
        for (auto& X : downs(cur)) {
            if (!within_anchor_window(X, b)) continue;
            if (seen.insert(X.encode()).second) queue.push_back(std::move(X));
        }
        all.push_back(std::move(cur));
    }
    std::vector<Lattice> out;
    for (const auto& L : all)
        if (keep(L)) out.push_back(L);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Lattice> enumerate_vertex_lattices_brute(const AmbientPtr& amb,
                                                     std::optional<int> type_filter,
                                                     std::optional<Lattice> above) {
    const ChainRing& R = *amb->ring(1);
    const int n = amb->n();
    uint64_t card = 1;
    for (int i = 0; i < n; ++i) {
        card *= R.size();
        if (card > 1000) throw BoundExceeded("brute vertex enumeration");
    }
    std::vector<Row> elements;
    for (uint64_t code = 0; code < card; ++code) {
        Row x(n);
        uint64_t t = code;
        for (int i = 0; i < n; ++i) {
            x[i] = R.decode(t % R.size());
            t /= R.size();
        }
        elements.push_back(std::move(x));
    }
    std::set<std::string> seen;
    std::deque<Lattice> queue;
    std::vector<Lattice> submodules;
    Lattice z = zero_lattice(amb, 1);
    seen.insert(z.encode());
    queue.push_back(z);
    while (!queue.empty()) {
        Lattice cur = std::move(queue.front());
        queue.pop_front();
        submodules.push_back(cur);
        for (const auto& x : elements) {
            if (cur.contains(x)) continue;
            Matrix g = cur.rows();
            g.push_back(x);
            Lattice nxt(amb, 1, std::move(g));
            if (seen.insert(nxt.encode()).second) queue.push_back(nxt);
        }
    }
    std::vector<Lattice> out;
    for (const auto& L : submodules) {
        if (!is_vertex(L)) continue;
        if (type_filter && (*type_filter % 2 != 0 || lattice_type(L) != *type_filter))
            continue;
        if (above && !L.contains(*above)) continue;
        out.push_back(L);
    }
    std::sort(out.begin(), out.end());
    return out;
}

// --- serialization -----------------------------------------------------------

std::string lattice_to_json(const Lattice& L) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : L.rows()) {
        nlohmann::json row = nlohmann::json::array();
        for (const auto& e : r) {
            nlohmann::json a0 = nlohmann::json::array(), a1 = nlohmann::json::array();
            for (int j = 0; j < L.level(); ++j) {
                a0.push_back(e.a0.c[j]);
                a1.push_back(e.a1.c[j]);
            }
            row.push_back(nlohmann::json::array({a0, a1}));
        }
        rows.push_back(row);
    }
    nlohmann::json j{{"n", L.ambient()->n()},
                     {"a", L.ambient()->a()},
                     {"p", L.ambient()->p()},
                     {"m", L.level()},
                     {"rows", rows}};
    return j.dump();
}

Lattice lattice_from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    auto amb = Ambient::make(j.at("n").get<int>(), j.at("p").get<int64_t>(),
                             j.at("a").get<int>());
    int m = j.at("m").get<int>();
    Matrix rows;
    for (const auto& row : j.at("rows")) {
        Row r;
        for (const auto& e : row) {
            ring::CRElem v{};
            for (int jj = 0; jj < m; ++jj) {
                v.a0.c[jj] = e.at(0).at(jj).get<uint32_t>();
                v.a1.c[jj] = e.at(1).at(jj).get<uint32_t>();
            }
            r.push_back(v);
        }
        rows.push_back(std::move(r));
    }
    return Lattice(amb, m, std::move(rows));
}

}  // namespace btstrata::lat
