#include "btstrata/formspace.hpp"

#include <algorithm>

#include <json.hpp>

namespace btstrata::fsp {

using gf::Field;

int rref(const Field& F, SmallMat& M) {
    int rank = 0;
    for (int col = 0; col < M.cols && rank < M.rows; ++col) {
        int piv = -1;
        for (int i = rank; i < M.rows; ++i)
            if (M.at(i, col) != 0) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        for (int j = 0; j < M.cols; ++j)
            std::swap(M.e[size_t(rank) * M.cols + j], M.e[size_t(piv) * M.cols + j]);
        uint32_t inv = F.inv(M.at(rank, col));
        for (int j = 0; j < M.cols; ++j)
            M.at(rank, j) = uint16_t(F.mul(M.at(rank, j), inv));
        for (int i = 0; i < M.rows; ++i) {
            if (i == rank || M.at(i, col) == 0) continue;
            uint32_t c = M.at(i, col);
            for (int j = 0; j < M.cols; ++j)
                M.at(i, j) = uint16_t(F.sub(M.at(i, j), F.mul(c, M.at(rank, j))));
        }
        ++rank;
    }
    M.rows = rank;
    return rank;
}

namespace {

// echelon basis of {x : x . c^t = 0 for all constraint rows c}
SmallMat nullspace(const Field& F, SmallMat constraints) {
    const int D = constraints.cols;
    int rank = rref(F, constraints);
    std::vector<int> pivot_col(rank);
    std::vector<bool> is_pivot(D, false);
    for (int i = 0; i < rank; ++i) {
        int c = 0;
        while (constraints.at(i, c) == 0) ++c;
        pivot_col[i] = c;
        is_pivot[c] = true;
    }
    SmallMat out;
    out.cols = D;
    out.rows = 0;
    for (int f = 0; f < D; ++f) {
        if (is_pivot[f]) continue;
        int r = out.rows++;
        for (int j = 0; j < D; ++j) out.at(r, j) = 0;
        out.at(r, f) = 1;
        for (int i = 0; i < rank; ++i)
            out.at(r, pivot_col[i]) = uint16_t(F.neg(constraints.at(i, f)));
    }
    rref(F, out);
    return out;
}

SmallMat mat_concat(const SmallMat& A, const SmallMat& B) {
    SmallMat C;
    C.cols = A.cols;
    C.rows = A.rows + B.rows;
    for (int i = 0; i < A.rows; ++i)
        for (int j = 0; j < A.cols; ++j) C.at(i, j) = A.at(i, j);
    for (int i = 0; i < B.rows; ++i)
        for (int j = 0; j < B.cols; ++j) C.at(A.rows + i, j) = B.at(i, j);
    return C;
}

}  // namespace

// --- FormSpace ---------------------------------------------------------------

FormSpace::FormSpace(FormKind kind, gf::FieldPtr base, SmallMat gram,
                     std::optional<QuotientOrigin> origin)
    : kind_(kind), dim_(gram.rows), base_(std::move(base)), gram_(gram),
      origin_(std::move(origin)) {
    if (base_->m() != 1) throw BadParameters("base field must be a level-1 field");
    if (gram_.rows != gram_.cols) throw BadParameters("gram must be square");
    const Field& F = *base_;
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) {
            if (kind_ == FormKind::symplectic) {
                if (gram_.at(i, j) != F.neg(gram_.at(j, i)))
                    throw BadParameters("gram not antisymmetric");
                if (i == j && gram_.at(i, i) != 0)
                    throw BadParameters("gram not alternating");
            } else if (gram_.at(i, j) != gram_.at(j, i)) {
                throw BadParameters("gram not symmetric");
            }
        }
    SmallMat tmp = gram_;
    if (dim_ > 0 && rref(F, tmp) != dim_) throw BadParameters("gram degenerate");
    if (kind_ == FormKind::symplectic && dim_ % 2 != 0)
        throw BadParameters("symplectic dimension must be even");
}

FormSpacePtr FormSpace::make(FormKind kind, gf::FieldPtr base, SmallMat gram,
                             std::optional<QuotientOrigin> origin) {
    return FormSpacePtr(new FormSpace(kind, std::move(base), gram, std::move(origin)));
}

FormSpacePtr FormSpace::standard_symplectic(gf::FieldPtr base, int t) {
    SmallMat g;
    g.rows = g.cols = 2 * t;
    uint16_t minus = uint16_t(base->neg(1));
    for (int i = 0; i < t; ++i) {
        g.at(i, 2 * t - 1 - i) = 1;
        g.at(2 * t - 1 - i, i) = minus;
    }
    return make(FormKind::symplectic, std::move(base), g);
}

FormSpacePtr FormSpace::standard_orthogonal_split(gf::FieldPtr base, int dim) {
    SmallMat g;
    g.rows = g.cols = dim;
    for (int i = 0; i < dim; ++i) g.at(i, dim - 1 - i) = 1;
    return make(FormKind::orthogonal, std::move(base), g);
}

const gf::FieldPtr& FormSpace::field(int m) const {
    std::lock_guard<std::mutex> lk(mu_);
    auto it = fields_.find(m);
    if (it == fields_.end())
        it = fields_.emplace(m, Field::make(base_->p(), base_->r(), m)).first;
    return it->second;
}

uint32_t FormSpace::embed_base(int m, uint32_t code) const {
    if (m == 1) return code;
    const auto Fm = field(m);
    std::lock_guard<std::mutex> lk(mu_);
    auto it = embeds_.find(m);
    if (it == embeds_.end()) {
        std::vector<uint32_t> table(base_->size());
        if (base_->r() == 1) {
            for (uint32_t c = 0; c < base_->size(); ++c) table[c] = c;
        } else {
            uint32_t root = 0;
            bool found = false;
            for (uint32_t cand = 0; cand < Fm->size() && !found; ++cand) {
                uint32_t acc = Fm->from_int(base_->modulus().back());
                for (int i = base_->degree() - 1; i >= 0; --i)
                    acc = Fm->add(Fm->mul(acc, cand), Fm->from_int(base_->modulus()[i]));
                if (acc == 0) {
                    root = cand;
                    found = true;
                }
            }
            if (!found) throw Error("no embedding root found");
            for (uint32_t c = 0; c < base_->size(); ++c) {
                auto coeffs = base_->coeffs(c);
                uint32_t acc = 0, pw = Fm->one();
                for (int i = 0; i < base_->degree(); ++i) {
                    acc = Fm->add(acc, Fm->mul(Fm->from_int(coeffs[i]), pw));
                    pw = Fm->mul(pw, root);
                }
                table[c] = acc;
            }
        }
        it = embeds_.emplace(m, std::move(table)).first;
    }
    return it->second[code];
}

const SmallMat& FormSpace::gram_at(int m) const {
    if (m == 1) return gram_;
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = grams_.find(m);
        if (it != grams_.end()) return it->second;
    }
    SmallMat g = gram_;
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j)
            g.at(i, j) = uint16_t(embed_base(m, gram_.at(i, j)));
    std::lock_guard<std::mutex> lk(mu_);
    return grams_.emplace(m, g).first->second;
}

uint32_t FormSpace::form(int m, const uint16_t* x, const uint16_t* y) const {
    const Field& F = *field(m);
    const SmallMat& G = gram_at(m);
    uint32_t acc = 0;
    for (int i = 0; i < dim_; ++i) {
        if (x[i] == 0) continue;
        uint32_t row = 0;
        for (int j = 0; j < dim_; ++j)
            if (y[j] != 0) row = F.add(row, F.mul(G.at(i, j), y[j]));
        acc = F.add(acc, F.mul(x[i], row));
    }
    return acc;
}

int FormSpace::witt_index() const {
    {
        std::lock_guard<std::mutex> lk(mu_);
        if (witt_) return *witt_;
    }
    int w = 0;
    auto self = shared_from_this();
    for (int d = 1; d <= dim_; ++d) {
        bool found = false;
        for_each_subspace(self, 1, d, SubspaceConstraint::isotropic,
                          [&](const Subspace&) {
                              found = true;
                              return false;
                          });
        if (!found) break;
        w = d;
    }
    std::lock_guard<std::mutex> lk(mu_);
    witt_ = w;
    return w;
}

// --- Subspace ----------------------------------------------------------------

Subspace::Subspace(FormSpacePtr sp, int m, SmallMat basis)
    : sp_(std::move(sp)), m_(m), basis_(basis) {
    if (basis_.cols != sp_->dim()) throw SpaceMismatch("basis width");
    rref(*sp_->field(m_), basis_);
}

bool Subspace::operator==(const Subspace& o) const {
    if (sp_.get() != o.sp_.get() || m_ != o.m_ || basis_.rows != o.basis_.rows)
        return false;
    for (int i = 0; i < basis_.rows; ++i)
        for (int j = 0; j < basis_.cols; ++j)
            if (basis_.at(i, j) != o.basis_.at(i, j)) return false;
    return true;
}

std::string Subspace::encode() const {
    std::string s;
    s.push_back(char(basis_.rows));
    for (int i = 0; i < basis_.rows; ++i)
        for (int j = 0; j < basis_.cols; ++j) {
            s.push_back(char(basis_.at(i, j) & 0xff));
            s.push_back(char(basis_.at(i, j) >> 8));
        }
    return s;
}

Subspace Subspace::sum(const Subspace& o) const {
    check(o);
    return Subspace(sp_, m_, mat_concat(basis_, o.basis_));
}

Subspace Subspace::intersect(const Subspace& o) const {
    check(o);
    const Field& F = *sp_->field(m_);
    SmallMat cu = nullspace(F, basis_), cv = nullspace(F, o.basis_);
    return Subspace(sp_, m_, nullspace(F, mat_concat(cu, cv)));
}

Subspace Subspace::dual() const {
    const Field& F = *sp_->field(m_);
    const SmallMat& G = sp_->gram_at(m_);
    SmallMat constraints;
    constraints.rows = basis_.rows;
    constraints.cols = basis_.cols;
    for (int k = 0; k < basis_.rows; ++k)
        for (int c = 0; c < basis_.cols; ++c) {
            uint32_t acc = 0;
            for (int j = 0; j < basis_.cols; ++j)
                acc = F.add(acc, F.mul(G.at(c, j), basis_.at(k, j)));
            constraints.at(k, c) = uint16_t(acc);
        }
    return Subspace(sp_, m_, nullspace(F, constraints));
}

Subspace Subspace::frobenius() const {
    const Field& F = *sp_->field(m_);
    SmallMat b = basis_;
    for (int i = 0; i < b.rows; ++i)
        for (int j = 0; j < b.cols; ++j) b.at(i, j) = uint16_t(F.frobenius(b.at(i, j)));
    return Subspace(sp_, m_, b);
}

bool Subspace::contains_vector(const uint16_t* x) const {
    const Field& F = *sp_->field(m_);
    std::array<uint16_t, 8> w{};
    for (int j = 0; j < basis_.cols; ++j) w[j] = x[j];
    for (int i = 0; i < basis_.rows; ++i) {
        int c = 0;
        while (c < basis_.cols && basis_.at(i, c) == 0) ++c;
        if (c >= basis_.cols || w[c] == 0) continue;
        uint32_t f = w[c];
        for (int j = 0; j < basis_.cols; ++j)
            w[j] = uint16_t(F.sub(w[j], F.mul(f, basis_.at(i, j))));
    }
    for (int j = 0; j < basis_.cols; ++j)
        if (w[j] != 0) return false;
    return true;
}

bool Subspace::contains(const Subspace& o) const {
    check(o);
    for (int i = 0; i < o.basis_.rows; ++i) {
        std::array<uint16_t, 8> x{};
        for (int j = 0; j < o.basis_.cols; ++j) x[j] = o.basis_.at(i, j);
        if (!contains_vector(x.data())) return false;
    }
    return true;
}

bool Subspace::is_isotropic() const {
    for (int i = 0; i < basis_.rows; ++i)
        for (int k = i; k < basis_.rows; ++k)
            if (sp_->form(m_, &basis_.e[size_t(i) * basis_.cols],
                          &basis_.e[size_t(k) * basis_.cols]) != 0)
                return false;
    return true;
}

Subspace Subspace::at_level(int m) const {
    if (m == m_) return *this;
    if (m_ != 1) throw BadParameters("level change only from level 1");
    SmallMat b = basis_;
    for (int i = 0; i < b.rows; ++i)
        for (int j = 0; j < b.cols; ++j)
            b.at(i, j) = uint16_t(sp_->embed_base(m, b.at(i, j)));
    return Subspace(sp_, m, b);
}

Subspace Subspace::zero(FormSpacePtr sp, int m) {
    SmallMat b;
    b.rows = 0;
    b.cols = sp->dim();
    return Subspace(std::move(sp), m, b);
}

Subspace Subspace::full(FormSpacePtr sp, int m) {
    SmallMat b;
    b.rows = b.cols = sp->dim();
    for (int i = 0; i < b.cols; ++i) b.at(i, i) = 1;
    return Subspace(std::move(sp), m, b);
}

// --- enumeration -------------------------------------------------------------

uint64_t gaussian_binomial(uint64_t q, int n, int k) {
    if (k < 0 || k > n) return 0;
    using u128 = unsigned __int128;
    u128 res = 1;
    for (int i = 1; i <= k; ++i) {
        u128 qn = 1, qi = 1;
        for (int j = 0; j < n - k + i; ++j) qn *= q;
        for (int j = 0; j < i; ++j) qi *= q;
        res = res * (qn - 1) / (qi - 1);  // partial products are binomials
        if (res > u128(UINT64_MAX)) throw BoundExceeded("gaussian binomial overflow");
    }
    return uint64_t(res);
}

void for_each_subspace(const FormSpacePtr& sp, int m, int d,
                       SubspaceConstraint constraint,
                       const std::function<bool(const Subspace&)>& fn,
                       uint64_t max_count) {
    const int D = sp->dim();
    if (d < 0 || d > D) return;
    const Field& F = *sp->field(m);
    const uint64_t q = F.size();
    if (d == 0) {
        fn(Subspace::zero(sp, m));
        return;
    }
    const SmallMat& G = sp->gram_at(m);
    const bool iso = constraint == SubspaceConstraint::isotropic;
    const bool orth = sp->kind() == FormKind::orthogonal;

    std::vector<int> piv(d);
    uint64_t emitted = 0;
    bool stop = false;

    SmallMat rows;
    rows.rows = d;
    rows.cols = D;

    auto weight = [&](int row_idx, std::array<uint16_t, 8>& w) {
        for (int c = 0; c < D; ++c) {
            uint32_t acc = 0;
            for (int j = 0; j < D; ++j) {
                uint16_t rv = rows.at(row_idx, j);
                if (rv) acc = F.add(acc, F.mul(rv, G.at(j, c)));
            }
            w[c] = uint16_t(acc);
        }
    };

    std::function<void(int)> fill = [&](int i) {
        if (stop) return;
        if (i == d) {
            Subspace U(sp, m, rows);
            if (++emitted > max_count) throw BoundExceeded("subspace enumeration");
            if (!fn(U)) stop = true;
            return;
        }
        std::vector<int> free_cols;
        for (int c = piv[i] + 1; c < D; ++c) {
            bool is_piv = false;
            for (int k = 0; k < d; ++k)
                if (piv[k] == c) is_piv = true;
            if (!is_piv) free_cols.push_back(c);
        }
        const int f = int(free_cols.size());
        std::array<uint16_t, 8> base{};
        base[piv[i]] = 1;

        SmallMat E;
        E.cols = std::max(f, 1);
        std::vector<uint32_t> rhs;
        int ncons = 0;
        if (iso) {
            for (int k = 0; k < i; ++k) {
                std::array<uint16_t, 8> w{};
                weight(k, w);
                for (int c = 0; c < f; ++c) E.at(ncons, c) = w[free_cols[c]];
                rhs.push_back(F.neg(w[piv[i]]));
                ++ncons;
            }
        }
        E.rows = ncons;
        std::vector<int> pivot_of;
        std::vector<bool> used(std::max(f, 1), false);
        int rank = 0;
        for (int col = 0; col < f && rank < ncons; ++col) {
            int pr = -1;
            for (int r = rank; r < ncons; ++r)
                if (E.at(r, col) != 0) {
                    pr = r;
                    break;
                }
            if (pr < 0) continue;
            for (int j = 0; j < f; ++j)
                std::swap(E.e[size_t(rank) * E.cols + j], E.e[size_t(pr) * E.cols + j]);
            std::swap(rhs[rank], rhs[pr]);
            uint32_t inv = F.inv(E.at(rank, col));
            for (int j = 0; j < f; ++j) E.at(rank, j) = uint16_t(F.mul(E.at(rank, j), inv));
            rhs[rank] = F.mul(rhs[rank], inv);
            for (int r = 0; r < ncons; ++r) {
                if (r == rank || E.at(r, col) == 0) continue;
                uint32_t cc = E.at(r, col);
                for (int j = 0; j < f; ++j)
                    E.at(r, j) = uint16_t(F.sub(E.at(r, j), F.mul(cc, E.at(rank, j))));
                rhs[r] = F.sub(rhs[r], F.mul(cc, rhs[rank]));
            }
            pivot_of.push_back(col);
            used[col] = true;
            ++rank;
        }
        for (int r = rank; r < ncons; ++r)
            if (rhs[r] != 0) return;  // inconsistent prefix
        std::vector<int> free_free;
        for (int c = 0; c < f; ++c)
            if (!used[c]) free_free.push_back(c);
        const int nf = int(free_free.size());

        std::vector<uint32_t> assign(std::max(nf, 1), 0);
        while (true) {
            std::array<uint16_t, 8> z{};
            for (int c = 0; c < nf; ++c) z[free_free[c]] = uint16_t(assign[c]);
            for (int r = 0; r < rank; ++r) {
                uint32_t v = rhs[r];
                for (int c = 0; c < nf; ++c)
                    if (assign[c])
                        v = F.sub(v, F.mul(E.at(r, free_free[c]), uint32_t(assign[c])));
                z[pivot_of[r]] = uint16_t(v);
            }
            for (int c = 0; c < D; ++c) rows.at(i, c) = base[c];
            for (int c = 0; c < f; ++c) rows.at(i, free_cols[c]) = z[c];
            bool ok = true;
            if (iso && orth &&
                sp->form(m, &rows.e[size_t(i) * D], &rows.e[size_t(i) * D]) != 0)
                ok = false;
            if (ok) fill(i + 1);
            if (stop) return;
            int c = 0;
            for (; c < nf; ++c) {
                if (++assign[c] < q) break;
                assign[c] = 0;
            }
            if (c == nf || nf == 0) break;
        }
    };

    for (int i = 0; i < d; ++i) piv[i] = i;
    while (!stop) {
        fill(0);
        int i = d - 1;
        while (i >= 0 && piv[i] == D - d + i) --i;
        if (i < 0) break;
        ++piv[i];
        for (int k = i + 1; k < d; ++k) piv[k] = piv[k - 1] + 1;
    }
}

std::vector<Subspace> enumerate_subspaces(const FormSpacePtr& sp, int m, int d,
                                          SubspaceConstraint constraint,
                                          uint64_t max_count) {
    std::vector<Subspace> out;
    for_each_subspace(
        sp, m, d, constraint,
        [&](const Subspace& U) {
            out.push_back(U);
            return true;
        },
        max_count);
    return out;
}

void for_each_subspace_of(const Subspace& inside, int d,
                          const std::function<bool(const Subspace&)>& fn) {
    const auto& sp = inside.space();
    const int m = inside.level();
    const Field& F = *sp->field(m);
    const int k = inside.dim(), D = sp->dim();
    if (d < 0 || d > k) return;
    if (d == 0) {
        fn(Subspace::zero(sp, m));
        return;
    }
    std::vector<int> piv(d);
    bool stop = false;
    std::vector<uint32_t> entries(size_t(d) * k, 0);
    std::function<void(int)> fill = [&](int i) {
        if (stop) return;
        if (i == d) {
            SmallMat b;
            b.rows = d;
            b.cols = D;
            for (int r = 0; r < d; ++r)
                for (int c = 0; c < D; ++c) {
                    uint32_t acc = 0;
                    for (int j = 0; j < k; ++j)
                        if (entries[size_t(r) * k + j])
                            acc = F.add(acc, F.mul(entries[size_t(r) * k + j],
                                                   inside.basis().at(j, c)));
                    b.at(r, c) = uint16_t(acc);
                }
            if (!fn(Subspace(sp, m, b))) stop = true;
            return;
        }
        std::vector<int> free_cols;
        for (int c = piv[i] + 1; c < k; ++c) {
            bool is_piv = false;
            for (int kk = 0; kk < d; ++kk)
                if (piv[kk] == c) is_piv = true;
            if (!is_piv) free_cols.push_back(c);
        }
        std::vector<uint32_t> assign(std::max<size_t>(free_cols.size(), 1), 0);
        while (true) {
            for (int j = 0; j < k; ++j) entries[size_t(i) * k + j] = 0;
            entries[size_t(i) * k + piv[i]] = 1;
            for (size_t c = 0; c < free_cols.size(); ++c)
                entries[size_t(i) * k + free_cols[c]] = assign[c];
            fill(i + 1);
            if (stop) return;
            size_t c = 0;
            for (; c < free_cols.size(); ++c) {
                if (++assign[c] < F.size()) break;
                assign[c] = 0;
            }
            if (c == free_cols.size() || free_cols.empty()) break;
        }
    };
    for (int i = 0; i < d; ++i) piv[i] = i;
    while (!stop) {
        fill(0);
        int i = d - 1;
        while (i >= 0 && piv[i] == k - d + i) --i;
        if (i < 0) break;
        ++piv[i];
        for (int kk = i + 1; kk < d; ++kk) piv[kk] = piv[kk - 1] + 1;
    }
}

void for_each_echelon(const gf::FieldPtr& F, int D, int d,
                      const std::function<bool(const SmallMat&)>& fn) {
    if (d < 0 || d > D) return;
    SmallMat b;
    b.rows = d;
    b.cols = D;
    if (d == 0) {
        fn(b);
        return;
    }
    std::vector<int> piv(d);
    bool stop = false;
    std::function<void(int)> fill = [&](int i) {
        if (stop) return;
        if (i == d) {
            if (!fn(b)) stop = true;
            return;
        }
        std::vector<int> free_cols;
        for (int c = piv[i] + 1; c < D; ++c) {
            bool is_piv = false;
            for (int k = 0; k < d; ++k)
                if (piv[k] == c) is_piv = true;
            if (!is_piv) free_cols.push_back(c);
        }
        std::vector<uint32_t> assign(std::max<size_t>(free_cols.size(), 1), 0);
        while (true) {
            for (int c = 0; c < D; ++c) b.at(i, c) = 0;
            b.at(i, piv[i]) = 1;
            for (size_t c = 0; c < free_cols.size(); ++c)
                b.at(i, free_cols[c]) = uint16_t(assign[c]);
            fill(i + 1);
            if (stop) return;
            size_t c = 0;
            for (; c < free_cols.size(); ++c) {
                if (++assign[c] < F->size()) break;
                assign[c] = 0;
            }
            if (c == free_cols.size() || free_cols.empty()) break;
        }
    };
    for (int i = 0; i < d; ++i) piv[i] = i;
    while (!stop) {
        fill(0);
        int i = d - 1;
        while (i >= 0 && piv[i] == D - d + i) --i;
        if (i < 0) break;
        ++piv[i];
        for (int k = i + 1; k < d; ++k) piv[k] = piv[k - 1] + 1;
    }
}

std::vector<lat::Row> quotient_basis(const lat::Lattice& lo, const lat::Lattice& hi,
                                     int dim) {
    using lat::Lattice;
    const auto& amb = lo.ambient();
    const ring::ChainRing& R = *amb->ring(1);
    std::vector<lat::Row> basis;
    Lattice cur = lo;
    for (const auto& r : hi.rows()) {
        for (int j = 0; j < R.N() && int(basis.size()) < dim; ++j) {
            lat::Row cand(amb->n());
            for (int c = 0; c < amb->n(); ++c) cand[c] = R.mul_pi_pow(r[c], j);
            if (cur.contains(cand)) continue;
            lat::Matrix g = cur.rows();
            g.push_back(cand);
            cur = Lattice(amb, 1, std::move(g));
            basis.push_back(std::move(cand));
        }
    }
    if (int(basis.size()) != dim) throw Error("quotient basis extraction failed");
    return basis;
}

lat::Lattice lattice_from_coords(const lat::Lattice& lo_level1,
                                 const std::vector<lat::Row>& basis, int m,
                                 const SmallMat& coords) {
    const auto& amb = lo_level1.ambient();
    const ring::ChainRing& R = *amb->ring(m);
    lat::Lattice lo = lo_level1.embed(m);
    lat::Matrix g = lo.rows();
    for (int i = 0; i < coords.rows; ++i) {
        lat::Row x(amb->n(), R.zero());
        for (int bidx = 0; bidx < int(basis.size()); ++bidx) {
            uint16_t c = coords.at(i, bidx);
            if (!c) continue;
            ring::CRElem lc = R.lift_code(c);
            for (int j = 0; j < amb->n(); ++j) {
                ring::CRElem be{};
                be.a0.c[0] = basis[bidx][j].a0.c[0];
                be.a1.c[0] = basis[bidx][j].a1.c[0];
                x[j] = R.add(x[j], R.mul(lc, be));
            }
        }
        g.push_back(std::move(x));
    }
    return lat::Lattice(amb, m, std::move(g));
}

// --- quotient spaces of a vertex lattice --------------------------------------

namespace {

FormSpacePtr quotient_space(const lat::Lattice& vertex, FormKind kind) {
    using lat::Lattice;
    if (vertex.level() != 1) throw BadParameters("anchor must be rational (level 1)");
    if (!lat::is_vertex(vertex)) throw NotVertex();
    const auto& amb = vertex.ambient();
    Lattice lo = kind == FormKind::symplectic ? vertex : vertex.dual();
    Lattice hi = kind == FormKind::symplectic ? vertex.dual() : vertex.pi_inverse();
    int dim = hi.length() - lo.length();
    if (dim == 0) {
        if (kind == FormKind::symplectic) throw ZeroType();
        throw ZeroDim();
    }
    std::vector<lat::Row> basis = quotient_basis(lo, hi, dim);
    const int digit = kind == FormKind::symplectic ? 1 : 2;
    SmallMat gram;
    gram.rows = gram.cols = dim;
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            gram.at(i, j) = uint16_t(amb->form_digit(1, basis[i], basis[j], digit));
    auto base = gf::Field::make(amb->p(), 1, 1);
    QuotientOrigin origin{vertex, std::move(lo), std::move(hi), std::move(basis), digit};
    return FormSpace::make(kind, std::move(base), gram, std::move(origin));
}

}  // namespace

FormSpacePtr symplectic_quotient(const lat::Lattice& vertex) {
    return quotient_space(vertex, FormKind::symplectic);
}

FormSpacePtr orthogonal_quotient(const lat::Lattice& vertex) {
    return quotient_space(vertex, FormKind::orthogonal);
}

lat::Lattice lattice_of_subspace(const FormSpacePtr& sp, const Subspace& U) {
    if (!sp->origin()) throw BadParameters("form space has no lattice origin");
    const auto& org = *sp->origin();
    const int m = U.level();
    const auto& amb = org.anchor.ambient();
    const ring::ChainRing& R = *amb->ring(m);
    lat::Lattice lo = org.lo.embed(m);
    lat::Matrix g = lo.rows();
    for (int i = 0; i < U.dim(); ++i) {
        lat::Row x(amb->n(), R.zero());
        for (int bidx = 0; bidx < sp->dim(); ++bidx) {
            uint16_t c = U.basis().at(i, bidx);
            if (!c) continue;
            ring::CRElem lc = R.lift_code(c);
            for (int j = 0; j < amb->n(); ++j) {
                ring::CRElem be{};
                be.a0.c[0] = org.basis[bidx][j].a0.c[0];
                be.a1.c[0] = org.basis[bidx][j].a1.c[0];
                x[j] = R.add(x[j], R.mul(lc, be));
            }
        }
        g.push_back(std::move(x));
    }
    return lat::Lattice(amb, m, std::move(g));
}

Subspace subspace_of_lattice(const FormSpacePtr& sp, const lat::Lattice& M) {
    if (!sp->origin()) throw BadParameters("form space has no lattice origin");
    const auto& org = *sp->origin();
    const int m = M.level();
    const auto& amb = org.anchor.ambient();
    const ring::ChainRing& R = *amb->ring(m);
    lat::Lattice lo = org.lo.embed(m);
    lat::Lattice hi = org.hi.embed(m);
    if (!M.contains(lo) || !hi.contains(M)) throw NotSandwiched();
    lat::Matrix S;
    for (const auto& b : org.basis) {
        lat::Row be(amb->n());
        for (int j = 0; j < amb->n(); ++j) {
            ring::CRElem e{};
            e.a0.c[0] = b[j].a0.c[0];
            e.a1.c[0] = b[j].a1.c[0];
            be[j] = e;
        }
        S.push_back(std::move(be));
    }
    for (const auto& r : lo.rows()) S.push_back(r);
    SmallMat coords;
    coords.rows = int(M.rows().size());
    coords.cols = sp->dim();
    for (size_t i = 0; i < M.rows().size(); ++i) {
        auto u = lat::solve(R, S, M.rows()[i]);
        if (!u) throw NotSandwiched("row not expressible in the quotient frame");
        for (int bidx = 0; bidx < sp->dim(); ++bidx)
            coords.at(int(i), bidx) = uint16_t(R.resid_code((*u)[bidx]));
    }
    return Subspace(sp, m, coords);
}

// --- serialization -----------------------------------------------------------

std::string formspace_to_json(const FormSpace& sp) {
    nlohmann::json gram = nlohmann::json::array();
    for (int i = 0; i < sp.dim(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int j = 0; j < sp.dim(); ++j) row.push_back(sp.gram().at(i, j));
        gram.push_back(row);
    }
    nlohmann::json j{
        {"kind", sp.kind() == FormKind::symplectic ? "symplectic" : "orthogonal"},
        {"dim", sp.dim()},
        {"q", sp.base()->q()},
        {"p", sp.base()->p()},
        {"r", sp.base()->r()},
        {"gram", gram}};
    return j.dump();
}

FormSpacePtr formspace_from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    auto base = gf::Field::make(j.at("p").get<int64_t>(), j.at("r").get<int>(), 1);
    SmallMat gram;
    gram.rows = gram.cols = j.at("dim").get<int>();
    for (int i = 0; i < gram.rows; ++i)
        for (int jj = 0; jj < gram.cols; ++jj)
            gram.at(i, jj) = j.at("gram").at(i).at(jj).get<uint16_t>();
    FormKind kind = j.at("kind").get<std::string>() == "symplectic"
                        ? FormKind::symplectic
                        : FormKind::orthogonal;
    return FormSpace::make(kind, std::move(base), gram);
}

std::string subspace_to_json(const Subspace& U) {
    nlohmann::json basis = nlohmann::json::array();
    for (int i = 0; i < U.dim(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int j = 0; j < U.basis().cols; ++j) row.push_back(U.basis().at(i, j));
        basis.push_back(row);
    }
    nlohmann::json j{{"dim", U.dim()}, {"m", U.level()}, {"basis", basis}};
    return j.dump();
}

Subspace subspace_from_json(const FormSpacePtr& sp, const std::string& text) {
    auto j = nlohmann::json::parse(text);
    SmallMat b;
    b.rows = j.at("dim").get<int>();
    b.cols = sp->dim();
    for (int i = 0; i < b.rows; ++i)
        for (int jj = 0; jj < b.cols; ++jj)
            b.at(i, jj) = j.at("basis").at(i).at(jj).get<uint16_t>();
    return Subspace(sp, j.at("m").get<int>(), b);
}

}  // namespace btstrata::fsp
