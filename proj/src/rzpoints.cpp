#include "btstrata/rzpoints.hpp"

#include <algorithm>
#include <random>
#include <set>

namespace btstrata::rz {

using fsp::FormSpacePtr;
using fsp::SmallMat;
using fsp::Subspace;
using lat::Lattice;
using lat::Matrix;
using lat::Row;

namespace {

bool rows_in(const Matrix& rows, const Lattice& L) {
    for (const auto& r : rows)
        if (!L.contains(r)) return false;
    return true;
}

int anchor_type(const StratumRef& ref) { return lat::lattice_type(ref.anchor); }

void validate_ref(const StratumRef& ref) {
    if (ref.anchor.level() != 1) throw BadParameters("anchor must be rational");
    if (!lat::is_vertex(ref.anchor)) throw NotVertex();
    const int n = ref.anchor.ambient()->n();
    if (n % 2 == 0 && 2 * ref.h == n) throw PiModularExcluded();
    if (ref.h < 0 || 2 * ref.h > n) throw BadParameters("h out of range");
    int t2 = anchor_type(ref);
    if (ref.kind == StratumKind::Z && t2 < 2 * ref.h)
        throw BadParameters("Z stratum needs type >= 2h");
    if (ref.kind == StratumKind::Y && t2 > 2 * ref.h)
        throw BadParameters("Y stratum needs type <= 2h");
}

}  // namespace

ConditionBreakdown check_conditions(const StratumRef& ref, int m,
                                    const DieudonnePair& pt) {
    ConditionBreakdown out;
    const int t2 = anchor_type(ref);
    const int t = t2 / 2;
    Lattice anchor_m = ref.anchor.embed(m);
    Lattice anchor_dual_m = ref.anchor.dual().embed(m);
    const Lattice& M = pt.M;
    const Lattice& Mp = pt.Mprime;
    Lattice Msharp = M.dual();

    out.index_2h = Msharp.contains(M) && rows_in(Msharp.pi_scaled_rows(1), M) &&
                   (Msharp.length() - M.length() == 2 * ref.h);
    try {
        Lattice T = M.tau_inv();
        out.tau_sandwich = rows_in(M.pi_scaled_rows(1), T) && M.pi_inverse().contains(T);
    } catch (const WindowOverflow&) {
        out.tau_sandwich = false;
    }
    Lattice TMs = Msharp.tau_inv();
    out.v_in_mprime = rows_in(TMs.pi_scaled_rows(1), Mp);
    out.mprime_window = TMs.contains(Mp) && Msharp.contains(Mp);
    out.mprime_length = Msharp.contains(Mp) && (Msharp.length() - Mp.length() == 1);

    if (t == ref.h) {
        out.stratum_sandwich = M == anchor_m;
    } else if (ref.kind == StratumKind::Z) {
        out.stratum_sandwich = M.contains(anchor_m) && anchor_dual_m.contains(Msharp) &&
                               Mp.contains(anchor_m);
    } else {
        out.stratum_sandwich = anchor_m.contains(M) && Msharp.contains(anchor_dual_m) &&
                               Mp.contains(anchor_dual_m);
    }
    return out;
}

StratumSet rz_points_raw(const StratumRef& ref, int m) {
    validate_ref(ref);
    StratumSet out;
    out.ref = ref;
    out.m = m;
    const int t = anchor_type(ref) / 2;
    const int h = ref.h;
    const auto& amb = ref.anchor.ambient();

    auto consider = [&](Lattice M, Lattice Mp) {
        ++out.stats.candidates;
        DieudonnePair pt{std::move(M), std::move(Mp)};
        ConditionBreakdown bd = check_conditions(ref, m, pt);
        if (bd.all()) {
            ++out.stats.accepted;
            out.points.push_back(std::move(pt));
        } else if (bd.non_automatic()) {
            // the paper derives these from the sandwich; a failure here would
            // contradict the transcription
            ++out.stats.automatic_violations;
        }
    };

    if (t == h) {
        // worst point: M is the anchor, M' runs over hyperplane preimages of
        // M^sharp / pi M^sharp
        Lattice M = ref.anchor.embed(m);
        Lattice hi = ref.anchor.dual();
        Lattice lo = hi.pi_scale(1);
        const int n = amb->n();
        auto basis = fsp::quotient_basis(lo, hi, n);
        auto F = gf::Field::make(amb->p(), 1, m);
        fsp::for_each_echelon(F, n, n - 1, [&](const SmallMat& coords) {
            consider(M, fsp::lattice_from_coords(lo, basis, m, coords));
            return true;
        });
    } else if (ref.kind == StratumKind::Z) {
        auto sp = fsp::symplectic_quotient(ref.anchor);
        fsp::for_each_subspace(
            sp, m, t - h, fsp::SubspaceConstraint::isotropic, [&](const Subspace& A) {
                Lattice M = fsp::lattice_of_subspace(sp, A);
                Subspace Ssharp = fsp::subspace_of_lattice(sp, M.dual());
                fsp::for_each_subspace_of(Ssharp, t + h - 1, [&](const Subspace& B) {
                    consider(M, fsp::lattice_of_subspace(sp, B));
                    return true;
                });
                return true;
            });
    } else {
        auto spo = fsp::orthogonal_quotient(ref.anchor);
        fsp::for_each_subspace(
            spo, m, h - t, fsp::SubspaceConstraint::isotropic, [&](const Subspace& A) {
                Lattice Msharp = fsp::lattice_of_subspace(spo, A);
                Lattice M = Msharp.dual();
                fsp::for_each_subspace_of(A, h - t - 1, [&](const Subspace& B) {
                    consider(M, fsp::lattice_of_subspace(spo, B));
                    return true;
                });
                return true;
            });
    }
    std::sort(out.points.begin(), out.points.end(),
              [](const DieudonnePair& x, const DieudonnePair& y) {
                  return x.encode() < y.encode();
              });
    return out;
}

std::vector<std::string> StratumSet::keys() const {
    std::vector<std::string> k;
    k.reserve(points.size());
    for (const auto& p : points) k.push_back(p.encode());
    return k;
}

dl::StratumPointQ f_Z(const FormSpacePtr& spV, const DieudonnePair& pt) {
    return {fsp::subspace_of_lattice(spV, pt.M.tau_inv()),
            fsp::subspace_of_lattice(spV, pt.Mprime)};
}

DieudonnePair f_Z_inverse(const FormSpacePtr& spV, const dl::StratumPointQ& qpt) {
    return {fsp::lattice_of_subspace(spV, qpt.U.frobenius()),
            fsp::lattice_of_subspace(spV, qpt.Uprime)};
}

dl::StratumPointQ f_Y(const FormSpacePtr& spV, const DieudonnePair& pt) {
    return {fsp::subspace_of_lattice(spV, pt.M.dual().tau_inv()),
            fsp::subspace_of_lattice(spV, pt.Mprime)};
}

DieudonnePair f_Y_inverse(const FormSpacePtr& spV, const dl::StratumPointQ& qpt) {
    return {fsp::lattice_of_subspace(spV, qpt.U.frobenius()).dual(),
            fsp::lattice_of_subspace(spV, qpt.Uprime)};
}

namespace {

Lattice tau_stabilize(const Lattice& L) {
    Lattice cur = L;
    const int cap = 2 * L.ambient()->n() * L.ambient()->a() + 4;
    for (int i = 0; i < cap; ++i) {
        Lattice nxt = cur.sum(cur.tau());
        if (nxt == cur) return cur;
        cur = std::move(nxt);
    }
    throw NotStable("tau-stabilization did not terminate in the window");
}

}  // namespace

lat::Lattice maximal_vertex_of(const lat::Lattice& M) {
    Lattice stab = tau_stabilize(M.dual());
    return lat::rational_descent(stab).dual();
}

lat::Lattice minimal_vertex_of(const lat::Lattice& M) {
    return lat::rational_descent(tau_stabilize(M));
}

std::vector<rep::CheckLine> check_oracle_equivalence(const StratumRef& ref, int m) {
    std::vector<rep::CheckLine> lines;
    const int t = anchor_type(ref) / 2;
    const int h = ref.h;
    const int n = ref.anchor.ambient()->n();
    std::map<std::string, int64_t> params{{"n", n},
                                          {"h", h},
                                          {"t", t},
                                          {"m", m},
                                          {"p", ref.anchor.ambient()->p()}};
    StratumSet raw = rz_points_raw(ref, m);
    params["raw_points"] = int64_t(raw.points.size());
    params["candidates"] = int64_t(raw.stats.candidates);

    rep::CheckLine aud;
    aud.check_id = "rz.automatic_conditions";
    aud.params = params;
    aud.params["violations"] = int64_t(raw.stats.automatic_violations);
    aud.pass = raw.stats.automatic_violations == 0;
    lines.push_back(aud);

    if (t == h) {
        uint64_t qm = gf::Field::make(ref.anchor.ambient()->p(), 1, m)->size();
        rep::CheckLine wc;
        wc.check_id = "rz.worst_point_count";
        wc.params = params;
        wc.params["expected"] = int64_t(dl::projective_space_count(qm, n - 1));
        wc.pass = raw.points.size() == dl::projective_space_count(qm, n - 1);
        lines.push_back(wc);
        return lines;
    }

    const bool zside = ref.kind == StratumKind::Z;
    FormSpacePtr sp = zside ? fsp::symplectic_quotient(ref.anchor)
                            : fsp::orthogonal_quotient(ref.anchor);
    std::vector<dl::StratumPointQ> model =
        zside ? dl::enumerate_Sprime(sp, h, m) : dl::enumerate_Rprime(sp, h, t, m);
    std::set<std::string> model_keys;
    for (const auto& P : model) model_keys.insert(P.encode());

    bool bijection = model.size() == raw.points.size();
    bool round_trip = true;
    std::set<std::string> image;
    for (const auto& pt : raw.points) {
        dl::StratumPointQ q = zside ? f_Z(sp, pt) : f_Y(sp, pt);
        image.insert(q.encode());
        DieudonnePair back = zside ? f_Z_inverse(sp, q) : f_Y_inverse(sp, q);
        if (!(back == pt)) round_trip = false;
    }
    bijection = bijection && image == model_keys;

    rep::CheckLine bij;
    bij.check_id = zside ? "rz.f_Z_bijection" : "rz.f_Y_bijection";
    bij.params = params;
    bij.params["model_points"] = int64_t(model.size());
    bij.pass = bijection;
    lines.push_back(bij);

    rep::CheckLine rt;
    rt.check_id = zside ? "rz.f_Z_round_trip" : "rz.f_Y_round_trip";
    rt.params = params;
    rt.pass = round_trip;
    lines.push_back(rt);
    return lines;
}

namespace {

std::vector<const DieudonnePair*> set_intersection_pts(const StratumSet& A,
                                                       const StratumSet& B) {
    std::vector<const DieudonnePair*> out;
    size_t i = 0, j = 0;
    auto ka = A.keys(), kb = B.keys();
    while (i < ka.size() && j < kb.size()) {
        if (ka[i] == kb[j]) {
            out.push_back(&A.points[i]);
            ++i;
            ++j;
        } else if (ka[i] < kb[j]) {
            ++i;
        } else {
            ++j;
        }
    }
    return out;
}

bool subset_keys(const StratumSet& A, const StratumSet& B) {
    auto ka = A.keys(), kb = B.keys();
    return std::includes(kb.begin(), kb.end(), ka.begin(), ka.end());
}

template <typename T>
std::vector<std::pair<size_t, size_t>> pair_schedule(size_t count_a, size_t count_b,
                                                     bool symmetric, uint64_t cap,
                                                     uint64_t seed, T& status) {
    std::vector<std::pair<size_t, size_t>> pairs;
    for (size_t i = 0; i < count_a; ++i)
        for (size_t j = symmetric ? i + 1 : 0; j < count_b; ++j)
            pairs.emplace_back(i, j);
    if (pairs.size() > cap) {
        std::mt19937_64 rng(seed);
        std::shuffle(pairs.begin(), pairs.end(), rng);
        pairs.resize(cap);
        std::sort(pairs.begin(), pairs.end());
        status = "sampled";
    }
    return pairs;
}

}  // namespace

std::vector<rep::CheckLine> verify_stratification(int n, int h, int64_t p,
                                                  const StratificationOptions& opt) {
    if (n % 2 == 0 && 2 * h == n) throw PiModularExcluded();
    std::vector<rep::CheckLine> lines;
    auto amb = lat::Ambient::make(n, p, opt.anchor_window + 1);
    auto verts =
        lat::enumerate_vertex_lattices(amb, {.anchor_window = opt.anchor_window});

    std::vector<int> type_of(verts.size());
    std::vector<size_t> z_anchors, y_anchors, worst_anchors;
    std::map<std::string, size_t> index_of;
    for (size_t i = 0; i < verts.size(); ++i) {
        type_of[i] = lat::lattice_type(verts[i]);
        index_of[verts[i].encode()] = i;
        if (type_of[i] > 2 * h) z_anchors.push_back(i);
        if (type_of[i] < 2 * h) y_anchors.push_back(i);
        if (type_of[i] == 2 * h) worst_anchors.push_back(i);
    }
    std::map<std::string, int64_t> base_params{
        {"n", n}, {"h", h}, {"p", p}, {"window", opt.anchor_window},
        {"vertex_lattices", int64_t(verts.size())}};

    // strata point sets per anchor and level
    auto strata_of = [&](size_t i, StratumKind kind, int m) {
        StratumRef ref{verts[i], h, kind};
        return rz_points_raw(ref, m);
    };
    std::map<std::tuple<size_t, int, int>, StratumSet> cache;
    auto get = [&](size_t i, StratumKind kind, int m) -> const StratumSet& {
        // type-2h anchors have one stratum shared by both kinds
        StratumKind k = type_of[i] == 2 * h ? StratumKind::Z : kind;
        auto key = std::make_tuple(i, int(k), m);
        auto it = cache.find(key);
        if (it == cache.end()) it = cache.emplace(key, strata_of(i, k, m)).first;
        return it->second;
    };

    uint64_t qm1 = uint64_t(p);

    for (int m = 1; m <= opt.m_max; ++m) {
        uint64_t qm = 1;
        for (int i = 0; i < m; ++i) qm *= qm1;
        auto params_m = base_params;
        params_m["m"] = m;

        // automatic-condition audit across every anchor
        {
            rep::CheckLine c;
            c.check_id = "rz.automatic_conditions";
            c.params = params_m;
            c.pass = true;
            uint64_t viol = 0;
            for (size_t i = 0; i < verts.size(); ++i) {
                if (type_of[i] >= 2 * h) viol += get(i, StratumKind::Z, m).stats.automatic_violations;
                if (type_of[i] < 2 * h) viol += get(i, StratumKind::Y, m).stats.automatic_violations;
            }
            c.params["violations"] = int64_t(viol);
            c.pass = viol == 0;
            lines.push_back(c);
        }

        // (2.iv) type-2h strata are projective spaces of dimension n-1
        {
            rep::CheckLine c;
            c.check_id = "thm5.2.2iv";
            c.params = params_m;
            c.params["anchors"] = int64_t(worst_anchors.size());
            c.pass = true;
            uint64_t expected = dl::projective_space_count(qm, n - 1);
            c.params["expected"] = int64_t(expected);
            for (size_t i : worst_anchors)
                if (get(i, StratumKind::Z, m).points.size() != expected) {
                    c.pass = false;
                    c.witness = "anchor " + std::to_string(i);
                }
            lines.push_back(c);
        }

        // (2.ii) distinct type-2h anchors give disjoint strata
        {
            rep::CheckLine c;
            c.check_id = "thm5.2.2ii";
            c.params = params_m;
            c.pass = true;
            auto pairs = pair_schedule(worst_anchors.size(), worst_anchors.size(), true,
                                       opt.pair_cap, opt.seed, c.status);
            c.params["pairs"] = int64_t(pairs.size());
            for (auto [a, b] : pairs) {
                size_t i = worst_anchors[a], j = worst_anchors[b];
                if (!set_intersection_pts(get(i, StratumKind::Z, m),
                                          get(j, StratumKind::Z, m))
                         .empty()) {
                    c.pass = false;
                    c.witness = "anchors " + std::to_string(i) + "," + std::to_string(j);
                }
            }
            lines.push_back(c);
        }

        // (1.i) containment reversal for Z-strata of type > 2h
        {
            rep::CheckLine c;
            c.check_id = "thm5.2.1i";
            c.params = params_m;
            c.pass = true;
            auto pairs = pair_schedule(z_anchors.size(), z_anchors.size(), false,
                                       opt.pair_cap, opt.seed + 1, c.status);
            c.params["pairs"] = int64_t(pairs.size());
            for (auto [a, b] : pairs) {
                size_t i = z_anchors[a], j = z_anchors[b];
                if (i == j) continue;
                bool latt = verts[j].contains(verts[i]);
                bool strat = subset_keys(get(j, StratumKind::Z, m),
                                         get(i, StratumKind::Z, m));
                if (latt != strat) {
                    c.pass = false;
                    c.witness = "anchors " + std::to_string(i) + "," + std::to_string(j);
                }
            }
            lines.push_back(c);
        }

        // (1.ii) containment for Y-strata of type < 2h
        {
            rep::CheckLine c;
            c.check_id = "thm5.2.1ii";
            c.params = params_m;
            c.pass = true;
            auto pairs = pair_schedule(y_anchors.size(), y_anchors.size(), false,
                                       opt.pair_cap, opt.seed + 2, c.status);
            c.params["pairs"] = int64_t(pairs.size());
            for (auto [a, b] : pairs) {
                size_t i = y_anchors[a], j = y_anchors[b];
                if (i == j) continue;
                bool latt = verts[j].contains(verts[i]);
                bool strat = subset_keys(get(i, StratumKind::Y, m),
                                         get(j, StratumKind::Y, m));
                if (latt != strat) {
                    c.pass = false;
                    c.witness = "anchors " + std::to_string(i) + "," + std::to_string(j);
                }
            }
            lines.push_back(c);
        }

        // (2.i) Z-side sum law and Y-side intersection law
        {
            rep::CheckLine c;
            c.check_id = "thm5.2.2i.Z";
            c.params = params_m;
            c.pass = true;
            auto pairs = pair_schedule(z_anchors.size(), z_anchors.size(), true,
                                       opt.pair_cap, opt.seed + 3, c.status);
            c.params["pairs"] = int64_t(pairs.size());
            for (auto [a, b] : pairs) {
                size_t i = z_anchors[a], j = z_anchors[b];
                Lattice S = verts[i].sum(verts[j]);
                bool vertex_ok = lat::is_vertex(S) && lat::lattice_type(S) >= 2 * h;
                auto inter = set_intersection_pts(get(i, StratumKind::Z, m),
                                                  get(j, StratumKind::Z, m));
                if (vertex_ok != !inter.empty()) {
                    c.pass = false;
                    c.witness = "nonempty mismatch at " + std::to_string(i) + "," +
                                std::to_string(j);
                    continue;
                }
                if (!vertex_ok) continue;
                auto it = index_of.find(S.encode());
                if (it == index_of.end()) {
                    c.pass = false;
                    c.witness = "sum lattice not enumerated";
                    continue;
                }
                const StratumSet& target = get(it->second, StratumKind::Z, m);
                bool equal = inter.size() == target.points.size();
                if (equal) {
                    auto tk = target.keys();
                    for (size_t kidx = 0; kidx < inter.size() && equal; ++kidx)
                        equal = inter[kidx]->encode() == tk[kidx];
                }
                if (!equal) {
                    c.pass = false;
                    c.witness = "intersection differs from the sum stratum";
                }
            }
            lines.push_back(c);
        }
        {
            rep::CheckLine c;
            c.check_id = "thm5.2.2i.Y";
            c.params = params_m;
            c.pass = true;
            auto pairs = pair_schedule(y_anchors.size(), y_anchors.size(), true,
                                       opt.pair_cap, opt.seed + 4, c.status);
            c.params["pairs"] = int64_t(pairs.size());
            for (auto [a, b] : pairs) {
                size_t i = y_anchors[a], j = y_anchors[b];
                Lattice I = verts[i].intersect(verts[j]);
                bool vertex_ok = lat::is_vertex(I) && lat::lattice_type(I) <= 2 * h;
                auto inter = set_intersection_pts(get(i, StratumKind::Y, m),
                                                  get(j, StratumKind::Y, m));
                if (vertex_ok != !inter.empty()) {
                    c.pass = false;
                    c.witness = "nonempty mismatch at " + std::to_string(i) + "," +
                                std::to_string(j);
                    continue;
                }
                if (!vertex_ok) continue;
                auto it = index_of.find(I.encode());
                if (it == index_of.end()) {
                    c.pass = false;
                    c.witness = "intersection lattice not enumerated";
                    continue;
                }
                const StratumSet& target = get(it->second, StratumKind::Y, m);
                bool equal = inter.size() == target.points.size();
                if (equal) {
                    auto tk = target.keys();
                    for (size_t kidx = 0; kidx < inter.size() && equal; ++kidx)
                        equal = inter[kidx]->encode() == tk[kidx];
                }
                if (!equal) {
                    c.pass = false;
                    c.witness = "intersection differs from the meet stratum";
                }
            }
            lines.push_back(c);
        }

        // (2.iii) intersections with a worst-point stratum
        {
            rep::CheckLine c;
            c.check_id = "thm5.2.2iii.Z";
            c.params = params_m;
            c.pass = true;
            auto pairs = pair_schedule(z_anchors.size(), worst_anchors.size(), false,
                                       opt.pair_cap, opt.seed + 5, c.status);
            c.params["pairs"] = int64_t(pairs.size());
            for (auto [a, b] : pairs) {
                size_t i = z_anchors[a], j = worst_anchors[b];
                auto inter = set_intersection_pts(get(i, StratumKind::Z, m),
                                                  get(j, StratumKind::Z, m));
                bool contained = verts[j].contains(verts[i]);
                if (contained != !inter.empty()) {
                    c.pass = false;
                    c.witness = "nonempty mismatch";
                    continue;
                }
                if (!contained) continue;
                int t = type_of[i] / 2;
                if (inter.size() != dl::projective_space_count(qm, h + t - 1)) {
                    c.pass = false;
                    c.witness = "count differs from P^{h+t-1}";
                }
            }
            lines.push_back(c);
        }
        {
            rep::CheckLine c;
            c.check_id = "thm5.2.2iii.Y";
            c.params = params_m;
            c.pass = true;
            auto pairs = pair_schedule(y_anchors.size(), worst_anchors.size(), false,
                                       opt.pair_cap, opt.seed + 6, c.status);
            c.params["pairs"] = int64_t(pairs.size());
            for (auto [a, b] : pairs) {
                size_t i = y_anchors[a], j = worst_anchors[b];
                auto inter = set_intersection_pts(get(i, StratumKind::Y, m),
                                                  get(j, StratumKind::Y, m));
                bool contained = verts[i].contains(verts[j]);
                if (contained != !inter.empty()) {
                    c.pass = false;
                    c.witness = "nonempty mismatch";
                    continue;
                }
                if (!contained) continue;
                int t = type_of[i] / 2;
                if (inter.size() != dl::projective_space_count(qm, h - t - 1)) {
                    c.pass = false;
                    c.witness = "count differs from P^{h-t-1}";
                }
            }
            lines.push_back(c);
        }

        // (1.iii) Z-Y intersections against the bracket model (Thm 6.13)
        {
            rep::CheckLine c;
            c.check_id = "thm5.2.1iii";
            c.params = params_m;
            c.pass = true;
            auto pairs = pair_schedule(z_anchors.size(), y_anchors.size(), false,
                                       opt.pair_cap, opt.seed + 7, c.status);
            c.params["pairs"] = int64_t(pairs.size());
            for (auto [a, b] : pairs) {
                size_t i = z_anchors[a], j = y_anchors[b];
                auto inter = set_intersection_pts(get(i, StratumKind::Z, m),
                                                  get(j, StratumKind::Y, m));
                bool contained = verts[j].contains(verts[i]);
                if (contained != !inter.empty()) {
                    c.pass = false;
                    c.witness = "nonempty mismatch at " + std::to_string(i) + "," +
                                std::to_string(j);
                    continue;
                }
                if (!contained) continue;
                auto spo = fsp::orthogonal_quotient(verts[j]);
                Subspace W = fsp::subspace_of_lattice(spo, verts[i].dual());
                auto bracket =
                    dl::enumerate_Rprime_bracket(spo, W, h, type_of[j] / 2, m);
                std::set<std::string> bracket_keys;
                for (const auto& P : bracket) bracket_keys.insert(P.encode());
                std::set<std::string> image;
                for (const auto* pt : inter) image.insert(f_Y(spo, *pt).encode());
                if (image != bracket_keys || inter.size() != bracket.size()) {
                    c.pass = false;
                    c.witness = "bracket model mismatch at " + std::to_string(i) + "," +
                                std::to_string(j);
                }
            }
            lines.push_back(c);
        }

        // Prop 5.1: extremal vertex lattices of sampled stratum points
        {
            rep::CheckLine c;
            c.check_id = "prop5.1";
            c.params = params_m;
            c.pass = true;
            uint64_t audited = 0;
            std::mt19937_64 rng(opt.seed + 8);
            for (size_t i = 0; i < verts.size() && c.pass; ++i) {
                const bool zside = type_of[i] >= 2 * h;
                const StratumSet& S =
                    get(i, zside ? StratumKind::Z : StratumKind::Y, m);
                size_t count = S.points.size();
                uint64_t take = std::min<uint64_t>(count, opt.point_cap);
                for (uint64_t k = 0; k < take && c.pass; ++k) {
                    size_t idx = take == count ? k : rng() % count;
                    if (take < count) c.status = "sampled";
                    const auto& pt = S.points[idx];
                    ++audited;
                    Lattice L1 = maximal_vertex_of(pt.M);
                    Lattice L2 = minimal_vertex_of(pt.M);
                    bool ok = lat::is_vertex(L1) && lat::is_vertex(L2) &&
                              pt.M.contains(L1.embed(m)) && L2.embed(m).contains(pt.M) &&
                              lat::lattice_type(L1) >= 2 * h &&
                              lat::lattice_type(L2) <= 2 * h;
                    // extremality against the enumerated vertex lattices
                    if (ok)
                        for (size_t v = 0; v < verts.size() && ok; ++v) {
                            if (pt.M.contains(verts[v].embed(m)) &&
                                !L1.contains(verts[v]))
                                ok = false;
                            if (verts[v].embed(m).contains(pt.M) &&
                                !verts[v].contains(L2))
                                ok = false;
                        }
                    if (!ok) {
                        c.pass = false;
                        c.witness = "anchor " + std::to_string(i) + " point " +
                                    std::to_string(idx);
                    }
                }
            }
            c.params["points_audited"] = int64_t(audited);
            lines.push_back(c);
        }
    }
    return lines;
}

}  // namespace btstrata::rz
