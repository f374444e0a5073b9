#include "btstrata/dlstrata.hpp"

#include <cmath>

#include <json.hpp>

namespace btstrata::dl {

using fsp::FormKind;
using fsp::SubspaceConstraint;

uint64_t projective_space_count(uint64_t qm, int k) {
    uint64_t acc = 0, pw = 1;
    for (int i = 0; i <= k; ++i) {
        acc += pw;
        pw *= qm;
    }
    return acc;
}

namespace {

void check_sym_params(const FormSpacePtr& spV, int h) {
    if (spV->kind() != FormKind::symplectic)
        throw BadParameters("need a symplectic space");
    int t = spV->dim() / 2;
    if (h < 0 || h >= t) throw BadParameters("need 0 <= h < t");
}

void check_orth_params(const FormSpacePtr& spV, int h, int t) {
    if (spV->kind() != FormKind::orthogonal)
        throw BadParameters("need an orthogonal space");
    if (t < 0 || t >= h) throw BadParameters("need 0 <= t < h");
    if (h - t > spV->witt_index()) throw WittIndexTooSmall();
}

}  // namespace

void for_each_S(const FormSpacePtr& spV, int h, int m,
                const std::function<bool(const Subspace&)>& fn) {
    check_sym_params(spV, h);
    const int t = spV->dim() / 2;
    const int d = t - h;
    fsp::for_each_subspace(spV, m, d, SubspaceConstraint::isotropic,
                           [&](const Subspace& U) {
                               if (U.intersect(U.frobenius()).dim() < d - 1) return true;
                               return fn(U);
                           });
}

std::vector<Subspace> enumerate_S(const FormSpacePtr& spV, int h, int m) {
    std::vector<Subspace> out;
    for_each_S(spV, h, m, [&](const Subspace& U) {
        out.push_back(U);
        return true;
    });
    return out;
}

void for_each_Sprime(const FormSpacePtr& spV, int h, int m,
                     const std::function<bool(const StratumPointQ&)>& fn) {
    check_sym_params(spV, h);
    const int t = spV->dim() / 2;
    bool stop = false;
    for_each_S(spV, h, m, [&](const Subspace& U) {
        Subspace K = U.dual().intersect(U.dual().frobenius());
        fsp::for_each_subspace_of(K, t + h - 1, [&](const Subspace& Up) {
            if (!fn({U, Up})) stop = true;
            return !stop;
        });
        return !stop;
    });
}

std::vector<StratumPointQ> enumerate_Sprime(const FormSpacePtr& spV, int h, int m,
                                            uint64_t max_count) {
    std::vector<StratumPointQ> out;
    for_each_Sprime(spV, h, m, [&](const StratumPointQ& P) {
        if (out.size() >= max_count) throw BoundExceeded("S' enumeration");
        out.push_back(P);
        return true;
    });
    return out;
}

void for_each_R(const FormSpacePtr& spV, int h, int t, int m,
                const std::function<bool(const Subspace&)>& fn) {
    check_orth_params(spV, h, t);
    const int d = h - t;
    fsp::for_each_subspace(spV, m, d, SubspaceConstraint::isotropic,
                           [&](const Subspace& U) {
                               if (U.intersect(U.frobenius()).dim() < d - 1) return true;
                               return fn(U);
                           });
}

std::vector<Subspace> enumerate_R(const FormSpacePtr& spV, int h, int t, int m) {
    std::vector<Subspace> out;
    for_each_R(spV, h, t, m, [&](const Subspace& U) {
        out.push_back(U);
        return true;
    });
    return out;
}

void for_each_Rprime(const FormSpacePtr& spV, int h, int t, int m,
                     const std::function<bool(const StratumPointQ&)>& fn) {
    check_orth_params(spV, h, t);
    const int d = h - t;
    bool stop = false;
    for_each_R(spV, h, t, m, [&](const Subspace& U) {
        Subspace K = U.intersect(U.frobenius());
        fsp::for_each_subspace_of(K, d - 1, [&](const Subspace& Up) {
            if (!fn({U, Up})) stop = true;
            return !stop;
        });
        return !stop;
    });
}

std::vector<StratumPointQ> enumerate_Rprime(const FormSpacePtr& spV, int h, int t,
                                            int m, uint64_t max_count) {
    std::vector<StratumPointQ> out;
    for_each_Rprime(spV, h, t, m, [&](const StratumPointQ& P) {
        if (out.size() >= max_count) throw BoundExceeded("R' enumeration");
        out.push_back(P);
        return true;
    });
    return out;
}

void for_each_Rprime_bracket(const FormSpacePtr& spV, const Subspace& W, int h,
                             int t, int m,
                             const std::function<bool(const StratumPointQ&)>& fn) {
    if (!W.is_rational()) throw NotRational("W must be Phi-stable");
    Subspace Wm = W.level() == m ? W : W.at_level(m);
    for_each_Rprime(spV, h, t, m, [&](const StratumPointQ& P) {
        if (!Wm.contains(P.U)) return true;
        return fn(P);
    });
}

std::vector<StratumPointQ> enumerate_Rprime_bracket(const FormSpacePtr& spV,
                                                    const Subspace& W, int h, int t,
                                                    int m, uint64_t max_count) {
    std::vector<StratumPointQ> out;
    for_each_Rprime_bracket(spV, W, h, t, m, [&](const StratumPointQ& P) {
        if (out.size() >= max_count) throw BoundExceeded("R' bracket enumeration");
        out.push_back(P);
        return true;
    });
    return out;
}

namespace {

FiberReport fiber_law(const FormSpacePtr& spV, int d_u, int d_up, int m,
                      const std::function<Subspace(const Subspace&)>& frame) {
    // frame(U) carries U': U^sharp on the symplectic side, U itself on the
    // orthogonal side; partners live in frame(U) cap Phi(frame(U))
    FiberReport rep;
    const uint64_t qm = spV->field(m)->size();
    rep.expected_fiber = projective_space_count(qm, d_up);
    rep.law_holds = true;
    fsp::for_each_subspace(
        spV, m, d_u, SubspaceConstraint::isotropic, [&](const Subspace& U) {
            Subspace FU = U.frobenius();
            bool fixed = FU == U;
            bool in_locus = U.intersect(FU).dim() >= d_u - 1;
            Subspace Fr = frame(U);
            Subspace K = Fr.intersect(Fr.frobenius());
            uint64_t partners = 0;
            fsp::for_each_subspace_of(K, d_up, [&](const Subspace&) {
                ++partners;
                return true;
            });
            if (fixed) {
                if (partners != rep.expected_fiber) rep.law_holds = false;
                ++rep.fixed_points;
            } else if (in_locus) {
                if (partners != 1) rep.law_holds = false;
                ++rep.moving_points;
            } else {
                if (partners != 0) rep.law_holds = false;
            }
            rep.pair_count += partners;
            return true;
        });
    rep.counting_identity =
        rep.pair_count == rep.moving_points + rep.fixed_points * rep.expected_fiber;
    return rep;
}

}  // namespace

FiberReport check_S_fiber_law(const FormSpacePtr& spV, int h, int m) {
    check_sym_params(spV, h);
    const int t = spV->dim() / 2;
    return fiber_law(spV, t - h, t + h - 1, m,
                     [](const Subspace& U) { return U.dual(); });
}

FiberReport check_R_fiber_law(const FormSpacePtr& spV, int h, int t, int m) {
    check_orth_params(spV, h, t);
    return fiber_law(spV, h - t, h - t - 1, m, [](const Subspace& U) { return U; });
}

CountReport estimate_dimension(CountReport in, uint64_t q) {
    int best_m = -1;
    for (const auto& [mm, c] : in.counts)
        if (in.counts.count(mm + 1) && c > 0 && in.counts.at(mm + 1) > 0) best_m = mm;
    if (best_m < 0) throw InsufficientData("need nonzero counts at consecutive levels");
    double ratio = double(in.counts.at(best_m + 1)) / double(in.counts.at(best_m));
    in.estimated_dim = int(std::llround(std::log(ratio) / std::log(double(q))));
    in.estimated = true;
    if (in.claimed_dim >= 0) {
        double qd = std::pow(double(q), in.claimed_dim);
        in.leading_ok = ratio >= qd / 4.0 && ratio <= 4.0 * qd;
    }
    return in;
}

std::string count_report_to_json(const CountReport& r) {
    nlohmann::json counts(nlohmann::json::value_t::object);
    for (const auto& [m, c] : r.counts) counts[std::to_string(m)] = c;
    nlohmann::json params(nlohmann::json::value_t::object);
    for (const auto& [k, v] : r.params) params[k] = v;
    nlohmann::json j{{"model", r.model},
                     {"params", params},
                     {"counts", counts},
                     {"estimated_dim", r.estimated_dim},
                     {"claimed_dim", r.claimed_dim},
                     {"leading_ok", r.leading_ok}};
    return j.dump();
}

}  // namespace btstrata::dl
