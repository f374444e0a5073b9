#ifndef BTSTRATA_RZPOINTS_HPP
#define BTSTRATA_RZPOINTS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "btstrata/dlstrata.hpp"
#include "btstrata/formspace.hpp"
#include "btstrata/lattices.hpp"
#include "btstrata/report.hpp"

namespace btstrata::rz {

enum class StratumKind { Z, Y };

// one kappa-point in the raw Dieudonne model
struct DieudonnePair {
    lat::Lattice M, Mprime;
    std::string encode() const { return M.encode() + "|" + Mprime.encode(); }
    bool operator==(const DieudonnePair& o) const {
        return M == o.M && Mprime == o.Mprime;
    }
    bool operator<(const DieudonnePair& o) const { return encode() < o.encode(); }
};

struct StratumRef {
    lat::Lattice anchor;  // rational vertex lattice
    int h = 0;
    StratumKind kind = StratumKind::Z;
};

struct RawCheckStats {
    uint64_t candidates = 0;
    uint64_t accepted = 0;
    // candidates passing every non-automatic condition but failing one the
    // paper derives as automatic; must stay zero
    uint64_t automatic_violations = 0;
};

// all raw conditions on a candidate pair, re-derived over the chain ring
struct ConditionBreakdown {
    bool index_2h = false;          // Pi M^sharp in M in M^sharp with index 2h
    bool tau_sandwich = false;      // Pi M in tau^{-1}(M) in Pi^{-1} M
    bool v_in_mprime = false;       // V M^sharp in M'
    bool mprime_window = false;     // M' in tau^{-1}(M^sharp) cap M^sharp
    bool mprime_length = false;     // length(M^sharp / M') = 1
    bool stratum_sandwich = false;  // the Prop 2.7 chain for the stratum kind
    bool all() const {
        return index_2h && tau_sandwich && v_in_mprime && mprime_window &&
               mprime_length && stratum_sandwich;
    }
    bool non_automatic() const {
        return index_2h && mprime_window && mprime_length && stratum_sandwich;
    }
};
ConditionBreakdown check_conditions(const StratumRef& ref, int m,
                                    const DieudonnePair& pt);

struct StratumSet {
    StratumRef ref;
    int m = 1;
    std::vector<DieudonnePair> points;  // sorted by encode
    RawCheckStats stats;
    std::vector<std::string> keys() const;
};

// enumerate candidates via the quotient dictionary, then re-check every
// condition independently over the truncated ring
StratumSet rz_points_raw(const StratumRef& ref, int m);

// quotient-model bijections (anchor type 2t != 2h)
dl::StratumPointQ f_Z(const fsp::FormSpacePtr& spV, const DieudonnePair& pt);
DieudonnePair f_Z_inverse(const fsp::FormSpacePtr& spV, const dl::StratumPointQ& qpt);
dl::StratumPointQ f_Y(const fsp::FormSpacePtr& spV, const DieudonnePair& pt);
DieudonnePair f_Y_inverse(const fsp::FormSpacePtr& spV, const dl::StratumPointQ& qpt);

// Lambda_1 = T_d(M^sharp)^sharp cap C and Lambda_2 = T_c(M) cap C via
// tau-stabilization and rational descent
lat::Lattice maximal_vertex_of(const lat::Lattice& M);
lat::Lattice minimal_vertex_of(const lat::Lattice& M);

// raw-vs-quotient equivalence at one anchor: set bijection + round trips +
// zero automatic violations
std::vector<rep::CheckLine> check_oracle_equivalence(const StratumRef& ref, int m);

struct StratificationOptions {
    int anchor_window = 1;      // vertex lattices confined to [pi^b L0, pi^{-b} L0]
    int m_max = 2;
    uint64_t pair_cap = 20000;  // pairwise checks beyond this are sampled
    uint64_t seed = 0;
    uint64_t point_cap = 2000;  // per-set cap for Prop 5.1 point audits
};
std::vector<rep::CheckLine> verify_stratification(int n, int h, int64_t p,
                                                  const StratificationOptions& opt);

}  // namespace btstrata::rz

#endif
