#ifndef BTSTRATA_DLSTRATA_HPP
#define BTSTRATA_DLSTRATA_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "btstrata/formspace.hpp"

namespace btstrata::dl {

using fsp::FormSpacePtr;
using fsp::Subspace;

// one kappa-point of a stratum in the quotient model
struct StratumPointQ {
    Subspace U, Uprime;
    std::string encode() const { return U.encode() + "|" + Uprime.encode(); }
    bool operator==(const StratumPointQ& o) const {
        return U == o.U && Uprime == o.Uprime;
    }
    bool operator<(const StratumPointQ& o) const { return encode() < o.encode(); }
};

uint64_t projective_space_count(uint64_t qm, int k);  // |P^k(F_{q^m})|, k >= 0

// S: isotropic (t-h)-subspaces U of the symplectic space with
// dim(U cap Phi(U)) >= t-h-1; 0 <= h < t
void for_each_S(const FormSpacePtr& spV, int h, int m,
                const std::function<bool(const Subspace&)>& fn);
std::vector<Subspace> enumerate_S(const FormSpacePtr& spV, int h, int m);

// S': pairs (U, U') with U' in U^sharp cap Phi(U^sharp) of dimension t+h-1
void for_each_Sprime(const FormSpacePtr& spV, int h, int m,
                     const std::function<bool(const StratumPointQ&)>& fn);
std::vector<StratumPointQ> enumerate_Sprime(const FormSpacePtr& spV, int h, int m,
                                            uint64_t max_count = 10000000);

// R: isotropic (h-t)-subspaces of the orthogonal space with
// dim(U cap Phi(U)) >= h-t-1; 0 <= t < h, h-t <= Witt index
void for_each_R(const FormSpacePtr& spV, int h, int t, int m,
                const std::function<bool(const Subspace&)>& fn);
std::vector<Subspace> enumerate_R(const FormSpacePtr& spV, int h, int t, int m);

// R': pairs (U, U') with U' in U cap Phi(U) of dimension h-t-1
void for_each_Rprime(const FormSpacePtr& spV, int h, int t, int m,
                     const std::function<bool(const StratumPointQ&)>& fn);
std::vector<StratumPointQ> enumerate_Rprime(const FormSpacePtr& spV, int h, int t,
                                            int m, uint64_t max_count = 10000000);

// R'_{[Lambda_1, Lambda_2]}: the sub-enumeration of R' with U' in U in W,
// W a rational (Phi-stable) subspace given at level 1
void for_each_Rprime_bracket(const FormSpacePtr& spV, const Subspace& W, int h,
                             int t, int m,
                             const std::function<bool(const StratumPointQ&)>& fn);
std::vector<StratumPointQ> enumerate_Rprime_bracket(const FormSpacePtr& spV,
                                                    const Subspace& W, int h, int t,
                                                    int m,
                                                    uint64_t max_count = 10000000);

// fiber law of the forgetful map (U, U') -> U, checked exhaustively
struct FiberReport {
    uint64_t fixed_points = 0;       // |T|, Phi-fixed U in S
    uint64_t moving_points = 0;      // |S \ T|
    uint64_t pair_count = 0;         // |S'| (resp. |R'|) by pair enumeration
    uint64_t expected_fiber = 0;     // |P^{t+h-1}| (resp. |P^{h-t-1}|)
    bool law_holds = false;          // every fiber matches the dichotomy
    bool counting_identity = false;  // pair_count == moving + fixed * expected
};
FiberReport check_S_fiber_law(const FormSpacePtr& spV, int h, int m);
FiberReport check_R_fiber_law(const FormSpacePtr& spV, int h, int t, int m);

// point-count growth as a dimension proxy
struct CountReport {
    std::string model;
    std::map<std::string, int64_t> params;
    std::map<int, uint64_t> counts;  // level m -> |X(F_{q^m})|
    int claimed_dim = -1;
    int estimated_dim = 0;
    bool leading_ok = false;
    bool estimated = false;
};
// estimated_dim = round(log_q(counts[m+1]/counts[m])) at the largest
// consecutive pair; leading_ok tests the ratio against [q^d/4, 4 q^d]
CountReport estimate_dimension(CountReport in, uint64_t q);

std::string count_report_to_json(const CountReport& r);

}  // namespace btstrata::dl

#endif
